//! Restricted root decomposition `𝔪 = 𝔞 ⊕ Σ 𝔪_λ`, `𝔨 = 𝔥 ⊕ Σ 𝔨_λ`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::lie_core::AlgebraBasis;
use crate::linalg;
use crate::symspace::chamber;
use crate::symspace::pair::SymmetricPair;

/// Relative gap below which two eigenvalues of `−ad²_{w0}` belong together.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Relative gaps between `CLUSTER_TOL` and this value are ambiguous.
const AMBIGUOUS_GAP: f64 = 1e-3;
/// Number of fresh reference points tried before giving up.
pub const ROOT_ATTEMPTS: usize = 5;

/// One positive restricted root with its paired orthonormal bases.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveRoot {
    pub label: String,
    /// Values `λ_R(X_j)`.
    pub covector: DVector<f64>,
    pub multiplicity: usize,
    /// `ξ^s_λ` as algebra coefficient vectors.
    pub m_basis: Vec<DVector<f64>>,
    /// `ζ^s_λ` as algebra coefficient vectors.
    pub k_basis: Vec<DVector<f64>>,
}

impl PositiveRoot {
    /// `λ_R(w)` for `w` in `𝔞`-coordinates.
    pub fn value(&self, w: &DVector<f64>) -> f64 {
        self.covector.dot(w)
    }
}

/// Cartan subspace, positive roots and centralizer of a symmetric pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedRootData {
    /// Orthonormal `X_1..X_r` as algebra coefficient vectors.
    pub cartan_basis: Vec<DVector<f64>>,
    /// Positive roots, sorted by decreasing value on the chamber witness.
    pub roots: Vec<PositiveRoot>,
    /// Orthonormal basis of `𝔥`.
    pub centralizer_basis: Vec<DVector<f64>>,
    /// Regular point (in `𝔞`-coordinates) used to fix the signs of the roots.
    pub reference: DVector<f64>,
    /// Pairs `(i, j)` with `λ_i = 2λ_j`.
    pub doubled_pairs: Vec<(usize, usize)>,
}

struct RawRoot {
    covector: DVector<f64>,
    m_basis: Vec<DVector<f64>>,
    k_basis: Vec<DVector<f64>>,
}

fn combine(basis: &[DVector<f64>], coords: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(basis[0].len());
    for (b, c) in basis.iter().zip(coords.iter()) {
        out += b * *c;
    }
    out
}

fn try_decompose(pair: &SymmetricPair, a_basis: &[DVector<f64>], coeffs: &DVector<f64>) -> Result<Vec<RawRoot>> {
    let alg = pair.algebra();
    let r = a_basis.len();
    let dm = pair.m_basis.len();
    let w0 = combine(a_basis, coeffs);
    // −ad²_{w0} on 𝔪 is ⟨[w0,·],[w0,·]⟩ by ad-invariance.
    let mut images = DMatrix::zeros(alg.dim(), dm);
    for (b, m) in pair.m_basis.iter().enumerate() {
        images.set_column(b, &alg.bracket_coeffs(&w0, m));
    }
    let op = images.transpose() * &alg.gram * &images;
    let op = (&op + op.transpose()) * 0.5;
    let (vals, vecs) = linalg::sorted_eigen(op);
    let top = vals.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let zero_count = vals.iter().filter(|&&v| v <= 1e-9 * top).count();
    if zero_count != r {
        return Err(Error::ClusterAmbiguity { attempts: 1 });
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in zero_count..dm {
        match clusters.last_mut() {
            Some(c) => {
                let prev = vals[*c.last().unwrap()];
                let gap = (vals[i] - prev) / vals[i];
                if gap <= CLUSTER_TOL {
                    c.push(i);
                } else if gap < AMBIGUOUS_GAP {
                    return Err(Error::ClusterAmbiguity { attempts: 1 });
                } else {
                    clusters.push(vec![i]);
                }
            }
            None => clusters.push(vec![i]),
        }
    }
    let mut out = Vec::new();
    for c in clusters {
        let mu = c.iter().map(|&i| vals[i]).sum::<f64>() / c.len() as f64;
        let l0 = mu.sqrt();
        let raw: Vec<DVector<f64>> = c.iter().map(|&i| combine(&pair.m_basis, &vecs[i])).collect();
        let xis = linalg::orthonormalize(&raw, &alg.gram, 1e-8);
        if xis.len() != c.len() {
            return Err(Error::ClusterAmbiguity { attempts: 1 });
        }
        let zetas: Vec<DVector<f64>> = xis.iter().map(|x| alg.bracket_coeffs(&w0, x) * (-1.0 / l0)).collect();
        let covs: Vec<DVector<f64>> = xis
            .iter()
            .zip(&zetas)
            .map(|(x, z)| DVector::from_fn(r, |j, _| -alg.inner(&alg.bracket_coeffs(&a_basis[j], x), z)))
            .collect();
        let spread = covs.iter().map(|cv| (cv - &covs[0]).amax()).fold(0.0, f64::max);
        if spread > 1e-8 {
            return Err(Error::CovectorInconsistent { spread });
        }
        out.push(RawRoot {
            covector: covs[0].clone(),
            m_basis: xis,
            k_basis: zetas,
        });
    }
    Ok(out)
}

/// Diagonalizes `−ad²_{w0}` on `𝔪` for a seeded generic `w0`, clusters the
/// spectrum into roots, pairs `ξ`/`ζ` bases and fixes signs on a reference
/// point of the chosen chamber.
///
/// In rank two the Cartan basis is rotated, if needed, so that `X_1` spans a
/// wall of the chamber and the chamber is `{0 < θ < θ_max}`.
pub fn restricted_root_decomposition<R: Rng>(
    pair: &SymmetricPair,
    a_basis: &[DVector<f64>],
    rng: &mut R,
) -> Result<RestrictedRootData> {
    let r = a_basis.len();
    if r == 0 {
        return Err(Error::IncompleteDecomposition("empty Cartan subspace".into()));
    }
    let mut last_err = None;
    for _ in 0..ROOT_ATTEMPTS {
        let mut coeffs = DVector::from_fn(r, |_, _| rng.random_range(-1.0..1.0));
        if coeffs.norm() < 1e-3 {
            coeffs[0] = 1.0;
        }
        match try_decompose(pair, a_basis, &coeffs) {
            Ok(raw) => return finalize(pair, a_basis.to_vec(), raw, coeffs),
            Err(e @ (Error::ClusterAmbiguity { .. } | Error::CovectorInconsistent { .. })) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(match last_err {
        Some(Error::CovectorInconsistent { spread }) => Error::CovectorInconsistent { spread },
        _ => Error::ClusterAmbiguity { attempts: ROOT_ATTEMPTS },
    })
}

fn finalize(
    pair: &SymmetricPair,
    mut a_basis: Vec<DVector<f64>>,
    mut raw: Vec<RawRoot>,
    w0: DVector<f64>,
) -> Result<RestrictedRootData> {
    let alg = pair.algebra();
    let r = a_basis.len();
    let reference = match r {
        1 => DVector::from_element(1, 1.0),
        2 => {
            let on_wall = raw.iter().any(|rt| rt.covector[0].abs() <= 1e-9 * rt.covector.norm());
            if !on_wall {
                let c = &raw[0].covector;
                let d = DVector::from_vec(vec![-c[1], c[0]]) / c.norm();
                let x1 = &a_basis[0] * d[0] + &a_basis[1] * d[1];
                let x2 = &a_basis[0] * (-d[1]) + &a_basis[1] * d[0];
                a_basis = vec![x1, x2];
                for rt in raw.iter_mut() {
                    let cv = rt.covector.clone();
                    rt.covector = DVector::from_vec(vec![cv[0] * d[0] + cv[1] * d[1], -cv[0] * d[1] + cv[1] * d[0]]);
                }
            }
            let delta = 1e-3f64;
            DVector::from_vec(vec![delta.cos(), delta.sin()])
        }
        _ => w0,
    };
    for rt in raw.iter_mut() {
        let v = rt.covector.dot(&reference);
        if v.abs() <= 1e-12 * rt.covector.norm() {
            return Err(Error::EmptyChamber);
        }
        if v < 0.0 {
            rt.covector = -rt.covector.clone();
            for z in rt.k_basis.iter_mut() {
                *z = -z.clone();
            }
        }
    }
    let covectors: Vec<DVector<f64>> = raw.iter().map(|rt| rt.covector.clone()).collect();
    let witness = chamber::witness_from_covectors(&covectors)?;
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| {
        let va = covectors[a].dot(&witness);
        let vb = covectors[b].dot(&witness);
        if (va - vb).abs() > 1e-9 {
            vb.partial_cmp(&va).unwrap()
        } else {
            covectors[b]
                .iter()
                .zip(covectors[a].iter())
                .map(|(x, y)| x.partial_cmp(y).unwrap())
                .find(|o| *o != std::cmp::Ordering::Equal)
                .unwrap_or(std::cmp::Ordering::Equal)
        }
    });
    let mut raw_opt: Vec<Option<RawRoot>> = raw.into_iter().map(Some).collect();
    let sorted: Vec<RawRoot> = order.iter().map(|&i| raw_opt[i].take().unwrap()).collect();

    let mut doubled_pairs = Vec::new();
    for i in 0..sorted.len() {
        for j in 0..sorted.len() {
            if i != j {
                let diff = &sorted[i].covector - &sorted[j].covector * 2.0;
                if diff.amax() <= 1e-9 * sorted[i].covector.amax() {
                    doubled_pairs.push((i, j));
                }
            }
        }
    }
    let labels: Vec<String> = if r == 1 {
        let mut l = vec![String::new(); sorted.len()];
        match (sorted.len(), doubled_pairs.first()) {
            (1, _) => l[0] = "eps".into(),
            (2, Some(&(big, small))) => {
                l[big] = "eps".into();
                l[small] = "eps/2".into();
            }
            _ => {
                for (i, s) in l.iter_mut().enumerate() {
                    *s = format!("l{}", i + 1);
                }
            }
        }
        l
    } else {
        (0..sorted.len()).map(|i| format!("l{}", i + 1)).collect()
    };
    let roots: Vec<PositiveRoot> = sorted
        .into_iter()
        .zip(labels)
        .map(|(rt, label)| PositiveRoot {
            label,
            multiplicity: rt.m_basis.len(),
            covector: rt.covector,
            m_basis: rt.m_basis,
            k_basis: rt.k_basis,
        })
        .collect();

    // 𝔥: joint nullspace of ad_{X_j} on 𝔨.
    let d = alg.dim();
    let dk = pair.k_basis.len();
    let mut stacked = DMatrix::zeros(d * r, dk);
    for (j, x) in a_basis.iter().enumerate() {
        for (b, k) in pair.k_basis.iter().enumerate() {
            let br = alg.bracket_coeffs(x, k);
            for i in 0..d {
                stacked[(j * d + i, b)] = br[i];
            }
        }
    }
    let centralizer_basis: Vec<DVector<f64>> = if dk == 0 {
        Vec::new()
    } else {
        let raw_h: Vec<DVector<f64>> = linalg::nullspace(&stacked, 1e-10)
            .into_iter()
            .map(|c| combine(&pair.k_basis, &c))
            .collect();
        linalg::orthonormalize(&raw_h, &alg.gram, 1e-8)
    };

    let data = RestrictedRootData {
        cartan_basis: a_basis,
        roots,
        centralizer_basis,
        reference,
        doubled_pairs,
    };
    let total: usize = data.roots.iter().map(|r| r.multiplicity).sum();
    if r + total != pair.m_basis.len() {
        return Err(Error::IncompleteDecomposition(format!("dim m = {} but r + sum m = {}", pair.m_basis.len(), r + total)));
    }
    if data.centralizer_basis.len() + total != dk {
        return Err(Error::IncompleteDecomposition(format!(
            "dim k = {dk} but dim h + sum m = {}",
            data.centralizer_basis.len() + total
        )));
    }
    Ok(data)
}

impl RestrictedRootData {
    pub fn rank(&self) -> usize {
        self.cartan_basis.len()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// `dim 𝔪̄ = r + 2·Σ m_λ`.
    pub fn mbar_dim(&self) -> usize {
        self.rank() + 2 * self.roots.iter().map(|r| r.multiplicity).sum::<usize>()
    }

    /// Algebra element `Σ w_j X_j`.
    pub fn point(&self, w: &DVector<f64>) -> DVector<f64> {
        combine(&self.cartan_basis, w)
    }

    /// `λ_R(w)` for every positive root.
    pub fn values(&self, w: &DVector<f64>) -> Vec<f64> {
        self.roots.iter().map(|r| r.value(w)).collect()
    }

    /// Labels of the ordered `𝔪̄` basis: `𝔞`, then per root `𝔪_λ` before `𝔨_λ`.
    pub fn mbar_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.rank()).map(|j| format!("X{j}")).collect();
        for root in &self.roots {
            for s in 1..=root.multiplicity {
                out.push(format!("xi[{}]{}", root.label, s));
            }
            for s in 1..=root.multiplicity {
                out.push(format!("zeta[{}]{}", root.label, s));
            }
        }
        out
    }

    /// Multiplicities as `(m_ε, m_{ε/2})` in rank one.
    pub fn rank_one_multiplicities(&self) -> Option<(usize, usize)> {
        if self.rank() != 1 {
            return None;
        }
        let mut big = 0;
        let mut half = 0;
        for root in &self.roots {
            match root.label.as_str() {
                "eps" => big = root.multiplicity,
                "eps/2" => half = root.multiplicity,
                _ => return None,
            }
        }
        Some((big, half))
    }

    /// Max residual of `[X_j,ξ] + λ_R(X_j)ζ` and `[X_j,ζ] − λ_R(X_j)ξ`.
    pub fn pairing_residual(&self, alg: &AlgebraBasis) -> f64 {
        let mut worst = 0.0f64;
        for (j, x) in self.cartan_basis.iter().enumerate() {
            for root in &self.roots {
                let l = root.covector[j];
                for (xi, zeta) in root.m_basis.iter().zip(&root.k_basis) {
                    let a = alg.bracket_coeffs(x, xi) + zeta * l;
                    let b = alg.bracket_coeffs(x, zeta) - xi * l;
                    worst = worst.max(alg.norm(&a)).max(alg.norm(&b));
                }
            }
        }
        worst
    }

    /// Max deviation of the `ζ` bases from orthonormality.
    pub fn zeta_orthonormality_residual(&self, alg: &AlgebraBasis) -> f64 {
        let mut worst = 0.0f64;
        for root in &self.roots {
            for (a, za) in root.k_basis.iter().enumerate() {
                for (b, zb) in root.k_basis.iter().enumerate() {
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((alg.inner(za, zb) - target).abs());
                }
            }
        }
        worst
    }

    /// Max `|⟨·,·⟩|` between different root spaces, on both sides, and
    /// between the root spaces and `𝔞` or `𝔥`.
    pub fn root_orthogonality_residual(&self, alg: &AlgebraBasis) -> f64 {
        let mut worst = 0.0f64;
        for (i, ri) in self.roots.iter().enumerate() {
            for rj in self.roots.iter().skip(i + 1) {
                for (a, b) in ri.m_basis.iter().flat_map(|a| rj.m_basis.iter().map(move |b| (a, b))) {
                    worst = worst.max(alg.inner(a, b).abs());
                }
                for (a, b) in ri.k_basis.iter().flat_map(|a| rj.k_basis.iter().map(move |b| (a, b))) {
                    worst = worst.max(alg.inner(a, b).abs());
                }
            }
            for xi in &ri.m_basis {
                for x in &self.cartan_basis {
                    worst = worst.max(alg.inner(xi, x).abs());
                }
            }
            for z in &ri.k_basis {
                for h in &self.centralizer_basis {
                    worst = worst.max(alg.inner(z, h).abs());
                }
            }
        }
        worst
    }

    /// Max norm of `[h, X_j]` over the centralizer basis.
    pub fn centralizer_residual(&self, alg: &AlgebraBasis) -> f64 {
        let mut worst = 0.0f64;
        for h in &self.centralizer_basis {
            for x in &self.cartan_basis {
                worst = worst.max(alg.norm(&alg.bracket_coeffs(h, x)));
            }
        }
        worst
    }
}
