//! Catalog of symmetric pairs and their Cartan decompositions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{build_algebra, AlgebraBasis};
use crate::linalg::{self, CMatrix};

/// Catalog tag of a compact symmetric space.
///
/// `Grass(n)` is the real Grassmannian `SO(n+2)/SO(2)×SO(n)`, the rank-two
/// pair with a `B₂` root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceId {
    Sphere(usize),
    Rp(usize),
    Cp(usize),
    Hp(usize),
    SuSo(usize),
    Grass(usize),
}

impl SpaceId {
    pub fn family(&self) -> &'static str {
        match self {
            SpaceId::Sphere(_) => "sphere",
            SpaceId::Rp(_) => "rp",
            SpaceId::Cp(_) => "cp",
            SpaceId::Hp(_) => "hp",
            SpaceId::SuSo(_) => "su_so",
            SpaceId::Grass(_) => "grass",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            SpaceId::Sphere(n) | SpaceId::Rp(n) | SpaceId::Cp(n) | SpaceId::Hp(n) | SpaceId::SuSo(n) | SpaceId::Grass(n) => n,
        }
    }

    pub fn min_n(&self) -> usize {
        match self {
            SpaceId::Sphere(_) | SpaceId::Rp(_) | SpaceId::Cp(_) => 2,
            SpaceId::Hp(_) => 1,
            SpaceId::SuSo(_) | SpaceId::Grass(_) => 3,
        }
    }

    /// Algebra catalog id and size parameter.
    pub fn algebra(&self) -> (&'static str, usize) {
        match *self {
            SpaceId::Sphere(n) | SpaceId::Rp(n) => ("so", n + 1),
            SpaceId::Cp(n) => ("su", n + 1),
            SpaceId::Hp(n) => ("sp", n + 1),
            SpaceId::SuSo(n) => ("su", n),
            SpaceId::Grass(n) => ("so", n + 2),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            SpaceId::Sphere(_) | SpaceId::Rp(_) | SpaceId::Cp(_) | SpaceId::Hp(_) => 1,
            SpaceId::SuSo(n) => n - 1,
            SpaceId::Grass(n) => n.min(2),
        }
    }

    /// Trace coefficient used by the catalog. Rank-one spaces are normalized
    /// so that the unit vector `X` of `𝔞` has `ε_R(X) = 1`.
    pub fn default_trace_coefficient(&self) -> f64 {
        match self {
            SpaceId::Cp(_) => 2.0,
            SpaceId::Hp(_) => 1.0,
            _ => 0.5,
        }
    }

    /// Expected `(m_ε, m_{ε/2})` for rank-one spaces.
    pub fn rank_one_multiplicities(&self) -> Option<(usize, usize)> {
        match *self {
            SpaceId::Sphere(n) | SpaceId::Rp(n) => Some((n - 1, 0)),
            SpaceId::Cp(n) => Some((1, 2 * n - 2)),
            SpaceId::Hp(n) => Some((3, 4 * n - 4)),
            _ => None,
        }
    }

    pub fn quotient(&self) -> String {
        match *self {
            SpaceId::Sphere(n) => format!("SO({})/SO({})", n + 1, n),
            SpaceId::Rp(n) => format!("SO({})/O({})", n + 1, n),
            SpaceId::Cp(n) => format!("SU({})/S(U(1)xU({}))", n + 1, n),
            SpaceId::Hp(n) => format!("Sp({})/Sp(1)xSp({})", n + 1, n),
            SpaceId::SuSo(n) => format!("SU({n})/SO({n})"),
            SpaceId::Grass(n) => format!("SO({})/SO(2)xSO({})", n + 2, n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n() < self.min_n() {
            return Err(Error::SpaceOutOfRange {
                family: self.family().to_string(),
                n: self.n(),
                min: self.min_n(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family(), self.n())
    }
}

impl FromStr for SpaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let families: [(&str, fn(usize) -> SpaceId); 6] = [
            ("su_so", SpaceId::SuSo),
            ("sphere", SpaceId::Sphere),
            ("grass", SpaceId::Grass),
            ("rp", SpaceId::Rp),
            ("cp", SpaceId::Cp),
            ("hp", SpaceId::Hp),
        ];
        for (prefix, ctor) in families {
            if let Some(rest) = s.strip_prefix(prefix) {
                let n: usize = rest.parse().map_err(|_| Error::UnknownSpace(s.to_string()))?;
                let id = ctor(n);
                id.validate()?;
                return Ok(id);
            }
        }
        Err(Error::UnknownSpace(s.to_string()))
    }
}

/// Every space exercised by the verification suite.
pub fn catalog() -> Vec<SpaceId> {
    let mut out = Vec::new();
    out.extend((2..=6).map(SpaceId::Sphere));
    out.extend((2..=6).map(SpaceId::Rp));
    out.extend((2..=4).map(SpaceId::Cp));
    out.extend((1..=3).map(SpaceId::Hp));
    out.push(SpaceId::SuSo(3));
    out.push(SpaceId::SuSo(4));
    out.push(SpaceId::Grass(3));
    out
}

/// Involution of `𝔤` given by a recipe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Involution {
    /// `X ↦ S X S` with `S` diagonal with entries `±1`.
    SignConjugation(Vec<f64>),
    /// `X ↦ conj(X)`.
    EntrywiseConjugation,
}

impl Involution {
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        match self {
            Involution::SignConjugation(s) => {
                let n = s.len();
                let mut out = x.clone();
                for i in 0..n {
                    for j in 0..n {
                        let f = s[i] * s[j];
                        out.re[(i, j)] *= f;
                        out.im[(i, j)] *= f;
                    }
                }
                out
            }
            Involution::EntrywiseConjugation => x.conj(),
        }
    }
}

/// A symmetric pair `(𝔤, σ)` with orthonormal bases of `𝔨` (+1) and `𝔪` (−1).
#[derive(Clone, Debug)]
pub struct SymmetricPair {
    pub space: SpaceId,
    pub algebra: Arc<AlgebraBasis>,
    pub involution: Involution,
    pub k_basis: Vec<DVector<f64>>,
    pub m_basis: Vec<DVector<f64>>,
    /// Catalog seed elements of `𝔪` for the Cartan subspace search.
    pub seeds: Vec<DVector<f64>>,
}

fn sign_vector(len: usize, negatives: &[usize]) -> Vec<f64> {
    (0..len).map(|i| if negatives.contains(&i) { -1.0 } else { 1.0 }).collect()
}

fn combo(alg: &AlgebraBasis, terms: &[(&str, f64)]) -> DVector<f64> {
    let mut v = DVector::zeros(alg.dim());
    for (label, c) in terms {
        let i = alg.index_of(label).unwrap_or_else(|| panic!("missing basis label {label}"));
        v[i] += c;
    }
    v
}

/// Builds the catalog pair with the catalog trace coefficient.
pub fn build_pair(space: SpaceId) -> Result<SymmetricPair> {
    build_pair_scaled(space, space.default_trace_coefficient())
}

/// Builds the catalog pair with an explicit trace coefficient.
pub fn build_pair_scaled(space: SpaceId, trace_coefficient: f64) -> Result<SymmetricPair> {
    space.validate()?;
    let (name, size) = space.algebra();
    let algebra = build_algebra(name, size, trace_coefficient)?;
    let (involution, seeds) = match space {
        SpaceId::Sphere(_) | SpaceId::Rp(_) | SpaceId::Cp(_) => (
            Involution::SignConjugation(sign_vector(size, &[0])),
            vec![combo(&algebra, &[("B12", 1.0)])],
        ),
        SpaceId::Hp(_) => (
            Involution::SignConjugation(sign_vector(2 * size, &[0, size])),
            vec![combo(&algebra, &[("U12", 1.0)])],
        ),
        SpaceId::Grass(_) => (
            Involution::SignConjugation(sign_vector(size, &[0, 1])),
            vec![combo(&algebra, &[("B13", 1.0)]), combo(&algebra, &[("B24", 1.0)])],
        ),
        SpaceId::SuSo(n) => {
            let mut seeds = vec![
                combo(&algebra, &[("A12", 1.0), ("A23", -1.0)]),
                combo(&algebra, &[("A12", 1.0), ("A23", 1.0)]),
            ];
            for j in 3..n {
                seeds.push(combo(&algebra, &[(&format!("A{}{}", j, j + 1), 1.0)]));
            }
            (Involution::EntrywiseConjugation, seeds)
        }
    };
    pair_from_involution(space, algebra, involution, seeds)
}

/// Splits `𝔤` into the ±1 eigenspaces of the involution.
pub fn pair_from_involution(
    space: SpaceId,
    algebra: AlgebraBasis,
    involution: Involution,
    seeds: Vec<DVector<f64>>,
) -> Result<SymmetricPair> {
    let d = algebra.dim();
    let sigma = involution_matrix(&algebra, &involution)?;
    let id = DMatrix::<f64>::identity(d, d);
    let plus = (&id + &sigma) * 0.5;
    let minus = (&id - &sigma) * 0.5;
    let cols = |p: &DMatrix<f64>| -> Vec<DVector<f64>> { (0..d).map(|i| p.column(i).into_owned()).collect() };
    let k_basis = linalg::orthonormalize(&cols(&plus), &algebra.gram, 1e-8);
    let m_basis = linalg::orthonormalize(&cols(&minus), &algebra.gram, 1e-8);
    if k_basis.len() + m_basis.len() != d {
        return Err(Error::IncompleteDecomposition(format!(
            "dim k + dim m = {} + {} != {d}",
            k_basis.len(),
            m_basis.len()
        )));
    }
    Ok(SymmetricPair {
        space,
        algebra: Arc::new(algebra),
        involution,
        k_basis,
        m_basis,
        seeds,
    })
}

/// Matrix of the involution on coefficient vectors.
pub fn involution_matrix(algebra: &AlgebraBasis, involution: &Involution) -> Result<DMatrix<f64>> {
    let d = algebra.dim();
    let mut sigma = DMatrix::zeros(d, d);
    for i in 0..d {
        let img = involution.apply(&algebra.basis[i]);
        sigma.set_column(i, &algebra.expand(&img)?);
    }
    Ok(sigma)
}

impl SymmetricPair {
    pub fn algebra(&self) -> &AlgebraBasis {
        &self.algebra
    }

    /// Orthogonal projection onto `𝔪`.
    pub fn project_m(&self, x: &DVector<f64>) -> DVector<f64> {
        project(&self.algebra, &self.m_basis, x)
    }

    /// Orthogonal projection onto `𝔨`.
    pub fn project_k(&self, x: &DVector<f64>) -> DVector<f64> {
        project(&self.algebra, &self.k_basis, x)
    }

    /// `max ‖σ²(e_i) − e_i‖`.
    pub fn involution_residual(&self) -> Result<f64> {
        let s = involution_matrix(&self.algebra, &self.involution)?;
        let d = self.algebra.dim();
        Ok(linalg::max_abs(&(&s * &s - DMatrix::<f64>::identity(d, d))))
    }

    /// Largest bracket component escaping the inclusions
    /// `[𝔨,𝔨] ⊆ 𝔨`, `[𝔨,𝔪] ⊆ 𝔪`, `[𝔪,𝔪] ⊆ 𝔨`.
    pub fn bracket_inclusion_residual(&self) -> f64 {
        let alg = &self.algebra;
        let mut worst = 0.0f64;
        for a in &self.k_basis {
            for b in &self.k_basis {
                worst = worst.max(alg.norm(&self.project_m(&alg.bracket_coeffs(a, b))));
            }
            for b in &self.m_basis {
                worst = worst.max(alg.norm(&self.project_k(&alg.bracket_coeffs(a, b))));
            }
        }
        for a in &self.m_basis {
            for b in &self.m_basis {
                worst = worst.max(alg.norm(&self.project_m(&alg.bracket_coeffs(a, b))));
            }
        }
        worst
    }

    /// Largest `|⟨k_a, m_b⟩|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.k_basis {
            for b in &self.m_basis {
                worst = worst.max(self.algebra.inner(a, b).abs());
            }
        }
        worst
    }
}

/// Orthogonal projection onto the span of an orthonormal list.
pub fn project(alg: &AlgebraBasis, onb: &[DVector<f64>], x: &DVector<f64>) -> DVector<f64> {
    let gx = &alg.gram * x;
    let mut out = DVector::zeros(x.len());
    for e in onb {
        out += e * e.dot(&gx);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_ids_round_trip() {
        for id in catalog() {
            let parsed: SpaceId = id.to_string().parse().unwrap();
            assert_eq!(parsed, id);
        }
        assert!(matches!("torus3".parse::<SpaceId>(), Err(Error::UnknownSpace(_))));
        assert!(matches!("cp1".parse::<SpaceId>(), Err(Error::SpaceOutOfRange { .. })));
    }

    #[test]
    fn su_so3_splitting() {
        let p = build_pair(SpaceId::SuSo(3)).unwrap();
        assert_eq!(p.m_basis.len(), 5);
        assert_eq!(p.k_basis.len(), 3);
        let alg = p.algebra();
        for label in ["A12", "A23", "C12", "C13", "C23"] {
            let e = combo(alg, &[(label, 1.0)]);
            assert!((p.project_m(&e) - &e).amax() < 1e-12, "{label}");
        }
        assert!(p.involution_residual().unwrap() < 1e-14);
        assert!(p.bracket_inclusion_residual() < 1e-12);
    }

    #[test]
    fn sphere4_has_four_dimensional_m() {
        let p = build_pair(SpaceId::Sphere(4)).unwrap();
        assert_eq!(p.m_basis.len(), 4);
    }
}
