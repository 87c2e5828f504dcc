//! Maximal abelian subspaces of `𝔪`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::linalg;
use crate::symspace::pair::SymmetricPair;

/// Default number of attempts before giving up on a certificate.
pub const CARTAN_ATTEMPTS: usize = 5;

/// Orthonormal basis (coefficient vectors) of the centralizer of `gens` in
/// `𝔪`, i.e. the nullspace of `v ↦ ([x, v])_{x ∈ gens}` on `𝔪`.
pub fn centralizer_in_m(pair: &SymmetricPair, gens: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let alg = pair.algebra();
    let d = alg.dim();
    let dm = pair.m_basis.len();
    let mut stacked = DMatrix::zeros(d * gens.len(), dm);
    for (g, x) in gens.iter().enumerate() {
        for (b, m) in pair.m_basis.iter().enumerate() {
            let br = alg.bracket_coeffs(x, m);
            for k in 0..d {
                stacked[(g * d + k, b)] = br[k];
            }
        }
    }
    linalg::nullspace(&stacked, 1e-10)
        .into_iter()
        .map(|c| combine(&pair.m_basis, &c))
        .collect()
}

fn combine(basis: &[DVector<f64>], coords: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(basis[0].len());
    for (b, c) in basis.iter().zip(coords.iter()) {
        out += b * *c;
    }
    out
}

/// Greedy extension of an abelian seed to a maximal abelian subspace.
/// Returns `None` when the seed does not commute or the certificate fails.
pub fn extend_to_maximal(pair: &SymmetricPair, seeds: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let alg = pair.algebra();
    let mut current = linalg::orthonormalize(seeds, &alg.gram, 1e-8);
    for a in &current {
        if alg.norm(&pair.project_k(a)) > 1e-10 {
            return None;
        }
        for b in &current {
            if linalg::max_abs_vec(&alg.bracket_coeffs(a, b)) > 1e-10 {
                return None;
            }
        }
    }
    for _ in 0..=pair.m_basis.len() {
        let cent = if current.is_empty() {
            pair.m_basis.clone()
        } else {
            centralizer_in_m(pair, &current)
        };
        if cent.len() == current.len() {
            // Certificate: the centralizer contains 𝔞 and has the same size.
            let contained = current.iter().all(|a| {
                let p = crate::symspace::pair::project(alg, &cent, a);
                alg.norm(&(a - p)) < 1e-8
            });
            return contained.then_some(current);
        }
        // Pick the centralizer direction farthest from the current span.
        let mut best: Option<(f64, DVector<f64>)> = None;
        for v in &cent {
            let rest = v - crate::symspace::pair::project(alg, &current, v);
            let n = alg.norm(&rest);
            if best.as_ref().map_or(true, |(bn, _)| n > *bn + 1e-12) {
                best = Some((n, rest));
            }
        }
        let (n, v) = best?;
        if n < 1e-8 {
            return None;
        }
        current.push(v / n);
    }
    None
}

/// Cartan subspace from the catalog seeds, retried from random elements of
/// `𝔪` (regular with probability one) when the certificate fails.
pub fn cartan_subspace<R: Rng>(pair: &SymmetricPair, rng: &mut R, attempts: usize) -> Result<Vec<DVector<f64>>> {
    if let Some(a) = extend_to_maximal(pair, &pair.seeds) {
        return Ok(a);
    }
    for _ in 0..attempts {
        let coords = DVector::from_fn(pair.m_basis.len(), |_, _| rng.random_range(-1.0..1.0));
        let x = combine(&pair.m_basis, &coords);
        if let Some(a) = extend_to_maximal(pair, &[x]) {
            return Ok(a);
        }
    }
    Err(Error::CartanCertificate { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::pair::{build_pair, SpaceId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn su_so3_seeds_give_paper_basis() {
        let pair = build_pair(SpaceId::SuSo(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = cartan_subspace(&pair, &mut rng, 5).unwrap();
        assert_eq!(a.len(), 2);
        let alg = pair.algebra();
        let s = 3f64.sqrt() / 3.0;
        assert!((a[0][0] - s).abs() < 1e-14 && (a[0][1] + s).abs() < 1e-14);
        assert!((a[1][0] - 1.0).abs() < 1e-14 && (a[1][1] - 1.0).abs() < 1e-14);
        assert!(alg.bracket_coeffs(&a[0], &a[1]).amax() < 1e-14);
    }

    #[test]
    fn empty_seed_extends_to_full_rank() {
        let pair = build_pair(SpaceId::SuSo(4)).unwrap();
        let a = extend_to_maximal(&pair, &[]).unwrap();
        assert_eq!(a.len(), 3);
    }
}
