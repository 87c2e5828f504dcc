//! Levi-Civita data of an invariant metric on `G/K` and the adjoint action.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::lie_core::AlgebraBasis;
use crate::linalg::CMatrix;
use crate::symspace::pair::SymmetricPair;

/// `𝔘(μ1, μ2)`, the symmetric part defined by
/// `⟨𝔘(μ1,μ2), μ3⟩ = ½(⟨[μ3,μ1]_𝔪, μ2⟩ + ⟨μ1, [μ3,μ2]_𝔪⟩)` for all `μ3 ∈ 𝔪`.
pub fn u_term(pair: &SymmetricPair, mu1: &DVector<f64>, mu2: &DVector<f64>) -> DVector<f64> {
    let alg = pair.algebra();
    let dm = pair.m_basis.len();
    // Gram matrix of the 𝔪 basis and right-hand side, solved rather than
    // assuming orthonormality.
    let gram = DMatrix::from_fn(dm, dm, |a, b| alg.inner(&pair.m_basis[a], &pair.m_basis[b]));
    let rhs = DVector::from_fn(dm, |c, _| {
        let m3 = &pair.m_basis[c];
        let t1 = alg.inner(&pair.project_m(&alg.bracket_coeffs(m3, mu1)), mu2);
        let t2 = alg.inner(mu1, &pair.project_m(&alg.bracket_coeffs(m3, mu2)));
        0.5 * (t1 + t2)
    });
    let coeffs = gram.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(dm));
    let mut out = DVector::zeros(alg.dim());
    for (m, c) in pair.m_basis.iter().zip(coeffs.iter()) {
        out += m * *c;
    }
    out
}

/// `α(μ1, μ2) = ½[μ1, μ2]_𝔪 + 𝔘(μ1, μ2)`; identically zero on symmetric pairs.
pub fn connection_bilinear(pair: &SymmetricPair, mu1: &DVector<f64>, mu2: &DVector<f64>) -> DVector<f64> {
    let alg = pair.algebra();
    pair.project_m(&alg.bracket_coeffs(mu1, mu2)) * 0.5 + u_term(pair, mu1, mu2)
}

/// Largest norm of `α` over pairs of `𝔪` basis vectors.
pub fn max_connection_norm(pair: &SymmetricPair) -> f64 {
    let alg = pair.algebra();
    let mut worst = 0.0f64;
    for a in &pair.m_basis {
        for b in &pair.m_basis {
            worst = worst.max(alg.norm(&connection_bilinear(pair, a, b)));
        }
    }
    worst
}

/// `Ad_k x = k x k⁻¹` re-expanded in the basis; `k` is assumed unitary.
pub fn adjoint_action(alg: &AlgebraBasis, k: &CMatrix, x: &DVector<f64>) -> Result<DVector<f64>> {
    let m = k.mul(&alg.to_matrix(x)).mul(&k.adjoint());
    alg.expand(&m)
}

/// Matrix of `Ad_k` on coefficient vectors.
pub fn adjoint_matrix(alg: &AlgebraBasis, k: &CMatrix) -> Result<DMatrix<f64>> {
    let d = alg.dim();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        out.set_column(i, &adjoint_action(alg, k, &e)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::AlgebraElement;
    use crate::symspace::pair::{build_pair, SpaceId};

    #[test]
    fn connection_vanishes_on_su_so3() {
        let pair = build_pair(SpaceId::SuSo(3)).unwrap();
        assert!(max_connection_norm(&pair) < 1e-12);
    }

    #[test]
    fn adjoint_by_identity_is_trivial() {
        let pair = build_pair(SpaceId::Cp(2)).unwrap();
        let alg = pair.algebra();
        let x = &pair.m_basis[1] * 0.3 + &pair.k_basis[0];
        let y = adjoint_action(alg, &CMatrix::identity(alg.matrix_size()), &x).unwrap();
        assert!((y - x).amax() < 1e-14);
    }

    #[test]
    fn adjoint_preserves_inner_product() {
        let pair = build_pair(SpaceId::Sphere(3)).unwrap();
        let alg = pair.algebra();
        let z = AlgebraElement::new(alg, &pair.k_basis[0] * 0.8 - &pair.k_basis[2] * 0.4).unwrap();
        let k = alg.exp_matrix(&z);
        let x = &pair.m_basis[0] + &pair.m_basis[2] * 0.5;
        let y = &pair.m_basis[1] - &pair.k_basis[1];
        let (ax, ay) = (adjoint_action(alg, &k, &x).unwrap(), adjoint_action(alg, &k, &y).unwrap());
        assert!((alg.inner(&ax, &ay) - alg.inner(&x, &y)).abs() < 1e-12);
    }
}
