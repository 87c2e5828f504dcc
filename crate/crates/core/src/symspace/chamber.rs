//! Weyl chamber geometry: walls, boundary rays and a regular witness point.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symspace::roots::RestrictedRootData;

/// The chamber `W = {w : λ_R(w) > 0 for all λ ∈ Σ⁺}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberData {
    /// Indices (into the positive roots) of the simple roots.
    pub wall_indices: Vec<usize>,
    pub wall_covectors: Vec<DVector<f64>>,
    /// Unit boundary rays, `rays[i]` lying on every wall except wall `i`.
    pub rays: Vec<DVector<f64>>,
    /// Angle between the two rays in rank two.
    pub theta_max: Option<f64>,
    /// Unit regular point with all simple roots equal.
    pub witness: DVector<f64>,
}

/// Positive roots that are not a sum of two positive roots.
pub fn simple_root_indices(covectors: &[DVector<f64>]) -> Vec<usize> {
    let scale = covectors.iter().map(|c| c.amax()).fold(0.0, f64::max);
    let tol = 1e-9 * scale.max(1.0);
    (0..covectors.len())
        .filter(|&i| {
            !(0..covectors.len()).any(|a| {
                (a..covectors.len()).any(|b| (&covectors[a] + &covectors[b] - &covectors[i]).amax() <= tol)
            })
        })
        .collect()
}

fn simple_matrix(covectors: &[DVector<f64>], simple: &[usize]) -> Result<DMatrix<f64>> {
    let r = covectors.first().map(|c| c.len()).ok_or(Error::EmptyChamber)?;
    if simple.len() != r {
        return Err(Error::EmptyChamber);
    }
    Ok(DMatrix::from_fn(r, r, |i, j| covectors[simple[i]][j]))
}

/// Unit point where every simple root takes the same value; errors when some
/// positive root is not positive there.
pub fn witness_from_covectors(covectors: &[DVector<f64>]) -> Result<DVector<f64>> {
    let simple = simple_root_indices(covectors);
    let a = simple_matrix(covectors, &simple)?;
    let r = a.nrows();
    let v = a.lu().solve(&DVector::from_element(r, 1.0)).ok_or(Error::EmptyChamber)?;
    let v = &v / v.norm();
    if covectors.iter().any(|c| c.dot(&v) <= 0.0) {
        return Err(Error::EmptyChamber);
    }
    Ok(v)
}

/// Walls, rays, witness and (rank two) `θ_max` of the positive chamber.
pub fn chamber_geometry(roots: &RestrictedRootData) -> Result<ChamberData> {
    let covectors: Vec<DVector<f64>> = roots.roots.iter().map(|r| r.covector.clone()).collect();
    let simple = simple_root_indices(&covectors);
    let a = simple_matrix(&covectors, &simple)?;
    let inv = a.clone().try_inverse().ok_or(Error::EmptyChamber)?;
    let rays: Vec<DVector<f64>> = (0..inv.ncols())
        .map(|i| {
            let c = inv.column(i).into_owned();
            &c / c.norm()
        })
        .collect();
    let witness = witness_from_covectors(&covectors)?;
    let theta_max = (rays.len() == 2).then(|| rays[0].dot(&rays[1]).clamp(-1.0, 1.0).acos());
    Ok(ChamberData {
        wall_covectors: simple.iter().map(|&i| covectors[i].clone()).collect(),
        wall_indices: simple,
        rays,
        theta_max,
        witness,
    })
}

impl ChamberData {
    /// Whether every positive root is strictly positive at `w`.
    pub fn contains(&self, roots: &RestrictedRootData, w: &DVector<f64>) -> bool {
        roots.roots.iter().all(|r| r.value(w) > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn a2_simple_roots() {
        let s = 3f64.sqrt();
        let cov = vec![v(&[s, 1.0]), v(&[s, -1.0]), v(&[0.0, 2.0])];
        assert_eq!(simple_root_indices(&cov), vec![1, 2]);
        let w = witness_from_covectors(&cov).unwrap();
        assert!(cov.iter().all(|c| c.dot(&w) > 0.0));
    }

    #[test]
    fn bc1_keeps_half_root() {
        let cov = vec![v(&[1.0]), v(&[0.5])];
        assert_eq!(simple_root_indices(&cov), vec![1]);
    }

    #[test]
    fn inconsistent_signs_have_no_chamber() {
        let cov = vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[-1.0, -1.0])];
        assert!(witness_from_covectors(&cov).is_err());
    }
}
