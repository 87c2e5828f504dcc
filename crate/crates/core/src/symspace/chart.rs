//! Charts on the sphere `𝒮_W(r) = {w ∈ W : ⟨w,w⟩ = r²}`.
//!
//! Points are given in `𝔞`-coordinates with respect to the orthonormal Cartan
//! basis. For `j ≠ j0` the tangent fields are
//! `Y_j(w) = w_j X_{j0} − w_{j0} X_j`, and `P_j` is the same vector placed in
//! the `W`-slot.

use nalgebra::DVector;
use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symspace::chamber::ChamberData;
use crate::symspace::roots::RestrictedRootData;

/// Chart selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// Rank one: the sphere is the single point `rX`.
    RankOne,
    /// Rank two: `w(θ) = r(cos θ X_1 + sin θ X_2)` with `j0 = 2`.
    Arc,
    /// `𝒰^α_{j0} = {w : (−1)^α w_{j0} > 0}`.
    Generic { j0: usize, alpha: u8 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereChart {
    pub radius: f64,
    pub rank: usize,
    pub kind: ChartKind,
}

impl SphereChart {
    /// Builds a chart, choosing the kind from the rank unless one is given.
    pub fn new(rank: usize, radius: f64, kind: Option<ChartKind>) -> Result<Self> {
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::NonPositiveArgument(radius));
        }
        let kind = kind.unwrap_or(match rank {
            1 => ChartKind::RankOne,
            2 => ChartKind::Arc,
            _ => ChartKind::Generic { j0: 0, alpha: 0 },
        });
        match kind {
            ChartKind::RankOne if rank != 1 => return Err(Error::UnsupportedRank { op: "rank-one chart", rank }),
            ChartKind::Arc if rank != 2 => return Err(Error::UnsupportedRank { op: "arc chart", rank }),
            ChartKind::Generic { j0, .. } if j0 >= rank => {
                return Err(Error::DimensionMismatch { expected: rank, got: j0 })
            }
            _ => {}
        }
        Ok(Self { radius, rank, kind })
    }

    /// Distinguished index `j0`, if the sphere has positive dimension.
    pub fn j0(&self) -> Option<usize> {
        match self.kind {
            ChartKind::RankOne => None,
            ChartKind::Arc => Some(1),
            ChartKind::Generic { j0, .. } => Some(j0),
        }
    }

    /// Indices `j ≠ j0` carrying the `Y_j`, `P_j` fields.
    pub fn tangent_indices(&self) -> Vec<usize> {
        match self.j0() {
            None => Vec::new(),
            Some(j0) => (0..self.rank).filter(|&j| j != j0).collect(),
        }
    }

    /// `w(θ)` on the rank-two arc.
    pub fn arc_point(&self, theta: f64) -> Result<DVector<f64>> {
        if self.kind != ChartKind::Arc {
            return Err(Error::UnsupportedRank { op: "arc point", rank: self.rank });
        }
        Ok(DVector::from_vec(vec![self.radius * theta.cos(), self.radius * theta.sin()]))
    }

    /// The single point `rX` of a rank-one sphere.
    pub fn rank_one_point(&self) -> Result<DVector<f64>> {
        if self.kind != ChartKind::RankOne {
            return Err(Error::UnsupportedRank { op: "rank-one point", rank: self.rank });
        }
        Ok(DVector::from_element(1, self.radius))
    }

    /// Checks that `w` lies in the chart domain.
    pub fn check(&self, w: &DVector<f64>) -> Result<()> {
        if w.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: w.len() });
        }
        let (j0, alpha) = match self.kind {
            ChartKind::RankOne => return Ok(()),
            ChartKind::Arc => (1, 0),
            ChartKind::Generic { j0, alpha } => (j0, alpha),
        };
        let sign = if alpha % 2 == 0 { 1.0 } else { -1.0 };
        if sign * w[j0] > 0.0 {
            Ok(())
        } else {
            Err(Error::OutsideChart { j0, alpha })
        }
    }

    /// `Y_j(w)` in `𝔞`-coordinates.
    pub fn y_field(&self, j: usize, w: &DVector<f64>) -> DVector<f64> {
        let j0 = self.j0().expect("rank-one sphere has no tangent fields");
        y_vector(j0, j, w)
    }
}

/// `w_j e_{j0} − w_{j0} e_j`.
pub fn y_vector(j0: usize, j: usize, w: &DVector<f64>) -> DVector<f64> {
    let mut y = DVector::zeros(w.len());
    y[j0] += w[j];
    y[j] -= w[j0];
    y
}

/// Sample points of `𝒮_W(r)` used by every checker: the point `rX` in rank
/// one, 10 interior angles with a 0.05 margin in rank two, and seeded random
/// chamber points otherwise.
pub fn sample_points<R: Rng>(
    roots: &RestrictedRootData,
    chamber: &ChamberData,
    radius: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(SphereChart, DVector<f64>)>> {
    let r = roots.rank();
    match r {
        1 => {
            let chart = SphereChart::new(1, radius, None)?;
            let w = chart.rank_one_point()?;
            Ok(vec![(chart, w)])
        }
        2 => {
            let chart = SphereChart::new(2, radius, None)?;
            let tmax = chamber.theta_max.ok_or(Error::EmptyChamber)?;
            let n = count.max(2);
            (0..n)
                .map(|i| {
                    let theta = 0.05 + (tmax - 0.1) * i as f64 / (n - 1) as f64;
                    Ok((chart.clone(), chart.arc_point(theta)?))
                })
                .collect()
        }
        _ => {
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let mut w = DVector::zeros(r);
                for ray in &chamber.rays {
                    w += ray * rng.random_range(0.05..1.0);
                }
                let w = &w * (radius / w.norm());
                if roots.roots.iter().any(|rt| rt.value(&w) < 1e-3 * radius) {
                    continue;
                }
                let (j0, v) = w.iter().enumerate().fold((0, 0.0f64), |acc, (j, x)| {
                    if x.abs() > acc.1 {
                        (j, x.abs())
                    } else {
                        acc
                    }
                });
                let alpha = if w[j0] > 0.0 || v == 0.0 { 0 } else { 1 };
                let chart = SphereChart::new(r, radius, Some(ChartKind::Generic { j0, alpha }))?;
                chart.check(&w)?;
                out.push((chart, w));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_point_has_radius() {
        let c = SphereChart::new(2, 1.0, None).unwrap();
        let w = c.arc_point(std::f64::consts::FRAC_PI_6).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-15);
        assert!((w[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_one_point_is_scaled_x() {
        let c = SphereChart::new(1, 2.0, None).unwrap();
        assert_eq!(c.rank_one_point().unwrap()[0], 2.0);
        assert!(c.tangent_indices().is_empty());
    }

    #[test]
    fn outside_chart_is_rejected() {
        let c = SphereChart::new(3, 1.0, Some(ChartKind::Generic { j0: 1, alpha: 1 })).unwrap();
        let w = DVector::from_vec(vec![0.0, 0.5, 0.5]);
        assert!(matches!(c.check(&w), Err(Error::OutsideChart { j0: 1, alpha: 1 })));
    }
}
