//! Invariant structures `(J^q, 𝐠)` on `G/H × W` and `(φ^q, ξ, η, 𝐠̃)` on
//! `G/H × 𝒮_W(r)`, frames at `(o_H, w)` and their frame matrices.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frames::adapted::AdaptedBasis;
use crate::frames::field::{InvariantField, MatrixField};
use crate::qcatalog::{Realized, StructureProfile};
use crate::symspace::chart::{y_vector, SphereChart};

/// Where the structure lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StructureMode {
    /// `G/H × W` with `J^q`.
    FullW,
    /// `G/H × 𝒮_W(r)` with `φ^q`.
    Sphere { radius: f64 },
}

/// A profile bound to a decomposition, producing ambient tensor fields.
#[derive(Clone, Debug)]
pub struct Structure {
    pub basis: Arc<AdaptedBasis>,
    pub profile: StructureProfile,
    pub mode: StructureMode,
}

impl Structure {
    pub fn full(basis: Arc<AdaptedBasis>, profile: StructureProfile) -> Self {
        Self {
            basis,
            profile,
            mode: StructureMode::FullW,
        }
    }

    /// Sphere structure; the profile radius, if present, must equal `radius`.
    pub fn sphere(basis: Arc<AdaptedBasis>, profile: StructureProfile, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveArgument(radius));
        }
        let profile = match profile.radius {
            Some(r) if (r - radius).abs() > 1e-12 * radius => {
                return Err(Error::InvalidInput(format!("profile radius {r} differs from sphere radius {radius}")))
            }
            _ => profile.with_radius(radius),
        };
        Ok(Self {
            basis,
            profile,
            mode: StructureMode::Sphere { radius },
        })
    }

    pub fn radius(&self) -> Option<f64> {
        match self.mode {
            StructureMode::Sphere { radius } => Some(radius),
            StructureMode::FullW => None,
        }
    }

    pub fn realize(&self, w: &DVector<f64>) -> Result<Realized> {
        self.profile.realize(&self.basis.roots, w)
    }

    /// `J^q` (full mode) or `φ^q` (sphere mode) as an ambient matrix field.
    pub fn complex(&self) -> MatrixField {
        let (s1, s2) = (self.clone(), self.clone());
        MatrixField::new(Arc::new(move |w| s1.complex_at(w)), Arc::new(move |w, d| s2.complex_derivative(w, d)))
    }

    /// Metric `𝐠` as an ambient matrix field.
    pub fn metric(&self) -> MatrixField {
        let (s1, s2) = (self.clone(), self.clone());
        MatrixField::new(Arc::new(move |w| s1.metric_at(w)), Arc::new(move |w, d| s2.metric_derivative(w, d)))
    }

    pub fn complex_at(&self, w: &DVector<f64>) -> Result<DMatrix<f64>> {
        let b = &self.basis;
        let c = self.realize(w)?;
        let n = b.ambient_dim();
        let mut m = DMatrix::zeros(n, n);
        match self.mode {
            StructureMode::FullW => {
                for j in 0..b.rank {
                    m[(b.slot(j), j)] = 1.0;
                    m[(j, b.slot(j))] = -1.0;
                }
            }
            StructureMode::Sphere { radius } => {
                let r2 = radius * radius;
                for i in 0..b.rank {
                    m[(i, b.slot(i))] = -1.0;
                    for k in 0..b.rank {
                        let delta = if i == k { 1.0 } else { 0.0 };
                        m[(b.slot(k), i)] = delta - w[i] * w[k] / r2;
                    }
                }
            }
        }
        for (blk, q) in b.blocks.iter().zip(&c.q) {
            for s in 0..blk.multiplicity {
                let (x, z) = (blk.xi_start + s, blk.zeta_start + s);
                m[(z, x)] = -1.0 / q;
                m[(x, z)] = *q;
            }
        }
        Ok(m)
    }

    pub fn complex_derivative(&self, w: &DVector<f64>, d: &DVector<f64>) -> Result<DMatrix<f64>> {
        let b = &self.basis;
        let c = self.realize(w)?;
        let n = b.ambient_dim();
        let mut m = DMatrix::zeros(n, n);
        if let StructureMode::Sphere { radius } = self.mode {
            let r2 = radius * radius;
            for i in 0..b.rank {
                for k in 0..b.rank {
                    m[(b.slot(k), i)] = -(d[i] * w[k] + w[i] * d[k]) / r2;
                }
            }
        }
        for ((blk, q), gq) in b.blocks.iter().zip(&c.q).zip(&c.grad_q) {
            let dq = gq.dot(d);
            for s in 0..blk.multiplicity {
                let (x, z) = (blk.xi_start + s, blk.zeta_start + s);
                m[(z, x)] = dq / (q * q);
                m[(x, z)] = dq;
            }
        }
        Ok(m)
    }

    pub fn metric_at(&self, w: &DVector<f64>) -> Result<DMatrix<f64>> {
        let b = &self.basis;
        let c = self.realize(w)?;
        let mut diag = DVector::zeros(b.ambient_dim());
        for j in 0..b.rank {
            diag[j] = c.a0 * c.a0;
            diag[b.slot(j)] = c.a0 * c.a0;
        }
        for ((blk, a), bb) in b.blocks.iter().zip(&c.a).zip(&c.b) {
            for s in 0..blk.multiplicity {
                diag[blk.xi_start + s] = *a;
                diag[blk.zeta_start + s] = *bb;
            }
        }
        Ok(DMatrix::from_diagonal(&diag))
    }

    pub fn metric_derivative(&self, w: &DVector<f64>, d: &DVector<f64>) -> Result<DMatrix<f64>> {
        let b = &self.basis;
        let c = self.realize(w)?;
        let mut diag = DVector::zeros(b.ambient_dim());
        for ((blk, ga), gb) in b.blocks.iter().zip(&c.grad_a).zip(&c.grad_b) {
            for s in 0..blk.multiplicity {
                diag[blk.xi_start + s] = ga.dot(d);
                diag[blk.zeta_start + s] = gb.dot(d);
            }
        }
        Ok(DMatrix::from_diagonal(&diag))
    }

    fn sphere_radius(&self) -> Result<f64> {
        self.radius().ok_or(Error::UnsupportedRank {
            op: "contact data on the full chamber",
            rank: self.basis.rank,
        })
    }

    /// `η = (a₀/r)⟨·, w⟩` on the `𝔞` part.
    pub fn eta_at(&self, w: &DVector<f64>) -> Result<DVector<f64>> {
        let r = self.sphere_radius()?;
        let a0 = self.profile.a0_value()?;
        let mut eta = DVector::zeros(self.basis.ambient_dim());
        eta.rows_mut(0, self.basis.rank).copy_from(&(w * (a0 / r)));
        Ok(eta)
    }

    pub fn eta_derivative(&self, d: &DVector<f64>) -> Result<DVector<f64>> {
        let r = self.sphere_radius()?;
        let a0 = self.profile.a0_value()?;
        let mut eta = DVector::zeros(self.basis.ambient_dim());
        eta.rows_mut(0, self.basis.rank).copy_from(&(d * (a0 / r)));
        Ok(eta)
    }

    /// `ξ = ξ^S/a₀ = (w/(a₀r), 0)`.
    pub fn reeb(&self) -> Result<InvariantField> {
        let r = self.sphere_radius()?;
        let a0 = self.profile.a0_value()?;
        let (b1, b2) = (self.basis.clone(), self.basis.clone());
        let s = 1.0 / (a0 * r);
        Ok(InvariantField::analytic(
            "xi",
            Arc::new(move |w| Ok(b1.ambient(&b1.a_to_mbar(&(w * s)), &DVector::zeros(b1.rank)))),
            Arc::new(move |_, d| Ok(b2.ambient(&b2.a_to_mbar(&(d * s)), &DVector::zeros(b2.rank)))),
        ))
    }

    /// Canonical 1-form `θ(μ, u) = ⟨w, μ⟩` as an ambient covector.
    pub fn theta_at(basis: &AdaptedBasis, w: &DVector<f64>) -> DVector<f64> {
        let mut t = DVector::zeros(basis.ambient_dim());
        t.rows_mut(0, basis.rank).copy_from(w);
        t
    }

    /// `dθ((μ,u),(ν,v)) = ½(⟨u,ν⟩ − ⟨v,μ⟩ − ⟨[w,μ],ν⟩)` as an ambient matrix.
    pub fn dtheta_matrix(basis: &AdaptedBasis, w: &DVector<f64>) -> DMatrix<f64> {
        let n = basis.ambient_dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..basis.rank {
            m[(basis.slot(j), j)] += 0.5;
            m[(j, basis.slot(j))] -= 0.5;
        }
        let wm = basis.a_to_mbar(w);
        for mu in 0..basis.mbar_dim {
            let mut e = DVector::zeros(basis.mbar_dim);
            e[mu] = 1.0;
            let (br, _) = basis.bracket_mbar(wm.as_slice(), e.as_slice());
            for nu in 0..basis.mbar_dim {
                m[(mu, nu)] -= 0.5 * br[nu];
            }
        }
        m
    }
}

/// Ordered frame at `(o_H, w)`.
#[derive(Clone, Debug)]
pub struct FrameAtPoint {
    pub basis: Arc<AdaptedBasis>,
    pub w: DVector<f64>,
    pub chart: Option<SphereChart>,
    pub fields: Vec<InvariantField>,
}

/// Frame index of a root vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootSlot {
    pub root: usize,
    pub s: usize,
    pub xi: usize,
    pub zeta: usize,
}

impl FrameAtPoint {
    fn root_fields(basis: &AdaptedBasis) -> Vec<InvariantField> {
        basis.labels[basis.rank..basis.mbar_dim]
            .iter()
            .enumerate()
            .map(|(i, l)| InvariantField::constant(l.clone(), basis.unit(basis.rank + i)))
            .collect()
    }

    /// `[(X_j,0)], [(0,∂_j)], [(ξ^s_λ,0), (ζ^s_λ,0)]` at `w ∈ W`.
    pub fn full(basis: Arc<AdaptedBasis>, w: DVector<f64>) -> Result<Self> {
        if w.len() != basis.rank {
            return Err(Error::DimensionMismatch { expected: basis.rank, got: w.len() });
        }
        let mut fields = Vec::new();
        for j in 0..basis.rank {
            fields.push(InvariantField::constant(format!("X{}", j + 1), basis.unit(j)));
        }
        for j in 0..basis.rank {
            fields.push(InvariantField::constant(format!("d{}", j + 1), basis.unit(basis.slot(j))));
        }
        fields.extend(Self::root_fields(&basis));
        Ok(Self {
            basis,
            w,
            chart: None,
            fields,
        })
    }

    /// `ξ^S = (w/r, 0)`, `(Y_j,0)`, `(0,P_j)`, then root vectors.
    pub fn sphere(basis: Arc<AdaptedBasis>, chart: SphereChart, w: DVector<f64>) -> Result<Self> {
        chart.check(&w)?;
        let r = chart.radius;
        if (w.norm() - r).abs() > 1e-9 * r {
            return Err(Error::InvalidInput(format!("|w| = {} is not the sphere radius {r}", w.norm())));
        }
        let mut fields = Vec::new();
        let (b1, b2) = (basis.clone(), basis.clone());
        fields.push(InvariantField::analytic(
            "xiS",
            Arc::new(move |w| Ok(b1.ambient(&b1.a_to_mbar(&(w / r)), &DVector::zeros(b1.rank)))),
            Arc::new(move |_, d| Ok(b2.ambient(&b2.a_to_mbar(&(d / r)), &DVector::zeros(b2.rank)))),
        ));
        let j0 = chart.j0();
        let tangent = chart.tangent_indices();
        for (slot, prefix) in [(false, "Y"), (true, "P")] {
            for &j in &tangent {
                let j0 = j0.expect("tangent indices imply j0");
                let (b1, b2) = (basis.clone(), basis.clone());
                let place = move |b: &AdaptedBasis, y: DVector<f64>| {
                    if slot {
                        b.ambient(&DVector::zeros(b.mbar_dim), &y)
                    } else {
                        b.ambient(&b.a_to_mbar(&y), &DVector::zeros(b.rank))
                    }
                };
                fields.push(InvariantField::analytic(
                    format!("{prefix}{}", j + 1),
                    Arc::new(move |w| Ok(place(&b1, y_vector(j0, j, w)))),
                    Arc::new(move |_, d| Ok(place(&b2, y_vector(j0, j, d)))),
                ));
            }
        }
        fields.extend(Self::root_fields(&basis));
        Ok(Self {
            basis,
            w,
            chart: Some(chart),
            fields,
        })
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.fields.iter().map(|f| f.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.label == label)
    }

    /// Offset of the first root vector.
    pub fn root_offset(&self) -> usize {
        self.len() - (self.basis.mbar_dim - self.basis.rank)
    }

    /// Frame indices of every `(ξ^s_λ, ζ^s_λ)` pair.
    pub fn root_slots(&self) -> Vec<RootSlot> {
        let off = self.root_offset();
        let r = self.basis.rank;
        let mut out = Vec::new();
        for (root, blk) in self.basis.blocks.iter().enumerate() {
            for s in 0..blk.multiplicity {
                out.push(RootSlot {
                    root,
                    s,
                    xi: off + blk.xi_start + s - r,
                    zeta: off + blk.zeta_start + s - r,
                });
            }
        }
        out
    }

    /// `N × n` matrix of frame vectors at `w`.
    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.basis.ambient_dim();
        let mut f = DMatrix::zeros(n, self.len());
        for (i, field) in self.fields.iter().enumerate() {
            f.set_column(i, &field.eval(&self.w)?);
        }
        Ok(f)
    }

    /// Left inverse `(FᵀF)⁻¹Fᵀ`; errors when the frame is dependent.
    pub fn left_inverse(&self) -> Result<DMatrix<f64>> {
        let f = self.matrix()?;
        let ftf = f.transpose() * &f;
        let inv = ftf.try_inverse().ok_or(Error::DegenerateSubspace)?;
        Ok(inv * f.transpose())
    }

    /// Frame coordinates of an ambient vector tangent to the frame span.
    pub fn coordinates(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.left_inverse()? * v)
    }
}

/// Frame matrices of a structure at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPack {
    pub labels: Vec<String>,
    pub g: DMatrix<f64>,
    pub j_or_phi: DMatrix<f64>,
    pub eta: Option<DVector<f64>>,
    pub xi: Option<DVector<f64>>,
    pub dtheta: DMatrix<f64>,
    pub omega: DMatrix<f64>,
}

/// `(J^q, 𝐠, ω)` or `(φ^q, 𝐠̃, η, ξ, ω)` in frame coordinates.
pub fn structure_at(frame: &FrameAtPoint, structure: &Structure) -> Result<TensorPack> {
    let w = &frame.w;
    let f = frame.matrix()?;
    let finv = frame.left_inverse()?;
    let g = structure.metric_at(w)?;
    let j = structure.complex_at(w)?;
    let (eta, xi) = match structure.mode {
        StructureMode::FullW => (None, None),
        StructureMode::Sphere { .. } => {
            let eta = f.transpose() * structure.eta_at(w)?;
            let xi = &finv * structure.reeb()?.eval(w)?;
            (Some(eta), Some(xi))
        }
    };
    let dtheta = f.transpose() * Structure::dtheta_matrix(&frame.basis, w) * &f;
    Ok(TensorPack {
        labels: frame.labels(),
        g: f.transpose() * &g * &f,
        j_or_phi: &finv * &j * &f,
        eta,
        xi,
        dtheta,
        omega: f.transpose() * &g * &j * &f,
    })
}

/// The standard structure `(J^S, g^S)`: `q = id`, `a₀ = 1`, `a_λ = 1`.
pub fn standard_structure_at(frame: &FrameAtPoint) -> Result<TensorPack> {
    let structure = match &frame.chart {
        None => Structure::full(frame.basis.clone(), StructureProfile::standard(None)),
        Some(c) => Structure::sphere(frame.basis.clone(), StructureProfile::standard(Some(c.radius)), c.radius)?,
    };
    structure_at(frame, &structure)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl TensorPack {
    /// Frame labels and dense matrices as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "labels": self.labels,
            "g": rows(&self.g),
            "j_or_phi": rows(&self.j_or_phi),
            "eta": self.eta.as_ref().map(|v| v.iter().copied().collect::<Vec<f64>>()),
            "xi": self.xi.as_ref().map(|v| v.iter().copied().collect::<Vec<f64>>()),
            "dtheta": rows(&self.dtheta),
            "omega": rows(&self.omega),
        })
    }

    /// `‖J² + I‖` or `‖φ² + I − ξ⊗η‖`.
    pub fn square_residual(&self) -> f64 {
        let n = self.g.nrows();
        let mut target = -DMatrix::<f64>::identity(n, n);
        if let (Some(eta), Some(xi)) = (&self.eta, &self.xi) {
            target += xi * eta.transpose();
        }
        (&self.j_or_phi * &self.j_or_phi - target).amax()
    }

    /// `max |𝐠(JA,JB) − 𝐠(A,B) + η(A)η(B)|`.
    pub fn compatibility_residual(&self) -> f64 {
        let mut target = self.g.clone();
        if let Some(eta) = &self.eta {
            target -= eta * eta.transpose();
        }
        (self.j_or_phi.transpose() * &self.g * &self.j_or_phi - target).amax()
    }

    /// `|η(ξ) − 1|`, zero in full mode.
    pub fn unit_residual(&self) -> f64 {
        match (&self.eta, &self.xi) {
            (Some(e), Some(x)) => (e.dot(x) - 1.0).abs(),
            _ => 0.0,
        }
    }

    pub fn metric_is_positive(&self) -> bool {
        let sym = (&self.g + self.g.transpose()) * 0.5;
        nalgebra::SymmetricEigen::new(sym).eigenvalues.iter().all(|&l| l > 0.0)
    }

    /// Largest entry of `M + Mᵀ` over `ω` and `dθ`.
    pub fn antisymmetry_residual(&self) -> f64 {
        (&self.omega + self.omega.transpose()).amax().max((&self.dtheta + self.dtheta.transpose()).amax())
    }
}
