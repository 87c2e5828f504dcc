//! Invariant vector fields on `G/H × W` and their brackets.
//!
//! A field is determined by its value at the orbit representatives
//! `(o_H, w)`, a map from `w` to an ambient vector. The bracket of two such
//! fields `(a, α)` and `(b, β)` is
//! `([a,b]_𝔪̄ + D_α b − D_β a, D_α β − D_β α)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::frames::adapted::AdaptedBasis;
use crate::linalg;

/// Step used by the finite-difference fallback.
pub const FD_STEP: f64 = 1e-5;

pub type VectorFn = Arc<dyn Fn(&DVector<f64>) -> Result<DVector<f64>> + Send + Sync>;
pub type DirectionalFn = Arc<dyn Fn(&DVector<f64>, &DVector<f64>) -> Result<DVector<f64>> + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&DVector<f64>) -> Result<DMatrix<f64>> + Send + Sync>;
pub type DirectionalMatrixFn = Arc<dyn Fn(&DVector<f64>, &DVector<f64>) -> Result<DMatrix<f64>> + Send + Sync>;

/// How directional derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// A vector field given by its value along `W`.
#[derive(Clone)]
pub struct InvariantField {
    pub label: String,
    value: VectorFn,
    derivative: Option<DirectionalFn>,
}

impl std::fmt::Debug for InvariantField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InvariantField")
            .field("label", &self.label)
            .field("mode", &self.mode())
            .finish()
    }
}

impl InvariantField {
    /// Field whose value does not depend on `w`.
    pub fn constant(label: impl Into<String>, v: DVector<f64>) -> Self {
        let zero = DVector::zeros(v.len());
        Self {
            label: label.into(),
            value: Arc::new(move |_| Ok(v.clone())),
            derivative: Some(Arc::new(move |_, _| Ok(zero.clone()))),
        }
    }

    pub fn analytic(label: impl Into<String>, value: VectorFn, derivative: DirectionalFn) -> Self {
        Self {
            label: label.into(),
            value,
            derivative: Some(derivative),
        }
    }

    /// Field differentiated by Richardson-extrapolated central differences.
    pub fn numeric(label: impl Into<String>, value: VectorFn) -> Self {
        Self {
            label: label.into(),
            value,
            derivative: None,
        }
    }

    pub fn mode(&self) -> DerivativeMode {
        if self.derivative.is_some() {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference
        }
    }

    /// The same field with its analytic derivative dropped.
    pub fn to_numeric(&self) -> Self {
        Self::numeric(self.label.clone(), self.value.clone())
    }

    pub fn eval(&self, w: &DVector<f64>) -> Result<DVector<f64>> {
        (self.value)(w)
    }

    /// `D_dir F(w)`.
    pub fn derivative(&self, w: &DVector<f64>, dir: &DVector<f64>) -> Result<DVector<f64>> {
        match &self.derivative {
            Some(d) => d(w, dir),
            None => self.fd_derivative(w, dir),
        }
    }

    pub fn fd_derivative(&self, w: &DVector<f64>, dir: &DVector<f64>) -> Result<DVector<f64>> {
        if dir.iter().all(|x| *x == 0.0) {
            return Ok(DVector::zeros(self.eval(w)?.len()));
        }
        // Errors inside the closure would be lost by the helper, so probe the
        // four stencil points first.
        for s in [-1.0, -0.5, 0.5, 1.0] {
            self.eval(&(w + dir * (s * FD_STEP)))?;
        }
        Ok(linalg::richardson_derivative(
            |x| self.eval(x).expect("stencil point checked"),
            w,
            dir,
            FD_STEP,
        ))
    }

    /// Max entry of `analytic − finite difference` along `dir`.
    pub fn derivative_discrepancy(&self, w: &DVector<f64>, dir: &DVector<f64>) -> Result<f64> {
        let a = self.derivative(w, dir)?;
        let n = self.fd_derivative(w, dir)?;
        Ok(linalg::max_abs_vec(&(a - n)))
    }
}

/// An endomorphism field `w ↦ T(w)` on ambient vectors.
#[derive(Clone)]
pub struct MatrixField {
    value: MatrixFn,
    derivative: DirectionalMatrixFn,
}

impl MatrixField {
    pub fn new(value: MatrixFn, derivative: DirectionalMatrixFn) -> Self {
        Self { value, derivative }
    }

    pub fn eval(&self, w: &DVector<f64>) -> Result<DMatrix<f64>> {
        (self.value)(w)
    }

    pub fn derivative(&self, w: &DVector<f64>, dir: &DVector<f64>) -> Result<DMatrix<f64>> {
        (self.derivative)(w, dir)
    }

    /// The field `T·A`, differentiated by the product rule.
    pub fn apply(&self, field: &InvariantField) -> InvariantField {
        let (t1, f1) = (self.clone(), field.clone());
        let (t2, f2) = (self.clone(), field.clone());
        let label = format!("T({})", field.label);
        InvariantField::analytic(
            label,
            Arc::new(move |w| Ok(t1.eval(w)? * f1.eval(w)?)),
            Arc::new(move |w, d| Ok(t2.derivative(w, d)? * f2.eval(w)? + t2.eval(w)? * f2.derivative(w, d)?)),
        )
    }

    /// Max entry of `analytic − finite difference` of `T` along `dir`.
    pub fn derivative_discrepancy(&self, w: &DVector<f64>, dir: &DVector<f64>) -> Result<f64> {
        let a = self.derivative(w, dir)?;
        let h = FD_STEP;
        let central = |s: f64| -> Result<DMatrix<f64>> { Ok((self.eval(&(w + dir * s))? - self.eval(&(w - dir * s))?) / (2.0 * s)) };
        let n = (central(h / 2.0)? * 4.0 - central(h)?) / 3.0;
        Ok(linalg::max_abs(&(a - n)))
    }
}

/// Value of a field bracket and the norm of the discarded `𝔥` part.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketValue {
    pub value: DVector<f64>,
    pub h_norm: f64,
}

/// `[A, B]` at `(o_H, w)`.
pub fn field_bracket(basis: &AdaptedBasis, a: &InvariantField, b: &InvariantField, w: &DVector<f64>) -> Result<BracketValue> {
    let av = a.eval(w)?;
    let bv = b.eval(w)?;
    let (am, alpha) = basis.split(&av);
    let (bm, beta) = basis.split(&bv);
    let (mut mbar, h) = basis.bracket_mbar(am.as_slice(), bm.as_slice());
    let mut slot = DVector::zeros(basis.rank);
    if alpha.iter().any(|x| *x != 0.0) {
        let (dm, ds) = basis.split(&b.derivative(w, &alpha)?);
        mbar += dm;
        slot += ds;
    }
    if beta.iter().any(|x| *x != 0.0) {
        let (dm, ds) = basis.split(&a.derivative(w, &beta)?);
        mbar -= dm;
        slot -= ds;
    }
    Ok(BracketValue {
        value: basis.ambient(&mbar, &slot),
        h_norm: h.norm(),
    })
}
