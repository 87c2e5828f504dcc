//! Tensor calculus on frames: exterior derivatives, Lie derivatives,
//! Nijenhuis and normality tensors, the `h`-tensor and the Levi-Civita
//! connection in rank one.
//!
//! The Nijenhuis tensor of an almost complex structure is taken as
//! `N_J(A,B) = [A,B] + J[JA,B] + J[A,JB] − [JA,JB]`; the normality tensor of an
//! almost contact structure is `[φ,φ](A,B) + 2dη(A,B)ξ` with
//! `[φ,φ](A,B) = φ²[A,B] + [φA,φB] − φ[φA,B] − φ[A,φB]`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frames::field::{field_bracket, InvariantField};
use crate::frames::tensors::{FrameAtPoint, Structure, StructureMode};
use crate::linalg;

fn slot_of(frame: &FrameAtPoint, v: &DVector<f64>) -> DVector<f64> {
    frame.basis.split(v).1
}

/// `[A, B]` at the frame point, ambient vector.
pub fn bracket(frame: &FrameAtPoint, a: &InvariantField, b: &InvariantField) -> Result<DVector<f64>> {
    Ok(field_bracket(&frame.basis, a, b, &frame.w)?.value)
}

/// Largest discarded `𝔥`-norm over all frame pairs.
pub fn max_h_component(frame: &FrameAtPoint) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in &frame.fields {
        for b in &frame.fields {
            worst = worst.max(field_bracket(&frame.basis, a, b, &frame.w)?.h_norm);
        }
    }
    Ok(worst)
}

/// `dθ` from its closed form, in frame coordinates.
pub fn dtheta_at(frame: &FrameAtPoint) -> Result<DMatrix<f64>> {
    let f = frame.matrix()?;
    Ok(f.transpose() * Structure::dtheta_matrix(&frame.basis, &frame.w) * f)
}

/// `dθ(A,B) = ½(Aθ(B) − Bθ(A) − θ([A,B]))` with `θ(μ,u) = ⟨w,μ⟩`, as an
/// independent cross-check of [`dtheta_at`].
pub fn dtheta_by_calculus(frame: &FrameAtPoint) -> Result<DMatrix<f64>> {
    let basis = &frame.basis;
    let w = &frame.w;
    let n = frame.len();
    let theta = Structure::theta_at(basis, w);
    let mut out = DMatrix::zeros(n, n);
    let vals: Vec<DVector<f64>> = frame.fields.iter().map(|f| f.eval(w)).collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..n {
            // A(θ(B)) = θ'(α)·B + θ·B'(α), with θ' (d) = d on the 𝔞 part.
            let deriv = |x: usize, y: usize| -> Result<f64> {
                let dir = slot_of(frame, &vals[x]);
                let dtheta = Structure::theta_at(basis, &dir);
                Ok(dtheta.dot(&vals[y]) + theta.dot(&frame.fields[y].derivative(w, &dir)?))
            };
            let br = bracket(frame, &frame.fields[i], &frame.fields[j])?;
            out[(i, j)] = 0.5 * (deriv(i, j)? - deriv(j, i)? - theta.dot(&br));
        }
    }
    Ok(out)
}

/// `dη(A,B) = ½(Aη(B) − Bη(A) − η([A,B]))` on frame pairs.
pub fn d_eta(frame: &FrameAtPoint, structure: &Structure) -> Result<DMatrix<f64>> {
    let w = &frame.w;
    let n = frame.len();
    let eta = structure.eta_at(w)?;
    let vals: Vec<DVector<f64>> = frame.fields.iter().map(|f| f.eval(w)).collect::<Result<_>>()?;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = d_eta_pair(frame, structure, &eta, &frame.fields[i], &vals[i], &frame.fields[j], &vals[j])?;
        }
    }
    Ok(out)
}

fn d_eta_pair(
    frame: &FrameAtPoint,
    structure: &Structure,
    eta: &DVector<f64>,
    a: &InvariantField,
    av: &DVector<f64>,
    b: &InvariantField,
    bv: &DVector<f64>,
) -> Result<f64> {
    let w = &frame.w;
    let deriv = |dir: &DVector<f64>, yv: &DVector<f64>, y: &InvariantField| -> Result<f64> {
        if dir.iter().all(|c| *c == 0.0) {
            return Ok(0.0);
        }
        Ok(structure.eta_derivative(dir)?.dot(yv) + eta.dot(&y.derivative(w, dir)?))
    };
    let ad = slot_of(frame, av);
    let bd = slot_of(frame, bv);
    let br = bracket(frame, a, b)?;
    Ok(0.5 * (deriv(&ad, bv, b)? - deriv(&bd, av, a)? - eta.dot(&br)))
}

/// `dη(·,·) − 𝐠̃(·,φ·)` on frame pairs; its max entry is the contact residual.
pub fn contact_defect(frame: &FrameAtPoint, structure: &Structure) -> Result<DMatrix<f64>> {
    let f = frame.matrix()?;
    let g = structure.metric_at(&frame.w)?;
    let phi = structure.complex_at(&frame.w)?;
    Ok(d_eta(frame, structure)? - f.transpose() * g * phi * f)
}

/// `ω − 2a₀²dθ` on frame pairs with `ω = 𝐠(·, J·)`.
pub fn kahler_defect(frame: &FrameAtPoint, structure: &Structure) -> Result<DMatrix<f64>> {
    let f = frame.matrix()?;
    let g = structure.metric_at(&frame.w)?;
    let j = structure.complex_at(&frame.w)?;
    let a0 = structure.profile.a0_value()?;
    let omega = f.transpose() * g * j * &f;
    Ok(omega - dtheta_at(frame)? * (2.0 * a0 * a0))
}

/// `(L_V 𝐠)(A,B) = V(𝐠(A,B)) − 𝐠([V,A],B) − 𝐠(A,[V,B])` on frame pairs.
pub fn lie_derivative_metric(frame: &FrameAtPoint, structure: &Structure, v: &InvariantField) -> Result<DMatrix<f64>> {
    let w = &frame.w;
    let n = frame.len();
    let g = structure.metric_at(w)?;
    let dir = slot_of(frame, &v.eval(w)?);
    let moving = dir.iter().any(|c| *c != 0.0);
    let dg = if moving { Some(structure.metric_derivative(w, &dir)?) } else { None };
    let vals: Vec<DVector<f64>> = frame.fields.iter().map(|f| f.eval(w)).collect::<Result<_>>()?;
    let brs: Vec<DVector<f64>> = frame.fields.iter().map(|f| bracket(frame, v, f)).collect::<Result<_>>()?;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut first = 0.0;
            if let Some(dg) = &dg {
                let da = frame.fields[i].derivative(w, &dir)?;
                let db = frame.fields[j].derivative(w, &dir)?;
                first = da.dot(&(&g * &vals[j])) + vals[i].dot(&(dg * &vals[j])) + vals[i].dot(&(&g * db));
            }
            out[(i, j)] = first - brs[i].dot(&(&g * &vals[j])) - vals[i].dot(&(&g * &brs[j]));
        }
    }
    Ok(out)
}

/// Nijenhuis tensor on every frame pair, as ambient vectors indexed `i·n + j`.
pub fn nijenhuis_table(frame: &FrameAtPoint, structure: &Structure) -> Result<Vec<DVector<f64>>> {
    let w = &frame.w;
    let jf = structure.complex();
    let j = jf.eval(w)?;
    let jfields: Vec<InvariantField> = frame.fields.iter().map(|f| jf.apply(f)).collect();
    let n = frame.len();
    let mut out = vec![DVector::zeros(frame.basis.ambient_dim()); n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            let (fa, fb) = (&frame.fields[a], &frame.fields[b]);
            let (ja, jb) = (&jfields[a], &jfields[b]);
            let v = bracket(frame, fa, fb)? + &j * bracket(frame, ja, fb)? + &j * bracket(frame, fa, jb)?
                - bracket(frame, ja, jb)?;
            out[b * n + a] = -v.clone();
            out[a * n + b] = v;
        }
    }
    Ok(out)
}

/// Nijenhuis summary: max norm over pairs and the deviation of the
/// `((X_j,0),(ξ^s_λ,0))` components from
/// `(λ_R(X_j)/q_λ²)(1 − q_λ² − q′(λ_R(w)))·ζ^s_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisReport {
    pub max_norm: f64,
    pub closed_form_residual: f64,
    /// Largest closed-form coefficient, for scale.
    pub closed_form_max: f64,
}

pub fn nijenhuis_at(frame: &FrameAtPoint, structure: &Structure) -> Result<NijenhuisReport> {
    if structure.mode != StructureMode::FullW || frame.chart.is_some() {
        return Err(Error::InvalidInput("Nijenhuis tensor is evaluated on the full chamber frame".into()));
    }
    let table = nijenhuis_table(frame, structure)?;
    let n = frame.len();
    let max_norm = table.iter().map(linalg::max_abs_vec).fold(0.0, f64::max);
    let c = structure.realize(&frame.w)?;
    let basis = &frame.basis;
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for slot in frame.root_slots() {
        let blk = &basis.blocks[slot.root];
        let (q, dq) = (c.q[slot.root], c.dq[slot.root]);
        for j in 0..basis.rank {
            let coeff = blk.covector[j] / (q * q) * (1.0 - q * q - dq);
            let mut expect = DVector::zeros(basis.ambient_dim());
            expect[blk.zeta_start + slot.s] = coeff;
            let got = &table[j * n + slot.xi];
            residual = residual.max((got - expect).amax());
            scale = scale.max(coeff.abs());
        }
    }
    Ok(NijenhuisReport {
        max_norm,
        closed_form_residual: residual,
        closed_form_max: scale,
    })
}

/// `N(A,B) = [φ,φ](A,B) + 2dη(A,B)ξ` for `A = ξ` and every frame vector `B`,
/// plus the max over all frame pairs when `all_pairs` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalityReport {
    pub max_norm: f64,
    /// `N(ξ, B)` per frame vector, ambient.
    pub with_xi: Vec<DVector<f64>>,
}

fn normality_pair(
    frame: &FrameAtPoint,
    structure: &Structure,
    phi: &DMatrix<f64>,
    eta: &DVector<f64>,
    xi_val: &DVector<f64>,
    phifield: &crate::frames::field::MatrixField,
    a: &InvariantField,
    b: &InvariantField,
) -> Result<DVector<f64>> {
    let w = &frame.w;
    let (pa, pb) = (phifield.apply(a), phifield.apply(b));
    let tensor = phi * phi * bracket(frame, a, b)? + bracket(frame, &pa, &pb)?
        - phi * bracket(frame, &pa, b)?
        - phi * bracket(frame, a, &pb)?;
    let (av, bv) = (a.eval(w)?, b.eval(w)?);
    let de = d_eta_pair(frame, structure, eta, a, &av, b, &bv)?;
    Ok(tensor + xi_val * (2.0 * de))
}

pub fn normality_tensor_at(frame: &FrameAtPoint, structure: &Structure, all_pairs: bool) -> Result<NormalityReport> {
    let w = &frame.w;
    let phif = structure.complex();
    let phi = phif.eval(w)?;
    let eta = structure.eta_at(w)?;
    let xi = structure.reeb()?;
    let xi_val = xi.eval(w)?;
    let with_xi: Vec<DVector<f64>> = frame
        .fields
        .iter()
        .map(|b| normality_pair(frame, structure, &phi, &eta, &xi_val, &phif, &xi, b))
        .collect::<Result<_>>()?;
    let mut max_norm = with_xi.iter().map(linalg::max_abs_vec).fold(0.0, f64::max);
    if all_pairs {
        let n = frame.len();
        for a in 0..n {
            for b in (a + 1)..n {
                let v = normality_pair(frame, structure, &phi, &eta, &xi_val, &phif, &frame.fields[a], &frame.fields[b])?;
                max_norm = max_norm.max(linalg::max_abs_vec(&v));
            }
        }
    }
    Ok(NormalityReport { max_norm, with_xi })
}

/// `h = ½ L_ξ φ` with `(L_ξφ)A = [ξ,φA] − φ[ξ,A]`, in frame coordinates.
pub fn h_tensor(frame: &FrameAtPoint, structure: &Structure) -> Result<DMatrix<f64>> {
    let w = &frame.w;
    let phif = structure.complex();
    let phi = phif.eval(w)?;
    let xi = structure.reeb()?;
    let finv = frame.left_inverse()?;
    let n = frame.len();
    let mut out = DMatrix::zeros(n, n);
    for (i, a) in frame.fields.iter().enumerate() {
        let v = (bracket(frame, &xi, &phif.apply(a))? - &phi * bracket(frame, &xi, a)?) * 0.5;
        out.set_column(i, &(&finv * v));
    }
    Ok(out)
}

/// Levi-Civita data in rank one.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulReport {
    /// Column `i` is `∇_{e_i} ξ` in frame coordinates.
    pub nabla_xi: DMatrix<f64>,
    /// Max entry of `∇ξ + φ + φh`.
    pub residual: f64,
}

/// `∇_u v` in frame coordinates from
/// `2𝐠̃(∇_u v, z) = 𝐠̃([u,v], z) + 𝐠̃([z,u], v) + 𝐠̃([z,v], u)`.
pub fn koszul_connection(frame: &FrameAtPoint, structure: &Structure, u: &InvariantField, v: &InvariantField) -> Result<DVector<f64>> {
    let w = &frame.w;
    let f = frame.matrix()?;
    let g = structure.metric_at(w)?;
    let gf = f.transpose() * &g * &f;
    let (uv, vv) = (u.eval(w)?, v.eval(w)?);
    let uvb = bracket(frame, u, v)?;
    let rhs = DVector::from_fn(frame.len(), |k, _| {
        let z = &frame.fields[k];
        let zv = z.eval(w).expect("frame field");
        let zu = bracket(frame, z, u).expect("constant fields");
        let zvb = bracket(frame, z, v).expect("constant fields");
        0.5 * (uvb.dot(&(&g * &zv)) + zu.dot(&(&g * &vv)) + zvb.dot(&(&g * &uv)))
    });
    gf.lu().solve(&rhs).ok_or(Error::DegenerateSubspace)
}

pub fn koszul_at(frame: &FrameAtPoint, structure: &Structure) -> Result<KoszulReport> {
    if frame.basis.rank != 1 {
        return Err(Error::UnsupportedRank {
            op: "Levi-Civita connection",
            rank: frame.basis.rank,
        });
    }
    let n = frame.len();
    let xi = structure.reeb()?;
    let mut nabla = DMatrix::zeros(n, n);
    for (i, a) in frame.fields.iter().enumerate() {
        nabla.set_column(i, &koszul_connection(frame, structure, a, &xi)?);
    }
    let f = frame.matrix()?;
    let finv = frame.left_inverse()?;
    let phi = &finv * structure.complex_at(&frame.w)? * &f;
    let h = h_tensor(frame, structure)?;
    let residual = (&nabla + &phi + &phi * h).amax();
    Ok(KoszulReport { nabla_xi: nabla, residual })
}
