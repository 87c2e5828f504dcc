//! Theorem checkers.
//!
//! Every checker first predicts the outcome from the coefficient data alone
//! (for example, whether `a_λ` follows the contact rule) and then measures the
//! corresponding residuals with the frame calculus. A claim predicted false
//! is recorded against the detection floor.

use std::f64::consts::FRAC_PI_3;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frames::{
    contact_defect, h_tensor, induced_standard_metric, kahler_defect, koszul_at, lie_derivative_metric, nijenhuis_at,
    normality_tensor_at, structure_at, AdaptedBasis, FrameAtPoint, Structure,
};
use crate::qcatalog::{
    A0Recipe, ALambdaRecipe, LimitClass, QAssignment, Realized, ScalarProfile, StructureProfile,
};
use crate::symspace::{catalog, sample_points, SpaceId, SphereChart, SymmetricSpace};
use crate::verify::report::{Expectation, VerificationReport};

/// Bounds used by the checkers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Generic bound on residuals of unit-scale frame matrices.
    pub pass: f64,
    pub contact: f64,
    pub killing: f64,
    pub kahler: f64,
    pub riccati: f64,
    /// Smallest residual accepted as a genuine failure.
    pub floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pass: 1e-8,
            contact: 1e-9,
            killing: 1e-9,
            kahler: 1e-10,
            riccati: 1e-12,
            floor: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub tol: Tolerances,
    /// Sample count in rank two and above.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            samples: 10,
            seed: 0,
        }
    }
}

/// A catalog space with its adapted basis.
#[derive(Clone, Debug)]
pub struct SpaceContext {
    pub space: SymmetricSpace,
    pub basis: Arc<AdaptedBasis>,
}

impl SpaceContext {
    pub fn build(id: SpaceId, seed: u64) -> Result<Self> {
        Self::from_space(SymmetricSpace::build(id, seed)?)
    }

    pub fn from_space(space: SymmetricSpace) -> Result<Self> {
        let basis = Arc::new(AdaptedBasis::from_space(&space)?);
        Ok(Self { space, basis })
    }

    pub fn id(&self) -> SpaceId {
        self.space.id
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    fn sphere_points(&self, r: f64, opts: &CheckOptions) -> Result<Vec<(SphereChart, DVector<f64>)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        sample_points(&self.space.roots, &self.space.chamber, r, opts.samples, &mut rng)
    }

    fn sphere_frames(&self, r: f64, opts: &CheckOptions) -> Result<Vec<FrameAtPoint>> {
        self.sphere_points(r, opts)?
            .into_iter()
            .map(|(c, w)| FrameAtPoint::sphere(self.basis.clone(), c, w))
            .collect()
    }
}

/// Identifier shared by a checker and the suite.
pub fn check_id(theorem: &str, space: Option<SpaceId>, detail: &str) -> String {
    let mut s = theorem.to_string();
    if let Some(id) = space {
        s.push('/');
        s.push_str(&id.to_string());
    }
    if !detail.is_empty() {
        s.push('/');
        s.push_str(detail);
    }
    s
}

/// Profile literals joined into an id fragment.
pub fn profile_detail(sp: &StructureProfile) -> String {
    sp.describe().replace(' ', "/")
}

fn profile_params(rep: &mut VerificationReport, sp: &StructureProfile) {
    rep.param("q", &sp.q).param("a0", &sp.a0).param("alambda", &sp.alambda);
    if let Some(r) = sp.radius {
        rep.param("r", r);
    }
    if let Some((i, f)) = sp.perturbation {
        rep.param("perturbation", format!("{i}:{f}"));
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Whether the coefficients satisfy `a_λ = a₀λ_R(w)/(2r q_λ(w))` and, in
/// rank two and above, `a₀ = 1/(2r)`.
fn contact_predicted(rank: usize, c: &Realized, r: f64) -> bool {
    let a0_ok = rank == 1 || close(c.a0, 1.0 / (2.0 * r));
    a0_ok && (0..c.a.len()).all(|i| close(c.a[i], c.a0 * c.lambda[i] / (2.0 * r * c.q[i])))
}

fn all_q_one(c: &Realized) -> bool {
    c.q.iter().all(|q| close(*q, 1.0))
}

fn pack_residuals(rep: &mut VerificationReport, frame: &FrameAtPoint, st: &Structure, tol: &Tolerances) -> Result<()> {
    let pack = structure_at(frame, st)?;
    rep.at_most("phi_square", pack.square_residual(), 1e-10)
        .at_most("compatibility", pack.compatibility_residual(), tol.contact)
        .at_most("eta_xi", pack.unit_residual(), 1e-10);
    if !pack.metric_is_positive() {
        rep.at_most("metric_positive", 1.0, 0.0);
    }
    Ok(())
}

/// Contact identity `dη = 𝐠̃(·,φ·)` on `𝒮_W(r)`.
pub fn check_contact(ctx: &SpaceContext, sp: &StructureProfile, r: f64, opts: &CheckOptions) -> Result<VerificationReport> {
    let sp = sp.clone().with_radius(r);
    let tol = &opts.tol;
    let mut rep = VerificationReport::new(check_id("contact", Some(ctx.id()), &profile_detail(&sp)), Some(ctx.id().to_string()));
    profile_params(&mut rep, &sp);
    rep.param("seed", opts.seed).param("samples", opts.samples);
    let st = Structure::sphere(ctx.basis.clone(), sp.clone(), r)?;
    let frames = ctx.sphere_frames(r, opts)?;
    let mut predicted = true;
    for f in &frames {
        predicted &= contact_predicted(ctx.rank(), &st.realize(&f.w)?, r);
    }
    rep.expect(if predicted { Expectation::Holds } else { Expectation::Fails });
    rep.param("predicted_contact", predicted);
    let roots = ctx.space.roots.root_count();
    let mut perturbed = vec![0.0f64; roots];
    // The almost Kähler metric with a₀ = 1 scaled by 1/(4r²) is the almost
    // Kähler recipe with a₀ = 1/(2r).
    let from_ak = match (&sp.q, &sp.a0, &sp.alambda) {
        (QAssignment::Function(q), A0Recipe::ContactRule, ALambdaRecipe::Contact) => Some(Structure::sphere(
            ctx.basis.clone(),
            StructureProfile::almost_kahler(q.clone(), 1.0 / (2.0 * r)).with_radius(r),
            r,
        )?),
        _ => None,
    };
    for f in &frames {
        pack_residuals(&mut rep, f, &st, tol)?;
        let defect = contact_defect(f, &st)?.amax();
        rep.decide("contact", defect, predicted, tol.contact, tol.floor);
        if predicted {
            for (i, p) in perturbed.iter_mut().enumerate() {
                let bad = Structure::sphere(ctx.basis.clone(), sp.clone().with_perturbation(i, 1.1), r)?;
                *p = p.max(contact_defect(f, &bad)?.amax());
            }
        }
        if let Some(ak) = &from_ak {
            rep.at_most("contact_from_almost_kahler", contact_defect(f, ak)?.amax(), tol.contact);
        }
    }
    if predicted {
        let worst = perturbed.iter().cloned().fold(f64::INFINITY, f64::min);
        rep.at_least("perturbed_10pct", worst, tol.floor);
    }
    Ok(rep.finish())
}

/// `(a₀/r)(w_{j0}²δ_{jk} + w_j w_k)`, the `((Y_j,0),(0,P_k))` entry of `L_ξ𝐠̃`.
pub fn killing_yp_component(a0: f64, r: f64, w: &DVector<f64>, j0: usize, j: usize, k: usize) -> f64 {
    let delta = if j == k { w[j0] * w[j0] } else { 0.0 };
    a0 / r * (delta + w[j] * w[k])
}

/// Whether `ξ` is Killing for `𝐠̃`.
pub fn check_killing(ctx: &SpaceContext, sp: &StructureProfile, r: f64, opts: &CheckOptions) -> Result<VerificationReport> {
    let sp = sp.clone().with_radius(r);
    let tol = &opts.tol;
    let mut rep = VerificationReport::new(check_id("killing", Some(ctx.id()), &profile_detail(&sp)), Some(ctx.id().to_string()));
    profile_params(&mut rep, &sp);
    rep.param("seed", opts.seed).param("samples", opts.samples);
    let st = Structure::sphere(ctx.basis.clone(), sp.clone(), r)?;
    let xi = st.reeb()?;
    let frames = ctx.sphere_frames(r, opts)?;
    let mut predicted = ctx.rank() == 1;
    for f in &frames {
        predicted &= all_q_one(&st.realize(&f.w)?);
    }
    rep.expect(if predicted { Expectation::Holds } else { Expectation::Fails });
    rep.param("predicted_killing", predicted);
    for f in &frames {
        let l = lie_derivative_metric(f, &st, &xi)?;
        rep.decide("lie_xi_g", l.amax(), predicted, tol.killing, tol.floor);
        let c = st.realize(&f.w)?;
        let chart = f.chart.as_ref().expect("sphere frame");
        if let Some(j0) = chart.j0() {
            let tangent = chart.tangent_indices();
            let t = tangent.len();
            let mut dev = 0.0f64;
            for (ia, &j) in tangent.iter().enumerate() {
                for (ib, &k) in tangent.iter().enumerate() {
                    let expect = killing_yp_component(c.a0, r, &f.w, j0, j, k);
                    dev = dev.max((l[(1 + ia, 1 + t + ib)] - expect).abs());
                }
            }
            rep.at_most("lie_xi_g_yp_component", dev, tol.pass);
        } else {
            let mut dev = 0.0f64;
            for slot in f.root_slots() {
                let lx = ctx.basis.blocks[slot.root].covector[0];
                let i = slot.root;
                let expect = lx / c.a0 * (c.b[i] - c.a[i]);
                dev = dev.max((l[(slot.xi, slot.zeta)] - expect).abs());
            }
            rep.at_most("lie_xi_g_root_component", dev, tol.pass);
        }
    }
    if ctx.rank() == 1 {
        // Sasaki metric: Killing exactly for the unit tangent sphere bundle of
        // a round sphere or real projective space. HP¹ is the round S⁴.
        let family_killing = matches!(ctx.id(), SpaceId::Sphere(_) | SpaceId::Rp(_) | SpaceId::Hp(1)) && close(r, 1.0);
        let ab = induced_standard_metric(&ctx.space.roots, r)?;
        let diff = ab.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        rep.decide("standard_a_minus_b", diff, family_killing, tol.pass, tol.floor);
        let standard = Structure::sphere(ctx.basis.clone(), StructureProfile::standard(Some(r)), r)?;
        let l = lie_derivative_metric(&frames[0], &standard, &standard.reeb()?)?;
        rep.decide("standard_lie_xi_g", l.amax(), family_killing, tol.killing, tol.floor);
        rep.param("standard_killing", family_killing);
    }
    Ok(rep.finish())
}

/// `(λ_R(X)/(2κq))(q² − 1)`, the eigenvalue of `h` on `𝔪_λ`.
pub fn h_eigenvalue(lambda_x: f64, kappa: f64, q: f64) -> f64 {
    lambda_x / (2.0 * kappa * q) * (q * q - 1.0)
}

/// Classification of the rank-one contact structures with `a₀ = κ` and
/// constant `q_λ`.
pub fn check_rank1_classification(
    ctx: &SpaceContext,
    kappa: f64,
    q_values: &[f64],
    r: f64,
    opts: &CheckOptions,
) -> Result<VerificationReport> {
    if ctx.rank() != 1 {
        return Err(Error::UnsupportedRank {
            op: "rank-one classification",
            rank: ctx.rank(),
        });
    }
    let tol = &opts.tol;
    let sp = StructureProfile::contact_kappa(QAssignment::PerRoot(q_values.to_vec()), kappa, r);
    let mut rep = VerificationReport::new(check_id("rank1", Some(ctx.id()), &profile_detail(&sp)), Some(ctx.id().to_string()));
    profile_params(&mut rep, &sp);
    rep.param("kappa", kappa);
    let st = Structure::sphere(ctx.basis.clone(), sp, r)?;
    let frame = ctx.sphere_frames(r, opts)?.remove(0);
    let c = st.realize(&frame.w)?;
    let k_contact = all_q_one(&c);
    rep.param("k_contact", k_contact);
    rep.param("class", if k_contact { "sasakian" } else { "contact" });

    pack_residuals(&mut rep, &frame, &st, tol)?;
    rep.at_most("contact", contact_defect(&frame, &st)?.amax(), tol.contact);
    let lx: Vec<f64> = ctx.basis.blocks.iter().map(|b| b.covector[0]).collect();
    let b_dev = (0..c.b.len())
        .map(|i| (c.b[i] - kappa * kappa * lx[i] * lx[i] / (4.0 * c.a[i])).abs())
        .fold(0.0, f64::max);
    rep.at_most("b_from_a", b_dev, tol.pass);
    let l = lie_derivative_metric(&frame, &st, &st.reeb()?)?;
    rep.decide("lie_xi_g", l.amax(), k_contact, tol.killing, tol.floor);
    let normal = normality_tensor_at(&frame, &st, true)?;
    rep.decide("normality", normal.max_norm, k_contact, tol.pass, tol.floor);
    if k_contact {
        // a₀ = κ and a_λ = κλ_R(X)/2: κ², κ/2, κ/4 for ε = 1, ε/2 = 1/2.
        let dev = (0..c.a.len()).map(|i| (c.a[i] - kappa * lx[i] / 2.0).abs()).fold(0.0, f64::max);
        rep.at_most("sasakian_coefficients", dev, tol.pass);
    }

    let h = h_tensor(&frame, &st)?;
    let n = frame.len();
    let mut expect = DMatrix::zeros(n, n);
    for slot in frame.root_slots() {
        let e = h_eigenvalue(lx[slot.root], kappa, c.q[slot.root]);
        expect[(slot.xi, slot.xi)] = e;
        expect[(slot.zeta, slot.zeta)] = -e;
    }
    rep.at_most("h_eigenvalues", (&h - &expect).amax(), tol.pass);
    rep.at_most("h_xi", h.column(0).amax(), tol.pass);
    rep.at_most("h_trace", h.trace().abs(), tol.pass);
    let fm = frame.matrix()?;
    let gf = fm.transpose() * st.metric_at(&frame.w)? * &fm;
    let gh = &gf * &h;
    rep.at_most("h_symmetric", (&gh - gh.transpose()).amax(), tol.pass);
    rep.at_most("nabla_xi", koszul_at(&frame, &st)?.residual, tol.pass);
    Ok(rep.finish())
}

/// Largest `|1 − q² − q′|` on `[0.05, 5]`.
pub fn riccati_sup(q: &ScalarProfile) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..200 {
        let t = 0.05 + 4.95 * i as f64 / 199.0;
        worst = worst.max(q.riccati_residual(t)?.abs());
    }
    Ok(worst)
}

/// Per-decade growth exponent of `q(t)/t` as `t → 0⁺`.
pub fn limit_growth(q: &ScalarProfile) -> f64 {
    let s = q.limit_samples();
    (s[3] / s[2]).abs().log10()
}

/// The almost Kähler structure on `G/H × W`, its extension to `T(G/K)` and
/// integrability.
pub fn check_almost_kahler(ctx: &SpaceContext, q: &ScalarProfile, a0: f64, opts: &CheckOptions) -> Result<VerificationReport> {
    let tol = &opts.tol;
    let sp = StructureProfile::almost_kahler(q.clone(), a0);
    let mut rep = VerificationReport::new(check_id("almost-kahler", Some(ctx.id()), &profile_detail(&sp)), Some(ctx.id().to_string()));
    profile_params(&mut rep, &sp);
    rep.param("seed", opts.seed).param("samples", opts.samples);
    let st = Structure::full(ctx.basis.clone(), sp);

    let ric = riccati_sup(q)?;
    let integrable = ric <= tol.riccati;
    let analytic = q.limit_class();
    let feasible = matches!(analytic, LimitClass::Finite(_));
    rep.param("riccati_solution", integrable)
        .param("extends", feasible)
        .param("kahler", integrable && feasible)
        .param("limit_class", format!("{analytic:?}"));
    rep.expect(if feasible { Expectation::Holds } else { Expectation::Fails });
    rep.decide("riccati", ric, integrable, tol.riccati, tol.floor);
    rep.at_most("limit_class_mismatch", if q.limit_cross_check() { 0.0 } else { 1.0 }, 0.0);
    rep.decide("limit_growth", limit_growth(q), feasible, tol.floor, tol.floor);

    let mut nij_max = 0.0f64;
    for (_, w) in ctx.sphere_points(1.0, opts)? {
        for scale in [0.5, 1.0, 2.0] {
            let frame = FrameAtPoint::full(ctx.basis.clone(), &w * scale)?;
            let pack = structure_at(&frame, &st)?;
            rep.at_most("j_square", pack.square_residual(), 1e-10)
                .at_most("compatibility", pack.compatibility_residual(), tol.contact)
                .at_most("kahler_form", kahler_defect(&frame, &st)?.amax(), tol.kahler);
            if !pack.metric_is_positive() {
                rep.at_most("metric_positive", 1.0, 0.0);
            }
            let nij = nijenhuis_at(&frame, &st)?;
            rep.at_most("nijenhuis_closed_form", nij.closed_form_residual, tol.pass);
            if feasible {
                rep.decide("nijenhuis", nij.max_norm, integrable, tol.pass, tol.floor);
            }
            nij_max = nij_max.max(nij.max_norm);
        }
    }
    rep.param("nijenhuis_max", format!("{nij_max:.3e}"));
    if !feasible && integrable && nij_max > tol.floor {
        // The Riccati equation only controls the ((X_j,0),(ξ,0)) components.
        rep.note(format!(
            "{q} solves the Riccati equation but the Nijenhuis tensor has nonzero components \
             between different roots (max {nij_max:.3e}); it is not integrable on this space"
        ));
    }
    Ok(rep.finish())
}

/// Agreement of Killing, normal and (rank one ∧ all `q_λ = 1`).
pub fn check_normality(ctx: &SpaceContext, sp: &StructureProfile, r: f64, opts: &CheckOptions) -> Result<VerificationReport> {
    let sp = sp.clone().with_radius(r);
    let tol = &opts.tol;
    let mut rep = VerificationReport::new(check_id("normality", Some(ctx.id()), &profile_detail(&sp)), Some(ctx.id().to_string()));
    profile_params(&mut rep, &sp);
    rep.param("seed", opts.seed).param("samples", opts.samples);
    let st = Structure::sphere(ctx.basis.clone(), sp, r)?;
    let xi = st.reeb()?;
    let frames = ctx.sphere_frames(r, opts)?;
    let mut condition = ctx.rank() == 1;
    for f in &frames {
        condition &= all_q_one(&st.realize(&f.w)?);
    }
    let mut killing_max = 0.0f64;
    let mut normal_max = 0.0f64;
    for f in &frames {
        let c = st.realize(&f.w)?;
        killing_max = killing_max.max(lie_derivative_metric(f, &st, &xi)?.amax());
        let nrep = normality_tensor_at(f, &st, true)?;
        normal_max = normal_max.max(nrep.max_norm);
        let chart = f.chart.as_ref().expect("sphere frame");
        let mut dev = 0.0f64;
        if chart.j0().is_some() {
            // N(ξ, (Y_j,0)) = (1/(r a₀))(0, P_j).
            let t = chart.tangent_indices().len();
            for a in 0..t {
                let expect = f.fields[1 + t + a].eval(&f.w)? / (r * c.a0);
                dev = dev.max((&nrep.with_xi[1 + a] - expect).amax());
            }
        } else {
            // N(ξ, ξ^s) = (λ_R(X)/(a₀q²))(q² − 1) ζ^s.
            for slot in f.root_slots() {
                let blk = &ctx.basis.blocks[slot.root];
                let q = c.q[slot.root];
                let mut expect = DVector::zeros(ctx.basis.ambient_dim());
                expect[blk.zeta_start + slot.s] = blk.covector[0] / (c.a0 * q * q) * (q * q - 1.0);
                dev = dev.max((&nrep.with_xi[slot.xi] - expect).amax());
            }
        }
        rep.at_most("normality_xi_component", dev, tol.pass);
    }
    let killing = killing_max <= tol.killing;
    let normal = normal_max <= tol.pass;
    rep.param("killing", killing).param("normal", normal).param("rank_one_q_one", condition);
    rep.decide("lie_xi_g", killing_max, condition, tol.killing, tol.floor);
    rep.decide("normality", normal_max, condition, tol.pass, tol.floor);
    Ok(rep.finish())
}

/// Restricted-root structure: pairing relations and orthogonality.
pub fn check_decomposition(ctx: &SpaceContext, opts: &CheckOptions) -> Result<VerificationReport> {
    let tol = &opts.tol;
    let mut rep = VerificationReport::new(check_id("decomposition", Some(ctx.id()), ""), Some(ctx.id().to_string()));
    let pair = &ctx.space.pair;
    let alg = pair.algebra();
    let roots = &ctx.space.roots;
    rep.param("seed", ctx.space.seed).param("rank", ctx.rank()).param("roots", roots.root_count());
    rep.at_most("pairing", roots.pairing_residual(alg), tol.pass)
        .at_most("zeta_orthonormality", roots.zeta_orthonormality_residual(alg), tol.pass)
        .at_most("root_orthogonality", roots.root_orthogonality_residual(alg), tol.pass)
        .at_most("centralizer", roots.centralizer_residual(alg), tol.pass)
        .at_most("bracket_inclusion", pair.bracket_inclusion_residual(), tol.pass);
    let total = roots.mbar_dim() + roots.centralizer_basis.len();
    rep.at_most("dimension_gap", total.abs_diff(alg.dim()) as f64, 0.0);
    Ok(rep.finish())
}

/// Table of rank-one multiplicities: `(n−1, 0)`, `(1, 2n−2)`, `(3, 4n−4)`.
pub fn table_multiplicities(id: SpaceId) -> Option<(usize, usize)> {
    match id {
        SpaceId::Sphere(n) | SpaceId::Rp(n) => Some((n - 1, 0)),
        SpaceId::Cp(n) => Some((1, 2 * n - 2)),
        SpaceId::Hp(n) => Some((3, 4 * n - 4)),
        _ => None,
    }
}

/// `|λ|` on `r(cosθ X_1 + sinθ X_2)` for `λ_12, λ_23, λ_13` of `SU(3)/SO(3)`.
pub fn su3_root_values(theta: f64, r: f64) -> [f64; 3] {
    let s3 = 3f64.sqrt();
    [
        r * (s3 * theta.cos() + theta.sin()),
        r * (s3 * theta.cos() - theta.sin()),
        2.0 * r * theta.sin(),
    ]
}

/// Multiplicity table and the `SU(3)/SO(3)` data.
pub fn check_catalog_tables(opts: &CheckOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("tables", None);
    rep.param("seed", opts.seed);
    for id in catalog() {
        let Some((me, mh)) = table_multiplicities(id) else { continue };
        let s = SymmetricSpace::build(id, opts.seed)?;
        let (ge, gh) = s.roots.rank_one_multiplicities().unwrap_or((usize::MAX, usize::MAX));
        let gap = (ge.abs_diff(me) + gh.abs_diff(mh)) as f64;
        rep.at_most(&format!("multiplicity[{id}]"), gap, 0.0);
        rep.param(&format!("m[{id}]"), format!("{ge},{gh}"));
    }

    let id = SpaceId::SuSo(3);
    let s = SymmetricSpace::build(id, opts.seed)?;
    let alg = s.pair.algebra();
    rep.at_most("su_so3.dim_m", (s.pair.m_basis.len() as f64 - 5.0).abs(), 0.0)
        .at_most("su_so3.dim_h", s.roots.centralizer_basis.len() as f64, 0.0)
        .at_most("su_so3.root_count", (s.roots.root_count() as f64 - 3.0).abs(), 0.0);
    let mult_gap: usize = s.roots.roots.iter().map(|r| r.multiplicity.abs_diff(1)).sum();
    rep.at_most("su_so3.multiplicities", mult_gap as f64, 0.0);
    let tmax = s.chamber.theta_max.unwrap_or(f64::NAN);
    rep.at_most("su_so3.theta_max", (tmax - FRAC_PI_3).abs(), 1e-9);

    let unit = |label: &str| -> Result<DVector<f64>> {
        let i = alg.index_of(label).ok_or_else(|| Error::InvalidInput(format!("no basis element {label}")))?;
        let mut v = DVector::zeros(alg.dim());
        v[i] = 1.0;
        Ok(&v / alg.norm(&v))
    };
    let cos = |a: &DVector<f64>, b: &DVector<f64>| (alg.inner(a, b) / (alg.norm(a) * alg.norm(b))).abs();
    let mut matched = Vec::new();
    let mut worst_align = f64::INFINITY;
    for (c, b) in [("C12", "B12"), ("C23", "B23"), ("C13", "B13")] {
        let (cv, bv) = (unit(c)?, unit(b)?);
        let best = s
            .roots
            .roots
            .iter()
            .enumerate()
            .max_by(|x, y| cos(&x.1.m_basis[0], &cv).total_cmp(&cos(&y.1.m_basis[0], &cv)))
            .map(|(i, _)| i)
            .ok_or(Error::EmptyChamber)?;
        let root = &s.roots.roots[best];
        worst_align = worst_align.min(cos(&root.m_basis[0], &cv)).min(cos(&root.k_basis[0], &bv));
        matched.push(best);
    }
    let mut distinct = matched.clone();
    distinct.sort_unstable();
    distinct.dedup();
    rep.at_most("su_so3.alignment_deficit", 1.0 - worst_align, 1e-8);
    rep.at_most("su_so3.root_matching", (3 - distinct.len()) as f64, 0.0);

    // λ_R on r(cosθ X_1 + sinθ X_2) with X_1 = (A12 − A23)/√3, X_2 = A12 + A23.
    let (a12, a23) = (unit("A12")?, unit("A23")?);
    let x1 = (&a12 - &a23) / 3f64.sqrt();
    let x2 = &a12 + &a23;
    let r = 1.0;
    let mut value_dev = 0.0f64;
    for i in 0..10 {
        let theta = 0.05 + (FRAC_PI_3 - 0.1) * i as f64 / 9.0;
        let wv = (&x1 * theta.cos() + &x2 * theta.sin()) * r;
        let w = DVector::from_iterator(s.rank(), s.roots.cartan_basis.iter().map(|x| alg.inner(&wv, x)));
        let expect = su3_root_values(theta, r);
        for (k, &root) in matched.iter().enumerate() {
            value_dev = value_dev.max((s.roots.roots[root].value(&w) - expect[k]).abs());
        }
    }
    rep.at_most("su_so3.root_values", value_dev, 1e-9);
    rep.note(
        "su_so3: with the stated values on A12, A23 every positive root is positive on W, \
         giving r(sqrt3 cos t + sin t), r(sqrt3 cos t - sin t), 2r sin t for the C12, C23, C13 roots; \
         the printed restrictions of lambda_1 and lambda_3 carry a minus sign and would be negative on W. \
         Computed values match their absolute values.",
    );

    let g = SymmetricSpace::build(SpaceId::Grass(3), opts.seed)?;
    let gmax = g.chamber.theta_max.unwrap_or(f64::NAN);
    rep.at_most("grass3.theta_max", (gmax - std::f64::consts::FRAC_PI_4).abs(), 1e-9);
    Ok(rep.finish())
}
