use std::sync::Arc;

use nalgebra::DVector;
use symtan::frames::calculus::{bracket, max_h_component};
use symtan::frames::*;
use symtan::qcatalog::{A0Recipe, ALambdaRecipe, QAssignment, ScalarProfile, StructureProfile};
use symtan::symspace::{SpaceId, SphereChart, SymmetricSpace};

fn basis(id: SpaceId) -> Arc<AdaptedBasis> {
    let s = SymmetricSpace::build(id, 0).unwrap();
    Arc::new(AdaptedBasis::from_space(&s).unwrap())
}

fn thetas() -> Vec<f64> {
    let tmax = std::f64::consts::FRAC_PI_3;
    (0..10).map(|i| 0.05 + (tmax - 0.1) * i as f64 / 9.0).collect()
}

#[test]
fn bracket_lemma_on_su_so3() {
    let b = basis(SpaceId::SuSo(3));
    let r = 1.3;
    let chart = SphereChart::new(2, r, None).unwrap();
    for theta in thetas() {
        let w = chart.arc_point(theta).unwrap();
        let frame = FrameAtPoint::sphere(b.clone(), chart.clone(), w.clone()).unwrap();
        let xis = &frame.fields[0];
        let (y, p) = (&frame.fields[1], &frame.fields[2]);
        assert!(bracket(&frame, xis, y).unwrap().amax() < 1e-12);
        let expect = y.eval(&w).unwrap() * (-1.0 / r);
        assert!((bracket(&frame, xis, p).unwrap() - expect).amax() < 1e-12);
        for slot in frame.root_slots() {
            let lam = b.blocks[slot.root].covector.dot(&w);
            let (xi, zeta) = (&frame.fields[slot.xi], &frame.fields[slot.zeta]);
            let e1 = zeta.eval(&w).unwrap() * (-lam / r);
            let e2 = xi.eval(&w).unwrap() * (lam / r);
            assert!((bracket(&frame, xis, xi).unwrap() - e1).amax() < 1e-9);
            assert!((bracket(&frame, xis, zeta).unwrap() - e2).amax() < 1e-9);
            assert_eq!(bracket(&frame, xi, xi).unwrap().amax(), 0.0);
        }
        assert!(max_h_component(&frame).unwrap() < 1e-12);
    }
}

#[test]
fn dtheta_closed_form_matches_calculus() {
    for id in [SpaceId::SuSo(3), SpaceId::Cp(2), SpaceId::Grass(3)] {
        let b = basis(id);
        let s = SymmetricSpace::build(id, 0).unwrap();
        let w = &s.chamber.witness * 0.8;
        let frame = FrameAtPoint::full(b.clone(), w.clone()).unwrap();
        let a = dtheta_at(&frame).unwrap();
        let c = dtheta_by_calculus(&frame).unwrap();
        assert!((&a - &c).amax() < 1e-12, "{id}");
        assert!((&a + a.transpose()).amax() < 1e-15);
        let r = b.rank;
        assert!((a[(0, r)] + 0.5).abs() < 1e-15);
        for slot in frame.root_slots() {
            let lam = b.blocks[slot.root].covector.dot(&w);
            assert!((a[(slot.xi, slot.zeta)] - lam / 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn standard_structure_values() {
    let b = basis(SpaceId::SuSo(3));
    let w = DVector::from_vec(vec![0.9, 0.2]);
    let frame = FrameAtPoint::full(b.clone(), w.clone()).unwrap();
    let pack = standard_structure_at(&frame).unwrap();
    assert!(pack.square_residual() < 1e-12);
    assert!(pack.compatibility_residual() < 1e-12);
    for slot in frame.root_slots() {
        let lam = b.blocks[slot.root].covector.dot(&w);
        assert!((pack.g[(slot.zeta, slot.zeta)] - lam * lam).abs() < 1e-12);
        assert!((pack.j_or_phi[(slot.zeta, slot.xi)] + 1.0 / lam).abs() < 1e-12);
    }
    // Almost Kähler with q = id, a₀ = 1 reproduces the standard metric.
    let ak = Structure::full(b.clone(), StructureProfile::almost_kahler(ScalarProfile::identity(), 1.0));
    let p2 = structure_at(&frame, &ak).unwrap();
    assert!((&p2.g - &pack.g).amax() < 1e-12);
}

#[test]
fn nijenhuis_closed_form() {
    for id in [SpaceId::SuSo(3), SpaceId::Cp(2), SpaceId::Sphere(3)] {
        let b = basis(id);
        let s = SymmetricSpace::build(id, 0).unwrap();
        let w = &s.chamber.witness * 0.7;
        let frame = FrameAtPoint::full(b.clone(), w).unwrap();
        for lit in ["id", "sinh:1", "tanh:1"] {
            let q: ScalarProfile = lit.parse().unwrap();
            let st = Structure::full(b.clone(), StructureProfile::almost_kahler(q, 1.0));
            let rep = nijenhuis_at(&frame, &st).unwrap();
            assert!(rep.closed_form_residual < 1e-8, "{id} {lit}: {}", rep.closed_form_residual);
            if lit == "tanh:1" {
                assert!(rep.max_norm < 1e-8, "{id} tanh max {}", rep.max_norm);
            } else {
                assert!(rep.max_norm > 1e-3);
            }
        }
    }
}

#[test]
fn almost_kahler_identity() {
    let b = basis(SpaceId::SuSo(3));
    let w = DVector::from_vec(vec![0.8, 0.3]);
    let frame = FrameAtPoint::full(b.clone(), w).unwrap();
    for a0 in [1.0, 0.4] {
        let st = Structure::full(b.clone(), StructureProfile::almost_kahler(ScalarProfile::tanh(), a0));
        assert!(kahler_defect(&frame, &st).unwrap().amax() < 1e-10);
    }
}

#[test]
fn contact_identity_and_perturbation() {
    for id in [SpaceId::SuSo(3), SpaceId::Sphere(3), SpaceId::Hp(1)] {
        let b = basis(id);
        let s = SymmetricSpace::build(id, 0).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let chart = SphereChart::new(b.rank, r, None).unwrap();
            let w = if b.rank == 1 {
                chart.rank_one_point().unwrap()
            } else {
                chart.arc_point(0.4).unwrap()
            };
            let frame = FrameAtPoint::sphere(b.clone(), chart, w).unwrap();
            let prof = StructureProfile::contact(QAssignment::Function(ScalarProfile::tanh()), r);
            let st = Structure::sphere(b.clone(), prof.clone(), r).unwrap();
            assert!(contact_defect(&frame, &st).unwrap().amax() < 1e-9, "{id} r={r}");
            let pack = structure_at(&frame, &st).unwrap();
            assert!(pack.square_residual() < 1e-10);
            assert!(pack.compatibility_residual() < 1e-9);
            assert!(pack.unit_residual() < 1e-12);
            for i in 0..s.roots.root_count() {
                let bad = Structure::sphere(b.clone(), prof.clone().with_perturbation(i, 1.1), r).unwrap();
                assert!(contact_defect(&frame, &bad).unwrap().amax() >= 1e-3, "{id} r={r} root {i}");
            }
        }
    }
}

#[test]
fn rank_two_killing_component() {
    let b = basis(SpaceId::SuSo(3));
    let r = 1.0;
    let chart = SphereChart::new(2, r, None).unwrap();
    for theta in thetas() {
        let w = chart.arc_point(theta).unwrap();
        let frame = FrameAtPoint::sphere(b.clone(), chart.clone(), w.clone()).unwrap();
        let st = Structure::sphere(b.clone(), StructureProfile::contact(QAssignment::Function(ScalarProfile::tanh()), r), r).unwrap();
        let xi = st.reeb().unwrap();
        let l = lie_derivative_metric(&frame, &st, &xi).unwrap();
        let a0 = 1.0 / (2.0 * r);
        let expect = a0 / r * (w[1] * w[1] + w[0] * w[0]);
        assert!((l[(1, 2)] - expect).abs() < 1e-8, "{} vs {expect}", l[(1, 2)]);
    }
}

#[test]
fn rank_one_h_and_koszul() {
    let b = basis(SpaceId::Sphere(3));
    let (kappa, q, r) = (2.0, 3.0, 1.0);
    let chart = SphereChart::new(1, r, None).unwrap();
    let frame = FrameAtPoint::sphere(b.clone(), chart, DVector::from_element(1, r)).unwrap();
    let prof = StructureProfile::new(QAssignment::PerRoot(vec![q]), A0Recipe::Constant(kappa), ALambdaRecipe::Contact, Some(r));
    let st = Structure::sphere(b.clone(), prof, r).unwrap();
    let h = h_tensor(&frame, &st).unwrap();
    for slot in frame.root_slots() {
        assert!((h[(slot.xi, slot.xi)] - 2.0 / 3.0).abs() < 1e-12);
        assert!((h[(slot.zeta, slot.zeta)] + 2.0 / 3.0).abs() < 1e-12);
    }
    let k = koszul_at(&frame, &st).unwrap();
    assert!(k.residual < 1e-10, "{}", k.residual);
    for slot in frame.root_slots() {
        let expect = (1.0 / q) * (1.0 + (1.0 / (2.0 * kappa * q)) * (q * q - 1.0));
        assert!((k.nabla_xi[(slot.zeta, slot.xi)] - expect).abs() < 1e-12);
    }
}

#[test]
fn normality_components() {
    // Rank one: N(ξ, ξ^s) = (λ/(a₀q²))(q²−1) ζ^s.
    let b = basis(SpaceId::Cp(2));
    let r = 0.5;
    let chart = SphereChart::new(1, r, None).unwrap();
    let frame = FrameAtPoint::sphere(b.clone(), chart, DVector::from_element(1, r)).unwrap();
    let q = 2.0;
    let prof = StructureProfile::contact(QAssignment::PerRoot(vec![q]), r);
    let st = Structure::sphere(b.clone(), prof, r).unwrap();
    let rep = normality_tensor_at(&frame, &st, true).unwrap();
    let a0 = 1.0 / (2.0 * r);
    for slot in frame.root_slots() {
        let lam = b.blocks[slot.root].covector[0];
        let coeff = lam / (a0 * q * q) * (q * q - 1.0);
        let v = &rep.with_xi[slot.xi];
        let zeta_index = b.blocks[slot.root].zeta_start + slot.s;
        assert!((v[zeta_index] - coeff).abs() < 1e-10);
    }
    let ok = StructureProfile::contact(QAssignment::PerRoot(vec![1.0]), r);
    let st1 = Structure::sphere(b.clone(), ok, r).unwrap();
    assert!(normality_tensor_at(&frame, &st1, true).unwrap().max_norm < 1e-8);

    // Rank two: N(ξ, (Y_1,0)) = (1/(r a₀))(0, P_1).
    let b = basis(SpaceId::SuSo(3));
    let r = 1.0;
    let chart = SphereChart::new(2, r, None).unwrap();
    let w = chart.arc_point(0.5).unwrap();
    let frame = FrameAtPoint::sphere(b.clone(), chart, w.clone()).unwrap();
    let st = Structure::sphere(b.clone(), StructureProfile::contact(QAssignment::Function(ScalarProfile::tanh()), r), r).unwrap();
    let rep = normality_tensor_at(&frame, &st, false).unwrap();
    let a0 = 1.0 / (2.0 * r);
    let expect = frame.fields[2].eval(&w).unwrap() / (r * a0);
    assert!((&rep.with_xi[1] - expect).amax() < 1e-9);
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    let b = basis(SpaceId::SuSo(3));
    let w = DVector::from_vec(vec![0.9, 0.25]);
    let dir = DVector::from_vec(vec![0.3, -0.7]);
    let st = Structure::full(b.clone(), StructureProfile::almost_kahler("sinh:1.5".parse().unwrap(), 1.0));
    assert!(st.complex().derivative_discrepancy(&w, &dir).unwrap() < 1e-7);
    assert!(st.metric().derivative_discrepancy(&w, &dir).unwrap() < 1e-7);
    let frame = FrameAtPoint::full(b.clone(), w.clone()).unwrap();
    let jx = st.complex().apply(&frame.fields[3]);
    assert!(jx.derivative_discrepancy(&w, &dir).unwrap() < 1e-7);
    // Finite-difference mode reproduces the analytic bracket.
    let num = jx.to_numeric();
    let a = bracket(&frame, &frame.fields[2], &jx).unwrap();
    let n = bracket(&frame, &frame.fields[2], &num).unwrap();
    assert!((a - n).amax() < 1e-7);
}

#[test]
fn metric_and_complex_structure_are_ad_h_equivariant() {
    use symtan::lie_core::AlgebraElement;
    use symtan::symspace::adjoint_matrix;
    for id in [SpaceId::Sphere(4), SpaceId::Cp(3), SpaceId::Hp(2)] {
        let s = SymmetricSpace::build(id, 0).unwrap();
        let alg = s.pair.algebra();
        let b = Arc::new(AdaptedBasis::from_space(&s).unwrap());
        assert!(b.h_dim > 0, "{id}");
        // exp of a generic centralizer element.
        let mut z = DVector::zeros(alg.dim());
        for (i, v) in s.roots.centralizer_basis.iter().enumerate() {
            z += v * (0.7 + 0.31 * i as f64);
        }
        let k = alg.exp_matrix(&AlgebraElement::new(alg, z).unwrap());
        let ad = adjoint_matrix(alg, &k).unwrap();
        let n = b.ambient_dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..b.mbar_dim {
            let img = &alg.gram * (&ad * &b.vectors[i]);
            for j in 0..b.mbar_dim {
                m[(j, i)] = b.vectors[j].dot(&img);
            }
        }
        for j in 0..b.rank {
            m[(b.slot(j), b.slot(j))] = 1.0;
        }
        assert!((m.transpose() * &m - nalgebra::DMatrix::identity(n, n)).amax() < 1e-9, "{id} not orthogonal on m-bar");
        let w = &s.chamber.witness * 0.6;
        let st = Structure::full(b.clone(), StructureProfile::almost_kahler(ScalarProfile::tanh(), 1.0));
        let g = st.metric_at(&w).unwrap();
        let j = st.complex_at(&w).unwrap();
        assert!((&g * &m - &m * &g).amax() < 1e-8, "{id} metric");
        assert!((&j * &m - &m * &j).amax() < 1e-8, "{id} complex");
    }
}
