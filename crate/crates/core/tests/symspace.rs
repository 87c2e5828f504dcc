use std::f64::consts::PI;

use nalgebra::DVector;
use symtan::lie_core::AlgebraElement;
use symtan::symspace::chart::y_vector;
use symtan::symspace::connection::{adjoint_action, max_connection_norm};
use symtan::symspace::{catalog, SpaceId, SymmetricSpace};

#[test]
fn every_catalog_space_decomposes_completely() {
    for id in catalog() {
        let s = SymmetricSpace::build(id, 3).unwrap_or_else(|e| panic!("{id}: {e}"));
        let alg = s.pair.algebra();
        assert_eq!(s.rank(), id.rank(), "{id}");
        let total: usize = s.roots.roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(s.rank() + total, s.pair.m_basis.len(), "{id}");
        assert_eq!(s.roots.centralizer_basis.len() + total, s.pair.k_basis.len(), "{id}");
        assert!(s.roots.pairing_residual(alg) <= 1e-8, "{id}");
        assert!(s.roots.root_orthogonality_residual(alg) <= 1e-9, "{id}");
        assert!(s.roots.zeta_orthonormality_residual(alg) <= 1e-9, "{id}");
        assert!(s.roots.centralizer_residual(alg) <= 1e-9, "{id}");
        assert!(s.chamber.contains(&s.roots, &s.chamber.witness), "{id}");
        assert!(s.pair.bracket_inclusion_residual() <= 1e-10, "{id}");
    }
}

#[test]
fn rank_one_multiplicities_match_table() {
    for id in catalog().into_iter().filter(|id| id.rank() == 1) {
        let s = SymmetricSpace::build(id, 5).unwrap();
        assert_eq!(s.roots.rank_one_multiplicities(), id.rank_one_multiplicities(), "{id}");
        if let Some(&(big, small)) = s.roots.doubled_pairs.first() {
            let ratio = s.roots.roots[big].covector[0] / s.roots.roots[small].covector[0];
            assert!((ratio - 2.0).abs() <= 1e-9);
        }
        // Normalization: ε_R(X) = 1.
        let eps = s.roots.roots.iter().find(|r| r.label == "eps").unwrap();
        assert!((eps.covector[0] - 1.0).abs() < 1e-12, "{id}");
    }
}

#[test]
fn chamber_angles() {
    let su = SymmetricSpace::build(SpaceId::SuSo(3), 1).unwrap();
    assert!((su.chamber.theta_max.unwrap() - PI / 3.0).abs() <= 1e-9);
    let gr = SymmetricSpace::build(SpaceId::Grass(3), 1).unwrap();
    assert!((gr.chamber.theta_max.unwrap() - PI / 4.0).abs() <= 1e-9);
    // X_1 spans a wall: the ray at angle 0.
    assert!((su.chamber.rays.iter().map(|r| r[0]).fold(0.0, f64::max) - 1.0).abs() < 1e-12);
}

#[test]
fn su_so3_roots_against_table() {
    let s = SymmetricSpace::build(SpaceId::SuSo(3), 2).unwrap();
    let alg = s.pair.algebra();
    let unit = |label: &str| {
        let mut v = DVector::zeros(alg.dim());
        v[alg.index_of(label).unwrap()] = 1.0;
        v
    };
    for (m, k) in [("C12", "B12"), ("C23", "B23"), ("C13", "B13")] {
        let (em, ek) = (unit(m), unit(k));
        let root = s
            .roots
            .roots
            .iter()
            .find(|r| alg.inner(&r.m_basis[0], &em).abs() >= 1.0 - 1e-8)
            .unwrap_or_else(|| panic!("no root space along {m}"));
        assert!(alg.inner(&root.k_basis[0], &ek).abs() >= 1.0 - 1e-8);
    }
}

#[test]
fn y_fields_are_tangent() {
    let w = DVector::from_vec(vec![0.3, -0.4, 0.8, 0.1]);
    for j in [0, 1, 3] {
        assert!(y_vector(2, j, &w).dot(&w).abs() < 1e-15);
    }
}

#[test]
fn symmetric_pairs_have_vanishing_connection_bilinear() {
    for id in [SpaceId::Sphere(3), SpaceId::Cp(2), SpaceId::Hp(1), SpaceId::SuSo(3), SpaceId::Grass(3)] {
        let s = SymmetricSpace::build(id, 0).unwrap();
        assert!(max_connection_norm(&s.pair) < 1e-10, "{id}");
    }
}

#[test]
fn centralizer_group_fixes_cartan_subspace() {
    for id in [SpaceId::Sphere(4), SpaceId::Cp(3), SpaceId::Hp(2), SpaceId::Grass(3)] {
        let s = SymmetricSpace::build(id, 0).unwrap();
        let alg = s.pair.algebra();
        let mut z = DVector::zeros(alg.dim());
        for (i, h) in s.roots.centralizer_basis.iter().enumerate() {
            z += h * (0.3 + 0.1 * i as f64);
        }
        for t in [0.3, 0.7] {
            let k = alg.exp_matrix(&AlgebraElement::new(alg, &z * t).unwrap());
            for x in &s.roots.cartan_basis {
                assert!((adjoint_action(alg, &k, x).unwrap() - x).amax() < 1e-10, "{id}");
            }
            for root in &s.roots.roots {
                for (basis, label) in [(&root.m_basis, "m"), (&root.k_basis, "k")] {
                    for v in basis {
                        let img = adjoint_action(alg, &k, v).unwrap();
                        let proj = symtan::symspace::pair::project(alg, basis, &img);
                        assert!(alg.norm(&(img - proj)) < 1e-8, "{id} {label}");
                    }
                }
            }
        }
    }
}

#[test]
fn c_independence_of_multiplicities() {
    for id in [SpaceId::Cp(2), SpaceId::SuSo(3)] {
        let a = SymmetricSpace::build_scaled(id, 0.5, 0).unwrap();
        let b = SymmetricSpace::build_scaled(id, 3.0, 0).unwrap();
        let ma: Vec<usize> = a.roots.roots.iter().map(|r| r.multiplicity).collect();
        let mb: Vec<usize> = b.roots.roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(ma, mb);
        assert!((a.chamber.theta_max.unwrap_or(0.0) - b.chamber.theta_max.unwrap_or(0.0)).abs() < 1e-9);
    }
}
