mod common;

use bimodulus::bimodules::{split_from_cohomology, twist_bimodule, BimodConcrete};
use bimodulus::curves::{enumerate_points, j_invariant_curve, KodairaType};
use bimodulus::exactmath::{subspace_equal, Matrix, Scalar};
use bimodulus::linebundles::lb_make;
use bimodulus::moduli::*;
use bimodulus::quivers::hom_ext_matrix;
use bimodulus::samples::{random_curve, random_gl2};
use common::*;
use proptest::prelude::*;

/// v = (g2 x g1 x g0) v' in the path index i2 * 4 + i1 * 2 + i0.
fn transport(g: &[Matrix; 3], v: &[Scalar]) -> Vec<Scalar> {
    let f = v[0].field();
    let mut out = vec![f.zero(); 8];
    for (i, o) in out.iter_mut().enumerate() {
        let (i2, i1, i0) = (i >> 2 & 1, i >> 1 & 1, i & 1);
        for (j, x) in v.iter().enumerate() {
            let (j2, j1, j0) = (j >> 2 & 1, j >> 1 & 1, j & 1);
            let c = &(g[2].get(i2, j2) * g[1].get(i1, j1)) * g[0].get(i0, j0);
            *o = &*o + &(&c * x);
        }
    }
    out
}

#[test]
fn relations_vanish_at_classifying_points() {
    let f = f101();
    let (_, q) = random_admissible(f, 2, &mut rng(51)).unwrap();
    let ideal = psi0(&q).unwrap();
    let ci = relations_to_ci(&ideal).unwrap();
    let excluded = q.excluded_points();
    let pts: Vec<_> = enumerate_points(&q.w, 1).unwrap().into_iter().filter(|p| !excluded.contains(p)).collect();
    assert!(pts.len() > 50);
    for img in classifying_points(&q, &pts).unwrap() {
        assert!(ci.contains(&img).unwrap());
    }
}

#[test]
fn recovery_inverts_the_complete_intersection() {
    let f = f101();
    let mut rng = rng(52);
    for _ in 0..5 {
        let (_, q) = random_admissible(f, 2, &mut rng).unwrap();
        let ideal = psi0(&q).unwrap();
        let back = recover_relations_from_ci(&relations_to_ci(&ideal).unwrap()).unwrap();
        assert!(back.same_subspace(&ideal));
    }
}

#[test]
fn kernel_plus_hom_is_path_count() {
    let f = f101();
    let mut rng = rng(53);
    for (chi, expect) in [(2, 2), (1, 3)] {
        for _ in 0..4 {
            let (b, q) = random_admissible(f, chi, &mut rng).unwrap();
            let ideal = if chi == 2 { psi0(&q).unwrap() } else { psi1(&q).unwrap() };
            let hom = hom_ext_matrix(&split_from_cohomology(&b).unwrap(), 1).hom[0][3];
            assert_eq!(ideal.dim(), expect);
            assert_eq!(ideal.dim() as i64 + hom, 8);
        }
    }
}

#[test]
fn inadmissible_quadruples_are_reported() {
    let f = f101();
    let w = random_curve(f, KodairaType::I0, &mut rng(54)).unwrap();
    // U = O(2,-1) gives L0 = L2
    let u = lb_make(&w, 2, -1, &[]).unwrap();
    assert!(matches!(phi(&BimodConcrete::Reduced { u }), Err(bimodulus::Error::Degenerate(_))));
}

#[test]
fn quadruple_json_round_trip() {
    let (_, q) = random_admissible(f101(), 2, &mut rng(55)).unwrap();
    let text = serde_json::to_string(&q.to_json()).unwrap();
    let back = Quadruple::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(psi0(&back).unwrap().same_subspace(&psi0(&q).unwrap()));
}

#[test]
fn round_trip_refuses_chi_one() {
    let (b, _) = random_admissible(f101(), 1, &mut rng(56)).unwrap();
    let r = roundtrip0(&b);
    assert_eq!(r.failed_stage.as_deref(), Some("input"));
    assert!(!r.pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn psi0_is_equivariant(seed in any::<u64>()) {
        let f = f101();
        let mut rng = rng(seed);
        let (_, q) = random_admissible(f, 2, &mut rng).unwrap();
        let g = [random_gl2(f, &mut rng), random_gl2(f, &mut rng), random_gl2(f, &mut rng)];
        let moved = psi0_in_bases(&q, &g).unwrap();
        let base = psi0(&q).unwrap();
        let carried: Vec<Vec<Scalar>> = moved.basis.iter().map(|v| transport(&g, v)).collect();
        prop_assert!(subspace_equal(&carried, &base.basis));
    }

    #[test]
    fn j_is_constant_on_orbits(seed in any::<u64>()) {
        let f = f101();
        let mut rng = rng(seed);
        let (b, _) = random_admissible(f, 2, &mut rng).unwrap();
        let r = roundtrip0(&b);
        prop_assume!(r.failed_stage.is_none());
        prop_assert!(r.pass && r.theta_all_stable);
        let moved = twist_bimodule(&b, &random_gl2(f, &mut rng), &random_gl2(f, &mut rng), 0, 0).unwrap();
        let r2 = roundtrip0(&moved);
        prop_assume!(r2.failed_stage.is_none());
        prop_assert_eq!(&r2.j_ni, &r.j_ni);
        let BimodConcrete::Reduced { u } = &b else { unreachable!() };
        prop_assert_eq!(r.j_ni, Some(j_invariant_curve(u.curve()).unwrap()));
    }
}
