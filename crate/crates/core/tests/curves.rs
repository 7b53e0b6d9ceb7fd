mod common;

use bimodulus::curves::*;
use bimodulus::exactmath::{Field, Matrix, Scalar};
use bimodulus::polyring::{j_from_quartic, BinaryForm};
use bimodulus::samples::{random_curve, random_gl2, random_scalar};
use common::*;
use proptest::prelude::*;

#[test]
fn harmonic_and_equianharmonic() {
    let f = f101();
    let harmonic = [[f.zero(), f.one()], [f.one(), f.zero()], [f.one(), f.one()], [f.from_i64(-1), f.one()]];
    assert_eq!(j_from_quartic(&BinaryForm::from_roots(f, &harmonic)).unwrap(), f.from_i64(1728));
    // x0^4 - x0 x1^3 has roots infinity and the cube roots of unity
    let q = Field::Q;
    let eq = BinaryForm::new(vec![q.zero(), q.from_i64(-1), q.zero(), q.zero(), q.one()]);
    assert_eq!(j_from_quartic(&eq).unwrap(), q.zero());
}

#[test]
fn j_is_an_invariant_of_the_curve() {
    let f = f101();
    let mut rng = rng(21);
    for _ in 0..10 {
        let w = random_curve(f, KodairaType::I0, &mut rng).unwrap();
        let j = j_invariant_curve(&w).unwrap();
        let moved = w.transform(&random_gl2(f, &mut rng), &random_gl2(f, &mut rng)).unwrap();
        assert_eq!(j_invariant_curve(&moved).unwrap(), j);
        // the projection along the other ruling sees the same curve
        let swapped = CurveW::new(swap_blocks(w.f())).unwrap();
        assert_eq!(j_invariant_curve(&swapped).unwrap(), j);
    }
}

fn swap_blocks(f: &bimodulus::polyring::MultiPoly) -> bimodulus::polyring::MultiPoly {
    let terms = f.terms().map(|(e, c)| (vec![e[2], e[3], e[0], e[1]], c.clone())).collect();
    bimodulus::polyring::MultiPoly::from_terms(f.field, &[2, 2], terms).unwrap()
}

#[test]
fn point_counts_respect_hasse() {
    for p in [5u64, 7, 11, 101] {
        let f = Field::prime(p).unwrap();
        let mut rng = rng(p);
        for _ in 0..5 {
            let w = random_curve(f, KodairaType::I0, &mut rng).unwrap();
            let n1 = enumerate_points(&w, 1).unwrap().len() as u64;
            assert!(within_hasse_bound(n1, p), "{n1} points over F_{p}");
            if p < 20 {
                let n2 = enumerate_points(&w, 2).unwrap().len() as u64;
                assert!(within_hasse_bound(n2, p * p));
                // #E(F_q^2) = (q + 1)^2 - t^2 with t = q + 1 - #E(F_q)
                let t = p as i64 + 1 - n1 as i64;
                assert_eq!(n2 as i64, (p as i64 + 1).pow(2) - t * t);
            }
        }
    }
}

#[test]
fn fiber_components_are_rejected() {
    let f = f101();
    // x1 (x0 y0^2 + x1 y1^2)
    let w = bimodulus::polyring::MultiPoly::from_terms(
        f,
        &[2, 2],
        vec![(vec![1, 1, 2, 0], f.one()), (vec![0, 2, 0, 2], f.one())],
    )
    .unwrap();
    assert!(matches!(CurveW::new(w), Err(bimodulus::Error::FiberComponent)));
}

#[test]
fn every_type_is_sampled_and_recognised() {
    let f = Field::prime(7).unwrap();
    let mut rng = rng(22);
    for kind in [KodairaType::I0, KodairaType::I1, KodairaType::I2, KodairaType::II, KodairaType::III, KodairaType::NonReduced] {
        for _ in 0..3 {
            let w = random_curve(f, kind, &mut rng).unwrap();
            assert_eq!(kodaira_oracle(w.f()), OracleVerdict::Kind(kind));
        }
    }
}

#[test]
fn singular_points_match_the_oracle_count() {
    let f = Field::prime(7).unwrap();
    let mut rng = rng(23);
    for (kind, n) in [(KodairaType::I0, 0), (KodairaType::I1, 1), (KodairaType::II, 1), (KodairaType::III, 1), (KodairaType::I2, 2)] {
        let w = random_curve(f, kind, &mut rng).unwrap();
        match singular_points(&w).unwrap() {
            SingularLocus::Points(p) => assert_eq!(p.len(), n, "{kind}"),
            SingularLocus::AlongSupport => panic!("{kind} reported as non-reduced"),
        }
    }
    let w = random_curve(f, KodairaType::NonReduced, &mut rng).unwrap();
    assert_eq!(singular_points(&w).unwrap(), SingularLocus::AlongSupport);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cross_ratio_oracle_agrees(seed in any::<u64>()) {
        let f = f101();
        let mut rng = rng(seed);
        let roots: Vec<[Scalar; 2]> = (0..4).map(|_| [random_scalar(f, &mut rng), f.one()]).collect();
        prop_assume!((0..4).all(|i| (i + 1..4).all(|j| roots[i] != roots[j])));
        let r: [[Scalar; 2]; 4] = roots.clone().try_into().unwrap();
        prop_assert_eq!(j_from_quartic(&BinaryForm::from_roots(f, &roots)).unwrap(), j_from_lambda(&cross_ratio(&r)));
    }

    #[test]
    fn j_of_a_quartic_is_projectively_invariant(seed in any::<u64>()) {
        let f = f101();
        let mut rng = rng(seed);
        let roots: Vec<[Scalar; 2]> = (0..4).map(|_| [random_scalar(f, &mut rng), f.one()]).collect();
        prop_assume!((0..4).all(|i| (i + 1..4).all(|j| roots[i] != roots[j])));
        let q = BinaryForm::from_roots(f, &roots);
        let g: Matrix = random_gl2(f, &mut rng);
        prop_assert_eq!(j_from_quartic(&q.substitute(&g).unwrap()).unwrap(), j_from_quartic(&q).unwrap());
    }

    #[test]
    fn classifier_matches_brute_force_over_f7(seed in any::<u64>()) {
        let f = Field::prime(7).unwrap();
        let form = random_form(f, &mut rng(seed));
        let oracle = kodaira_oracle(&form);
        let got = match CurveW::new(form) {
            Err(_) => OracleVerdict::FiberComponent,
            Ok(w) => OracleVerdict::Kind(classify_kodaira(&w).unwrap()),
        };
        prop_assert_eq!(got, oracle);
    }
}
