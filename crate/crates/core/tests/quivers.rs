mod common;

use bimodulus::bimodules::{split_table, SplitType};
use bimodulus::exactmath::Scalar;
use bimodulus::quivers::*;
use bimodulus::samples::{random_nonzero, random_scalar};
use common::*;
use proptest::prelude::*;

/// Every vertex reachable from the source through nonzero arrows.
fn reachable_oracle(r: &Rep1111) -> bool {
    let mut seen = [true, false, false, false];
    loop {
        let mut grew = false;
        for (a, x) in r.quiver.arrows.iter().zip(&r.values) {
            if seen[a.source - 1] && !seen[a.target - 1] && !x.is_zero() {
                seen[a.target - 1] = true;
                grew = true;
            }
        }
        if !grew {
            return seen.iter().all(|&s| s);
        }
    }
}

#[test]
fn path_counts() {
    assert_eq!(path_basis(&q0(), 1, 4).unwrap().dim(), 8);
    assert_eq!(path_basis(&q1(), 1, 4).unwrap().dim(), 8);
    assert_eq!(path_basis(&sigma2(), 1, 4).unwrap().dim(), 12);
    assert_eq!(path_basis(&q0(), 1, 3).unwrap().dim(), 4);
    assert_eq!(path_basis(&q1(), 2, 4).unwrap().dim(), 3);
    // 8 - 2 = 6 and 8 - 3 = 5 surviving paths against the two worked split types
    let s0 = SplitType { a: 0, b: 0, a_prime: -1, b_prime: -1 };
    let s1 = SplitType { a: -1, b: 0, a_prime: -2, b_prime: -1 };
    assert_eq!(8 - 2, hom_ext_matrix(&s0, 1).hom[0][3]);
    assert_eq!(8 - 3, hom_ext_matrix(&s1, 1).hom[0][3]);
}

#[test]
fn q0_path_order_matches_tensor_order() {
    let s = path_basis(&q0(), 1, 4).unwrap();
    for (idx, label) in s.labels().iter().enumerate() {
        let bits: Vec<usize> = label.split(' ').map(|l| usize::from(l.starts_with('b'))).collect();
        assert_eq!(idx, bits[0] * 4 + bits[1] * 2 + bits[2], "{label}");
    }
    assert_eq!(s.index_of_labels(&["b3", "a2", "b1"]).unwrap(), 5);
}

#[test]
fn strongness_equivalence_on_the_grid() {
    for d in descriptor_grid(-5..=5, &[1, 2]) {
        let table = strong_m1_table(&d).unwrap();
        let s = split_table(&d).unwrap();
        assert_eq!(table, s.a_prime >= -2, "{d:?}");
        assert_eq!(table, is_strong(&s, 1), "{d:?}");
        assert_eq!(table, strong_by_inequality(&s, 1), "{d:?}");
    }
}

#[test]
fn strong_table_refuses_other_chi() {
    let d = bimodulus::bimodules::BimodDescriptor::Type11 { a: 1, b: 1 };
    assert!(strong_m1_table(&d).is_err());
}

#[test]
fn dimension_of_relations_stack() {
    let m = mrel_dim_check();
    assert_eq!((m.ambient, m.group, m.stabilizer, m.dim), (16, 16, 3, 3));
}

#[test]
fn torus_weights_from_the_quiver() {
    let r = toric_matrices_check();
    assert_eq!((r.weight_rank, r.kernel_rank), (3, 4));
    assert!(r.quiver_product_zero);
    assert_eq!(r.mismatches.len(), 1);
    assert_eq!((r.mismatches[0].torus.as_str(), r.mismatches[0].arrow.as_str()), ("t2", "a3"));
}

fn split_strategy() -> impl Strategy<Value = SplitType> {
    (-6i64..6, 0i64..4, -6i64..6, 0i64..4).prop_map(|(a, da, ap, dap)| SplitType { a, b: a + da, a_prime: ap, b_prime: ap + dap })
}

proptest! {
    #[test]
    fn strongness_is_monotone_in_m(s in split_strategy(), m in 0i64..6) {
        if is_strong(&s, m) {
            prop_assert!(is_strong(&s, m + 1));
        }
    }

    #[test]
    fn euler_pairing_is_hom_minus_ext(s in split_strategy(), m in 0i64..6) {
        let he = hom_ext_matrix(&s, m);
        let chi = euler_pairing(&s, m);
        for i in 0..4 {
            for j in i..4 {
                prop_assert_eq!(chi[i][j], he.hom[i][j] - he.ext1[i][j]);
            }
        }
    }

    #[test]
    fn theta_stability_matches_reachability(seed in any::<u64>(), which in 0usize..3, zeros in prop::collection::vec(any::<bool>(), 8)) {
        let f = f101();
        let mut rng = rng(seed);
        let quiver = [q0(), q1(), sigma2()][which].clone();
        let values: Vec<Scalar> = (0..quiver.arrows.len())
            .map(|k| if zeros[k] { f.zero() } else { random_nonzero(f, &mut rng) })
            .collect();
        let r = Rep1111::new(quiver.clone(), values.clone()).unwrap();
        let theta = ThetaVector::standard();
        prop_assert_eq!(theta_stable(&r, &theta), reachable_oracle(&r));
        // rescaling the arrows by nonzero constants does not change stability
        let scaled: Vec<Scalar> = values.iter().map(|x| x * &random_nonzero(f, &mut rng)).collect();
        let r2 = Rep1111::new(quiver, scaled).unwrap();
        prop_assert_eq!(theta_stable(&r2, &theta), theta_stable(&r, &theta));
        prop_assert!(!theta_stable(&r, &theta) || theta_semistable(&r, &theta));
    }
}

#[test]
fn theta_pairing_vanishes_on_the_full_vector() {
    assert_eq!(ThetaVector::standard().pairing([1, 1, 1, 1]), 0);
    let f = f101();
    let mut rng = rng(1);
    let r = Rep1111::new(q0(), (0..6).map(|_| random_scalar(f, &mut rng)).collect()).unwrap();
    assert!(r.subrepresentations().contains(&15));
    assert!(r.subrepresentations().contains(&0));
}
