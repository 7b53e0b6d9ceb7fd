mod common;

use bimodulus::curves::KodairaType;
use bimodulus::exactmath::Field;
use bimodulus::linebundles::*;
use bimodulus::samples::{random_bundle, random_curve, random_scalar};
use common::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn riemann_roch_on_smooth_curves() {
    let f = f101();
    let mut rng = rng(31);
    for _ in 0..6 {
        let w = random_curve(f, KodairaType::I0, &mut rng).unwrap();
        for deg in -3..=4 {
            let l = random_bundle(&w, deg, &mut rng).unwrap();
            let (h0, h1) = lb_cohomology(&l).unwrap();
            assert_eq!(h0 as i64 - h1 as i64, deg);
            if deg != 0 {
                assert_eq!(h0.min(h1), 0, "deg {deg}: ({h0}, {h1})");
            }
        }
        assert_eq!(lb_cohomology(&lb_make(&w, 0, 0, &[]).unwrap()).unwrap(), (1, 1));
    }
}

#[test]
fn riemann_roch_on_singular_curves() {
    let f = f101();
    let mut rng = rng(32);
    for kind in [KodairaType::I1, KodairaType::I2, KodairaType::II, KodairaType::III] {
        let w = random_curve(f, kind, &mut rng).unwrap();
        for deg in [-2, 1, 3] {
            let l = random_bundle(&w, deg, &mut rng).unwrap();
            let (h0, h1) = lb_cohomology(&l).unwrap();
            assert_eq!(h0 as i64 - h1 as i64, deg, "{kind}");
        }
    }
}

#[test]
fn tensor_with_inverse_is_trivial() {
    let f = f101();
    let mut rng = rng(33);
    let w = random_curve(f, KodairaType::I0, &mut rng).unwrap();
    for deg in [-1, 0, 2, 3] {
        let l = random_bundle(&w, deg, &mut rng).unwrap();
        let l2 = random_bundle(&w, 1, &mut rng).unwrap();
        let t = l.tensor(&l2).unwrap();
        assert_eq!(t.degree(), deg + 1);
        let o = lb_make(&w, 0, 0, &[]).unwrap();
        assert!(lb_isomorphic(&l.tensor(&l.inverse()).unwrap(), &o).unwrap());
    }
}

#[test]
fn la_cohomology_and_splitting() {
    for field in [f101(), Field::Q, Field::prime(7).unwrap()] {
        assert_eq!(nr_cech(&NRLineBundle::la(field.zero())).unwrap(), (1, 1));
        assert_eq!(nr_cech(&NRLineBundle::la(field.from_i64(3))).unwrap(), (0, 0));
        assert_eq!(nr_pushforward_split(&NRLineBundle::la(field.zero())).unwrap(), (-2, 0));
        assert_eq!(nr_pushforward_split(&NRLineBundle::la(field.one())).unwrap(), (-1, -1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nr_euler_characteristic(k_u in -3i64..4, k_v in -3i64..4, a in 0i64..101, seed in any::<u64>()) {
        let f = f101();
        let l = NRLineBundle::new(k_u, k_v, f.from_i64(a));
        let (h0, h1) = nr_cech(&l).unwrap();
        prop_assert_eq!(h0 as i64 - h1 as i64, l.chi());
        let (sa, sb) = nr_pushforward_split(&l).unwrap();
        prop_assert!(sa <= sb);
        prop_assert_eq!(sa + sb + 2, l.chi());
        // a divisor D lowers chi by deg D
        let mut rng = rng(seed);
        let z = random_scalar(f, &mut rng);
        let m = rng.gen_range(1..=3u32);
        let (d0, d1) = nr_cech_sub(&l, &[(z, m)]).unwrap();
        prop_assert_eq!(d0 as i64 - d1 as i64, l.chi() - m as i64);
    }

    #[test]
    fn nr_pic_coordinate_is_a_homomorphism(k1 in -3i64..4, k2 in -3i64..4, j1 in -3i64..4, j2 in -3i64..4, a in 0i64..101, b in 0i64..101) {
        let f = f101();
        let l1 = NRLineBundle::new(k1, j1, f.from_i64(a));
        let l2 = NRLineBundle::new(k2, j2, f.from_i64(b));
        let (c1, x1) = nr_pic_coord(&l1);
        let (c2, x2) = nr_pic_coord(&l2);
        let (c, x) = nr_pic_coord(&l1.tensor(&l2).unwrap());
        prop_assert_eq!(c, c1 + c2);
        prop_assert_eq!(x, &x1 + &x2);
    }
}
