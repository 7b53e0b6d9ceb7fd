use bimodulus::exactmath::*;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(101).unwrap()),
        Just(Field::prime(7).unwrap()),
        Just(Field::prime(5).unwrap().quadratic_extension().unwrap()),
        Just(Field::Q),
    ]
}

fn scalar(field: Field, a: i64, b: i64) -> Scalar {
    match field {
        Field::Fp2 { .. } => field.adjoin(a.rem_euclid(1000), b.rem_euclid(1000)).unwrap(),
        Field::Q => Scalar::rational(a, b.rem_euclid(13) + 1).unwrap(),
        _ => field.from_i64(a),
    }
}

fn matrix(field: Field, rows: usize, cols: usize, seed: &[i64]) -> Matrix {
    let v: Vec<Vec<Scalar>> =
        (0..rows).map(|i| (0..cols).map(|j| scalar(field, seed[(i * cols + j) % seed.len()] % 5, 1)).collect()).collect();
    Matrix::from_rows(field, &v).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(field in field_strategy(), a in -500i64..500, b in -500i64..500, c in -500i64..500, d in 1i64..50) {
        let (x, y, z) = (scalar(field, a, d), scalar(field, b, d + 1), scalar(field, c, d + 2));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_string_round_trip(field in field_strategy(), a in -500i64..500, d in 1i64..50) {
        let x = scalar(field, a, d);
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn kernel_is_annihilated(field in field_strategy(), rows in 1usize..5, cols in 1usize..7, seed in prop::collection::vec(-9i64..9, 1..40)) {
        let m = matrix(field, rows, cols, &seed);
        let ker = m.kernel_basis();
        prop_assert_eq!(ker.len() + m.rank(), cols);
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn subspace_equal_ignores_basis(field in field_strategy(), seed in prop::collection::vec(-9i64..9, 12), t in -5i64..5) {
        let m = matrix(field, 3, 4, &seed);
        let rows = m.rows_vec();
        let tt = field.from_i64(t);
        // rows replaced by an invertible combination of themselves
        let mixed: Vec<Vec<Scalar>> = vec![
            rows[0].iter().zip(&rows[1]).map(|(a, b)| a + &(&tt * b)).collect(),
            rows[1].clone(),
            rows[2].iter().zip(&rows[0]).map(|(a, b)| a - b).collect(),
        ];
        prop_assert!(subspace_equal(&rows, &mixed));
        prop_assert_eq!(canonical_basis(field, 4, &rows), canonical_basis(field, 4, &mixed));
    }

    #[test]
    fn inverse_and_det(field in field_strategy(), seed in prop::collection::vec(-9i64..9, 9)) {
        let m = matrix(field, 3, 3, &seed);
        let det = m.det().unwrap();
        match m.inverse() {
            Ok(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(field, 3));
            }
            Err(_) => prop_assert!(det.is_zero()),
        }
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let a = Field::prime(5).unwrap().one();
    let b = Field::prime(7).unwrap().one();
    assert!(matches!(a.try_add(&b), Err(bimodulus::Error::MixedFields(..))));
}

#[test]
fn fp2_squares_and_sizes() {
    let f = Field::prime(7).unwrap().quadratic_extension().unwrap();
    assert_eq!(f.size(), Some(49));
    assert_eq!(f.elements().unwrap().len(), 49);
    // every element of F_7 is a square in F_49
    for x in Field::prime(7).unwrap().elements().unwrap() {
        assert!(f.embed(&x).unwrap().sqrt().is_some());
    }
}
