//! Randomized invariants for the exact arithmetic and linear algebra the
//! decision procedures stand on.

use proptest::prelude::*;

use dgsep::field::{Field, Scalar};
use dgsep::graded::{canonical_solution, solve, GradedBasis, GradedVector, Matrix, SolveOutcome};

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rationals),
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(97).unwrap()),
    ]
}

fn matrix(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |entries| {
        let mut m = Matrix::zero(&field, rows, cols);
        for (i, n) in entries.into_iter().enumerate() {
            *m.at_mut(i / cols, i % cols) = field.from_int(n);
        }
        m
    })
}

proptest! {
    #[test]
    fn field_operations_form_a_commutative_ring(
        field in fields(),
        a in -30i64..=30,
        b in -30i64..=30,
        c in -30i64..=30,
    ) {
        let (a, b, c) = (field.from_int(a), field.from_int(b), field.from_int(c));
        prop_assert_eq!(field.add(&a, &b), field.add(&b, &a));
        prop_assert_eq!(field.mul(&a, &b), field.mul(&b, &a));
        prop_assert_eq!(
            field.add(&field.add(&a, &b), &c),
            field.add(&a, &field.add(&b, &c))
        );
        prop_assert_eq!(
            field.mul(&field.mul(&a, &b), &c),
            field.mul(&a, &field.mul(&b, &c))
        );
        prop_assert_eq!(
            field.mul(&a, &field.add(&b, &c)),
            field.add(&field.mul(&a, &b), &field.mul(&a, &c))
        );
        prop_assert_eq!(field.sub(&field.add(&a, &b), &b), a.clone());
        prop_assert_eq!(field.add(&a, &field.zero()), a.clone());
        prop_assert_eq!(field.mul(&a, &field.one()), a);
    }

    #[test]
    fn nonzero_scalars_invert(field in fields(), n in -30i64..=30) {
        let a = field.from_int(n);
        prop_assume!(!field.is_zero(&a));
        let inv = field.invert(&a).unwrap();
        prop_assert_eq!(field.mul(&a, &inv), field.one());
    }

    #[test]
    fn rank_plus_nullity_is_the_width(
        (field, m) in fields().prop_flat_map(|f| {
            ((1usize..=5), (1usize..=5)).prop_flat_map(move |(r, c)| matrix(f, r, c))
                .prop_map(move |m| (f, m))
        }),
    ) {
        let rank = m.rank(&field);
        let kernel = m.kernel_basis(&field);
        prop_assert_eq!(rank + kernel.len(), m.cols);
        for k in &kernel {
            let image = m.mul_vec(&field, k);
            prop_assert!(image.iter().all(|x| field.is_zero(x)));
        }
    }

    #[test]
    fn solve_reproduces_planted_right_hand_sides(
        (field, m, x) in fields().prop_flat_map(|f| {
            ((1usize..=5), (1usize..=5)).prop_flat_map(move |(r, c)| {
                (matrix(f, r, c), proptest::collection::vec(-9i64..=9, c))
            }).prop_map(move |(m, x)| {
                let x: Vec<Scalar> = x.into_iter().map(|n| f.from_int(n)).collect();
                (f, m, x)
            })
        }),
    ) {
        let b = m.mul_vec(&field, &x);
        match solve(&field, &m, &b) {
            SolveOutcome::Solved { particular, kernel, rank } => {
                prop_assert_eq!(m.mul_vec(&field, &particular), b.clone());
                prop_assert_eq!(rank + kernel.len(), m.cols);
                // the canonical representative solves the system too and is
                // stable under translating the particular point by the kernel
                let canon = canonical_solution(&field, &particular, &kernel);
                prop_assert_eq!(m.mul_vec(&field, &canon), b);
                if let Some(k) = kernel.first() {
                    let shifted: Vec<Scalar> = particular
                        .iter()
                        .zip(k)
                        .map(|(p, k)| field.add(p, k))
                        .collect();
                    prop_assert_eq!(canonical_solution(&field, &shifted, &kernel), canon);
                }
            }
            SolveOutcome::Inconsistent { .. } => {
                prop_assert!(false, "a planted solution cannot be inconsistent");
            }
        }
    }

    #[test]
    fn infeasibility_witnesses_certify_themselves(
        (field, m, b) in fields().prop_flat_map(|f| {
            ((1usize..=5), (1usize..=5)).prop_flat_map(move |(r, c)| {
                (matrix(f, r, c), proptest::collection::vec(-9i64..=9, r))
            }).prop_map(move |(m, b)| {
                let b: Vec<Scalar> = b.into_iter().map(|n| f.from_int(n)).collect();
                (f, m, b)
            })
        }),
    ) {
        if let SolveOutcome::Inconsistent { dual_witness, rank, augmented_rank } =
            solve(&field, &m, &b)
        {
            prop_assert!(augmented_rank > rank);
            // y^T A = 0 and y^T b != 0, verified by direct evaluation
            for c in 0..m.cols {
                let mut acc = field.zero();
                for r in 0..m.rows {
                    acc = field.add(&acc, &field.mul(&dual_witness[r], m.at(r, c)));
                }
                prop_assert!(field.is_zero(&acc));
            }
            let mut pairing = field.zero();
            for r in 0..m.rows {
                pairing = field.add(&pairing, &field.mul(&dual_witness[r], &b[r]));
            }
            prop_assert!(!field.is_zero(&pairing));
        }
    }

    #[test]
    fn coordinates_round_trip_on_periodic_components(
        coeffs in proptest::collection::vec(-9i64..=9, 3),
        degree in -6i64..=6,
    ) {
        let field = Field::prime(7).unwrap();
        let basis = GradedBasis::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0, 1, 2],
            Some(3),
        ).unwrap();
        let component = basis.component(degree);
        prop_assert!(!component.is_empty());
        let coords: Vec<Scalar> = component
            .iter()
            .zip(&coeffs)
            .map(|(_, n)| field.from_int(*n))
            .collect();
        let v = GradedVector::from_coordinates(&field, &basis, degree, &coords);
        if !v.is_zero() {
            prop_assert_eq!(v.degree(&basis).unwrap(), Some(degree));
        }
        prop_assert_eq!(v.coordinates(&field, &basis, degree).unwrap(), coords);
    }

    #[test]
    fn shifting_moves_degrees_by_whole_periods(
        label in 0usize..3,
        exponent in -4i64..=4,
        shift in -4i64..=4,
    ) {
        let basis = GradedBasis::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0, 1, 2],
            Some(3),
        ).unwrap();
        let field = Field::prime(7).unwrap();
        let v = GradedVector::single((label, exponent), field.one());
        let before = v.degree(&basis).unwrap().unwrap();
        let after = v.shift(shift).degree(&basis).unwrap().unwrap();
        prop_assert_eq!(after - before, 3 * shift);
    }
}
