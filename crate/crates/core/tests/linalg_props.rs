mod common;

use common::*;
use deltahull::budget::Budgets;
use deltahull::linalg::{det, hnf_decompose, is_unimodular, rank, solve_square};
use deltahull::subdet::{delta, delta_k};
use deltahull_oracles::{check_hnf_shape, cofactor_det, mat_mul, max_minor, rational_rank};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn square(max: usize, bound: i128) -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1..=max).prop_flat_map(move |n| matrix(n, n, bound))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_matches_cofactor_expansion(m in square(5, 9)) {
        let got = det(&from_i128(&m)).unwrap();
        prop_assert_eq!(got, BigInt::from(cofactor_det(&m)));
    }

    #[test]
    fn det_is_multiplicative(
        (a, b) in (1usize..=4).prop_flat_map(|n| (matrix(n, n, 5), matrix(n, n, 5)))
    ) {
        let lhs = det(&from_i128(&mat_mul(&a, &b))).unwrap();
        let rhs = det(&from_i128(&a)).unwrap() * det(&from_i128(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_matches_rational_elimination(m in sized_matrix(6, 6, 3)) {
        prop_assert_eq!(rank(&from_i128(&m)), rational_rank(&m));
    }

    #[test]
    fn hnf_invariants(m in sized_matrix(6, 6, 9)) {
        let mm = from_i128(&m);
        let d = hnf_decompose(&mm);
        prop_assert_eq!(d.rank, rational_rank(&m));
        let h = to_i128(&d.padded_h());
        let q = to_i128(&d.q);
        prop_assert_eq!(mat_mul(&h, &q), m.clone());
        prop_assert_eq!(cofactor_det(&q).abs(), 1);
        prop_assert!(is_unimodular(&d.q).unwrap());
        let narrow = to_i128(&d.h);
        prop_assert_eq!(check_hnf_shape(&narrow, d.rank), Ok(()));
    }

    #[test]
    fn full_rank_hnf_entries_bounded_by_delta(m in square(5, 9)) {
        prop_assume!(cofactor_det(&m) != 0);
        let d = hnf_decompose(&from_i128(&m));
        let delta_n = cofactor_det(&m).abs();
        for row in to_i128(&d.h) {
            for x in row {
                prop_assert!(x.abs() <= delta_n);
            }
        }
    }

    #[test]
    fn delta_k_matches_minor_enumeration(m in sized_matrix(6, 4, 4), k in 1usize..=4) {
        let a = from_i128(&m);
        let kmax = m.len().min(m[0].len());
        prop_assume!(k <= kmax);
        let got = delta_k(&a, k, &Budgets::default()).unwrap();
        prop_assert_eq!(got, BigInt::from(max_minor(&m, k)));
    }

    #[test]
    fn delta_k_is_transpose_invariant(m in sized_matrix(5, 5, 5), k in 1usize..=5) {
        let a = from_i128(&m);
        prop_assume!(k <= a.rows().min(a.cols()));
        let b = Budgets::default();
        prop_assert_eq!(delta_k(&a, k, &b).unwrap(), delta_k(&a.transpose(), k, &b).unwrap());
    }

    #[test]
    fn deleting_rows_never_increases_delta_k(m in matrix(6, 3, 5), drop in 0usize..6, k in 1usize..=3) {
        let a = from_i128(&m);
        let keep: Vec<usize> = (0..6).filter(|&i| i != drop).collect();
        let b = Budgets::default();
        prop_assert!(delta_k(&a.select_rows(&keep), k, &b).unwrap() <= delta_k(&a, k, &b).unwrap());
    }

    #[test]
    fn scaling_a_row_scales_delta_at_most_linearly(m in matrix(4, 3, 4), row in 0usize..4, s in 2i128..4) {
        let mut scaled = m.clone();
        for x in &mut scaled[row] {
            *x *= s;
        }
        let b = Budgets::default();
        prop_assume!(rational_rank(&m) == 3);
        let before = delta(&from_i128(&m), &b).unwrap();
        let after = delta(&from_i128(&scaled), &b).unwrap();
        prop_assert!(after >= before);
        prop_assert!(after <= before * BigInt::from(s));
    }

    #[test]
    fn solve_square_satisfies_system(m in square(4, 6), rhs in prop::collection::vec(-9i128..=9, 4)) {
        prop_assume!(cofactor_det(&m) != 0);
        let n = m.len();
        let b: Vec<BigInt> = rhs[..n].iter().map(|&x| x.into()).collect();
        let x = solve_square(&from_i128(&m), &b).unwrap();
        for (row, bi) in m.iter().zip(&b) {
            let ax: BigRational = row.iter().zip(&x).map(|(&a, v)| v * BigInt::from(a)).sum();
            prop_assert_eq!(ax, BigRational::from_integer(bi.clone()));
        }
    }
}

#[test]
fn hnf_of_zero_and_wide_matrices() {
    for m in [vec![vec![0i128, 0], vec![0, 0]], vec![vec![2, 4, 6]], vec![vec![0, 3], vec![0, 6]]] {
        let d = hnf_decompose(&from_i128(&m));
        assert_eq!(mat_mul(&to_i128(&d.padded_h()), &to_i128(&d.q)), m);
        assert_eq!(check_hnf_shape(&to_i128(&d.h), d.rank), Ok(()));
    }
}
