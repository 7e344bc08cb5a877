#![allow(dead_code)]

use deltahull::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.to_i128().expect("small entry")).collect())
        .collect()
}

pub fn from_i128(rows: &[Vec<i128>]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    IntMatrix::from_rows(&rows).expect("rectangular")
}

pub fn ints(v: &[BigInt]) -> Vec<i128> {
    v.iter().map(|x| x.to_i128().expect("small entry")).collect()
}

pub fn matrix(rows: usize, cols: usize, bound: i128) -> impl Strategy<Value = Vec<Vec<i128>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
}

pub fn sized_matrix(max_rows: usize, max_cols: usize, bound: i128) -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| matrix(r, c, bound))
}
