#![allow(dead_code)]

use proptest::prelude::*;
use shatterkit::{FunctionClass, Measure};

/// Classes with integer values in `lo..=hi`.
pub fn integer_class(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> impl Strategy<Value = FunctionClass> {
    (rows, cols).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec(lo..=hi, n), m)
            .prop_map(|rows| FunctionClass::new(rows.into_iter().map(|r| r.into_iter().map(|v| v as f64).collect()).collect()).unwrap())
    })
}

/// Classes with values on the half-integer grid in `[lo, hi]`.
pub fn half_integer_class(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> impl Strategy<Value = FunctionClass> {
    (rows, cols).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec(2 * lo..=2 * hi, n), m)
            .prop_map(|rows| FunctionClass::new(rows.into_iter().map(|r| r.into_iter().map(|v| v as f64 / 2.0).collect()).collect()).unwrap())
    })
}

pub fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), -8.0..8.0f64], n)
}

pub fn measure(n: usize) -> impl Strategy<Value = Measure> {
    prop::collection::vec(0.05..1.0f64, n).prop_map(|w| Measure::normalized(w).unwrap())
}

pub fn with_class_row(f: &FunctionClass, extra: Vec<f64>) -> FunctionClass {
    let mut rows = f.to_rows();
    rows.push(extra);
    FunctionClass::new(rows).unwrap()
}
