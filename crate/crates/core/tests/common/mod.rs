#![allow(dead_code)]

use fdh_core::{Dataset, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn single_io(rows: &[(&str, i64, i64)]) -> Dataset<Rational> {
    Dataset::new(
        rows.iter().map(|r| r.0.to_string()).collect(),
        rows.iter().map(|r| vec![q(r.1, 1)]).collect(),
        rows.iter().map(|r| vec![q(r.2, 1)]).collect(),
    )
    .unwrap()
}

/// A=(1,2), B=(3,4), C=(5,5), D=(6,13).
pub fn four_units() -> Dataset<Rational> {
    single_io(&[("A", 1, 2), ("B", 3, 4), ("C", 5, 5), ("D", 6, 13)])
}

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
