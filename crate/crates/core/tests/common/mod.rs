#![allow(dead_code)]

use arithdyn::catalog::{lookup, MAPS};
use arithdyn::expr::parse_map;
use arithdyn::{BivariatePoly, PolynomialMap, RationalPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed config so failures reproduce and runs are deterministic.
pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

pub fn family() -> Vec<(&'static str, PolynomialMap)> {
    MAPS.iter().map(|(n, e)| (*n, parse_map(e).unwrap())).collect()
}

pub fn named(name: &str) -> PolynomialMap {
    parse_map(lookup(name).unwrap()).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = BigRational> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| q(n, d))
}

pub fn point(max_num: i64, max_den: i64) -> impl Strategy<Value = RationalPoint> {
    (rational(max_num, max_den), rational(max_num, max_den)).prop_map(|(a, b)| RationalPoint::new(&a, &b))
}

/// Sparse polynomial with up to `terms` monomials of total degree ≤ `deg`.
pub fn poly(terms: usize, deg: u32, max_num: i64, max_den: i64) -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec(((0..=deg), (0..=deg), rational(max_num, max_den)), 0..=terms).prop_map(move |ts| {
        ts.into_iter()
            .filter(|(i, j, _)| i + j <= deg)
            .fold(BivariatePoly::zero(), |acc, (i, j, c)| {
                acc + BivariatePoly::x().pow_q(i) * BivariatePoly::y().pow_q(j) * BivariatePoly::from_rational(c)
            })
    })
}

pub fn map(terms: usize, deg: u32, max_num: i64, max_den: i64) -> impl Strategy<Value = PolynomialMap> {
    (poly(terms, deg, max_num, max_den), poly(terms, deg, max_num, max_den)).prop_map(|(a, b)| PolynomialMap::new(a, b))
}

/// A map with a nonzero Jacobian determinant.
pub fn dominant_map(terms: usize, deg: u32, max_num: i64, max_den: i64) -> impl Strategy<Value = PolynomialMap> {
    map(terms, deg, max_num, max_den).prop_filter("dominant", |f| f.jacobian_is_nonzero())
}

pub fn bigint(n: i64) -> BigInt {
    BigInt::from(n)
}
