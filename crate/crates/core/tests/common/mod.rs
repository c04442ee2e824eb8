#![allow(dead_code)]

use ddelta::exppoly::ExpPoly;
use ddelta::{GaussianRational as Q, HElement, PolyC};
use proptest::prelude::*;
use rand::Rng;

pub fn q(re: i64, im: i64, den: i64) -> Q {
    Q::from_parts(re, den, im, den)
}

pub fn scalar() -> impl Strategy<Value = Q> {
    (-3i64..=3, -2i64..=2, 1i64..=3).prop_map(|(r, i, d)| q(r, i, d))
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = PolyC> {
    prop::collection::vec(scalar(), 0..=max_deg + 1).prop_map(PolyC::new)
}

/// Laurent exponents in `lo..=hi`.
pub fn exppoly(lo: i64, hi: i64, max_deg: usize) -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((lo..=hi, poly(max_deg)), 0..=3).prop_map(ExpPoly::from_terms)
}

pub fn nonzero_exppoly(lo: i64, hi: i64, max_deg: usize) -> impl Strategy<Value = ExpPoly> {
    exppoly(lo, hi, max_deg).prop_filter("nonzero", |e| !e.is_zero())
}

/// Elements of H, sometimes with the denominator `z` of `(σ − 1)/z`.
pub fn element(max_exp: i64, max_deg: usize) -> impl Strategy<Value = HElement> {
    (exppoly(0, max_exp, max_deg), any::<bool>()).prop_map(|(e, divide)| {
        let h = HElement::from_exppoly(&e);
        if divide {
            &h * &sigma_minus_one_over_z()
        } else {
            h
        }
    })
}

pub fn sigma_minus_one_over_z() -> HElement {
    ddelta::parse::parse_element("(s-1)/z").unwrap()
}

pub fn rand_q(rng: &mut impl Rng) -> Q {
    q(rng.gen_range(-3..=3), rng.gen_range(-2..=2), rng.gen_range(1..=3))
}

pub fn rand_poly(rng: &mut impl Rng, max_deg: usize) -> PolyC {
    let d = rng.gen_range(0..=max_deg);
    PolyC::new((0..=d).map(|_| rand_q(rng)).collect())
}

/// Random ExpPoly in `σ^0..σ^max_exp`.
pub fn rand_exppoly(rng: &mut impl Rng, max_exp: i64, max_deg: usize) -> ExpPoly {
    let mut terms = Vec::new();
    for j in 0..=max_exp {
        if rng.gen_bool(0.7) {
            terms.push((j, rand_poly(rng, max_deg)));
        }
    }
    ExpPoly::from_terms(terms)
}

pub fn sigma_degree(e: &ExpPoly) -> i64 {
    e.max_exp().unwrap_or(0) - e.valuation().unwrap_or(0)
}
