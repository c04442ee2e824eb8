//! Hefer forms: exact difference quotients `(q(ζ) − q(z))/(ζ − z)`.
//!
//! Expressions live in `Q(i)[ζ^±, z^±, e^{±ζ}, e^{±z}, ζ₂, z₂, …][D]` with the
//! single atom `D = (e^ζ − e^z)/(ζ − z)`. Every quotient of an element of `H`
//! reduces to this atom by the Leibniz rule. The relation `(ζ − z)·D = e^ζ − e^z`
//! is used to keep each coefficient of `D^a`, `a ≥ 1`, free of `ζ`. Since
//! `ζ, z, e^ζ, e^z` are algebraically independent that form is unique, so an
//! identity holds exactly iff the difference reduces to no terms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::currents::{envelope_check, GrowthCert};
use crate::error::{Error, Result};
use crate::hring::{taylor_coefficients, HElement};
use crate::poly::PolyC;
use crate::scalar::GaussianRational as Q;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
struct Mono {
    /// Exponents of `ζ`, `z`, `e^ζ`, `e^z`.
    base: [i64; 4],
    /// Power of `D`.
    d: u32,
    /// Exponents of `ζ₂, ζ₃, …` and `z₂, z₃, …`, trailing zeros trimmed.
    zeta: Vec<u32>,
    z: Vec<u32>,
}

impl Mono {
    fn mul(&self, o: &Mono) -> Mono {
        let mut base = self.base;
        for (b, x) in base.iter_mut().zip(o.base) {
            *b += x;
        }
        Mono { base, d: self.d + o.d, zeta: add_trim(&self.zeta, &o.zeta), z: add_trim(&self.z, &o.z) }
    }
}

fn add_trim(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        v[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        v[i] += x;
    }
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Element of the ring generated by difference quotients, in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoVarExpPoly {
    terms: BTreeMap<Mono, Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: Q,
    pub base: [i64; 4],
    pub d: u32,
    pub zeta: Vec<u32>,
    pub z: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Zeta,
    Z,
}

impl TwoVarExpPoly {
    pub fn zero() -> Self {
        TwoVarExpPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut t = TwoVarExpPoly::zero();
        t.push(Mono::default(), c);
        t
    }

    pub fn one() -> Self {
        TwoVarExpPoly::constant(Q::one())
    }

    /// `ζ_i` (`i ≥ 1`).
    pub fn zeta(i: usize) -> Self {
        TwoVarExpPoly::var(Side::Zeta, i)
    }

    /// `z_i` (`i ≥ 1`).
    pub fn z(i: usize) -> Self {
        TwoVarExpPoly::var(Side::Z, i)
    }

    fn var(side: Side, i: usize) -> Self {
        assert!(i >= 1, "variables are numbered from 1");
        let mut m = Mono::default();
        match (side, i) {
            (Side::Zeta, 1) => m.base[0] = 1,
            (Side::Z, 1) => m.base[1] = 1,
            (Side::Zeta, _) => m.zeta = unit_vec(i - 2),
            (Side::Z, _) => m.z = unit_vec(i - 2),
        }
        TwoVarExpPoly::from_mono(m, Q::one())
    }

    /// The atom `D = (e^ζ − e^z)/(ζ − z)`.
    pub fn atom() -> Self {
        TwoVarExpPoly::from_mono(Mono { d: 1, ..Mono::default() }, Q::one())
    }

    fn from_mono(m: Mono, c: Q) -> Self {
        let mut t = TwoVarExpPoly::zero();
        t.push(m, c);
        t.reduce()
    }

    fn push(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// `q*` in `ζ₁` or in `z₁`.
    pub fn from_h(q: &HElement, side: Side) -> Self {
        let (num, den) = q.fraction();
        let (e, rest) = den.split_z_power();
        let inv = rest.coeff(0).inv();
        let (ix, ie) = match side {
            Side::Zeta => (0, 2),
            Side::Z => (1, 3),
        };
        let mut t = TwoVarExpPoly::zero();
        for (j, p) in num.terms() {
            for (k, c) in p.coeffs().iter().enumerate() {
                let mut m = Mono::default();
                m.base[ix] = k as i64 - e as i64;
                m.base[ie] = j;
                t.push(m, c * &inv);
            }
        }
        t.reduce()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(coefficient, [ζ, z, e^ζ, e^z] exponents, D power, ζ₂.. exponents, z₂.. exponents)`.
    pub fn raw_terms(&self) -> Vec<RawTerm> {
        self.terms
            .iter()
            .map(|(m, c)| RawTerm { coeff: c.clone(), base: m.base, d: m.d, zeta: m.zeta.clone(), z: m.z.clone() })
            .collect()
    }

    /// Inverse of [`raw_terms`](Self::raw_terms); the result is reduced.
    pub fn from_raw_terms(terms: Vec<RawTerm>) -> Self {
        let mut t = TwoVarExpPoly::zero();
        for r in terms {
            let trim = |mut v: Vec<u32>| {
                while v.last() == Some(&0) {
                    v.pop();
                }
                v
            };
            t.push(Mono { base: r.base, d: r.d, zeta: trim(r.zeta), z: trim(r.z) }, r.coeff);
        }
        t.reduce()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut t = TwoVarExpPoly::zero();
        for (m, v) in &self.terms {
            t.push(m.clone(), v * c);
        }
        t
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(TwoVarExpPoly::one(), |acc, _| &acc * self)
    }

    /// Rewrites `ζ^k·D^a` (`a ≥ 1`) as `z^k·D^a + [(ζ^k − z^k)/(ζ − z)]·(e^ζ − e^z)·D^{a−1}`
    /// until no power of `D` carries `ζ`.
    fn reduce(mut self) -> Self {
        loop {
            let Some(m) = self.terms.keys().find(|m| m.d >= 1 && m.base[0] != 0).cloned() else {
                return self;
            };
            let c = self.terms.remove(&m).unwrap();
            let k = m.base[0];
            let mut moved = m.clone();
            moved.base[0] = 0;
            moved.base[1] += k;
            self.push(moved, c.clone());
            let mut rest = m.clone();
            rest.base[0] = 0;
            rest.d -= 1;
            for (a, b, s) in power_quotient(k) {
                for (de1, de2, sign) in [(1, 0, 1i64), (0, 1, -1)] {
                    let mut t = rest.clone();
                    t.base[0] += a;
                    t.base[1] += b;
                    t.base[2] += de1;
                    t.base[3] += de2;
                    self.push(t, &c * &Q::from_int(s * sign));
                }
            }
        }
    }

    /// Evaluates at `ζ = (ζ₁, ζ₂, …)`, `z = (z₁, z₂, …)`; missing variables are 0.
    pub fn eval(&self, zeta: &[Complex64], z: &[Complex64]) -> Complex64 {
        let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
        let (s1, z1) = (get(zeta, 0), get(z, 0));
        let dval = atom_value(s1, z1);
        let (es, ez) = (s1.exp(), z1.exp());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex()
                * s1.powi(m.base[0] as i32)
                * z1.powi(m.base[1] as i32)
                * es.powi(m.base[2] as i32)
                * ez.powi(m.base[3] as i32)
                * dval.powu(m.d);
            for (i, e) in m.zeta.iter().enumerate() {
                v *= get(zeta, i + 1).powu(*e);
            }
            for (i, e) in m.z.iter().enumerate() {
                v *= get(z, i + 1).powu(*e);
            }
            acc += v;
        }
        acc
    }
}

fn unit_vec(i: usize) -> Vec<u32> {
    let mut v = vec![0; i + 1];
    v[i] = 1;
    v
}

/// `(ζ^k − z^k)/(ζ − z)` as `(a, b, sign)` triples for `sign·ζ^a z^b`.
fn power_quotient(k: i64) -> Vec<(i64, i64, i64)> {
    if k > 0 {
        (0..k).map(|a| (a, k - 1 - a, 1)).collect()
    } else {
        let m = -k;
        (0..m).map(|a| (-a - 1, -(m - a), -1)).collect()
    }
}

/// `(e^ζ − e^z)/(ζ − z)`, exact to the diagonal.
pub fn atom_value(zeta: Complex64, z: Complex64) -> Complex64 {
    let d = zeta - z;
    if d.norm() > 0.5 {
        return (zeta.exp() - z.exp()) / d;
    }
    // e^z·(e^d − 1)/d by its series
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 2..40 {
        term = term * d / n as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    z.exp() * sum
}

impl<'a> std::ops::Add<&'a TwoVarExpPoly> for &'a TwoVarExpPoly {
    type Output = TwoVarExpPoly;
    fn add(self, o: &TwoVarExpPoly) -> TwoVarExpPoly {
        let mut t = self.clone();
        for (m, c) in &o.terms {
            t.push(m.clone(), c.clone());
        }
        t
    }
}

impl<'a> std::ops::Sub<&'a TwoVarExpPoly> for &'a TwoVarExpPoly {
    type Output = TwoVarExpPoly;
    fn sub(self, o: &TwoVarExpPoly) -> TwoVarExpPoly {
        let mut t = self.clone();
        for (m, c) in &o.terms {
            t.push(m.clone(), -c);
        }
        t
    }
}

impl<'a> std::ops::Mul<&'a TwoVarExpPoly> for &'a TwoVarExpPoly {
    type Output = TwoVarExpPoly;
    fn mul(self, o: &TwoVarExpPoly) -> TwoVarExpPoly {
        let mut t = TwoVarExpPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                t.push(m1.mul(m2), c1 * c2);
            }
        }
        t.reduce()
    }
}

impl fmt::Display for TwoVarExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let pow = |n: &str, e: i64| if e == 1 { n.to_string() } else { format!("{n}^{e}") };
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            for (n, e) in ["zeta1", "z1", "exp(zeta1)", "exp(z1)"].iter().zip(&m.base) {
                if *e != 0 {
                    parts.push(pow(n, *e));
                }
            }
            for (j, e) in m.zeta.iter().enumerate().filter(|(_, e)| **e > 0) {
                parts.push(pow(&format!("zeta{}", j + 2), *e as i64));
            }
            for (j, e) in m.z.iter().enumerate().filter(|(_, e)| **e > 0) {
                parts.push(pow(&format!("z{}", j + 2), *e as i64));
            }
            if m.d > 0 {
                parts.push(pow("D", m.d as i64));
            }
            let negative = c.is_real() && num_traits::Signed::is_negative(&c.re);
            let abs = if negative { -c.clone() } else { c.clone() };
            let coeff = if abs.is_real() { abs.to_string() } else { format!("({abs})") };
            if !(abs.is_one() && !parts.is_empty()) {
                parts.insert(0, coeff);
            }
            let sep = match (i, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// `(q(ζ) − q(z))/(ζ − z)` in normal form.
pub fn hefer_quotient(q: &HElement) -> TwoVarExpPoly {
    let (num, den) = q.fraction();
    let (e, rest) = den.split_z_power();
    let inv = rest.coeff(0).inv();
    let mut t = TwoVarExpPoly::zero();
    // Leibniz on ζ^k e^{jζ}: ζ^k·Δ(e^{j·}) + Δ(ζ^k)·e^{jz}
    for (j, p) in num.terms() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c * &inv;
            let k = k as i64 - e as i64;
            for (m, s) in exp_quotient(j) {
                let mut m = m;
                m.base[0] += k;
                t.push(m, &c * &Q::from_int(s));
            }
            for (a, b, s) in power_quotient(k).into_iter().filter(|_| k != 0) {
                let m = Mono { base: [a, b, 0, j], ..Mono::default() };
                t.push(m, &c * &Q::from_int(s));
            }
        }
    }
    t.reduce()
}

/// `(e^{jζ} − e^{jz})/(ζ − z)` as multiples of `D`.
fn exp_quotient(j: i64) -> Vec<(Mono, i64)> {
    let mk = |a: i64, b: i64| Mono { base: [0, 0, a, b], d: 1, ..Mono::default() };
    if j > 0 {
        (0..j).map(|a| (mk(a, j - 1 - a), 1)).collect()
    } else if j < 0 {
        // Δ(e^{−m·}) = −e^{−mζ}e^{−mz}·Δ(e^{m·})
        let m = -j;
        (0..m).map(|a| (mk(a - m, m - 1 - a - m), -1)).collect()
    } else {
        Vec::new()
    }
}

/// The pair `(h₁, h₂)` with `h₁(ζ₁−z₁) + h₂(ζ₂−z₂) = q(ζ₁)ζ₂^α − q(z₁)z₂^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeferPair {
    pub h1: TwoVarExpPoly,
    pub h2: TwoVarExpPoly,
}

pub fn hefer_pair_n2(q: &HElement, alpha: u32) -> HeferPair {
    let h1 = &hefer_quotient(q) * &TwoVarExpPoly::z(2).pow(alpha);
    let mut sum = TwoVarExpPoly::zero();
    for k in 1..=alpha {
        sum = &sum + &(&TwoVarExpPoly::zeta(2).pow(alpha - k) * &TwoVarExpPoly::z(2).pow(k - 1));
    }
    let h2 = &TwoVarExpPoly::from_h(q, Side::Zeta) * &sum;
    HeferPair { h1, h2 }
}

/// Both sides of the pair identity, and whether they agree exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTranscript {
    pub lhs: TwoVarExpPoly,
    pub rhs: TwoVarExpPoly,
    pub holds: bool,
}

pub fn pair_identity(q: &HElement, alpha: u32, pair: &HeferPair) -> IdentityTranscript {
    let d1 = &TwoVarExpPoly::zeta(1) - &TwoVarExpPoly::z(1);
    let d2 = &TwoVarExpPoly::zeta(2) - &TwoVarExpPoly::z(2);
    let lhs = &(&pair.h1 * &d1) + &(&pair.h2 * &d2);
    let rhs = &(&TwoVarExpPoly::from_h(q, Side::Zeta) * &TwoVarExpPoly::zeta(2).pow(alpha))
        - &(&TwoVarExpPoly::from_h(q, Side::Z) * &TwoVarExpPoly::z(2).pow(alpha));
    let holds = (&lhs - &rhs).is_zero();
    IdentityTranscript { lhs, rhs, holds }
}

/// `(ζ − z)·p − (q(ζ) − q(z))`, which is zero for `p = hefer_quotient(q)`.
pub fn quotient_defect(q: &HElement, p: &TwoVarExpPoly) -> TwoVarExpPoly {
    let d = &TwoVarExpPoly::zeta(1) - &TwoVarExpPoly::z(1);
    &(&d * p) - &(&TwoVarExpPoly::from_h(q, Side::Zeta) - &TwoVarExpPoly::from_h(q, Side::Z))
}

/// `(q(ζ) − q(z))/(ζ − z)` from values of `q*`, with `q*′` on the diagonal.
pub fn quotient_value(q: &HElement, zeta: Complex64, z: Complex64) -> Result<Complex64> {
    let d = zeta - z;
    if d.norm() <= 1e-8 * (1.0 + z.norm()) {
        let t = taylor_coefficients(q, z, 3)?;
        return Ok(t[1] + t[2] * d);
    }
    Ok((q.eval(zeta)? - q.eval(z)?) / d)
}

const CERT_RADIUS: f64 = 20.0;
const CERT_POINTS: usize = 41;

/// `(M, N)` with `|q*(z)| ≤ C(1+|z|)^M e^{N|Re z|}`: `N` is the largest
/// absolute σ-exponent and `M` the largest coefficient degree less the
/// degree of the denominator.
pub fn growth_bounds(q: &HElement) -> Result<(u32, u32)> {
    let c = growth_certificate(q)?;
    Ok((c.m, c.n))
}

/// [`growth_bounds`] with the fitted `C`, certified on a `41 × 41` grid over
/// `[−20, 20]²`.
pub fn growth_certificate(q: &HElement) -> Result<GrowthCert> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (num, den) = q.fraction();
    let n = num.max_abs_exp() as u32;
    let m = (num.max_coeff_degree() as i64 - den.deg() as i64).max(0) as u32;
    let h = 2.0 * CERT_RADIUS / (CERT_POINTS - 1) as f64;
    let mut samples = Vec::with_capacity(CERT_POINTS * CERT_POINTS);
    for i in 0..CERT_POINTS {
        for j in 0..CERT_POINTS {
            let z = Complex64::new(-CERT_RADIUS + i as f64 * h, -CERT_RADIUS + j as f64 * h);
            samples.push((z, q.eval(z)?.norm()));
        }
    }
    let (c, worst) = envelope_check(&samples, m, n);
    if worst > 1.0 || !c.is_finite() {
        return Err(Error::Internal(format!("growth bound (M={m}, N={n}) not dominated: ray excess {worst:.3}")));
    }
    Ok(GrowthCert { c, m, n, denom_witness: PolyC::one(), samples: samples.len(), worst_ray: worst })
}

/// Sample grid for each of the two variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeferGrid {
    pub radius: f64,
    pub points: usize,
}

impl Default for HeferGrid {
    fn default() -> Self {
        HeferGrid { radius: 5.0, points: 11 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeferGrowthReport {
    pub m: u32,
    pub n: u32,
    /// Largest ratio to the envelope over all samples.
    pub c: f64,
    /// Largest ratio over the inner half box in both variables.
    pub c_inner: f64,
    /// Smallest `M′ ≤ M` that still passes.
    pub tight_m: u32,
    pub samples: usize,
}

/// Checks `|p(ζ,z)| ≤ C(1+|ζ|)^M(1+|z|)^M e^{N|Re ζ|}e^{N|Re z|}` for
/// `p = hefer_quotient(q)` and `(M, N)` from [`growth_bounds`]. The constant
/// fitted on the inner half of the box must cover the whole box up to one
/// power of `(1+r)/(1+r/2)`. Near-diagonal pairs are always included.
pub fn hefer_growth_check(q: &HElement, grid: &HeferGrid) -> Result<HeferGrowthReport> {
    if grid.points < 2 || !(grid.radius > 0.0) {
        return Err(Error::Config("hefer grid needs two points and a positive radius".into()));
    }
    let (m, n) = growth_bounds(q)?;
    let r = grid.radius;
    let h = 2.0 * r / (grid.points - 1) as f64;
    let pts: Vec<Complex64> = (0..grid.points)
        .flat_map(|i| (0..grid.points).map(move |j| Complex64::new(-r + i as f64 * h, -r + j as f64 * h)))
        .collect();
    let mut pairs = Vec::new();
    for a in &pts {
        for b in &pts {
            pairs.push((*a, *b));
        }
        for d in [1e-9, 1e-5] {
            pairs.push((a + d, *a));
        }
    }
    let vals: Vec<f64> = pairs.iter().map(|(a, b)| quotient_value(q, *a, *b).map(|v| v.norm())).collect::<Result<_>>()?;
    let ratio = |mm: u32, (a, b): (Complex64, Complex64), v: f64| {
        v / ((1.0 + a.norm()).powi(mm as i32)
            * (1.0 + b.norm()).powi(mm as i32)
            * (n as f64 * (a.re.abs() + b.re.abs())).exp())
    };
    let inner = |(a, b): (Complex64, Complex64)| {
        a.re.abs().max(a.im.abs()) <= r / 2.0 + 1e-12 && b.re.abs().max(b.im.abs()) <= r / 2.0 + 1e-12
    };
    let slack = (1.0 + r) / (1.0 + r / 2.0);
    let passes = |mm: u32| -> (bool, f64, f64) {
        let mut all: f64 = 0.0;
        let mut inn: f64 = 0.0;
        for (p, v) in pairs.iter().zip(&vals) {
            let x = ratio(mm, *p, *v);
            all = all.max(x);
            if inner(*p) {
                inn = inn.max(x);
            }
        }
        (all <= slack * inn, all, inn)
    };
    let (ok, c, c_inner) = passes(m);
    if !ok {
        return Err(Error::EnvelopeViolation(format!(
            "ratio {c:.3e} exceeds inner fit {c_inner:.3e} by more than {slack:.3}"
        )));
    }
    let tight_m = (0..=m).find(|&mm| passes(mm).0).unwrap_or(m);
    Ok(HeferGrowthReport { m, n, c, c_inner, tight_m, samples: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;
    use crate::hring::h_normalize;

    fn h(e: &ExpPoly) -> HElement {
        HElement::from_exppoly(e)
    }
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quotient_examples() {
        let s = h(&ExpPoly::sigma());
        assert_eq!(hefer_quotient(&s), TwoVarExpPoly::atom());
        assert_eq!(hefer_quotient(&h(&(&ExpPoly::sigma() - &ExpPoly::one()))), TwoVarExpPoly::atom());
        let z2 = HElement::from_poly(&PolyC::z().pow(2));
        assert_eq!(hefer_quotient(&z2), &TwoVarExpPoly::zeta(1) + &TwoVarExpPoly::z(1));
        let d = hefer_quotient(&s).eval(&[c(0.3, 0.2)], &[c(0.3, 0.2)]);
        assert!((d - c(0.3, 0.2).exp()).norm() < 1e-15);
    }

    #[test]
    fn defect_vanishes_with_denominators() {
        let q = h_normalize(&(&(&ExpPoly::sigma() - &ExpPoly::one()) - &ExpPoly::z()), &PolyC::z().pow(2)).unwrap();
        let p = hefer_quotient(&q);
        assert!(quotient_defect(&q, &p).is_zero());
        let (a, b) = (c(0.7, -0.4), c(-0.2, 0.9));
        assert!((p.eval(&[a], &[b]) - quotient_value(&q, a, b).unwrap()).norm() < 1e-12);
        let inv = h(&(&ExpPoly::monomial(PolyC::z(), -1) + &ExpPoly::sigma()));
        assert!(quotient_defect(&inv, &hefer_quotient(&inv)).is_zero());
    }

    #[test]
    fn pair_examples() {
        let s = h(&ExpPoly::sigma());
        let p = hefer_pair_n2(&s, 1);
        assert_eq!(p.h1, &TwoVarExpPoly::atom() * &TwoVarExpPoly::z(2));
        assert_eq!(p.h2, TwoVarExpPoly::from_h(&s, Side::Zeta));
        assert!(pair_identity(&s, 1, &p).holds);
        let p = hefer_pair_n2(&HElement::one(), 2);
        assert!(p.h1.is_zero());
        assert_eq!(p.h2, &TwoVarExpPoly::zeta(2) + &TwoVarExpPoly::z(2));
        let p = hefer_pair_n2(&s, 0);
        assert!(p.h2.is_zero());
    }

    #[test]
    fn growth() {
        assert_eq!(growth_bounds(&h(&ExpPoly::sigma().pow(2))).unwrap().1, 2);
        assert_eq!(growth_bounds(&HElement::from_poly(&PolyC::z().pow(5))).unwrap(), (5, 0));
        let q = h(&(&ExpPoly::monomial(PolyC::z(), -1) + &ExpPoly::sigma()));
        assert_eq!(growth_bounds(&q).unwrap().1, 1);
        let r = hefer_growth_check(&h(&ExpPoly::sigma()), &HeferGrid::default()).unwrap();
        assert_eq!(r.n, 1);
        let r = hefer_growth_check(&HElement::from_poly(&PolyC::z().pow(2)), &HeferGrid::default()).unwrap();
        assert_eq!((r.n, r.tight_m), (0, 1));
        hefer_growth_check(&h(&ExpPoly::sigma().pow(2)), &HeferGrid::default()).unwrap();
    }
}
