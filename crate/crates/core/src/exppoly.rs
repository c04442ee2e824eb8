//! Exponential polynomials `Σ_j p_j(z) σ^j` (Laurent in `σ`, with `σ ↦ e^z`)
//! and their Euclidean structure over the rational-function field `Q(i)(z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{PolyC, RatFunc};
use crate::scalar::{factorial, GaussianRational as Q};

/// Sparse Laurent polynomial in `σ` with polynomial coefficients in `z`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExpPoly {
    terms: BTreeMap<i64, PolyC>,
}

impl ExpPoly {
    pub fn from_map(mut terms: BTreeMap<i64, PolyC>) -> Self {
        terms.retain(|_, p| !p.is_zero());
        ExpPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, PolyC)>) -> Self {
        let mut map: BTreeMap<i64, PolyC> = BTreeMap::new();
        for (j, p) in terms {
            let e = map.entry(j).or_default();
            *e = &*e + &p;
        }
        ExpPoly::from_map(map)
    }

    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::from_poly(PolyC::one())
    }

    pub fn from_poly(p: PolyC) -> Self {
        ExpPoly::monomial(p, 0)
    }

    pub fn constant(c: Q) -> Self {
        ExpPoly::from_poly(PolyC::constant(c))
    }

    /// `p(z)·σ^j`
    pub fn monomial(p: PolyC, j: i64) -> Self {
        ExpPoly::from_terms([(j, p)])
    }

    pub fn sigma() -> Self {
        ExpPoly::monomial(PolyC::one(), 1)
    }

    pub fn z() -> Self {
        ExpPoly::from_poly(PolyC::z())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &PolyC)> {
        self.terms.iter().map(|(j, p)| (*j, p))
    }

    pub fn term_map(&self) -> &BTreeMap<i64, PolyC> {
        &self.terms
    }

    pub fn coeff(&self, j: i64) -> PolyC {
        self.terms.get(&j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(PolyC::is_one)
    }

    /// Lowest σ-exponent.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest σ-exponent.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// σ-degree after shifting the valuation to zero.
    pub fn sigma_span(&self) -> usize {
        match (self.valuation(), self.max_exp()) {
            (Some(a), Some(b)) => (b - a) as usize,
            _ => 0,
        }
    }

    /// Largest `|j|` over the support.
    pub fn max_abs_exp(&self) -> u64 {
        self.terms.keys().map(|j| j.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn max_coeff_degree(&self) -> usize {
        self.terms.values().map(PolyC::deg).max().unwrap_or(0)
    }

    /// True when only `σ^0` occurs, i.e. a polynomial in `z`.
    pub fn as_poly(&self) -> Option<PolyC> {
        match self.terms.len() {
            0 => Some(PolyC::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Coefficient polynomial at the highest σ-exponent.
    pub fn leading_poly(&self) -> PolyC {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    /// Multiplies by `σ^k`.
    pub fn shift(&self, k: i64) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(j, p)| (j + k, p.clone())).collect(),
        }
    }

    /// Shifts so the valuation is zero; returns `(shift applied, result)`.
    pub fn normalize_valuation(&self) -> (i64, ExpPoly) {
        let v = self.valuation().unwrap_or(0);
        (v, self.shift(-v))
    }

    pub fn scale(&self, c: &Q) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly::from_map(self.terms.iter().map(|(j, p)| (*j, p.scale(c))).collect())
    }

    pub fn mul_poly(&self, q: &PolyC) -> ExpPoly {
        ExpPoly::from_map(self.terms.iter().map(|(j, p)| (*j, p * q)).collect())
    }

    /// Exact division of every coefficient by `q`.
    pub fn div_poly_exact(&self, q: &PolyC) -> Option<ExpPoly> {
        let mut out = BTreeMap::new();
        for (j, p) in &self.terms {
            out.insert(*j, p.exact_div(q)?);
        }
        Some(ExpPoly::from_map(out))
    }

    /// Monic gcd of the coefficient polynomials.
    pub fn content(&self) -> PolyC {
        let mut g = PolyC::zero();
        for p in self.terms.values() {
            g = g.gcd(p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn pow(&self, e: u32) -> ExpPoly {
        let mut acc = ExpPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `Σ_j (p_j' + j·p_j) σ^j`, so that the result evaluates to `d/dz` of `self*`.
    pub fn derivative(&self) -> ExpPoly {
        ExpPoly::from_map(
            self.terms
                .iter()
                .map(|(j, p)| (*j, &p.derivative() + &p.scale(&Q::from_int(*j))))
                .collect(),
        )
    }

    /// Substitutes `σ ↦ e^z` and evaluates in floating point.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (v, _) = self.eval_with_scale(z)?;
        Ok(v)
    }

    /// Value together with `Σ_j |p_j|(|z|)·e^{j Re z}`, the magnitude against which
    /// rounding error should be judged.
    pub fn eval_with_scale(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Overflow(format!("non-finite evaluation point {z}")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        let r = z.norm();
        for (j, p) in &self.terms {
            let jf = *j as f64;
            let exp_re = jf * z.re;
            if exp_re > 700.0 {
                return Err(Error::Overflow(format!(
                    "e^({j}·z) overflows at Re z = {}",
                    z.re
                )));
            }
            let e = Complex64::from_polar(exp_re.exp(), jf * z.im);
            acc += p.eval_complex(z) * e;
            scale += p.abs_bound(r) * exp_re.exp();
        }
        Ok((acc, scale))
    }

    /// Taylor coefficients at `z = 0` of `self*`, orders `0..n`, exactly.
    pub fn taylor_at_zero(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (j, p) in &self.terms {
            let jq = Q::from_int(*j);
            // e^{jz} = Σ j^m z^m / m!
            let mut ecoef = Vec::with_capacity(n);
            for m in 0..n {
                ecoef.push(&jq.pow(m as u32) / &factorial(m as u64));
            }
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() || i >= n {
                    continue;
                }
                for m in 0..(n - i) {
                    let t = c * &ecoef[m];
                    out[i + m] += &t;
                }
            }
        }
        out
    }

    /// Upper bound on the vanishing order of `self*` at any point:
    /// `Σ_j (deg p_j + 1) − 1`.
    pub fn order_bound(&self) -> usize {
        self.terms.values().map(|p| p.deg() + 1).sum::<usize>().saturating_sub(1)
    }

    /// Exact vanishing order of `self*` at 0. Panics on the zero polynomial.
    pub fn order_at_zero(&self) -> u32 {
        assert!(!self.is_zero(), "order of the zero exponential polynomial");
        let n = self.order_bound() + 1;
        let t = self.taylor_at_zero(n);
        t.iter().position(|c| !c.is_zero()).expect("order bound") as u32
    }

    /// Substitute `z ↦ z + c` in every coefficient (the σ part picks up `e^{jc}`,
    /// which the caller accounts for separately).
    pub fn map_coeffs(&self, f: impl Fn(&PolyC) -> PolyC) -> ExpPoly {
        ExpPoly::from_map(self.terms.iter().map(|(j, p)| (*j, f(p))).collect())
    }

    pub fn height(&self) -> u64 {
        self.terms.values().map(PolyC::height).sum()
    }

    /// Formats in the operator grammar, with `s` for σ.
    pub fn to_expr_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (j, p) in self.terms.iter().rev() {
            let s = match *j {
                0 => String::new(),
                1 => "s".into(),
                _ => format!("s^{j}"),
            };
            let pc = p.to_string();
            let term = if s.is_empty() {
                if p.term_count() > 1 {
                    format!("({pc})")
                } else {
                    pc
                }
            } else if p.is_one() {
                s
            } else if *p == PolyC::constant(Q::from_int(-1)) {
                format!("-{s}")
            } else if p.term_count() > 1 {
                format!("({pc})*{s}")
            } else {
                format!("{pc}*{s}")
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<'a> Add<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn add(self, o: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        for (j, p) in &o.terms {
            let e = terms.entry(*j).or_default();
            *e = &*e + p;
        }
        ExpPoly::from_map(terms)
    }
}

impl<'a> Sub<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn sub(self, o: &ExpPoly) -> ExpPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn mul(self, o: &ExpPoly) -> ExpPoly {
        let mut terms: BTreeMap<i64, PolyC> = BTreeMap::new();
        for (i, p) in &self.terms {
            for (j, q) in &o.terms {
                let e = terms.entry(i + j).or_default();
                *e = &*e + &(p * q);
            }
        }
        ExpPoly::from_map(terms)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|(j, p)| (*j, -p)).collect() }
    }
}

pub fn ep_add(a: &ExpPoly, b: &ExpPoly) -> ExpPoly {
    a + b
}

pub fn ep_mul(a: &ExpPoly, b: &ExpPoly) -> ExpPoly {
    a * b
}

pub fn ep_derivative(a: &ExpPoly) -> ExpPoly {
    a.derivative()
}

pub fn ep_eval(a: &ExpPoly, z: Complex64) -> Result<Complex64> {
    a.eval(z)
}

/// Laurent polynomial in `σ` over `Q(i)(z)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatExpPoly {
    terms: BTreeMap<i64, RatFunc>,
}

impl RatExpPoly {
    pub fn from_map(mut terms: BTreeMap<i64, RatFunc>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        RatExpPoly { terms }
    }

    pub fn zero() -> Self {
        RatExpPoly::default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &RatFunc)> {
        self.terms.iter().map(|(j, c)| (*j, c))
    }

    pub fn coeff(&self, j: i64) -> RatFunc {
        self.terms.get(&j).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn shift(&self, k: i64) -> RatExpPoly {
        RatExpPoly { terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &RatFunc) -> RatExpPoly {
        RatExpPoly::from_map(self.terms.iter().map(|(j, a)| (*j, a * c)).collect())
    }

    /// Monic lcm of the coefficient denominators.
    pub fn common_denominator(&self) -> PolyC {
        let mut l = PolyC::one();
        for c in self.terms.values() {
            let g = l.gcd(&c.den);
            l = &l * &c.den.exact_div(&g).unwrap();
        }
        l.monic()
    }

    /// `(n, d)` with `self = n / d`, `d` monic.
    pub fn clear_denominators(&self) -> (ExpPoly, PolyC) {
        let d = self.common_denominator();
        let n = ExpPoly::from_map(
            self.terms
                .iter()
                .map(|(j, c)| (*j, &c.num * &d.exact_div(&c.den).unwrap()))
                .collect(),
        );
        (n, d)
    }

    /// `Some(ExpPoly)` when every coefficient is a polynomial.
    pub fn as_exppoly(&self) -> Option<ExpPoly> {
        let mut out = BTreeMap::new();
        for (j, c) in &self.terms {
            if !c.is_polynomial() {
                return None;
            }
            out.insert(*j, c.num.clone());
        }
        Some(ExpPoly::from_map(out))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in &self.terms {
            acc += c.eval_complex(z) * (z * (*j as f64)).exp();
        }
        acc
    }
}

impl From<&ExpPoly> for RatExpPoly {
    fn from(a: &ExpPoly) -> Self {
        RatExpPoly::from_map(a.terms().map(|(j, p)| (j, RatFunc::from_poly(p.clone()))).collect())
    }
}

impl<'a> Add<&'a RatExpPoly> for &'a RatExpPoly {
    type Output = RatExpPoly;
    fn add(self, o: &RatExpPoly) -> RatExpPoly {
        let mut terms = self.terms.clone();
        for (j, c) in &o.terms {
            let e = terms.entry(*j).or_insert_with(RatFunc::zero);
            *e = &*e + c;
        }
        RatExpPoly::from_map(terms)
    }
}

impl<'a> Sub<&'a RatExpPoly> for &'a RatExpPoly {
    type Output = RatExpPoly;
    fn sub(self, o: &RatExpPoly) -> RatExpPoly {
        let neg = RatExpPoly { terms: o.terms.iter().map(|(j, c)| (*j, -c)).collect() };
        self + &neg
    }
}

impl<'a> Mul<&'a RatExpPoly> for &'a RatExpPoly {
    type Output = RatExpPoly;
    fn mul(self, o: &RatExpPoly) -> RatExpPoly {
        let mut terms: BTreeMap<i64, RatFunc> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let e = terms.entry(i + j).or_insert_with(RatFunc::zero);
                *e = &*e + &(a * b);
            }
        }
        RatExpPoly::from_map(terms)
    }
}

// ---------------------------------------------------------------------------
// Dense σ-polynomials over Q(i)(z), valuation zero. Internal Euclid machinery.

type SigmaPoly = Vec<RatFunc>;

fn sp_trim(mut a: SigmaPoly) -> SigmaPoly {
    while a.last().is_some_and(RatFunc::is_zero) {
        a.pop();
    }
    a
}

fn sp_from(a: &RatExpPoly) -> SigmaPoly {
    let v = a.valuation().unwrap_or(0);
    let n = a.max_exp().map(|m| (m - v + 1) as usize).unwrap_or(0);
    let mut out = vec![RatFunc::zero(); n];
    for (j, c) in a.terms() {
        out[(j - v) as usize] = c.clone();
    }
    out
}

/// Dense form of a σ-polynomial with nonnegative exponents.
fn sp_dense(a: &RatExpPoly) -> SigmaPoly {
    let n = a.max_exp().map(|m| (m + 1) as usize).unwrap_or(0);
    let mut out = vec![RatFunc::zero(); n];
    for (j, c) in a.terms() {
        out[j as usize] = c.clone();
    }
    out
}

fn sp_to(a: &SigmaPoly) -> RatExpPoly {
    RatExpPoly::from_map(a.iter().enumerate().map(|(k, c)| (k as i64, c.clone())).collect())
}

fn sp_sub(a: &SigmaPoly, b: &SigmaPoly) -> SigmaPoly {
    let n = a.len().max(b.len());
    let z = RatFunc::zero();
    sp_trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn sp_mul(a: &SigmaPoly, b: &SigmaPoly) -> SigmaPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    sp_trim(out)
}

fn sp_divrem(a: &SigmaPoly, b: &SigmaPoly) -> (SigmaPoly, SigmaPoly) {
    let b = sp_trim(b.clone());
    assert!(!b.is_empty());
    let mut r = sp_trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv_lc = b[db].inv();
    let mut q = vec![RatFunc::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &inv_lc;
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * bc);
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (sp_trim(q), sp_trim(r))
}

/// Euclidean division in `Q(i)(z)[σ^±]`: `a = q·b + r` with the σ-span of `r`
/// below the σ-degree of `b` once valuations are normalized.
pub fn laurent_divmod(a: &ExpPoly, b: &ExpPoly) -> Result<(RatExpPoly, RatExpPoly)> {
    rat_laurent_divmod(&RatExpPoly::from(a), &RatExpPoly::from(b))
}

pub fn rat_laurent_divmod(a: &RatExpPoly, b: &RatExpPoly) -> Result<(RatExpPoly, RatExpPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok((RatExpPoly::zero(), RatExpPoly::zero()));
    }
    let va = a.valuation().unwrap();
    let vb = b.valuation().unwrap();
    // divide as polynomials in σ when a·σ^{-vb} has no negative powers
    let base = va.min(vb);
    let (q, r) = sp_divrem(&sp_dense(&a.shift(-base)), &sp_from(b));
    Ok((sp_to(&q).shift(base - vb), sp_to(&r).shift(base)))
}

/// Extended Euclid in `Q(i)(z)[σ]` on valuation-normalized inputs.
/// Returns `(g, s, t)` with `s·a + t·b = g`, `g` monic in σ with valuation 0.
/// The cofactors refer to the valuation-normalized `a, b`.
pub fn sigma_ext_gcd(a: &RatExpPoly, b: &RatExpPoly) -> (RatExpPoly, RatExpPoly, RatExpPoly) {
    let (mut r0, mut r1) = (sp_from(a), sp_from(b));
    let (mut s0, mut s1): (SigmaPoly, SigmaPoly) = (vec![RatFunc::one()], Vec::new());
    let (mut t0, mut t1): (SigmaPoly, SigmaPoly) = (Vec::new(), vec![RatFunc::one()]);
    while !r1.is_empty() {
        let (q, r) = sp_divrem(&r0, &r1);
        let s2 = sp_sub(&s0, &sp_mul(&q, &s1));
        let t2 = sp_sub(&t0, &sp_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.is_empty() {
        return (RatExpPoly::zero(), sp_to(&s0), sp_to(&t0));
    }
    // strip σ-valuation of the gcd (a unit factor σ^k) and make it monic
    let lead = r0.iter().position(|c| !c.is_zero()).unwrap();
    let inv = r0.last().unwrap().inv();
    let g = sp_to(&r0).shift(-(lead as i64)).scale(&inv);
    let s = sp_to(&s0).scale(&inv).shift(-(lead as i64));
    let t = sp_to(&t0).scale(&inv).shift(-(lead as i64));
    (g, s, t)
}

/// Primitive gcd in `Q(i)[z][σ]` (valuation 0, content 1, monic leading coefficient).
pub fn exppoly_gcd(a: &ExpPoly, b: &ExpPoly) -> ExpPoly {
    if a.is_zero() && b.is_zero() {
        return ExpPoly::zero();
    }
    let (g, _, _) = sigma_ext_gcd(&RatExpPoly::from(a), &RatExpPoly::from(b));
    if g.is_zero() {
        return ExpPoly::zero();
    }
    let (n, _) = g.clear_denominators();
    primitive_part(&n)
}

/// Divides out the content and σ-valuation and makes the leading coefficient
/// polynomial monic.
pub fn primitive_part(a: &ExpPoly) -> ExpPoly {
    if a.is_zero() {
        return ExpPoly::zero();
    }
    let c = a.content();
    let (_, n) = a.div_poly_exact(&c).unwrap().normalize_valuation();
    let l = n.leading_poly().lc();
    n.scale(&l.inv())
}

/// Exact quotient `a / b` in `Q(i)[z][σ^±]`, if it exists.
pub fn exppoly_exact_div(a: &ExpPoly, b: &ExpPoly) -> Option<ExpPoly> {
    let (q, r) = laurent_divmod(a, b).ok()?;
    if !r.is_zero() {
        return None;
    }
    q.as_exppoly()
}

/// Resultant in σ of the valuation-normalized inputs, an element of `Q(i)[z]`.
/// Computed as the Sylvester determinant by fraction-free elimination.
pub fn sigma_resultant(a: &ExpPoly, b: &ExpPoly) -> PolyC {
    let (_, a) = a.normalize_valuation();
    let (_, b) = b.normalize_valuation();
    let m = a.max_exp().unwrap_or(0) as usize;
    let n = b.max_exp().unwrap_or(0) as usize;
    let size = m + n;
    if size == 0 {
        return PolyC::one();
    }
    let mut mat = vec![vec![PolyC::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + (m - k)] = a.coeff(k as i64);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + (n - k)] = b.coeff(k as i64);
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<PolyC>>) -> PolyC {
    let n = m.len();
    let mut sign = Q::one();
    let mut prev = PolyC::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return PolyC::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = PolyC::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}
