//! The ring `H` of quotients `p(z,σ)/φ(z)` whose characteristic function
//! `p(z,e^z)/φ(z)` is entire, with exact coefficients in `Q(i)`.
//!
//! Elements are stored as `c·σ^k · num/den` where `(c, k)` is a unit of `H`,
//! `den` is monic and coprime to the content of `num`, and `num` has σ-valuation
//! zero and a monic leading coefficient polynomial. Two elements are equal
//! exactly when all four parts agree, and equal up to units when `num` and `den`
//! agree.

mod bezout;
mod entire;
mod gcd;
mod numeric;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, RatExpPoly};
use crate::poly::PolyC;
use crate::scalar::GaussianRational as Q;

pub use bezout::{h_bezout, BezoutTier, BezoutTriple};
pub use entire::{
    check_entire, is_entire, orders_on, refine_orders, EntiretyCertificate, FactorFact,
    NotEntireWitness, ZeroFact,
};
pub use gcd::{algebraic_zero_divisor, h_divides, h_gcd, vanishing_orders, ZeroDivisorPart};
pub use numeric::taylor_coefficients;

/// A unit `c·σ^k` of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    pub c: Q,
    pub k: i64,
}

impl Unit {
    pub fn one() -> Self {
        Unit { c: Q::one(), k: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.c.is_one() && self.k == 0
    }

    pub fn as_exppoly(&self) -> ExpPoly {
        ExpPoly::monomial(PolyC::constant(self.c.clone()), self.k)
    }

    pub fn inv(&self) -> Unit {
        Unit { c: self.c.inv(), k: -self.k }
    }
}

#[derive(Clone, Debug)]
pub struct HElement {
    unit: Unit,
    num: ExpPoly,
    den: PolyC,
    cert: EntiretyCertificate,
}

impl PartialEq for HElement {
    fn eq(&self, o: &Self) -> bool {
        self.unit == o.unit && self.num == o.num && self.den == o.den
    }
}

impl Eq for HElement {}

/// Checks entirety, cancels common factors and applies unit normalization.
pub fn h_normalize(num: &ExpPoly, den: &PolyC) -> Result<HElement> {
    is_entire(num, den)?;
    Ok(normalize_unchecked(num, den))
}

/// Normalizes a pair already known to be entire.
pub(crate) fn normalize_unchecked(num: &ExpPoly, den: &PolyC) -> HElement {
    if num.is_zero() {
        return HElement::zero();
    }
    let g = den.gcd(&num.content());
    let mut n = num.div_poly_exact(&g).expect("gcd divides content");
    let mut d = den.exact_div(&g).expect("gcd divides den");
    let dl = d.lc();
    let mut c = dl.inv();
    d = d.scale(&c);
    let (k, shifted) = n.normalize_valuation();
    n = shifted;
    let l = n.leading_poly().lc();
    n = n.scale(&l.inv());
    c = &c * &l;
    let cert = check_entire(&n, &d)
        .expect("nonzero denominator")
        .expect("normalization preserves entirety");
    HElement { unit: Unit { c, k }, num: n, den: d, cert }
}

impl HElement {
    pub fn zero() -> Self {
        HElement {
            unit: Unit::one(),
            num: ExpPoly::zero(),
            den: PolyC::one(),
            cert: EntiretyCertificate::default(),
        }
    }

    pub fn one() -> Self {
        HElement::from_exppoly(&ExpPoly::one())
    }

    pub fn from_exppoly(p: &ExpPoly) -> Self {
        normalize_unchecked(p, &PolyC::one())
    }

    pub fn from_poly(p: &PolyC) -> Self {
        HElement::from_exppoly(&ExpPoly::from_poly(p.clone()))
    }

    pub fn constant(c: Q) -> Self {
        HElement::from_exppoly(&ExpPoly::constant(c))
    }

    pub fn from_unit(u: &Unit) -> Self {
        HElement::from_exppoly(&u.as_exppoly())
    }

    /// Builds an element from a fraction in `Q(i)(z)[σ^±]`, checking entirety.
    pub fn from_rat(r: &RatExpPoly) -> Result<Self> {
        let (n, d) = r.clear_denominators();
        h_normalize(&n, &d)
    }

    /// Builds an element from the stored parts, as read from serialized form.
    pub fn from_parts(unit: Unit, num: ExpPoly, den: PolyC) -> Result<Self> {
        if unit.c.is_zero() {
            return Err(Error::Internal("unit with zero constant".into()));
        }
        let full = num.mul_poly(&PolyC::constant(unit.c.clone())).shift(unit.k);
        h_normalize(&full, &den)
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    /// Normalized numerator (unit removed).
    pub fn num(&self) -> &ExpPoly {
        &self.num
    }

    pub fn den(&self) -> &PolyC {
        &self.den
    }

    pub fn certificate(&self) -> &EntiretyCertificate {
        &self.cert
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.unit.is_one()
    }

    /// True for `c·σ^k`, `c ≠ 0`.
    pub fn is_unit(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The element with its unit stripped.
    pub fn unit_free(&self) -> HElement {
        HElement { unit: Unit::one(), ..self.clone() }
    }

    pub fn eq_up_to_unit(&self, o: &HElement) -> bool {
        self.num == o.num && self.den == o.den
    }

    /// `(c·σ^k·num, den)`.
    pub fn fraction(&self) -> (ExpPoly, PolyC) {
        (
            self.num.mul_poly(&PolyC::constant(self.unit.c.clone())).shift(self.unit.k),
            self.den.clone(),
        )
    }

    pub fn as_rat(&self) -> RatExpPoly {
        let (n, d) = self.fraction();
        RatExpPoly::from(&n).scale(&crate::poly::RatFunc::new(PolyC::one(), d))
    }

    /// Inverse of a unit; `None` for non-units.
    pub fn unit_inverse(&self) -> Option<HElement> {
        self.is_unit().then(|| HElement::from_unit(&self.unit.inv()))
    }

    /// Largest absolute σ-exponent of `c·σ^k·num`.
    pub fn max_abs_exp(&self) -> u64 {
        self.fraction().0.max_abs_exp()
    }

    /// Pivot key: σ-span, then largest coefficient degree, then size.
    pub fn size_key(&self) -> (usize, usize, usize, u64) {
        (
            self.num.sigma_span(),
            self.num.max_coeff_degree(),
            self.den.deg(),
            self.num.height() + self.den.height(),
        )
    }

    /// `q*(z)`, with removable singularities at roots of `den` resolved.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        numeric::eval_element(self, z)
    }

    pub fn pow(&self, e: u32) -> HElement {
        let mut acc = HElement::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formats in the operator grammar, e.g. `2*s^-1*(s - 1)/(z)`.
    pub fn to_expr_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        if !self.unit.c.is_one() {
            parts.push(self.unit.c.to_string());
        }
        if self.unit.k != 0 {
            parts.push(if self.unit.k == 1 { "s".into() } else { format!("s^{}", self.unit.k) });
        }
        if !self.num.is_one() || parts.is_empty() {
            let n = self.num.to_expr_string();
            let needs = self.num.terms().count() > 1
                || self.num.coeff(self.num.max_exp().unwrap()).term_count() > 1
                || !parts.is_empty() && n.starts_with('-');
            parts.push(if needs && (!parts.is_empty() || !self.den.is_one()) {
                format!("({n})")
            } else {
                n
            });
        }
        let mut s = parts.join("*");
        if !self.den.is_one() {
            s = format!("{s}/({})", self.den);
        }
        s
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

fn combine(a: &HElement, b: &HElement, sign: i64) -> HElement {
    let (na, da) = a.fraction();
    let (nb, db) = b.fraction();
    let g = da.gcd(&db);
    let ca = db.exact_div(&g).unwrap();
    let cb = da.exact_div(&g).unwrap();
    let nb = if sign < 0 { -&nb } else { nb };
    let n = &na.mul_poly(&ca) + &nb.mul_poly(&cb);
    normalize_unchecked(&n, &(&da * &ca))
}

impl<'a> Add<&'a HElement> for &'a HElement {
    type Output = HElement;
    fn add(self, o: &HElement) -> HElement {
        combine(self, o, 1)
    }
}

impl<'a> Sub<&'a HElement> for &'a HElement {
    type Output = HElement;
    fn sub(self, o: &HElement) -> HElement {
        combine(self, o, -1)
    }
}

impl<'a> Mul<&'a HElement> for &'a HElement {
    type Output = HElement;
    fn mul(self, o: &HElement) -> HElement {
        let (na, da) = self.fraction();
        let (nb, db) = o.fraction();
        normalize_unchecked(&(&na * &nb), &(&da * &db))
    }
}

impl Neg for &HElement {
    type Output = HElement;
    fn neg(self) -> HElement {
        let mut out = self.clone();
        out.unit.c = -&out.unit.c;
        out
    }
}
