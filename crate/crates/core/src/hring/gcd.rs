//! Divisibility, algebraic zeros and greatest common divisors in `H`.
//!
//! Every zero of `a*` at an algebraic point is visible exactly: at `α ≠ 0` it
//! forces each coefficient polynomial to vanish, so such zeros are the roots of
//! the content, with orders read off the derivative ladder. Common zeros of two
//! coprime exponential polynomials are roots of their σ-resultant, hence
//! algebraic, which is what makes the gcd computable.

use super::entire::{nonzero_roots_part, refine_orders};
use super::{check_entire, h_normalize, normalize_unchecked, HElement};
use crate::error::{DivideStep, Error, Result};
use crate::exppoly::{exppoly_exact_div, exppoly_gcd, laurent_divmod, sigma_resultant, ExpPoly};
use crate::poly::{PolyC, RatFunc};

/// Algebraic part of the zero set of `a*`: pairwise coprime squarefree factors
/// with the vanishing order of `a*` on their roots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZeroDivisorPart {
    pub factors: Vec<(PolyC, u32)>,
}

impl ZeroDivisorPart {
    /// The polynomial `Π ψ^m`.
    pub fn product(&self) -> PolyC {
        self.factors.iter().fold(PolyC::one(), |acc, (p, m)| &acc * &p.pow(*m))
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Returns `q` with `q·a = b`, or the step at which division fails.
pub fn h_divides(a: &HElement, b: &HElement) -> Result<HElement> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if b.is_zero() {
        return Ok(HElement::zero());
    }
    let (na, da) = a.fraction();
    let (nb, db) = b.fraction();
    let (q, r) = laurent_divmod(&nb.mul_poly(&da), &na)?;
    if !r.is_zero() {
        return Err(Error::NotDivisible {
            step: DivideStep::SigmaDivision,
            detail: format!("nonzero remainder dividing {} by {}", b, a),
        });
    }
    let q = q.scale(&RatFunc::new(PolyC::one(), db));
    let (n, d) = q.clear_denominators();
    match check_entire(&n, &d)? {
        Ok(_) => Ok(normalize_unchecked(&n, &d)),
        Err(w) => Err(Error::NotDivisible { step: DivideStep::Entirety, detail: w.to_string() }),
    }
}

/// Vanishing orders of `a*` on the roots of the squarefree `psi`, split into
/// pieces of constant order. The factor `z` of `psi` is reported separately.
pub fn vanishing_orders(a: &HElement, psi: &PolyC) -> Vec<(PolyC, u32)> {
    assert!(!a.is_zero(), "vanishing orders of zero");
    let (n, d) = a.fraction();
    let mut out = Vec::new();
    if psi.coeff(0).is_zero() {
        let o = n.order_at_zero() - d.split_z_power().0;
        out.push((PolyC::z(), o));
    }
    let base = nonzero_roots_part(psi);
    let dp = ExpPoly::from_poly(d);
    for (piece, o) in refine_orders(&[base], &[&n, &dp]) {
        out.push((piece, o[0] - o[1]));
    }
    out
}

/// The algebraic zeros of `a*` with exact multiplicities.
pub fn algebraic_zero_divisor(a: &HElement) -> ZeroDivisorPart {
    assert!(!a.is_zero(), "zero divisor of zero");
    let mut psi = nonzero_roots_part(&a.num().content());
    psi = &psi * &PolyC::z();
    let factors = vanishing_orders(a, &psi).into_iter().filter(|(_, m)| *m > 0).collect();
    ZeroDivisorPart { factors }
}

/// Greatest common divisor in `H`, normalized (unit one).
///
/// `g₁` is the primitive gcd of the numerators; the correction `Π ψ^{e_ψ}`
/// with `e_ψ = min(ord a*, ord b*) − ord g₁*` is taken over a coprime base
/// containing every algebraic point where the orders can differ.
pub fn h_gcd(a: &HElement, b: &HElement) -> Result<HElement> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(Error::BothZero),
        (true, false) => return Ok(b.unit_free()),
        (false, true) => return Ok(a.unit_free()),
        _ => {}
    }
    let (na, da) = (a.num(), a.den());
    let (nb, db) = (b.num(), b.den());
    let g1 = exppoly_gcd(na, nb);
    let ca = exppoly_exact_div(na, &g1).ok_or_else(|| Error::Internal("gcd does not divide".into()))?;
    let cb = exppoly_exact_div(nb, &g1).ok_or_else(|| Error::Internal("gcd does not divide".into()))?;
    let (_, ca0) = ca.normalize_valuation();
    let (_, cb0) = cb.normalize_valuation();
    let elim = if ca0.max_exp() == Some(0) && cb0.max_exp() == Some(0) {
        &ca0.coeff(0) * &cb0.coeff(0)
    } else {
        sigma_resultant(&ca0, &cb0)
    };
    let mut cand = &(&elim * &ca.content()) * &cb.content();
    cand = &(&cand * da) * db;

    let mut num = g1.clone();
    let mut den = PolyC::one();
    // the point 0
    let ord = |f: &ExpPoly, d: &PolyC| f.order_at_zero() as i64 - d.split_z_power().0 as i64;
    let e0 = ord(na, da).min(ord(nb, db)) - g1.order_at_zero() as i64;
    apply_power(&mut num, &mut den, &PolyC::z(), e0);

    let base = nonzero_roots_part(&cand);
    let (dae, dbe) = (ExpPoly::from_poly(da.clone()), ExpPoly::from_poly(db.clone()));
    for (psi, o) in refine_orders(&[base], &[na, &dae, nb, &dbe, &g1]) {
        let e = (o[0] as i64 - o[1] as i64).min(o[2] as i64 - o[3] as i64) - o[4] as i64;
        apply_power(&mut num, &mut den, &psi, e);
    }
    let g = h_normalize(&num, &den)?.unit_free();
    h_divides(&g, a).map_err(|e| Error::Internal(format!("gcd check failed for first argument: {e}")))?;
    h_divides(&g, b).map_err(|e| Error::Internal(format!("gcd check failed for second argument: {e}")))?;
    Ok(g)
}

fn apply_power(num: &mut ExpPoly, den: &mut PolyC, psi: &PolyC, e: i64) {
    if e > 0 {
        *num = num.mul_poly(&psi.pow(e as u32));
    } else if e < 0 {
        *den = &*den * &psi.pow((-e) as u32);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn p(cs: &[i64]) -> PolyC {
        PolyC::from_ints(cs)
    }
    fn s_minus(c: i64) -> ExpPoly {
        &ExpPoly::sigma() - &ExpPoly::constant(Q::from_int(c))
    }
    fn h(e: &ExpPoly) -> HElement {
        HElement::from_exppoly(e)
    }

    #[test]
    fn divides_examples() {
        let q = h_divides(&h(&s_minus(1)), &h(&(&ExpPoly::sigma().pow(2) - &ExpPoly::one()))).unwrap();
        assert_eq!(q, h(&s_minus(-1)));
        let q = h_divides(&HElement::from_poly(&p(&[0, 1])), &h(&s_minus(1))).unwrap();
        assert_eq!(q, h_normalize(&s_minus(1), &p(&[0, 1])).unwrap());
        let e = h_divides(&h(&s_minus(1)), &HElement::from_poly(&p(&[0, 1]))).unwrap_err();
        assert!(matches!(e, Error::NotDivisible { step: DivideStep::SigmaDivision, .. }));
        let e = h_divides(&HElement::from_poly(&p(&[0, 1])), &h(&s_minus(2))).unwrap_err();
        assert!(matches!(e, Error::NotDivisible { step: DivideStep::Entirety, .. }));
    }

    #[test]
    fn zero_divisor_examples() {
        assert_eq!(algebraic_zero_divisor(&h(&s_minus(1))).factors, vec![(PolyC::z(), 1)]);
        let zs = h(&s_minus(1).mul_poly(&p(&[0, 1])));
        assert_eq!(algebraic_zero_divisor(&zs).factors, vec![(PolyC::z(), 2)]);
        assert!(algebraic_zero_divisor(&h(&s_minus(2))).is_empty());
        let c = h(&s_minus(2).mul_poly(&p(&[-1, 0, 1])));
        assert_eq!(algebraic_zero_divisor(&c).factors, vec![(p(&[-1, 0, 1]), 1)]);
    }

    #[test]
    fn gcd_examples() {
        let z = HElement::from_poly(&p(&[0, 1]));
        assert_eq!(h_gcd(&h(&s_minus(1)), &z).unwrap(), z);
        assert!(h_gcd(&h(&s_minus(1)), &h(&s_minus(-1))).unwrap().is_unit());
        let a = h(&s_minus(1).mul_poly(&p(&[0, 1])));
        let b = h(&(&ExpPoly::sigma().pow(2) - &ExpPoly::one()));
        assert_eq!(h_gcd(&a, &b).unwrap(), h(&s_minus(1)));
    }

    #[test]
    fn gcd_with_denominators() {
        let a = h_normalize(&s_minus(1), &p(&[0, 1])).unwrap();
        assert_eq!(h_gcd(&a, &a).unwrap(), a);
        let z = HElement::from_poly(&p(&[0, 1]));
        assert!(h_gcd(&a, &z).unwrap().is_unit());
    }
}
