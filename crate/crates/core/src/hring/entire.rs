//! Exact entirety decision for `num*/den` and vanishing orders at algebraic
//! points.
//!
//! For an algebraic `α ≠ 0` the numbers `e^{jα}` are linearly independent over
//! the algebraic numbers, so `Σ_j c_j(α) e^{jα} = 0` with algebraic `c_j(α)`
//! forces every `c_j(α) = 0`. Applied to the derivative ladder
//! `c_{k+1,j} = c_{k,j}' + j·c_{k,j}` this turns "`num*` vanishes to order `m`
//! at every root of `ψ`" into "`ψ` divides every `c_{k,j}`, `k < m`". The point
//! `0` is excluded from that argument and handled by exact Taylor expansion.

use std::fmt;

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::poly::PolyC;

/// Exact evidence that `num*/den` extends to an entire function.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EntiretyCertificate {
    /// Multiplicity of `z` in `den` and the vanishing order of `num*` at 0.
    pub zero: Option<ZeroFact>,
    /// Squarefree, pairwise coprime factors of `den / z^e` with multiplicities.
    pub factors: Vec<FactorFact>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroFact {
    pub multiplicity: u32,
    pub vanishing_order: u32,
}

/// `psi | c_{k,j}` for all `k < multiplicity` and every σ-exponent `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorFact {
    pub psi: PolyC,
    pub multiplicity: u32,
}

/// Why `num*/den` has a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotEntireWitness {
    /// `z^required | den` but `num*` vanishes only to order `actual` at 0.
    AtZero { required: u32, actual: u32 },
    /// `psi^required | den` and `psi` does not divide the coefficient of `σ^j`
    /// in the `k`-th derivative of `num`.
    AtFactor { psi: PolyC, required: u32, k: u32, j: i64, coefficient: PolyC },
}

impl fmt::Display for NotEntireWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotEntireWitness::AtZero { required, actual } => write!(
                f,
                "factor z: required vanishing order {required}, actual {actual}"
            ),
            NotEntireWitness::AtFactor { psi, required, k, j, coefficient } => write!(
                f,
                "factor {psi} (multiplicity {required}): coefficient {coefficient} of s^{j} in derivative {k} is not divisible"
            ),
        }
    }
}

impl EntiretyCertificate {
    /// Re-checks every recorded fact against `(num, den)`.
    pub fn replay(&self, num: &ExpPoly, den: &PolyC) -> bool {
        let mut prod = PolyC::one();
        if let Some(zf) = &self.zero {
            prod = &prod * &PolyC::z().pow(zf.multiplicity);
            if !num.is_zero() && num.order_at_zero() != zf.vanishing_order {
                return false;
            }
            if !num.is_zero() && zf.vanishing_order < zf.multiplicity {
                return false;
            }
        }
        for ff in &self.factors {
            prod = &prod * &ff.psi.pow(ff.multiplicity);
            if ff.psi.coeff(0).is_zero() {
                return false;
            }
            let mut d = num.clone();
            for _ in 0..ff.multiplicity {
                if d.terms().any(|(_, c)| !ff.psi.divides(c)) {
                    return false;
                }
                d = d.derivative();
            }
        }
        prod == den.monic()
    }
}

/// Decides whether `num*/den` is entire, returning a certificate or a witness.
pub fn is_entire(num: &ExpPoly, den: &PolyC) -> Result<EntiretyCertificate> {
    check_entire(num, den)?.map_err(Error::NotEntire)
}

/// Like [`is_entire`] but keeps the refusal as a value.
pub fn check_entire(
    num: &ExpPoly,
    den: &PolyC,
) -> Result<std::result::Result<EntiretyCertificate, NotEntireWitness>> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let mut cert = EntiretyCertificate::default();
    let (e, rest) = den.split_z_power();
    if e > 0 {
        let actual = if num.is_zero() { e } else { num.order_at_zero() };
        if actual < e {
            return Ok(Err(NotEntireWitness::AtZero { required: e, actual }));
        }
        cert.zero = Some(ZeroFact { multiplicity: e, vanishing_order: actual });
    }
    for (psi, m) in rest.squarefree_decomposition() {
        let mut d = num.clone();
        for k in 0..m {
            for (j, c) in d.terms().rev() {
                if !psi.divides(c) {
                    // narrow the witness to the part of psi where the failure happens
                    let bad = psi.exact_div(&psi.gcd(c)).unwrap().monic();
                    return Ok(Err(NotEntireWitness::AtFactor {
                        psi: bad,
                        required: m,
                        k,
                        j,
                        coefficient: c.clone(),
                    }));
                }
            }
            d = d.derivative();
        }
        cert.factors.push(FactorFact { psi, multiplicity: m });
    }
    Ok(Ok(cert))
}

/// Splits the squarefree `psi` (coprime to `z`) into pieces on whose roots the
/// vanishing order of `f*` is constant. Returns `(piece, order)`.
pub fn orders_on(f: &ExpPoly, psi: &PolyC) -> Vec<(PolyC, u32)> {
    assert!(!f.is_zero(), "vanishing order of zero");
    let mut out = Vec::new();
    let mut pending = psi.monic();
    let mut d = f.clone();
    let mut k = 0u32;
    while !pending.is_constant() {
        let g = pending.gcd(&d.content());
        let done = pending.exact_div(&g).unwrap();
        if !done.is_constant() {
            out.push((done.monic(), k));
        }
        pending = g;
        d = d.derivative();
        k += 1;
        assert!(
            (k as usize) <= f.order_bound() + 1,
            "vanishing order exceeds bound"
        );
    }
    out
}

/// Refines `base` so that, on each piece, the order of every function in `fs`
/// is constant. Returns `(piece, orders)` with `orders[i]` for `fs[i]`.
pub fn refine_orders(base: &[PolyC], fs: &[&ExpPoly]) -> Vec<(PolyC, Vec<u32>)> {
    let mut pieces: Vec<(PolyC, Vec<u32>)> = base
        .iter()
        .filter(|p| !p.is_constant())
        .map(|p| (p.clone(), Vec::new()))
        .collect();
    for f in fs {
        let mut next = Vec::new();
        for (psi, ords) in pieces {
            for (piece, o) in orders_on(f, &psi) {
                let mut v = ords.clone();
                v.push(o);
                next.push((piece, v));
            }
        }
        pieces = next;
    }
    pieces
}

/// Squarefree part of `p` with the factor `z` removed.
pub fn nonzero_roots_part(p: &PolyC) -> PolyC {
    if p.is_zero() {
        return PolyC::one();
    }
    let (_, rest) = p.split_z_power();
    rest.squarefree_part()
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

    #[test]
    fn removable_singularity_at_zero() {
        let cert = is_entire(&s_minus(1), &p(&[0, 1])).unwrap();
        assert!(cert.replay(&s_minus(1), &p(&[0, 1])));
    }

    #[test]
    fn pole_at_zero_is_refused() {
        match is_entire(&s_minus(1), &p(&[0, 0, 1])) {
            Err(Error::NotEntire(NotEntireWitness::AtZero { required: 2, actual: 1 })) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn second_order_cancellation() {
        let num = &s_minus(1) - &ExpPoly::z();
        assert!(is_entire(&num, &p(&[0, 0, 1])).is_ok());
    }

    #[test]
    fn algebraic_nonzero_root_refused() {
        // z(σ−1)/(z−1): the σ¹ coefficient z does not vanish at 1
        let num = s_minus(1).mul_poly(&p(&[0, 1]));
        match is_entire(&num, &p(&[-1, 1])) {
            Err(Error::NotEntire(NotEntireWitness::AtFactor { psi, k: 0, j: 1, .. })) => {
                assert_eq!(psi, p(&[-1, 1]))
            }
            other => panic!("unexpected {other:?}"),
        }
        // numeric check of the same fact: 1·(e − 1) ≠ 0
        assert!((std::f64::consts::E - 1.0).abs() > 0.5);
    }

    #[test]
    fn algebraic_root_accepted_with_ladder() {
        // (z−1)²·(σ+z) over (z−1)²
        let f = p(&[-1, 1]).pow(2);
        let num = (&ExpPoly::sigma() + &ExpPoly::z()).mul_poly(&f);
        let cert = is_entire(&num, &f).unwrap();
        assert_eq!(cert.factors, vec![FactorFact { psi: p(&[-1, 1]), multiplicity: 2 }]);
        assert!(cert.replay(&num, &f));
    }

    #[test]
    fn zero_denominator() {
        assert!(matches!(is_entire(&s_minus(1), &PolyC::zero()), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn orders_split_roots() {
        // f = (z−1)²(z+1)·σ + (z−1)(z+1)²  vanishes to order 1 at ±1
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        let f = &ExpPoly::monomial(&a.pow(2) * &b, 1) + &ExpPoly::from_poly(&a * &b.pow(2));
        let pieces = orders_on(&f, &(&a * &b));
        assert_eq!(pieces, vec![(&a * &b, 1)]);
        // g = (z−1)²σ + (z−1)²: order 2 at 1, order 0 at −1
        let g = ExpPoly::monomial(a.pow(2), 1).mul_poly(&PolyC::one());
        let g = &g + &ExpPoly::from_poly(a.pow(2));
        let mut pieces = orders_on(&g, &(&a * &b));
        pieces.sort_by_key(|x| x.1);
        assert_eq!(pieces, vec![(b.clone(), 0), (a.clone(), 2)]);
    }
}
