//! Bezout identities `u·a + v·b = gcd(a, b)` in `H`.
//!
//! Extended Euclid in `Q(i)(z)[σ^±]` gives `u₀, v₀` with common denominator
//! `D`. When `u₀, v₀` are already entire they are the answer. Otherwise every
//! solution has the form `u₀ + tB, v₀ − tA`, and `t = T/D` is chosen so that
//! the poles at the roots of `D` cancel. Near a root `α`, with `E = e^α`
//! treated as an independent transcendental, the required jet of `T*` is a
//! power series whose coefficients are Laurent polynomials in `E`; matching
//! powers of `E` fixes the jets of each coefficient polynomial `T_j`, and
//! those are glued by Hermite lifting and the Chinese remainder theorem.

use super::{h_divides, h_gcd, HElement};
use crate::error::{Error, Result};
use crate::exppoly::{sigma_ext_gcd, ExpPoly, RatExpPoly};
use crate::poly::{PolyC, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BezoutTier {
    /// Euclidean cofactors were already in `H`.
    Euclid,
    /// Cofactors corrected by a jet-matching multiple of `(B, −A)`.
    JetCorrection,
}

#[derive(Clone, Debug)]
pub struct BezoutTriple {
    pub g: HElement,
    pub u: HElement,
    pub v: HElement,
    pub tier: BezoutTier,
}

impl BezoutTriple {
    /// Re-checks `u·a + v·b = g` exactly.
    pub fn verify(&self, a: &HElement, b: &HElement) -> bool {
        &(&self.u * a) + &(&self.v * b) == self.g
    }
}

/// Computes `g = h_gcd(a, b)` and `u, v` with `u·a + v·b = g`.
pub fn h_bezout(a: &HElement, b: &HElement) -> Result<BezoutTriple> {
    let g = h_gcd(a, b)?;
    if a.is_zero() || b.is_zero() {
        let (u, v) = if a.is_zero() {
            (HElement::zero(), unit_cofactor(&g, b)?)
        } else {
            (unit_cofactor(&g, a)?, HElement::zero())
        };
        return finish(a, b, g, u, v, BezoutTier::Euclid);
    }
    let ca = h_divides(&g, a)?;
    let cb = h_divides(&g, b)?;
    let ar = ca.as_rat();
    let br = cb.as_rat();
    let (one, s, t) = sigma_ext_gcd(&ar, &br);
    let u0 = s.shift(-ar.valuation().unwrap());
    let v0 = t.shift(-br.valuation().unwrap());
    if !(&(&u0 * &ar) + &(&v0 * &br) == RatExpPoly::from(&ExpPoly::one())) || one.max_exp() != Some(0) {
        return Err(Error::Internal("cofactors of the gcd are not coprime".into()));
    }
    if let (Ok(u), Ok(v)) = (HElement::from_rat(&u0), HElement::from_rat(&v0)) {
        return finish(a, b, g, u, v, BezoutTier::Euclid);
    }
    let (u, v) = jet_correct(&ca, &cb, &u0, &v0)?;
    finish(a, b, g, u, v, BezoutTier::JetCorrection)
}

fn unit_cofactor(g: &HElement, x: &HElement) -> Result<HElement> {
    h_divides(g, x)?
        .unit_inverse()
        .ok_or_else(|| Error::Internal("gcd with zero is not associate".into()))
}

fn finish(
    a: &HElement,
    b: &HElement,
    g: HElement,
    u: HElement,
    v: HElement,
    tier: BezoutTier,
) -> Result<BezoutTriple> {
    let out = BezoutTriple { g, u, v, tier };
    if !out.verify(a, b) {
        return Err(Error::Internal("Bezout identity failed verification".into()));
    }
    Ok(out)
}

#[cfg(not(feature = "jet-bezout"))]
fn jet_correct(
    _a: &HElement,
    _b: &HElement,
    _u0: &RatExpPoly,
    _v0: &RatExpPoly,
) -> Result<(HElement, HElement)> {
    Err(Error::NoRationalBezout("Euclidean cofactors have poles and jet correction is disabled".into()))
}

#[cfg(feature = "jet-bezout")]
fn jet_correct(
    a: &HElement,
    b: &HElement,
    u0: &RatExpPoly,
    v0: &RatExpPoly,
) -> Result<(HElement, HElement)> {
    let d = {
        let l = u0.common_denominator();
        let m = v0.common_denominator();
        (&l * &m).exact_div(&l.gcd(&m)).unwrap().monic()
    };
    let dr = RatFunc::from_poly(d.clone());
    let (un, _) = u0.scale(&dr).clear_denominators();
    let (vn, _) = v0.scale(&dr).clear_denominators();
    let (na, da) = a.fraction();
    let (nb, db) = b.fraction();
    // u = (U + T·B)/D is entire at α where B*(α) ≠ 0 iff T ≡ −U·db/nb to order m;
    // otherwise use v = (V − T·A)/D and T ≡ V·da/na.
    let side_b = (&-&un.mul_poly(&db), &nb);
    let side_a = (&vn.mul_poly(&da), &na);

    let (e0, rest) = d.split_z_power();
    let mut residues: Vec<(PolyC, std::collections::BTreeMap<i64, PolyC>)> = Vec::new();
    if e0 > 0 {
        let m = e0 as usize;
        let bz = series_at_zero(&nb, &db, m);
        let (x, y) = if !bz[0].is_zero() {
            (series_at_zero(&-&un, &PolyC::one(), m), bz)
        } else {
            (series_at_zero(&vn, &PolyC::one(), m), series_at_zero(&na, &da, m))
        };
        let h = series_div(&x, &y, m);
        let mut r = std::collections::BTreeMap::new();
        r.insert(0, PolyC::new(h));
        residues.push((PolyC::z().pow(e0), r));
    }
    for (psi0, m) in rest.squarefree_decomposition() {
        let mut stack = vec![psi0];
        while let Some(psi) = stack.pop() {
            match jets::solve_piece(&psi, m as usize, side_b, side_a) {
                Ok(r) => residues.push((psi.pow(m), r)),
                Err(jets::Fail::Split(g)) => {
                    let other = psi.exact_div(&g).unwrap().monic();
                    stack.push(g.monic());
                    stack.push(other);
                }
                Err(jets::Fail::NoRational(msg)) => return Err(Error::NoRationalBezout(msg)),
            }
        }
    }
    let t = crt_assemble(&residues);
    let tr = RatExpPoly::from(&t).scale(&RatFunc::new(PolyC::one(), d));
    let u = u0 + &(&tr * &b.as_rat());
    let v = v0 - &(&tr * &a.as_rat());
    let u = HElement::from_rat(&u).map_err(|e| Error::Internal(format!("jet correction left a pole in u: {e}")))?;
    let v = HElement::from_rat(&v).map_err(|e| Error::Internal(format!("jet correction left a pole in v: {e}")))?;
    Ok((u, v))
}

/// First `m` Taylor coefficients at 0 of `num*/den`, `den = z^e` (entire quotient).
#[cfg(feature = "jet-bezout")]
fn series_at_zero(num: &ExpPoly, den: &PolyC, m: usize) -> Vec<crate::scalar::GaussianRational> {
    let (e, rest) = den.split_z_power();
    assert!(rest.is_constant(), "normalized denominators are powers of z");
    let c = rest.coeff(0).inv();
    let s = num.taylor_at_zero(m + e as usize);
    s[e as usize..].iter().map(|x| x * &c).collect()
}

#[cfg(feature = "jet-bezout")]
fn series_div(
    x: &[crate::scalar::GaussianRational],
    y: &[crate::scalar::GaussianRational],
    m: usize,
) -> Vec<crate::scalar::GaussianRational> {
    let inv = y[0].inv();
    let mut h: Vec<crate::scalar::GaussianRational> = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = x[k].clone();
        for i in 0..k {
            acc -= &(&h[i] * &y[k - i]);
        }
        h.push(&acc * &inv);
    }
    h
}

/// Solves `T_j ≡ r_j (mod M)` for every modulus and assembles `Σ T_j σ^j`.
#[cfg(feature = "jet-bezout")]
fn crt_assemble(residues: &[(PolyC, std::collections::BTreeMap<i64, PolyC>)]) -> ExpPoly {
    let js: std::collections::BTreeSet<i64> =
        residues.iter().flat_map(|(_, r)| r.keys().copied()).collect();
    let mut terms = Vec::new();
    for j in js {
        let mut acc = PolyC::zero();
        let mut modulus = PolyC::one();
        for (mo, r) in residues {
            let rj = r.get(&j).cloned().unwrap_or_else(PolyC::zero);
            // acc + modulus·k ≡ rj (mod mo)
            let inv = modulus.inv_mod(mo).expect("coprime moduli");
            let k = (&(&rj - &acc) * &inv).rem(mo);
            acc = &acc + &(&modulus * &k);
            modulus = &modulus * mo;
        }
        terms.push((j, acc.rem(&modulus)));
    }
    ExpPoly::from_terms(terms)
}

#[cfg(feature = "jet-bezout")]
mod jets {
    //! Arithmetic in `L = Q(i)[z]/ψ` for squarefree `ψ`, where zero divisors
    //! are reported as a splitting of `ψ`.

    use std::collections::BTreeMap;

    use crate::exppoly::ExpPoly;
    use crate::poly::PolyC;
    use crate::scalar::GaussianRational as Q;

    pub enum Fail {
        Split(PolyC),
        NoRational(String),
    }

    /// Laurent polynomial in `E` over `L`.
    type LE = BTreeMap<i64, PolyC>;

    struct Ring<'a> {
        psi: &'a PolyC,
    }

    impl Ring<'_> {
        fn red(&self, p: &PolyC) -> PolyC {
            p.rem(self.psi)
        }

        fn mul(&self, a: &PolyC, b: &PolyC) -> PolyC {
            (a * b).rem(self.psi)
        }

        /// Inverse of a nonzero element.
        fn inv(&self, a: &PolyC) -> Result<PolyC, Fail> {
            a.inv_mod(self.psi).map_err(Fail::Split)
        }

        /// `Ok(true)` for zero, `Ok(false)` for a unit.
        fn is_zero(&self, a: &PolyC) -> Result<bool, Fail> {
            if a.is_zero() {
                return Ok(true);
            }
            let g = self.psi.gcd(a);
            if g.is_one() {
                Ok(false)
            } else {
                Err(Fail::Split(g))
            }
        }

        fn le_trim(&self, a: LE) -> LE {
            a.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        }

        fn le_mul(&self, a: &LE, b: &LE) -> LE {
            let mut out: LE = BTreeMap::new();
            for (i, x) in a {
                for (j, y) in b {
                    let e = out.entry(i + j).or_insert_with(PolyC::zero);
                    *e = self.red(&(&*e + &(x * y)));
                }
            }
            self.le_trim(out)
        }

        fn le_sub(&self, a: &LE, b: &LE) -> LE {
            let mut out = a.clone();
            for (j, y) in b {
                let e = out.entry(*j).or_insert_with(PolyC::zero);
                *e = &*e - y;
            }
            self.le_trim(out)
        }

        /// Exact quotient `n / b` in `L[E^±]`.
        fn le_div(&self, n: &LE, b: &LE) -> Result<LE, Fail> {
            if n.is_empty() {
                return Ok(LE::new());
            }
            let (&vb, lo) = b.iter().next().expect("nonzero divisor");
            let (&tb, hi) = b.iter().next_back().unwrap();
            if self.is_zero(lo)? || self.is_zero(hi)? {
                unreachable!("trimmed coefficients are nonzero");
            }
            let inv = self.inv(hi)?;
            let mut r = n.clone();
            let mut q = LE::new();
            let vn = *n.keys().next().unwrap();
            // polynomial division of n·E^{-vn} by b·E^{-vb}
            while let Some((&t, c)) = r.iter().next_back() {
                if t - tb < vn - vb {
                    return Err(Fail::NoRational(
                        "jet coefficient is not a Laurent polynomial in e^α".into(),
                    ));
                }
                let c = self.mul(c, &inv);
                let mono: LE = [(t - tb, c.clone())].into_iter().collect();
                r = self.le_sub(&r, &self.le_mul(&mono, b));
                q.insert(t - tb, c);
            }
            Ok(q)
        }
    }

    /// Taylor coefficients `P^{(i)}(α)/i!` for `i < m`, as elements of `L`.
    fn taylor(ring: &Ring, p: &PolyC, m: usize) -> Vec<PolyC> {
        let mut out = Vec::with_capacity(m);
        let mut d = p.clone();
        let mut fact = Q::one();
        for i in 0..m {
            if i > 0 {
                fact = &fact * &Q::from_int(i as i64);
            }
            out.push(ring.red(&d.scale(&fact.inv())));
            d = d.derivative();
        }
        out
    }

    /// Jet of `f*` at `α`: coefficient `k` is `Σ_j E^j Σ_i taylor_i(f_j) j^{k−i}/(k−i)!`.
    fn jet(ring: &Ring, f: &ExpPoly, m: usize) -> Vec<LE> {
        let mut out = vec![LE::new(); m];
        for (j, pj) in f.terms() {
            let tj = taylor(ring, pj, m);
            let jq = Q::from_int(j);
            for (k, slot) in out.iter_mut().enumerate() {
                let mut acc = PolyC::zero();
                let mut w = Q::one();
                // i = k, k-1, ..., 0 with weight j^{k-i}/(k-i)!
                for l in 0..=k {
                    acc = &acc + &tj[k - l].scale(&w);
                    w = &(&w * &jq) * &Q::from_int(l as i64 + 1).inv();
                }
                let e = slot.entry(j).or_insert_with(PolyC::zero);
                *e = ring.red(&(&*e + &acc));
            }
        }
        out.into_iter().map(|s| ring.le_trim(s)).collect()
    }

    /// Residues `T_j mod ψ^m` making the correction vanish to order `m` on
    /// the roots of `ψ`.
    pub fn solve_piece(
        psi: &PolyC,
        m: usize,
        side_b: (&ExpPoly, &ExpPoly),
        side_a: (&ExpPoly, &ExpPoly),
    ) -> Result<BTreeMap<i64, PolyC>, Fail> {
        let ring = Ring { psi };
        let yb = jet(&ring, side_b.1, m);
        // B*(α) vanishes iff every E-coefficient of the constant jet term does
        let g = yb[0].values().fold(psi.clone(), |acc, c| acc.gcd(c));
        let (x, y) = if g.is_one() {
            (jet(&ring, side_b.0, m), yb)
        } else if g == psi.monic() {
            (jet(&ring, side_a.0, m), jet(&ring, side_a.1, m))
        } else {
            return Err(Fail::Split(g));
        };
        // h = x / y as power series in w over L[E^±]
        let mut h: Vec<LE> = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = x[k].clone();
            for i in 0..k {
                acc = ring.le_sub(&acc, &ring.le_mul(&h[i], &y[k - i]));
            }
            h.push(ring.le_div(&acc, &y[0])?);
        }
        // s_j(w) = e^{-jw} H_j(w), then Hermite-lift to T_j mod ψ^m
        let js: std::collections::BTreeSet<i64> = h.iter().flat_map(|l| l.keys().copied()).collect();
        let dpsi = psi.derivative();
        let dinv = ring.inv(&dpsi)?;
        let mut out = BTreeMap::new();
        for j in js {
            let hj: Vec<PolyC> = h.iter().map(|l| l.get(&j).cloned().unwrap_or_else(PolyC::zero)).collect();
            let mut s = vec![PolyC::zero(); m];
            for k in 0..m {
                let mut w = Q::one();
                let mj = Q::from_int(-j);
                for l in 0..=k {
                    s[k] = &s[k] + &hj[k - l].scale(&w);
                    w = &(&w * &mj) * &Q::from_int(l as i64 + 1).inv();
                }
                s[k] = ring.red(&s[k]);
            }
            let mut t = s[0].clone();
            let mut psik = PolyC::one();
            let mut dinvk = PolyC::one();
            for k in 1..m {
                psik = &psik * psi;
                dinvk = ring.mul(&dinvk, &dinv);
                let cur = taylor(&ring, &t, k + 1)[k].clone();
                let delta = ring.red(&(&s[k] - &cur));
                if !delta.is_zero() {
                    let c = ring.mul(&delta, &dinvk);
                    t = &t + &(&psik * &c);
                }
            }
            out.insert(j, t);
        }
        Ok(out)
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
    fn bezout_examples() {
        let t = h_bezout(&h(&s_minus(1)), &h(&s_minus(-1))).unwrap();
        assert!(t.g.is_one());
        assert_eq!(t.u, HElement::constant(Q::from_frac(-1, 2)));
        assert_eq!(t.v, HElement::constant(Q::from_frac(1, 2)));
        let z = HElement::from_poly(&p(&[0, 1]));
        let t = h_bezout(&h(&s_minus(1)), &z).unwrap();
        assert_eq!(t.g, z);
        assert!(t.verify(&h(&s_minus(1)), &z));
        let t = h_bezout(&z, &h(&s_minus(1))).unwrap();
        assert!(t.verify(&z, &h(&s_minus(1))));
    }

    #[test]
    fn bezout_with_zero() {
        let a = h(&s_minus(1).scale(&Q::from_int(3)));
        let t = h_bezout(&HElement::zero(), &a).unwrap();
        assert!(t.u.is_zero());
        assert_eq!(t.v, HElement::constant(Q::from_frac(1, 3)));
    }

    #[cfg(feature = "jet-bezout")]
    #[test]
    fn jet_correction_needed() {
        // (σ−1 + z, z−1): Euclid gives cofactors with a pole at z = 1
        let a = h(&(&s_minus(1) + &ExpPoly::z()));
        let b = HElement::from_poly(&p(&[-1, 1]));
        let e = h_bezout(&a, &b);
        match e {
            Ok(t) => assert!(t.verify(&a, &b)),
            Err(Error::NoRationalBezout(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[cfg(feature = "jet-bezout")]
    #[test]
    fn unimodular_row_solved() {
        // A = σ(z−1) + 1, B = z − 1 has (1)·A − σ·B = 1
        let a = h(&(&ExpPoly::monomial(p(&[-1, 1]), 1) + &ExpPoly::one()));
        let b = HElement::from_poly(&p(&[-1, 1]));
        let t = h_bezout(&a, &b).unwrap();
        assert!(t.g.is_one());
        assert!(t.verify(&a, &b));
    }

    #[test]
    fn refuses_without_rational_identity() {
        let a = h(&s_minus(2));
        let b = HElement::from_poly(&p(&[-1, 1]));
        assert!(matches!(h_bezout(&a, &b), Err(Error::NoRationalBezout(_))));
    }
}
