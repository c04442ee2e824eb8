//! Dense univariate polynomials over the Gaussian rationals, and reduced
//! rational functions built from them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::GaussianRational as Q;

/// Polynomial in `z`; `coeffs[k]` is the coefficient of `z^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PolyC {
    coeffs: Vec<Q>,
}

impl PolyC {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyC { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        PolyC::new(cs.iter().map(|&c| Q::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyC { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyC::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        PolyC::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        PolyC::monomial(Q::one(), 1)
    }

    pub fn monomial(c: Q, deg: usize) -> Self {
        let mut v = vec![Q::zero(); deg + 1];
        v[deg] = c;
        PolyC::new(v)
    }

    /// `z - c`
    pub fn linear_root(c: Q) -> Self {
        PolyC::new(vec![-c, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for nonzero constants and for zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`, for places where the zero polynomial cannot occur.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Q) -> PolyC {
        if c.is_zero() {
            return PolyC::zero();
        }
        PolyC::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift_up(&self, k: usize) -> PolyC {
        if self.is_zero() {
            return PolyC::zero();
        }
        let mut v = vec![Q::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        PolyC::new(v)
    }

    pub fn monic(&self) -> PolyC {
        if self.is_zero() {
            return PolyC::zero();
        }
        self.scale(&self.lc().inv())
    }

    pub fn derivative(&self) -> PolyC {
        PolyC::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Q::from_int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> PolyC {
        let mut acc = PolyC::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn divrem(&self, d: &PolyC) -> (PolyC, PolyC) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (PolyC::zero(), self.clone());
        }
        let inv_lc = d.lc().inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![Q::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv_lc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + i] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (PolyC::new(q), PolyC::new(r))
    }

    pub fn rem(&self, d: &PolyC) -> PolyC {
        self.divrem(d).1
    }

    /// `Some(self / d)` when the division is exact.
    pub fn exact_div(&self, d: &PolyC) -> Option<PolyC> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &PolyC) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &PolyC) -> PolyC {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic (or zero).
    pub fn ext_gcd(&self, other: &PolyC) -> (PolyC, PolyC, PolyC) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyC::one(), PolyC::zero());
        let (mut t0, mut t1) = (PolyC::zero(), PolyC::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, or the nontrivial common factor when `self`
    /// is a zero divisor there.
    pub fn inv_mod(&self, m: &PolyC) -> Result<PolyC, PolyC> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Ok(s.rem(m))
        } else {
            Err(g)
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    /// Upper bound `Σ|c_k|·r^k` for `|p(z)|` on `|z| = r`; used as a rounding scale.
    pub fn abs_bound(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.to_complex().norm();
        }
        acc
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Q::to_complex).collect()
    }

    /// `p(z + c)`.
    pub fn compose_shift(&self, c: &Q) -> PolyC {
        let mut acc = PolyC::zero();
        let lin = PolyC::new(vec![c.clone(), Q::one()]);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &PolyC::constant(a.clone());
        }
        acc
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &PolyC) -> PolyC {
        let mut acc = PolyC::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &PolyC::constant(a.clone());
        }
        acc
    }

    /// Splits off the largest power of `z`: returns `(e, p / z^e)`.
    pub fn split_z_power(&self) -> (u32, PolyC) {
        let e = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (0, PolyC::zero());
        }
        (e as u32, PolyC::new(self.coeffs[e..].to_vec()))
    }

    /// Yun's algorithm: `self = lc · Π f_m^m` with each `f_m` squarefree, monic,
    /// pairwise coprime. Returns the nonconstant `(f_m, m)`.
    pub fn squarefree_decomposition(&self) -> Vec<(PolyC, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = df.exact_div(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut m = 1;
        loop {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), m));
            }
            b = b.exact_div(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a).expect("gcd divides");
            d = &c - &b.derivative();
            m += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> PolyC {
        if self.is_constant() {
            return PolyC::one();
        }
        let f = self.monic();
        f.exact_div(&f.gcd(&f.derivative())).expect("gcd divides").monic()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> PolyC {
        PolyC::new(self.coeffs.iter().map(f).collect())
    }

    pub fn height(&self) -> u64 {
        self.coeffs.iter().map(Q::height).sum()
    }

    /// Formats using variable name `var` in the operator grammar.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if *c == Q::from_int(-1) {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for PolyC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("z"))
    }
}

impl<'a> Add<&'a PolyC> for &'a PolyC {
    type Output = PolyC;
    fn add(self, o: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyC::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a PolyC> for &'a PolyC {
    type Output = PolyC;
    fn sub(self, o: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyC::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a PolyC> for &'a PolyC {
    type Output = PolyC;
    fn mul(self, o: &PolyC) -> PolyC {
        if self.is_zero() || o.is_zero() {
            return PolyC::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = a * b;
                v[i + j] += &t;
            }
        }
        PolyC::new(v)
    }
}

impl Neg for &PolyC {
    type Output = PolyC;
    fn neg(self) -> PolyC {
        PolyC::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Reduced rational function `num/den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    pub num: PolyC,
    pub den: PolyC,
}

impl RatFunc {
    pub fn new(num: PolyC, den: PolyC) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = d.lc();
        if !l.is_one() {
            let inv = l.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: PolyC) -> Self {
        RatFunc { num: p, den: PolyC::one() }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(PolyC::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(PolyC::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = o.den.exact_div(&g).unwrap();
        let b = self.den.exact_div(&g).unwrap();
        RatFunc::new(&(&self.num * &a) + &(&o.num * &b), &self.den * &a)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RatFunc::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl RatFunc {
    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

/// Monic gcd, `gcd(0,0) = 0`.
pub fn poly_gcd(a: &PolyC, b: &PolyC) -> PolyC {
    a.gcd(b)
}
