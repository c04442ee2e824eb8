//! Ideal membership and division in `H` with growth certificates, and the
//! Hermite interpolation used to glue local division data.

use num_complex::Complex64;

use crate::currents::GrowthCert;
use crate::error::{Error, Result};
use crate::hefer::growth_certificate;
use crate::hring::{h_bezout, h_divides, h_gcd, taylor_coefficients, HElement};
use crate::poly::PolyC;
use crate::scalar::GaussianRational as Q;

/// The arithmetic Hermite interpolation needs.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn from_u64(n: u64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Field for Q {
    fn zero() -> Self {
        Q::zero()
    }
    fn one() -> Self {
        Q::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_u64(n: u64) -> Self {
        Q::from_int(n as i64)
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_u64(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
}

/// Nodes with prescribed derivative values `f(α), f′(α), …, f^{(m−1)}(α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpec<F> {
    pub nodes: Vec<(F, Vec<F>)>,
}

/// The unique polynomial of degree `< Σ m_i` matching every jet, as
/// ascending coefficients. Uses divided differences with repeated nodes.
pub fn hermite_interpolate<F: Field>(spec: &JetSpec<F>) -> Result<Vec<F>> {
    for i in 0..spec.nodes.len() {
        for j in 0..i {
            if spec.nodes[i].0 == spec.nodes[j].0 {
                return Err(Error::DuplicateNode(i));
            }
        }
    }
    // z_k with node index, each node repeated m times
    let mut zs: Vec<(F, usize)> = Vec::new();
    for (i, (a, jet)) in spec.nodes.iter().enumerate() {
        for _ in 0..jet.len() {
            zs.push((a.clone(), i));
        }
    }
    let n = zs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // table[k] holds f[z_i, …, z_{i+k}] for i = 0..n−k
    let mut col: Vec<F> = zs.iter().map(|(_, i)| spec.nodes[*i].1[0].clone()).collect();
    let mut newton = vec![col[0].clone()];
    let mut fact = F::one();
    for k in 1..n {
        fact = fact.mul(&F::from_u64(k as u64));
        let mut next = Vec::with_capacity(n - k);
        for i in 0..n - k {
            let (a, ia) = &zs[i];
            let (b, ib) = &zs[i + k];
            let v = if ia == ib {
                spec.nodes[*ia].1[k].div(&fact)
            } else {
                col[i + 1].sub(&col[i]).div(&b.sub(a))
            };
            next.push(v);
        }
        newton.push(next[0].clone());
        col = next;
    }
    // expand Σ c_k Π_{j<k}(z − z_j) by Horner from the top
    let mut poly = vec![newton[n - 1].clone()];
    for k in (0..n - 1).rev() {
        let zk = &zs[k].0;
        let mut out = vec![F::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            out[i + 1] = out[i + 1].add(c);
            out[i] = out[i].sub(&c.mul(zk));
        }
        out[0] = out[0].add(&newton[k]);
        poly = out;
    }
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    Ok(poly)
}

/// Derivatives `p^{(k)}(α)`, `k < m`, of an ascending coefficient list.
pub fn jet_of<F: Field>(poly: &[F], alpha: &F, m: usize) -> Vec<F> {
    let mut p = poly.to_vec();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(p.iter().rev().fold(F::zero(), |acc, c| acc.mul(alpha).add(c)));
        p = p.iter().enumerate().skip(1).map(|(i, c)| c.mul(&F::from_u64(i as u64))).collect();
    }
    out
}

pub fn hermite_interpolate_exact(spec: &JetSpec<Q>) -> Result<PolyC> {
    Ok(PolyC::new(hermite_interpolate(spec)?))
}

#[derive(Clone, Debug)]
pub struct MembershipResult {
    pub member: bool,
    /// `gcd` of the generators.
    pub gcd: HElement,
    /// `Σ cofactors_j · gens_j = h` when `member`.
    pub cofactors: Vec<HElement>,
    pub growth: Vec<GrowthCert>,
}

impl MembershipResult {
    /// Replays `Σ cofactors_j·gens_j == h` in exact arithmetic.
    pub fn verify(&self, h: &HElement, gens: &[HElement]) -> bool {
        if !self.member || self.cofactors.len() != gens.len() {
            return !self.member;
        }
        let sum = self.cofactors.iter().zip(gens).fold(HElement::zero(), |acc, (c, g)| &acc + &(c * g));
        &sum == h
    }
}

/// Decides `h ∈ (gens)`. A single generator dividing `h` gives the cofactor
/// directly; otherwise the Bézout expansions of the running gcd are chained
/// through the generator list and scaled by `h/g`.
pub fn ideal_member(h: &HElement, gens: &[HElement]) -> Result<MembershipResult> {
    if gens.iter().all(HElement::is_zero) {
        return Err(Error::BothZero);
    }
    let mut g = HElement::zero();
    for x in gens.iter().filter(|x| !x.is_zero()) {
        g = h_gcd(&g, x)?;
    }
    let quotient = match h_divides(&g, h) {
        Ok(q) => q,
        Err(Error::NotDivisible { .. }) => {
            return Ok(MembershipResult { member: false, gcd: g, cofactors: Vec::new(), growth: Vec::new() })
        }
        Err(e) => return Err(e),
    };
    let mut cofactors = vec![HElement::zero(); gens.len()];
    let single = gens.iter().enumerate().find_map(|(j, x)| match x.is_zero() {
        true => None,
        false => h_divides(x, h).ok().map(|q| (j, q)),
    });
    if let Some((j, q)) = single {
        cofactors[j] = q;
    } else {
        // running = Σ coef_j gens_j
        let mut running = HElement::zero();
        for (j, x) in gens.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let t = h_bezout(&running, x)?;
            for c in cofactors.iter_mut().take(j) {
                *c = &*c * &t.u;
            }
            cofactors[j] = t.v.clone();
            running = t.g;
        }
        // running and g agree up to a unit
        let scale = h_divides(&running, &g)?;
        let factor = &scale * &quotient;
        for c in cofactors.iter_mut() {
            *c = &*c * &factor;
        }
    }
    let growth = cofactors
        .iter()
        .map(|c| if c.is_zero() { Ok(zero_cert()) } else { growth_certificate(c) })
        .collect::<Result<_>>()?;
    let out = MembershipResult { member: true, gcd: g, cofactors, growth };
    if !out.verify(h, gens) {
        return Err(Error::Internal("membership cofactors fail the identity".into()));
    }
    Ok(out)
}

fn zero_cert() -> GrowthCert {
    GrowthCert { c: 0.0, m: 0, n: 0, denom_witness: PolyC::one(), samples: 0, worst_ray: 0.0 }
}

/// A node that is either exact or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Exact(Q),
    Float(Complex64),
}

impl Node {
    fn to_complex(&self) -> Complex64 {
        match self {
            Node::Exact(q) => q.to_complex(),
            Node::Float(c) => *c,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationSplit {
    /// Coefficients of `(z − α)^k`, `k < μ`.
    pub coeffs: Vec<Complex64>,
    /// The same polynomial in `z − α` exactly, when `α = 0`.
    pub exact: Option<PolyC>,
    /// Vanishing order of `P* − P_trunc` at `α`; `None` when the difference
    /// is identically zero.
    pub tail_order: Option<u32>,
}

const TAIL_LOOKAHEAD: usize = 16;

/// The degree-`< μ` Taylor polynomial of `P*` at `α` and the order of the tail.
pub fn truncation_split(p: &HElement, alpha: &Node, mu: u32) -> Result<TruncationSplit> {
    if mu == 0 {
        return Err(Error::Config("truncation order must be at least 1".into()));
    }
    let mu = mu as usize;
    if let Node::Exact(a) = alpha {
        if a.is_zero() {
            let (num, den) = p.fraction();
            let (e, rest) = den.split_z_power();
            let inv = rest.coeff(0).inv();
            let series: Vec<Q> = num.taylor_at_zero(mu + e as usize)[e as usize..].iter().map(|c| c * &inv).collect();
            let trunc = PolyC::new(series);
            let tail = p - &HElement::from_poly(&trunc);
            let tail_order = (!tail.is_zero()).then(|| {
                let (n, d) = tail.fraction();
                n.order_at_zero() - d.split_z_power().0
            });
            if tail_order.is_some_and(|o| (o as usize) < mu) {
                return Err(Error::Internal("exact tail vanishes to lower order than requested".into()));
            }
            let coeffs = (0..mu).map(|k| trunc.coeff(k).to_complex()).collect();
            return Ok(TruncationSplit { coeffs, exact: Some(trunc), tail_order });
        }
    }
    let a = alpha.to_complex();
    let t = taylor_coefficients(p, a, mu + TAIL_LOOKAHEAD)?;
    let scale = t.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let tail_order = t[mu..].iter().position(|c| c.norm() > 1e-10 * scale).map(|k| (k + mu) as u32);
    Ok(TruncationSplit { coeffs: t[..mu].to_vec(), exact: None, tail_order: tail_order.or(Some((mu + TAIL_LOOKAHEAD) as u32)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }
    fn h(e: &ExpPoly) -> HElement {
        HElement::from_exppoly(e)
    }
    fn s_plus(c: i64) -> ExpPoly {
        &ExpPoly::sigma() + &ExpPoly::constant(q(c))
    }

    #[test]
    fn hermite_examples() {
        let one = |v: Vec<(i64, Vec<i64>)>| JetSpec {
            nodes: v.into_iter().map(|(a, j)| (q(a), j.into_iter().map(q).collect())).collect(),
        };
        assert_eq!(hermite_interpolate(&one(vec![(0, vec![1, 2])])).unwrap(), vec![q(1), q(2)]);
        assert_eq!(hermite_interpolate(&one(vec![(0, vec![1]), (1, vec![0])])).unwrap(), vec![q(1), q(-1)]);
        assert_eq!(hermite_interpolate(&one(vec![(0, vec![0, 0, 1])])).unwrap(), vec![q(0), q(0), Q::from_frac(1, 2)]);
        assert!(matches!(hermite_interpolate(&one(vec![(1, vec![1]), (1, vec![2])])), Err(Error::DuplicateNode(1))));
        let spec = one(vec![(0, vec![1, -1, 3]), (2, vec![5, 0]), (-1, vec![2])]);
        let p = hermite_interpolate(&spec).unwrap();
        for (a, jet) in &spec.nodes {
            assert_eq!(&jet_of(&p, a, jet.len()), jet);
        }
    }

    #[test]
    fn membership_examples() {
        let h1 = h(&(&ExpPoly::sigma().pow(2) - &ExpPoly::one()));
        let r = ideal_member(&h1, &[h(&s_plus(-1))]).unwrap();
        assert!(r.member);
        assert_eq!(r.cofactors, vec![h(&s_plus(1))]);

        let gens = [h(&s_plus(-1)), h(&s_plus(1))];
        let r = ideal_member(&HElement::one(), &gens).unwrap();
        assert!(r.member);
        assert_eq!(r.cofactors, vec![HElement::constant(Q::from_frac(-1, 2)), HElement::constant(Q::from_frac(1, 2))]);

        let r = ideal_member(&h(&ExpPoly::sigma()), &[HElement::from_poly(&PolyC::z())]).unwrap();
        assert!(!r.member);

        let target = h(&s_plus(1).mul_poly(&PolyC::z()));
        let gens = [h(&s_plus(-1)), HElement::from_poly(&PolyC::z())];
        let r = ideal_member(&target, &gens).unwrap();
        assert!(r.member && r.verify(&target, &gens));
        assert_eq!(r.cofactors, vec![HElement::zero(), h(&s_plus(1))]);
        assert!(r.gcd.eq_up_to_unit(&HElement::from_poly(&PolyC::z())));
    }

    #[test]
    fn truncation_examples() {
        let zero = Node::Exact(Q::zero());
        let t = truncation_split(&h(&ExpPoly::sigma()), &zero, 2).unwrap();
        assert_eq!(t.exact, Some(PolyC::from_ints(&[1, 1])));
        assert_eq!(t.tail_order, Some(2));
        let t = truncation_split(&h(&s_plus(-1)), &zero, 1).unwrap();
        assert_eq!(t.exact, Some(PolyC::zero()));
        let t = truncation_split(&h(&ExpPoly::monomial(PolyC::z(), 1)), &zero, 3).unwrap();
        assert_eq!(t.exact, Some(PolyC::from_ints(&[0, 1, 1])));
        assert_eq!(t.tail_order, Some(3));
        let t = truncation_split(&h(&ExpPoly::sigma()), &Node::Float(Complex64::new(0.5, 0.0)), 3).unwrap();
        let e = 0.5f64.exp();
        assert!((t.coeffs[2].re - e / 2.0).abs() < 1e-12);
        assert_eq!(t.tail_order, Some(3));
    }
}
