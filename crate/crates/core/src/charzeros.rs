//! Zeros of characteristic functions by the argument principle.
//!
//! Counts come from the boundary integral of `q*'/q*`, computed by adaptive
//! Gauss–Kronrod quadrature and rounded to an integer. Multiplicities are only
//! ever read from winding numbers; Newton iteration is used to sharpen centers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::hring::HElement;

const TAU: f64 = std::f64::consts::TAU;
const BOUNDARY_FLOOR: f64 = 1e-13;
const INFLATE: f64 = 1e-6;
const MAX_DEPTH: usize = 60;
const MAX_PANELS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::Config(format!(
                "empty rectangle [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(Rect { re_min, re_max, im_min, im_max })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.re_min, self.re_max, self.im_min, self.im_max]
    }

    pub fn inflate(&self, d: f64) -> Rect {
        Rect {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// A zero (or a tight group counted together) of `q*` with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroCluster {
    pub center: Complex64,
    pub multiplicity: u32,
    /// Radius of a disk around `center` on which the winding number equals
    /// `multiplicity`.
    pub radius: f64,
}

/// Floating-point form of `c·e^{kz}·num*(z)/den(z)` for log-derivative work.
#[derive(Clone, Debug)]
pub struct CharFn {
    k: f64,
    num: ExpPoly,
    terms: Vec<(i64, Vec<Complex64>, Vec<Complex64>)>,
    den: Vec<Complex64>,
    dden: Vec<Complex64>,
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn abs_horner(c: &[Complex64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

impl CharFn {
    pub fn new(q: &HElement) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts(q.unit().k, q.num(), &q.den().to_complex_coeffs()))
    }

    fn from_parts(k: i64, num: &ExpPoly, den: &[Complex64]) -> Self {
        let dnum = num.derivative();
        let terms = num
            .terms()
            .map(|(j, p)| (j, p.to_complex_coeffs(), dnum.coeff(j).to_complex_coeffs()))
            .collect();
        let dden = den.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
        CharFn { k: k as f64, num: num.clone(), terms, den: den.to_vec(), dden }
    }

    /// The numerator part alone (no denominator, no unit).
    fn numerator_only(&self) -> CharFn {
        CharFn::from_parts(0, &self.num, &[Complex64::new(1.0, 0.0)])
    }

    /// `(N, N', scale)` for the numerator, all multiplied by a common
    /// positive factor that keeps the dominant exponential near one.
    fn num_scaled(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let jref = self
            .terms
            .iter()
            .map(|(j, _, _)| *j as f64 * z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let r = z.norm();
        let (mut f, mut df, mut sc) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
        for (j, p, dp) in &self.terms {
            let jf = *j as f64;
            let mag = (jf * z.re - jref).exp();
            let e = Complex64::from_polar(mag, jf * z.im);
            f += horner(p, z) * e;
            df += horner(dp, z) * e;
            sc += abs_horner(p, r) * mag;
        }
        (f, df, sc)
    }

    /// `q*'/q*` and a flag telling whether `|num*|` is below the boundary floor.
    pub fn log_derivative(&self, z: Complex64) -> (Complex64, bool) {
        let (f, df, sc) = self.num_scaled(z);
        let near_zero = f.norm() <= BOUNDARY_FLOOR * sc.max(f64::MIN_POSITIVE);
        let mut ld = df / f + self.k;
        if self.den.len() > 1 {
            ld -= horner(&self.dden, z) / horner(&self.den, z);
        }
        (ld, near_zero)
    }

    /// Relative size `|num*(z)| / scale`, a measure of distance to a zero.
    pub fn relative_modulus(&self, z: Complex64) -> f64 {
        let (f, _, sc) = self.num_scaled(z);
        f.norm() / sc.max(f64::MIN_POSITIVE)
    }
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

enum QuadFail {
    Boundary,
    Depth,
}

/// One G7K15 panel of `∫ f(z) dz` along the segment `a → b`.
fn gk_panel(
    f: &CharFn,
    a: Complex64,
    b: Complex64,
) -> std::result::Result<(Complex64, f64, f64), QuadFail> {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut rk = Complex64::new(0.0, 0.0);
    let mut rg = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for i in 0..8 {
        let pts: &[f64] = if i == 7 { &[0.0] } else { &[-XGK[i], XGK[i]] };
        for &x in pts {
            let (v, low) = f.log_derivative(mid + half * x);
            if low || !v.re.is_finite() || !v.im.is_finite() {
                return Err(QuadFail::Boundary);
            }
            rk += v * WGK[i];
            mag += v.norm() * WGK[i];
            if i % 2 == 1 {
                rg += v * WG[i / 2];
            }
        }
    }
    rk *= half;
    rg *= half;
    Ok((rk, (rk - rg).norm(), mag * half.norm()))
}

fn adaptive_segment(
    f: &CharFn,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> std::result::Result<Complex64, QuadFail> {
    let len = (b - a).norm();
    let mut stack = vec![(a, b)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut panels = 0;
    while let Some((x, y)) = stack.pop() {
        let (v, err, mag) = gk_panel(f, x, y)?;
        panels += 1;
        if panels > MAX_PANELS {
            return Err(QuadFail::Depth);
        }
        let h = (y - x).norm();
        if err <= (tol * h / len).max(1e-10 * mag) {
            total += v;
        } else if h < 1e-14 * len {
            return Err(QuadFail::Boundary);
        } else {
            let m = (x + y) * 0.5;
            stack.push((m, y));
            stack.push((x, m));
        }
    }
    Ok(total)
}

/// Winding number of `q*` along the boundary of `rect`.
fn winding_rect(f: &CharFn, rect: &Rect) -> std::result::Result<u32, QuadFail> {
    let c = rect.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for e in 0..4 {
        total += adaptive_segment(f, c[e], c[(e + 1) % 4], 1e-6)?;
    }
    let n = total / Complex64::new(0.0, TAU);
    let r = n.re.round();
    if (n.re - r).abs() >= 0.25 || n.im.abs() >= 0.25 || r < 0.0 {
        return Err(QuadFail::Depth);
    }
    Ok(r as u32)
}

fn count_in(f: &CharFn, rect: &Rect) -> Result<u32> {
    match winding_rect(f, rect) {
        Ok(n) => Ok(n),
        Err(QuadFail::Boundary) => Err(Error::BoundaryZero { suggested: rect.inflate(INFLATE).as_array() }),
        Err(QuadFail::Depth) => Err(Error::NonConvergence {
            rect: rect.as_array(),
            reason: "boundary integral did not converge to an integer".into(),
        }),
    }
}

/// Counts the rectangle, inflating it when a zero sits on the boundary.
/// Returns the rectangle actually used.
fn count_with_inflation(f: &CharFn, rect: &Rect) -> Result<(u32, Rect)> {
    let mut r = *rect;
    for _ in 0..4 {
        match count_in(f, &r) {
            Err(Error::BoundaryZero { .. }) => r = r.inflate(INFLATE),
            other => return other.map(|n| (n, r)),
        }
    }
    Err(Error::BoundaryZero { suggested: r.inflate(INFLATE).as_array() })
}

/// Number of zeros of `q*` in `rect`, with multiplicity.
pub fn count_zeros(q: &HElement, rect: &Rect) -> Result<u32> {
    let f = CharFn::new(q)?;
    Ok(count_with_inflation(&f, rect)?.0)
}

/// Winding number on the circle `|z − c| = r` by the trapezoid rule, or
/// `None` when `q*` is too small on the circle for the count to be trusted.
fn winding_circle(f: &CharFn, c: Complex64, r: f64) -> Option<u32> {
    let mut prev: Option<Complex64> = None;
    let mut n = 64;
    while n <= 8192 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let u = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            let z = c + u * r;
            if f.relative_modulus(z) < 1e3 * f64::EPSILON {
                return None;
            }
            let (ld, _) = f.log_derivative(z);
            acc += ld * u * r;
        }
        let w = acc / n as f64;
        if let Some(p) = prev {
            if (w - p).norm() < 1e-3 {
                let m = w.re.round();
                return ((w.re - m).abs() < 0.25 && w.im.abs() < 0.25 && m >= 0.0).then_some(m as u32);
            }
        }
        prev = Some(w);
        n *= 2;
    }
    None
}

/// Vanishing order of `q*` at `point`: the winding number on the smallest
/// circle of radius `≥ tol` on which it can be computed reliably.
pub fn vanishing_order(q: &HElement, point: Complex64, tol: f64) -> Result<u32> {
    let f = CharFn::new(q)?;
    let mut r = 0.1f64.max(tol);
    let mut last = None;
    while r >= tol {
        match winding_circle(&f, point, r) {
            Some(m) => last = Some(m),
            None => break,
        }
        if last == Some(0) {
            break;
        }
        r /= 10.0;
    }
    last.ok_or_else(|| Error::NonConvergence {
        rect: [point.re - r, point.re + r, point.im - r, point.im + r],
        reason: "winding number unreliable on every circle".into(),
    })
}

/// Locates the zeros of `q*` in `rect` as clusters whose multiplicities sum
/// to [`count_zeros`].
pub fn find_zeros(q: &HElement, rect: &Rect, tol: f64) -> Result<Vec<ZeroCluster>> {
    let f = CharFn::new(q)?;
    let (n, r) = count_with_inflation(&f, rect)?;
    let mut out = Vec::new();
    locate(&f, &r, n, tol, 0, &mut out)?;
    // order by real part (quantized so rounding noise does not decide), then imaginary part
    let q = tol.max(1e-12) * 1e3;
    out.sort_by(|a, b| {
        ((a.center.re / q).round(), a.center.im)
            .partial_cmp(&((b.center.re / q).round(), b.center.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

const SPLIT_OFFSETS: [f64; 5] = [0.0137, -0.0213, 0.0371, -0.0449, 0.0587];

fn locate(f: &CharFn, rect: &Rect, n: u32, tol: f64, depth: usize, out: &mut Vec<ZeroCluster>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let scale = 1.0 + rect.center().norm();
    if n == 1 {
        if let Some(c) = newton_simple(f, rect, tol) {
            out.push(c);
            return Ok(());
        }
    } else if rect.width().max(rect.height()) < 1e-4 * scale {
        out.push(multiple_cluster(f, rect, n)?);
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NonConvergence { rect: rect.as_array(), reason: "subdivision depth exceeded".into() });
    }
    let vertical = rect.width() >= rect.height();
    for off in SPLIT_OFFSETS {
        let (a, b) = split(rect, vertical, 0.5 + off);
        let (na, nb) = match (count_in(f, &a), count_in(f, &b)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => continue,
        };
        if na + nb != n {
            continue;
        }
        locate(f, &a, na, tol, depth + 1, out)?;
        locate(f, &b, nb, tol, depth + 1, out)?;
        return Ok(());
    }
    Err(Error::NonConvergence { rect: rect.as_array(), reason: "no admissible split line".into() })
}

fn split(r: &Rect, vertical: bool, t: f64) -> (Rect, Rect) {
    if vertical {
        let x = r.re_min + t * r.width();
        (Rect { re_max: x, ..*r }, Rect { re_min: x, ..*r })
    } else {
        let y = r.im_min + t * r.height();
        (Rect { im_max: y, ..*r }, Rect { im_min: y, ..*r })
    }
}

/// Newton iteration for `num*` from the center of a rectangle holding one zero.
fn newton_simple(f: &CharFn, rect: &Rect, tol: f64) -> Option<ZeroCluster> {
    let g = f.numerator_only();
    let mut z = rect.center();
    let slack = rect.inflate(0.05 * rect.width().max(rect.height()));
    for _ in 0..100 {
        let (v, dv, _) = g.num_scaled(z);
        if dv.norm() == 0.0 {
            return None;
        }
        let step = v / dv;
        z -= step;
        if !slack.contains(z) {
            return None;
        }
        if step.norm() < 0.01 * tol {
            let radius = tol.max(10.0 * step.norm());
            // the disk must hold exactly this one zero
            return (winding_circle(f, z, radius) == Some(1) && rect.inflate(radius).contains(z))
                .then_some(ZeroCluster { center: z, multiplicity: 1, radius });
        }
    }
    None
}

/// A group of `n` zeros inside a tiny rectangle: the center is sharpened by
/// Newton on the `(M−1)`-th derivative of the numerator, where `M` counts the
/// numerator zeros inside, and the radius is the smallest circle with a
/// trustworthy winding number.
fn multiple_cluster(f: &CharFn, rect: &Rect, n: u32) -> Result<ZeroCluster> {
    let g = f.numerator_only();
    let m_num = count_in(&g, rect)?;
    let mut deriv = f.num.clone();
    for _ in 1..m_num {
        deriv = deriv.derivative();
    }
    let h = CharFn::from_parts(0, &deriv, &[Complex64::new(1.0, 0.0)]);
    let mut z = rect.center();
    for _ in 0..100 {
        let (v, dv, _) = h.num_scaled(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() < 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if !rect.inflate(rect.width().max(rect.height())).contains(z) {
        z = rect.center();
    }
    let mut radius = rect.width().max(rect.height());
    let mut best = None;
    while radius > 1e-15 {
        match winding_circle(f, z, radius) {
            Some(m) if m == n => best = Some(radius),
            _ => break,
        }
        radius /= 4.0;
    }
    let radius = best.ok_or_else(|| Error::NonConvergence {
        rect: rect.as_array(),
        reason: format!("could not isolate a cluster of multiplicity {n}"),
    })?;
    Ok(ZeroCluster { center: z, multiplicity: n, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyC;
    use crate::scalar::GaussianRational as Q;

    fn h(e: &ExpPoly) -> HElement {
        HElement::from_exppoly(e)
    }
    fn s_minus(c: i64) -> ExpPoly {
        &ExpPoly::sigma() - &ExpPoly::constant(Q::from_int(c))
    }

    #[test]
    fn counts() {
        let r = Rect::new(-1.0, 1.0, -7.0, 7.0).unwrap();
        assert_eq!(count_zeros(&h(&s_minus(1)), &r).unwrap(), 3);
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&HElement::from_poly(&PolyC::z().pow(2)), &r).unwrap(), 2);
        let zs = &ExpPoly::monomial(PolyC::z(), 1) - &ExpPoly::one();
        let r = Rect::new(0.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&h(&zs), &r).unwrap(), 1);
    }

    #[test]
    fn boundary_zero_inflates() {
        // zero of σ−1 at 0 lies on the left edge
        let r = Rect::new(0.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&h(&s_minus(1)), &r).unwrap(), 1);
    }

    #[test]
    fn finds_ln2() {
        let r = Rect::new(0.0, 1.0, -1.0, 1.0).unwrap();
        let z = find_zeros(&h(&s_minus(2)), &r, 1e-9).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].center - Complex64::new(2f64.ln(), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn double_zero_at_origin() {
        let q = h(&(&s_minus(1) - &ExpPoly::z()));
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let z = find_zeros(&q, &r, 1e-9).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].multiplicity, 2);
        assert!(z[0].center.norm() < 1e-9);
        assert_eq!(vanishing_order(&q, Complex64::new(0.0, 0.0), 1e-9).unwrap(), 2);
    }

    #[test]
    fn vanishing_order_examples() {
        let q = h(&s_minus(1));
        assert_eq!(vanishing_order(&q, Complex64::new(0.0, 0.0), 1e-9).unwrap(), 1);
        assert_eq!(vanishing_order(&q, Complex64::new(1.0, 0.0), 1e-9).unwrap(), 0);
        let q2 = h(&s_minus(1).pow(2));
        assert_eq!(vanishing_order(&q2, Complex64::new(0.0, TAU), 1e-9).unwrap(), 2);
    }
}
