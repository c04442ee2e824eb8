//! λ-regularized principal values and residue currents of `1/f*` in one
//! variable, and empirical Paley–Wiener envelopes.
//!
//! Pairings use the area measure `dA = dx dy`. With that choice
//! `residue_pair(z, φ) = π·φ(0)`, and this one calibration fixes every
//! constant below.
//!
//! Integrals are split by a smooth partition of unity. Near each zero of `f*`
//! the integrand is taken in polar coordinates with a logarithmic radial
//! variable, so the `r^{2λ−1}` behaviour is integrated without loss. The
//! piece below the smallest radius is added in closed form. Away from the
//! zeros the integrand is smooth and compactly supported, and the trapezoid
//! rule on the grid is spectrally accurate.

use num_complex::Complex64;

use crate::charzeros::{find_zeros, Rect};
use crate::error::{Error, Result};
use crate::hring::{normalize_unchecked, HElement};
use crate::poly::PolyC;

pub const NORMALIZATION: &str = "area measure dA = dx dy; residue_pair(z, phi) = pi * phi(0)";
pub const DEFAULT_LAMBDAS: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];
pub const DEFAULT_GRID: usize = 512;

const TAU: f64 = std::f64::consts::TAU;
const RMIN_FACTOR: f64 = 1e-6;
const RADIAL_PANELS: usize = 28;
const ANGLES: usize = 128;
const FD_STEP: f64 = 1e-4;

const GL8_X: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// A smooth compactly supported function on `C`.
pub trait TestFunction: Sync {
    /// Center and radius of a disk containing the support.
    fn support(&self) -> (Complex64, f64);
    fn value(&self, z: Complex64) -> Complex64;

    /// `∂φ/∂ζ = (∂_x − i∂_y)φ/2`.
    fn d_zeta(&self, z: Complex64) -> Complex64 {
        let (dx, dy) = self.gradient(z);
        (dx - Complex64::i() * dy) * 0.5
    }

    /// `∂φ/∂ζ̄ = (∂_x + i∂_y)φ/2`.
    fn d_zeta_bar(&self, z: Complex64) -> Complex64 {
        let (dx, dy) = self.gradient(z);
        (dx + Complex64::i() * dy) * 0.5
    }

    /// Central differences; implementors override with exact formulas.
    fn gradient(&self, z: Complex64) -> (Complex64, Complex64) {
        let h = FD_STEP;
        let dx = (self.value(z + h) - self.value(z - h)) / (2.0 * h);
        let dy = (self.value(z + Complex64::new(0.0, h)) - self.value(z - Complex64::new(0.0, h))) / (2.0 * h);
        (dx, dy)
    }
}

/// `φ(ζ) = p(ζ − c)·w(|ζ − c|²/r²)` with the standard bump
/// `w(t) = exp(1 − 1/(1 − t))` on `t < 1`, so `w(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub center: Complex64,
    pub radius: f64,
    /// Ascending coefficients of `p`; empty means `p = 1`.
    pub poly: Vec<Complex64>,
}

impl Bump {
    pub fn new(center: Complex64, radius: f64, poly: Vec<Complex64>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::Config(format!("bump radius {radius} must be positive and finite")));
        }
        Ok(Bump { center, radius, poly })
    }

    pub fn radial(center: Complex64, radius: f64) -> Self {
        Bump { center, radius, poly: Vec::new() }
    }

    fn p(&self, u: Complex64) -> (Complex64, Complex64) {
        if self.poly.is_empty() {
            return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        }
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            dv = dv * u + v;
            v = v * u + c;
        }
        (v, dv)
    }

    /// `(w(t), w′(t))`.
    fn window(t: f64) -> (f64, f64) {
        if t >= 1.0 {
            return (0.0, 0.0);
        }
        let s = 1.0 - t;
        let w = (1.0 - 1.0 / s).exp();
        (w, -w / (s * s))
    }
}

impl TestFunction for Bump {
    fn support(&self) -> (Complex64, f64) {
        (self.center, self.radius)
    }

    fn value(&self, z: Complex64) -> Complex64 {
        let u = z - self.center;
        let (w, _) = Bump::window(u.norm_sqr() / (self.radius * self.radius));
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.p(u).0 * w
    }

    fn d_zeta(&self, z: Complex64) -> Complex64 {
        let u = z - self.center;
        let r2 = self.radius * self.radius;
        let (w, dw) = Bump::window(u.norm_sqr() / r2);
        let (p, dp) = self.p(u);
        dp * w + p * dw * u.conj() / r2
    }

    fn d_zeta_bar(&self, z: Complex64) -> Complex64 {
        let u = z - self.center;
        let r2 = self.radius * self.radius;
        let (_, dw) = Bump::window(u.norm_sqr() / r2);
        self.p(u).0 * dw * u / r2
    }

    fn gradient(&self, z: Complex64) -> (Complex64, Complex64) {
        let (a, b) = (self.d_zeta(z), self.d_zeta_bar(z));
        (a + b, Complex64::i() * (a - b))
    }
}

/// `∂φ/∂ζ̄` as a test function in its own right.
pub struct DbarOf<'a, T: TestFunction>(pub &'a T);

impl<T: TestFunction> TestFunction for DbarOf<'_, T> {
    fn support(&self) -> (Complex64, f64) {
        self.0.support()
    }
    fn value(&self, z: Complex64) -> Complex64 {
        self.0.d_zeta_bar(z)
    }
}

/// A linear combination `a·φ + b·ψ`.
pub struct Combination<'a, A: TestFunction, B: TestFunction> {
    pub a: Complex64,
    pub phi: &'a A,
    pub b: Complex64,
    pub psi: &'a B,
}

impl<A: TestFunction, B: TestFunction> TestFunction for Combination<'_, A, B> {
    fn support(&self) -> (Complex64, f64) {
        let (c1, r1) = self.phi.support();
        let (c2, r2) = self.psi.support();
        let c = (c1 + c2) * 0.5;
        (c, ((c1 - c).norm() + r1).max((c2 - c).norm() + r2))
    }
    fn value(&self, z: Complex64) -> Complex64 {
        self.a * self.phi.value(z) + self.b * self.psi.value(z)
    }
    fn d_zeta(&self, z: Complex64) -> Complex64 {
        self.a * self.phi.d_zeta(z) + self.b * self.psi.d_zeta(z)
    }
    fn d_zeta_bar(&self, z: Complex64) -> Complex64 {
        self.a * self.phi.d_zeta_bar(z) + self.b * self.psi.d_zeta_bar(z)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurrentOptions {
    pub lambdas: Vec<f64>,
    /// Grid points per side of the support box.
    pub grid: usize,
    /// Relative extrapolation residual above which the result is flagged.
    pub tol: f64,
}

impl Default for CurrentOptions {
    fn default() -> Self {
        CurrentOptions { lambdas: DEFAULT_LAMBDAS.to_vec(), grid: DEFAULT_GRID, tol: 1e-4 }
    }
}

impl CurrentOptions {
    fn check(&self) -> Result<()> {
        if self.grid < 16 {
            return Err(Error::Config(format!("grid {} is below 16", self.grid)));
        }
        if self.lambdas.len() < 2 || self.lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::Config("lambda schedule needs at least two positive values".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurrentEval {
    pub value: Complex64,
    pub lambda_schedule: Vec<f64>,
    /// `I(λ)` for each λ of the schedule.
    pub samples: Vec<Complex64>,
    /// Distance between the extrapolations with and without the largest λ.
    pub residual: f64,
    pub flagged: bool,
    pub normalization: &'static str,
}

/// One node: position, weight, and (for tail nodes) the point multiplicity.
#[derive(Clone, Copy)]
struct Node {
    z: Complex64,
    w: f64,
    tail_mult: Option<u32>,
}

/// Polar disks around zeros plus the remaining grid, sharing a partition of
/// unity.
struct Layout {
    nodes: Vec<Node>,
}

/// `1` on `[0, 1/2]`, `0` from `1` on, smooth in between.
fn cutoff(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let s = 2.0 * (x - 0.5);
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    b / (a + b)
}

impl Layout {
    fn new(support: (Complex64, f64), zeros: &[(Complex64, u32)], grid: usize) -> Layout {
        let (c, rad) = support;
        let radii: Vec<f64> = zeros
            .iter()
            .map(|(a, _)| {
                let d = zeros.iter().filter(|(b, _)| b != a).map(|(b, _)| (a - b).norm()).fold(f64::INFINITY, f64::min);
                (0.4 * d).min(1.0).min(rad)
            })
            .collect();
        let chi = |z: Complex64| -> f64 {
            zeros.iter().zip(&radii).map(|((a, _), r)| cutoff((z - a).norm() / r)).sum()
        };
        let mut nodes = Vec::new();
        let h = 2.0 * rad / (grid - 1) as f64;
        for i in 0..grid {
            for j in 0..grid {
                let z = c + Complex64::new(-rad + i as f64 * h, -rad + j as f64 * h);
                if (z - c).norm() >= rad {
                    continue;
                }
                let w = 1.0 - chi(z);
                if w > 0.0 {
                    nodes.push(Node { z, w: w * h * h, tail_mult: None });
                }
            }
        }
        for ((a, m), rho) in zeros.iter().zip(&radii) {
            let rmin = rho * RMIN_FACTOR;
            let (t0, t1) = (rmin.ln(), rho.ln());
            let len = (t1 - t0) / RADIAL_PANELS as f64;
            let dth = TAU / ANGLES as f64;
            for p in 0..RADIAL_PANELS {
                let mid = t0 + (p as f64 + 0.5) * len;
                for (x, wx) in GL8_X.iter().zip(GL8_W.iter()) {
                    let r = (mid + 0.5 * len * x).exp();
                    let wr = 0.5 * len * wx * r * r;
                    let cut = cutoff(r / rho);
                    for k in 0..ANGLES {
                        let z = a + Complex64::from_polar(r, dth * (k as f64 + 0.5));
                        nodes.push(Node { z, w: wr * dth * cut, tail_mult: None });
                    }
                }
            }
            for k in 0..ANGLES {
                let z = a + Complex64::from_polar(rmin, dth * (k as f64 + 0.5));
                nodes.push(Node { z, w: rmin * rmin * dth, tail_mult: Some(*m) });
            }
        }
        Layout { nodes }
    }
}

fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn derivative(f: &HElement) -> HElement {
    let (n, d) = f.fraction();
    let num = &n.derivative().mul_poly(&d) - &n.mul_poly(&d.derivative());
    normalize_unchecked(&num, &(&d * &d))
}

/// Zeros of `f*` in the support box, with multiplicity.
fn zeros_in(f: &HElement, support: (Complex64, f64)) -> Result<Vec<(Complex64, u32)>> {
    let (c, r) = support;
    let mut rect = Rect::new(c.re - r, c.re + r, c.im - r, c.im + r)?.inflate(0.0123 * r);
    for _ in 0..4 {
        match find_zeros(f, &rect, 1e-12) {
            Ok(z) => return Ok(z.into_iter().map(|k| (k.center, k.multiplicity)).collect()),
            Err(Error::BoundaryZero { suggested }) => {
                rect = Rect::new(suggested[0], suggested[1], suggested[2], suggested[3])?;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::QuadratureDivergence("zero finder kept hitting the support boundary".into()))
}

struct Prepared {
    nodes: Vec<Node>,
    f: Vec<Complex64>,
    df: Vec<Complex64>,
    phi: Vec<Complex64>,
    mass: f64,
}

fn prepare(f: &HElement, phi: &dyn TestFunction, grid: usize, need_df: bool) -> Result<Prepared> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let support = phi.support();
    let zeros = if f.num().sigma_span() == 0 && f.num().max_coeff_degree() == 0 {
        Vec::new()
    } else {
        zeros_in(f, support)?
    };
    let layout = Layout::new(support, &zeros, grid);
    let fd = need_df.then(|| derivative(f));
    let mut p = Prepared { nodes: Vec::new(), f: Vec::new(), df: Vec::new(), phi: Vec::new(), mass: 0.0 };
    for n in layout.nodes {
        let v = phi.value(n.z);
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        if n.tail_mult.is_none() {
            p.mass += n.w * v.norm();
        }
        p.f.push(f.eval(n.z)?);
        if let Some(fd) = &fd {
            p.df.push(fd.eval(n.z)?);
        }
        p.phi.push(v);
        p.nodes.push(n);
    }
    Ok(p)
}

/// Value at `0` of the interpolating polynomial through `(x_i, y_i)`.
fn neville_at_zero(x: &[f64], y: &[Complex64]) -> Complex64 {
    let mut p = y.to_vec();
    let n = x.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (p[i] * x[i + k] - p[i + 1] * x[i]) / (x[i + k] - x[i]);
        }
    }
    p[0]
}

fn extrapolate(lambdas: &[f64], samples: Vec<Complex64>, scale: f64, tol: f64) -> Result<CurrentEval> {
    if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(Error::QuadratureDivergence("non-finite regularized integral".into()));
    }
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]));
    let xs: Vec<f64> = order.iter().map(|&i| lambdas[i]).collect();
    let ys: Vec<Complex64> = order.iter().map(|&i| samples[i]).collect();
    let value = neville_at_zero(&xs, &ys);
    let coarse = neville_at_zero(&xs[..xs.len() - 1], &ys[..ys.len() - 1]);
    let residual = (value - coarse).norm();
    let scale = scale.max(value.norm());
    if residual > 0.05 * scale {
        return Err(Error::QuadratureDivergence(format!(
            "extrapolation residual {residual:.3e} against scale {scale:.3e}"
        )));
    }
    Ok(CurrentEval {
        value,
        lambda_schedule: lambdas.to_vec(),
        samples,
        residual,
        flagged: residual > tol * scale,
        normalization: NORMALIZATION,
    })
}

/// `lim_{λ→0} ∬ |f*|^{2λ}/f* · φ dA`.
pub fn pv_pair(f: &HElement, phi: &dyn TestFunction, opts: &CurrentOptions) -> Result<CurrentEval> {
    opts.check()?;
    let p = prepare(f, phi, opts.grid, false)?;
    let samples = opts
        .lambdas
        .iter()
        .map(|&lam| {
            let terms: Vec<Complex64> = (0..p.nodes.len())
                .map(|i| {
                    let n = &p.nodes[i];
                    let fv = p.f[i];
                    let w = match n.tail_mult {
                        // r·F ~ r^{2mλ+1−m}: the angular mean is what survives
                        Some(m) => n.w / (2.0 * m as f64 * lam + 2.0 - m as f64).max(1.0),
                        None => n.w,
                    };
                    if fv == Complex64::new(0.0, 0.0) {
                        return Complex64::new(0.0, 0.0);
                    }
                    fv.norm().powf(2.0 * lam) / fv * p.phi[i] * w
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    extrapolate(&opts.lambdas, samples, p.mass, opts.tol)
}

/// `lim_{λ→0} λ∬ |f*|^{2λ−2}·conj(f*′)·φ dA`, the pairing of `∂̄(1/f*)`.
pub fn residue_pair(f: &HElement, phi: &dyn TestFunction, opts: &CurrentOptions) -> Result<CurrentEval> {
    opts.check()?;
    let p = prepare(f, phi, opts.grid, true)?;
    let samples = opts
        .lambdas
        .iter()
        .map(|&lam| {
            let terms: Vec<Complex64> = (0..p.nodes.len())
                .map(|i| {
                    let n = &p.nodes[i];
                    let fv = p.f[i];
                    if fv == Complex64::new(0.0, 0.0) {
                        return Complex64::new(0.0, 0.0);
                    }
                    let w = match n.tail_mult {
                        // ∫_0^{r} s^{2mλ−1} ds = r^{2mλ}/(2mλ)
                        Some(m) => n.w / (2.0 * m as f64 * lam),
                        None => n.w,
                    };
                    lam * fv.norm().powf(2.0 * lam - 2.0) * p.df[i].conj() * p.phi[i] * w
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    extrapolate(&opts.lambdas, samples, p.mass, opts.tol)
}

/// The principal value of `1/(e^ζ − 1)` through
/// `v.p. 1/(e^ζ−1) = e^{−ζ} ∂_ζ log|e^ζ − 1|²`, integrated by parts:
/// `−∬ log|e^ζ−1|² · e^{−ζ}(∂φ − φ) dA`. The zeros `2πik` are placed exactly.
pub fn pv_explicit_sigma_minus_one(phi: &dyn TestFunction, grid: usize) -> Result<Complex64> {
    if grid < 16 {
        return Err(Error::Config(format!("grid {grid} is below 16")));
    }
    let (c, r) = phi.support();
    let k0 = ((c.im - r) / TAU).floor() as i64 - 1;
    let k1 = ((c.im + r) / TAU).ceil() as i64 + 1;
    let zeros: Vec<(Complex64, u32)> = (k0..=k1)
        .map(|k| (Complex64::new(0.0, TAU * k as f64), 1))
        .filter(|(a, _)| (a - c).norm() < r + 1.0)
        .collect();
    let layout = Layout::new((c, r), &zeros, grid);
    let terms: Vec<Complex64> = layout
        .nodes
        .iter()
        .filter(|n| n.tail_mult.is_none())
        .map(|n| {
            let v = phi.value(n.z);
            if v == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let g = (n.z.exp() - 1.0).norm_sqr().ln();
            -g * (-n.z).exp() * (phi.d_zeta(n.z) - v) * n.w
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Fitted envelope `|R·g| ≤ C(1+|ζ|)^M e^{N|Re ζ|}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCert {
    pub c: f64,
    pub m: u32,
    pub n: u32,
    pub denom_witness: PolyC,
    pub samples: usize,
    /// Worst ratio growth along a ray, over the allowed slack.
    pub worst_ray: f64,
}

pub const M_CAP: u32 = 10;

/// `(ζ, g(ζ))` on an `n × n` grid over `[−r, r]²`.
pub fn grid_samples(g: impl Fn(Complex64) -> Complex64, r: f64, n: usize) -> Vec<(Complex64, Complex64)> {
    let h = 2.0 * r / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = Complex64::new(-r + i as f64 * h, -r + j as f64 * h);
            out.push((z, g(z)));
        }
    }
    out
}

/// Envelope check for fixed `(M, N)`. Every sample `ζ` on the outer ring is
/// compared with the largest ratio over the annulus `|ζ|/4 ≤ |w| ≤ |ζ|/2`:
/// the ratio to the envelope may grow by at most `((1+|ζ|)/(1+|ζ|/2))^{1/2}`,
/// half a power. Returns `(C, worst)` with `worst ≤ 1` on acceptance.
pub fn envelope_check(samples: &[(Complex64, f64)], m: u32, n: u32) -> (f64, f64) {
    let ratio = |z: Complex64, v: f64| v / ((1.0 + z.norm()).powi(m as i32) * (n as f64 * z.re.abs()).exp());
    let ratios: Vec<f64> = samples.iter().map(|(z, v)| ratio(*z, *v)).collect();
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let box_r = samples.iter().map(|(z, _)| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (i, (z, _)) in samples.iter().enumerate() {
        if z.re.abs().max(z.im.abs()) < 0.95 * box_r {
            continue;
        }
        let r = z.norm();
        let near = samples
            .iter()
            .zip(&ratios)
            .filter(|((w, _), _)| (0.25 * r..=0.5 * r).contains(&w.norm()))
            .map(|(_, x)| *x)
            .fold(0.0, f64::max);
        if near == 0.0 {
            continue;
        }
        let slack = ((1.0 + r) / (1.0 + 0.5 * r)).sqrt();
        worst = worst.max(ratios[i] / near / slack);
    }
    (c, worst)
}

/// Smallest `N ≤ n_cap`, then smallest `M ≤ M_CAP`, whose envelope passes
/// [`envelope_check`] on the samples of `|denom_witness·g|`.
pub fn pw_growth_fit(samples: &[(Complex64, Complex64)], denom_witness: &PolyC, n_cap: u32) -> Result<GrowthCert> {
    if samples.iter().any(|(z, v)| !(z.re.is_finite() && z.im.is_finite() && v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Config("growth samples must be finite".into()));
    }
    let abs: Vec<(Complex64, f64)> =
        samples.iter().map(|(z, v)| (*z, (denom_witness.eval_complex(*z) * v).norm())).collect();
    for n in 0..=n_cap {
        for m in 0..=M_CAP {
            let (c, worst) = envelope_check(&abs, m, n);
            if worst <= 1.0 {
                return Ok(GrowthCert { c, m, n, denom_witness: denom_witness.clone(), samples: abs.len(), worst_ray: worst });
            }
        }
    }
    Err(Error::EnvelopeCapExceeded { cap: n_cap })
}

/// Samples of `(e^ζ−1)·log|e^ζ−1|²`, the locally bounded primitive behind the
/// explicit principal value of `1/(e^ζ−1)`; the value at zeros is the limit 0.
pub fn explicit_pv_primitive(z: Complex64) -> Complex64 {
    let f = z.exp() - 1.0;
    let a = f.norm_sqr();
    if a == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    f * a.ln()
}
