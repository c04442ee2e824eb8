//! Exponential-polynomial solutions of `q·u = 0` and an independent
//! time-domain oracle.
//!
//! `z` acts as `d/dx` and `σ` as `f(x) ↦ f(x + 1)`, so on a mode
//! `P(x)e^{αx}` an element `q` acts by `e^{αx} q(D + α) P`, and for a
//! polynomial `P` this is the finite Taylor sum `Σ_k q*^{(k)}(α)/k! · P^{(k)}`.
//! Because `q*` is entire the formula also covers modes at roots of the
//! denominator, where the division is resolved by the removable singularity.


use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::charzeros::{find_zeros, Rect};
use crate::error::{Error, Result};
use crate::hring::{taylor_coefficients, HElement};
use crate::matsmith::{smith, HMatrix};
use crate::poly::PolyC;
use crate::scalar::{factorial, GaussianRational as Q};

const MERGE_TOL: f64 = 1e-12;
pub const DEFAULT_RESIDUAL: f64 = 1e-6;
pub const DEFAULT_STEP: f64 = 1.0 / 256.0;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// One term `P(x)e^{αx}`; `poly[k]` is the coefficient of `x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub alpha: Complex64,
    pub poly: Vec<Complex64>,
}

impl Mode {
    pub fn new(alpha: Complex64, poly: Vec<Complex64>) -> Self {
        let mut m = Mode { alpha, poly };
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.poly.last().is_some_and(|c| *c == czero()) {
            self.poly.pop();
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let p = self.poly.iter().rev().fold(czero(), |acc, c| acc * x + c);
        p * (self.alpha * x).exp()
    }

    /// `d/dx` of the mode.
    pub fn derivative(&self) -> Mode {
        let mut out: Vec<Complex64> = self.poly.iter().map(|c| c * self.alpha).collect();
        for k in 1..self.poly.len() {
            out[k - 1] += self.poly[k] * k as f64;
        }
        Mode::new(self.alpha, out)
    }
}

/// `f(x) = Σ P_k(x) e^{α_k x}` with distinct `α_k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpSolution {
    pub modes: Vec<Mode>,
}

impl ExpSolution {
    pub fn zero() -> Self {
        ExpSolution::default()
    }

    /// `x^j e^{αx}`.
    pub fn monomial(alpha: Complex64, j: usize) -> Self {
        let mut poly = vec![czero(); j + 1];
        poly[j] = Complex64::new(1.0, 0.0);
        ExpSolution::from_modes(vec![Mode::new(alpha, poly)])
    }

    /// Merges modes with (numerically) equal exponents and drops zero modes.
    pub fn from_modes(modes: Vec<Mode>) -> Self {
        let mut out: Vec<Mode> = Vec::new();
        for m in modes {
            match out.iter_mut().find(|o| (o.alpha - m.alpha).norm() <= MERGE_TOL * (1.0 + m.alpha.norm())) {
                Some(o) => {
                    if o.poly.len() < m.poly.len() {
                        o.poly.resize(m.poly.len(), czero());
                    }
                    for (k, c) in m.poly.iter().enumerate() {
                        o.poly[k] += c;
                    }
                    o.trim();
                }
                None => out.push(m),
            }
        }
        out.retain(|m| !m.poly.is_empty());
        ExpSolution { modes: out }
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.modes.iter().map(|m| m.eval(x)).sum()
    }

    pub fn derivative(&self) -> ExpSolution {
        ExpSolution::from_modes(self.modes.iter().map(Mode::derivative).collect())
    }

    pub fn add(&self, o: &ExpSolution) -> ExpSolution {
        ExpSolution::from_modes(self.modes.iter().chain(o.modes.iter()).cloned().collect())
    }

    pub fn scale(&self, c: Complex64) -> ExpSolution {
        ExpSolution::from_modes(
            self.modes.iter().map(|m| Mode::new(m.alpha, m.poly.iter().map(|x| x * c).collect())).collect(),
        )
    }

    /// `sup |f|` on `n + 1` equispaced points of `[a, b]`.
    pub fn sup_norm(&self, a: f64, b: f64, n: usize) -> f64 {
        (0..=n).map(|i| self.eval(a + (b - a) * i as f64 / n as f64).norm()).fold(0.0, f64::max)
    }
}

/// Action of `q` on an exponential polynomial.
pub fn apply_op(q: &HElement, u: &ExpSolution) -> Result<ExpSolution> {
    let mut out = Vec::new();
    for m in &u.modes {
        let n = m.poly.len();
        let t = taylor_coefficients(q, m.alpha, n)?;
        // Σ_k t_k P^{(k)}, P^{(k)} coefficients: P_i · i!/(i−k)!
        let mut res = vec![czero(); n];
        for (k, tk) in t.iter().enumerate() {
            let mut fall: f64 = (1..=k).map(|j| j as f64).product();
            for i in k..n {
                if i > k {
                    fall *= i as f64 / (i - k) as f64;
                }
                res[i - k] += tk * m.poly[i] * fall;
            }
        }
        out.push(Mode::new(m.alpha, res));
    }
    Ok(ExpSolution::from_modes(out))
}

/// Solutions `x^j e^{αx}`, `j < m`, for every zero cluster `(α, m)` of `q*`
/// in `rect`, each checked to annihilate within `residual` on `[0, 1]`.
pub fn solution_basis_single(q: &HElement, rect: &Rect, tol: f64, residual: f64) -> Result<Vec<ExpSolution>> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut out = Vec::new();
    for c in find_zeros(q, rect, tol)? {
        for j in 0..c.multiplicity as usize {
            let u = ExpSolution::monomial(c.center, j);
            let r = apply_op(q, &u)?.sup_norm(0.0, 1.0, 64);
            if r >= residual {
                return Err(Error::NonConvergence {
                    rect: [c.center.re - c.radius, c.center.re + c.radius, c.center.im - c.radius, c.center.im + c.radius],
                    reason: format!("basis solution x^{j}e^(αx) leaves residual {r:.3e}"),
                });
            }
            out.push(u);
        }
    }
    Ok(out)
}

/// Solutions of `P·u = 0` from the Smith form: exponential solutions for each
/// nonzero invariant factor, transported by `W`, plus the columns of `W` along
/// which the system leaves the unknown function completely free.
#[derive(Clone, Debug)]
pub struct SystemBasis {
    pub solutions: Vec<Vec<ExpSolution>>,
    /// `u = w·f` solves the system for every function `f`.
    pub free_directions: Vec<Vec<HElement>>,
    pub residuals: Vec<f64>,
}

pub fn solution_basis_system(p: &HMatrix, rect: &Rect, tol: f64, residual: f64) -> Result<SystemBasis> {
    let s = smith(p)?;
    let n = p.cols();
    let mut solutions = Vec::new();
    let mut residuals = Vec::new();
    for i in 0..s.rank {
        for y in solution_basis_single(s.d.get(i, i), rect, tol, residual)? {
            let mut u = Vec::with_capacity(n);
            for r in 0..n {
                u.push(apply_op(s.w.get(r, i), &y)?);
            }
            let res = system_residual(p, &u)?;
            if res >= residual {
                return Err(Error::Internal(format!("transported solution leaves residual {res:.3e}")));
            }
            solutions.push(u);
            residuals.push(res);
        }
    }
    let free_directions = (s.rank..n).map(|i| (0..n).map(|r| s.w.get(r, i).clone()).collect()).collect();
    Ok(SystemBasis { solutions, free_directions, residuals })
}

/// `max_i sup_{[0,1]} |Σ_j P_ij u_j|`.
pub fn system_residual(p: &HMatrix, u: &[ExpSolution]) -> Result<f64> {
    if u.len() != p.cols() {
        return Err(Error::DimensionMismatch(format!("{} components for {} columns", u.len(), p.cols())));
    }
    let mut worst: f64 = 0.0;
    for i in 0..p.rows() {
        let mut acc = ExpSolution::zero();
        for (j, uj) in u.iter().enumerate() {
            acc = acc.add(&apply_op(p.get(i, j), uj)?);
        }
        worst = worst.max(acc.sup_norm(0.0, 1.0, 64));
    }
    Ok(worst)
}

/// Samples `values[k] = y(x0 + k·step)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub x0: f64,
    pub step: f64,
    pub values: Vec<Complex64>,
}

impl Trajectory {
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|k| self.x0 + k as f64 * self.step)
    }

    /// The samples with `a ≤ x ≤ b`.
    pub fn window(&self, a: f64, b: f64) -> Trajectory {
        let eps = 1e-9 * self.step;
        let idx: Vec<usize> = (0..self.values.len())
            .filter(|&k| {
                let x = self.x0 + k as f64 * self.step;
                x >= a - eps && x <= b + eps
            })
            .collect();
        let first = idx.first().copied().unwrap_or(0);
        Trajectory {
            x0: self.x0 + first as f64 * self.step,
            step: self.step,
            values: idx.iter().map(|&k| self.values[k]).collect(),
        }
    }
}

/// The equation `q·y = 0` solved for its highest shift:
/// `c·y^{(d)}(x) = −Σ_{k<d} a_k y^{(k)}(x) − Σ_{s≥1} Σ_k b_{s,k} y^{(k)}(x − s)`.
#[derive(Clone, Debug)]
pub struct RetardedForm {
    /// Largest σ-exponent after shifting the valuation to zero.
    pub span: usize,
    pub order: usize,
    /// `lags[s][k]`: coefficient of `y^{(k)}(x − s)`, `s = 0` being the
    /// undelayed lower-order terms; already divided by `−c`.
    lags: Vec<Vec<Complex64>>,
}

impl RetardedForm {
    /// Requires the top σ-coefficient to have strictly the largest degree, or
    /// every coefficient to be constant.
    pub fn new(q: &HElement) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::NotRetarded("zero operator".into()));
        }
        let num = q.num();
        let span = num.max_exp().unwrap() as usize;
        let top = num.coeff(span as i64);
        let d = top.deg();
        for (j, p) in num.terms() {
            if (j as usize) < span && p.deg() >= d && !(d == 0 && p.deg() == 0) {
                return Err(Error::NotRetarded(format!(
                    "coefficient of s^{j} has degree {} but the leading one has degree {d}",
                    p.deg()
                )));
            }
        }
        if span == 0 {
            return Err(Error::NotRetarded("no shift: the equation is an ordinary one".into()));
        }
        let c = top.lc().to_complex();
        let mut lags = vec![vec![czero(); d.max(1)]; span + 1];
        for (j, p) in num.terms() {
            let s = span - j as usize;
            for (k, a) in p.coeffs().iter().enumerate() {
                if s == 0 && k == d {
                    continue;
                }
                lags[s][k] = -a.to_complex() / c;
            }
        }
        Ok(RetardedForm { span, order: d, lags })
    }
}

/// Integrates `q·y = 0` forward from `init` given on `[0, J]`, `J` the
/// σ-span, by RK4 on `(y, …, y^{(d−1)})` with step `step`. Delayed values off
/// the grid come from cubic Hermite interpolation of the computed states.
pub fn method_of_steps(q: &HElement, init: &ExpSolution, horizon: f64, step: f64) -> Result<Trajectory> {
    let form = RetardedForm::new(q)?;
    if !(step > 0.0) || (1.0 / step).fract().abs() > 1e-9 {
        return Err(Error::Config(format!("step {step} must divide 1")));
    }
    let per_unit = (1.0 / step).round() as usize;
    let j = form.span;
    let start = j * per_unit;
    let total = ((horizon / step).round() as usize).max(start);
    let d = form.order;
    // init jets up to order d
    let mut init_d = vec![init.clone()];
    for _ in 0..d {
        let next = init_d.last().unwrap().derivative();
        init_d.push(next);
    }
    let mut values = Vec::with_capacity(total + 1);
    // states[k] = (y, y', …, y^{(d)}) at grid point k
    let mut states: Vec<Vec<Complex64>> = Vec::with_capacity(total + 1);
    for k in 0..=start {
        let x = k as f64 * step;
        states.push(init_d.iter().map(|f| f.eval(x)).collect());
    }
    let sim = Sim { form: &form, init: &init_d, states: &states, step, start };
    if d == 0 {
        // pure difference equation: y(x) = Σ_s lags[s][0] y(x − s)
        let _ = sim;
        for k in start + 1..=total {
            let mut acc = czero();
            for s in 1..=j {
                acc += form.lags[s][0] * states[k - s * per_unit][0];
            }
            states.push(vec![acc]);
        }
    } else {
        for k in start..total {
            let sim = Sim { form: &form, init: &init_d, states: &states, step, start };
            let x = k as f64 * step;
            let y0: Vec<Complex64> = states[k][..d].to_vec();
            let k1 = sim.rhs(x, &y0);
            let k2 = sim.rhs(x + 0.5 * step, &axpy(&y0, 0.5 * step, &k1));
            let k3 = sim.rhs(x + 0.5 * step, &axpy(&y0, 0.5 * step, &k2));
            let k4 = sim.rhs(x + step, &axpy(&y0, step, &k3));
            let mut y1 = y0.clone();
            for i in 0..d {
                y1[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            let sim = Sim { form: &form, init: &init_d, states: &states, step, start };
            let top = sim.top_derivative(x + step, &y1);
            y1.push(top);
            states.push(y1);
        }
        // the junction value of y^{(d)} is one-sided; keep the forward value
        let sim = Sim { form: &form, init: &init_d, states: &states, step, start };
        let top = sim.top_derivative(start as f64 * step, &states[start][..d]);
        states[start][d] = top;
    }
    for s in &states {
        values.push(s[0]);
    }
    Ok(Trajectory { x0: 0.0, step, values })
}

fn axpy(y: &[Complex64], h: f64, k: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

struct Sim<'a> {
    form: &'a RetardedForm,
    init: &'a [ExpSolution],
    states: &'a [Vec<Complex64>],
    step: f64,
    start: usize,
}

impl Sim<'_> {
    /// `y^{(k)}` at an earlier time, `k ≤ d − 1`.
    fn history(&self, x: f64, k: usize) -> Complex64 {
        let xs = self.start as f64 * self.step;
        if x <= xs + 1e-12 {
            return self.init[k].eval(x);
        }
        let t = (x - xs) / self.step;
        let i = (t.floor() as usize).min(self.states.len() - 2) + self.start;
        let i = i.min(self.states.len() - 2);
        let u = (x - i as f64 * self.step) / self.step;
        if u.abs() < 1e-12 {
            return self.states[i][k];
        }
        let (p0, p1) = (self.states[i][k], self.states[i + 1][k]);
        let (m0, m1) = (self.states[i][k + 1] * self.step, self.states[i + 1][k + 1] * self.step);
        let (u2, u3) = (u * u, u * u * u);
        p0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + m0 * (u3 - 2.0 * u2 + u)
            + p1 * (-2.0 * u3 + 3.0 * u2)
            + m1 * (u3 - u2)
    }

    fn top_derivative(&self, x: f64, y: &[Complex64]) -> Complex64 {
        let f = self.form;
        let mut acc = czero();
        for (k, a) in f.lags[0].iter().enumerate().take(f.order) {
            acc += a * y[k];
        }
        for s in 1..=f.span {
            for (k, b) in f.lags[s].iter().enumerate() {
                if *b != czero() {
                    acc += b * self.history(x - s as f64, k);
                }
            }
        }
        acc
    }

    fn rhs(&self, x: f64, y: &[Complex64]) -> Vec<Complex64> {
        let d = self.form.order;
        let mut out: Vec<Complex64> = y[1..d].to_vec();
        out.push(self.top_derivative(x, y));
        out
    }
}

/// Least-squares fit of a trajectory by a list of exponential solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub coefficients: Vec<Complex64>,
    /// `(Σ |y − fit|² · step)^{1/2}` over the window.
    pub residual: f64,
    /// Condition number of the Gram matrix.
    pub gram_condition: f64,
    /// Set when the Gram condition exceeds `1e12`; the fit is still reported.
    pub ill_conditioned: bool,
}

pub fn spectral_project(traj: &Trajectory, basis: &[ExpSolution]) -> Result<Projection> {
    if basis.is_empty() {
        return Err(Error::DimensionMismatch("empty basis".into()));
    }
    let xs: Vec<f64> = traj.grid().collect();
    let a = DMatrix::from_fn(xs.len(), basis.len(), |i, j| basis[j].eval(xs[i]));
    let b = DMatrix::from_fn(xs.len(), 1, |i, _| traj.values[i]);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if smin > 0.0 { (smax / smin).powi(2) } else { f64::INFINITY };
    let coef = svd
        .solve(&b, smax * 1e-14)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    let r = &b - &a * &coef;
    let residual = (r.iter().map(|c| c.norm_sqr()).sum::<f64>() * traj.step).sqrt();
    Ok(Projection {
        coefficients: coef.iter().cloned().collect(),
        residual,
        gram_condition: cond,
        ill_conditioned: cond > 1e12,
    })
}

/// Power series `Σ f_n z^n` known modulo `z^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Q>,
    order: usize,
}

impl FormalSeries {
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order, Q::zero());
        FormalSeries { coeffs, order }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `z·f`, known modulo `z^{order+1}`.
    pub fn mul_z(&self) -> FormalSeries {
        let mut c = vec![Q::zero()];
        c.extend(self.coeffs.iter().cloned());
        FormalSeries::new(c, self.order + 1)
    }

    /// `e^z·f`, `(e^z f)_n = Σ_{k≤n} f_k/(n−k)!`.
    pub fn mul_exp(&self) -> FormalSeries {
        let c = (0..self.order)
            .map(|n| {
                let mut acc = Q::zero();
                for k in 0..=n {
                    acc += &(&self.coeffs[k] / &factorial((n - k) as u64));
                }
                acc
            })
            .collect();
        FormalSeries::new(c, self.order)
    }
}

/// `⟨p, f⟩ = Σ n!·p_n·f_n`.
pub fn pairing(p: &PolyC, f: &FormalSeries) -> Result<Q> {
    if !p.is_zero() && p.deg() >= f.order {
        return Err(Error::TruncationTooShort { have: f.order, need: p.deg() });
    }
    let mut acc = Q::zero();
    for (n, c) in p.coeffs().iter().enumerate() {
        acc += &(&(c * &factorial(n as u64)) * &f.coeffs[n]);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointReport {
    /// `⟨p′, f⟩` and `⟨p, z·f⟩`.
    pub derivative: (Q, Q),
    /// `⟨σp, f⟩` with `σp = p(z + 1)`, and `⟨p, e^z·f⟩`.
    pub shift: (Q, Q),
}

impl AdjointReport {
    pub fn holds(&self) -> bool {
        self.derivative.0 == self.derivative.1 && self.shift.0 == self.shift.1
    }
}

pub fn pairing_adjoint_check(p: &PolyC, f: &FormalSeries) -> Result<AdjointReport> {
    let shifted = p.compose_shift(&Q::one());
    Ok(AdjointReport {
        derivative: (pairing(&p.derivative(), f)?, pairing(p, &f.mul_z())?),
        shift: (pairing(&shifted, f)?, pairing(p, &f.mul_exp())?),
    })
}

/// Modes of a basis keyed for deterministic ordering by `(Re α, Im α, j)`.
pub fn sort_basis(basis: &mut [ExpSolution]) {
    let key = |u: &ExpSolution| {
        u.modes.first().map(|m| (m.alpha.re, m.alpha.im, m.poly.len())).unwrap_or((0.0, 0.0, 0))
    };
    basis.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
}
