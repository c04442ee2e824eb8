//! Floating-point evaluation of characteristic functions.

use num_complex::Complex64;

use super::HElement;
use crate::error::Result;

const CIRCLE_POINTS: usize = 128;

fn near_denominator_root(h: &HElement, z: Complex64) -> bool {
    if h.den().is_constant() {
        return false;
    }
    let v = h.den().eval_complex(z).norm();
    v < 1e-6 * h.den().abs_bound(z.norm()).max(1.0)
}

fn eval_direct(h: &HElement, z: Complex64) -> Result<Complex64> {
    let (n, d) = h.fraction();
    Ok(n.eval(z)? / d.eval_complex(z))
}

/// Radius for Cauchy integrals around `z`, kept clear of other roots of `den`.
fn cauchy_radius(h: &HElement, z: Complex64) -> f64 {
    let mut r: f64 = 0.25;
    for _ in 0..8 {
        let ok = (0..CIRCLE_POINTS).all(|j| {
            let w = z + Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / CIRCLE_POINTS as f64);
            !near_denominator_root(h, w)
        });
        if ok {
            break;
        }
        r *= 0.61;
    }
    r
}

pub(crate) fn eval_element(h: &HElement, z: Complex64) -> Result<Complex64> {
    if !near_denominator_root(h, z) {
        return eval_direct(h, z);
    }
    // q* is entire: use the mean value over a small circle
    let r = cauchy_radius(h, z);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..CIRCLE_POINTS {
        let w = z + Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / CIRCLE_POINTS as f64);
        acc += eval_direct(h, w)?;
    }
    Ok(acc / CIRCLE_POINTS as f64)
}

/// Taylor coefficients `q*^{(k)}(α)/k!` for `k < n`.
pub fn taylor_coefficients(h: &HElement, alpha: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if near_denominator_root(h, alpha) {
        let r = cauchy_radius(h, alpha);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..CIRCLE_POINTS {
            let u = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / CIRCLE_POINTS as f64);
            let v = eval_direct(h, alpha + u * r)?;
            let mut w = Complex64::new(1.0, 0.0);
            for c in out.iter_mut() {
                *c += v * w;
                w /= u * r;
            }
        }
        for c in out.iter_mut() {
            *c /= CIRCLE_POINTS as f64;
        }
        return Ok(out);
    }
    let (num, den) = h.fraction();
    let mut ns = Vec::with_capacity(n);
    let mut d = num;
    let mut fact = 1.0;
    for k in 0..n {
        if k > 0 {
            fact *= k as f64;
        }
        ns.push(d.eval(alpha)? / fact);
        d = d.derivative();
    }
    let mut ds = Vec::with_capacity(n);
    let mut p = den;
    let mut fact = 1.0;
    for k in 0..n {
        if k > 0 {
            fact *= k as f64;
        }
        ds.push(p.eval_complex(alpha) / fact);
        p = p.derivative();
    }
    // series division ns / ds
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = ns[k];
        for i in 0..k {
            acc -= out[i] * ds[k - i];
        }
        out[k] = acc / ds[0];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;
    use crate::hring::h_normalize;
    use crate::poly::PolyC;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn removable_singularity_value() {
        let num = &ExpPoly::sigma() - &ExpPoly::constant(Q::one());
        let h = h_normalize(&num, &PolyC::z()).unwrap();
        let v = h.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let t = taylor_coefficients(&h, Complex64::new(0.0, 0.0), 3).unwrap();
        assert!((t[1] - Complex64::new(0.5, 0.0)).norm() < 1e-10);
        assert!((t[2] - Complex64::new(1.0 / 6.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn taylor_away_from_poles() {
        let h = HElement::from_exppoly(&ExpPoly::sigma());
        let a = Complex64::new(0.3, -0.2);
        let t = taylor_coefficients(&h, a, 4).unwrap();
        assert!((t[3] - a.exp() / 6.0).norm() < 1e-14);
    }
}
