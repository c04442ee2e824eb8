mod common;

use common::*;
use ddelta::exppoly::{laurent_divmod, ExpPoly, RatExpPoly};
use ddelta::hring::is_entire;
use ddelta::hring::{h_bezout, h_divides, h_gcd};
use ddelta::parse::parse_element;
use ddelta::{Error, HElement, PolyC};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid_point() -> impl Strategy<Value = Complex64> {
    (-4i32..=4, -4i32..=4).prop_map(|(a, b)| Complex64::new(a as f64 * 0.45, b as f64 * 0.55))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exppoly_ring_axioms(a in exppoly(-1, 2, 2), b in exppoly(-1, 2, 2), c in exppoly(-1, 2, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_matches_central_difference(a in exppoly(-1, 2, 3), z in grid_point()) {
        let h = 1e-5;
        let d = a.derivative().eval(z).unwrap();
        let fd = (a.eval(z + h).unwrap() - a.eval(z - h).unwrap()) / (2.0 * h);
        let scale = d.norm().max(a.eval(z).unwrap().norm()).max(1.0);
        prop_assert!((d - fd).norm() <= 1e-6 * scale, "{} vs {}", d, fd);
    }

    #[test]
    fn eval_is_multiplicative(a in exppoly(-1, 2, 2), b in exppoly(-1, 2, 2), z in grid_point()) {
        let lhs = (&a * &b).eval(z).unwrap();
        let rhs = a.eval(z).unwrap() * b.eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn laurent_divmod_identity(a in exppoly(-1, 3, 2), b in nonzero_exppoly(-1, 2, 2)) {
        let (q, r) = laurent_divmod(&a, &b).unwrap();
        let back = &(&q * &RatExpPoly::from(&b)) + &r;
        let (n, d) = back.clear_denominators();
        prop_assert_eq!(n, a.mul_poly(&d));
    }

    /// Accepted quotients stay bounded on shrinking circles around 0; refused
    /// ones blow up at the rate of the missing vanishing order.
    #[test]
    fn entirety_matches_numerical_oracle(a in nonzero_exppoly(0, 2, 2), m in 1u32..=3) {
        let den = PolyC::z().pow(m);
        let order = a.order_at_zero();
        let sup = |r: f64| (0..16).map(|k| {
            let z = Complex64::from_polar(r, 0.3 + k as f64 * std::f64::consts::TAU / 16.0);
            (a.eval(z).unwrap() / den.eval_complex(z)).norm()
        }).fold(0.0, f64::max);
        let radii = [1e-2, 1e-3, 1e-4];
        let s: Vec<f64> = radii.iter().map(|&r| sup(r)).collect();
        match is_entire(&a, &den) {
            Ok(_) => {
                prop_assert!(order >= m);
                prop_assert!(s[1] <= 10.0 * s[0].max(1e-300) && s[2] <= 10.0 * s[1].max(1e-300));
            }
            Err(Error::NotEntire(_)) => {
                prop_assert!(order < m);
                let growth = 10f64.powi((m - order) as i32);
                prop_assert!(s[1] >= growth / 10.0 * s[0] && s[2] >= growth / 10.0 * s[1], "{:?}", s);
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn print_parse_round_trip(h in element(2, 2)) {
        let text = h.to_expr_string();
        let back = parse_element(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.to_expr_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn divides_replays(a in element(2, 1), x in element(1, 1)) {
        prop_assume!(!a.is_zero());
        let b = &a * &x;
        let quo = h_divides(&a, &b).unwrap();
        prop_assert_eq!(&quo * &a, b);
    }

    #[test]
    fn gcd_divides_and_cofactors_coprime(a in element(2, 1), b in element(2, 1)) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = h_gcd(&a, &b).unwrap();
        let ca = h_divides(&g, &a).unwrap();
        let cb = h_divides(&g, &b).unwrap();
        prop_assert!(h_gcd(&ca, &cb).unwrap().is_unit());
        prop_assert!(h_gcd(&b, &a).unwrap().eq_up_to_unit(&g));
    }

    #[test]
    fn gcd_is_associative(a in element(1, 1), b in element(1, 1), c in element(1, 1)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let l = h_gcd(&h_gcd(&a, &b).unwrap(), &c).unwrap();
        let r = h_gcd(&a, &h_gcd(&b, &c).unwrap()).unwrap();
        prop_assert!(l.eq_up_to_unit(&r), "{} vs {}", l, r);
    }

    #[test]
    fn common_divisor_divides_gcd(d in element(1, 1), x in element(1, 1), y in element(1, 1)) {
        prop_assume!(!d.is_zero() && !(x.is_zero() && y.is_zero()));
        let (a, b) = (&d * &x, &d * &y);
        let g = h_gcd(&a, &b).unwrap();
        prop_assert!(h_divides(&d, &g).is_ok());
    }

    /// Random pairs either get an exact identity or an explicit refusal.
    #[test]
    fn bezout_exact_or_refused(a in element(2, 1), b in element(2, 1)) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        match h_bezout(&a, &b) {
            Ok(t) => {
                let defect = &(&(&t.u * &a) + &(&t.v * &b)) - &t.g;
                prop_assert!(defect.is_zero());
                prop_assert!(t.g.eq_up_to_unit(&h_gcd(&a, &b).unwrap()));
            }
            Err(Error::NoRationalBezout(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn bezout_on_unimodular_rows(g in nonzero_exppoly(0, 1, 1), r1 in exppoly(0, 1, 1), r2 in exppoly(0, 1, 1)) {
        // (A, B) = (1, 0)·[[1, r1], [0, 1]]·[[1, 0], [r2, 1]]
        let one = ExpPoly::one();
        let big_a = &one + &(&r1 * &r2);
        let big_b = r1.clone();
        let g = HElement::from_exppoly(&g);
        let a = &g * &HElement::from_exppoly(&big_a);
        let b = &g * &HElement::from_exppoly(&big_b);
        let t = h_bezout(&a, &b).unwrap();
        prop_assert!(t.verify(&a, &b));
        prop_assert!(t.g.eq_up_to_unit(&g));
    }
}
