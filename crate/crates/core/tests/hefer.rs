mod common;

use common::*;
use ddelta::hefer::{hefer_pair_n2, hefer_quotient, pair_identity, quotient_defect, quotient_value, Side, TwoVarExpPoly};
use num_complex::Complex64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_is_exact(q in element(2, 2)) {
        prop_assert!(quotient_defect(&q, &hefer_quotient(&q)).is_zero());
    }

    #[test]
    fn quotient_is_linear(q1 in element(2, 2), q2 in element(2, 2)) {
        let lhs = hefer_quotient(&(&q1 + &q2));
        let rhs = &hefer_quotient(&q1) + &hefer_quotient(&q2);
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn quotient_obeys_leibniz(q1 in element(2, 2), q2 in element(2, 2)) {
        let lhs = hefer_quotient(&(&q1 * &q2));
        let rhs = &(&TwoVarExpPoly::from_h(&q1, Side::Zeta) * &hefer_quotient(&q2))
            + &(&hefer_quotient(&q1) * &TwoVarExpPoly::from_h(&q2, Side::Z));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    /// The pair identity holds symbolically and at random points.
    #[test]
    fn pair_identity_holds(q in element(2, 2), alpha in 0u32..=3, p in prop::collection::vec(point(), 4)) {
        let pair = hefer_pair_n2(&q, alpha);
        prop_assert!(pair_identity(&q, alpha, &pair).holds);
        let (zeta, z) = ([p[0], p[1]], [p[2], p[3]]);
        let lhs = pair.h1.eval(&zeta, &z) * (zeta[0] - z[0]) + pair.h2.eval(&zeta, &z) * (zeta[1] - z[1]);
        let rhs = q.eval(zeta[0]).unwrap() * zeta[1].powu(alpha) - q.eval(z[0]).unwrap() * z[1].powu(alpha);
        let scale = (q.eval(zeta[0]).unwrap() * zeta[1].powu(alpha)).norm()
            + (q.eval(z[0]).unwrap() * z[1].powu(alpha)).norm();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1.0), "{} vs {}", lhs, rhs);
    }

    /// Near and on the diagonal the quotient tends to the derivative of `q*`.
    #[test]
    fn diagonal_value_is_derivative(q in element(2, 2), z in point(), eps in -1e-7f64..1e-7) {
        let p = hefer_quotient(&q);
        let zeta = z + Complex64::new(eps, eps / 2.0);
        let direct = p.eval(&[zeta], &[z]);
        let via_q = quotient_value(&q, zeta, z).unwrap();
        let h = 1e-5;
        let deriv = (q.eval(z + h).unwrap() - q.eval(z - h).unwrap()) / (2.0 * h);
        let scale = deriv.norm().max(q.eval(z).unwrap().norm()).max(1.0);
        prop_assert!((direct - via_q).norm() <= 1e-8 * scale);
        prop_assert!((direct - deriv).norm() <= 1e-5 * scale, "{} vs {}", direct, deriv);
    }
}
