mod common;

use common::*;
use ddelta::charzeros::{vanishing_order, Rect};
use ddelta::synthesis::{
    apply_op, pairing, pairing_adjoint_check, solution_basis_single, ExpSolution, FormalSeries, Mode, DEFAULT_RESIDUAL,
};
use ddelta::{Error, HElement};
use num_complex::Complex64;
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn solution() -> impl Strategy<Value = ExpSolution> {
    prop::collection::vec((c64(), prop::collection::vec(c64(), 1..=3)), 1..=2)
        .prop_map(|ms| ExpSolution::from_modes(ms.into_iter().map(|(a, p)| Mode::new(a, p)).collect()))
}

fn close(a: &ExpSolution, b: &ExpSolution) -> bool {
    let diff = a.add(&b.scale(Complex64::new(-1.0, 0.0)));
    let scale = a.sup_norm(0.0, 1.0, 64).max(b.sup_norm(0.0, 1.0, 64)).max(1.0);
    diff.sup_norm(0.0, 1.0, 64) <= 1e-10 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn apply_op_is_linear(q in element(2, 2), u in solution(), v in solution(), c in c64()) {
        let lhs = apply_op(&q, &u.scale(c).add(&v)).unwrap();
        let rhs = apply_op(&q, &u).unwrap().scale(c).add(&apply_op(&q, &v).unwrap());
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn apply_op_composes(q1 in element(1, 2), q2 in element(1, 2), u in solution()) {
        let lhs = apply_op(&(&q1 * &q2), &u).unwrap();
        let rhs = apply_op(&q1, &apply_op(&q2, &u).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    /// `q·e^{αx} = q*(α)e^{αx}`.
    #[test]
    fn exponentials_are_eigenfunctions(q in element(2, 2), alpha in c64()) {
        let out = apply_op(&q, &ExpSolution::monomial(alpha, 0)).unwrap();
        let want = q.eval(alpha).unwrap();
        prop_assert!((out.eval(0.0) - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn pairing_adjoints_hold(p in poly(6), cs in prop::collection::vec(scalar(), 0..=10), extra in 1usize..=4) {
        let order = p.deg() + extra;
        let f = FormalSeries::new(cs.into_iter().take(order).collect(), order);
        let r = pairing_adjoint_check(&p, &f).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn short_truncation_is_refused(p in poly(6).prop_filter("deg ≥ 1", |p| p.deg() >= 1)) {
        let f = FormalSeries::new(vec![], p.deg());
        prop_assert!(
            matches!(pairing(&p, &f), Err(Error::TruncationTooShort { .. })),
            "truncation order {} accepted for degree {}", p.deg(), p.deg()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Every basis function is annihilated, and `x^j e^{αx}` appears exactly
    /// for `j` below the vanishing order of `q*` at `α`.
    #[test]
    fn basis_matches_vanishing_orders(e in nonzero_exppoly(0, 2, 1)) {
        let q = HElement::from_exppoly(&e);
        let rect = Rect::new(-1.3, 1.1, -4.1, 4.3).unwrap();
        let basis = match solution_basis_single(&q, &rect, 1e-9, DEFAULT_RESIDUAL) {
            Ok(b) => b,
            Err(Error::BoundaryZero { .. }) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        for u in &basis {
            let r = apply_op(&q, u).unwrap().sup_norm(0.0, 1.0, 257);
            prop_assert!(r < 1e-6, "residual {}", r);
            let mode = &u.modes[0];
            let j = mode.poly.len() - 1;
            let m = vanishing_order(&q, mode.alpha, 1e-9).unwrap();
            prop_assert!((j as u32) < m);
            if j + 1 == m as usize {
                let next = ExpSolution::monomial(mode.alpha, m as usize);
                prop_assert!(apply_op(&q, &next).unwrap().sup_norm(0.0, 1.0, 65) > 1e-6);
            }
        }
    }
}
