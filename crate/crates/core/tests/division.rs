mod common;

use common::*;
use ddelta::division::{hermite_interpolate, ideal_member, jet_of, JetSpec};
use ddelta::{Error, GaussianRational as Q};
use num_complex::Complex64;
use proptest::prelude::*;

fn distinct<T: PartialEq + Clone>(xs: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_jets_reproduce(nodes in prop::collection::vec((scalar(), prop::collection::vec(scalar(), 1..=3)), 1..=4)) {
        let mut seen = Vec::new();
        let nodes: Vec<(Q, Vec<Q>)> = nodes.into_iter().filter(|(a, _)| {
            let fresh = !seen.contains(a);
            seen.push(a.clone());
            fresh
        }).collect();
        let spec = JetSpec { nodes };
        let p = hermite_interpolate(&spec).unwrap();
        let total: usize = spec.nodes.iter().map(|(_, j)| j.len()).sum();
        prop_assert!(p.len() <= total.max(1));
        for (a, jet) in &spec.nodes {
            prop_assert_eq!(&jet_of(&p, a, jet.len()), jet);
        }
    }

    #[test]
    fn float_jets_reproduce(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=4),
        vals in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        m in 1usize..=3,
    ) {
        let pts = distinct(pts.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
        prop_assume!(pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| (a - b).norm() > 0.2)));
        let mut v = vals.into_iter().map(|(a, b)| Complex64::new(a, b));
        let spec = JetSpec { nodes: pts.iter().map(|a| (*a, (0..m).map(|_| v.next().unwrap()).collect())).collect() };
        let p = hermite_interpolate(&spec).unwrap();
        for (a, jet) in &spec.nodes {
            for (got, want) in jet_of(&p, a, m).iter().zip(jet) {
                prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()) * 1e3, "{} vs {}", got, want);
            }
        }
    }

    #[test]
    fn repeated_node_is_refused(a in scalar(), x in scalar(), y in scalar()) {
        let spec = JetSpec { nodes: vec![(a.clone(), vec![x]), (a, vec![y])] };
        prop_assert!(matches!(hermite_interpolate(&spec), Err(Error::DuplicateNode(1))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Positive answers replay exactly, and adding a generator keeps them.
    #[test]
    fn membership_replays_and_is_monotone(
        h_part in element(1, 1),
        gens in prop::collection::vec(element(1, 1), 1..=2),
        extra in element(1, 1),
        in_ideal in any::<bool>(),
    ) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let h = if in_ideal { &h_part * &gens[0] } else { h_part };
        let r = match ideal_member(&h, &gens) {
            Ok(r) => r,
            Err(Error::NoRationalBezout(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        if in_ideal {
            prop_assert!(r.member);
        }
        if r.member {
            prop_assert!(r.verify(&h, &gens));
            let mut more = gens.clone();
            more.push(extra);
            match ideal_member(&h, &more) {
                Ok(r2) => {
                    prop_assert!(r2.member);
                    prop_assert!(r2.verify(&h, &more));
                }
                Err(Error::NoRationalBezout(_)) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

/// Membership is decided only for commensurate lags: a shift by a
/// non-integer multiple of the unit cannot even be written down.
#[test]
fn incommensurate_lags_are_refused() {
    for text in ["s^0.5 - 1", "s^(1/2)", "z + s^1.5"] {
        assert!(matches!(ddelta::parse::parse_element(text), Err(Error::Syntax { .. })), "{text}");
    }
}
