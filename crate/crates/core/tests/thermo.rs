use approx::assert_relative_eq;
use proptest::prelude::*;

use equilib::thermo::{
    activity_quotient, apply_extent, extent_from_fractions, extent_interval, kernel_feasibility, mole_fractions,
    FeasibilityMatrix, MixtureState, ReactionSystem,
};
use equilib::Error;

fn nonzero_nu() -> impl Strategy<Value = f64> {
    prop_oneof![-3i32..=-1, 1i32..=3].prop_map(f64::from)
}

proptest! {
    #[test]
    fn quotient_is_product_of_fraction_powers(
        nu in prop::collection::vec(nonzero_nu(), 2..5),
        seed in prop::collection::vec(0.1f64..5.0, 5),
    ) {
        let n: Vec<f64> = seed[..nu.len()].to_vec();
        let sys = ReactionSystem::simple(&nu).unwrap();
        let total: f64 = n.iter().sum();
        let expect: f64 = n.iter().zip(&nu).map(|(x, v)| (x / total).powf(*v)).product();
        let q = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n)).unwrap();
        prop_assert!((q - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn extent_round_trips_through_fractions(
        nu in prop::collection::vec(nonzero_nu(), 2..5),
        seed in prop::collection::vec(0.2f64..4.0, 5),
        u in 0.05f64..0.95,
    ) {
        let n0: Vec<f64> = seed[..nu.len()].to_vec();
        let sys = ReactionSystem::simple(&nu).unwrap();
        let (lo, hi) = extent_interval(&sys, &n0).unwrap();
        let (lo, hi) = (lo.max(-10.0), hi.min(10.0));
        let xi = lo + (hi - lo) * u;
        let state = apply_extent(&sys, &MixtureState::new(300.0, 1e5, n0.clone()), xi).unwrap();
        let f = mole_fractions(&state).unwrap();
        match extent_from_fractions(&sys, &n0, &f) {
            Ok(est) => prop_assert!((est.xi - xi).abs() <= 1e-9 * (1.0 + xi.abs())),
            // Fractions cannot identify the extent when every denominator vanishes.
            Err(Error::SingularDenominator(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn quotient_along_extent_matches_product_form(
        nu in prop::collection::vec(nonzero_nu(), 2..5),
        seed in prop::collection::vec(0.2f64..4.0, 5),
        u in 0.05f64..0.95,
    ) {
        let n0: Vec<f64> = seed[..nu.len()].to_vec();
        let sys = ReactionSystem::simple(&nu).unwrap();
        let (lo, hi) = extent_interval(&sys, &n0).unwrap();
        let (lo, hi) = (lo.max(-10.0), hi.min(10.0));
        let xi = lo + (hi - lo) * u;
        let state = apply_extent(&sys, &MixtureState::new(300.0, 1e5, n0.clone()), xi).unwrap();
        let q = activity_quotient(&sys, &state).unwrap();
        // The total grows by (sum nu) xi, and the denominator carries the
        // exponent sum rather than the species count.
        let kappa: f64 = nu.iter().sum();
        let total: f64 = n0.iter().sum::<f64>() + kappa * xi;
        let num: f64 = n0.iter().zip(&nu).map(|(n, v)| (v * xi + n).powf(*v)).product();
        let g = num / total.powf(kappa);
        prop_assert!((q - g).abs() <= 1e-10 * g);
    }

    #[test]
    fn positive_fractions_are_kernel_feasible(raw in prop::collection::vec(0.05f64..1.0, 2..6)) {
        let s: f64 = raw.iter().sum();
        let f: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let report = kernel_feasibility(&FeasibilityMatrix::new(&f).unwrap());
        prop_assert!(report.feasible);
        let w = report.witness.unwrap();
        for (a, b) in w.iter().zip(&f) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn extent_interval_endpoints_exhaust_a_species() {
    let sys = ReactionSystem::simple(&[-1.0, -2.0, 1.0]).unwrap();
    let n0 = [1.0, 3.0, 0.5];
    let (lo, hi) = extent_interval(&sys, &n0).unwrap();
    assert_relative_eq!(lo, -0.5);
    assert_relative_eq!(hi, 1.0);
    let state = MixtureState::new(300.0, 1e5, n0.to_vec());
    assert!(matches!(apply_extent(&sys, &state, hi), Err(Error::ExtentOutOfRange { .. })));
}

#[test]
fn zero_amount_is_degenerate() {
    let sys = ReactionSystem::simple(&[-1.0, 1.0]).unwrap();
    let r = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, vec![0.0, 1.0]));
    assert!(matches!(r, Err(Error::DegenerateState(_))));
}

#[test]
fn inconsistent_fractions_are_rejected() {
    // A <-> B conserves the total, so fractions summing to 1 are always
    // consistent; A <-> 2B with an impossible split is not.
    let sys = ReactionSystem::simple(&[-1.0, 2.0, 1.0]).unwrap();
    let r = extent_from_fractions(&sys, &[1.0, 1.0, 1.0], &[0.1, 0.1, 0.8]);
    assert!(matches!(r, Err(Error::InconsistentTarget { .. })));
}
