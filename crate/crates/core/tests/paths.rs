mod common;

use common::regime_model;
use equilib::constants::P_STANDARD as PS;
use equilib::error_model::{ErrorModel, RegimeTag};
use equilib::gibbs::{AffineGibbsModel, ChemicalModel};
use equilib::path::{
    implicit_invariant, trace_dynamic_equilibrium, trace_maximal_reaction, trace_quasi_equilibrium,
    verify_dynamic_equilibrium, LevelOptions, QuasiCurve, StopReason, TraceOptions,
};
use equilib::Error;

fn pressure_free_model() -> ChemicalModel {
    let m = AffineGibbsModel::new(-3000.0, 0.0, 10.0, 0.0, PS).unwrap();
    ChemicalModel::new(m, ErrorModel::idealized(PS)).unwrap()
}

#[test]
fn pressure_free_quotient_has_no_dynamic_curve() {
    let r = trace_dynamic_equilibrium(&pressure_free_model(), 2.0, &LevelOptions::new(280.0, 320.0, 5, PS));
    assert!(matches!(r, Err(Error::DegenerateModel(_))));
}

#[test]
fn pressure_free_quasi_curve_is_vertical() {
    let QuasiCurve::Vertical { temperatures } =
        trace_quasi_equilibrium(&pressure_free_model(), 0.0, &LevelOptions::new(280.0, 320.0, 5, PS)).unwrap()
    else {
        panic!("expected vertical lines");
    };
    assert_eq!(temperatures.len(), 1);
    assert!((temperatures[0] - 300.0).abs() < 1e-9);
}

#[test]
fn starting_outside_the_region_is_an_error() {
    let cm = regime_model(RegimeTag::Idealized, 10.0);
    let r = trace_maximal_reaction(&cm, (300.0, 1e5), &TraceOptions::default());
    assert!(matches!(r, Err(Error::Region { .. })));
}

#[test]
fn descending_path_leaves_the_region() {
    let cm = regime_model(RegimeTag::Idealized, 3000.0);
    let path = trace_maximal_reaction(&cm, (300.0, 3e5), &TraceOptions { direction: -1.0, ..Default::default() }).unwrap();
    assert_eq!(path.stop_reason, StopReason::RegionExit);
    assert!(path.points.iter().all(|p| p.grad_norm >= 1.0));
    assert!(path.points.windows(2).all(|w| w[1].quotient < w[0].quotient));
}

#[test]
fn separable_regimes_conserve_their_invariant() {
    for tag in [RegimeTag::Idealized, RegimeTag::IdealRaoult, RegimeTag::HenryInteracting, RegimeTag::HenryNoInteraction] {
        let cm = regime_model(tag, 8000.0);
        let path = trace_maximal_reaction(&cm, (320.0, 2e5), &TraceOptions { step: 5e-3, max_steps: 80, direction: 1.0 })
            .unwrap();
        let i0 = path.points[0].invariant.unwrap();
        for p in &path.points {
            let i = p.invariant.unwrap();
            assert!((i - i0).abs() <= 1e-8 * i0.abs().max(1.0), "{tag:?}: {i} vs {i0}");
        }
    }
}

#[test]
fn non_separable_regimes_have_no_invariant() {
    for tag in [RegimeTag::DiluteSolvated, RegimeTag::FugacityInteracting, RegimeTag::FugacityNoInteraction] {
        let cm = regime_model(tag, 3000.0);
        assert!(matches!(implicit_invariant(&cm, 300.0, 2e5), Err(Error::NotSeparable(_))));
    }
}

#[test]
fn unattainable_levels_are_skipped() {
    let cm = regime_model(RegimeTag::HenryInteracting, 3000.0);
    let mut opts = LevelOptions::new(280.0, 320.0, 5, PS);
    opts.p_min = 0.9e5;
    opts.p_max = 1.1e5;
    let path = trace_dynamic_equilibrium(&cm, 1e12, &opts).unwrap();
    assert!(path.points.is_empty());
    assert_eq!(path.skipped.len(), 5);
}

#[test]
fn constant_amounts_are_dynamic() {
    let amounts = vec![vec![1.0, 2.0]; 4];
    let check = verify_dynamic_equilibrium(&amounts, &[0.5; 4], 0.0);
    assert!(check.is_dynamic);
    let moved = verify_dynamic_equilibrium(&[vec![1.0, 2.0], vec![1.1, 1.9]], &[0.5, 0.6], 1e-12);
    assert!(!moved.is_dynamic);
    assert!((moved.max_dn - 0.1).abs() < 1e-12);
}
