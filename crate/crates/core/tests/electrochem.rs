mod common;

use common::regime_model;
use equilib::constants::{F, P_STANDARD as PS, R};
use equilib::electrochem::{
    model_potential_offset, nernst_potential, steering_schedule, CellSpec, Measurement, SteeringOptions,
};
use equilib::error_model::RegimeTag;
use equilib::path::{trace_dynamic_equilibrium, LevelOptions};
use equilib::surface::Curve;
use equilib::Error;

fn cell(tag: RegimeTag) -> CellSpec {
    CellSpec::new(2, regime_model(tag, 3000.0), Curve::Affine { c0: 0.4, c1: 2e-4 }).unwrap()
}

#[test]
fn idealized_nernst_potential_follows_pressure() {
    let c = cell(RegimeTag::Idealized);
    for (t, p) in [(300.0, 2e5), (350.0, 0.5e5)] {
        let expect = -3000.0 * (p / PS).ln() / (2.0 * F);
        assert!((nernst_potential(&c, t, p).unwrap() - expect).abs() <= 1e-15);
    }
}

#[test]
fn nernst_potential_includes_error_terms() {
    let c = cell(RegimeTag::HenryInteracting);
    let (t, p) = (310.0, 1.7e5);
    let cm = &c.chem;
    let expect = -(R * t * cm.ln_quotient(t, p).unwrap() + cm.errors.epsilon(t, p).unwrap()) / (2.0 * F);
    assert!((nernst_potential(&c, t, p).unwrap() - expect).abs() <= 1e-14);
}

#[test]
fn model_potential_offset_vanishes_for_the_nominal_model() {
    for tag in RegimeTag::ALL {
        let c = cell(tag);
        assert!(model_potential_offset(&c, 305.0, 2.5e5).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn calibration_recovers_the_pressure_coefficient() {
    let c = cell(RegimeTag::HenryInteracting);
    let level = c.chem.quotient(300.0, 2e5).unwrap();
    let curve = trace_dynamic_equilibrium(&c.chem, level, &LevelOptions::new(280.0, 330.0, 11, PS)).unwrap();
    let eps_true = 2700.0;
    let meas: Vec<Measurement> = curve
        .points
        .iter()
        .map(|pt| {
            let (t, p) = (pt.temperature, pt.pressure);
            let y = eps_true * (p / PS).ln();
            let excess = R * t * c.chem.ln_quotient(t, p).unwrap() + c.chem.errors.epsilon(t, p).unwrap();
            Measurement { t, p, e: c.e_standard.eval(t).unwrap() + (y - excess) / (2.0 * F) }
        })
        .collect();
    let mut opts = SteeringOptions::default();
    opts.trace.max_steps = 20;
    let s = steering_schedule(&c, &meas, (300.0, 2e5), &opts).unwrap();
    assert!((s.eps_calibrated - eps_true).abs() <= 1e-9 * eps_true);
    assert!(s.points.iter().all(|p| p.in_region));
}

#[test]
fn measurements_at_standard_pressure_cannot_calibrate() {
    let c = cell(RegimeTag::Idealized);
    let meas = [Measurement { t: 300.0, p: PS, e: 0.46 }, Measurement { t: 320.0, p: PS, e: 0.46 }];
    let r = steering_schedule(&c, &meas, (300.0, 2e5), &SteeringOptions::default());
    assert!(matches!(r, Err(Error::Calibration(_))));
}

#[test]
fn off_curve_measurements_are_rejected() {
    let c = cell(RegimeTag::Idealized);
    let meas = [Measurement { t: 300.0, p: 2e5, e: 0.46 }, Measurement { t: 300.0, p: 3e5, e: 0.46 }];
    let r = steering_schedule(&c, &meas, (300.0, 2e5), &SteeringOptions::default());
    assert!(matches!(r, Err(Error::Calibration(_))));
}

#[test]
fn zero_electrons_are_rejected() {
    assert!(CellSpec::new(0, regime_model(RegimeTag::Idealized, 1.0), Curve::constant(0.1)).is_err());
}
