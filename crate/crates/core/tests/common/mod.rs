//! Shared fixtures and independent numerical oracles for integration tests.
#![allow(dead_code)]

use equilib::constants::{P_STANDARD as PS, R, T_REF};
use equilib::error_model::{ErrorKind, ErrorModel, FugacityEntry, HenryEntry, RaoultEntry, RegimeTag};
use equilib::gibbs::{AffineGibbsModel, ChemicalModel};
use equilib::surface::Surface;

/// A representative model for each regime, with error terms large enough to
/// bend the quotient surface noticeably.
pub fn regime_model(tag: RegimeTag, eps: f64) -> ChemicalModel {
    let kind = match tag {
        RegimeTag::Idealized => ErrorKind::Idealized,
        RegimeTag::IdealRaoult => ErrorKind::IdealRaoult {
            entries: vec![
                RaoultEntry { species: 0, nu: -1.0, molar_volume: 1e-3, p_star: 4e3, p_prime: 1.5e5 },
                RaoultEntry { species: 1, nu: 2.0, molar_volume: 1e-3, p_star: 2e4, p_prime: 0.8e5 },
            ],
        },
        RegimeTag::DiluteSolvated => ErrorKind::DiluteSolvated {
            a0: Surface::custom(|t, p| 0.9 * (-2e-7 * p * (t / 300.0)).exp()),
        },
        RegimeTag::HenryInteracting => ErrorKind::HenryInteracting {
            solvent: RaoultEntry { species: 0, nu: -1.0, molar_volume: 5e-4, p_star: 3e3, p_prime: 1.2e5 },
            solutes: vec![
                HenryEntry { species: 1, nu: -1.0, k: 2.0e5 },
                HenryEntry { species: 2, nu: 1.0, k: 0.5e5 },
            ],
        },
        RegimeTag::FugacityInteracting => ErrorKind::FugacityInteracting {
            solvent_nu: -1.0,
            phi0: Surface::Affine { c0: 50.0, ct: 0.3, cp: 1e-3 },
            solutes: fugacity_solutes(),
        },
        RegimeTag::HenryNoInteraction => ErrorKind::HenryNoInteraction {
            solutes: vec![
                HenryEntry { species: 1, nu: -1.0, k: 3.0e5 },
                HenryEntry { species: 2, nu: 2.0, k: 0.7e5 },
            ],
        },
        RegimeTag::FugacityNoInteraction => ErrorKind::FugacityNoInteraction { solutes: fugacity_solutes() },
    };
    let errors = ErrorModel::new(kind, PS).unwrap();
    let model = AffineGibbsModel::new(-2000.0, eps, 5.0, 0.0, PS).unwrap();
    ChemicalModel::new(model, errors).unwrap()
}

fn fugacity_solutes() -> Vec<FugacityEntry> {
    vec![
        FugacityEntry {
            species: 1,
            nu: -1.0,
            k: 2.5e5,
            gamma: Surface::custom(|t, p| 1.0 + 0.05 * (p / 1e5).sin() + 1e-4 * t),
            delta: Surface::LogAffine { c0: 1.0, ct: 0.0, cp: 0.01 },
        },
        FugacityEntry {
            species: 2,
            nu: 1.0,
            k: 0.6e5,
            gamma: Surface::LogAffine { c0: 0.8, ct: 0.05, cp: 0.0 },
            delta: Surface::custom(|t, p| 1.0 - 1e-7 * p + 2e-5 * (t - 300.0)),
        },
    ]
}

/// Five-point central difference with its own step rule.
pub fn fd<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1e-3);
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Scaled gradient `(T_ref dQ/dT, P° dQ/dP)` by finite differences of Q.
pub fn fd_scaled_grad(cm: &ChemicalModel, t: f64, p: f64) -> (f64, f64) {
    let q = |t: f64, p: f64| cm.quotient(t, p).unwrap();
    (T_REF * fd(|x| q(x, p), t), PS * fd(|y| q(t, y), p))
}

/// Error-term partials in scaled coordinates by finite differences.
pub fn fd_scaled_eps(cm: &ChemicalModel, t: f64, p: f64) -> (f64, f64) {
    let e = |t: f64, p: f64| cm.errors.epsilon(t, p).unwrap();
    (T_REF * fd(|x| e(x, p), t), PS * fd(|y| e(t, y), p))
}

/// Plain recursive adaptive Simpson on a closure, absolute tolerance.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 30)
}

/// Composite 5-point Gauss–Legendre on `panels` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const W: [f64; 5] = [0.568_888_888_888_889, 0.478_628_670_499_366, 0.478_628_670_499_366, 0.236_926_885_056_189, 0.236_926_885_056_189];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let c = a + (k as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(c + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Smallest root of `g` on `[lo, hi]` found by a dense log-spaced scan and
/// bisection.
pub fn smallest_root_log_scan<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, points: usize) -> Option<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut prev = (lo, g(lo));
    for k in 1..=points {
        let x = (a + (b - a) * k as f64 / points as f64).exp();
        let v = g(x);
        if prev.1.is_finite() && v.is_finite() && prev.1.signum() != v.signum() {
            let (mut l, mut r, mut fl) = (prev.0, x, prev.1);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                let fm = g(m);
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
                if r - l <= 1e-15 * r {
                    break;
                }
            }
            return Some(0.5 * (l + r));
        }
        prev = (x, v);
    }
    None
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub const RT_REF: f64 = R * T_REF;
