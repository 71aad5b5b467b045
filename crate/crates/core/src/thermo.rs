//! Stoichiometry, composition, activity quotients and reaction extent.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::constants::P_STANDARD;
use crate::error::{Error, Result};
use crate::numeric::linalg;
use crate::surface::Curve;

/// How the solvent (species 0) takes part in the reaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolventMode {
    /// No solvent entry; every species reacts.
    None,
    /// Solvent present at a fixed amount with zero stoichiometry.
    NoInteraction,
    /// Solvent takes part in the reaction with its own coefficient.
    Interacting,
}

/// Which activities enter the reported quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientConvention {
    /// Product over the reacting species only.
    QPlain,
    /// Plain quotient multiplied by the solvent activity.
    QWithA0,
    /// Product over the solutes, excluding the solvent.
    W,
    /// Product including the solvent activity.
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    pub nu: f64,
    /// kg/mol
    pub molar_mass: f64,
    /// m³/mol
    pub molar_volume: Option<f64>,
    /// Pa
    pub henry_constant: Option<f64>,
    /// J/(kg K)
    pub heat_capacity: Option<Curve>,
}

impl Species {
    pub fn new(name: impl Into<String>, nu: f64, molar_mass: f64) -> Self {
        Species {
            name: name.into(),
            nu,
            molar_mass,
            molar_volume: None,
            henry_constant: None,
            heat_capacity: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionSystem {
    species: Vec<Species>,
    solvent_mode: SolventMode,
    convention: QuotientConvention,
    p_standard: f64,
}

impl ReactionSystem {
    /// Validates the species list against the solvent mode and convention.
    /// When a solvent is present it must be the first species.
    pub fn new(
        species: Vec<Species>,
        solvent_mode: SolventMode,
        convention: QuotientConvention,
        p_standard: f64,
    ) -> Result<Self> {
        if !(p_standard > 0.0 && p_standard.is_finite()) {
            return Err(Error::Config(format!("p_standard must be positive, got {p_standard}")));
        }
        let has_solvent = solvent_mode != SolventMode::None;
        let solutes = species.len() - usize::from(has_solvent && !species.is_empty());
        if species.is_empty() || solutes < 2 {
            return Err(Error::Config("at least two non-solvent species are required".into()));
        }
        for s in &species {
            if !(s.molar_mass > 0.0) {
                return Err(Error::Config(format!("species {}: molar_mass must be positive", s.name)));
            }
            if let Some(k) = s.henry_constant {
                if !(k > 0.0) {
                    return Err(Error::Config(format!("species {}: henry_constant must be positive", s.name)));
                }
            }
            if !s.nu.is_finite() {
                return Err(Error::Config(format!("species {}: nu must be finite", s.name)));
            }
        }
        let start = usize::from(has_solvent);
        if let Some(s) = species[start..].iter().find(|s| s.nu == 0.0) {
            return Err(Error::Config(format!("species {}: nu must be nonzero", s.name)));
        }
        match solvent_mode {
            SolventMode::None => {
                if convention != QuotientConvention::QPlain {
                    return Err(Error::Config(
                        "conventions other than q_plain need a solvent entry".into(),
                    ));
                }
            }
            SolventMode::NoInteraction => {
                if species[0].nu != 0.0 {
                    return Err(Error::Config(
                        "solvent nu must be zero when it does not interact".into(),
                    ));
                }
            }
            SolventMode::Interacting => {
                if species[0].nu == 0.0 {
                    return Err(Error::Config("interacting solvent needs a nonzero nu".into()));
                }
                if !matches!(convention, QuotientConvention::QPlain | QuotientConvention::Z) {
                    return Err(Error::Config(
                        "interacting solvent supports only the q_plain and z conventions".into(),
                    ));
                }
            }
        }
        Ok(ReactionSystem { species, solvent_mode, convention, p_standard })
    }

    /// Convenience constructor for solvent-free systems at the default P°.
    pub fn simple(nu: &[f64]) -> Result<Self> {
        let species = nu
            .iter()
            .enumerate()
            .map(|(i, &v)| Species::new(format!("S{}", i + 1), v, 0.01))
            .collect();
        Self::new(species, SolventMode::None, QuotientConvention::QPlain, P_STANDARD)
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }

    pub fn solvent_mode(&self) -> SolventMode {
        self.solvent_mode
    }

    pub fn convention(&self) -> QuotientConvention {
        self.convention
    }

    pub fn p_standard(&self) -> f64 {
        self.p_standard
    }

    pub fn has_solvent(&self) -> bool {
        self.solvent_mode != SolventMode::None
    }

    pub fn nu(&self) -> Vec<f64> {
        self.species.iter().map(|s| s.nu).collect()
    }

    /// Sum of all stoichiometric coefficients (the change in total amount
    /// per unit extent).
    pub fn nu_total(&self) -> f64 {
        self.species.iter().map(|s| s.nu).sum()
    }

    /// Power to which each mole fraction is raised in the quotient.
    pub fn exponents(&self) -> Vec<f64> {
        let mut e = self.nu();
        match (self.solvent_mode, self.convention) {
            (SolventMode::None, _) | (SolventMode::Interacting, _) => {}
            (SolventMode::NoInteraction, QuotientConvention::QPlain | QuotientConvention::W) => {
                e[0] = 0.0
            }
            (SolventMode::NoInteraction, _) => e[0] = 1.0,
        }
        e
    }
}

/// A point in state space.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    /// K
    pub t: f64,
    /// Pa
    pub p: f64,
    /// mol, indexed like the system's species
    pub n: Vec<f64>,
}

impl MixtureState {
    pub fn new(t: f64, p: f64, n: Vec<f64>) -> Self {
        MixtureState { t, p, n }
    }
}

fn check_amounts(n: &[f64]) -> Result<f64> {
    if let Some((i, v)) = n.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::DegenerateState(format!("amount n[{i}] = {v} is not positive")));
    }
    let total: f64 = n.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateState(format!("total amount {total} is not positive")));
    }
    Ok(total)
}

pub fn mole_fractions(state: &MixtureState) -> Result<Vec<f64>> {
    let total = check_amounts(&state.n)?;
    Ok(state.n.iter().map(|v| v / total).collect())
}

/// Quotient of mole-fraction activities under the system's convention.
pub fn activity_quotient(system: &ReactionSystem, state: &MixtureState) -> Result<f64> {
    if state.n.len() != system.len() {
        return Err(Error::Config(format!(
            "state has {} amounts but the system has {} species",
            state.n.len(),
            system.len()
        )));
    }
    let x = mole_fractions(state)?;
    let ln_q: f64 = x.iter().zip(system.exponents()).map(|(xi, e)| e * xi.ln()).sum();
    Ok(ln_q.exp())
}

/// Advances every amount by `nu * xi`. A non-interacting solvent has zero
/// stoichiometry and so stays fixed.
pub fn apply_extent(system: &ReactionSystem, initial: &MixtureState, xi: f64) -> Result<MixtureState> {
    let (lo, hi) = extent_interval(system, &initial.n)?;
    if !(xi > lo && xi < hi) {
        return Err(Error::ExtentOutOfRange { xi, lo, hi });
    }
    let n = initial.n.iter().zip(system.nu()).map(|(n0, nu)| n0 + nu * xi).collect();
    Ok(MixtureState { t: initial.t, p: initial.p, n })
}

/// Open interval of extents keeping every amount positive.
pub fn extent_interval(system: &ReactionSystem, n0: &[f64]) -> Result<(f64, f64)> {
    if n0.len() != system.len() {
        return Err(Error::Config("amount vector length does not match the system".into()));
    }
    check_amounts(n0)?;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (n, nu) in n0.iter().zip(system.nu()) {
        if nu > 0.0 {
            lo = lo.max(-n / nu);
        } else if nu < 0.0 {
            hi = hi.min(-n / nu);
        }
    }
    Ok((lo, hi))
}

/// Extent recovered from target mole fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtentEstimate {
    pub xi: f64,
    /// Species whose formula produced `xi`.
    pub primary: usize,
    /// Largest mismatch `|n_i0 + nu_i xi - f_i (N0 + kappa xi)| / N0`.
    pub max_discrepancy: f64,
}

/// Solves `n_i0 + nu_i xi = f_i (N0 + kappa xi)` for the extent, with
/// `kappa = sum nu`, and checks that every species agrees.
pub fn extent_from_fractions(
    system: &ReactionSystem,
    initial: &[f64],
    f: &[f64],
) -> Result<ExtentEstimate> {
    if f.len() != system.len() || initial.len() != system.len() {
        return Err(Error::Config("fraction vector length does not match the system".into()));
    }
    let n_total = check_amounts(initial)?;
    let f_sum: f64 = f.iter().sum();
    if (f_sum - 1.0).abs() > 1e-9 || f.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Config(format!("target fractions must be non-negative and sum to 1, got {f_sum}")));
    }
    let kappa = system.nu_total();
    let nu = system.nu();
    let den: Vec<f64> = f.iter().zip(&nu).map(|(fi, v)| kappa * fi - v).collect();
    let scale = nu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (primary, dmax) = den
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, d)| if d.abs() > acc.1 { (i, d.abs()) } else { acc });
    if dmax <= 1e-12 * scale {
        return Err(Error::SingularDenominator(
            "kappa*f_i - nu_i vanishes for every species".into(),
        ));
    }
    let xi = (initial[primary] - n_total * f[primary]) / den[primary];
    let total = n_total + kappa * xi;
    let max_discrepancy = (0..f.len())
        .map(|i| (initial[i] + nu[i] * xi - f[i] * total).abs() / n_total)
        .fold(0.0, f64::max);
    if max_discrepancy > 1e-9 {
        return Err(Error::InconsistentTarget { discrepancy: max_discrepancy });
    }
    Ok(ExtentEstimate { xi, primary, max_discrepancy })
}

/// Matrix whose kernel encodes `n_i = f_i * sum_j n_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityMatrix {
    f: Vec<f64>,
    m: DMatrix<f64>,
}

impl FeasibilityMatrix {
    pub fn new(f: &[f64]) -> Result<Self> {
        if f.len() < 2 {
            return Err(Error::Config("feasibility matrix needs at least two fractions".into()));
        }
        if let Some(v) = f.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(Error::Config(format!("fraction {v} is outside (0, 1)")));
        }
        let c = f.len();
        let m = DMatrix::from_fn(c, c, |i, j| if i == j { f[i] - 1.0 } else { f[i] });
        Ok(FeasibilityMatrix { f: f.to_vec(), m })
    }

    /// Builds the matrix from chemical-potential offsets,
    /// `f_i = exp((mu_i - mu_i°) / (R T0))`.
    pub fn from_potentials(mu_minus_mu0: &[f64], t0: f64) -> Result<Self> {
        let rt = crate::constants::R * t0;
        let f: Vec<f64> = mu_minus_mu0.iter().map(|d| (d / rt).exp()).collect();
        Self::new(&f)
    }

    pub fn fractions(&self) -> &[f64] {
        &self.f
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Strictly positive kernel vector normalized to sum 1.
    pub witness: Option<Vec<f64>>,
    pub kernel_dim: usize,
}

const KERNEL_TOL: f64 = 1e-10;

pub fn kernel_feasibility(fm: &FeasibilityMatrix) -> FeasibilityReport {
    let basis = linalg::nullspace(&fm.m, KERNEL_TOL);
    let kernel_dim = basis.len();
    if kernel_dim > 0 && kernel_dim < fm.f.len() {
        log::debug!("feasibility matrix is rank deficient: kernel dimension {kernel_dim}");
    }
    let witness = positive_combination(&basis);
    FeasibilityReport { feasible: witness.is_some(), witness, kernel_dim }
}

/// Finds a strictly positive vector in the span of `basis`, normalized to
/// sum 1, or `None` if the span meets the open positive orthant nowhere.
///
/// A one-dimensional span is a sign check. Larger spans solve
/// `max t s.t. B y >= t, |y_j| <= 1` by enumerating vertices.
pub fn positive_combination(basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = basis.len();
    if k == 0 {
        return None;
    }
    let c = basis[0].len();
    let normalize = |v: Vec<f64>| -> Option<Vec<f64>> {
        let s: f64 = v.iter().sum();
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if v.iter().all(|x| *x > KERNEL_TOL * scale) && s > 0.0 {
            Some(v.iter().map(|x| x / s).collect())
        } else {
            None
        }
    };
    if k == 1 {
        let v = basis[0].clone();
        return normalize(v.clone()).or_else(|| normalize(v.iter().map(|x| -x).collect()));
    }
    // Variables (y_1..y_k, t); constraints rows: B_i y - t >= 0 (i < c),
    // then y_j <= 1 and -y_j <= 1.
    let n = k + 1;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..c {
        let mut a: Vec<f64> = basis.iter().map(|b| -b[i]).collect();
        a.push(1.0);
        rows.push((a, 0.0)); // -B_i y + t <= 0
    }
    for j in 0..k {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        rows.push((a.clone(), 1.0));
        a[j] = -1.0;
        rows.push((a, 1.0));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |r, col| rows[idx[r]].0[col]);
        let b: Vec<f64> = idx.iter().map(|&r| rows[r].1).collect();
        if let Some(z) = linalg::solve(&a, &b) {
            let ok = rows.iter().all(|(ar, br)| {
                ar.iter().zip(&z).map(|(u, v)| u * v).sum::<f64>() <= br + 1e-9
            });
            if ok && best.as_ref().is_none_or(|(t, _)| z[k] > *t) {
                best = Some((z[k], z));
            }
        }
        if !next_combination(&mut idx, rows.len()) {
            break;
        }
    }
    let (t, z) = best?;
    if t <= KERNEL_TOL {
        return None;
    }
    let v: Vec<f64> = (0..c).map(|i| (0..k).map(|j| basis[j][i] * z[j]).sum()).collect();
    normalize(v)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two() -> ReactionSystem {
        ReactionSystem::simple(&[-1.0, 1.0]).unwrap()
    }

    #[test]
    fn fractions_of_simple_states() {
        let x = mole_fractions(&MixtureState::new(300.0, 1e5, vec![1.0, 2.0, 3.0])).unwrap();
        assert_relative_eq!(x[0], 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(x[2], 0.5, max_relative = 1e-15);
        assert!(matches!(
            mole_fractions(&MixtureState::new(300.0, 1e5, vec![2.0, 0.0])),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let s = two();
        let q = activity_quotient(&s, &MixtureState::new(300.0, 1e5, vec![0.2, 0.8])).unwrap();
        assert_relative_eq!(q, 4.0, max_relative = 1e-14);
        let q = activity_quotient(&s, &MixtureState::new(300.0, 1e5, vec![0.5, 0.5])).unwrap();
        assert_relative_eq!(q, 1.0);
    }

    #[test]
    fn solvent_conventions_pick_exponents() {
        let mk = |mode, conv, nu0| {
            let mut sp = vec![Species::new("W", nu0, 0.018)];
            sp.push(Species::new("A", -1.0, 0.03));
            sp.push(Species::new("B", 2.0, 0.03));
            ReactionSystem::new(sp, mode, conv, 1e5)
        };
        let s = mk(SolventMode::NoInteraction, QuotientConvention::W, 0.0).unwrap();
        assert_eq!(s.exponents(), vec![0.0, -1.0, 2.0]);
        let s = mk(SolventMode::NoInteraction, QuotientConvention::Z, 0.0).unwrap();
        assert_eq!(s.exponents(), vec![1.0, -1.0, 2.0]);
        let s = mk(SolventMode::Interacting, QuotientConvention::Z, -3.0).unwrap();
        assert_eq!(s.exponents(), vec![-3.0, -1.0, 2.0]);
        assert!(mk(SolventMode::Interacting, QuotientConvention::W, -3.0).is_err());
        assert!(mk(SolventMode::NoInteraction, QuotientConvention::Z, 1.0).is_err());
        assert!(ReactionSystem::simple(&[1.0]).is_err());
    }

    #[test]
    fn extent_updates_and_bounds() {
        let s = two();
        let init = MixtureState::new(300.0, 1e5, vec![2.0, 1.0]);
        assert_eq!(apply_extent(&s, &init, 0.0).unwrap(), init);
        assert_eq!(apply_extent(&s, &init, 1.0).unwrap().n, vec![1.0, 2.0]);
        match apply_extent(&s, &init, 2.0) {
            Err(Error::ExtentOutOfRange { lo, hi, .. }) => {
                assert_eq!((lo, hi), (-1.0, 2.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extent_from_target_fractions() {
        let s = two();
        let e = extent_from_fractions(&s, &[2.0, 2.0], &[0.25, 0.75]).unwrap();
        assert_relative_eq!(e.xi, 1.0, max_relative = 1e-14);
        let e = extent_from_fractions(&s, &[2.0, 6.0], &[0.25, 0.75]).unwrap();
        assert!(e.xi.abs() < 1e-15);
        let s = ReactionSystem::simple(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            extent_from_fractions(&s, &[1.0, 3.0], &[0.5, 0.5]),
            Err(Error::SingularDenominator(_))
        ));
        let s = ReactionSystem::simple(&[-1.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            extent_from_fractions(&s, &[1.0, 1.0, 1.0], &[0.1, 0.1, 0.8]),
            Err(Error::InconsistentTarget { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        for f in [[0.5, 0.5], [0.9, 0.1]] {
            let r = kernel_feasibility(&FeasibilityMatrix::new(&f).unwrap());
            assert!(r.feasible);
            let w = r.witness.unwrap();
            assert_relative_eq!(w[0], f[0], max_relative = 1e-12);
            assert_relative_eq!(w[1], f[1], max_relative = 1e-12);
        }
        assert!(FeasibilityMatrix::new(&[1.0, 0.2]).is_err());
        let r = kernel_feasibility(&FeasibilityMatrix::new(&[0.3, 0.3]).unwrap());
        assert!(!r.feasible);
        assert_eq!(r.kernel_dim, 0);
    }

    #[test]
    fn positive_combination_in_a_plane() {
        let basis = vec![vec![1.0, -1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let w = positive_combination(&basis).unwrap();
        assert!(w.iter().all(|x| *x > 0.0));
        assert_relative_eq!(w.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
        let basis = vec![vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0]];
        assert!(positive_combination(&basis).is_none());
    }
}
