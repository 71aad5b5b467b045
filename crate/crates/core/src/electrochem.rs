//! Cell potentials with error terms and measurement-driven steering.

use crate::constants::{F, R};
use crate::error::{Error, Result};
use crate::gibbs::ChemicalModel;
use crate::path::{trace_maximal_reaction, TraceOptions};
use crate::surface::Curve;

/// An electrochemical cell: electron count, quotient model and standard
/// potential.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub n_electrons: u32,
    pub chem: ChemicalModel,
    /// E°(T), V.
    pub e_standard: Curve,
}

impl CellSpec {
    pub fn new(n_electrons: u32, chem: ChemicalModel, e_standard: Curve) -> Result<Self> {
        if n_electrons == 0 {
            return Err(Error::Config("n_electrons must be at least 1".into()));
        }
        e_standard.validate()?;
        Ok(CellSpec { n_electrons, chem, e_standard })
    }

    fn charge(&self) -> f64 {
        self.n_electrons as f64 * F
    }

    /// `RT ln Q + eps_err` at (T, P).
    fn excess(&self, t: f64, p: f64) -> Result<f64> {
        let ln_q = self.chem.ln_quotient(t, p)?;
        if !ln_q.is_finite() {
            return Err(Error::Domain(format!("quotient is not positive at T={t}, P={p}")));
        }
        Ok(R * t * ln_q + self.chem.errors.epsilon(t, p)?)
    }
}

/// `E - E° = -(RT ln Q + eps_err) / (n_e F)`.
pub fn nernst_potential(cell: &CellSpec, t: f64, p: f64) -> Result<f64> {
    Ok(-cell.excess(t, p)? / cell.charge())
}

/// `n_e F (E - E°)`.
pub fn delta_g_from_potential(n_electrons: u32, e: f64, e_standard: f64) -> f64 {
    n_electrons as f64 * F * (e - e_standard)
}

/// Gibbs slope at (T, P) recovered from a measured potential:
/// `n_e F (E - E°) + dG/dxi|P° + RT ln Q + eps_err`.
pub fn dg_dxi_from_measurement(cell: &CellSpec, t: f64, p: f64, e: f64, e_standard: f64, dg_at_pstd: f64) -> Result<f64> {
    Ok(cell.charge() * (e - e_standard) + dg_at_pstd + cell.excess(t, p)?)
}

/// Potential offset `E - E°` that corresponds to a Gibbs slope `dg_dxi`;
/// the inverse of [`dg_dxi_from_measurement`].
pub fn potential_offset(cell: &CellSpec, t: f64, p: f64, dg_dxi: f64, dg_at_pstd: f64) -> Result<f64> {
    Ok((dg_dxi - dg_at_pstd - cell.excess(t, p)?) / cell.charge())
}

/// Potential offset predicted by the cell's own model.
pub fn model_potential_offset(cell: &CellSpec, t: f64, p: f64) -> Result<f64> {
    let m = &cell.chem.model;
    potential_offset(cell, t, p, m.dg_dxi(t, p), m.delta_g_standard(t))
}

/// One measured potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub t: f64,
    pub p: f64,
    /// V
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulePoint {
    pub t: f64,
    pub temperature: f64,
    pub pressure: f64,
    /// Required `E - E°`, V.
    pub e_offset: f64,
    pub quotient: f64,
    pub dg_dxi: f64,
    pub in_region: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub points: Vec<SchedulePoint>,
    /// Calibrated pressure coefficient of dG/dxi, J/mol.
    pub eps_calibrated: f64,
    /// Largest calibration residual, J/mol.
    pub calibration_residual: f64,
    pub stop_reason: crate::path::StopReason,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringOptions {
    pub trace: TraceOptions,
    /// Allowed calibration residual relative to the largest excess, plus an
    /// absolute floor of 1e-9 J/mol.
    pub rel_tol: f64,
    /// Allowed relative spread of Q over the measured curve.
    pub level_tol: f64,
}

impl Default for SteeringOptions {
    fn default() -> Self {
        SteeringOptions { trace: TraceOptions::default(), rel_tol: 1e-6, level_tol: 1e-6 }
    }
}

/// Calibrates the pressure sensitivity of dG/dxi from potentials measured
/// along a dynamic-equilibrium curve, then traces the maximal-reaction path
/// from `start` and reports the potential offset needed at each point.
pub fn steering_schedule(
    cell: &CellSpec,
    measurements: &[Measurement],
    start: (f64, f64),
    opts: &SteeringOptions,
) -> Result<Schedule> {
    if measurements.is_empty() {
        return Err(Error::Calibration("no measurements supplied".into()));
    }
    let ps = cell.chem.p_standard();
    let mut q_ref = None;
    let mut rows = Vec::with_capacity(measurements.len());
    for m in measurements {
        let q = cell.chem.quotient(m.t, m.p)?;
        let q0 = *q_ref.get_or_insert(q);
        if (q - q0).abs() > opts.level_tol * q0 {
            return Err(Error::Calibration(format!(
                "measurement at T={}, P={} has Q={q}, off the curve Q={q0}",
                m.t, m.p
            )));
        }
        let e0 = cell.e_standard.eval(m.t)?;
        // Excess over the standard-pressure slope: dG/dxi(T,P) - dG/dxi(T,P°).
        let y = dg_dxi_from_measurement(cell, m.t, m.p, m.e, e0, 0.0)?;
        rows.push(((m.p / ps).ln(), y));
    }
    let sll: f64 = rows.iter().map(|(l, _)| l * l).sum();
    let sly: f64 = rows.iter().map(|(l, y)| l * y).sum();
    let y_scale = rows.iter().fold(0.0f64, |m, (_, y)| m.max(y.abs()));
    if sll <= 1e-20 * rows.len() as f64 {
        return Err(Error::Calibration(
            "all measurements sit at the standard pressure; the pressure coefficient is unidentifiable".into(),
        ));
    }
    let eps_cal = sly / sll;
    let residual = rows.iter().map(|(l, y)| (y - eps_cal * l).abs()).fold(0.0, f64::max);
    if residual > opts.rel_tol * y_scale + 1e-9 {
        return Err(Error::Calibration(format!(
            "calibration residual {residual} J/mol exceeds tolerance (eps = {eps_cal} J/mol)"
        )));
    }
    let path = trace_maximal_reaction(&cell.chem, start, &opts.trace)?;
    let points = path
        .points
        .iter()
        .map(|pt| {
            let l = (pt.pressure / ps).ln();
            let dg = cell.chem.model.delta_g_standard(pt.temperature) + eps_cal * l;
            let e_offset = (eps_cal * l - cell.excess(pt.temperature, pt.pressure)?) / cell.charge();
            Ok(SchedulePoint {
                t: pt.t,
                temperature: pt.temperature,
                pressure: pt.pressure,
                e_offset,
                quotient: pt.quotient,
                dg_dxi: dg,
                in_region: pt.grad_norm >= 1.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule { points, eps_calibrated: eps_cal, calibration_residual: residual, stop_reason: path.stop_reason })
}
