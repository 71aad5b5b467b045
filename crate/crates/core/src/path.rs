//! Gradient of the activity quotient, maximal-reaction paths and
//! equilibrium curves in the (T, P) plane.
//!
//! Tracing works in scaled coordinates `tau = T / T_ref`, `pi = P / P°`, in
//! which the gradient is `(T_ref dQ/dT, P° dQ/dP)`. The region criterion
//! `|grad Q| >= 1` and the step sizes refer to this scaling.

use crate::constants::{R, T_REF};
use crate::error::{Error, Result};
use crate::gibbs::{affine_log_roots, ChemicalModel};
use crate::numeric::{quadrature, roots};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    MaximalReaction,
    DynamicEquilibrium,
    QuasiChemicalEquilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The next point would have `|grad Q| < 1`.
    RegionExit,
    /// The next step would leave `T > 0, P > 0` or the quotient overflowed.
    DomainBoundary,
    StepLimit,
    /// A curve was evaluated over its whole parameter range.
    Converged,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::RegionExit => "region_exit",
            StopReason::DomainBoundary => "domain_boundary",
            StopReason::StepLimit => "step_limit",
            StopReason::Converged => "converged",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint {
    /// Path parameter: scaled arc length for traced paths, temperature
    /// fraction along the range for level curves.
    pub t: f64,
    /// K
    pub temperature: f64,
    /// Pa
    pub pressure: f64,
    pub quotient: f64,
    /// Conserved quantity of maximal-reaction paths, when the regime has one.
    pub invariant: Option<f64>,
    /// Scaled gradient norm.
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracedPath {
    pub kind: PathKind,
    pub points: Vec<PathPoint>,
    pub level: Option<f64>,
    pub stop_reason: StopReason,
    /// Temperatures at which a level curve was not attained.
    pub skipped: Vec<f64>,
    /// Largest relative deviation of Q from the level (dynamic curves) or
    /// absolute deviation of dG/dxi (quasi-chemical curves).
    pub max_level_deviation: f64,
}

/// Raw gradient `(dQ/dT, dQ/dP)` in 1/K and 1/Pa.
pub fn grad_quotient(cm: &ChemicalModel, t: f64, p: f64) -> Result<(f64, f64)> {
    let q = cm.quotient(t, p)?;
    let e = cm.errors.epsilon(t, p)?;
    let d = cm.errors.epsilon_partials(t, p)?;
    let eps = cm.model.eps();
    let u = eps * (p / cm.p_standard()).ln() - e;
    let rt = R * t;
    let d_t = q * (-u / (rt * t) - d.d_t / rt);
    let d_p = q * (eps / p - d.d_p) / rt;
    Ok((d_t, d_p))
}

/// Gradient in scaled coordinates.
pub fn scaled_grad(cm: &ChemicalModel, t: f64, p: f64) -> Result<(f64, f64)> {
    let (gt, gp) = grad_quotient(cm, t, p)?;
    Ok((T_REF * gt, cm.p_standard() * gp))
}

/// Conserved quantity along gradient lines, in scaled units.
///
/// With no error terms it is `pi^2 (ln pi / 2 - 1/4) + tau^2 / 2`. For error
/// terms of the form `h(P) + K T` it is
/// `int_1^pi s (eps ln s - h(s)) / (eps - s h'(s)) ds + tau^2 / 2`, with `h`
/// expressed in scaled pressure.
pub fn implicit_invariant(cm: &ChemicalModel, t: f64, p: f64) -> Result<f64> {
    if !(t > 0.0 && p > 0.0) {
        return Err(Error::Domain(format!("state (T={t}, P={p}) is outside T>0, P>0")));
    }
    let ps = cm.p_standard();
    let (tau, pi) = (t / T_REF, p / ps);
    let eps = cm.model.eps();
    let errors = &cm.errors;
    if errors.pressure_part(ps).is_none() {
        return Err(Error::NotSeparable(format!("{:?} error terms depend jointly on T and P", cm.regime())));
    }
    let h0 = errors.pressure_part(ps).unwrap();
    if eps == 0.0 && h0.h == 0.0 && h0.dh_dp == 0.0 {
        return Err(Error::DegenerateModel("the quotient does not depend on pressure".into()));
    }
    if errors.is_zero() {
        return Ok(pi * pi * (0.5 * pi.ln() - 0.25) + 0.5 * tau * tau);
    }
    let part = |s: f64| errors.pressure_part(ps * s).unwrap();
    let den = |s: f64| eps - s * ps * part(s).dh_dp;
    let (lo, hi) = if pi >= 1.0 { (1.0, pi) } else { (pi, 1.0) };
    let samples = 64;
    let mut prev = (lo, den(lo));
    for k in 1..=samples {
        let s = lo + (hi - lo) * k as f64 / samples as f64;
        let d = den(s);
        if d == 0.0 || prev.1 == 0.0 || d.signum() != prev.1.signum() {
            let at = if d == 0.0 {
                s
            } else if prev.1 == 0.0 {
                prev.0
            } else {
                roots::brent(|x| Ok(den(x)), prev.0, s, 1e-12)?
            };
            return Err(Error::SingularIntegrand { at: at * ps });
        }
        prev = (s, d);
    }
    let integrand = |s: f64| {
        let h = part(s).h;
        Ok(s * (eps * s.ln() - h) / den(s))
    };
    Ok(quadrature::adaptive_simpson(integrand, 1.0, pi, 1e-10)? + 0.5 * tau * tau)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Scaled arc-length step.
    pub step: f64,
    pub max_steps: usize,
    /// +1 follows the gradient (Q increases), -1 descends.
    pub direction: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { step: 1e-2, max_steps: 10_000, direction: 1.0 }
    }
}

/// Follows the unit-speed gradient flow of Q from `start = (T, P)` with
/// classical RK4.
pub fn trace_maximal_reaction(cm: &ChemicalModel, start: (f64, f64), opts: &TraceOptions) -> Result<TracedPath> {
    if !(opts.step > 0.0) || opts.direction == 0.0 {
        return Err(Error::Config("trace step must be positive and direction nonzero".into()));
    }
    let ps = cm.p_standard();
    let dir = opts.direction.signum();
    let field = |y: [f64; 2]| -> Result<[f64; 2]> {
        if !(y[0] > 0.0 && y[1] > 0.0) {
            return Err(Error::Domain("left the positive quadrant".into()));
        }
        let (a, b) = scaled_grad(cm, y[0] * T_REF, y[1] * ps)?;
        let n = a.hypot(b);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain(format!("gradient norm {n} cannot be normalized")));
        }
        Ok([dir * a / n, dir * b / n])
    };
    let point = |k: usize, y: [f64; 2]| -> Result<PathPoint> {
        let (t, p) = (y[0] * T_REF, y[1] * ps);
        let q = cm.quotient(t, p)?;
        let (a, b) = scaled_grad(cm, t, p)?;
        Ok(PathPoint {
            t: k as f64 * opts.step,
            temperature: t,
            pressure: p,
            quotient: q,
            invariant: implicit_invariant(cm, t, p).ok(),
            grad_norm: a.hypot(b),
        })
    };

    let (t0, p0) = start;
    let first = point(0, [t0 / T_REF, p0 / ps])?;
    if !(first.grad_norm >= 1.0) {
        return Err(Error::Region { grad_norm: first.grad_norm });
    }
    let mut points = vec![first];
    let mut y = [t0 / T_REF, p0 / ps];
    let h = opts.step;
    let mut stop_reason = StopReason::StepLimit;
    for k in 1..=opts.max_steps {
        let next = (|| -> Result<[f64; 2]> {
            let k1 = field(y)?;
            let k2 = field([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]])?;
            let k3 = field([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]])?;
            let k4 = field([y[0] + h * k3[0], y[1] + h * k3[1]])?;
            Ok([
                y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ])
        })();
        let pt = match next.and_then(|yn| {
            if yn[0] > 0.0 && yn[1] > 0.0 {
                point(k, yn).map(|p| (yn, p))
            } else {
                Err(Error::Domain("left the positive quadrant".into()))
            }
        }) {
            Ok(v) => v,
            Err(Error::Domain(_)) => {
                stop_reason = StopReason::DomainBoundary;
                break;
            }
            Err(e) => return Err(e),
        };
        if pt.1.grad_norm < 1.0 {
            stop_reason = StopReason::RegionExit;
            break;
        }
        y = pt.0;
        points.push(pt.1);
    }
    Ok(TracedPath {
        kind: PathKind::MaximalReaction,
        points,
        level: None,
        stop_reason,
        skipped: Vec::new(),
        max_level_deviation: 0.0,
    })
}

/// Temperature grid and pressure search window for level curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelOptions {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// Search window for the pressure root, Pa.
    pub p_min: f64,
    pub p_max: f64,
    pub scan_points: usize,
}

impl LevelOptions {
    pub fn new(t_min: f64, t_max: f64, points: usize, p_standard: f64) -> Self {
        LevelOptions { t_min, t_max, points, p_min: 1e-6 * p_standard, p_max: 1e6 * p_standard, scan_points: 241 }
    }

    fn temperatures(&self) -> Result<Vec<(f64, f64)>> {
        if !(self.t_min > 0.0 && self.t_max >= self.t_min && self.points >= 1) {
            return Err(Error::Config(format!(
                "invalid temperature range [{}, {}] with {} points",
                self.t_min, self.t_max, self.points
            )));
        }
        let n = self.points;
        Ok((0..n)
            .map(|k| {
                let u = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                (u, self.t_min + (self.t_max - self.t_min) * u)
            })
            .collect())
    }
}

/// Curve `Q(T, P) = c` sampled on a temperature grid.
pub fn trace_dynamic_equilibrium(cm: &ChemicalModel, level: f64, opts: &LevelOptions) -> Result<TracedPath> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::Config(format!("quotient level must be positive, got {level}")));
    }
    let eps = cm.model.eps();
    let ps = cm.p_standard();
    let p_independent = cm.errors.is_zero() || cm.regime() == crate::error_model::RegimeTag::HenryNoInteraction;
    if eps == 0.0 && p_independent {
        return Err(Error::DegenerateModel(
            "the quotient does not depend on pressure; its level sets are vertical lines".into(),
        ));
    }
    let ln_c = level.ln();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut prev_p: Option<f64> = None;
    let mut max_dev = 0.0f64;
    for (u, t) in opts.temperatures()? {
        let p = if cm.errors.is_zero() {
            let p = ps * (R * t * ln_c / eps).exp();
            if p > 0.0 && p.is_finite() { Some(p) } else { None }
        } else {
            let f = |p: f64| Ok(cm.ln_quotient(t, p)? - ln_c);
            let brackets = roots::log_brackets(f, opts.p_min, opts.p_max, opts.scan_points);
            let target = prev_p.unwrap_or(ps).ln();
            brackets
                .iter()
                .min_by(|a, b| {
                    let da = (0.5 * (a.0.ln() + a.1.ln()) - target).abs();
                    let db = (0.5 * (b.0.ln() + b.1.ln()) - target).abs();
                    da.partial_cmp(&db).unwrap()
                })
                .map(|&(a, b)| roots::brent(f, a, b, 1e-14))
                .transpose()?
        };
        let Some(p) = p else {
            log::debug!("level {level} not attained at T={t}");
            skipped.push(t);
            continue;
        };
        let q = match cm.quotient(t, p) {
            Ok(q) => q,
            Err(_) => {
                skipped.push(t);
                continue;
            }
        };
        max_dev = max_dev.max((q - level).abs() / level);
        let grad_norm = scaled_grad(cm, t, p).map(|(a, b)| a.hypot(b)).unwrap_or(f64::NAN);
        points.push(PathPoint { t: u, temperature: t, pressure: p, quotient: q, invariant: None, grad_norm });
        prev_p = Some(p);
    }
    Ok(TracedPath {
        kind: PathKind::DynamicEquilibrium,
        points,
        level: Some(level),
        stop_reason: StopReason::Converged,
        skipped,
        max_level_deviation: max_dev,
    })
}

/// A quasi-chemical equilibrium curve `dG/dxi = c`.
#[derive(Debug, Clone, PartialEq)]
pub enum QuasiCurve {
    Path(TracedPath),
    /// With no pressure dependence the level set is the union of the lines
    /// `T = T_k`.
    Vertical { temperatures: Vec<f64> },
}

pub fn trace_quasi_equilibrium(cm: &ChemicalModel, level: f64, opts: &LevelOptions) -> Result<QuasiCurve> {
    let m = &cm.model;
    if m.eps() == 0.0 {
        let temperatures = affine_log_roots(m.lambda() - level, m.beta(), m.sigma())?;
        return Ok(QuasiCurve::Vertical { temperatures });
    }
    let ps = cm.p_standard();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut max_dev = 0.0f64;
    for (u, t) in opts.temperatures()? {
        let p = ps * ((level - m.delta_g_standard(t)) / m.eps()).exp();
        let q = if p > 0.0 && p.is_finite() { cm.quotient(t, p).ok() } else { None };
        let Some(q) = q else {
            skipped.push(t);
            continue;
        };
        max_dev = max_dev.max((m.dg_dxi(t, p) - level).abs());
        let grad_norm = scaled_grad(cm, t, p).map(|(a, b)| a.hypot(b)).unwrap_or(f64::NAN);
        points.push(PathPoint { t: u, temperature: t, pressure: p, quotient: q, invariant: None, grad_norm });
    }
    Ok(QuasiCurve::Path(TracedPath {
        kind: PathKind::QuasiChemicalEquilibrium,
        points,
        level: Some(level),
        stop_reason: StopReason::Converged,
        skipped,
        max_level_deviation: max_dev,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicCheck {
    pub is_dynamic: bool,
    /// Largest change of any amount between consecutive samples, mol.
    pub max_dn: f64,
    /// Largest relative deviation of the quotient from its first value.
    pub max_q_dev: f64,
}

/// Tests whether a composition-valued path keeps every amount fixed.
pub fn verify_dynamic_equilibrium(amounts: &[Vec<f64>], quotients: &[f64], atol: f64) -> DynamicCheck {
    let max_dn = amounts
        .windows(2)
        .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (b - a).abs()))
        .fold(0.0, f64::max);
    let max_q_dev = quotients
        .first()
        .map(|&q0| quotients.iter().map(|q| (q - q0).abs() / q0.abs()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    DynamicCheck { is_dynamic: max_dn <= atol, max_dn, max_q_dev }
}
