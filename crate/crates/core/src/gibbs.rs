//! Affine model of the reaction Gibbs slope and the relations built on it.

use nalgebra::{DMatrix, DVector};

use crate::constants::R;
use crate::error::{Error, Result};
use crate::error_model::{ErrorModel, RegimeTag};
use crate::numeric::roots;

/// Default tolerance for the equilibrium test, J/mol.
pub const ATOL_EQ: f64 = 1e-6;

/// `dG/dxi = lambda + eps ln(P/P°) + beta T + sigma ln T`.
///
/// `lambda` is stored with the logarithm referenced to P°, so the model is
/// independent of the pressure unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineGibbsModel {
    lambda: f64,
    eps: f64,
    beta: f64,
    sigma: f64,
    p_standard: f64,
}

impl AffineGibbsModel {
    /// Builds a model from an intercept referenced to P°.
    pub fn new(lambda: f64, eps: f64, beta: f64, sigma: f64, p_standard: f64) -> Result<Self> {
        if ![lambda, eps, beta, sigma].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("model coefficients must be finite".into()));
        }
        if !(p_standard > 0.0) {
            return Err(Error::Config(format!("p_standard must be positive, got {p_standard}")));
        }
        if eps != 0.0 && sigma != 0.0 {
            return Err(Error::Config(
                "sigma must be zero when the pressure coefficient eps is nonzero".into(),
            ));
        }
        Ok(AffineGibbsModel { lambda, eps, beta, sigma, p_standard })
    }

    /// Builds a model from an intercept that multiplies `ln P` with P in Pa.
    pub fn from_raw(lambda_raw: f64, eps: f64, beta: f64, sigma: f64, p_standard: f64) -> Result<Self> {
        Self::new(lambda_raw + eps * p_standard.ln(), eps, beta, sigma, p_standard)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn p_standard(&self) -> f64 {
        self.p_standard
    }

    /// Intercept for the raw `ln P` convention.
    pub fn lambda_raw(&self) -> f64 {
        self.lambda - self.eps * self.p_standard.ln()
    }

    pub fn dg_dxi(&self, t: f64, p: f64) -> f64 {
        self.lambda + self.eps * (p / self.p_standard).ln() + self.beta * t + self.sigma * t.ln()
    }

    /// Standard reaction Gibbs energy, equal to `dg_dxi(T, P°)`.
    pub fn delta_g_standard(&self, t: f64) -> f64 {
        self.lambda + self.beta * t + self.sigma * t.ln()
    }

    /// Standard reaction enthalpy: the T = 0 intercept of the linear
    /// standard Gibbs energy.
    pub fn delta_h_standard(&self) -> f64 {
        self.lambda
    }
}

/// Gibbs slope model paired with the regime's error term.
#[derive(Debug, Clone)]
pub struct ChemicalModel {
    pub model: AffineGibbsModel,
    pub errors: ErrorModel,
}

/// Result of testing a point for chemical equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClass {
    pub chemical_eq: bool,
    pub quotient: f64,
    pub dg_dxi: f64,
    /// `ln Q - (-dG° - eps_err) / RT`
    pub residual: f64,
}

impl ChemicalModel {
    pub fn new(model: AffineGibbsModel, errors: ErrorModel) -> Result<Self> {
        if (model.p_standard - errors.p_standard()).abs() > 1e-12 * model.p_standard {
            return Err(Error::Config("model and error terms use different P°".into()));
        }
        Ok(ChemicalModel { model, errors })
    }

    pub fn regime(&self) -> RegimeTag {
        self.errors.regime()
    }

    pub fn p_standard(&self) -> f64 {
        self.model.p_standard
    }

    /// `ln Q = (eps ln(P/P°) - eps_err(T, P)) / RT`.
    pub fn ln_quotient(&self, t: f64, p: f64) -> Result<f64> {
        let e = self.errors.epsilon(t, p)?;
        Ok((self.model.eps * (p / self.model.p_standard).ln() - e) / (R * t))
    }

    pub fn quotient(&self, t: f64, p: f64) -> Result<f64> {
        let q = self.ln_quotient(t, p)?.exp();
        if q > 0.0 && q.is_finite() {
            Ok(q)
        } else {
            Err(Error::Domain(format!("quotient {q} at T={t}, P={p} is not a positive finite number")))
        }
    }

    pub fn dg_dxi(&self, t: f64, p: f64) -> f64 {
        self.model.dg_dxi(t, p)
    }

    pub fn classify_point(&self, t: f64, p: f64, atol_eq: f64) -> Result<PointClass> {
        let ln_q = self.ln_quotient(t, p)?;
        let e = self.errors.epsilon(t, p)?;
        let dg = self.model.dg_dxi(t, p);
        let residual = ln_q - (-self.model.delta_g_standard(t) - e) / (R * t);
        Ok(PointClass { chemical_eq: dg.abs() <= atol_eq, quotient: ln_q.exp(), dg_dxi: dg, residual })
    }
}

/// Closed-form activity quotient of a regime at (T, P).
pub fn quotient_closed_form(model: &AffineGibbsModel, errors: &ErrorModel, t: f64, p: f64) -> Result<f64> {
    ChemicalModel { model: *model, errors: errors.clone() }.quotient(t, p)
}

/// `(T1/T2) dG°(T2) - dH° (T1/T2 - 1)`.
pub fn gibbs_helmholtz_transport(dg2: f64, dh: f64, t1: f64, t2: f64) -> f64 {
    let r = t1 / t2;
    r * dg2 - dh * (r - 1.0)
}

/// `ln(Q(T2)/Q(T1))` for a constant reaction enthalpy. `eps_at(T)` is the
/// error term evaluated along the pressure path P(T).
pub fn vant_hoff_log_ratio<F>(dh: f64, t1: f64, t2: f64, eps_at: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Domain(format!("temperatures must be positive, got {t1}, {t2}")));
    }
    if t1 == t2 {
        return Ok(0.0);
    }
    Ok(-dh / R * (1.0 / t2 - 1.0 / t1) + (eps_at(t1)? / t1 - eps_at(t2)? / t2) / R)
}

/// Temperatures where `lambda + beta T + sigma ln T = 0`, ascending.
pub fn equilibrium_temperature(model: &AffineGibbsModel) -> Result<Vec<f64>> {
    if model.eps != 0.0 {
        return Err(Error::Config("equilibrium temperature needs a pressure-independent model".into()));
    }
    affine_log_roots(model.lambda, model.beta, model.sigma)
}

/// Positive roots of `g(T) = lambda + beta T + sigma ln T`, ascending.
pub fn affine_log_roots(lambda: f64, beta: f64, sigma: f64) -> Result<Vec<f64>> {
    let g = |t: f64| -> Result<f64> { Ok(lambda + beta * t + sigma * t.ln()) };
    if beta == 0.0 && sigma == 0.0 {
        return if lambda == 0.0 {
            Err(Error::DegenerateModel("dG/dxi vanishes identically".into()))
        } else {
            Err(Error::NoRoot(format!("dG/dxi is the nonzero constant {lambda}")))
        };
    }
    if sigma == 0.0 {
        let t = -lambda / beta;
        return Ok(if t > 0.0 { vec![t] } else { vec![] });
    }
    if beta == 0.0 {
        return Ok(vec![(-lambda / sigma).exp()]);
    }
    const TOL: f64 = 1e-12;
    // Roots may sit many decades apart, so brackets are refined in ln T.
    // The shift keeps the Brent tolerance away from zero near T = 1; Newton
    // steps in T then restore full precision.
    const SHIFT: f64 = 1000.0;
    let log_root = |lo: f64, hi: f64| -> Result<f64> {
        let h = |v: f64| Ok(lambda + beta * (v - SHIFT).exp() + sigma * (v - SHIFT));
        let mut t = (roots::brent(h, lo.ln() + SHIFT, hi.ln() + SHIFT, TOL)? - SHIFT).exp();
        for _ in 0..3 {
            let next = t - g(t)? / (beta + sigma / t);
            if !(next > 0.0) || g(next)?.abs() >= g(t)?.abs() {
                break;
            }
            t = next;
        }
        Ok(t)
    };
    if beta.signum() == sigma.signum() {
        // Monotone from -inf to +inf (or the reverse).
        let (mut lo, mut hi) = (1.0, 1.0);
        while g(lo)?.signum() == beta.signum() {
            lo *= 0.5;
            if lo < 1e-300 {
                return Ok(vec![]);
            }
        }
        while g(hi)?.signum() != beta.signum() {
            hi *= 2.0;
            if hi > 1e300 {
                return Ok(vec![]);
            }
        }
        return Ok(vec![log_root(lo, hi)?]);
    }
    // Opposite signs: a single extremum at T1 = -sigma/beta.
    let t1 = -sigma / beta;
    let g1 = lambda - sigma + sigma * t1.ln();
    let scale = lambda.abs().max(sigma.abs()).max((sigma * t1.ln()).abs());
    if g1.abs() <= 1e-12 * scale {
        return Ok(vec![t1]);
    }
    // beta > 0: minimum, roots iff g1 < 0. beta < 0: maximum, roots iff g1 > 0.
    if g1.signum() == beta.signum() {
        return Ok(vec![]);
    }
    // Roots too close to 0 or too large for f64 are dropped.
    let mut out = Vec::with_capacity(2);
    let mut lo = t1 * 0.5;
    while lo >= 1e-300 && g(lo)?.signum() == g1.signum() {
        lo *= 0.5;
    }
    if lo >= 1e-300 {
        out.push(log_root(lo, t1)?);
    }
    let mut hi = t1 * 2.0;
    while hi <= 1e300 && g(hi)?.signum() == g1.signum() {
        hi *= 2.0;
    }
    if hi <= 1e300 {
        out.push(log_root(t1, hi)?);
    }
    Ok(out)
}

/// Output of [`fit_model`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: AffineGibbsModel,
    /// RMS residual of the reported (reduced) fit, J/mol.
    pub rms: f64,
    /// RMS residual of the unconstrained four-term fit, J/mol.
    pub rms_full: f64,
    /// `rms - rms_full`.
    pub residual_increase: f64,
    /// Pressure coefficient of the unconstrained fit.
    pub eps_full: f64,
    /// Log-temperature coefficient of the unconstrained fit.
    pub sigma_full: f64,
}

/// Least-squares fit of `(lambda, eps, beta, sigma)` to `(T, P, dG/dxi)`
/// samples.
///
/// When the fitted pressure coefficient exceeds `eps_tol` in magnitude the
/// model is refit with `sigma = 0`; otherwise with `eps = 0`.
pub fn fit_model(samples: &[(f64, f64, f64)], p_standard: f64, eps_tol: f64) -> Result<FitReport> {
    if samples.len() < 4 {
        return Err(Error::Fit { coefficient: "all", detail: format!("{} samples, need at least 4", samples.len()) });
    }
    if let Some(s) = samples.iter().find(|s| !(s.0 > 0.0 && s.1 > 0.0 && s.2.is_finite())) {
        return Err(Error::Domain(format!("invalid sample (T={}, P={}, dG={})", s.0, s.1, s.2)));
    }
    let n = samples.len();
    // Columns: lambda, eps, beta, sigma.
    let cols: [Vec<f64>; 4] = [
        vec![1.0; n],
        samples.iter().map(|s| (s.1 / p_standard).ln()).collect(),
        samples.iter().map(|s| s.0).collect(),
        samples.iter().map(|s| s.0.ln()).collect(),
    ];
    let y: Vec<f64> = samples.iter().map(|s| s.2).collect();
    const NAMES: [&str; 4] = ["lambda", "eps", "beta", "sigma"];
    for k in [1usize, 3, 2, 0] {
        let others: Vec<usize> = (0..4).filter(|&j| j != k).collect();
        let (_, rms) = least_squares(&cols, &others, &cols[k])?;
        let norm = (cols[k].iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        if rms <= 1e-9 * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::Fit {
                coefficient: NAMES[k],
                detail: "its basis column lies in the span of the others".into(),
            });
        }
    }
    let (full, rms_full) = least_squares(&cols, &[0, 1, 2, 3], &y)?;
    let (eps_full, sigma_full) = (full[1], full[3]);
    let (model, rms) = if eps_full.abs() > eps_tol {
        let (c, rms) = least_squares(&cols, &[0, 1, 2], &y)?;
        (AffineGibbsModel::new(c[0], c[1], c[2], 0.0, p_standard)?, rms)
    } else {
        let (c, rms) = least_squares(&cols, &[0, 2, 3], &y)?;
        (AffineGibbsModel::new(c[0], 0.0, c[1], c[2], p_standard)?, rms)
    };
    Ok(FitReport { model, rms, rms_full, residual_increase: rms - rms_full, eps_full, sigma_full })
}

fn least_squares(cols: &[Vec<f64>], use_cols: &[usize], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = y.len();
    let a = DMatrix::from_fn(n, use_cols.len(), |i, j| cols[use_cols[j]][i]);
    let b = DVector::from_column_slice(y);
    // Column equilibration keeps the SVD cutoff meaningful across units.
    let scales: Vec<f64> = (0..a.ncols()).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    let mut a_s = a.clone();
    for (j, s) in scales.iter().enumerate() {
        a_s.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a_s.svd(true, true);
    let x = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))?;
    let coef: Vec<f64> = x.iter().zip(&scales).map(|(v, s)| v / s).collect();
    let r = &a * DVector::from_column_slice(&coef) - b;
    Ok((coef, (r.norm_squared() / n as f64).sqrt()))
}
