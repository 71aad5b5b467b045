//! User-supplied scalar functions of temperature and pressure.
//!
//! Error terms and heat capacities come from configuration as built-in shapes
//! or tables. [`Surface`] is a function of (T, P); [`Curve`] is a function of
//! a single variable.

use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numeric::diff;

/// Shared closure type for surfaces defined in code.
pub type SurfaceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A scalar function of (T [K], P [Pa]).
#[derive(Clone)]
pub enum Surface {
    Constant(f64),
    /// `c0 + ct*T + cp*P`
    Affine { c0: f64, ct: f64, cp: f64 },
    /// `c0 + ct*ln T + cp*ln P`
    LogAffine { c0: f64, ct: f64, cp: f64 },
    /// Bilinear interpolation on a rectangular grid; `values[i][j]` is at
    /// `(t[i], p[j])`. Queries outside the grid are domain errors.
    Grid { t: Vec<f64>, p: Vec<f64>, values: Vec<Vec<f64>> },
    Custom(SurfaceFn),
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Constant(c) => write!(f, "Constant({c})"),
            Surface::Affine { c0, ct, cp } => write!(f, "Affine({c0}, {ct}, {cp})"),
            Surface::LogAffine { c0, ct, cp } => write!(f, "LogAffine({c0}, {ct}, {cp})"),
            Surface::Grid { t, p, .. } => write!(f, "Grid({}x{})", t.len(), p.len()),
            Surface::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Partial derivatives of a surface and whether they were exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub d_t: f64,
    pub d_p: f64,
    pub analytic: bool,
}

impl Surface {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Surface::Custom(Arc::new(f))
    }

    /// Checks table shapes and monotone axes.
    pub fn validate(&self) -> Result<()> {
        if let Surface::Grid { t, p, values } = self {
            check_axis(t, "t")?;
            check_axis(p, "p")?;
            if values.len() != t.len() || values.iter().any(|row| row.len() != p.len()) {
                return Err(Error::Config(format!(
                    "grid values must be {}x{} to match the axes",
                    t.len(),
                    p.len()
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64, p: f64) -> Result<f64> {
        let v = match self {
            Surface::Constant(c) => *c,
            Surface::Affine { c0, ct, cp } => c0 + ct * t + cp * p,
            Surface::LogAffine { c0, ct, cp } => {
                if t <= 0.0 || p <= 0.0 {
                    return Err(Error::Domain(format!("log-affine surface at T={t}, P={p}")));
                }
                c0 + ct * t.ln() + cp * p.ln()
            }
            Surface::Grid { t: ts, p: ps, values } => {
                let (i, u) = locate(ts, t).ok_or_else(|| {
                    Error::Domain(format!("T={t} outside grid [{}, {}]", ts[0], ts[ts.len() - 1]))
                })?;
                let (j, v) = locate(ps, p).ok_or_else(|| {
                    Error::Domain(format!("P={p} outside grid [{}, {}]", ps[0], ps[ps.len() - 1]))
                })?;
                let (i1, j1) = ((i + 1).min(ts.len() - 1), (j + 1).min(ps.len() - 1));
                (1.0 - u) * (1.0 - v) * values[i][j]
                    + u * (1.0 - v) * values[i1][j]
                    + (1.0 - u) * v * values[i][j1]
                    + u * v * values[i1][j1]
            }
            Surface::Custom(f) => f(t, p),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("surface is not finite at T={t}, P={p}")))
        }
    }

    /// Exact partials for the closed-form shapes, fourth-order central
    /// differences for tables and closures.
    pub fn partials(&self, t: f64, p: f64) -> Result<Partials> {
        match self {
            Surface::Constant(_) => Ok(Partials { d_t: 0.0, d_p: 0.0, analytic: true }),
            Surface::Affine { ct, cp, .. } => Ok(Partials { d_t: *ct, d_p: *cp, analytic: true }),
            Surface::LogAffine { ct, cp, .. } => {
                self.eval(t, p)?;
                Ok(Partials { d_t: ct / t, d_p: cp / p, analytic: true })
            }
            _ => Ok(Partials {
                d_t: diff::try_central4(|x| self.eval(x, p), t)?,
                d_p: diff::try_central4(|y| self.eval(t, y), p)?,
                analytic: false,
            }),
        }
    }

    /// True when the value does not depend on T.
    pub fn is_t_independent(&self) -> bool {
        match self {
            Surface::Constant(_) => true,
            Surface::Affine { ct, .. } | Surface::LogAffine { ct, .. } => *ct == 0.0,
            _ => false,
        }
    }
}

/// A scalar function of one variable (temperature for heat capacities and
/// standard potentials).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Curve {
    Constant { value: f64 },
    /// `c0 + c1*x`
    Affine { c0: f64, c1: f64 },
    /// Piecewise-linear table; no extrapolation.
    Table { x: Vec<f64>, y: Vec<f64> },
}

impl Curve {
    pub fn constant(value: f64) -> Self {
        Curve::Constant { value }
    }

    pub fn validate(&self) -> Result<()> {
        if let Curve::Table { x, y } = self {
            check_axis(x, "x")?;
            if x.len() != y.len() {
                return Err(Error::Config("table x and y lengths differ".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Curve::Constant { value } => Ok(*value),
            Curve::Affine { c0, c1 } => Ok(c0 + c1 * x),
            Curve::Table { x: xs, y } => {
                let (i, u) = locate(xs, x).ok_or_else(|| {
                    Error::Domain(format!("{x} outside table [{}, {}]", xs[0], xs[xs.len() - 1]))
                })?;
                let i1 = (i + 1).min(xs.len() - 1);
                Ok((1.0 - u) * y[i] + u * y[i1])
            }
        }
    }

    /// `(c0, c1)` when the curve is globally affine.
    pub fn affine_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            Curve::Constant { value } => Some((*value, 0.0)),
            Curve::Affine { c0, c1 } => Some((*c0, *c1)),
            Curve::Table { .. } => None,
        }
    }

    /// Interior breakpoints where the curve may have a kink.
    pub fn knots(&self) -> &[f64] {
        match self {
            Curve::Table { x, .. } => x,
            _ => &[],
        }
    }
}

fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::Config(format!("table axis {name} needs at least two entries")));
    }
    if axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!("table axis {name} must be strictly increasing")));
    }
    Ok(())
}

/// Cell index and fractional offset of `x` within a sorted axis.
fn locate(axis: &[f64], x: f64) -> Option<(usize, f64)> {
    let n = axis.len();
    if !(x >= axis[0] && x <= axis[n - 1]) {
        return None;
    }
    let i = match axis.partition_point(|&a| a <= x) {
        0 => 0,
        k if k >= n => n - 2,
        k => k - 1,
    };
    Some((i, (x - axis[i]) / (axis[i + 1] - axis[i])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_bilinear_and_bounded() {
        let s = Surface::Grid {
            t: vec![300.0, 400.0],
            p: vec![1e5, 2e5],
            values: vec![vec![0.0, 1.0], vec![2.0, 3.0]],
        };
        s.validate().unwrap();
        assert!((s.eval(350.0, 1.5e5).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(s.eval(400.0, 2e5).unwrap(), 3.0);
        assert!(matches!(s.eval(250.0, 1e5), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_partials_are_exact() {
        let s = Surface::LogAffine { c0: 1.0, ct: 2.0, cp: -3.0 };
        let d = s.partials(300.0, 2e5).unwrap();
        assert!(d.analytic);
        assert_eq!(d.d_t, 2.0 / 300.0);
        let c = Surface::custom(|t, p| t * p * 1e-6);
        let d = c.partials(300.0, 2e5).unwrap();
        assert!(!d.analytic);
        assert!((d.d_t - 0.2).abs() < 1e-6 * 0.2);
        assert!((d.d_p - 3e-4).abs() < 1e-6 * 3e-4);
    }

    #[test]
    fn table_curve_interpolates_without_extrapolation() {
        let c = Curve::Table { x: vec![1.0, 2.0, 4.0], y: vec![0.0, 10.0, 30.0] };
        c.validate().unwrap();
        assert_eq!(c.eval(3.0).unwrap(), 20.0);
        assert!(c.eval(4.5).is_err());
        assert_eq!(c.knots(), &[1.0, 2.0, 4.0]);
    }
}
