//! Temperature dependence of the reaction enthalpy and the correction it
//! adds to Gibbs–Helmholtz transport.

use crate::constants::R;
use crate::error::{Error, Result};
use crate::gibbs::gibbs_helmholtz_transport;
use crate::numeric::quadrature::adaptive_simpson_split;
use crate::surface::Curve;

const QUAD_TOL: f64 = 1e-12;

/// One reacting species' contribution to the mixture heat capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSpecies {
    pub nu: f64,
    /// kg/mol
    pub molar_mass: f64,
    /// J/(kg K)
    pub heat_capacity: Curve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureHeatModel {
    pub species: Vec<HeatSpecies>,
    /// kg
    pub m_mix: f64,
    /// Reaction enthalpy at `t0`, J/mol.
    pub dh_ref: f64,
    /// K
    pub t0: f64,
}

impl MixtureHeatModel {
    pub fn new(species: Vec<HeatSpecies>, m_mix: f64, dh_ref: f64, t0: f64) -> Result<Self> {
        if !(m_mix > 0.0) {
            return Err(Error::Config(format!("m_mix must be positive, got {m_mix}")));
        }
        if !(t0 > 0.0) {
            return Err(Error::Config(format!("t0 must be positive, got {t0}")));
        }
        for s in &species {
            s.heat_capacity.validate()?;
            if !(s.molar_mass > 0.0) {
                return Err(Error::Config("molar_mass must be positive".into()));
            }
        }
        Ok(MixtureHeatModel { species, m_mix, dh_ref, t0 })
    }

    /// Copy with a different mixture mass.
    pub fn with_mass(&self, m_mix: f64) -> Result<Self> {
        Self::new(self.species.clone(), m_mix, self.dh_ref, self.t0)
    }

    fn knots(&self) -> Vec<f64> {
        self.species.iter().flat_map(|s| s.heat_capacity.knots().iter().copied()).collect()
    }

    /// `(c0, c1)` with `C(T) = c0 + c1 T` when every heat capacity is affine.
    fn affine_c(&self) -> Option<(f64, f64)> {
        let mut c = (0.0, 0.0);
        for s in &self.species {
            let (a, b) = s.heat_capacity.affine_coefficients()?;
            let w = -s.nu * s.molar_mass / self.m_mix;
            c.0 += w * a;
            c.1 += w * b;
        }
        Some(c)
    }

    /// `C(T) = -(1/m_mix) sum nu_i m_i C_i(T)`.
    pub fn reaction_heat_capacity(&self, t: f64) -> Result<f64> {
        let mut s = 0.0;
        for sp in &self.species {
            s += sp.nu * sp.molar_mass * sp.heat_capacity.eval(t)?;
        }
        Ok(-s / self.m_mix)
    }

    /// `dH°(T) = dH°(T0) + int_{T0}^{T} C`.
    pub fn delta_h(&self, t: f64) -> Result<f64> {
        Ok(self.dh_ref + self.delta_h_change(t)?)
    }

    /// `dH°(T) - dH°(T0)`.
    pub fn delta_h_change(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("temperature {t} must be positive")));
        }
        if let Some((c0, c1)) = self.affine_c() {
            return Ok(c0 * (t - self.t0) + 0.5 * c1 * (t * t - self.t0 * self.t0));
        }
        adaptive_simpson_split(|s| self.reaction_heat_capacity(s), self.t0, t, &self.knots(), QUAD_TOL)
    }

    /// `w(T1, T2) = T1 int_{T1}^{T2} (dH°(S) - dH°(T0)) / S^2 dS`.
    pub fn error_w(&self, t1: f64, t2: f64) -> Result<f64> {
        if !(t1 > 0.0 && t2 > t1) {
            return Err(Error::Domain(format!("need 0 < T1 < T2, got T1={t1}, T2={t2}")));
        }
        let f = |s: f64| Ok(self.delta_h_change(s)? / (s * s));
        let mut knots = self.knots();
        knots.push(self.t0);
        Ok(t1 * adaptive_simpson_split(f, t1, t2, &knots, 1e-12)?)
    }

    /// Bound on `|w(T1, T2)|` given `|C| <= c_bound` on the range spanned by
    /// `T0`, `T1` and `T2`: `T1 c_bound int_{T1}^{T2} |S - T0| / S^2 dS`.
    pub fn bound_w(&self, t1: f64, t2: f64, c_bound: f64) -> Result<f64> {
        if !(t1 > 0.0 && t2 > t1) {
            return Err(Error::Domain(format!("need 0 < T1 < T2, got T1={t1}, T2={t2}")));
        }
        if !(c_bound >= 0.0) {
            return Err(Error::Config(format!("c_bound must be non-negative, got {c_bound}")));
        }
        let t0 = self.t0;
        // Antiderivative of (S - T0) / S^2.
        let g = |s: f64| s.ln() + t0 / s;
        let integral = if t0 <= t1 {
            g(t2) - g(t1)
        } else if t0 >= t2 {
            g(t1) - g(t2)
        } else {
            (g(t1) - g(t0)) + (g(t2) - g(t0))
        };
        Ok(t1 * c_bound * integral)
    }

    /// `sup |C(T)|` over `[a, b]`. Every heat capacity is piecewise linear,
    /// so the supremum sits at an endpoint or a table knot.
    pub fn sup_abs_c(&self, a: f64, b: f64) -> Result<f64> {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut m = self.reaction_heat_capacity(lo)?.abs().max(self.reaction_heat_capacity(hi)?.abs());
        for k in self.knots() {
            if k > lo && k < hi {
                m = m.max(self.reaction_heat_capacity(k)?.abs());
            }
        }
        Ok(m)
    }

    /// Gibbs–Helmholtz transport from T2 to T1 using the reference
    /// enthalpy, plus the correction `w(T1, T2)`.
    pub fn transport_corrected(&self, dg2: f64, t1: f64, t2: f64) -> Result<f64> {
        Ok(gibbs_helmholtz_transport(dg2, self.dh_ref, t1, t2) + self.error_w(t1, t2)?)
    }

    /// `ln(Q(T2)/Q(T1))` with a temperature-dependent reaction enthalpy.
    ///
    /// Uses `int dH°/S^2 = dH°(T1)/T1 - dH°(T2)/T2 + int C/S`, so only the
    /// heat capacity is integrated numerically.
    pub fn vant_hoff_log_ratio<E>(&self, t1: f64, t2: f64, eps_at: E) -> Result<f64>
    where
        E: Fn(f64) -> Result<f64>,
    {
        if !(t1 > 0.0 && t2 > 0.0) {
            return Err(Error::Domain(format!("temperatures must be positive, got {t1}, {t2}")));
        }
        if t1 == t2 {
            return Ok(0.0);
        }
        let int_c = match self.affine_c() {
            Some((c0, c1)) => c0 * (t2 / t1).ln() + c1 * (t2 - t1),
            None => adaptive_simpson_split(|s| Ok(self.reaction_heat_capacity(s)? / s), t1, t2, &self.knots(), QUAD_TOL)?,
        };
        let int_h = self.delta_h(t1)? / t1 - self.delta_h(t2)? / t2 + int_c;
        Ok(int_h / R + (eps_at(t1)? / t1 - eps_at(t2)? / t2) / R)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn water(m_mix: f64) -> MixtureHeatModel {
        let s = HeatSpecies { nu: 1.0, molar_mass: 0.018, heat_capacity: Curve::constant(4184.0) };
        MixtureHeatModel::new(vec![s], m_mix, -1000.0, 300.0).unwrap()
    }

    #[test]
    fn heat_capacity_examples() {
        assert_relative_eq!(water(1.0).reaction_heat_capacity(310.0).unwrap(), -75.312, max_relative = 1e-14);
        assert_eq!(
            water(2.0).reaction_heat_capacity(310.0).unwrap(),
            0.5 * water(1.0).reaction_heat_capacity(310.0).unwrap()
        );
        let a = HeatSpecies { nu: -1.0, molar_mass: 0.02, heat_capacity: Curve::constant(1000.0) };
        let b = HeatSpecies { nu: 1.0, molar_mass: 0.04, heat_capacity: Curve::constant(500.0) };
        let m = MixtureHeatModel::new(vec![a, b], 1.0, 0.0, 300.0).unwrap();
        assert_eq!(m.reaction_heat_capacity(400.0).unwrap(), 0.0);
    }

    #[test]
    fn enthalpy_closed_form_matches_quadrature() {
        let m = water(1.0);
        assert_eq!(m.delta_h(300.0).unwrap(), -1000.0);
        assert_relative_eq!(m.delta_h(350.0).unwrap(), -1000.0 - 75.312 * 50.0, max_relative = 1e-14);
        let tab = HeatSpecies {
            nu: 1.0,
            molar_mass: 0.018,
            heat_capacity: Curve::Table { x: vec![200.0, 500.0], y: vec![4184.0, 4184.0] },
        };
        let mt = MixtureHeatModel::new(vec![tab], 1.0, -1000.0, 300.0).unwrap();
        assert_relative_eq!(mt.delta_h(350.0).unwrap(), m.delta_h(350.0).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn w_vanishes_without_heat_capacity_and_is_bounded() {
        let s = HeatSpecies { nu: 1.0, molar_mass: 0.018, heat_capacity: Curve::constant(0.0) };
        let m = MixtureHeatModel::new(vec![s], 1.0, 5.0, 300.0).unwrap();
        assert_eq!(m.error_w(300.0, 400.0).unwrap(), 0.0);
        assert_eq!(m.bound_w(300.0, 400.0, 0.0).unwrap(), 0.0);
        let m = water(1.0);
        let w = m.error_w(280.0, 420.0).unwrap();
        let cb = m.sup_abs_c(280.0, 420.0).unwrap();
        assert!(m.bound_w(280.0, 420.0, cb).unwrap() >= w.abs());
        assert_relative_eq!(m.bound_w(280.0, 420.0, 2.0 * cb).unwrap(), 2.0 * m.bound_w(280.0, 420.0, cb).unwrap());
    }
}
