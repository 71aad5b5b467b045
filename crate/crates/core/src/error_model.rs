//! Per-regime error terms that correct the idealized activity quotient.
//!
//! Every regime reduces to a single aggregate `eps_err(T, P)` in J/mol that
//! enters the quotient as `exp((eps ln(P/P°) - eps_err) / RT)`.

use serde::Deserialize;

use crate::constants::R;
use crate::error::{Error, Result};
use crate::surface::Surface;

/// Modeling regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    Idealized,
    IdealRaoult,
    DiluteSolvated,
    HenryInteracting,
    FugacityInteracting,
    HenryNoInteraction,
    FugacityNoInteraction,
}

impl RegimeTag {
    pub const ALL: [RegimeTag; 7] = [
        RegimeTag::Idealized,
        RegimeTag::IdealRaoult,
        RegimeTag::DiluteSolvated,
        RegimeTag::HenryInteracting,
        RegimeTag::FugacityInteracting,
        RegimeTag::HenryNoInteraction,
        RegimeTag::FugacityNoInteraction,
    ];
}

/// Raoult deviation `gamma(P) = V_m (2P - P* - P')` for one species.
#[derive(Debug, Clone, PartialEq)]
pub struct RaoultEntry {
    pub species: usize,
    pub nu: f64,
    /// m³/mol
    pub molar_volume: f64,
    /// Pa
    pub p_star: f64,
    /// Pa
    pub p_prime: f64,
}

impl RaoultEntry {
    pub fn gamma(&self, p: f64) -> f64 {
        self.molar_volume * (2.0 * p - self.p_star - self.p_prime)
    }
}

/// Henry solute with `kappa(T) = RT ln(k / P°)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HenryEntry {
    pub species: usize,
    pub nu: f64,
    /// Pa
    pub k: f64,
}

/// Solute with activity coefficient `gamma(T, P)` and fugacity factor
/// `delta(T, P)`.
#[derive(Debug, Clone)]
pub struct FugacityEntry {
    pub species: usize,
    pub nu: f64,
    pub k: f64,
    pub gamma: Surface,
    pub delta: Surface,
}

#[derive(Debug, Clone)]
pub enum ErrorKind {
    Idealized,
    IdealRaoult { entries: Vec<RaoultEntry> },
    /// Solvent activity `a0(T, P)`; the quotient is divided by
    /// `a0(T, P) / a0(T, P°)`.
    DiluteSolvated { a0: Surface },
    HenryInteracting { solvent: RaoultEntry, solutes: Vec<HenryEntry> },
    FugacityInteracting { solvent_nu: f64, phi0: Surface, solutes: Vec<FugacityEntry> },
    HenryNoInteraction { solutes: Vec<HenryEntry> },
    FugacityNoInteraction { solutes: Vec<FugacityEntry> },
}

/// Aggregate error term of one regime.
#[derive(Debug, Clone)]
pub struct ErrorModel {
    kind: ErrorKind,
    p_standard: f64,
}

/// How a set of partial derivatives was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsPartials {
    /// J/(mol K)
    pub d_t: f64,
    /// J/(mol Pa)
    pub d_p: f64,
    pub method: DerivativeMethod,
}

/// Pressure-only part `h(P)` and its slope, for models of the form
/// `eps_err = h(P) + K T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurePart {
    pub h: f64,
    pub dh_dp: f64,
}

impl ErrorModel {
    pub fn new(kind: ErrorKind, p_standard: f64) -> Result<Self> {
        if !(p_standard > 0.0) {
            return Err(Error::Config(format!("p_standard must be positive, got {p_standard}")));
        }
        let check_k = |e: &[HenryEntry]| -> Result<()> {
            match e.iter().find(|h| !(h.k > 0.0)) {
                Some(h) => Err(Error::Config(format!("species {}: henry constant must be positive", h.species))),
                None => Ok(()),
            }
        };
        match &kind {
            ErrorKind::HenryInteracting { solutes, .. } | ErrorKind::HenryNoInteraction { solutes } => {
                check_k(solutes)?
            }
            ErrorKind::FugacityInteracting { solutes, phi0, .. } => {
                phi0.validate()?;
                check_fugacity(solutes)?;
            }
            ErrorKind::FugacityNoInteraction { solutes } => check_fugacity(solutes)?,
            ErrorKind::DiluteSolvated { a0 } => a0.validate()?,
            _ => {}
        }
        Ok(ErrorModel { kind, p_standard })
    }

    pub fn idealized(p_standard: f64) -> Self {
        ErrorModel { kind: ErrorKind::Idealized, p_standard }
    }

    pub fn kind(&self) -> &ErrorKind {
        &self.kind
    }

    pub fn p_standard(&self) -> f64 {
        self.p_standard
    }

    pub fn regime(&self) -> RegimeTag {
        match self.kind {
            ErrorKind::Idealized => RegimeTag::Idealized,
            ErrorKind::IdealRaoult { .. } => RegimeTag::IdealRaoult,
            ErrorKind::DiluteSolvated { .. } => RegimeTag::DiluteSolvated,
            ErrorKind::HenryInteracting { .. } => RegimeTag::HenryInteracting,
            ErrorKind::FugacityInteracting { .. } => RegimeTag::FugacityInteracting,
            ErrorKind::HenryNoInteraction { .. } => RegimeTag::HenryNoInteraction,
            ErrorKind::FugacityNoInteraction { .. } => RegimeTag::FugacityNoInteraction,
        }
    }

    /// Multiplies every stoichiometric weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut kind = self.kind.clone();
        match &mut kind {
            ErrorKind::Idealized | ErrorKind::DiluteSolvated { .. } => {}
            ErrorKind::IdealRaoult { entries } => entries.iter_mut().for_each(|e| e.nu *= factor),
            ErrorKind::HenryInteracting { solvent, solutes } => {
                solvent.nu *= factor;
                solutes.iter_mut().for_each(|e| e.nu *= factor);
            }
            ErrorKind::FugacityInteracting { solvent_nu, solutes, .. } => {
                *solvent_nu *= factor;
                solutes.iter_mut().for_each(|e| e.nu *= factor);
            }
            ErrorKind::HenryNoInteraction { solutes } => solutes.iter_mut().for_each(|e| e.nu *= factor),
            ErrorKind::FugacityNoInteraction { solutes } => {
                solutes.iter_mut().for_each(|e| e.nu *= factor)
            }
        }
        ErrorModel { kind, p_standard: self.p_standard }
    }

    fn kappa(&self, h: &HenryEntry, t: f64) -> f64 {
        R * t * (h.k / self.p_standard).ln()
    }

    fn psi(&self, e: &FugacityEntry, t: f64, p: f64) -> Result<f64> {
        let (g, d) = fugacity_factors(e, t, p)?;
        Ok(R * t * g.ln() + R * t * (e.k * d / self.p_standard).ln())
    }

    /// Aggregate error term in J/mol.
    pub fn epsilon(&self, t: f64, p: f64) -> Result<f64> {
        check_tp(t, p)?;
        Ok(match &self.kind {
            ErrorKind::Idealized => 0.0,
            ErrorKind::IdealRaoult { entries } => entries.iter().map(|e| e.nu * e.gamma(p)).sum(),
            ErrorKind::DiluteSolvated { a0 } => {
                let (a, a_std) = solvent_activity(a0, t, p, self.p_standard)?;
                -R * t * (a / a_std).ln()
            }
            ErrorKind::HenryInteracting { solvent, solutes } => {
                solvent.nu * solvent.gamma(p)
                    + solutes.iter().map(|h| h.nu * self.kappa(h, t)).sum::<f64>()
            }
            ErrorKind::FugacityInteracting { solvent_nu, phi0, solutes } => {
                let mut s = solvent_nu * phi0.eval(t, p).map_err(name_solvent)?;
                for e in solutes {
                    s += e.nu * self.psi(e, t, p)?;
                }
                s
            }
            ErrorKind::HenryNoInteraction { solutes } => {
                solutes.iter().map(|h| h.nu * self.kappa(h, t)).sum()
            }
            ErrorKind::FugacityNoInteraction { solutes } => {
                let mut s = 0.0;
                for e in solutes {
                    s += e.nu * self.psi(e, t, p)?;
                }
                s
            }
        })
    }

    /// `(d eps/dT, d eps/dP)`: exact for the closed-form terms, finite
    /// differences for tabulated or closure surfaces.
    pub fn epsilon_partials(&self, t: f64, p: f64) -> Result<EpsPartials> {
        check_tp(t, p)?;
        let mut analytic = true;
        let (d_t, d_p) = match &self.kind {
            ErrorKind::Idealized => (0.0, 0.0),
            ErrorKind::IdealRaoult { entries } => {
                (0.0, entries.iter().map(|e| 2.0 * e.nu * e.molar_volume).sum())
            }
            ErrorKind::DiluteSolvated { a0 } => {
                let (a, a_std) = solvent_activity(a0, t, p, self.p_standard)?;
                let d = a0.partials(t, p)?;
                let ds = a0.partials(t, self.p_standard)?;
                analytic = d.analytic && ds.analytic;
                let d_t = -R * (a / a_std).ln() - R * t * (d.d_t / a - ds.d_t / a_std);
                (d_t, -R * t * d.d_p / a)
            }
            ErrorKind::HenryInteracting { solvent, solutes } => {
                let d_t = solutes.iter().map(|h| h.nu * R * (h.k / self.p_standard).ln()).sum();
                (d_t, 2.0 * solvent.nu * solvent.molar_volume)
            }
            ErrorKind::HenryNoInteraction { solutes } => {
                (solutes.iter().map(|h| h.nu * R * (h.k / self.p_standard).ln()).sum(), 0.0)
            }
            ErrorKind::FugacityInteracting { solvent_nu, phi0, solutes } => {
                let d = phi0.partials(t, p).map_err(name_solvent)?;
                analytic &= d.analytic;
                let (mut d_t, mut d_p) = (solvent_nu * d.d_t, solvent_nu * d.d_p);
                for e in solutes {
                    let (a, b, exact) = self.psi_partials(e, t, p)?;
                    analytic &= exact;
                    d_t += e.nu * a;
                    d_p += e.nu * b;
                }
                (d_t, d_p)
            }
            ErrorKind::FugacityNoInteraction { solutes } => {
                let (mut d_t, mut d_p) = (0.0, 0.0);
                for e in solutes {
                    let (a, b, exact) = self.psi_partials(e, t, p)?;
                    analytic &= exact;
                    d_t += e.nu * a;
                    d_p += e.nu * b;
                }
                (d_t, d_p)
            }
        };
        let method = if analytic { DerivativeMethod::Analytic } else { DerivativeMethod::FiniteDifference };
        Ok(EpsPartials { d_t, d_p, method })
    }

    fn psi_partials(&self, e: &FugacityEntry, t: f64, p: f64) -> Result<(f64, f64, bool)> {
        let (g, d) = fugacity_factors(e, t, p)?;
        let dg = e.gamma.partials(t, p).map_err(|err| name_species(err, e.species))?;
        let dd = e.delta.partials(t, p).map_err(|err| name_species(err, e.species))?;
        let d_t = R * g.ln() + R * t * dg.d_t / g + R * (e.k * d / self.p_standard).ln() + R * t * dd.d_t / d;
        let d_p = R * t * (dg.d_p / g + dd.d_p / d);
        Ok((d_t, d_p, dg.analytic && dd.analytic))
    }

    /// For regimes where `eps_err = h(P) + K T`, returns `h(P)` and `h'(P)`.
    /// Returns `None` when the regime's error term does not split this way.
    pub fn pressure_part(&self, p: f64) -> Option<PressurePart> {
        match &self.kind {
            ErrorKind::Idealized | ErrorKind::HenryNoInteraction { .. } => {
                Some(PressurePart { h: 0.0, dh_dp: 0.0 })
            }
            ErrorKind::IdealRaoult { entries } => Some(PressurePart {
                h: entries.iter().map(|e| e.nu * e.gamma(p)).sum(),
                dh_dp: entries.iter().map(|e| 2.0 * e.nu * e.molar_volume).sum(),
            }),
            ErrorKind::HenryInteracting { solvent, .. } => Some(PressurePart {
                h: solvent.nu * solvent.gamma(p),
                dh_dp: 2.0 * solvent.nu * solvent.molar_volume,
            }),
            _ => None,
        }
    }

    /// True when the error term is identically zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, ErrorKind::Idealized)
    }
}

fn check_tp(t: f64, p: f64) -> Result<()> {
    if t > 0.0 && p > 0.0 && t.is_finite() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("state (T={t}, P={p}) is outside T>0, P>0")))
    }
}

fn check_fugacity(solutes: &[FugacityEntry]) -> Result<()> {
    for e in solutes {
        if !(e.k > 0.0) {
            return Err(Error::Config(format!("species {}: henry constant must be positive", e.species)));
        }
        e.gamma.validate()?;
        e.delta.validate()?;
    }
    Ok(())
}

fn fugacity_factors(e: &FugacityEntry, t: f64, p: f64) -> Result<(f64, f64)> {
    let g = e.gamma.eval(t, p).map_err(|err| name_species(err, e.species))?;
    let d = e.delta.eval(t, p).map_err(|err| name_species(err, e.species))?;
    if !(g > 0.0 && d > 0.0) {
        return Err(Error::Domain(format!(
            "species {}: activity coefficient {g} and fugacity factor {d} must be positive at T={t}, P={p}",
            e.species
        )));
    }
    Ok((g, d))
}

fn solvent_activity(a0: &Surface, t: f64, p: f64, p_std: f64) -> Result<(f64, f64)> {
    let a = a0.eval(t, p).map_err(name_solvent)?;
    let a_std = a0.eval(t, p_std).map_err(name_solvent)?;
    if !(a > 0.0 && a_std > 0.0) {
        return Err(Error::Domain(format!("solvent activity must be positive at T={t}, P={p}")));
    }
    Ok((a, a_std))
}

fn name_species(e: Error, species: usize) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("species {species}: {m}")),
        other => other,
    }
}

fn name_solvent(e: Error) -> Error {
    name_species(e, 0)
}
