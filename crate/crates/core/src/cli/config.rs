//! TOML run configuration.
//!
//! Every table rejects unknown keys. See the README for the full schema.

use std::path::Path;

use serde::Deserialize;

use crate::constants::P_STANDARD;
use crate::error::{Error, Result};
use crate::error_model::{ErrorKind, ErrorModel, FugacityEntry, HenryEntry, RaoultEntry, RegimeTag};
use crate::gibbs::{fit_model, AffineGibbsModel, ChemicalModel};
use crate::surface::{Curve, Surface};
use crate::thermo::{QuotientConvention, ReactionSystem, SolventMode, Species};

/// Schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Option<String>,
    pub system: SystemConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub errors: ErrorsConfig,
    pub grid: Option<GridConfig>,
    pub trace: Option<TraceConfig>,
    pub dynamic: Option<LevelConfig>,
    pub quasi: Option<LevelConfig>,
    pub cell: Option<CellConfig>,
    pub feasible: Option<FeasibleConfig>,
    pub enthalpy: Option<EnthalpyConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default = "default_p_standard")]
    pub p_standard: f64,
    #[serde(default = "default_solvent_mode")]
    pub solvent_mode: SolventMode,
    #[serde(default = "default_convention")]
    pub convention: QuotientConvention,
    pub species: Vec<SpeciesConfig>,
}

fn default_p_standard() -> f64 {
    P_STANDARD
}
fn default_solvent_mode() -> SolventMode {
    SolventMode::None
}
fn default_convention() -> QuotientConvention {
    QuotientConvention::QPlain
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub name: String,
    pub nu: f64,
    pub molar_mass: f64,
    pub molar_volume: Option<f64>,
    pub henry_constant: Option<f64>,
    pub heat_capacity: Option<Curve>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Intercept with the pressure logarithm referenced to P°.
    pub lambda: Option<f64>,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub sigma: f64,
    pub fit: Option<FitConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// Rows of `[T_K, P_Pa, dg_dxi_J_per_mol]`.
    pub samples: Vec<[f64; 3]>,
    #[serde(default = "default_eps_tol")]
    pub eps_tol: f64,
}

fn default_eps_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorsConfig {
    pub regime: RegimeTag,
    #[serde(default)]
    pub raoult: Vec<RaoultConfig>,
    /// Solvent deviation for the interacting Henry regime.
    pub solvent: Option<SolventRaoultConfig>,
    #[serde(default)]
    pub fugacity: Vec<FugacityConfig>,
    pub phi0: Option<SurfaceConfig>,
    pub a0: Option<SurfaceConfig>,
}

impl Default for ErrorsConfig {
    fn default() -> Self {
        ErrorsConfig { regime: RegimeTag::Idealized, raoult: vec![], solvent: None, fugacity: vec![], phi0: None, a0: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaoultConfig {
    pub species: String,
    pub p_star: f64,
    pub p_prime: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolventRaoultConfig {
    pub p_star: f64,
    pub p_prime: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FugacityConfig {
    pub species: String,
    pub gamma: SurfaceConfig,
    pub delta: SurfaceConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Constant { value: f64 },
    Affine { c0: f64, ct: f64, cp: f64 },
    LogAffine { c0: f64, ct: f64, cp: f64 },
    Grid { t: Vec<f64>, p: Vec<f64>, values: Vec<Vec<f64>> },
}

impl SurfaceConfig {
    pub fn build(&self) -> Result<Surface> {
        let s = match self.clone() {
            SurfaceConfig::Constant { value } => Surface::Constant(value),
            SurfaceConfig::Affine { c0, ct, cp } => Surface::Affine { c0, ct, cp },
            SurfaceConfig::LogAffine { c0, ct, cp } => Surface::LogAffine { c0, ct, cp },
            SurfaceConfig::Grid { t, p, values } => Surface::Grid { t, p, values },
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    pub t_start: f64,
    pub p_start: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_direction")]
    pub direction: f64,
}

fn default_step() -> f64 {
    1e-2
}
fn default_max_steps() -> usize {
    10_000
}
fn default_direction() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub level: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMode {
    Surface,
    Schedule,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub n_electrons: u32,
    pub e_standard: Curve,
    pub mode: CellMode,
    /// CSV with columns T_K, P_Pa, E_V; relative paths resolve against the
    /// config file's directory.
    pub measurements: Option<String>,
    pub start_t: Option<f64>,
    pub start_p: Option<f64>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_direction")]
    pub direction: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibleConfig {
    pub reference_amounts: Vec<f64>,
    pub pivot: Option<String>,
    pub t_start: f64,
    pub p_start: f64,
    pub t_end: f64,
    pub p_end: f64,
    #[serde(default = "default_feasible_points")]
    pub points: usize,
}

fn default_feasible_points() -> usize {
    256
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnthalpyConfig {
    pub m_mix: f64,
    pub dh_ref: f64,
    pub t0: f64,
    pub t1: f64,
    pub t_max: f64,
    pub points: usize,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn build_system(&self) -> Result<ReactionSystem> {
        let s = &self.system;
        if !(s.p_standard > 0.0) {
            return Err(Error::Config(format!("system.p_standard must be positive, got {}", s.p_standard)));
        }
        let species = s
            .species
            .iter()
            .map(|c| Species {
                name: c.name.clone(),
                nu: c.nu,
                molar_mass: c.molar_mass,
                molar_volume: c.molar_volume,
                henry_constant: c.henry_constant,
                heat_capacity: c.heat_capacity.clone(),
            })
            .collect();
        ReactionSystem::new(species, s.solvent_mode, s.convention, s.p_standard)
    }

    pub fn build_model(&self) -> Result<AffineGibbsModel> {
        let m = &self.model;
        let ps = self.system.p_standard;
        match (&m.fit, m.lambda) {
            (Some(fit), None) => {
                let samples: Vec<(f64, f64, f64)> = fit.samples.iter().map(|r| (r[0], r[1], r[2])).collect();
                let report = fit_model(&samples, ps, fit.eps_tol)?;
                log::info!(
                    "fitted model: lambda={} eps={} beta={} sigma={} rms={} (unconstrained rms={})",
                    report.model.lambda(),
                    report.model.eps(),
                    report.model.beta(),
                    report.model.sigma(),
                    report.rms,
                    report.rms_full
                );
                Ok(report.model)
            }
            (None, Some(lambda)) => AffineGibbsModel::new(lambda, m.eps, m.beta, m.sigma, ps),
            (Some(_), Some(_)) => Err(Error::Config("model: give either lambda or fit, not both".into())),
            (None, None) => Err(Error::Config("model: lambda or fit is required".into())),
        }
    }

    pub fn build_errors(&self, system: &ReactionSystem) -> Result<ErrorModel> {
        let e = &self.errors;
        let ps = system.p_standard();
        let sp = system.species();
        let find = |name: &str| -> Result<usize> {
            sp.iter()
                .position(|s| s.name == name)
                .ok_or_else(|| Error::Config(format!("errors: unknown species {name:?}")))
        };
        let volume = |i: usize| -> Result<f64> {
            sp[i].molar_volume.ok_or_else(|| {
                Error::Config(format!("species {:?}: molar_volume is required by the {:?} regime", sp[i].name, e.regime))
            })
        };
        let first_solute = usize::from(system.has_solvent());
        let henry = || -> Result<Vec<HenryEntry>> {
            (first_solute..sp.len())
                .map(|i| {
                    let k = sp[i].henry_constant.ok_or_else(|| {
                        Error::Config(format!("species {:?}: henry_constant is required", sp[i].name))
                    })?;
                    Ok(HenryEntry { species: i, nu: sp[i].nu, k })
                })
                .collect()
        };
        let fugacity = || -> Result<Vec<FugacityEntry>> {
            (first_solute..sp.len())
                .map(|i| {
                    let f = e.fugacity.iter().find(|f| f.species == sp[i].name).ok_or_else(|| {
                        Error::Config(format!("errors.fugacity: no entry for species {:?}", sp[i].name))
                    })?;
                    let k = sp[i].henry_constant.ok_or_else(|| {
                        Error::Config(format!("species {:?}: henry_constant is required", sp[i].name))
                    })?;
                    Ok(FugacityEntry { species: i, nu: sp[i].nu, k, gamma: f.gamma.build()?, delta: f.delta.build()? })
                })
                .collect()
        };
        for f in &e.fugacity {
            find(&f.species)?;
        }
        let need_solvent = |what: &str| -> Result<()> {
            if system.solvent_mode() == SolventMode::Interacting {
                Ok(())
            } else {
                Err(Error::Config(format!("errors.regime = {what} needs system.solvent_mode = \"interacting\"")))
            }
        };
        let kind = match e.regime {
            RegimeTag::Idealized => ErrorKind::Idealized,
            RegimeTag::IdealRaoult => {
                let entries = e
                    .raoult
                    .iter()
                    .map(|r| {
                        let i = find(&r.species)?;
                        Ok(RaoultEntry { species: i, nu: sp[i].nu, molar_volume: volume(i)?, p_star: r.p_star, p_prime: r.p_prime })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ErrorKind::IdealRaoult { entries }
            }
            RegimeTag::DiluteSolvated => {
                let a0 = e.a0.as_ref().ok_or_else(|| Error::Config("errors.a0 is required".into()))?;
                ErrorKind::DiluteSolvated { a0: a0.build()? }
            }
            RegimeTag::HenryInteracting => {
                need_solvent("henry_interacting")?;
                let s = e.solvent.as_ref().ok_or_else(|| Error::Config("errors.solvent is required".into()))?;
                let solvent = RaoultEntry { species: 0, nu: sp[0].nu, molar_volume: volume(0)?, p_star: s.p_star, p_prime: s.p_prime };
                ErrorKind::HenryInteracting { solvent, solutes: henry()? }
            }
            RegimeTag::FugacityInteracting => {
                need_solvent("fugacity_interacting")?;
                let phi0 = e.phi0.as_ref().ok_or_else(|| Error::Config("errors.phi0 is required".into()))?;
                ErrorKind::FugacityInteracting { solvent_nu: sp[0].nu, phi0: phi0.build()?, solutes: fugacity()? }
            }
            RegimeTag::HenryNoInteraction => ErrorKind::HenryNoInteraction { solutes: henry()? },
            RegimeTag::FugacityNoInteraction => ErrorKind::FugacityNoInteraction { solutes: fugacity()? },
        };
        ErrorModel::new(kind, ps)
    }

    pub fn build_chemical(&self, system: &ReactionSystem) -> Result<ChemicalModel> {
        ChemicalModel::new(self.build_model()?, self.build_errors(system)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
schema_version = 1
[system]
species = [
  { name = "A", nu = -1.0, molar_mass = 0.03, henry_constant = 2e5 },
  { name = "B", nu = 1.0, molar_mass = 0.03, henry_constant = 5e4 },
]
[model]
lambda = -1000.0
eps = 2500.0
"#;

    #[test]
    fn parses_and_builds() {
        let mut text = BASE.to_string();
        text.push_str("[errors]\nregime = \"henry_no_interaction\"\n");
        let cfg = RunConfig::from_toml(&text).unwrap();
        let sys = cfg.build_system().unwrap();
        let cm = cfg.build_chemical(&sys).unwrap();
        assert_eq!(cm.regime(), RegimeTag::HenryNoInteraction);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let text = BASE.replace("eps = 2500.0", "eps = 2500.0\nepsilon = 1.0");
        match RunConfig::from_toml(&text) {
            Err(Error::Config(m)) => assert!(m.contains("epsilon")),
            other => panic!("unexpected {other:?}"),
        }
        let text = BASE.replace("[system]", "[system]\np_standard = -1.0");
        let cfg = RunConfig::from_toml(&text).unwrap();
        match cfg.build_system() {
            Err(Error::Config(m)) => assert!(m.contains("p_standard")),
            other => panic!("unexpected {other:?}"),
        }
        let text = BASE.replace("schema_version = 1", "schema_version = 9");
        assert!(RunConfig::from_toml(&text).is_err());
    }
}
