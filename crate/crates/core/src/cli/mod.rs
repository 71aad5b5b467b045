//! Command-line front end: configuration, command dispatch and CSV output.

pub mod config;
pub mod output;

use std::path::Path;

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::constants::T_REF;
use crate::electrochem::{nernst_potential, steering_schedule, CellSpec, Measurement, SteeringOptions};
use crate::enthalpy::{HeatSpecies, MixtureHeatModel};
use crate::error::{Error, Result};
use crate::feasible::{build_profile, continue_branch, BranchStatus, LinkageOffsets};
use crate::gibbs::ChemicalModel;
use crate::numeric::diff;
use crate::path::{
    grad_quotient, trace_dynamic_equilibrium, trace_maximal_reaction, trace_quasi_equilibrium, LevelOptions,
    QuasiCurve, TraceOptions, TracedPath,
};
use crate::thermo::{activity_quotient, MixtureState, ReactionSystem};

pub use config::RunConfig;
use config::{CellMode, GridConfig, LevelConfig};
use output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Quotient,
    TraceMax,
    TraceDyn,
    TraceQuasi,
    Cell,
    Feasible,
    Enthalpy,
}

impl Command {
    pub fn parse(name: &str) -> Result<Self> {
        <Self as clap::ValueEnum>::from_str(name, false)
            .map_err(|_| Error::Config(format!("unknown command {name:?}")))
    }
}

/// Runs `command` (or the config's `command` key) and returns the CSV text.
/// `base_dir` resolves relative file references in the config.
pub fn execute(cfg: &RunConfig, command: Option<Command>, base_dir: &Path, seed: Option<u64>) -> Result<String> {
    let command = match (command, &cfg.command) {
        (Some(c), _) => c,
        (None, Some(name)) => Command::parse(name)?,
        (None, None) => return Err(Error::Config("no command given on the command line or in the config".into())),
    };
    let system = cfg.build_system()?;
    let chem = cfg.build_chemical(&system)?;
    if let Some(seed) = seed {
        gradient_self_check(&chem, seed);
    }
    match command {
        Command::Quotient => cmd_quotient(&chem, need(&cfg.grid, "grid")?),
        Command::TraceMax => cmd_trace_max(cfg, &chem),
        Command::TraceDyn => cmd_trace_dyn(&chem, need(&cfg.dynamic, "dynamic")?),
        Command::TraceQuasi => cmd_trace_quasi(&chem, need(&cfg.quasi, "quasi")?),
        Command::Cell => cmd_cell(cfg, chem, base_dir),
        Command::Feasible => cmd_feasible(cfg, &system, &chem),
        Command::Enthalpy => cmd_enthalpy(cfg, &system),
    }
}

fn need<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T> {
    section.as_ref().ok_or_else(|| Error::Config(format!("the [{name}] section is required for this command")))
}

/// Compares the closed-form gradient with finite differences at random
/// points near (T_ref, P°) and logs the worst relative error.
fn gradient_self_check(chem: &ChemicalModel, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let ps = chem.p_standard();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for _ in 0..32 {
        let t = T_REF * rng.gen_range(0.8..1.2);
        let p = ps * rng.gen_range(0.5..2.0);
        let (Ok((gt, gp)), Ok(ft), Ok(fp)) = (
            grad_quotient(chem, t, p),
            diff::try_central4(|x| chem.quotient(x, p), t),
            diff::try_central4(|y| chem.quotient(t, y), p),
        ) else {
            continue;
        };
        let scale = (gt * T_REF).hypot(gp * ps).max(1e-300);
        worst = worst.max(((gt - ft) * T_REF).hypot((gp - fp) * ps) / scale);
        checked += 1;
    }
    log::info!("gradient self-check (seed {seed}): {checked} points, max relative error {worst:e}");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn grid_points(g: &GridConfig) -> Result<Vec<(f64, f64)>> {
    if !(g.t_min > 0.0 && g.t_max >= g.t_min && g.p_min > 0.0 && g.p_max >= g.p_min) {
        return Err(Error::Config("grid: ranges must be positive and ordered".into()));
    }
    let ps = linspace(g.p_min, g.p_max, g.p_points);
    Ok(linspace(g.t_min, g.t_max, g.t_points)
        .into_iter()
        .flat_map(|t| ps.iter().map(move |&p| (t, p)))
        .collect())
}

fn cmd_quotient(chem: &ChemicalModel, grid: &GridConfig) -> Result<String> {
    let mut table = Table::with_columns(&["T_K", "P_Pa", "quotient", "dg_dxi_J_per_mol", "eps_err_J_per_mol"])?;
    for (t, p) in grid_points(grid)? {
        table.row(&[t, p, chem.quotient(t, p)?, chem.dg_dxi(t, p), chem.errors.epsilon(t, p)?])?;
    }
    table.finish()
}

fn trace_table(path: &TracedPath) -> Result<Table> {
    let mut table = Table::with_columns(&["t", "T_K", "P_Pa", "quotient", "invariant", "grad_norm"])?;
    for p in &path.points {
        table.row(&[p.t, p.temperature, p.pressure, p.quotient, p.invariant.unwrap_or(f64::NAN), p.grad_norm])?;
    }
    table.note("stop_reason", path.stop_reason.as_str());
    if !path.skipped.is_empty() {
        let s: Vec<String> = path.skipped.iter().map(|t| output::fmt_num(*t)).collect();
        table.note("skipped_T_K", s.join(" "));
    }
    Ok(table)
}

fn cmd_trace_max(cfg: &RunConfig, chem: &ChemicalModel) -> Result<String> {
    let tc = need(&cfg.trace, "trace")?;
    let opts = TraceOptions { step: tc.step, max_steps: tc.max_steps, direction: tc.direction };
    let path = trace_maximal_reaction(chem, (tc.t_start, tc.p_start), &opts)?;
    trace_table(&path)?.finish()
}

fn level_options(chem: &ChemicalModel, lc: &LevelConfig) -> LevelOptions {
    let mut o = LevelOptions::new(lc.t_min, lc.t_max, lc.points, chem.p_standard());
    if let Some(p) = lc.p_min {
        o.p_min = p;
    }
    if let Some(p) = lc.p_max {
        o.p_max = p;
    }
    o
}

fn cmd_trace_dyn(chem: &ChemicalModel, lc: &LevelConfig) -> Result<String> {
    let path = trace_dynamic_equilibrium(chem, lc.level, &level_options(chem, lc))?;
    let mut table = trace_table(&path)?;
    table.note("max_relative_deviation", output::fmt_num(path.max_level_deviation));
    table.finish()
}

fn cmd_trace_quasi(chem: &ChemicalModel, lc: &LevelConfig) -> Result<String> {
    match trace_quasi_equilibrium(chem, lc.level, &level_options(chem, lc))? {
        QuasiCurve::Path(path) => {
            let mut table = trace_table(&path)?;
            table.note("max_abs_deviation_J_per_mol", output::fmt_num(path.max_level_deviation));
            table.finish()
        }
        QuasiCurve::Vertical { temperatures } => {
            let mut table = Table::with_columns(&["t", "T_K", "P_Pa", "quotient", "invariant", "grad_norm"])?;
            let s: Vec<String> = temperatures.iter().map(|t| output::fmt_num(*t)).collect();
            table.note("stop_reason", "vertical_lines");
            table.note("vertical_T_K", s.join(" "));
            table.finish()
        }
    }
}

fn cmd_cell(cfg: &RunConfig, chem: ChemicalModel, base_dir: &Path) -> Result<String> {
    let cc = need(&cfg.cell, "cell")?;
    let cell = CellSpec::new(cc.n_electrons, chem, cc.e_standard.clone())?;
    match cc.mode {
        CellMode::Surface => {
            let grid = need(&cfg.grid, "grid")?;
            let mut table = Table::with_columns(&["T_K", "P_Pa", "E_minus_E0_V", "quotient", "eps_err_J_per_mol"])?;
            for (t, p) in grid_points(grid)? {
                let e = nernst_potential(&cell, t, p)?;
                table.row(&[t, p, e, cell.chem.quotient(t, p)?, cell.chem.errors.epsilon(t, p)?])?;
            }
            table.finish()
        }
        CellMode::Schedule => {
            let file = cc.measurements.as_ref().ok_or_else(|| Error::Config("cell.measurements is required in schedule mode".into()))?;
            let path = base_dir.join(file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
            let rows: Vec<Measurement> = output::read_measurements(&text)?
                .into_iter()
                .map(|(t, p, e)| Measurement { t, p, e })
                .collect();
            let start = (
                cc.start_t.ok_or_else(|| Error::Config("cell.start_t is required in schedule mode".into()))?,
                cc.start_p.ok_or_else(|| Error::Config("cell.start_p is required in schedule mode".into()))?,
            );
            let opts = SteeringOptions {
                trace: TraceOptions { step: cc.step, max_steps: cc.max_steps, direction: cc.direction },
                ..SteeringOptions::default()
            };
            let sched = steering_schedule(&cell, &rows, start, &opts)?;
            let mut table = Table::with_columns(&["T_K", "P_Pa", "E_offset_V", "quotient", "dg_dxi_J_per_mol"])?;
            for p in &sched.points {
                table.row(&[p.temperature, p.pressure, p.e_offset, p.quotient, p.dg_dxi])?;
            }
            let outside = sched.points.iter().filter(|p| !p.in_region).count();
            table.note("stop_reason", sched.stop_reason.as_str());
            table.note("eps_calibrated_J_per_mol", output::fmt_num(sched.eps_calibrated));
            table.note("points_outside_region", outside);
            table.finish()
        }
    }
}

fn cmd_feasible(cfg: &RunConfig, system: &ReactionSystem, chem: &ChemicalModel) -> Result<String> {
    let fc = need(&cfg.feasible, "feasible")?;
    let pivot = match &fc.pivot {
        Some(name) => Some(
            system
                .species()
                .iter()
                .position(|s| &s.name == name)
                .ok_or_else(|| Error::Config(format!("feasible.pivot: unknown species {name:?}")))?,
        ),
        None => None,
    };
    let offsets = LinkageOffsets::from_state(system, &fc.reference_amounts, pivot)?;
    let at = |t: f64| (fc.t_start + (fc.t_end - fc.t_start) * t, fc.p_start + (fc.p_end - fc.p_start) * t);
    let target = |t: f64| {
        let (tt, pp) = at(t);
        chem.quotient(tt, pp)
    };
    let profile = build_profile(system, &offsets, target(0.0)?).inspect_err(|e| {
        if let Error::ConstructionFailed(msg) = e {
            eprintln!("{msg}");
        }
    })?;
    let grid = linspace(0.0, 1.0, fc.points.max(2));
    let path = continue_branch(&profile, target, &grid)?;
    let first = usize::from(!system.has_solvent());
    let mut header = vec!["t".to_string(), "T_K".into(), "P_Pa".into()];
    header.extend((0..system.len()).map(|i| format!("n_{}", i + first)));
    header.push("quotient".into());
    let mut table = Table::new(&header)?;
    for (t, n) in path.t.iter().zip(&path.amounts) {
        let (tt, pp) = at(*t);
        let q = activity_quotient(system, &MixtureState::new(tt, pp, n.clone()))?;
        let mut row = vec![*t, tt, pp];
        row.extend(n);
        row.push(q);
        table.row(&row)?;
    }
    match &path.status {
        BranchStatus::Complete => table.note("stop_reason", "converged"),
        BranchStatus::Truncated { t_last, reason } => {
            table.note("stop_reason", "truncated");
            table.note("t_last", output::fmt_num(*t_last));
            table.note("reason", reason);
        }
    }
    table.finish()
}

fn cmd_enthalpy(cfg: &RunConfig, system: &ReactionSystem) -> Result<String> {
    let ec = need(&cfg.enthalpy, "enthalpy")?;
    let species = system
        .species()
        .iter()
        .filter(|s| s.nu != 0.0)
        .map(|s| {
            Ok(HeatSpecies {
                nu: s.nu,
                molar_mass: s.molar_mass,
                heat_capacity: s
                    .heat_capacity
                    .clone()
                    .ok_or_else(|| Error::Config(format!("species {:?}: heat_capacity is required", s.name)))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hm = MixtureHeatModel::new(species, ec.m_mix, ec.dh_ref, ec.t0)?;
    if !(ec.t_max > ec.t1) {
        return Err(Error::Config("enthalpy: t_max must exceed t1".into()));
    }
    let mut table = Table::with_columns(&["T_K", "C_J_per_mol_K", "delta_h_J_per_mol", "w_J_per_mol", "w_bound_J_per_mol"])?;
    for t in linspace(ec.t1, ec.t_max, ec.points.max(2)) {
        let (w, bound) = if t > ec.t1 {
            let cb = hm.sup_abs_c(ec.t0.min(ec.t1), ec.t0.max(t))?;
            (hm.error_w(ec.t1, t)?, hm.bound_w(ec.t1, t, cb)?)
        } else {
            (0.0, 0.0)
        };
        table.row(&[t, hm.reaction_heat_capacity(t)?, hm.delta_h(t)?, w, bound])?;
    }
    table.finish()
}
