//! Single-model runs and the snapshot energy validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bridge::{check_el_dissipative, check_qs_dissipative, Certificate, LeslieParams};
use crate::el::{el_energy, el_energy_check, el_row, el_run, el_step, unit_deviation, ElConfig, ElRow, ElState};
use crate::error::{Error, Result};
use crate::hilbert::build_well_prepared;
use crate::params::MaterialParams;
use crate::qs::{qs_dissipation_check, qs_energy, qs_row, qs_run, qs_step, structure_error, QsConfig, QsRow, QsState};
use crate::spectral::snapshot::Snapshot;
use crate::spectral::{DiffContext, PeriodicGrid, TensorField, VectorField};

use super::config::{DirectorParams, Recipe, SweepConfig};
use super::sweep::{el_snapshot, qs_snapshot, write_rows};

/// Relative slack for the per-step energy comparison.
pub const ENERGY_SLACK: f64 = 1e-10;

fn default_order() -> usize {
    1
}

/// Q-tensor run from well-prepared data built on a director recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsRunConfig {
    pub solver: QsConfig,
    pub grid: PeriodicGrid,
    pub recipe: Recipe,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElRunConfig {
    pub params: DirectorParams,
    pub dt: f64,
    pub t_end: f64,
    pub grid: PeriodicGrid,
    pub recipe: Recipe,
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default)]
    pub seed: u64,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
}

impl QsRunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: QsRunConfig = parse(text)?;
        cfg.solver.validate()?;
        cfg.grid.validate()?;
        Ok(cfg)
    }

    /// The demo parameters at eps = 0.5 with the smooth recipe on 32^2.
    pub fn demo() -> Self {
        QsRunConfig {
            solver: QsConfig::new(MaterialParams::demo(0.5), 2e-3, 1.0),
            grid: PeriodicGrid::square(32).expect("valid grid"),
            recipe: Recipe::smooth(),
            order: 1,
            seed: 0,
        }
    }
}

impl ElRunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ElRunConfig = parse(text)?;
        cfg.params.resolve()?;
        cfg.grid.validate()?;
        Ok(cfg)
    }

    pub fn demo() -> Self {
        ElRunConfig {
            params: DirectorParams::Mapped(MaterialParams::demo(0.1)),
            dt: 2e-3,
            t_end: 1.0,
            grid: PeriodicGrid::square(32).expect("valid grid"),
            recipe: Recipe::smooth(),
            snapshot_every: 0,
            seed: 0,
        }
    }

    pub fn solver(&self) -> Result<ElConfig> {
        Ok(ElConfig {
            snapshot_every: self.snapshot_every,
            ..ElConfig::new(self.params.resolve()?, self.dt, self.t_end)
        })
    }
}

/// Aggregates over one run; `max_unit_error` and `max_renormalization` are
/// zero for Q-tensor runs, `max_structure_error` for director runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub t_end: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_energy_increase: f64,
    pub max_r_mid: f64,
    pub max_dissipation_residual: f64,
    pub max_structure_error: f64,
    pub max_div_v: f64,
    pub max_unit_error: f64,
    pub max_renormalization: f64,
}

impl RunSummary {
    fn record(&mut self, e0: f64, e1: f64, r_mid: f64, residual: f64, div_v: f64) {
        self.steps += 1;
        self.final_energy = e1;
        self.max_energy_increase = self.max_energy_increase.max((e1 - e0) / e0.abs().max(1e-300));
        self.max_r_mid = self.max_r_mid.max(r_mid);
        self.max_dissipation_residual = self.max_dissipation_residual.max(residual);
        self.max_div_v = self.max_div_v.max(div_v);
    }

    /// Energy never rose beyond the slack.
    pub fn energy_stable(&self) -> bool {
        self.max_energy_increase <= ENERGY_SLACK
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunConfigEcho {
    Qs { config: QsRunConfig },
    El { config: ElRunConfig, leslie: LeslieParams },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: RunConfigEcho,
    pub certificate: Certificate,
    pub summary: RunSummary,
    #[serde(skip)]
    pub qs_rows: Vec<QsRow>,
    #[serde(skip)]
    pub el_rows: Vec<ElRow>,
    #[serde(skip)]
    pub snapshots: Vec<(String, Snapshot)>,
}

fn refuse(c: &Certificate, force: bool) -> Result<()> {
    match c.first_failure() {
        Some(name) if !force => Err(Error::CertificateRefused(format!("{} clause '{name}'", c.model))),
        _ => Ok(()),
    }
}

fn snapshot_name(step: usize) -> String {
    format!("step_{step:06}.qsf")
}

pub fn simulate_qs(cfg: &QsRunConfig, force: bool) -> Result<RunReport> {
    let p = cfg.solver.params;
    let certificate = check_qs_dissipative(&p.viscosity);
    refuse(&certificate, force)?;
    let ctx = DiffContext::new(cfg.grid)?;
    let el0 = cfg.recipe.build(&ctx, cfg.seed)?;
    let start = build_well_prepared(&el0.n, &el0.ndot, &el0.v, &p, cfg.order, &ctx)?;
    let e_start = qs_energy(&start, &p, &ctx)?.total;
    let mut summary = RunSummary {
        t_end: cfg.solver.t_end,
        initial_energy: e_start,
        final_energy: e_start,
        max_structure_error: structure_error(&start),
        max_div_v: ctx.divergence(&start.v)?.max_abs(),
        max_r_mid: f64::NEG_INFINITY,
        ..RunSummary::default()
    };
    let every = cfg.solver.snapshot_every;
    let mut snapshots = Vec::new();
    if every > 0 {
        snapshots.push((snapshot_name(0), qs_snapshot(&start)));
    }
    let mut rows = Vec::with_capacity(cfg.solver.steps());
    qs_run(start, &cfg.solver, &ctx, |a, b| {
        let e0 = summary.final_energy;
        let row = qs_row(a, b, &p, &ctx)?;
        summary.record(e0, row.e_total, row.r_mid, row.residual, row.div_v_norm);
        summary.max_structure_error = summary.max_structure_error.max(structure_error(b));
        rows.push(row);
        if every > 0 && summary.steps.is_multiple_of(every) {
            snapshots.push((snapshot_name(summary.steps), qs_snapshot(b)));
        }
        Ok(())
    })?;
    Ok(RunReport {
        config: RunConfigEcho::Qs { config: cfg.clone() },
        certificate,
        summary,
        qs_rows: rows,
        el_rows: vec![],
        snapshots,
    })
}

pub fn simulate_el(cfg: &ElRunConfig, force: bool) -> Result<RunReport> {
    let ecfg = cfg.solver()?;
    let lp = ecfg.leslie;
    let certificate = check_el_dissipative(&lp)?;
    refuse(&certificate, force)?;
    let ctx = DiffContext::new(cfg.grid)?;
    let start = cfg.recipe.build(&ctx, cfg.seed)?;
    let e_start = el_energy(&start, &lp, &ctx)?.total;
    let mut summary = RunSummary {
        t_end: cfg.t_end,
        initial_energy: e_start,
        final_energy: e_start,
        max_div_v: ctx.divergence(&start.v)?.max_abs(),
        max_unit_error: unit_deviation(&start.n),
        max_r_mid: f64::NEG_INFINITY,
        ..RunSummary::default()
    };
    let mut snapshots = Vec::new();
    if cfg.snapshot_every > 0 {
        snapshots.push((snapshot_name(0), el_snapshot(&start)));
    }
    let mut rows = Vec::with_capacity(ecfg.steps());
    el_run(start, &ecfg, &ctx, |a, b, corr| {
        let e0 = summary.final_energy;
        let row = el_row(a, b, &lp, &ctx)?;
        let (r_mid, _) = el_energy_check(a, b, &lp, &ctx)?;
        summary.record(e0, row.e_total, r_mid, row.residual, ctx.divergence(&b.v)?.max_abs());
        summary.max_unit_error = summary.max_unit_error.max(unit_deviation(&b.n));
        summary.max_renormalization = summary.max_renormalization.max(corr.renormalization);
        rows.push(row);
        if cfg.snapshot_every > 0 && summary.steps.is_multiple_of(cfg.snapshot_every) {
            snapshots.push((snapshot_name(summary.steps), el_snapshot(b)));
        }
        Ok(())
    })?;
    let config = RunConfigEcho::El { config: cfg.clone(), leslie: lp };
    Ok(RunReport { config, certificate, summary, qs_rows: vec![], el_rows: rows, snapshots })
}

/// Writes summary.json, series.csv and the snapshots.
pub fn write_run(report: &RunReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("summary.json"), json + "\n")?;
    match report.config {
        RunConfigEcho::Qs { .. } => write_rows(&dir.join("series.csv"), &report.qs_rows)?,
        RunConfigEcho::El { .. } => write_rows(&dir.join("series.csv"), &report.el_rows)?,
    }
    for (name, snap) in &report.snapshots {
        snap.write(&dir.join(name))?;
    }
    Ok(())
}

/// One step from a stored snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotCheck {
    pub file: String,
    pub t: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    pub r_mid: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyValidation {
    pub checks: Vec<SnapshotCheck>,
    pub max_residual: f64,
    pub passed: bool,
}

fn comps<const N: usize>(snap: &Snapshot, from: usize) -> [Vec<f64>; N] {
    std::array::from_fn(|c| snap.data[from + c].clone())
}

pub fn qs_state_from(snap: &Snapshot) -> Result<QsState> {
    if snap.data.len() != 13 {
        return Err(Error::Snapshot(format!("expected 13 Q-tensor components, found {}", snap.data.len())));
    }
    Ok(QsState {
        q: TensorField::from_comps(snap.grid, comps(snap, 0)),
        qdot: TensorField::from_comps(snap.grid, comps(snap, 5)),
        v: VectorField::from_comps(snap.grid, comps(snap, 10)),
        t: snap.time,
    })
}

pub fn el_state_from(snap: &Snapshot) -> Result<ElState> {
    if snap.data.len() != 9 {
        return Err(Error::Snapshot(format!("expected 9 director components, found {}", snap.data.len())));
    }
    Ok(ElState {
        n: VectorField::from_comps(snap.grid, comps(snap, 0)),
        ndot: VectorField::from_comps(snap.grid, comps(snap, 3)),
        v: VectorField::from_comps(snap.grid, comps(snap, 6)),
        t: snap.time,
    })
}

fn snapshot_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qsf"))
        .collect();
    files.sort();
    Ok(files)
}

enum Model {
    Qs(QsConfig),
    El(ElConfig),
}

fn check_one(path: &Path, model: &Model) -> Result<SnapshotCheck> {
    let snap = Snapshot::read(path)?;
    let ctx = DiffContext::new(snap.grid)?;
    let (e0, e1, r_mid, residual) = match model {
        Model::Qs(cfg) => {
            let s0 = qs_state_from(&snap)?;
            let s1 = qs_step(&s0, cfg, &ctx)?;
            let (r, res) = qs_dissipation_check(&s0, &s1, &cfg.params, &ctx)?;
            (qs_energy(&s0, &cfg.params, &ctx)?.total, qs_energy(&s1, &cfg.params, &ctx)?.total, r, res)
        }
        Model::El(cfg) => {
            let s0 = el_state_from(&snap)?;
            let s1 = el_step(&s0, cfg, &ctx)?;
            let (r, res) = el_energy_check(&s0, &s1, &cfg.leslie, &ctx)?;
            (el_energy(&s0, &cfg.leslie, &ctx)?.total, el_energy(&s1, &cfg.leslie, &ctx)?.total, r, res)
        }
    };
    let scale = e0.abs().max(1.0);
    Ok(SnapshotCheck {
        file: path.display().to_string(),
        t: snap.time,
        energy_before: e0,
        energy_after: e1,
        r_mid,
        residual,
        passed: r_mid <= ENERGY_SLACK * scale && e1 <= e0 + ENERGY_SLACK * e0.abs().max(1e-300),
    })
}

fn value<T: for<'de> Deserialize<'de>>(v: &serde_json::Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Models to replay for a directory written by a run or by a sweep.
fn models_in(dir: &Path) -> Result<Vec<(PathBuf, Model)>> {
    let read_json = |name: &str| -> Result<serde_json::Value> {
        let text = std::fs::read_to_string(dir.join(name))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{name}: {e}")))
    };
    if dir.join("summary.json").exists() {
        let v = read_json("summary.json")?;
        let model = match v["config"]["kind"].as_str() {
            Some("qs") => {
                let cfg: QsRunConfig = value(&v["config"]["config"])?;
                Model::Qs(cfg.solver)
            }
            Some("el") => {
                let cfg: ElRunConfig = value(&v["config"]["config"])?;
                Model::El(cfg.solver()?)
            }
            _ => return Err(Error::InvalidConfig("summary.json has no recognised config kind".into())),
        };
        return Ok(vec![(dir.to_path_buf(), model)]);
    }
    if dir.join("report.json").exists() {
        let v = read_json("report.json")?;
        let cfg: SweepConfig = value(&v["config"])?;
        let dt = cfg.shared_dt();
        let mut out = vec![(dir.join("el"), Model::El(ElConfig::new(cfg.params.leslie()?, dt, cfg.t_end)))];
        for &eps in &cfg.epsilons {
            let p = MaterialParams { eps, ..cfg.params };
            out.push((dir.join(format!("qs_eps_{eps}")), Model::Qs(QsConfig::new(p, dt, cfg.t_end))));
        }
        return Ok(out);
    }
    Err(Error::InvalidConfig(format!("{} holds neither summary.json nor report.json", dir.display())))
}

/// Takes one step from every stored snapshot and checks the energy law.
pub fn validate_energy(dir: &Path) -> Result<EnergyValidation> {
    let mut checks = Vec::new();
    for (sub, model) in models_in(dir)? {
        if !sub.is_dir() {
            continue;
        }
        for f in snapshot_files(&sub)? {
            checks.push(check_one(&f, &model)?);
        }
    }
    if checks.is_empty() {
        return Err(Error::InvalidConfig(format!("no snapshots under {}", dir.display())));
    }
    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let passed = checks.iter().all(|c| c.passed);
    Ok(EnergyValidation { checks, max_residual, passed })
}
