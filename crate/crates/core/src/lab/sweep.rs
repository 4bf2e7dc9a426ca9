use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::bridge::{check_el_dissipative, check_qs_dissipative, Certificate, LeslieParams};
use crate::el::{el_row, el_run, ElConfig, ElRow, ElState};
use crate::error::{Error, Result};
use crate::hilbert::{build_well_prepared, remainder_energy, uniaxial_field};
use crate::landau::project_out_field;
use crate::params::MaterialParams;
use crate::qs::{qs_row, qs_run, structure_error, QsConfig, QsRow, QsState};
use crate::spectral::snapshot::Snapshot;
use crate::spectral::DiffContext;

use super::config::SweepConfig;
use super::fit::{fit_order, OrderFit};

/// Comparison of one Q-tensor run against the director reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSeries {
    pub eps: f64,
    pub t: Vec<f64>,
    pub e_q: Vec<f64>,
    pub e_q_linf: Vec<f64>,
    pub e_v: Vec<f64>,
    pub e_out: Vec<f64>,
    pub ef: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSummary {
    pub eps: f64,
    pub sup_e_q: f64,
    /// e_Q at the last output time; the supremum is often attained at t = 0.
    pub final_e_q: f64,
    pub sup_e_q_linf: f64,
    pub sup_e_v: f64,
    pub sup_e_out: f64,
    pub sup_e_out_over_eps: f64,
    pub max_ef: f64,
    pub max_structure_error: f64,
    pub max_div_v: f64,
    pub max_energy_increase: f64,
    pub max_dissipation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepChecks {
    pub monotone_q: bool,
    pub decreasing_v: bool,
    pub e_out_over_eps_bounded: bool,
    pub ef_bounded: bool,
    /// Pairwise orders of sup e_Q differ by less than 0.25 over the last two pairs.
    pub asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub qs_certificate: Certificate,
    pub el_certificate: Certificate,
    pub leslie: LeslieParams,
    pub dt: f64,
    pub output_times: Vec<f64>,
    pub runs: Vec<EpsSummary>,
    pub fitted_order_q: Option<OrderFit>,
    pub fitted_order_v: Option<OrderFit>,
    pub fitted_order_q_final: Option<OrderFit>,
    pub checks: SweepChecks,
    pub el_max_renormalization: f64,
    pub el_max_unit_error: f64,
    #[serde(skip)]
    pub series: Vec<EpsSeries>,
    #[serde(skip)]
    pub qs_rows: Vec<Vec<QsRow>>,
    #[serde(skip)]
    pub el_rows: Vec<ElRow>,
    #[serde(skip)]
    pub snapshots: Vec<(String, Snapshot)>,
}

/// Values below this are treated as zero by the boundedness checks.
const NOISE: f64 = 1e-12;

/// Growth allowed per eps step for a quantity called bounded; an O(1/eps)
/// quantity would double under halving.
const BOUNDED_GROWTH: f64 = 1.5;

fn bounded(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= NOISE || w[1] <= BOUNDED_GROWTH * w[0].max(NOISE))
}

fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] || w[1] <= NOISE)
}

pub(crate) fn qs_snapshot(s: &QsState) -> Snapshot {
    let mut data: Vec<Vec<f64>> = Vec::with_capacity(13);
    let mut names = Vec::with_capacity(13);
    for (pre, f) in [("q", &s.q), ("qdot", &s.qdot)] {
        for (c, suf) in ["11", "12", "13", "22", "23"].iter().enumerate() {
            names.push(format!("{pre}{suf}"));
            data.push(f.comp(c).to_vec());
        }
    }
    for (c, n) in ["vx", "vy", "vz"].iter().enumerate() {
        names.push(n.to_string());
        data.push(s.v.comp(c).to_vec());
    }
    Snapshot { grid: *s.q.grid(), time: s.t, names, data }
}

pub(crate) fn el_snapshot(s: &ElState) -> Snapshot {
    let mut data = Vec::with_capacity(9);
    let mut names = Vec::with_capacity(9);
    for (pre, f) in [("n", &s.n), ("ndot", &s.ndot), ("v", &s.v)] {
        for (c, suf) in ["x", "y", "z"].iter().enumerate() {
            names.push(format!("{pre}{suf}"));
            data.push(f.comp(c).to_vec());
        }
    }
    Snapshot { grid: *s.n.grid(), time: s.t, names, data }
}

struct EpsRun {
    series: EpsSeries,
    summary: EpsSummary,
    rows: Vec<QsRow>,
    snapshots: Vec<(String, Snapshot)>,
}

fn run_one(cfg: &SweepConfig, eps: f64, dt: f64, reference: &[ElState], ctx: &DiffContext) -> Result<EpsRun> {
    let p = MaterialParams { eps, ..cfg.params };
    let s = p.s1()?;
    let el0 = &reference[0];
    let start = build_well_prepared(&el0.n, &el0.ndot, &el0.v, &p, cfg.order, ctx)?;
    let qcfg = QsConfig { snapshot_every: cfg.snapshot_every, ..QsConfig::new(p, dt, cfg.t_end) };
    let mut series =
        EpsSeries { eps, t: vec![], e_q: vec![], e_q_linf: vec![], e_v: vec![], e_out: vec![], ef: vec![] };
    let mut compare = |q: &QsState, el: &ElState| -> Result<()> {
        let q0 = uniaxial_field(&el.n, s)?;
        let dq = q.q.sub(&q0);
        series.t.push(q.t);
        series.e_q.push(dq.l2_norm());
        series.e_q_linf.push(dq.max_norm());
        series.e_v.push(q.v.sub(&el.v).l2_norm());
        series.e_out.push(project_out_field(&el.n, &dq)?.l2_norm());
        series.ef.push(remainder_energy(q, el, &p, cfg.order, ctx)?);
        Ok(())
    };
    compare(&start, el0)?;
    let mut step = 0usize;
    let mut rows = Vec::with_capacity(qcfg.steps());
    let mut snapshots = Vec::new();
    let mut max_structure = structure_error(&start);
    let mut max_div: f64 = ctx.divergence(&start.v)?.max_abs();
    let mut max_increase: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    let tag = format!("qs_eps_{eps}");
    if cfg.snapshot_every > 0 {
        snapshots.push((format!("{tag}/step_{:06}.qsf", 0), qs_snapshot(&start)));
    }
    qs_run(start, &qcfg, ctx, |a, b| {
        step += 1;
        let row = qs_row(a, b, &p, ctx)?;
        let e0 = rows.last().map(|r: &QsRow| r.e_total).unwrap_or(crate::qs::qs_energy(a, &p, ctx)?.total);
        max_increase = max_increase.max((row.e_total - e0) / e0.abs().max(1e-300));
        max_residual = max_residual.max(row.residual);
        max_structure = max_structure.max(structure_error(b));
        max_div = max_div.max(ctx.divergence(&b.v)?.max_abs());
        rows.push(row);
        if step.is_multiple_of(cfg.output_every) {
            compare(b, &reference[step / cfg.output_every])?;
        }
        if cfg.snapshot_every > 0 && step.is_multiple_of(cfg.snapshot_every) {
            snapshots.push((format!("{tag}/step_{step:06}.qsf"), qs_snapshot(b)));
        }
        Ok(())
    })?;
    let sup = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let summary = EpsSummary {
        eps,
        sup_e_q: sup(&series.e_q),
        final_e_q: *series.e_q.last().expect("initial comparison recorded"),
        sup_e_q_linf: sup(&series.e_q_linf),
        sup_e_v: sup(&series.e_v),
        sup_e_out: sup(&series.e_out),
        sup_e_out_over_eps: sup(&series.e_out) / eps,
        max_ef: sup(&series.ef),
        max_structure_error: max_structure,
        max_div_v: max_div,
        max_energy_increase: max_increase,
        max_dissipation_residual: max_residual,
    };
    Ok(EpsRun { series, summary, rows, snapshots })
}

/// Integrates the director model once with mapped coefficients, then each
/// eps case from well-prepared data, comparing at shared output times.
pub fn run_sweep(cfg: &SweepConfig, force: bool) -> Result<SweepReport> {
    cfg.validate()?;
    let qs_certificate = check_qs_dissipative(&cfg.params.viscosity);
    let leslie = cfg.params.leslie()?;
    let el_certificate = check_el_dissipative(&leslie)?;
    if !force {
        for c in [&qs_certificate, &el_certificate] {
            if let Some(name) = c.first_failure() {
                return Err(Error::CertificateRefused(format!("{} clause '{name}'", c.model)));
            }
        }
    }
    let ctx = DiffContext::new(cfg.grid)?;
    let dt = cfg.shared_dt();
    let el0 = cfg.recipe.build(&ctx, cfg.seed)?;
    let ecfg = ElConfig::new(leslie, dt, cfg.t_end);
    let mut reference = vec![el0.clone()];
    let mut el_rows = Vec::with_capacity(ecfg.steps());
    let mut snapshots = Vec::new();
    let mut step = 0usize;
    let mut max_renorm: f64 = 0.0;
    if cfg.snapshot_every > 0 {
        snapshots.push((format!("el/step_{:06}.qsf", 0), el_snapshot(&el0)));
    }
    el_run(el0, &ecfg, &ctx, |a, b, corr| {
        step += 1;
        el_rows.push(el_row(a, b, &leslie, &ctx)?);
        max_renorm = max_renorm.max(corr.renormalization);
        if step.is_multiple_of(cfg.output_every) {
            reference.push(b.clone());
        }
        if cfg.snapshot_every > 0 && step.is_multiple_of(cfg.snapshot_every) {
            snapshots.push((format!("el/step_{step:06}.qsf"), el_snapshot(b)));
        }
        Ok(())
    })?;
    let el_max_unit_error = reference.iter().map(|s| crate::el::unit_deviation(&s.n)).fold(0.0, f64::max);
    let output_times = reference.iter().map(|s| s.t).collect();
    let runs: Vec<EpsRun> = cfg
        .epsilons
        .par_iter()
        .map(|&eps| run_one(cfg, eps, dt, &reference, &ctx).map_err(|e| Error::AtEpsilon { eps, source: Box::new(e) }))
        .collect::<Result<_>>()?;
    let summaries: Vec<EpsSummary> = runs.iter().map(|r| r.summary.clone()).collect();
    let pick = |f: fn(&EpsSummary) -> f64| -> Vec<f64> { summaries.iter().map(f).collect() };
    let sup_q = pick(|s| s.sup_e_q);
    let sup_v = pick(|s| s.sup_e_v);
    let final_q = pick(|s| s.final_e_q);
    let fit = |vals: &[f64]| -> Option<OrderFit> {
        let pts: Vec<(f64, f64)> = cfg.epsilons.iter().cloned().zip(vals.iter().cloned()).collect();
        fit_order(&pts).ok()
    };
    let fitted_order_q = fit(&sup_q);
    let asymptotic = fitted_order_q
        .as_ref()
        .map(|f| {
            f.pairwise.len() >= 2 && (f.pairwise[f.pairwise.len() - 1] - f.pairwise[f.pairwise.len() - 2]).abs() < 0.25
        })
        .unwrap_or(false);
    let checks = SweepChecks {
        monotone_q: non_increasing(&sup_q),
        decreasing_v: non_increasing(&sup_v),
        e_out_over_eps_bounded: bounded(&pick(|s| s.sup_e_out_over_eps)),
        ef_bounded: bounded(&pick(|s| s.max_ef)),
        asymptotic,
    };
    let mut series = Vec::new();
    let mut qs_rows = Vec::new();
    for r in runs {
        series.push(r.series);
        qs_rows.push(r.rows);
        snapshots.extend(r.snapshots);
    }
    Ok(SweepReport {
        config: cfg.clone(),
        qs_certificate,
        el_certificate,
        leslie,
        dt,
        output_times,
        runs: summaries,
        fitted_order_v: fit(&sup_v),
        fitted_order_q_final: fit(&final_q),
        fitted_order_q,
        checks,
        el_max_renormalization: max_renorm,
        el_max_unit_error,
        series,
        qs_rows,
        el_rows,
        snapshots,
    })
}

/// Writes report.json, series.csv, per-run step series and snapshots.
pub fn write_sweep(report: &SweepReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("report.json"), json + "\n")?;
    let mut w = csv::Writer::from_path(dir.join("series.csv")).map_err(csv_err)?;
    w.write_record(["eps", "t", "e_q", "e_q_linf", "e_v", "e_out", "ef"]).map_err(csv_err)?;
    for s in &report.series {
        for k in 0..s.t.len() {
            let rec = [s.eps, s.t[k], s.e_q[k], s.e_q_linf[k], s.e_v[k], s.e_out[k], s.ef[k]];
            w.write_record(rec.iter().map(|x| format!("{x:e}"))).map_err(csv_err)?;
        }
    }
    w.flush()?;
    for (s, rows) in report.series.iter().zip(&report.qs_rows) {
        let sub = dir.join(format!("qs_eps_{}", s.eps));
        std::fs::create_dir_all(&sub)?;
        write_rows(&sub.join("series.csv"), rows)?;
    }
    let el_dir = dir.join("el");
    std::fs::create_dir_all(&el_dir)?;
    write_rows(&el_dir.join("series.csv"), &report.el_rows)?;
    for (name, snap) in &report.snapshots {
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        snap.write(&path)?;
    }
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
