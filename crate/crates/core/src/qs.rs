//! Inertial Q-tensor hydrodynamics: tendencies, an IMEX stepper, and the
//! energy and dissipation diagnostics.

use serde::{Deserialize, Serialize};

use crate::bridge::Certificate;
use crate::error::{Error, Result};
use crate::imex::{solve_diffusion, Pair};
use crate::landau::{bulk_gradient, distortion_stress_point, elastic_operator, free_energy, TensorGradient};
use crate::params::MaterialParams;
use crate::spectral::{DiffContext, Mat3Field, TensorField, VectorField};
use crate::tensor::{commutator, sym_traceless, Mat3, QTensor};

#[derive(Debug, Clone, PartialEq)]
pub struct QsState {
    pub q: TensorField,
    /// Material derivative of q.
    pub qdot: TensorField,
    pub v: VectorField,
    pub t: f64,
}

impl QsState {
    pub fn check(&self, ctx: &DiffContext) -> Result<()> {
        ctx.check(&self.q)?;
        ctx.check(&self.qdot)?;
        ctx.check(&self.v)
    }

    /// a + w (b - a), time included.
    pub fn lerp(&self, other: &QsState, w: f64) -> QsState {
        QsState {
            q: self.q.axpy(w, &other.q.sub(&self.q)),
            qdot: self.qdot.axpy(w, &other.qdot.sub(&self.qdot)),
            v: self.v.axpy(w, &other.v.sub(&self.v)),
            t: self.t + w * (other.t - self.t),
        }
    }

    fn is_finite(&self) -> bool {
        self.q.is_finite() && self.qdot.is_finite() && self.v.is_finite()
    }
}

fn default_theta() -> f64 {
    0.5
}

fn default_safety() -> f64 {
    1.0
}

fn default_cfl() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsConfig {
    pub params: MaterialParams,
    pub dt: f64,
    pub t_end: f64,
    /// 0.5 gives the second-order predictor-corrector; other values the
    /// first-order theta scheme.
    #[serde(default = "default_theta")]
    pub imex_theta: f64,
    /// Steps between snapshots, 0 for none.
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "default_safety")]
    pub stiffness_safety: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Fraction of the anisotropic viscosity bound added to the implicit
    /// Stokes term and subtracted explicitly.
    #[serde(default = "default_stabilization")]
    pub viscous_stabilization: f64,
}

fn default_stabilization() -> f64 {
    STABILIZATION
}

/// Default fraction of the anisotropic viscosity moved into the implicit part.
pub const STABILIZATION: f64 = 0.5;

impl QsConfig {
    pub fn new(params: MaterialParams, dt: f64, t_end: f64) -> Self {
        QsConfig {
            params,
            dt,
            t_end,
            imex_theta: 0.5,
            snapshot_every: 0,
            stiffness_safety: 1.0,
            cfl: 0.5,
            dealias: true,
            viscous_stabilization: STABILIZATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need dt > 0 and t_end >= 0 (dt = {}, t_end = {})",
                self.dt, self.t_end
            )));
        }
        if !(0.0..=1.0).contains(&self.imex_theta) {
            return Err(Error::InvalidConfig(format!("imex_theta = {} is outside [0, 1]", self.imex_theta)));
        }
        if !(self.viscous_stabilization >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "viscous_stabilization = {} must be >= 0",
                self.viscous_stabilization
            )));
        }
        Ok(())
    }

    pub fn certificate(&self) -> Certificate {
        self.params.certificate()
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QsTendency {
    pub dq: TensorField,
    pub dqdot: TensorField,
    pub dv: VectorField,
}

/// Viscous stress for the given Q, strain D and co-rotational rate N.
pub fn viscous_stress(q: &Mat3, d: &Mat3, n: &Mat3, p: &MaterialParams) -> Mat3 {
    let vp = &p.viscosity;
    let q2 = q.dot(q);
    vp.beta1 * q.ddot(d) * *q
        + vp.beta4 * *d
        + vp.beta5 * d.dot(q)
        + vp.beta6 * q.dot(d)
        + vp.beta7 * (d.dot(&q2) + q2.dot(d))
        + (vp.mu2 / 2.0) * *n
        + vp.mu1 * commutator(q, n)
}

/// Pointwise dissipation density, non-positive for admissible viscosities.
pub fn dissipation_density(q: &QTensor, qdot: &QTensor, grad_v: &Mat3, p: &MaterialParams) -> f64 {
    let vp = &p.viscosity;
    let d = grad_v.sym();
    let w = grad_v.antisym();
    let q = q.mat();
    let dq = d.dot(q);
    let rot = *qdot.mat() - commutator(&w, q) + (vp.mu2 / (2.0 * vp.mu1)) * d;
    -vp.beta1 * q.ddot(&d).powi(2)
        - (vp.beta4 - vp.mu2 * vp.mu2 / (4.0 * vp.mu1)) * d.norm_sq()
        - (vp.beta5 + vp.beta6) * dq.ddot(&d)
        - 2.0 * vp.beta7 * dq.norm_sq()
        - vp.mu1 * rot.norm_sq()
}

fn finite_or_blowup<const N: usize>(f: &crate::spectral::Field<N>, t: f64) -> Result<()> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(Error::StateBlowup(t))
    }
}

pub fn qs_rhs(s: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<QsTendency> {
    s.check(ctx)?;
    p.validate()?;
    let vp = &p.viscosity;
    let grid = *ctx.grid();
    let lq = elastic_operator(&s.q, &p.elastic, ctx)?;
    let gq = TensorGradient::new(&s.q, ctx)?;
    let gv = ctx.velocity_gradient(&s.v)?;
    let mut dqdot = TensorField::zeros(grid);
    let mut sigma = Mat3Field::zeros(grid);
    for idx in 0..grid.len() {
        let q = s.q.q(idx);
        let qd = s.qdot.q(idx);
        let g = gv.mat(idx);
        let d = g.sym();
        let w = g.antisym();
        let rot = commutator(&w, q.mat());
        let h = -(bulk_gradient(&q, &p.bulk).scale(1.0 / p.eps) + lq.q(idx));
        let acc = h - sym_traceless(&d).scale(vp.mu2 / 2.0) + sym_traceless(&rot).scale(vp.mu1) - qd.scale(vp.mu1);
        dqdot.set_q(idx, &acc.scale(1.0 / vp.j));
        let n = *qd.mat() - rot;
        let dg = gq.at(idx);
        let total = viscous_stress(q.mat(), &d, &n, p) + distortion_stress_point(&dg, &dg, &p.elastic);
        // the isotropic part only feeds the pressure
        sigma.set_mat(idx, &total.deviatoric());
    }
    let dqdot = dqdot.sub(&ctx.advect_raw(&s.v, &s.qdot)?);
    let dq = s.qdot.sub(&ctx.advect_raw(&s.v, &s.q)?);
    let force = ctx.div_tensor(&sigma)?.sub(&ctx.advect_raw(&s.v, &s.v)?);
    let dv = ctx.leray_project(&force)?;
    for f in [&dq, &dqdot] {
        finite_or_blowup(f, s.t)?;
    }
    finite_or_blowup(&dv, s.t)?;
    Ok(QsTendency { dq, dqdot, dv })
}

/// Stability figures for one step from state `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBounds {
    /// Largest dt the explicit bulk remainder tolerates.
    pub stiffness_dt: f64,
    /// max|v| dt / min(dx, dy).
    pub cfl: f64,
}

pub fn qs_bounds(s: &QsState, cfg: &QsConfig) -> StepBounds {
    let p = &cfg.params;
    let qmax = s.q.max_norm();
    let rate = (2.0 * p.bulk.b.abs() * qmax + 3.0 * p.bulk.c * qmax * qmax) / (p.viscosity.j * p.eps);
    let stiffness_dt = if rate > 0.0 { cfg.stiffness_safety / rate.sqrt() } else { f64::INFINITY };
    let g = s.v.grid();
    let vmax = (0..s.v.len())
        .map(|i| {
            let v = s.v.vec3(i);
            v[0].abs().max(v[1].abs())
        })
        .fold(0.0, f64::max);
    StepBounds { stiffness_dt, cfl: vmax * cfg.dt / g.dx().min(g.dy()) }
}

/// Bound on |sigma_v - beta4 D| / |grad v| over tensors with |Q| <= qmax,
/// counting the rotation terms carried by the co-rotational rate.
pub fn anisotropic_viscosity_bound(qmax: f64, p: &MaterialParams) -> f64 {
    let vp = &p.viscosity;
    let q = qmax;
    vp.beta1.abs() * q * q
        + (vp.beta5.abs() + vp.beta6.abs() + vp.mu2.abs()) * q
        + 2.0 * vp.beta7.abs() * q * q
        + 4.0 * vp.mu1.abs() * q * q
}

/// Implicit pair and Stokes viscosity for a step starting from a state with |Q| <= qmax.
fn implicit_parts(p: &MaterialParams, cfg: &QsConfig, qmax: f64) -> (Pair, f64) {
    let vp = &p.viscosity;
    let pair = Pair { g0: p.bulk.a / (p.eps * vp.j), g1: p.elastic.l1 / vp.j, m: vp.mu1 / vp.j };
    (pair, vp.beta4 / 2.0 + cfg.viscous_stabilization * anisotropic_viscosity_bound(qmax, p))
}

/// Explicit remainder F(u) - A u, optionally truncated to the 2/3 band.
fn explicit_part(s: &QsState, cfg: &QsConfig, ctx: &DiffContext, qmax: f64) -> Result<QsTendency> {
    let f = qs_rhs(s, &cfg.params, ctx)?;
    let (pair, nu) = implicit_parts(&cfg.params, cfg, qmax);
    let (aq, aqd) = pair.apply(ctx, &s.q, &s.qdot)?;
    let av = ctx.laplacian(&s.v)?.scaled(nu);
    let mut n = QsTendency { dq: f.dq.sub(&aq), dqdot: f.dqdot.sub(&aqd), dv: f.dv.sub(&av) };
    if cfg.dealias {
        n = QsTendency { dq: ctx.dealias(&n.dq)?, dqdot: ctx.dealias(&n.dqdot)?, dv: ctx.dealias(&n.dv)? };
    }
    Ok(n)
}

/// Solves (I - c A) u = r and re-projects the velocity.
fn implicit_solve(r: &QsState, c: f64, cfg: &QsConfig, ctx: &DiffContext, qmax: f64) -> Result<QsState> {
    let (pair, nu) = implicit_parts(&cfg.params, cfg, qmax);
    let (q, qdot) = pair.solve(ctx, &r.q, &r.qdot, c).map_err(|e| match e {
        Error::StiffnessViolation { .. } => Error::StiffnessViolation { dt: cfg.dt, bound: f64::NAN },
        e => e,
    })?;
    let v = ctx.leray_project(&solve_diffusion(ctx, &r.v, nu, c)?)?;
    Ok(QsState { q, qdot, v, t: r.t })
}

fn add_scaled(s: &QsState, c: f64, n: &QsTendency) -> QsState {
    QsState { q: s.q.axpy(c, &n.dq), qdot: s.qdot.axpy(c, &n.dqdot), v: s.v.axpy(c, &n.dv), t: s.t }
}

/// One IMEX step. The linear part A holds (a/eps) Q, the L1 Laplacian, the
/// mu1 damping of qdot and the beta4/2 Stokes term.
pub fn qs_step(s: &QsState, cfg: &QsConfig, ctx: &DiffContext) -> Result<QsState> {
    cfg.validate()?;
    s.check(ctx)?;
    let b = qs_bounds(s, cfg);
    if b.cfl > cfg.cfl {
        return Err(Error::CflViolation(b.cfl, cfg.cfl));
    }
    if cfg.dt > b.stiffness_dt {
        return Err(Error::StiffnessViolation { dt: cfg.dt, bound: b.stiffness_dt });
    }
    let dt = cfg.dt;
    let qmax = s.q.max_norm();
    let (pair, nu) = implicit_parts(&cfg.params, cfg, qmax);
    let apply_a = |u: &QsState| -> Result<QsTendency> {
        let (aq, aqd) = pair.apply(ctx, &u.q, &u.qdot)?;
        Ok(QsTendency { dq: aq, dqdot: aqd, dv: ctx.laplacian(&u.v)?.scaled(nu) })
    };
    let n0 = explicit_part(s, cfg, ctx, qmax)?;
    let mut out = if cfg.imex_theta == 0.5 {
        let h = dt / 2.0;
        let star = implicit_solve(&add_scaled(s, h, &n0), h, cfg, ctx, qmax)?;
        let n1 = explicit_part(&star, cfg, ctx, qmax)?;
        let rhs = add_scaled(&add_scaled(s, h, &apply_a(s)?), dt, &n1);
        implicit_solve(&rhs, h, cfg, ctx, qmax)?
    } else {
        let th = cfg.imex_theta;
        let rhs = add_scaled(&add_scaled(s, (1.0 - th) * dt, &apply_a(s)?), dt, &n0);
        implicit_solve(&rhs, th * dt, cfg, ctx, qmax)?
    };
    out.t = s.t + dt;
    if !out.is_finite() {
        return Err(Error::StateBlowup(out.t));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub kinetic: f64,
    pub inertial: f64,
    pub free: f64,
    pub total: f64,
}

pub fn qs_energy(s: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<EnergyReport> {
    s.check(ctx)?;
    let kinetic = 0.5 * s.v.inner(&s.v);
    let inertial = 0.5 * p.viscosity.j * s.qdot.inner(&s.qdot);
    let free = free_energy(&s.q, &p.bulk, &p.elastic, p.eps, ctx)?;
    Ok(EnergyReport { kinetic, inertial, free, total: kinetic + inertial + free })
}

/// Integrated dissipation rate R at state `s`.
pub fn qs_dissipation_rate(s: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<f64> {
    s.check(ctx)?;
    let gv = ctx.velocity_gradient(&s.v)?;
    let sum: f64 = (0..s.q.len()).map(|i| dissipation_density(&s.q.q(i), &s.qdot.q(i), &gv.mat(i), p)).sum();
    Ok(sum * ctx.grid().weight())
}

/// |(E1 - E0)/dt - R(midpoint)|.
pub fn qs_dissipation_residual(s0: &QsState, s1: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<f64> {
    Ok(qs_dissipation_check(s0, s1, p, ctx)?.1)
}

/// (R at the midpoint, residual).
pub fn qs_dissipation_check(s0: &QsState, s1: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<(f64, f64)> {
    s0.check(ctx)?;
    s1.check(ctx)?;
    let dt = s1.t - s0.t;
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("states are not ordered in time (dt = {dt})")));
    }
    let e0 = qs_energy(s0, p, ctx)?.total;
    let e1 = qs_energy(s1, p, ctx)?.total;
    let r = qs_dissipation_rate(&s0.lerp(s1, 0.5), p, ctx)?;
    Ok((r, ((e1 - e0) / dt - r).abs()))
}

/// One row of the per-step series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QsRow {
    pub t: f64,
    pub e_kin: f64,
    pub e_inertial: f64,
    pub f_eps: f64,
    pub e_total: f64,
    pub r_mid: f64,
    pub residual: f64,
    pub max_q: f64,
    pub div_v_norm: f64,
}

pub fn qs_row(s0: &QsState, s1: &QsState, p: &MaterialParams, ctx: &DiffContext) -> Result<QsRow> {
    let e = qs_energy(s1, p, ctx)?;
    let (r_mid, residual) = qs_dissipation_check(s0, s1, p, ctx)?;
    Ok(QsRow {
        t: s1.t,
        e_kin: e.kinetic,
        e_inertial: e.inertial,
        f_eps: e.free,
        e_total: e.total,
        r_mid,
        residual,
        max_q: s1.q.max_norm(),
        div_v_norm: ctx.divergence(&s1.v)?.l2_norm(),
    })
}

/// Largest trace or asymmetry error of the stored tensors. Packed storage makes
/// this zero by construction; the check guards the unpacking.
pub fn structure_error(s: &QsState) -> f64 {
    (0..s.q.len()).map(|i| s.q.q(i).structure_residual().max(s.qdot.q(i).structure_residual())).fold(0.0, f64::max)
}

/// Advances `s` to `cfg.t_end`, calling `observe` after every step with the
/// previous and new state.
pub fn qs_run(
    s: QsState,
    cfg: &QsConfig,
    ctx: &DiffContext,
    mut observe: impl FnMut(&QsState, &QsState) -> Result<()>,
) -> Result<QsState> {
    cfg.validate()?;
    let mut cur = s;
    for _ in 0..cfg.steps() {
        let next = qs_step(&cur, cfg, ctx)?;
        observe(&cur, &next)?;
        cur = next;
    }
    Ok(cur)
}
