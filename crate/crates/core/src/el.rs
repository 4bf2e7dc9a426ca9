//! Inertial director hydrodynamics with four-constant Oseen-Frank elasticity.
//!
//! Convention shared with the Q-tensor solver: `(grad v)_ij = d_i v_j`,
//! `(div s)_i = d_j s_ji`, D and Omega the symmetric and antisymmetric parts of
//! grad v. Under it the Leslie stress enters the momentum balance transposed
//! relative to the usual index placement; `leslie_stress` returns that form.

use serde::{Deserialize, Serialize};

use crate::bridge::LeslieParams;
use crate::error::{Error, Result};
use crate::imex::{solve_diffusion, Pair};
use crate::spectral::{DiffContext, Mat3Field, VectorField};
use crate::tensor::{cross, dot, norm, Mat3, Vec3};
use crate::tolerance::TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct ElState {
    pub n: VectorField,
    /// Material derivative of n.
    pub ndot: VectorField,
    pub v: VectorField,
    pub t: f64,
}

impl ElState {
    pub fn check(&self, ctx: &DiffContext) -> Result<()> {
        ctx.check(&self.n)?;
        ctx.check(&self.ndot)?;
        ctx.check(&self.v)
    }

    /// Linear interpolation followed by renormalization of n and projection of
    /// ndot to the tangent plane.
    pub fn lerp(&self, other: &ElState, w: f64) -> ElState {
        let n = self.n.axpy(w, &other.n.sub(&self.n));
        let ndot = self.ndot.axpy(w, &other.ndot.sub(&self.ndot));
        let (n, _) = renormalize(&n);
        let (ndot, _) = tangentialize(&n, &ndot);
        ElState { n, ndot, v: self.v.axpy(w, &other.v.sub(&self.v)), t: self.t + w * (other.t - self.t) }
    }

    fn is_finite(&self) -> bool {
        self.n.is_finite() && self.ndot.is_finite() && self.v.is_finite()
    }
}

fn default_cfl() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElConfig {
    pub leslie: LeslieParams,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Fraction of the anisotropic Leslie viscosity added to the implicit
    /// Stokes term and subtracted explicitly.
    #[serde(default = "default_stabilization")]
    pub viscous_stabilization: f64,
}

fn default_stabilization() -> f64 {
    crate::qs::STABILIZATION
}

impl ElConfig {
    pub fn new(leslie: LeslieParams, dt: f64, t_end: f64) -> Self {
        ElConfig {
            leslie,
            dt,
            t_end,
            snapshot_every: 0,
            cfl: 0.5,
            dealias: true,
            viscous_stabilization: crate::qs::STABILIZATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_leslie(&self.leslie)?;
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need dt > 0 and t_end >= 0 (dt = {}, t_end = {})",
                self.dt, self.t_end
            )));
        }
        if !(self.viscous_stabilization >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "viscous_stabilization = {} must be >= 0",
                self.viscous_stabilization
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

fn check_leslie(lp: &LeslieParams) -> Result<()> {
    if !(lp.gamma1 > 0.0) {
        return Err(Error::DegenerateGamma(lp.gamma1));
    }
    if !(lp.inertia >= 0.0) {
        return Err(Error::InvalidConfig(format!("director inertia must be >= 0 (got {})", lp.inertia)));
    }
    Ok(())
}

/// Oseen-Frank density and its partial derivatives at (n, G), `G_ab = d_a n_b`.
struct Frank {
    energy: f64,
    /// dE/dn
    dn: Vec3,
    /// dE/dG
    dg: Mat3,
}

fn frank_point(n: &Vec3, g: &Mat3, lp: &LeslieParams) -> Frank {
    let d = g.trace();
    // curl n
    let w = [g.0[1][2] - g.0[2][1], g.0[2][0] - g.0[0][2], g.0[0][1] - g.0[1][0]];
    let nw = dot(n, &w);
    let n2 = dot(n, n);
    let w2 = dot(&w, &w);
    let gg: f64 = (0..3).map(|i| (0..3).map(|j| g.0[i][j] * g.0[j][i]).sum::<f64>()).sum();
    let (k1, k2, k3, k4) = (lp.k1, lp.k2, lp.k3, lp.k4);
    let energy =
        0.5 * k1 * d * d + 0.5 * k2 * nw * nw + 0.5 * k3 * (n2 * w2 - nw * nw) + 0.5 * (k2 + k4) * (gg - d * d);
    let dn = std::array::from_fn(|i| k2 * nw * w[i] + k3 * (w2 * n[i] - nw * w[i]));
    let p: Vec3 = std::array::from_fn(|i| k2 * nw * n[i] + k3 * (n2 * w[i] - nw * n[i]));
    let dg = Mat3::from_fn(|a, b| {
        if a == b {
            return k1 * d + (k2 + k4) * (g.0[a][a] - d);
        }
        // eps_iab p_i, i the remaining index
        let eps = if (a + 1) % 3 == b { 1.0 } else { -1.0 };
        eps * p[3 - a - b] + (k2 + k4) * g.0[b][a]
    });
    Frank { energy, dn, dg }
}

fn director_gradient(nf: &VectorField, ctx: &DiffContext) -> Result<Mat3Field> {
    ctx.velocity_gradient(nf)
}

/// Largest | |n| - 1 | over the grid.
pub fn unit_deviation(nf: &VectorField) -> f64 {
    (0..nf.len()).map(|i| (norm(&nf.vec3(i)) - 1.0).abs()).fold(0.0, f64::max)
}

fn check_unit(nf: &VectorField) -> Result<()> {
    let dev = unit_deviation(nf);
    if dev > TOL.range {
        return Err(Error::NonUnitField(dev));
    }
    Ok(())
}

/// Discrete Oseen-Frank energy. Defined for any field; the physical value
/// requires |n| = 1.
pub fn frank_energy(nf: &VectorField, lp: &LeslieParams, ctx: &DiffContext) -> Result<f64> {
    ctx.check(nf)?;
    let g = director_gradient(nf, ctx)?;
    let s: f64 = (0..nf.len()).map(|i| frank_point(&nf.vec3(i), &g.mat(i), lp).energy).sum();
    Ok(s * ctx.grid().weight())
}

/// h = -dE/dn + div(dE/dG), together with dE/dG for the Ericksen stress.
fn frank_terms(nf: &VectorField, lp: &LeslieParams, ctx: &DiffContext) -> Result<(VectorField, Mat3Field, Mat3Field)> {
    let g = director_gradient(nf, ctx)?;
    let mut pf = Mat3Field::zeros(*ctx.grid());
    let mut dn = VectorField::zeros(*ctx.grid());
    for i in 0..nf.len() {
        let f = frank_point(&nf.vec3(i), &g.mat(i), lp);
        pf.set_mat(i, &f.dg);
        dn.set_vec3(i, f.dn);
    }
    let h = ctx.div_tensor(&pf)?.sub(&dn);
    Ok((h, pf, g))
}

pub fn frank_molecular_field(nf: &VectorField, lp: &LeslieParams, ctx: &DiffContext) -> Result<VectorField> {
    ctx.check(nf)?;
    check_unit(nf)?;
    Ok(frank_terms(nf, lp, ctx)?.0)
}

/// sigma^E_ij = -(dE/dG)_ik G_jk.
pub fn ericksen_stress(nf: &VectorField, lp: &LeslieParams, ctx: &DiffContext) -> Result<Mat3Field> {
    ctx.check(nf)?;
    let (_, pf, g) = frank_terms(nf, lp, ctx)?;
    let mut out = Mat3Field::zeros(*ctx.grid());
    for i in 0..nf.len() {
        out.set_mat(i, &ericksen_point(&pf.mat(i), &g.mat(i)));
    }
    Ok(out)
}

fn ericksen_point(p: &Mat3, g: &Mat3) -> Mat3 {
    -p.dot(&g.transpose())
}

/// Leslie stress in divergence orientation for director n, co-rotational rate
/// N = ndot - Omega n and strain D.
pub fn leslie_stress(n: &Vec3, nrate: &Vec3, d: &Mat3, lp: &LeslieParams) -> Mat3 {
    let dn = d.apply(n);
    let nn = Mat3::outer(n, n);
    lp.alpha1 * nn.ddot(d) * nn
        + lp.alpha2 * Mat3::outer(nrate, n)
        + lp.alpha3 * Mat3::outer(n, nrate)
        + lp.alpha4 * *d
        + lp.alpha5 * Mat3::outer(&dn, n)
        + lp.alpha6 * Mat3::outer(n, &dn)
}

fn tangential(n: &Vec3, x: &Vec3) -> Vec3 {
    let c = dot(n, x);
    std::array::from_fn(|i| x[i] - c * n[i])
}

/// Co-rotational rate N = ndot - Omega n.
pub fn corotational(n: &Vec3, ndot: &Vec3, grad_v: &Mat3) -> Vec3 {
    let wn = grad_v.antisym().apply(n);
    std::array::from_fn(|i| ndot[i] - wn[i])
}

/// n'' from I n'' = h - gamma1 N - gamma2 D n + lambda n with the multiplier
/// fixed by d^2 |n|^2 / dt^2 = 0. Requires I > 0.
pub fn director_acceleration(n: &Vec3, ndot: &Vec3, h: &Vec3, grad_v: &Mat3, lp: &LeslieParams) -> Vec3 {
    let nr = corotational(n, ndot, grad_v);
    let dn = grad_v.sym().apply(n);
    let f: Vec3 = std::array::from_fn(|i| h[i] - lp.gamma1 * nr[i] - lp.gamma2 * dn[i]);
    let ft = tangential(n, &f);
    let nd2 = dot(ndot, ndot);
    std::array::from_fn(|i| ft[i] / lp.inertia - nd2 * n[i])
}

/// ndot of the overdamped (I = 0) balance gamma1 N = P(h - gamma2 D n).
pub fn overdamped_rate(n: &Vec3, h: &Vec3, grad_v: &Mat3, lp: &LeslieParams) -> Vec3 {
    let wn = grad_v.antisym().apply(n);
    let dn = grad_v.sym().apply(n);
    let f: Vec3 = std::array::from_fn(|i| h[i] - lp.gamma2 * dn[i]);
    let ft = tangential(n, &f);
    std::array::from_fn(|i| wn[i] + ft[i] / lp.gamma1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElTendency {
    pub dn: VectorField,
    pub dndot: VectorField,
    pub dv: VectorField,
    /// Solved n'' (zero when I = 0).
    pub nddot: VectorField,
}

/// Pointwise quantities shared by the tendency and the diagnostics.
struct Assembled {
    h: VectorField,
    gv: Mat3Field,
    nddot: VectorField,
    /// ndot used for transport: the state value, or the overdamped rate when I = 0.
    rate: VectorField,
    sigma: Mat3Field,
}

fn assemble(s: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<Assembled> {
    s.check(ctx)?;
    check_leslie(lp)?;
    check_unit(&s.n)?;
    let (h, pf, g) = frank_terms(&s.n, lp, ctx)?;
    let gv = ctx.velocity_gradient(&s.v)?;
    let grid = *ctx.grid();
    let mut nddot = VectorField::zeros(grid);
    let mut rate = VectorField::zeros(grid);
    let mut sigma = Mat3Field::zeros(grid);
    for i in 0..grid.len() {
        let n = s.n.vec3(i);
        let hv = h.vec3(i);
        let gvi = gv.mat(i);
        let nd = if lp.inertia > 0.0 {
            nddot.set_vec3(i, director_acceleration(&n, &s.ndot.vec3(i), &hv, &gvi, lp));
            s.ndot.vec3(i)
        } else {
            overdamped_rate(&n, &hv, &gvi, lp)
        };
        rate.set_vec3(i, nd);
        let nr = corotational(&n, &nd, &gvi);
        let st = leslie_stress(&n, &nr, &gvi.sym(), lp) + ericksen_point(&pf.mat(i), &g.mat(i));
        sigma.set_mat(i, &st.deviatoric());
    }
    Ok(Assembled { h, gv, nddot, rate, sigma })
}

pub fn el_rhs(s: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<ElTendency> {
    let a = assemble(s, lp, ctx)?;
    let dn = a.rate.sub(&ctx.advect_raw(&s.v, &s.n)?);
    let dndot =
        if lp.inertia > 0.0 { a.nddot.sub(&ctx.advect_raw(&s.v, &s.ndot)?) } else { VectorField::zeros(*ctx.grid()) };
    let force = ctx.div_tensor(&a.sigma)?.sub(&ctx.advect_raw(&s.v, &s.v)?);
    let dv = ctx.leray_project(&force)?;
    if !(dn.is_finite() && dndot.is_finite() && dv.is_finite()) {
        return Err(Error::StateBlowup(s.t));
    }
    Ok(ElTendency { dn, dndot, dv, nddot: a.nddot })
}

/// Renormalizes n pointwise; returns the largest correction | |n| - 1 |.
pub fn renormalize(nf: &VectorField) -> (VectorField, f64) {
    let dev = unit_deviation(nf);
    (
        nf.map_points(|p| {
            let l = norm(&p);
            std::array::from_fn(|i| p[i] / l)
        }),
        dev,
    )
}

/// Projects ndot to the tangent plane of n; returns the largest removed |n . ndot|.
pub fn tangentialize(nf: &VectorField, ndot: &VectorField) -> (VectorField, f64) {
    let mut out = VectorField::zeros(*nf.grid());
    let mut worst: f64 = 0.0;
    for i in 0..nf.len() {
        let n = nf.vec3(i);
        let d = ndot.vec3(i);
        worst = worst.max(dot(&n, &d).abs());
        out.set_vec3(i, tangential(&n, &d));
    }
    (out, worst)
}

/// Constraint corrections applied at the end of a step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Corrections {
    pub renormalization: f64,
    pub tangency: f64,
}

fn stiffest(lp: &LeslieParams) -> f64 {
    lp.k1.min(lp.k2).min(lp.k3).max(0.0)
}

struct Linear {
    pair: Option<Pair>,
    /// Diffusivity of n when I = 0.
    kappa: f64,
    nu: f64,
}

/// Bound on |sigma_L - alpha4 D| / |grad v| for unit n and ndot = 0.
pub fn anisotropic_leslie_bound(lp: &LeslieParams) -> f64 {
    lp.alpha1.abs() + lp.alpha2.abs() + lp.alpha3.abs() + lp.alpha5.abs() + lp.alpha6.abs()
}

fn linear(lp: &LeslieParams, stabilization: f64) -> Linear {
    let k = stiffest(lp);
    let nu = (lp.alpha4 / 2.0).max(0.0) + stabilization * anisotropic_leslie_bound(lp);
    if lp.inertia > 0.0 {
        Linear { pair: Some(Pair { g0: 0.0, g1: k / lp.inertia, m: lp.gamma1 / lp.inertia }), kappa: 0.0, nu }
    } else {
        Linear { pair: None, kappa: k / lp.gamma1, nu }
    }
}

fn apply_a(u: &ElState, lin: &Linear, ctx: &DiffContext) -> Result<ElTendency> {
    let dv = ctx.laplacian(&u.v)?.scaled(lin.nu);
    let (dn, dndot) = match &lin.pair {
        Some(p) => p.apply(ctx, &u.n, &u.ndot)?,
        None => (ctx.laplacian(&u.n)?.scaled(lin.kappa), VectorField::zeros(*ctx.grid())),
    };
    Ok(ElTendency { dn, dndot, dv, nddot: VectorField::zeros(*ctx.grid()) })
}

fn explicit_part(s: &ElState, cfg: &ElConfig, lin: &Linear, ctx: &DiffContext) -> Result<ElTendency> {
    let f = el_rhs(s, &cfg.leslie, ctx)?;
    let a = apply_a(s, lin, ctx)?;
    let mut n = ElTendency { dn: f.dn.sub(&a.dn), dndot: f.dndot.sub(&a.dndot), dv: f.dv.sub(&a.dv), nddot: f.nddot };
    if cfg.dealias {
        n.dn = ctx.dealias(&n.dn)?;
        n.dndot = ctx.dealias(&n.dndot)?;
        n.dv = ctx.dealias(&n.dv)?;
    }
    Ok(n)
}

fn add_scaled(s: &ElState, c: f64, n: &ElTendency) -> ElState {
    ElState { n: s.n.axpy(c, &n.dn), ndot: s.ndot.axpy(c, &n.dndot), v: s.v.axpy(c, &n.dv), t: s.t }
}

/// Solves (I - cA) u = r, then restores the constraints.
fn implicit_solve(
    r: &ElState,
    c: f64,
    lin: &Linear,
    lp: &LeslieParams,
    ctx: &DiffContext,
) -> Result<(ElState, Corrections)> {
    let (n, ndot) = match &lin.pair {
        Some(p) => p.solve(ctx, &r.n, &r.ndot, c)?,
        None => (solve_diffusion(ctx, &r.n, lin.kappa, c)?, r.ndot.clone()),
    };
    let v = ctx.leray_project(&solve_diffusion(ctx, &r.v, lin.nu, c)?)?;
    if !(n.is_finite() && ndot.is_finite() && v.is_finite()) {
        return Err(Error::StateBlowup(r.t));
    }
    let (n, renorm) = renormalize(&n);
    let (ndot, tangency) = if lp.inertia > 0.0 { tangentialize(&n, &ndot) } else { (ndot, 0.0) };
    let mut out = ElState { n, ndot, v, t: r.t };
    if lp.inertia == 0.0 {
        out.ndot = assemble(&out, lp, ctx)?.rate;
    }
    Ok((out, Corrections { renormalization: renorm, tangency }))
}

/// max|v| dt / min(dx, dy).
pub fn el_cfl(s: &ElState, dt: f64) -> f64 {
    let g = s.v.grid();
    let vmax = (0..s.v.len()).map(|i| s.v.vec3(i)[0].abs().max(s.v.vec3(i)[1].abs())).fold(0.0, f64::max);
    vmax * dt / g.dx().min(g.dy())
}

/// One predictor-corrector IMEX step with the constraint corrections it made.
pub fn el_step_logged(s: &ElState, cfg: &ElConfig, ctx: &DiffContext) -> Result<(ElState, Corrections)> {
    cfg.validate()?;
    s.check(ctx)?;
    let cfl = el_cfl(s, cfg.dt);
    if cfl > cfg.cfl {
        return Err(Error::CflViolation(cfl, cfg.cfl));
    }
    let lp = &cfg.leslie;
    let lin = linear(lp, cfg.viscous_stabilization);
    let dt = cfg.dt;
    let h = dt / 2.0;
    let n0 = explicit_part(s, cfg, &lin, ctx)?;
    let (star, _) = implicit_solve(&add_scaled(s, h, &n0), h, &lin, lp, ctx)?;
    let n1 = explicit_part(&star, cfg, &lin, ctx)?;
    let rhs = add_scaled(&add_scaled(s, h, &apply_a(s, &lin, ctx)?), dt, &n1);
    let (mut out, corr) = implicit_solve(&rhs, h, &lin, lp, ctx)?;
    out.t = s.t + dt;
    if !out.is_finite() {
        return Err(Error::StateBlowup(out.t));
    }
    Ok((out, corr))
}

pub fn el_step(s: &ElState, cfg: &ElConfig, ctx: &DiffContext) -> Result<ElState> {
    Ok(el_step_logged(s, cfg, ctx)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElEnergy {
    pub kinetic: f64,
    pub inertial: f64,
    pub frank: f64,
    pub total: f64,
}

pub fn el_energy(s: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<ElEnergy> {
    s.check(ctx)?;
    let kinetic = 0.5 * s.v.inner(&s.v);
    let inertial = 0.5 * lp.inertia * s.ndot.inner(&s.ndot);
    let frank = frank_energy(&s.n, lp, ctx)?;
    Ok(ElEnergy { kinetic, inertial, frank, total: kinetic + inertial + frank })
}

/// Integrated dissipation rate of the director energy law.
pub fn el_dissipation_rate(s: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<f64> {
    let a = assemble(s, lp, ctx)?;
    let (b1, b2, b3) = lp.dissipation_hats();
    let mut sum = 0.0;
    for i in 0..s.n.len() {
        let n = s.n.vec3(i);
        let d = a.gv.mat(i).sym();
        let dn = d.apply(&n);
        let h = a.h.vec3(i);
        let nd2 = a.nddot.vec3(i);
        let f: Vec3 = std::array::from_fn(|k| h[k] - lp.inertia * nd2[k]);
        let c = cross(&n, &f);
        sum +=
            b1 * Mat3::outer(&n, &n).ddot(&d).powi(2) + b2 * d.norm_sq() + b3 * dot(&dn, &dn) + dot(&c, &c) / lp.gamma1;
    }
    Ok(-sum * ctx.grid().weight())
}

/// (R at the midpoint, |(E1 - E0)/dt - R|).
pub fn el_energy_check(s0: &ElState, s1: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<(f64, f64)> {
    s0.check(ctx)?;
    s1.check(ctx)?;
    let dt = s1.t - s0.t;
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("states are not ordered in time (dt = {dt})")));
    }
    let e0 = el_energy(s0, lp, ctx)?.total;
    let e1 = el_energy(s1, lp, ctx)?.total;
    let r = el_dissipation_rate(&s0.lerp(s1, 0.5), lp, ctx)?;
    Ok((r, ((e1 - e0) / dt - r).abs()))
}

pub fn el_energy_residual(s0: &ElState, s1: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<f64> {
    Ok(el_energy_check(s0, s1, lp, ctx)?.1)
}

/// Solved n'' of a state (zero when I = 0).
pub fn el_acceleration(s: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<VectorField> {
    Ok(assemble(s, lp, ctx)?.nddot)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElRow {
    pub t: f64,
    pub e_kin: f64,
    pub e_inertial: f64,
    pub e_f: f64,
    pub e_total: f64,
    pub residual: f64,
    pub min_n: f64,
    pub max_n_dot_ndot: f64,
}

pub fn el_row(s0: &ElState, s1: &ElState, lp: &LeslieParams, ctx: &DiffContext) -> Result<ElRow> {
    let e = el_energy(s1, lp, ctx)?;
    let (_, residual) = el_energy_check(s0, s1, lp, ctx)?;
    let min_n = (0..s1.n.len()).map(|i| norm(&s1.n.vec3(i))).fold(f64::INFINITY, f64::min);
    let max_t = (0..s1.n.len()).map(|i| dot(&s1.n.vec3(i), &s1.ndot.vec3(i)).abs()).fold(0.0, f64::max);
    Ok(ElRow {
        t: s1.t,
        e_kin: e.kinetic,
        e_inertial: e.inertial,
        e_f: e.frank,
        e_total: e.total,
        residual,
        min_n,
        max_n_dot_ndot: max_t,
    })
}

/// Advances to `cfg.t_end`, calling `observe` with each (previous, new, corrections).
pub fn el_run(
    s: ElState,
    cfg: &ElConfig,
    ctx: &DiffContext,
    mut observe: impl FnMut(&ElState, &ElState, &Corrections) -> Result<()>,
) -> Result<ElState> {
    cfg.validate()?;
    let mut cur = s;
    for _ in 0..cfg.steps() {
        let (next, corr) = el_step_logged(&cur, cfg, ctx)?;
        observe(&cur, &next, &corr)?;
        cur = next;
    }
    Ok(cur)
}
