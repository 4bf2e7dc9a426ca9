use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bridge::LeslieParams;
use crate::el::{tangentialize, ElState};
use crate::error::{Error, Result};
use crate::params::MaterialParams;
use crate::spectral::{DiffContext, PeriodicGrid, VectorField};
use crate::tensor::norm;

/// Named parameter sets.
pub fn preset(name: &str) -> Result<MaterialParams> {
    match name {
        "paper-demo" => Ok(MaterialParams::demo(0.1)),
        _ => Err(Error::InvalidConfig(format!("unknown preset '{name}' (known: paper-demo)"))),
    }
}

/// Analytic director and flow data shared by both models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Recipe {
    /// Constant director at rest.
    Equilibrium { director: [f64; 3] },
    /// n = normalize(e1 + a2 sin(kx x) e2 + a3 cos(ky y) e3),
    /// v = flow (sin(ky y), sin(kx x), 0), ndot = 0.
    Smooth {
        #[serde(default = "Recipe::default_amp")]
        a2: f64,
        #[serde(default = "Recipe::default_amp")]
        a3: f64,
        #[serde(default = "Recipe::default_flow")]
        flow: f64,
        #[serde(default = "Recipe::default_mode")]
        kx: u32,
        #[serde(default = "Recipe::default_mode")]
        ky: u32,
    },
    /// Random low-mode perturbation of e1 and a random solenoidal flow, drawn
    /// from the run seed.
    Random { amplitude: f64, flow: f64, max_mode: u32 },
}

impl Recipe {
    fn default_amp() -> f64 {
        0.2
    }

    fn default_flow() -> f64 {
        0.1
    }

    fn default_mode() -> u32 {
        1
    }

    pub fn smooth() -> Recipe {
        Recipe::Smooth { a2: 0.2, a3: 0.2, flow: 0.1, kx: 1, ky: 1 }
    }

    /// (n0, ndot0, v0) on the grid; v0 is projected to be solenoidal.
    pub fn build(&self, ctx: &DiffContext, seed: u64) -> Result<ElState> {
        let g = *ctx.grid();
        let unit = |f: &dyn Fn(f64, f64) -> [f64; 3]| -> Result<VectorField> {
            let raw = VectorField::from_fn(g, f);
            let mut out = raw.clone();
            for i in 0..raw.len() {
                let v = raw.vec3(i);
                let l = norm(&v);
                if !(l > 0.0) {
                    return Err(Error::InvalidConfig("recipe director vanishes somewhere".into()));
                }
                out.set_vec3(i, std::array::from_fn(|k| v[k] / l));
            }
            Ok(out)
        };
        // wavenumbers in units of the cell
        let (wx, wy) = (2.0 * std::f64::consts::PI / g.lx, 2.0 * std::f64::consts::PI / g.ly);
        let (n, v) = match *self {
            Recipe::Equilibrium { director } => (unit(&|_, _| director)?, VectorField::zeros(g)),
            Recipe::Smooth { a2, a3, flow, kx, ky } => {
                let (kx, ky) = (kx as f64 * wx, ky as f64 * wy);
                let n = unit(&|x, y| [1.0, a2 * (kx * x).sin(), a3 * (ky * y).cos()])?;
                let v = VectorField::from_fn(g, |x, y| [flow * (ky * y).sin(), flow * (kx * x).sin(), 0.0]);
                (n, v)
            }
            Recipe::Random { amplitude, flow, max_mode } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let m = max_mode.max(1) as i32;
                let mut modes = Vec::new();
                for _ in 0..6 {
                    let (a, b) = (rng.gen_range(-m..=m) as f64, rng.gen_range(-m..=m) as f64);
                    let amp: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    modes.push((a * wx, b * wy, amp, phase));
                }
                let n = unit(&|x, y| {
                    let mut d = [1.0, 0.0, 0.0];
                    for (a, b, amp, ph) in &modes {
                        let s = (a * x + b * y + ph).sin();
                        d[1] += amplitude * amp[0] * s;
                        d[2] += amplitude * amp[1] * s;
                    }
                    d
                })?;
                let v = VectorField::from_fn(g, |x, y| {
                    let mut u = [0.0; 3];
                    for (a, b, amp, ph) in &modes {
                        let s = (a * x + b * y + ph).sin();
                        u[0] += flow * amp[2] * s;
                        u[1] += flow * amp[3] * s;
                        u[2] += flow * amp[4] * s;
                    }
                    u
                });
                (n, v)
            }
        };
        let v = ctx.leray_project(&v)?;
        let (ndot, _) = tangentialize(&n, &VectorField::zeros(g));
        Ok(ElState { n, ndot, v, t: 0.0 })
    }
}

/// Time step: fixed, or a multiple of the smallest eps in the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DtRule {
    Fixed(f64),
    PerEps(f64),
}

impl DtRule {
    pub fn dt(&self, eps: f64) -> f64 {
        match *self {
            DtRule::Fixed(dt) => dt,
            DtRule::PerEps(f) => f * eps,
        }
    }
}

fn default_order() -> usize {
    1
}

fn default_output_every() -> usize {
    10
}

/// The eps-sweep experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Base parameters; `eps` is replaced by each entry of `epsilons`.
    pub params: MaterialParams,
    pub epsilons: Vec<f64>,
    pub grid: PeriodicGrid,
    pub dt: DtRule,
    pub t_end: f64,
    pub recipe: Recipe,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Steps between comparison times.
    #[serde(default = "default_output_every")]
    pub output_every: usize,
    #[serde(default)]
    pub seed: u64,
    /// Steps between QSF1 snapshots of every run, 0 for none.
    #[serde(default)]
    pub snapshot_every: usize,
}

impl SweepConfig {
    /// The smooth-recipe experiment on a 32^2 cell.
    pub fn smooth_default() -> Self {
        SweepConfig {
            params: MaterialParams::demo(0.1),
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            grid: PeriodicGrid::square(32).expect("valid grid"),
            dt: DtRule::Fixed(1e-3),
            t_end: 0.5,
            recipe: Recipe::smooth(),
            order: 1,
            output_every: 10,
            seed: 0,
            snapshot_every: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.epsilons.is_empty() {
            return Err(Error::InvalidConfig("epsilons is empty".into()));
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidConfig("epsilons must be positive".into()));
        }
        if self.epsilons.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidConfig("epsilons must be strictly decreasing".into()));
        }
        if self.order > 1 {
            return Err(Error::InvalidConfig(format!("order must be 0 or 1 (got {})", self.order)));
        }
        if !(self.t_end > 0.0) || self.output_every == 0 {
            return Err(Error::InvalidConfig("need t_end > 0 and output_every > 0".into()));
        }
        let dt = self.dt(self.epsilons[self.epsilons.len() - 1]);
        if !(dt > 0.0) {
            return Err(Error::InvalidConfig("dt must be positive".into()));
        }
        let steps = self.t_end / dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::InvalidConfig(format!("t_end = {} is not a multiple of dt = {dt}", self.t_end)));
        }
        Ok(())
    }

    /// One dt for every run so output times coincide.
    pub fn dt(&self, smallest_eps: f64) -> f64 {
        self.dt.dt(smallest_eps)
    }

    pub fn shared_dt(&self) -> f64 {
        self.dt(*self.epsilons.last().expect("validated"))
    }
}

/// Director parameters for a stand-alone director run: explicit, or mapped
/// from Q-tensor parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DirectorParams {
    Leslie(LeslieParams),
    Mapped(MaterialParams),
}

impl DirectorParams {
    pub fn resolve(&self) -> Result<LeslieParams> {
        match self {
            DirectorParams::Leslie(lp) => Ok(*lp),
            DirectorParams::Mapped(p) => p.leslie(),
        }
    }
}
