//! Shared fixtures for the criterion benchmarks in `benches/`.

use nematic_core::el::{ElConfig, ElState};
use nematic_core::hilbert::build_well_prepared;
use nematic_core::lab::Recipe;
use nematic_core::qs::{QsConfig, QsState};
use nematic_core::{DiffContext, MaterialParams, PeriodicGrid};

/// Smooth director data on an n^2 cell with the demo parameters.
pub fn el_fixture(n: usize) -> (DiffContext, ElConfig, ElState) {
    let ctx = DiffContext::new(PeriodicGrid::square(n).expect("valid grid")).expect("valid grid");
    let p = MaterialParams::demo(0.1);
    let cfg = ElConfig::new(p.leslie().expect("demo maps"), 1e-3, 1.0);
    let s = Recipe::smooth().build(&ctx, 0).expect("recipe builds");
    (ctx, cfg, s)
}

/// Well-prepared Q-tensor data built on the same director field.
pub fn qs_fixture(n: usize, eps: f64) -> (DiffContext, QsConfig, QsState) {
    let (ctx, _, el) = el_fixture(n);
    let p = MaterialParams::demo(eps);
    let s = build_well_prepared(&el.n, &el.ndot, &el.v, &p, 1, &ctx).expect("well-prepared data");
    (ctx, QsConfig::new(p, 1e-3, 1.0), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_step() {
        let (ctx, cfg, s) = qs_fixture(16, 0.1);
        nematic_core::qs::qs_step(&s, &cfg, &ctx).unwrap();
        let (ctx, cfg, s) = el_fixture(16);
        nematic_core::el::el_step(&s, &cfg, &ctx).unwrap();
    }
}
