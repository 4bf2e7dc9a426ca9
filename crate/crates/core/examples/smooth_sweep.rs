//! Runs the smooth-recipe eps sweep and prints the per-eps summary.
//! An optional argument names an output directory for the full report.

use nematic_core::lab::{run_sweep, write_sweep, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = std::time::Instant::now();
    let report = run_sweep(&SweepConfig::smooth_default(), false)?;
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "eps", "sup e_Q", "final e_Q", "sup e_v", "e_out/eps", "max Ef"
    );
    for s in &report.runs {
        println!(
            "{:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.4}",
            s.eps, s.sup_e_q, s.final_e_q, s.sup_e_v, s.sup_e_out_over_eps, s.max_ef
        );
    }
    let order = |f: &Option<nematic_core::lab::OrderFit>| f.as_ref().map(|f| f.order).unwrap_or(f64::NAN);
    println!("order sup e_Q {:.3}", order(&report.fitted_order_q));
    println!("order final e_Q {:.3}", order(&report.fitted_order_q_final));
    println!("order sup e_v {:.3}", order(&report.fitted_order_v));
    println!("{:?}", report.checks);
    if let Some(dir) = std::env::args().nth(1) {
        write_sweep(&report, std::path::Path::new(&dir))?;
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
