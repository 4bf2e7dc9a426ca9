use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nematic_core::bridge::{check_el_dissipative, Certificate};
use nematic_core::lab::config::preset;
use nematic_core::lab::{
    identity_suite, run_sweep, simulate_el, simulate_qs, validate_energy, write_run, write_sweep, ElRunConfig,
    QsRunConfig, SweepConfig,
};
use nematic_core::{Error, MaterialParams};

#[derive(Parser)]
#[command(name = "limitlab", version, about = "Q-tensor to director limit experiments")]
struct Cli {
    /// Worker threads for the parallel sweep
    #[arg(long, global = true, env = "LIMITLAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter set replacing the configured material parameters
    #[arg(long)]
    preset: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run even if a dissipativity certificate fails
    #[arg(long)]
    force: bool,
    /// Seed for random initial data
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dissipativity certificates and the mapped director constants
    CheckCoeffs {
        /// Material parameters as JSON
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Integrate the Q-tensor model
    SimulateQs(RunArgs),
    /// Integrate the director model
    SimulateEl(RunArgs),
    /// Compare the Q-tensor model against the director model across eps
    Sweep(RunArgs),
    /// Replay one step from every snapshot of a run or sweep directory
    ValidateEnergy {
        /// Directory written by simulate-qs, simulate-el or sweep
        dir: PathBuf,
        /// Also write validation.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every algebraic identity
    IdentitySuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write identity.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Usage problems exit with 2, failed checks and solver failures with 1.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InvalidGrid(_)
            | Error::BadEpsilon(_)
            | Error::CertificateRefused(_)
            | Error::Io(_)
            | Error::Snapshot(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    std::fs::write(dir.join(name), text + "\n")?;
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_certificate(title: &str, c: &Certificate) {
    println!("{title}: {}", verdict(c.passed));
    for cl in &c.clauses {
        println!("  {:<46} {}  margin {:+.6e}", cl.name, verdict(cl.passed), cl.margin);
    }
}

fn check_coeffs(config: Option<PathBuf>, name: Option<String>) -> Outcome {
    let p: MaterialParams = match (config, name) {
        (Some(path), _) => serde_json::from_str(&read(&path)?).map_err(|e| Failure::Usage(e.to_string()))?,
        (None, Some(n)) => preset(&n)?,
        (None, None) => return Err(Failure::Usage("check-coeffs needs --preset or --config".into())),
    };
    p.validate()?;
    let qs = p.certificate();
    print_certificate("QS dissipativity", &qs);
    let lp = p.leslie()?;
    println!("Leslie coefficients");
    for (k, v) in [
        ("alpha1", lp.alpha1),
        ("alpha2", lp.alpha2),
        ("alpha3", lp.alpha3),
        ("alpha4", lp.alpha4),
        ("alpha5", lp.alpha5),
        ("alpha6", lp.alpha6),
        ("gamma1", lp.gamma1),
        ("gamma2", lp.gamma2),
        ("I", lp.inertia),
    ] {
        println!("  {k:<7} = {v}");
    }
    println!("Frank constants");
    for (k, v) in [("k1", lp.k1), ("k2", lp.k2), ("k3", lp.k3), ("k4", lp.k4)] {
        println!("  {k:<7} = {v}");
    }
    let el = check_el_dissipative(&lp)?;
    print_certificate("EL dissipativity", &el);
    Ok(qs.passed && el.passed)
}

fn with_preset(base: &MaterialParams, name: &Option<String>) -> Result<MaterialParams, Failure> {
    Ok(match name {
        Some(n) => MaterialParams { eps: base.eps, ..preset(n)? },
        None => *base,
    })
}

fn simulate_qs_cmd(a: RunArgs) -> Outcome {
    let mut cfg = match &a.config {
        Some(p) => QsRunConfig::from_json(&read(p)?)?,
        None => QsRunConfig::demo(),
    };
    cfg.solver.params = with_preset(&cfg.solver.params, &a.preset)?;
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    let r = simulate_qs(&cfg, a.force)?;
    let s = &r.summary;
    println!("steps {}  energy {:.10e} -> {:.10e}", s.steps, s.initial_energy, s.final_energy);
    println!("max relative energy increase {:.3e}", s.max_energy_increase);
    println!("max R_mid {:.3e}  max dissipation residual {:.3e}", s.max_r_mid, s.max_dissipation_residual);
    println!("max structure error {:.3e}  max |div v| {:.3e}", s.max_structure_error, s.max_div_v);
    if let Some(dir) = &a.out {
        write_run(&r, dir)?;
    }
    Ok(s.energy_stable())
}

fn simulate_el_cmd(a: RunArgs) -> Outcome {
    let mut cfg = match &a.config {
        Some(p) => ElRunConfig::from_json(&read(p)?)?,
        None => ElRunConfig::demo(),
    };
    if let Some(n) = &a.preset {
        cfg.params = nematic_core::lab::config::DirectorParams::Mapped(preset(n)?);
    }
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    let r = simulate_el(&cfg, a.force)?;
    let s = &r.summary;
    println!("steps {}  energy {:.10e} -> {:.10e}", s.steps, s.initial_energy, s.final_energy);
    println!("max relative energy increase {:.3e}", s.max_energy_increase);
    println!("max R_mid {:.3e}  max energy-law residual {:.3e}", s.max_r_mid, s.max_dissipation_residual);
    println!(
        "max ||n|-1| {:.3e}  max renormalization {:.3e}  max |div v| {:.3e}",
        s.max_unit_error, s.max_renormalization, s.max_div_v
    );
    if let Some(dir) = &a.out {
        write_run(&r, dir)?;
    }
    Ok(s.energy_stable())
}

fn sweep_cmd(a: RunArgs) -> Outcome {
    let mut cfg = match &a.config {
        Some(p) => SweepConfig::from_json(&read(p)?)?,
        None => SweepConfig::smooth_default(),
    };
    cfg.params = with_preset(&cfg.params, &a.preset)?;
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    let r = run_sweep(&cfg, a.force)?;
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "eps", "sup e_Q", "final e_Q", "sup e_v", "e_out/eps", "max Ef"
    );
    for s in &r.runs {
        println!(
            "{:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.4}",
            s.eps, s.sup_e_q, s.final_e_q, s.sup_e_v, s.sup_e_out_over_eps, s.max_ef
        );
    }
    for (name, fit) in
        [("sup e_Q", &r.fitted_order_q), ("final e_Q", &r.fitted_order_q_final), ("sup e_v", &r.fitted_order_v)]
    {
        match fit {
            Some(f) => println!("fitted order of {name}: {:.3} (fit residual {:.2e})", f.order, f.residual),
            None => println!("fitted order of {name}: unavailable"),
        }
    }
    let c = &r.checks;
    for (name, ok) in [
        ("sup e_Q monotone in eps", c.monotone_q),
        ("sup e_v decreasing in eps", c.decreasing_v),
        ("e_out/eps bounded", c.e_out_over_eps_bounded),
        ("Ef bounded", c.ef_bounded),
        ("pairwise orders stabilised", c.asymptotic),
    ] {
        println!("{}  {name}", verdict(ok));
    }
    if let Some(dir) = &a.out {
        write_sweep(&r, dir)?;
    }
    Ok(c.monotone_q && c.decreasing_v && c.e_out_over_eps_bounded && c.ef_bounded)
}

fn validate_cmd(dir: PathBuf, out: Option<PathBuf>) -> Outcome {
    let v = validate_energy(&dir)?;
    for c in &v.checks {
        println!(
            "{}  t={:<10.6} R_mid={:+.3e} dE={:+.3e} residual={:.3e}  {}",
            verdict(c.passed),
            c.t,
            c.r_mid,
            c.energy_after - c.energy_before,
            c.residual,
            c.file
        );
    }
    println!("{} snapshots, max residual {:.3e}", v.checks.len(), v.max_residual);
    if let Some(o) = out {
        write_json(&o, "validation.json", &v)?;
    }
    Ok(v.passed)
}

fn identity_cmd(seed: u64, out: Option<PathBuf>) -> Outcome {
    let checks = identity_suite(seed);
    for c in &checks {
        println!("{}  {}  worst={:.3e} tolerance={:.1e}", verdict(c.passed), c.name, c.worst, c.tolerance);
    }
    if let Some(o) = out {
        write_json(&o, "identity.json", &checks)?;
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::CheckCoeffs { config, preset } => check_coeffs(config, preset),
        Command::SimulateQs(a) => simulate_qs_cmd(a),
        Command::SimulateEl(a) => simulate_el_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::ValidateEnergy { dir, out } => validate_cmd(dir, out),
        Command::IdentitySuite { seed, out } => identity_cmd(seed, out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
