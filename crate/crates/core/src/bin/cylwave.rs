//! Command-line runner for the validation suites and dispersion scans.
//!
//! ```text
//! cylwave specfun-check --out out/specfun
//! cylwave dispersion-scan --h 1/16,1/32 --t-decades 2
//! cylwave --config run.toml --seed 7
//! ```
//!
//! Exit status: 0 when every check passes, 1 on failing checks or a
//! numerical error, 2 on an invalid configuration.

use clap::Parser;
use cylwave::cli::{self, Command, RunConfig, EXIT_CONFIG};
use cylwave::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "cylwave", version, about = "Validation suites and dispersion scans outside a cylinder")]
struct Args {
    /// Suite to run; overrides `command` in the config file.
    command: Option<Command>,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Semiclassical parameters, comma separated; fractions such as 1/16 allowed.
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    h: Option<Vec<f64>>,
    /// Scan times, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_number, conflicts_with = "t_decades")]
    t: Option<Vec<f64>>,
    /// Number of decades of the geometric time grid.
    #[arg(long)]
    t_decades: Option<f64>,
    /// Truncation tolerance of mode sums and quadratures.
    #[arg(long)]
    tol: Option<f64>,
    /// Cutoff parameter of the angular partition.
    #[arg(long)]
    eps: Option<f64>,
    /// Hard cap on the angular order.
    #[arg(long)]
    n_max: Option<usize>,
    /// Seed of random draws and scan-grid jitter.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0: one per core).
    #[arg(long)]
    threads: Option<usize>,
}

/// A decimal number or a fraction `p/q`.
fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let q: f64 = q.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            p / q
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s}: not a finite number"))
    }
}

fn build_config(args: Args) -> cylwave::Result<RunConfig> {
    let mut cfg = match (&args.config, args.command) {
        (Some(path), cmd) => {
            let mut c = RunConfig::from_file(path)?;
            if let Some(cmd) = cmd {
                c.command = cmd;
            }
            c
        }
        (None, Some(cmd)) => RunConfig::new(cmd),
        (None, None) => return Err(Error::Config("no command given (positional or in --config)".into())),
    };
    let p = &mut cfg.params;
    if let Some(v) = args.out {
        cfg.output_dir = v;
    }
    if let Some(v) = args.h {
        p.h = Some(v);
    }
    if let Some(v) = args.t {
        if v.is_empty() {
            return Err(Error::Config("time grid is empty".into()));
        }
        p.scan.t = v;
    }
    if let Some(v) = args.t_decades {
        p.scan.t.clear();
        p.scan.t_decades = v;
    }
    if let Some(v) = args.tol {
        p.truncation.tol = Some(v);
    }
    if let Some(v) = args.eps {
        p.eps = v;
    }
    if let Some(v) = args.n_max {
        p.truncation.n_max = Some(v);
    }
    if let Some(v) = args.seed {
        p.seed = v;
    }
    if let Some(v) = args.threads {
        p.threads = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let cfg = match build_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cylwave: {e}");
            return ExitCode::from(cli::exit_code_for(&e) as u8);
        }
    };
    match cli::run(&cfg) {
        Ok(summary) => {
            for c in &summary.checks {
                let flag = if c.pass { "PASS" } else { "FAIL" };
                println!("{flag} {:<32} residual {:>12.4e}  tol {:>9.2e}  {}", c.test, c.residual, c.tol, c.params);
            }
            println!(
                "{}: {} passed, {} failed, worst residual/tol {:.3e} ({}); outputs in {}",
                summary.suite,
                summary.n_pass,
                summary.n_fail,
                summary.worst_residual,
                summary.worst_check,
                cfg.output_dir.display()
            );
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("cylwave: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
