//! Acceptance run: one PASS/FAIL line per criterion, with wall time against
//! the criterion's time budget. A criterion passes when every one of its
//! checks is strictly below tolerance and it finishes within budget.
//!
//! The process exits non-zero if a criterion fails that is not listed in
//! `KNOWN_FAILURES`, or if a listed one starts passing (so the list is kept
//! honest in both directions).

use cylwave::cli::suites::{
    airy_bessel_checks, dispersion_checks, eikonal_checks, green_checks, hankel_checks, hessian_checks,
    incoming_checks, kirchhoff_checks, taylor_checks, zeta_checks, Check,
};
use cylwave::cli::{Command, RunConfig, Tolerances};
use cylwave::green::TruncationPolicy;
use std::time::{Duration, Instant};

/// Pass thresholds of the ten criteria, pinned here so that changing the
/// runner defaults cannot loosen acceptance.
const PINNED: Tolerances = Tolerances {
    airy: 1e-12,
    cylinder_wronskian: 1e-10,
    riccati: 1e-7,
    zeta_ode: 1e-8,
    zeta_slope: 1e-4,
    hankel: 1e-3,
    taylor: 1e-4,
    eikonal: 1e-6,
    hessian: 1e-6,
    trace: 1e-8,
    helmholtz: 1e-3,
    recombination: 1e-12,
    calibration: 1e-6,
    incoming: 1e-3,
    kirchhoff: 0.05,
    // "max varies by ≤ 20% between successive h halvings"
    stability: 0.2,
    // Boundedness of sup|K|·(1+t): the later half of t ∈ [1, 100] may not
    // exceed the earlier half by more than the same 20% margin.
    low_growth: 1.2,
};

const SEED: u64 = 0;

/// Criteria expected to fail, with the measured reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    8,
    "the angular pieces only cover axial frequencies |γ| < 1; the evanescent remainder \
     (|γ| > 1) is O(2d/(πτρ₀²)) of the incoming wave at τ = 40, i.e. 0.5–3%; \
     the sum completed by that remainder matches to ~3e-8",
)];

struct Criterion {
    id: usize,
    title: &'static str,
    budget: Duration,
    run: Box<dyn Fn() -> cylwave::Result<Vec<Check>>>,
    /// Which checks count toward the verdict (others are reported only).
    counts: fn(&Check) -> bool,
}

fn all(_: &Check) -> bool {
    true
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn config(command: Command) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.params.tolerances = PINNED;
    c.params.seed = SEED;
    c
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "special-function identities",
            budget: secs(10),
            run: Box::new(|| airy_bessel_checks(&PINNED)),
            counts: all,
        },
        Criterion {
            id: 2,
            title: "zeta certification",
            budget: secs(5),
            run: Box::new(|| zeta_checks(&PINNED)),
            counts: all,
        },
        Criterion {
            id: 3,
            title: "uniform Hankel asymptotics",
            budget: secs(60),
            run: Box::new(|| hankel_checks(&PINNED).map(|x| x.0)),
            counts: all,
        },
        Criterion {
            id: 4,
            title: "Gamma0 / Gamma-tilde Taylor data",
            budget: secs(5),
            run: Box::new(|| taylor_checks(&PINNED)),
            counts: all,
        },
        Criterion {
            id: 5,
            title: "eikonal residuals",
            budget: secs(10),
            run: Box::new(|| eikonal_checks(&PINNED, SEED)),
            counts: all,
        },
        Criterion {
            id: 6,
            title: "boundary-phase Hessians",
            budget: secs(30),
            run: Box::new(|| Ok(hessian_checks(&PINNED))),
            counts: all,
        },
        Criterion {
            id: 7,
            title: "Green-function exactness",
            budget: secs(300),
            run: Box::new(|| {
                green_checks(&PINNED, SEED, &config(Command::GreenValidate).policy())
            }),
            counts: all,
        },
        Criterion {
            id: 8,
            title: "incoming-wave decomposition",
            budget: secs(300),
            run: Box::new(|| {
                let c = config(Command::KirchhoffCheck);
                incoming_checks(&PINNED, c.params.eps, &c)
            }),
            // The criterion is about the angular pieces alone.
            counts: |c| c.test == "incoming_sum",
        },
        Criterion {
            id: 9,
            title: "Kirchhoff identity at 1/h = 20",
            budget: secs(600),
            run: Box::new(|| kirchhoff_checks(&PINNED, 1.0 / 20.0, &config(Command::KirchhoffCheck))),
            counts: all,
        },
        Criterion {
            id: 10,
            title: "dispersion scan, 1/h = 8..64 and low window",
            budget: secs(3600),
            run: Box::new(|| {
                let mut c = config(Command::DispersionScan);
                c.params.h = Some(vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]);
                c.params.truncation.tol = Some(TruncationPolicy::default().tol);
                dispersion_checks(&c).map(|x| x.0)
            }),
            counts: all,
        },
    ]
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("CYLWAVE_ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut unexpected = Vec::new();
    let mut n_pass = 0;
    let mut n_run = 0;
    for c in criteria() {
        if only.as_ref().is_some_and(|o| !o.contains(&c.id)) {
            continue;
        }
        n_run += 1;
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match &result {
            Ok(checks) => {
                let counted: Vec<&Check> = checks.iter().filter(|x| (c.counts)(x)).collect();
                let ok = !counted.is_empty() && counted.iter().all(|x| x.pass) && elapsed <= c.budget;
                let worst = counted.iter().max_by(|a, b| a.normalized().total_cmp(&b.normalized()));
                let detail = match worst {
                    Some(w) => format!("worst {} = {:.3e} (tol {:.1e}; {})", w.test, w.residual, w.tol, w.params),
                    None => "no checks".to_string(),
                };
                (ok, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2}: {} — {:.2} s of {} s budget — {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if let Ok(checks) = &result {
            for x in checks.iter().filter(|x| !x.pass) {
                println!("       failing check {}: residual {:.4e} ≥ tol {:.1e} ({})", x.test, x.residual, x.tol, x.params);
            }
        }
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == c.id);
        match (pass, known) {
            (true, None) => n_pass += 1,
            (true, Some(_)) => {
                n_pass += 1;
                unexpected.push(format!("criterion {} passes but is listed as a known failure", c.id));
            }
            (false, Some((_, why))) => println!("       known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {} failed", c.id)),
        }
    }
    println!("acceptance: {n_pass} of {n_run} criteria pass");
    if !unexpected.is_empty() {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        std::process::exit(1);
    }
}
