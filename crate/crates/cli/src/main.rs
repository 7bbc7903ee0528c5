use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mahler_core::mahler::{mahler_nd_report, parse_poly};
use mahler_core::registry::{list_identities, run_suite, CostClass};
use mahler_core::{Error, MahlerConfig, MahlerMethod, RunOptions};

mod eval;
mod report;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "mahler-verify", version, about = "Evaluate special functions and check identities between them")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a library function, e.g. `eval ti 2`.
    Eval {
        function: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Run identities and report both sides.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Override every identity's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, env = "MAHLER_VERIFY_SEED")]
        seed: Option<u64>,
        /// Override the Monte Carlo sample count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Skip the Monte Carlo identities.
        #[arg(long)]
        fast_only: bool,
        /// Report elapsed_s as 0 so output is byte-stable.
        #[arg(long)]
        no_timing: bool,
    },
    /// Mahler measure of a Laurent polynomial.
    Mahler {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "auto")]
        method: MahlerMethod,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, env = "MAHLER_VERIFY_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List identities.
    List {
        #[arg(long)]
        suite: Option<String>,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Usage(_) | Error::Parse { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut out = std::io::stdout().lock();
    match cli.cmd {
        Cmd::Eval { function, args } => {
            let v = eval::eval(&function, &args)?;
            let _ = writeln!(out, "{v}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, tol, seed, samples, format, fast_only, no_timing } => {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::Usage(format!("--tol must be positive, got {t}")));
                }
            }
            let mut selected = list_identities(suite.as_deref())?;
            if fast_only {
                selected.retain(|r| r.cost == CostClass::Fast);
            }
            let opts = RunOptions { seed: seed.unwrap_or(RunOptions::default().seed), tol, samples };
            let mut reports = Vec::with_capacity(selected.len());
            let mut errored = false;
            for r in run_suite(&selected, &opts) {
                match r {
                    Ok(mut rep) => {
                        if no_timing {
                            rep.elapsed = 0.0;
                        }
                        reports.push(rep);
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        errored = true;
                    }
                }
            }
            let _ = report::emit(&mut out, &reports, format);
            let ok = !errored && reports.iter().all(|r| r.pass);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Mahler { expr, method, samples, grid, seed, tol } => {
            let p = parse_poly(&expr)?;
            let d = MahlerConfig::default();
            let cfg = MahlerConfig {
                method,
                grid: grid.unwrap_or(d.grid),
                samples: samples.unwrap_or(d.samples),
                seed: seed.unwrap_or(d.seed),
                tolerance: tol.unwrap_or(d.tolerance),
            };
            cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
            let rep = mahler_nd_report(&p, &cfg)?;
            let r = rep.result;
            let _ = writeln!(out, "{}", r.value);
            eprintln!(
                "err_estimate={:e} evals={} converged={} method={:?} polynomial={p}",
                r.err_estimate, r.evals, r.converged, rep.method
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::List { suite } => {
            for r in list_identities(suite.as_deref())? {
                let cost = match r.cost {
                    CostClass::Fast => "fast",
                    CostClass::Slow => "slow",
                };
                let _ = writeln!(out, "{}\t{}\t{}\t{:.0e}\t{}", r.id, r.tags.join(","), cost, r.tol, r.citation);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(|e| fail(&e))
}
