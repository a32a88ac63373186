//! Command-line front end: list the built-in problems, run a single solve,
//! run solver/problem suites, and turn suite CSVs into performance-profile
//! CSVs.
//!
//! Exit codes: 0 on success (a converged solve or a completed suite),
//! 2 when a solve ends without convergence, 3 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use arc_ipm::bench::{
    performance_profile, read_run_records, run_suite, write_profile, write_run_records,
    ProfileMetric, Suite,
};
use arc_ipm::problem::ProblemRegistry;
use arc_ipm::solver::{solve, Method, SolveStatus, SolverConfig};
use arc_ipm::Error;

#[derive(Parser)]
#[command(name = "arc-ipm", version, about = "Arc-search interior-point solver for nonlinear programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in problems with their tags and dimensions.
    ListProblems,
    /// Solve one problem with one method and print the report.
    Solve {
        #[arg(long)]
        problem: String,
        /// arc, arc-simplified or line.
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Fraction-to-boundary factor.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Merit-decrease constant.
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        /// Forward-difference step for third-order terms.
        #[arg(long, default_value_t = 1e-4)]
        fd_eps: f64,
        /// Write the per-iteration trace to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a suite of problems with a set of methods, writing run records.
    Bench {
        /// qcqp, others or all.
        #[arg(long)]
        suite: String,
        /// Comma-separated subset of arc,arc-simplified,line.
        #[arg(long)]
        methods: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Compute performance profiles from a run-record CSV.
    Profile {
        #[arg(long)]
        input: PathBuf,
        /// iters or time.
        #[arg(long)]
        metric: String,
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_UNATTAINED: u8 = 2;
const EXIT_USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::UnknownProblem { .. }
                | Error::InvalidArguments(_)
                | Error::EmptyInput
                | Error::Csv { .. } => EXIT_USAGE,
                _ => EXIT_UNATTAINED,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::ListProblems => {
            let registry = ProblemRegistry::builtin();
            println!("{:<10} {:<6} {:>3} {:>3} {:>3}  known objective", "name", "tag", "n", "m", "p");
            for (name, prob, tag) in registry.iter() {
                let known = prob
                    .known_objective()
                    .map(|v| format!("{v:.4}"))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:<10} {:<6} {:>3} {:>3} {:>3}  {}",
                    name,
                    tag.to_string(),
                    prob.n(),
                    prob.m(),
                    prob.p(),
                    known
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            problem,
            method,
            tol,
            max_iter,
            delta,
            beta,
            fd_eps,
            trace,
        } => {
            let registry = ProblemRegistry::builtin();
            let prob = registry.get(&problem)?;
            let method: Method = method.parse()?;
            let mut cfg = SolverConfig::new(method);
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            cfg.step.delta = delta;
            cfg.step.beta = beta;
            cfg.fd_eps = fd_eps;
            let report = solve(prob, &cfg);

            println!("problem    : {}", prob.name());
            println!("method     : {method}");
            println!("status     : {}", report.status.kind());
            if let SolveStatus::Unattained(reason) = &report.status {
                println!("reason     : {reason}");
            }
            println!("iterations : {}", report.iterations);
            println!("objective  : {:.10}", report.objective);
            println!("merit      : {:.3e}", report.merit_final);
            println!("time       : {:.6} s", report.wall_time_s);

            if let Some(path) = trace {
                let mut text =
                    String::from("iteration,merit,mu,alpha,alpha_tilde,alpha_hat_active,sigma,backtracks\n");
                for (k, rec) in report.trace.iter().enumerate() {
                    text.push_str(&format!(
                        "{},{:.10e},{:.10e},{:.10e},{:.10e},{},{:.10e},{}\n",
                        k,
                        rec.merit,
                        rec.mu,
                        rec.alpha,
                        rec.alpha_tilde,
                        rec.alpha_hat_active,
                        rec.sigma,
                        rec.backtracks
                    ));
                }
                std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?;
            }
            Ok(if matches!(report.status, SolveStatus::Converged) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_UNATTAINED)
            })
        }
        Command::Bench {
            suite,
            methods,
            out,
            tol,
            max_iter,
        } => {
            let registry = ProblemRegistry::builtin();
            let suite = match suite.as_str() {
                "qcqp" => Suite::Qcqp,
                "others" => Suite::Others,
                "all" => Suite::All,
                other => {
                    return Err(Error::InvalidArguments(format!(
                        "unknown suite {other:?} (expected qcqp, others or all)"
                    )))
                }
            };
            let methods = methods
                .split(',')
                .map(|m| m.trim().parse())
                .collect::<Result<Vec<Method>, _>>()?;
            let mut cfg = SolverConfig::new(Method::Arc);
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            let records = run_suite(&registry, &suite, &methods, &cfg)?;
            write_run_records(&out, &records)?;
            let solved = records.iter().filter(|r| r.solved()).count();
            println!(
                "{} records written to {} ({} converged)",
                records.len(),
                out.display(),
                solved
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { input, metric, out } => {
            let metric: ProfileMetric = metric.parse()?;
            let records = read_run_records(&input)?;
            let curves = performance_profile(&records, metric)?;
            write_profile(&out, &curves)?;
            println!("{} curves written to {}", curves.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

// clap needs the type referenced for --help generation in some configurations
#[allow(dead_code)]
fn assert_cli() {
    let _ = Cli::command();
}
