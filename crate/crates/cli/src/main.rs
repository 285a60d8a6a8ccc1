mod json;
mod source;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inften::chains::{joint, unroll, verify_shift_invariance_with_tolerance, ChainSpec};
use inften::circuit::{evaluate, parse, semantic_equal, Descriptor};
use inften::cylinder::CylinderSet;
use inften::itp::{compose_k, lc_evaluate, CompatKernel};
use serde_json::json;

use source::{Failure, Result};

#[derive(Parser)]
#[command(name = "inften", version, about = "Stochastic matrices, kernels on Cantor space, and causal circuits")]
struct Cli {
    /// Output depth to probe.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Entrywise tolerance for equality and naturality checks.
    #[arg(long, global = true, default_value_t = inften::TOLERANCE, value_parser = positive)]
    tolerance: f64,
    /// Machine-readable output for `equal`, `measure` and `check`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the stochastic matrix of a circuit.
    Eval {
        /// A `.cc` file.
        #[arg(required_unless_present = "expr")]
        file: Option<String>,
        /// An inline term instead of a file.
        #[arg(short, long, conflicts_with = "file")]
        expr: Option<String>,
    },
    /// Exit 0 if two circuits (or kernels, up to --depth) agree, 1 if not.
    Equal { left: String, right: String },
    /// Print a kernel's level at --depth.
    Marginal { kernel: String },
    /// Evaluate a kernel on a cylinder set, e.g. `cyl(2; 00, 01, 10)`.
    Measure {
        kernel: String,
        cylinder: String,
        /// Conditioning prefix of the input, `0110` or `0,3,1`.
        #[arg(long, default_value = "")]
        given: String,
    },
    /// Run FIRST, then THEN; print the composite's level at --depth.
    Compose { first: String, then: String },
    /// Unroll a Markov chain to --depth states and check shift invariance.
    Chain {
        /// Step kernel: matrix JSON, a `.json` or `.cc` file, or a term.
        #[arg(long)]
        step: String,
        /// Initial distribution, in the same forms as --step.
        #[arg(long)]
        init: Option<String>,
    },
    /// Check naturality of a kernel for all depths up to --depth.
    Check { kernel: String },
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(_) => Err("tolerance must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Successful runs print to stdout and report whether the check held.
struct Done {
    out: String,
    holds: bool,
}

fn done(out: String) -> Done {
    Done { out, holds: true }
}

fn level_dump(k: &CompatKernel, depth: usize) -> Result<String> {
    Ok(json::to_string(&k.level(depth)?.dump(depth)))
}

fn run(cli: &Cli) -> Result<Done> {
    let (depth, tol) = (cli.depth, cli.tolerance);
    match &cli.command {
        Command::Eval { file, expr } => {
            let term = match (file, expr) {
                (_, Some(e)) => parse(e)?,
                (Some(f), None) => source::term_file(f)?,
                (None, None) => unreachable!("clap requires one"),
            };
            Ok(done(json::to_string(&evaluate(&term)?)))
        }
        Command::Equal { left, right } => {
            let (l, r) = (source::descriptor_file(left)?, source::descriptor_file(right)?);
            let (equal, deviation, probed) = match (l, r) {
                (Descriptor::Term(a), Descriptor::Term(b)) => {
                    let equal = semantic_equal(&a, &b, tol)?;
                    (equal, evaluate(&a)?.max_deviation(&evaluate(&b)?)?, None)
                }
                (a, b) => {
                    let (a, b) = (source::descriptor_kernel(a)?, source::descriptor_kernel(b)?);
                    let deviation = a.max_difference_up_to(&b, depth)?;
                    (deviation <= tol, deviation, Some(depth))
                }
            };
            let out = if cli.json {
                json::to_string(&json!({"equal": equal, "maxDeviation": deviation, "depth": probed}))
            } else {
                let verdict = if equal { "equal" } else { "not equal" };
                let scope = probed.map(|d| format!(" up to depth {d}")).unwrap_or_default();
                format!("{verdict}{scope} (max deviation {})", json::g17(deviation))
            };
            Ok(Done { out, holds: equal })
        }
        Command::Marginal { kernel } => Ok(done(level_dump(&source::kernel(kernel)?, depth)?)),
        Command::Measure { kernel, cylinder, given } => {
            let k = source::kernel(kernel)?;
            let space = k.codomain().omega_part().ok_or(inften::Error::NoOmega)?;
            let cyl = CylinderSet::parse(cylinder, space)?;
            let given = source::prefix(given)?;
            let value = lc_evaluate(&k, &cyl, &given)?;
            let out = if cli.json {
                json::to_string(&json!({
                    "kernel": kernel,
                    "cylinder": cyl.reduce().to_string(),
                    "given": given,
                    "value": value,
                }))
            } else {
                json::g17(value)
            };
            Ok(done(out))
        }
        Command::Compose { first, then } => {
            let k = compose_k(&source::kernel(then)?, &source::kernel(first)?)?;
            Ok(done(level_dump(&k, depth)?))
        }
        Command::Chain { step, init } => {
            if depth == 0 {
                return Err(Failure::Input("chain needs --depth of at least 1".into()));
            }
            let init = init.as_deref().map(source::matrix).transpose()?;
            let spec = ChainSpec::new(source::matrix(step)?, init)?;
            let report = verify_shift_invariance_with_tolerance(&spec, depth, tol)?;
            let out = if spec.initial().is_some() {
                json!({"depth": depth, "joint": joint(&spec, depth)?, "shift": report})
            } else {
                json!({"depth": depth, "unrolled": unroll(&spec, depth)?, "shift": report})
            };
            Ok(Done {
                out: json::to_string(&out),
                holds: report.holds,
            })
        }
        Command::Check { kernel } => {
            let report = source::kernel(kernel)?.check_naturality(depth)?;
            let holds = report.passes(tol);
            let out = if cli.json {
                let mut v = serde_json::to_value(&report).expect("serialisable report");
                v["passes"] = json!(holds);
                json::to_string(&v)
            } else if holds {
                format!(
                    "natural up to depth {depth}: {} squares, max deviation {}",
                    report.squares,
                    json::g17(report.max_deviation)
                )
            } else if !report.monotone {
                "not natural: input depth decreases".to_string()
            } else {
                let (lo, hi) = report.worst.unwrap_or((0, 0));
                format!(
                    "not natural: max deviation {} between depths {lo} and {hi}",
                    json::g17(report.max_deviation)
                )
            };
            Ok(Done { out, holds })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(d) => {
            println!("{}", d.out);
            ExitCode::from(if d.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
