//! Turning command-line arguments into terms, matrices and kernels.

use std::fmt;
use std::path::Path;

use inften::chains::{chain_kernel, chain_measure, ChainSpec};
use inften::circuit::{evaluate, parse, parse_file, Descriptor, Term};
use inften::finstoch::StochMatrix;
use inften::itp::{biased_kernel, dirac_zero, from_finite, uniform_measure, CompatKernel};

pub const BUILTINS: &[&str] = &["uniform", "biased", "dirac0"];

#[derive(Debug)]
pub enum Failure {
    Core(inften::Error),
    Io { path: String, message: String },
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io { path, message } => write!(f, "{path}: {message}"),
            Failure::Input(m) => write!(f, "{m}"),
        }
    }
}

impl From<inften::Error> for Failure {
    fn from(e: inften::Error) -> Self {
        Failure::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, Failure>;

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

/// Parses a `.cc` file, checking its arity assertion if present.
pub fn descriptor_file(path: &str) -> Result<Descriptor> {
    Ok(parse_file(&read(path)?, Some(path))?.descriptor)
}

pub fn term_file(path: &str) -> Result<Term> {
    match descriptor_file(path)? {
        Descriptor::Term(t) => Ok(t),
        Descriptor::Chain { .. } => Err(Failure::Input(format!(
            "{path}: expected a plain term, found a chain descriptor"
        ))),
    }
}

pub fn descriptor_kernel(d: Descriptor) -> Result<CompatKernel> {
    Ok(match d {
        Descriptor::Term(t) => from_finite(evaluate(&t)?),
        Descriptor::Chain { init, step } => {
            let init = init.map(|t| evaluate(&t)).transpose()?;
            let has_init = init.is_some();
            let spec = ChainSpec::new(evaluate(&step)?, init)?;
            if has_init {
                chain_measure(&spec)?
            } else {
                chain_kernel(&spec)?
            }
        }
    })
}

/// A built-in kernel name or a `.cc` file.
pub fn kernel(name: &str) -> Result<CompatKernel> {
    match name {
        "uniform" => Ok(uniform_measure()),
        "biased" => Ok(biased_kernel()),
        "dirac0" => Ok(dirac_zero()),
        path if Path::new(path).is_file() => descriptor_kernel(descriptor_file(path)?),
        other => Err(Failure::Input(format!(
            "unknown kernel `{other}`: not one of {} and not a file",
            BUILTINS.join(", ")
        ))),
    }
}

/// Inline matrix JSON, a `.json` file, a `.cc` file, or an inline term.
pub fn matrix(arg: &str) -> Result<StochMatrix> {
    let json = |text: &str, origin: &str| {
        serde_json::from_str::<StochMatrix>(text).map_err(|e| Failure::Input(format!("{origin}: bad matrix JSON: {e}")))
    };
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return json(trimmed, "argument");
    }
    let path = Path::new(arg);
    if path.is_file() {
        if path.extension().is_some_and(|e| e == "json") {
            return json(&read(arg)?, arg);
        }
        return Ok(evaluate(&term_file(arg)?)?);
    }
    Ok(evaluate(&parse(arg)?)?)
}

/// A conditioning prefix: `0110`, or comma-separated values like `0,3,1`.
pub fn prefix(arg: &str) -> Result<Vec<usize>> {
    let bad = || Failure::Input(format!("bad conditioning prefix `{arg}`"));
    let arg = arg.trim();
    if arg.contains(',') {
        arg.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    } else {
        arg.chars().map(|c| c.to_digit(10).map(|v| v as usize).ok_or_else(bad)).collect()
    }
}
