use std::fmt;

use thiserror::Error;

use crate::circuit::Arity;
use crate::finstoch::FinObject;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location of a token in circuit source text. Lines and columns are 1-based;
/// `col_end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}-{}", self.line, self.col_start, self.col_end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("object factors must be positive, got {0:?}")]
    ZeroFactor(Vec<usize>),

    #[error("matrix for {codomain} <- {domain} needs {expected} entries, got {found}")]
    Shape {
        domain: FinObject,
        codomain: FinObject,
        expected: usize,
        found: usize,
    },

    #[error("entry ({row}, {col}) = {value} is not a probability")]
    EntryRange { row: usize, col: usize, value: f64 },

    #[error("column {col} sums to {sum}, expected 1")]
    ColumnSum { col: usize, sum: f64 },

    #[error("cannot compose: codomain {codomain} of the first map does not match domain {domain} of the second")]
    Compose { codomain: FinObject, domain: FinObject },

    #[error("factor position {position} out of range for {object}")]
    Position { position: usize, object: FinObject },

    #[error("tuple {tuple:?} is not an element of {object}")]
    Tuple { tuple: Vec<usize>, object: FinObject },

    #[error("morphisms are not parallel: {left} vs {right}")]
    NotParallel { left: String, right: String },

    #[error("invalid omega specification: {0}")]
    OmegaSpec(String),

    #[error("cylinder sets live in different spaces")]
    SpaceMismatch,

    #[error("distribution over {found} does not cover a depth-{depth} marginal of the space")]
    MeasureDepth { depth: usize, found: FinObject },

    #[error("bad cylinder literal: {0}")]
    CylinderLiteral(String),

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("level {depth} has shape {found}, expected {expected}")]
    LevelShape {
        depth: usize,
        expected: String,
        found: String,
    },

    #[error("marginal family is inconsistent at depth {depth}: max deviation {deviation:e}")]
    Inconsistent { depth: usize, deviation: f64 },

    #[error("naturality fails between depths {lower} and {upper}: max deviation {deviation:e}")]
    Naturality {
        lower: usize,
        upper: usize,
        deviation: f64,
    },

    #[error("input depth decreases from {lower_input} at depth {lower} to {upper_input} at depth {upper}")]
    InputDepth {
        lower: usize,
        lower_input: usize,
        upper: usize,
        upper_input: usize,
    },

    #[error("conditioning prefix has length {given}, kernel needs input depth {required_depth} ({required_len} coordinates)")]
    PrefixTooShort {
        required_depth: usize,
        required_len: usize,
        given: usize,
    },

    #[error("codomain has no infinite part")]
    NoOmega,

    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },

    #[error("{}arity mismatch: left side has {left}, right side has {right}", span_prefix(.span))]
    Arity {
        span: Option<SourceSpan>,
        left: Arity,
        right: Arity,
    },

    #[error("{}probability {value} is outside [0, 1]", span_prefix(.span))]
    StateRange { span: Option<SourceSpan>, value: f64 },

    #[error("declared arity {declared} but term has {found}")]
    ArityAssertion { declared: Arity, found: Arity },

    #[error("plate body at depth {depth} has arity {found}, expected {expected}")]
    ArityDrift {
        depth: usize,
        expected: String,
        found: Arity,
    },

    #[error("plates need objects built from 2-element factors, got {0}")]
    NotBinary(String),

    #[error("chain step must be square, got {0}")]
    NotSquare(String),

    #[error("chain length must be at least 1")]
    ZeroSteps,

    #[error("json: {0}")]
    Json(String),
}

fn span_prefix(span: &Option<SourceSpan>) -> String {
    match span {
        Some(s) => format!("{s}: "),
        None => String::new(),
    }
}
