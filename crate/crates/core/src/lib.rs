//! Executable infinite tensor products over finite stochastic matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`finstoch`]: column-stochastic matrices with composition, tensor,
//!   copy, delete and marginalisation.
//! - [`cylinder`]: the clopen algebra of a countable product of finite sets,
//!   kept in canonical (minimal depth) form.
//! - [`itp`]: compatible families of matrices indexed by prefix depth. These
//!   are the morphisms into and out of spaces such as the Cantor space
//!   `2^ℕ`, evaluated lazily and memoised.
//! - [`circuit`]: a small string-diagram language over `del`, `copy`, `and`,
//!   `not` and `st(p)`, with plates that evaluate into [`itp`] kernels.
//! - [`chains`]: time-homogeneous Markov chains as kernels `X → X^ℕ`.
//!
//! Numbers are compared with an absolute per-entry tolerance, by default
//! [`TOLERANCE`].
//!
//! ```
//! use inften::circuit::{evaluate, parse};
//! use inften::cylinder::{CylinderSet, OmegaSpec};
//! use inften::itp::{biased_kernel, compose_k, lc_evaluate, uniform_measure};
//!
//! let coins = evaluate(&parse("st(0.5) * st(0.5) ; and")?)?;
//! assert_eq!(coins.column(0), vec![0.75, 0.25]);
//!
//! let u = CylinderSet::parse("cyl(2; 00, 01, 10)", &OmegaSpec::cantor())?;
//! assert_eq!(lc_evaluate(&uniform_measure(), &u, &[])?, 0.75);
//!
//! // the biased kernel leaves the uniform measure where it is
//! let mixed = compose_k(&biased_kernel(), &uniform_measure())?;
//! assert_eq!(lc_evaluate(&mixed, &u, &[])?, 0.75);
//! # Ok::<(), inften::Error>(())
//! ```

pub mod chains;
pub mod circuit;
pub mod cylinder;
pub mod error;
pub mod finstoch;
pub mod itp;

pub use error::{Error, Result, SourceSpan};

/// Default absolute tolerance for stochasticity and equality checks.
pub const TOLERANCE: f64 = 1e-9;
