//! Causal circuits: string diagrams over `del`, `copy`, `and`, `not` and
//! `st(p)`, evaluated into stochastic matrices on `2^k`.
//!
//! Terms compose with `;` (diagram order: left runs first) and `*`
//! (parallel, binds tighter than `;`). Every generator equation of the
//! theory holds after evaluation, and evaluation is faithful, so
//! [`semantic_equal`] decides equality of terms.

mod parse;
mod plate;
pub mod random;

use std::fmt;

use crate::error::{Error, Result};
use crate::finstoch::{compose, tensor, FinObject, StochMatrix};

pub use parse::{parse, parse_descriptor, parse_file, CcFile, Descriptor};
pub use plate::{evaluate_plate, plate_par, plate_seq, PlateFamily};

/// Number of input and output wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arity {
    pub inputs: usize,
    pub outputs: usize,
}

impl Arity {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        Self { inputs, outputs }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.inputs, self.outputs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// `0 → 0`.
    Empty,
    /// `k → k`.
    Id(usize),
    Swap,
    Del,
    Copy,
    And,
    Not,
    /// `0 → 1`, true with probability `p`.
    State(f64),
    /// Left runs first.
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
}

impl Term {
    pub fn seq(first: Term, then: Term) -> Term {
        Term::Seq(Box::new(first), Box::new(then))
    }

    pub fn par(top: Term, bottom: Term) -> Term {
        Term::Par(Box::new(top), Box::new(bottom))
    }

    /// `t_0 ; t_1 ; …`, or `id^width` when empty.
    pub fn seq_all(terms: impl IntoIterator<Item = Term>, width: usize) -> Term {
        terms.into_iter().reduce(Term::seq).unwrap_or(Term::Id(width))
    }

    /// `t_0 * t_1 * …`, or `empty` when empty.
    pub fn par_all(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::par).unwrap_or(Term::Empty)
    }

    /// `del` on each of `k` wires.
    pub fn del_n(k: usize) -> Term {
        Term::par_all(std::iter::repeat_n(Term::Del, k))
    }

    /// A wiring of `perm.len()` wires where output `i` carries input
    /// `perm[i]`, built from adjacent swaps.
    pub fn permutation(perm: &[usize]) -> Term {
        let n = perm.len();
        let mut arrangement: Vec<usize> = (0..n).collect();
        let mut layers = Vec::new();
        for (i, &want) in perm.iter().enumerate() {
            let mut j = arrangement.iter().position(|&w| w == want).expect("perm is a permutation");
            while j > i {
                arrangement.swap(j - 1, j);
                layers.push(swap_at(j - 1, n));
                j -= 1;
            }
        }
        Term::seq_all(layers, n)
    }

    /// Computes the arity bottom-up, rejecting mismatched sequential
    /// compositions and out-of-range states.
    pub fn arity(&self) -> Result<Arity> {
        Ok(match self {
            Term::Empty => Arity::new(0, 0),
            Term::Id(k) => Arity::new(*k, *k),
            Term::Swap => Arity::new(2, 2),
            Term::Del => Arity::new(1, 0),
            Term::Copy => Arity::new(1, 2),
            Term::And => Arity::new(2, 1),
            Term::Not => Arity::new(1, 1),
            Term::State(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::StateRange { span: None, value: *p });
                }
                Arity::new(0, 1)
            }
            Term::Seq(a, b) => {
                let (l, r) = (a.arity()?, b.arity()?);
                if l.outputs != r.inputs {
                    return Err(Error::Arity {
                        span: None,
                        left: l,
                        right: r,
                    });
                }
                Arity::new(l.inputs, r.outputs)
            }
            Term::Par(a, b) => {
                let (l, r) = (a.arity()?, b.arity()?);
                Arity::new(l.inputs + r.inputs, l.outputs + r.outputs)
            }
        })
    }
}

/// `id^at * swap * id^(width - at - 2)`.
fn swap_at(at: usize, width: usize) -> Term {
    let mut parts = Vec::new();
    if at > 0 {
        parts.push(Term::Id(at));
    }
    parts.push(Term::Swap);
    if width - at - 2 > 0 {
        parts.push(Term::Id(width - at - 2));
    }
    Term::par_all(parts)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Empty => write!(f, "empty"),
            Term::Id(1) => write!(f, "id"),
            Term::Id(k) => write!(f, "id^{k}"),
            Term::Swap => write!(f, "swap"),
            Term::Del => write!(f, "del"),
            Term::Copy => write!(f, "copy"),
            Term::And => write!(f, "and"),
            Term::Not => write!(f, "not"),
            Term::State(p) => write!(f, "st({p})"),
            Term::Seq(a, b) => match **b {
                Term::Seq(..) => write!(f, "{a} ; ({b})"),
                _ => write!(f, "{a} ; {b}"),
            },
            Term::Par(a, b) => {
                match **a {
                    Term::Seq(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                match **b {
                    Term::Seq(..) | Term::Par(..) => write!(f, " * ({b})"),
                    _ => write!(f, " * {b}"),
                }
            }
        }
    }
}

/// The stochastic matrix on `2^inputs → 2^outputs` denoted by a term.
pub fn evaluate(term: &Term) -> Result<StochMatrix> {
    term.arity()?;
    eval_checked(term)
}

fn eval_checked(term: &Term) -> Result<StochMatrix> {
    let bit = FinObject::bits(1);
    Ok(match term {
        Term::Empty => StochMatrix::identity(&FinObject::unit()),
        Term::Id(k) => StochMatrix::identity(&FinObject::bits(*k)),
        Term::Swap => StochMatrix::swap(&bit, &bit),
        Term::Del => StochMatrix::delete(&bit),
        Term::Copy => StochMatrix::copy(&bit),
        Term::And => StochMatrix::and(),
        Term::Not => StochMatrix::not(),
        Term::State(p) => StochMatrix::state(*p)?,
        Term::Seq(a, b) => compose(&eval_checked(b)?, &eval_checked(a)?)?,
        Term::Par(a, b) => tensor(&eval_checked(a)?, &eval_checked(b)?),
    })
}

/// Whether two terms of the same arity denote the same matrix within `tol`.
pub fn semantic_equal(a: &Term, b: &Term, tol: f64) -> Result<bool> {
    let (la, lb) = (a.arity()?, b.arity()?);
    if la != lb {
        return Err(Error::Arity {
            span: None,
            left: la,
            right: lb,
        });
    }
    Ok(evaluate(a)?.approx_eq(&evaluate(b)?, tol))
}
