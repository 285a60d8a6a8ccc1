//! Time-homogeneous Markov chains.
//!
//! `unroll(s, n)` is the kernel `c_n: X → X^{⊗n}` whose output coordinate
//! `i` is the state at time `i`, coordinate 0 being the input itself. It is
//! built inductively: `c_1 = id`, and `c_n` copies the last coordinate of
//! `c_{n-1}` and pushes the copy through one more step. The family
//! `(c_n)` is compatible, so it defines `c: X → X^ℕ`.

use serde::Serialize;

use crate::cylinder::OmegaSpec;
use crate::error::{Error, Result};
use crate::finstoch::{compose, marginalize, tensor, FinObject, StochMatrix};
use crate::itp::{compose_k, from_finite, pair_from_marginals, CompatKernel, TensorObject};
use crate::TOLERANCE;

/// A step kernel `f: X → X` and an optional initial distribution on `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    step: StochMatrix,
    initial: Option<StochMatrix>,
}

impl ChainSpec {
    pub fn new(step: StochMatrix, initial: Option<StochMatrix>) -> Result<Self> {
        if step.domain() != step.codomain() {
            return Err(Error::NotSquare(step.signature()));
        }
        if let Some(init) = &initial {
            if !init.domain().is_unit() || init.codomain() != step.domain() {
                return Err(Error::ObjectMismatch(format!(
                    "initial distribution {} does not live on {}",
                    init.signature(),
                    step.domain()
                )));
            }
        }
        Ok(Self { step, initial })
    }

    pub fn step(&self) -> &StochMatrix {
        &self.step
    }

    pub fn initial(&self) -> Option<&StochMatrix> {
        self.initial.as_ref()
    }

    /// The state space `X`.
    pub fn states(&self) -> &FinObject {
        self.step.domain()
    }

    fn require_initial(&self) -> Result<&StochMatrix> {
        self.initial
            .as_ref()
            .ok_or_else(|| Error::ObjectMismatch("chain has no initial distribution".into()))
    }
}

fn power(x: &FinObject, n: usize) -> FinObject {
    (0..n).fold(FinObject::unit(), |acc, _| acc.tensor(x))
}

/// One inductive step: `c ↦ c ; (id^{n-1} ⊗ (copy ; (id ⊗ f)))` where `c`
/// has `n` output coordinates. Only the last coordinate feeds the new one,
/// so the composite is computed without forming the wide middle matrix.
fn extend(c: &StochMatrix, f: &StochMatrix, x: &FinObject) -> Result<StochMatrix> {
    let dim = x.dim();
    let n = c.codomain().len() / x.len().max(1);
    let codomain = power(x, n + 1);
    let cols = c.cols_len();
    let mut entries = vec![0.0; codomain.dim() * cols];
    for (row, src) in c.rows().enumerate() {
        let last = row % dim;
        for y in 0..dim {
            let p = f.get(y, last);
            if p == 0.0 {
                continue;
            }
            let out = (row * dim + y) * cols;
            for (e, &s) in entries[out..out + cols].iter_mut().zip(src) {
                *e = s * p;
            }
        }
    }
    StochMatrix::new(c.domain().clone(), codomain, entries)
}

/// `c_n: X → X^{⊗n}`.
pub fn unroll(s: &ChainSpec, n: usize) -> Result<StochMatrix> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    let x = s.states();
    let mut c = StochMatrix::identity(x);
    for _ in 1..n {
        c = extend(&c, &s.step, x)?;
    }
    Ok(c)
}

/// `c_n` with `c_0 = del`.
fn unroll_or_delete(s: &ChainSpec, n: usize) -> Result<StochMatrix> {
    if n == 0 {
        Ok(StochMatrix::delete(s.states()))
    } else {
        unroll(s, n)
    }
}

/// The joint law of the first `n` states, `c_n ∘ initial`.
pub fn joint(s: &ChainSpec, n: usize) -> Result<StochMatrix> {
    compose(&unroll(s, n)?, s.require_initial()?)
}

/// `X^ℕ` with each state flattened into a single coordinate of size
/// `X.dim()`.
pub fn path_space(s: &ChainSpec) -> Result<TensorObject> {
    Ok(TensorObject::omega(OmegaSpec::new(Vec::new(), s.states().dim())?))
}

/// `c: X → X^ℕ`, assembled from its marginals `c_d` through the Kolmogorov
/// gate.
pub fn chain_kernel(s: &ChainSpec) -> Result<CompatKernel> {
    let codomain = path_space(s)?;
    let spec = s.clone();
    let dim = s.states().dim();
    pair_from_marginals(TensorObject::finite(s.states().clone()), codomain, move |d| {
        let c = unroll_or_delete(&spec, d)?;
        c.reshape(c.domain().clone(), FinObject::new(vec![dim; d])?)
    })
}

/// `c ∘ initial: I → X^ℕ`.
pub fn chain_measure(s: &ChainSpec) -> Result<CompatKernel> {
    compose_k(&chain_kernel(s)?, &from_finite(s.require_initial()?.clone()))
}

/// Outcome of [`verify_shift_invariance`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShiftReport {
    pub depth: usize,
    pub holds: bool,
    /// `copy ; (id ⊗ (f ; c_d))` against `c_{d+1}`.
    pub prepend_deviation: f64,
    /// `c_{d+1}` with time 0 deleted against `c_d ∘ f`.
    pub tail_deviation: f64,
    pub max_deviation: f64,
}

/// Checks at output depth `d` that `c` is unchanged by a precedent step:
/// running one step and then the chain is the chain with its first state
/// removed, and prepending the current state to that recovers `c_{d+1}`.
pub fn verify_shift_invariance(s: &ChainSpec, d: usize) -> Result<ShiftReport> {
    verify_shift_invariance_with_tolerance(s, d, TOLERANCE)
}

pub fn verify_shift_invariance_with_tolerance(s: &ChainSpec, d: usize, tol: f64) -> Result<ShiftReport> {
    let x = s.states();
    let cd = unroll_or_delete(s, d)?;
    let longer = unroll(s, d + 1)?;
    let after_step = compose(&cd, &s.step)?;

    let prepend = compose(
        &tensor(&StochMatrix::identity(x), &after_step),
        &StochMatrix::copy(x),
    )?;
    let prepend_deviation = prepend.max_deviation(&longer)?;

    let k = x.len();
    let tail: Vec<usize> = (k..longer.codomain().len()).collect();
    let tail_deviation = marginalize(&longer, &tail)?.max_deviation(&after_step)?;

    let max_deviation = prepend_deviation.max(tail_deviation);
    Ok(ShiftReport {
        depth: d,
        holds: max_deviation <= tol,
        prepend_deviation,
        tail_deviation,
        max_deviation,
    })
}

/// The conditional law of the `target` state given the `given` state under
/// a joint distribution `I → X^{⊗n}`, one entry per value of the given
/// state. Values of zero mass have no conditional and yield `None`.
pub fn conditional(
    joint: &StochMatrix,
    states: &FinObject,
    given: usize,
    target: usize,
) -> Result<Vec<Option<Vec<f64>>>> {
    let k = states.len();
    let slots = |t: usize| (t * k..(t + 1) * k).collect::<Vec<usize>>();
    let mut keep = slots(given);
    keep.extend(slots(target));
    let pair = if given < target {
        marginalize(joint, &keep)?
    } else if given > target {
        // marginalize sorts positions; put the given state first again
        let m = marginalize(joint, &keep)?;
        let perm: Vec<usize> = (k..2 * k).chain(0..k).collect();
        m.reorder_codomain(&perm)?
    } else {
        return Err(Error::ObjectMismatch("conditioning a state on itself".into()));
    };
    let dim = states.dim();
    Ok((0..dim)
        .map(|g| {
            let row: Vec<f64> = (0..dim).map(|t| pair.get(g * dim + t, 0)).collect();
            let mass: f64 = row.iter().sum();
            (mass > 0.0).then(|| row.iter().map(|p| p / mass).collect())
        })
        .collect())
}
