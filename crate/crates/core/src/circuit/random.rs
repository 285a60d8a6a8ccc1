//! Seeded random terms and plates for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PlateFamily, Term};
use crate::itp::TensorObject;

/// Widest intermediate layer a random term may have.
pub const MAX_WIDTH: usize = 4;

fn layer(gate: Term, at: usize, gate_inputs: usize, width: usize) -> Term {
    let mut parts = Vec::new();
    if at > 0 {
        parts.push(Term::Id(at));
    }
    parts.push(gate);
    let rest = width - at - gate_inputs;
    if rest > 0 {
        parts.push(Term::Id(rest));
    }
    Term::par_all(parts)
}

fn state<R: Rng>(rng: &mut R) -> Term {
    match rng.gen_range(0..8) {
        0 => Term::State(0.0),
        1 => Term::State(1.0),
        2 => Term::State(0.5),
        _ => Term::State((rng.gen::<f64>() * 1000.0).round() / 1000.0),
    }
}

/// A random term `inputs → outputs` built from `steps` random generator
/// layers, followed by whatever layers are needed to reach `outputs` wires.
pub fn random_term<R: Rng>(rng: &mut R, inputs: usize, outputs: usize, steps: usize) -> Term {
    let mut width = inputs;
    let mut layers = Vec::new();
    let push = |layers: &mut Vec<Term>, width: &mut usize, gate: Term, gin: usize, gout: usize, at: usize| {
        layers.push(layer(gate, at, gin, *width));
        *width = *width - gin + gout;
    };
    for _ in 0..steps {
        let mut options: Vec<(Term, usize, usize)> = vec![];
        if width >= 1 {
            options.push((Term::Not, 1, 1));
            options.push((Term::Id(1), 1, 1));
            options.push((Term::Del, 1, 0));
            if width < MAX_WIDTH {
                options.push((Term::Copy, 1, 2));
            }
        }
        if width >= 2 {
            options.push((Term::Swap, 2, 2));
            options.push((Term::And, 2, 1));
        }
        if width < MAX_WIDTH {
            options.push((state(rng), 0, 1));
        }
        let (gate, gin, gout) = options.swap_remove(rng.gen_range(0..options.len()));
        let at = rng.gen_range(0..=width - gin);
        push(&mut layers, &mut width, gate, gin, gout, at);
    }
    while width > outputs {
        let shrink = if width >= 2 && rng.gen_bool(0.5) {
            (Term::And, 2)
        } else {
            (Term::Del, 1)
        };
        let at = rng.gen_range(0..=width - shrink.1);
        let gout = usize::from(shrink.0 == Term::And);
        push(&mut layers, &mut width, shrink.0, shrink.1, gout, at);
    }
    while width < outputs {
        if width >= 1 && rng.gen_bool(0.5) {
            let at = rng.gen_range(0..width);
            push(&mut layers, &mut width, Term::Copy, 1, 2, at);
        } else {
            let s = state(rng);
            let at = rng.gen_range(0..=width);
            push(&mut layers, &mut width, s, 0, 1, at);
        }
    }
    Term::seq_all(layers, inputs)
}

/// The shape of a random plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateKind {
    /// `I → 2^ℕ`, independent states.
    Coins,
    /// `I → 2^ℕ`, a two-state chain started from a random state.
    Chain,
    /// `2^ℕ → 2^ℕ`, output `k` is a random function of input `k`.
    Pointwise,
    /// `2^ℕ → 2^ℕ`, output `k` is a random function of inputs `k` and `k+1`.
    Window,
}

impl PlateKind {
    pub fn from_cantor(self) -> bool {
        matches!(self, PlateKind::Pointwise | PlateKind::Window)
    }
}

fn gate(seed: u64, k: usize, inputs: usize) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xA24B_AED4_963E_E407) ^ (k as u64));
    let steps = rng.gen_range(0..4);
    random_term(&mut rng, inputs, 1, steps)
}

/// A seeded plate of the given kind. Every depth reuses the same per-
/// coordinate pieces, so the family is compatible by construction.
pub fn random_plate_of(kind: PlateKind, seed: u64) -> PlateFamily {
    let (dom, cod) = if kind.from_cantor() {
        (TensorObject::cantor(), TensorObject::cantor())
    } else {
        (TensorObject::unit(), TensorObject::cantor())
    };
    let body = move |d: usize| -> crate::Result<Term> {
        Ok(match kind {
            PlateKind::Coins => Term::par_all((0..d).map(|k| gate(seed, k, 0))),
            PlateKind::Pointwise => Term::par_all((0..d).map(|k| gate(seed, k, 1))),
            PlateKind::Window => {
                if d == 0 {
                    return Ok(Term::Empty);
                }
                let mut spread = vec![Term::Id(1)];
                spread.extend(std::iter::repeat_n(Term::Copy, d - 1));
                spread.push(Term::Id(1));
                Term::seq(Term::par_all(spread), Term::par_all((0..d).map(|k| gate(seed, k, 2))))
            }
            PlateKind::Chain => {
                if d == 0 {
                    return Ok(Term::Empty);
                }
                let step = gate(seed, 1, 1);
                let mut stages = vec![gate(seed, 0, 0)];
                for n in 2..=d {
                    let grow = Term::seq(Term::Copy, Term::par(Term::Id(1), step.clone()));
                    stages.push(if n > 2 { Term::par(Term::Id(n - 2), grow) } else { grow });
                }
                Term::seq_all(stages, 0)
            }
        })
    };
    PlateFamily::new(dom, cod, body).expect("binary objects")
}

/// A seeded plate of a random kind, from the Cantor space or from `I`.
pub fn random_plate(seed: u64, from_cantor: bool) -> PlateFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds: &[PlateKind] = if from_cantor {
        &[PlateKind::Pointwise, PlateKind::Window]
    } else {
        &[PlateKind::Coins, PlateKind::Chain]
    };
    random_plate_of(*kinds.choose(&mut rng).expect("non-empty"), seed)
}
