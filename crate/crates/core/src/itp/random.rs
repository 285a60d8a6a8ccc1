//! Seeded random locally constant kernels on the Cantor space.
//!
//! Output coordinate `k` is drawn from a table indexed by the earlier outputs
//! and by the first `k + lag` inputs. Tables depend only on the seed and on
//! `k`, so every level of the family is consistent with every other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CompatKernel, Level, TensorObject};
use crate::finstoch::{FinObject, StochMatrix};

/// Probability that output `k` is 1, per context
/// `(y_0..y_{k-1}, x_0..x_{k+lag-1})`.
fn coordinate_table(seed: u64, k: usize, contexts: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (k as u64));
    (0..contexts)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen::<f64>(),
        })
        .collect()
}

/// A random kernel `2^ℕ → 2^ℕ` (or `I → 2^ℕ` when `from_cantor` is false)
/// whose depth-`d` level reads `d + lag` input coordinates.
pub fn random_lc_kernel(seed: u64, from_cantor: bool, lag: usize) -> CompatKernel {
    let domain = if from_cantor {
        TensorObject::cantor()
    } else {
        TensorObject::unit()
    };
    CompatKernel::new(domain, TensorObject::cantor(), move |d| {
        let n = if from_cantor && d > 0 { d + lag } else { 0 };
        let tables: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let x_bits = if from_cantor { k + lag } else { 0 };
                coordinate_table(seed, k, 1 << (k + x_bits))
            })
            .collect();
        let matrix = StochMatrix::from_fn(FinObject::bits(n), FinObject::bits(d), |y, x| {
            let mut p = 1.0;
            for (k, table) in tables.iter().enumerate() {
                let x_bits = if from_cantor { k + lag } else { 0 };
                let y_head = y >> (d - k);
                let x_head = x >> (n - x_bits);
                let ctx = (y_head << x_bits) | x_head;
                let one = table[ctx];
                p *= if (y >> (d - 1 - k)) & 1 == 1 { one } else { 1.0 - one };
            }
            p
        })?;
        Ok(Level { input_depth: n, matrix })
    })
}

/// A random measure `I → 2^ℕ`.
pub fn random_measure(seed: u64) -> CompatKernel {
    random_lc_kernel(seed, false, 0)
}
