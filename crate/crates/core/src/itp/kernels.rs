//! Named kernels on the Cantor space.

use super::{continuous_embed, CompatKernel, Level, TensorObject};
use crate::finstoch::{FinObject, StochMatrix};

/// The fair-coin measure `I → 2^ℕ`: a depth-`d` cylinder with `k` member
/// prefixes has mass `k / 2^d`.
pub fn uniform_measure() -> CompatKernel {
    CompatKernel::new(TensorObject::unit(), TensorObject::cantor(), |d| {
        Ok(Level {
            input_depth: 0,
            matrix: StochMatrix::uniform(&FinObject::bits(d)),
        })
    })
}

/// The point mass at `000…`.
pub fn dirac_zero() -> CompatKernel {
    CompatKernel::new(TensorObject::unit(), TensorObject::cantor(), |d| {
        Ok(Level {
            input_depth: 0,
            matrix: StochMatrix::point(&FinObject::bits(d), &vec![0; d])?,
        })
    })
}

/// `2^ℕ → 2^ℕ` with `f(U|x) = ½ p(U) + ½ [x ∈ U]`, `p` the uniform
/// measure. Level `d` reads `d` input coordinates and has entries
/// `½·2^{-d} + ½·[y = x]`.
pub fn biased_kernel() -> CompatKernel {
    CompatKernel::new(TensorObject::cantor(), TensorObject::cantor(), |d| {
        let obj = FinObject::bits(d);
        let spread = 0.5 / obj.dim() as f64;
        let matrix = StochMatrix::from_fn(obj.clone(), obj, |y, x| spread + if y == x { 0.5 } else { 0.0 })?;
        Ok(Level { input_depth: d, matrix })
    })
}

/// The shift `(x_0, x_1, …) ↦ (x_1, x_2, …)`.
pub fn shift() -> CompatKernel {
    let c = TensorObject::cantor();
    continuous_embed(c.clone(), c, |d| d + 1, |_, x| x[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itp::compose_k;

    #[test]
    fn uniform_depth_three() {
        let m = &uniform_measure().level(3).unwrap().matrix;
        assert!(m.entries().iter().all(|&v| v == 0.125));
    }

    #[test]
    fn biased_columns_are_exact() {
        let k = biased_kernel();
        let l = k.level(1).unwrap();
        assert_eq!(l.matrix.column(0), vec![0.75, 0.25]);
        for d in 0..=10 {
            let m = &k.level(d).unwrap().matrix;
            for x in 0..m.cols_len() {
                let sum: f64 = (0..m.rows_len()).map(|y| m.get(y, x)).sum();
                assert_eq!(sum, 1.0, "depth {d} column {x}");
            }
        }
    }

    #[test]
    fn biased_is_natural() {
        let r = biased_kernel().check_naturality(5).unwrap();
        assert!(r.passes(1e-9), "{r:?}");
    }

    #[test]
    fn biased_preserves_uniform() {
        // ∫ f(U|x) p(dx) = ½ p(U) + ½ p(U)
        let k = compose_k(&biased_kernel(), &uniform_measure()).unwrap();
        assert!(k.equivalent_up_to(&uniform_measure(), 4, 1e-12).unwrap());
    }

    #[test]
    fn shift_preserves_uniform() {
        let k = compose_k(&shift(), &uniform_measure()).unwrap();
        assert!(k.equivalent_up_to(&uniform_measure(), 5, 1e-12).unwrap());
        assert!(shift().level(3).unwrap().matrix.is_deterministic());
    }

    #[test]
    fn equivalence_ignores_input_schedule() {
        let lagged = CompatKernel::new(TensorObject::cantor(), TensorObject::cantor(), |d| {
            let m = biased_kernel().level(d)?.matrix.extend_domain(&FinObject::bits(1));
            Ok(Level {
                input_depth: d + 1,
                matrix: m,
            })
        });
        assert!(lagged.check_naturality(4).unwrap().passes(1e-12));
        for d in 0..=5 {
            assert!(lagged.equivalent_up_to(&biased_kernel(), d, 0.0).unwrap());
        }
        assert!(!uniform_measure().equivalent_up_to(&super::dirac_zero(), 1, 1e-9).unwrap());
    }
}
