use std::sync::Arc;

use super::{lift_input, square_deviation, CompatKernel, Layout, Level, TensorObject};
use crate::error::{Error, Result};
use crate::finstoch::{compose, marginalize_prefix, tensor, StochMatrix};
use crate::TOLERANCE;

/// The constant family of a finite matrix.
pub fn from_finite(m: StochMatrix) -> CompatKernel {
    let domain = TensorObject::finite(m.domain().clone());
    let codomain = TensorObject::finite(m.codomain().clone());
    let level = Level {
        input_depth: 0,
        matrix: m,
    };
    CompatKernel::new(domain, codomain, move |_| Ok(level.clone()))
}

pub fn identity_k(x: &TensorObject) -> CompatKernel {
    let obj = x.clone();
    CompatKernel::new(x.clone(), x.clone(), move |d| {
        Ok(Level {
            input_depth: d,
            matrix: StochMatrix::identity(&obj.marginal_at(d)),
        })
    })
}

/// `X → I`.
pub fn delete_k(x: &TensorObject) -> CompatKernel {
    let matrix = StochMatrix::delete(&x.marginal_at(0));
    CompatKernel::new(x.clone(), TensorObject::unit(), move |_| {
        Ok(Level {
            input_depth: 0,
            matrix: matrix.clone(),
        })
    })
}

/// The projection `X → X_0 ⊗ … ⊗ X_{k-1}` onto a finite marginal.
pub fn marginal_to_depth(x: &TensorObject, k: usize) -> CompatKernel {
    let k = x.effective_depth(k);
    let target = x.marginal_at(k);
    let matrix = StochMatrix::identity(&target);
    CompatKernel::new(x.clone(), TensorObject::finite(target), move |_| {
        Ok(Level {
            input_depth: k,
            matrix: matrix.clone(),
        })
    })
}

/// A family of 0/1 matrices from a prefix map, without consistency checks.
fn deterministic_family(
    domain: TensorObject,
    codomain: TensorObject,
    input_depth: impl Fn(usize) -> usize + Send + Sync + 'static,
    map: impl Fn(usize, &[usize]) -> Vec<usize> + Send + Sync + 'static,
) -> CompatKernel {
    let (dom, cod) = (domain.clone(), codomain.clone());
    CompatKernel::new(domain, codomain, move |d| {
        let n = dom.effective_depth(input_depth(d));
        let matrix = StochMatrix::deterministic(dom.marginal_at(n), cod.marginal_at(d), |x| map(d, x))?;
        Ok(Level { input_depth: n, matrix })
    })
}

/// `cop_X: X → X ⊗ X`, copying every coordinate.
pub fn copy_k(x: &TensorObject) -> CompatKernel {
    let layout = Layout::of(x, x);
    let fin = x.finite_part().len();
    deterministic_family(
        x.clone(),
        x.tensor(x),
        move |d| layout.split(d).0,
        move |d, t| {
            let (a, b) = layout.split(d);
            let mut natural = t[..fin + a].to_vec();
            natural.extend_from_slice(&t[..fin + b]);
            layout.to_canonical(d, &natural)
        },
    )
}

/// The symmetry `X ⊗ Y → Y ⊗ X`.
pub fn swap_k(x: &TensorObject, y: &TensorObject) -> CompatKernel {
    let dom_layout = Layout::of(x, y);
    let cod_layout = Layout::of(y, x);
    let (xf, yf) = (x.finite_part().len(), y.finite_part().len());
    let input_depth = move |d: usize| {
        let (cy, cx) = cod_layout.split(d);
        dom_layout.covering(cx, cy)
    };
    deterministic_family(x.tensor(y), y.tensor(x), input_depth, move |d, t| {
        let (cy, cx) = cod_layout.split(d);
        let n = input_depth(d);
        let natural = dom_layout.to_natural(n, t);
        let (xs, ys) = natural.split_at(dom_layout.left_len(n));
        let mut out = ys[..yf + cy].to_vec();
        out.extend_from_slice(&xs[..xf + cx]);
        cod_layout.to_canonical(d, &out)
    })
}

/// `g ∘ f`: level `d` of `g` asks for depth `m`, level `m` of `f` asks for
/// depth `n`, and the result is `(n, G·F)`.
pub fn compose_k(g: &CompatKernel, f: &CompatKernel) -> Result<CompatKernel> {
    if f.codomain() != g.domain() {
        return Err(Error::ObjectMismatch(format!(
            "cannot compose: codomain {} does not match domain {}",
            f.codomain(),
            g.domain()
        )));
    }
    let (g, f) = (g.clone(), f.clone());
    Ok(CompatKernel::new(f.domain().clone(), g.codomain().clone(), move |d| {
        let gl = g.level(d)?;
        let fl = f.level(gl.input_depth)?;
        Ok(Level {
            input_depth: fl.input_depth,
            matrix: compose(&gl.matrix, &fl.matrix)?,
        })
    }))
}

/// `f ⊗ h`, with ω-coordinates interleaved (left operand on even slots).
pub fn tensor_k(f: &CompatKernel, h: &CompatKernel) -> CompatKernel {
    let dom_layout = Layout::of(f.domain(), h.domain());
    let cod_layout = Layout::of(f.codomain(), h.codomain());
    let (f, h) = (f.clone(), h.clone());
    let domain = f.domain().tensor(h.domain());
    let codomain = f.codomain().tensor(h.codomain());
    CompatKernel::new(domain, codomain, move |d| {
        let (a, b) = cod_layout.split(d);
        let fl = f.level(a)?;
        let hl = h.level(b)?;
        let n = dom_layout.covering(
            f.domain().effective_depth(fl.input_depth),
            h.domain().effective_depth(hl.input_depth),
        );
        let (na, nb) = dom_layout.split(n);
        let fm = lift_input(f.domain(), &fl.matrix, fl.input_depth, na);
        let hm = lift_input(h.domain(), &hl.matrix, hl.input_depth, nb);
        let matrix = tensor(&fm, &hm)
            .reorder_codomain(&cod_layout.perm(d))?
            .reorder_domain(&dom_layout.perm(n))?;
        Ok(Level { input_depth: n, matrix })
    })
}

/// Kolmogorov gate: assembles a kernel `A → X` from its finite marginals
/// `A → X_d`, checking that each level marginalises onto the previous one.
///
/// `A` must be finite. Probing depth `d` validates all depths up to `d`, so
/// an inconsistent family is reported at its first bad depth.
pub fn pair_from_marginals(
    domain: TensorObject,
    codomain: TensorObject,
    family: impl Fn(usize) -> Result<StochMatrix> + Send + Sync + 'static,
) -> Result<CompatKernel> {
    pair_from_marginals_with_tolerance(domain, codomain, family, TOLERANCE)
}

pub fn pair_from_marginals_with_tolerance(
    domain: TensorObject,
    codomain: TensorObject,
    family: impl Fn(usize) -> Result<StochMatrix> + Send + Sync + 'static,
    tol: f64,
) -> Result<CompatKernel> {
    if domain.has_omega() {
        return Err(Error::ObjectMismatch(format!(
            "marginal families need a finite domain, got {domain}"
        )));
    }
    let family = Arc::new(family);
    let keep_fin = codomain.finite_part().len();
    Ok(CompatKernel::with_self(domain, codomain, move |this, d| {
        let matrix = family(d)?;
        if d > 0 {
            let prev = this.level(d - 1)?;
            let down = marginalize_prefix(&matrix, keep_fin + d - 1)?;
            let deviation = down.max_deviation(&prev.matrix)?;
            if deviation > tol {
                return Err(Error::Inconsistent { depth: d, deviation });
            }
        }
        Ok(Level { input_depth: 0, matrix })
    }))
}

/// The deterministic kernel of a continuous map given on prefixes: for
/// output depth `d`, `map(d, ·)` sends depth-`input_depth(d)` inputs to
/// depth-`d` outputs. Consistency across depths is checked level by level.
pub fn continuous_embed(
    domain: TensorObject,
    codomain: TensorObject,
    input_depth: impl Fn(usize) -> usize + Send + Sync + 'static,
    map: impl Fn(usize, &[usize]) -> Vec<usize> + Send + Sync + 'static,
) -> CompatKernel {
    let (dom, cod) = (domain.clone(), codomain.clone());
    CompatKernel::with_self(domain, codomain, move |this, d| {
        let n = dom.effective_depth(input_depth(d));
        let matrix = StochMatrix::deterministic(dom.marginal_at(n), cod.marginal_at(d), |x| map(d, x))?;
        let level = Level { input_depth: n, matrix };
        if d > 0 && cod.has_omega() {
            let prev = this.level(d - 1)?;
            check_adjacent(&dom, &cod, d, &prev, &level)?;
        }
        Ok(level)
    })
}

/// Checks the naturality square between `prev` (depth `d - 1`) and `level`
/// (depth `d`), and that input depths do not decrease.
pub(crate) fn check_adjacent(
    domain: &TensorObject,
    codomain: &TensorObject,
    d: usize,
    prev: &Level,
    level: &Level,
) -> Result<()> {
    if prev.input_depth > level.input_depth {
        return Err(Error::InputDepth {
            lower: d - 1,
            lower_input: prev.input_depth,
            upper: d,
            upper_input: level.input_depth,
        });
    }
    let deviation = square_deviation(domain, codomain, d - 1, prev, level)?;
    if deviation > TOLERANCE {
        return Err(Error::Naturality {
            lower: d - 1,
            upper: d,
            deviation,
        });
    }
    Ok(())
}
