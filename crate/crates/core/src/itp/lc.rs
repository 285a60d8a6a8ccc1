use super::CompatKernel;
use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};

/// A locally constant kernel evaluated on a clopen: `f(U | x)`.
#[derive(Debug, Clone)]
pub struct LcKernelQuery<'a> {
    pub kernel: &'a CompatKernel,
    pub target: &'a CylinderSet,
    /// A point of a finite marginal of the domain: the finite coordinates
    /// followed by a prefix of the ω-coordinates.
    pub given: &'a [usize],
}

impl LcKernelQuery<'_> {
    pub fn evaluate(&self) -> Result<f64> {
        lc_evaluate(self.kernel, self.target, self.given)
    }
}

/// `f(U | x)` as a finite sum of entries of the level at `U`'s canonical
/// depth. Finite codomain factors are summed out. The conditioning point
/// may be longer than needed; extra coordinates are ignored.
pub fn lc_evaluate(kernel: &CompatKernel, target: &CylinderSet, given: &[usize]) -> Result<f64> {
    let space = kernel.codomain().omega_part().ok_or(Error::NoOmega)?;
    if space != target.space() {
        return Err(Error::SpaceMismatch);
    }
    let target = target.reduce();
    let level = kernel.level(target.depth())?;
    let dom = kernel.domain().marginal_at(level.input_depth);
    if given.len() < dom.len() {
        return Err(Error::PrefixTooShort {
            required_depth: level.input_depth,
            required_len: dom.len(),
            given: given.len(),
        });
    }
    let x = dom.codec().try_encode(&given[..dom.len()]).ok_or_else(|| Error::Tuple {
        tuple: given[..dom.len()].to_vec(),
        object: dom.clone(),
    })?;
    let block = target.members().len();
    Ok((0..level.matrix.rows_len())
        .filter(|y| target.members()[y % block])
        .map(|y| level.matrix.get(y, x))
        .sum())
}
