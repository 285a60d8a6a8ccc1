//! Morphisms between infinite tensor products, as compatible families.
//!
//! A [`TensorObject`] is a finite product of finite sets optionally followed
//! by a countable product (its ω-part). Its depth-`d` marginal keeps the
//! finite factors and the first `d` ω-coordinates. A [`CompatKernel`]
//! assigns to each output depth `d` an input depth `n_d` and a stochastic
//! matrix `domain.marginal_at(n_d) → codomain.marginal_at(d)`. Levels are
//! produced lazily by a generator and memoised.
//!
//! The family has to be natural: deleting output coordinates of a deeper
//! level agrees with the shallower level once both are read at a common
//! input depth. [`CompatKernel::check_naturality`] measures this.

mod kernels;
mod lc;
mod ops;
pub mod random;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::cylinder::OmegaSpec;
use crate::error::{Error, Result};
use crate::finstoch::{marginalize_prefix, FinObject, StochMatrix};

pub use kernels::{biased_kernel, dirac_zero, shift, uniform_measure};
pub use lc::{lc_evaluate, LcKernelQuery};
pub use ops::{
    compose_k, continuous_embed, copy_k, delete_k, from_finite, identity_k, marginal_to_depth, pair_from_marginals,
    pair_from_marginals_with_tolerance, swap_k, tensor_k,
};
pub(crate) use ops::check_adjacent;

/// A finite object optionally followed by a countable product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorObject {
    finite: FinObject,
    omega: Option<OmegaSpec>,
}

impl TensorObject {
    pub fn new(finite: FinObject, omega: Option<OmegaSpec>) -> Self {
        Self { finite, omega }
    }

    pub fn finite(finite: FinObject) -> Self {
        Self { finite, omega: None }
    }

    pub fn unit() -> Self {
        Self::finite(FinObject::unit())
    }

    pub fn omega(spec: OmegaSpec) -> Self {
        Self {
            finite: FinObject::unit(),
            omega: Some(spec),
        }
    }

    /// The Cantor space `2^ℕ`.
    pub fn cantor() -> Self {
        Self::omega(OmegaSpec::cantor())
    }

    pub fn finite_part(&self) -> &FinObject {
        &self.finite
    }

    pub fn omega_part(&self) -> Option<&OmegaSpec> {
        self.omega.as_ref()
    }

    pub fn has_omega(&self) -> bool {
        self.omega.is_some()
    }

    /// `d` when there is an ω-part, 0 otherwise.
    pub fn effective_depth(&self, d: usize) -> usize {
        if self.omega.is_some() {
            d
        } else {
            0
        }
    }

    /// Finite factors followed by the first `d` ω-coordinates.
    pub fn marginal_at(&self, d: usize) -> FinObject {
        match &self.omega {
            Some(w) => self.finite.tensor(&w.prefix_object(d)),
            None => self.finite.clone(),
        }
    }

    /// Monoidal product. Finite factors concatenate; two ω-parts are merged
    /// with the left operand on even slots and the right on odd slots.
    pub fn tensor(&self, other: &TensorObject) -> TensorObject {
        let omega = match (&self.omega, &other.omega) {
            (Some(a), Some(b)) => Some(OmegaSpec::interleave(a, b)),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        TensorObject {
            finite: self.finite.tensor(&other.finite),
            omega,
        }
    }

    /// Whether every coordinate has size 2.
    pub fn is_binary(&self) -> bool {
        self.finite.factors().iter().all(|&s| s == 2) && self.omega.as_ref().is_none_or(OmegaSpec::is_cantor)
    }
}

impl fmt::Display for TensorObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.omega, self.finite.is_unit()) {
            (None, _) => write!(f, "{}", self.finite),
            (Some(w), true) => write!(f, "{w}"),
            (Some(w), false) => write!(f, "{}⊗{w}", self.finite),
        }
    }
}

/// How the factors of `A ⊗ B` are arranged. The natural order of a
/// Kronecker product is `[A.fin, A.ω, B.fin, B.ω]`; the canonical order of
/// the product object is `[A.fin, B.fin, interleaved ω]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    left_fin: usize,
    right_fin: usize,
    left_omega: bool,
    right_omega: bool,
}

impl Layout {
    pub(crate) fn of(left: &TensorObject, right: &TensorObject) -> Self {
        Self {
            left_fin: left.finite.len(),
            right_fin: right.finite.len(),
            left_omega: left.has_omega(),
            right_omega: right.has_omega(),
        }
    }

    /// How many of the first `d` product slots belong to each side.
    pub(crate) fn split(&self, d: usize) -> (usize, usize) {
        match (self.left_omega, self.right_omega) {
            (true, true) => (d.div_ceil(2), d / 2),
            (true, false) => (d, 0),
            (false, true) => (0, d),
            (false, false) => (0, 0),
        }
    }

    /// Smallest product depth whose split covers `a` left and `b` right
    /// coordinates.
    pub(crate) fn covering(&self, a: usize, b: usize) -> usize {
        match (self.left_omega, self.right_omega) {
            (true, true) => (2 * a).saturating_sub(1).max(2 * b),
            (true, false) => a,
            (false, true) => b,
            (false, false) => 0,
        }
    }

    /// For each canonical factor position at depth `d`, its natural position.
    pub(crate) fn perm(&self, d: usize) -> Vec<usize> {
        let (a, b) = self.split(d);
        let lf = self.left_fin;
        let rf = self.right_fin;
        let mut perm: Vec<usize> = (0..lf).collect();
        perm.extend((0..rf).map(|j| lf + a + j));
        let (mut li, mut ri) = (0, 0);
        for s in 0..d {
            let left = match (self.left_omega, self.right_omega) {
                (true, true) => s % 2 == 0,
                (true, false) => true,
                _ => false,
            };
            if left {
                perm.push(lf + li);
                li += 1;
            } else {
                perm.push(lf + a + rf + ri);
                ri += 1;
            }
        }
        debug_assert_eq!((li, ri), (a, b));
        perm
    }

    pub(crate) fn to_canonical(self, d: usize, natural: &[usize]) -> Vec<usize> {
        self.perm(d).iter().map(|&p| natural[p]).collect()
    }

    pub(crate) fn to_natural(self, d: usize, canonical: &[usize]) -> Vec<usize> {
        let perm = self.perm(d);
        let mut natural = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            natural[p] = canonical[i];
        }
        natural
    }

    pub(crate) fn left_len(&self, d: usize) -> usize {
        self.left_fin + self.split(d).0
    }
}

/// One level of a compatible family.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub input_depth: usize,
    pub matrix: StochMatrix,
}

/// JSON dump of a level: `{ "depth", "inputDepth", "matrix" }`.
#[derive(Debug, Clone, Serialize)]
pub struct LevelDump<'a> {
    pub depth: usize,
    #[serde(rename = "inputDepth")]
    pub input_depth: usize,
    pub matrix: &'a StochMatrix,
}

impl Level {
    pub fn dump(&self, depth: usize) -> LevelDump<'_> {
        LevelDump {
            depth,
            input_depth: self.input_depth,
            matrix: &self.matrix,
        }
    }
}

type Generator = dyn Fn(&CompatKernel, usize) -> Result<Level> + Send + Sync;

struct Inner {
    domain: TensorObject,
    codomain: TensorObject,
    generator: Box<Generator>,
    cache: Mutex<HashMap<usize, Arc<Level>>>,
}

/// A morphism `domain → codomain` given by a lazy, memoised compatible
/// family. Cloning is cheap and shares the cache.
///
/// Generators must be pure: probing the same depth twice has to yield the
/// same matrix. The cache relies on it.
#[derive(Clone)]
pub struct CompatKernel {
    inner: Arc<Inner>,
}

impl fmt::Debug for CompatKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompatKernel")
            .field("domain", &self.inner.domain)
            .field("codomain", &self.inner.codomain)
            .finish_non_exhaustive()
    }
}

impl CompatKernel {
    /// Wraps a generator `d ↦ (n_d, matrix)`.
    pub fn new(
        domain: TensorObject,
        codomain: TensorObject,
        generator: impl Fn(usize) -> Result<Level> + Send + Sync + 'static,
    ) -> Self {
        Self::with_self(domain, codomain, move |_, d| generator(d))
    }

    /// Like [`CompatKernel::new`], but the generator may probe shallower
    /// levels of the kernel being defined.
    pub(crate) fn with_self(
        domain: TensorObject,
        codomain: TensorObject,
        generator: impl Fn(&CompatKernel, usize) -> Result<Level> + Send + Sync + 'static,
    ) -> Self {
        Self {
            inner: Arc::new(Inner {
                domain,
                codomain,
                generator: Box::new(generator),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn domain(&self) -> &TensorObject {
        &self.inner.domain
    }

    pub fn codomain(&self) -> &TensorObject {
        &self.inner.codomain
    }

    /// The level at output depth `d`. Without an ω-part in the codomain all
    /// depths share level 0; without one in the domain the input depth is 0.
    pub fn level(&self, depth: usize) -> Result<Arc<Level>> {
        let d = self.inner.codomain.effective_depth(depth);
        if let Some(hit) = self.cache().get(&d) {
            return Ok(hit.clone());
        }
        let mut level = (self.inner.generator)(self, d)?;
        if !self.inner.domain.has_omega() {
            level.input_depth = 0;
        }
        let expected_dom = self.inner.domain.marginal_at(level.input_depth);
        let expected_cod = self.inner.codomain.marginal_at(d);
        if level.matrix.domain() != &expected_dom || level.matrix.codomain() != &expected_cod {
            return Err(Error::LevelShape {
                depth: d,
                expected: format!("{expected_dom} → {expected_cod}"),
                found: level.matrix.signature(),
            });
        }
        let level = Arc::new(level);
        Ok(self.cache().entry(d).or_insert(level).clone())
    }

    fn cache(&self) -> std::sync::MutexGuard<'_, HashMap<usize, Arc<Level>>> {
        self.inner.cache.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// The level at depth `d` read at input depth `n`, which must be at
    /// least the level's own input depth.
    pub fn level_at_input(&self, d: usize, n: usize) -> Result<StochMatrix> {
        let level = self.level(d)?;
        let n = self.inner.domain.effective_depth(n);
        if n < level.input_depth {
            return Err(Error::PrefixTooShort {
                required_depth: level.input_depth,
                required_len: self.inner.domain.marginal_at(level.input_depth).len(),
                given: self.inner.domain.marginal_at(n).len(),
            });
        }
        Ok(lift_input(&self.inner.domain, &level.matrix, level.input_depth, n))
    }

    /// Deviation of the naturality square between output depths
    /// `lower ≤ upper`.
    pub fn naturality_deviation(&self, lower: usize, upper: usize) -> Result<f64> {
        let lo = self.level(lower)?;
        let hi = self.level(upper)?;
        square_deviation(&self.inner.domain, &self.inner.codomain, lower, &lo, &hi)
    }

    /// Checks every square `0 ≤ d < d' ≤ max_depth` and that input depths
    /// are monotone.
    pub fn check_naturality(&self, max_depth: usize) -> Result<NaturalityReport> {
        let mut report = NaturalityReport {
            max_depth,
            max_deviation: 0.0,
            worst: None,
            monotone: true,
            squares: 0,
        };
        for upper in 1..=max_depth {
            for lower in 0..upper {
                let dev = self.naturality_deviation(lower, upper)?;
                report.squares += 1;
                if report.worst.is_none() || dev > report.max_deviation {
                    report.max_deviation = dev;
                    report.worst = Some((lower, upper));
                }
                if self.level(lower)?.input_depth > self.level(upper)?.input_depth {
                    report.monotone = false;
                }
            }
        }
        Ok(report)
    }

    fn same_objects(&self, other: &CompatKernel) -> Result<()> {
        if self.domain() != other.domain() || self.codomain() != other.codomain() {
            return Err(Error::ObjectMismatch(format!(
                "{} → {} vs {} → {}",
                self.domain(),
                self.codomain(),
                other.domain(),
                other.codomain()
            )));
        }
        Ok(())
    }

    /// Largest entry difference over output depths `0..=depth`, each pair of
    /// levels read at their common input depth.
    pub fn max_difference_up_to(&self, other: &CompatKernel, depth: usize) -> Result<f64> {
        self.same_objects(other)?;
        let mut worst: f64 = 0.0;
        for d in 0..=depth {
            let a = self.level(d)?;
            let b = other.level(d)?;
            let n = a.input_depth.max(b.input_depth);
            let la = lift_input(self.domain(), &a.matrix, a.input_depth, n);
            let lb = lift_input(self.domain(), &b.matrix, b.input_depth, n);
            worst = worst.max(la.max_deviation(&lb)?);
        }
        Ok(worst)
    }

    /// Equality of the two families up to output depth `depth`. A `true`
    /// answer says nothing about deeper levels.
    pub fn equivalent_up_to(&self, other: &CompatKernel, depth: usize, tol: f64) -> Result<bool> {
        Ok(self.max_difference_up_to(other, depth)? <= tol)
    }
}

/// Result of [`CompatKernel::check_naturality`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NaturalityReport {
    pub max_depth: usize,
    pub max_deviation: f64,
    pub worst: Option<(usize, usize)>,
    pub monotone: bool,
    pub squares: usize,
}

impl NaturalityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.monotone && self.max_deviation <= tol
    }
}

/// Reads a level with input depth `from` at the deeper input depth `to` by
/// deleting the extra input coordinates.
pub(crate) fn lift_input(domain: &TensorObject, m: &StochMatrix, from: usize, to: usize) -> StochMatrix {
    match &domain.omega {
        Some(w) if to > from => {
            let extra = FinObject::new(w.sizes(to)[from..].to_vec()).expect("sizes are positive");
            m.extend_domain(&extra)
        }
        _ => m.clone(),
    }
}

pub(crate) fn square_deviation(
    domain: &TensorObject,
    codomain: &TensorObject,
    lower_depth: usize,
    lower: &Level,
    upper: &Level,
) -> Result<f64> {
    let keep = codomain.finite.len() + codomain.effective_depth(lower_depth);
    let top = marginalize_prefix(&upper.matrix, keep)?;
    let n = lower.input_depth.max(upper.input_depth);
    let a = lift_input(domain, &top, upper.input_depth, n);
    let b = lift_input(domain, &lower.matrix, lower.input_depth, n);
    a.max_deviation(&b)
}
