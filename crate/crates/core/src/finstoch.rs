//! Finite stochastic matrices.
//!
//! A [`StochMatrix`] `f: X → Y` stores `f(y|x)` densely, one row per output
//! and one column per input, so every column is a probability distribution.
//! Objects are [`FinObject`]s, finite lists of factor sizes whose elements are
//! flattened with a mixed-radix [`IndexCodec`], most significant factor
//! first. With that convention the monoidal product of matrices is exactly
//! the Kronecker product.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TOLERANCE;

/// A finite product of finite sets, described by its factor sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FinObject {
    factors: Vec<usize>,
    dim: usize,
}

impl FinObject {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::ZeroFactor(factors));
        }
        let dim = factors.iter().product();
        Ok(Self { factors, dim })
    }

    /// The monoidal unit `I`: no factors, one element.
    pub fn unit() -> Self {
        Self {
            factors: Vec::new(),
            dim: 1,
        }
    }

    /// `2^k`, the objects of the binary fragment.
    pub fn bits(k: usize) -> Self {
        Self {
            factors: vec![2; k],
            dim: 1 << k,
        }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn tensor(&self, other: &FinObject) -> FinObject {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        FinObject {
            factors,
            dim: self.dim * other.dim,
        }
    }

    pub fn codec(&self) -> IndexCodec {
        IndexCodec::new(&self.factors)
    }

    /// Keeps the factors at `positions`, in the given order.
    pub fn select(&self, positions: &[usize]) -> Result<FinObject> {
        let mut factors = Vec::with_capacity(positions.len());
        for &p in positions {
            match self.factors.get(p) {
                Some(&s) => factors.push(s),
                None => {
                    return Err(Error::Position {
                        position: p,
                        object: self.clone(),
                    })
                }
            }
        }
        FinObject::new(factors)
    }
}

impl TryFrom<Vec<usize>> for FinObject {
    type Error = Error;

    fn try_from(factors: Vec<usize>) -> Result<Self> {
        FinObject::new(factors)
    }
}

impl From<FinObject> for Vec<usize> {
    fn from(obj: FinObject) -> Self {
        obj.factors
    }
}

impl fmt::Display for FinObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (i, s) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Mixed-radix bijection between tuples and flat indices, most significant
/// factor first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCodec {
    factors: Vec<usize>,
    strides: Vec<usize>,
}

impl IndexCodec {
    pub fn new(factors: &[usize]) -> Self {
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        Self {
            factors: factors.to_vec(),
            strides,
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// Flat index of `tuple`. Panics in debug builds on out-of-range digits.
    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.factors.len());
        tuple
            .iter()
            .zip(&self.strides)
            .zip(&self.factors)
            .map(|((&t, &s), &n)| {
                debug_assert!(t < n);
                t * s
            })
            .sum()
    }

    pub fn try_encode(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.factors.len() || tuple.iter().zip(&self.factors).any(|(t, n)| t >= n) {
            return None;
        }
        Some(self.encode(tuple))
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        self.decode_into(index, &mut out);
        out
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for i in (0..self.factors.len()).rev() {
            out[i] = index % self.factors[i];
            index /= self.factors[i];
        }
    }
}

/// A column-stochastic matrix `f(y|x)`, a morphism `domain → codomain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct StochMatrix {
    domain: FinObject,
    codomain: FinObject,
    /// Row-major, `codomain.dim()` rows by `domain.dim()` columns.
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    domain: Vec<usize>,
    codomain: Vec<usize>,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for StochMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        StochMatrix::from_rows(
            FinObject::new(json.domain)?,
            FinObject::new(json.codomain)?,
            json.entries,
        )
    }
}

impl From<StochMatrix> for MatrixJson {
    fn from(m: StochMatrix) -> Self {
        MatrixJson {
            domain: m.domain.factors.clone(),
            codomain: m.codomain.factors.clone(),
            entries: m.rows().map(<[f64]>::to_vec).collect(),
        }
    }
}

impl StochMatrix {
    /// Builds a matrix from row-major entries, checking stochasticity at
    /// [`TOLERANCE`].
    pub fn new(domain: FinObject, codomain: FinObject, entries: Vec<f64>) -> Result<Self> {
        let expected = domain.dim * codomain.dim;
        if entries.len() != expected {
            return Err(Error::Shape {
                domain,
                codomain,
                expected,
                found: entries.len(),
            });
        }
        let m = Self {
            domain,
            codomain,
            entries,
        };
        m.validate(TOLERANCE)?;
        Ok(m)
    }

    pub fn from_rows(domain: FinObject, codomain: FinObject, rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = domain.dim;
        if rows.len() != codomain.dim || rows.iter().any(|r| r.len() != cols) {
            let found = rows.iter().map(Vec::len).sum();
            return Err(Error::Shape {
                expected: domain.dim * codomain.dim,
                domain,
                codomain,
                found,
            });
        }
        Self::new(domain, codomain, rows.concat())
    }

    /// Entry `(y, x)` given by `f(y, x)` on flat indices.
    pub fn from_fn(domain: FinObject, codomain: FinObject, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let (rows, cols) = (codomain.dim, domain.dim);
        let mut entries = Vec::with_capacity(rows * cols);
        for y in 0..rows {
            for x in 0..cols {
                entries.push(f(y, x));
            }
        }
        Self::new(domain, codomain, entries)
    }

    /// The 0/1 matrix of a function between flat indices.
    pub fn from_map(domain: FinObject, codomain: FinObject, map: impl Fn(usize) -> usize) -> Result<Self> {
        let cols = domain.dim;
        let mut entries = vec![0.0; codomain.dim * cols];
        for x in 0..cols {
            let y = map(x);
            if y >= codomain.dim {
                return Err(Error::Tuple {
                    tuple: vec![y],
                    object: codomain,
                });
            }
            entries[y * cols + x] = 1.0;
        }
        Ok(Self {
            domain,
            codomain,
            entries,
        })
    }

    /// The 0/1 matrix of a function between tuples.
    pub fn deterministic(
        domain: FinObject,
        codomain: FinObject,
        map: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        let dc = domain.codec();
        let cc = codomain.codec();
        let cols = domain.dim;
        let mut entries = vec![0.0; codomain.dim * cols];
        let mut x_tuple = vec![0; domain.len()];
        for x in 0..cols {
            dc.decode_into(x, &mut x_tuple);
            let y_tuple = map(&x_tuple);
            let y = cc.try_encode(&y_tuple).ok_or_else(|| Error::Tuple {
                tuple: y_tuple.clone(),
                object: codomain.clone(),
            })?;
            entries[y * cols + x] = 1.0;
        }
        Ok(Self {
            domain,
            codomain,
            entries,
        })
    }

    pub fn identity(x: &FinObject) -> Self {
        Self::from_map(x.clone(), x.clone(), |i| i).expect("identity is in range")
    }

    /// `del_X: X → I`, the all-ones row.
    pub fn delete(x: &FinObject) -> Self {
        Self {
            domain: x.clone(),
            codomain: FinObject::unit(),
            entries: vec![1.0; x.dim],
        }
    }

    /// `cop_X: X → X ⊗ X`, `cop(y, z | x) = [x = y = z]`.
    pub fn copy(x: &FinObject) -> Self {
        let n = x.dim;
        Self::from_map(x.clone(), x.tensor(x), |i| i * n + i).expect("copy is in range")
    }

    /// The symmetry `X ⊗ Y → Y ⊗ X`.
    pub fn swap(x: &FinObject, y: &FinObject) -> Self {
        let (nx, ny) = (x.dim, y.dim);
        Self::from_map(x.tensor(y), y.tensor(x), |i| {
            let (a, b) = (i / ny, i % ny);
            b * nx + a
        })
        .expect("swap is in range")
    }

    /// A distribution `I → X` from its probability vector.
    pub fn distribution(x: &FinObject, probs: Vec<f64>) -> Result<Self> {
        Self::new(FinObject::unit(), x.clone(), probs)
    }

    pub fn uniform(x: &FinObject) -> Self {
        let p = 1.0 / x.dim as f64;
        Self {
            domain: FinObject::unit(),
            codomain: x.clone(),
            entries: vec![p; x.dim],
        }
    }

    /// Point mass `I → X` at a tuple.
    pub fn point(x: &FinObject, tuple: &[usize]) -> Result<Self> {
        let idx = x.codec().try_encode(tuple).ok_or_else(|| Error::Tuple {
            tuple: tuple.to_vec(),
            object: x.clone(),
        })?;
        Self::from_map(FinObject::unit(), x.clone(), |_| idx)
    }

    /// `st(p)`: the distribution `(1 − p, p)` on `2`, index 1 meaning true.
    pub fn state(p: f64) -> Result<Self> {
        Self::distribution(&FinObject::bits(1), vec![1.0 - p, p])
    }

    pub fn not() -> Self {
        Self::from_map(FinObject::bits(1), FinObject::bits(1), |x| 1 - x).expect("not is in range")
    }

    pub fn and() -> Self {
        Self::from_map(FinObject::bits(2), FinObject::bits(1), |x| usize::from(x == 3)).expect("and is in range")
    }

    pub fn domain(&self) -> &FinObject {
        &self.domain
    }

    pub fn codomain(&self) -> &FinObject {
        &self.codomain
    }

    pub fn rows_len(&self) -> usize {
        self.codomain.dim
    }

    pub fn cols_len(&self) -> usize {
        self.domain.dim
    }

    /// `f(y|x)` on flat indices.
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.entries[y * self.domain.dim + x]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.domain.dim)
    }

    pub fn column(&self, x: usize) -> Vec<f64> {
        (0..self.codomain.dim).map(|y| self.get(y, x)).collect()
    }

    /// Checks entries lie in `[0, 1]` and columns sum to 1, both within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let cols = self.domain.dim;
        let mut sums = vec![0.0; cols];
        for (i, &v) in self.entries.iter().enumerate() {
            if !(-tol..=1.0 + tol).contains(&v) {
                return Err(Error::EntryRange {
                    row: i / cols,
                    col: i % cols,
                    value: v,
                });
            }
            sums[i % cols] += v;
        }
        for (col, &sum) in sums.iter().enumerate() {
            if (sum - 1.0).abs() > tol {
                return Err(Error::ColumnSum { col, sum });
            }
        }
        Ok(())
    }

    pub fn is_parallel(&self, other: &StochMatrix) -> bool {
        self.domain == other.domain && self.codomain == other.codomain
    }

    /// Largest absolute entry difference between parallel matrices.
    pub fn max_deviation(&self, other: &StochMatrix) -> Result<f64> {
        if !self.is_parallel(other) {
            return Err(Error::NotParallel {
                left: self.signature(),
                right: other.signature(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Parallel and entrywise equal within `tol`.
    pub fn approx_eq(&self, other: &StochMatrix, tol: f64) -> bool {
        self.max_deviation(other).is_ok_and(|d| d <= tol)
    }

    /// Whether every column is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// `domain → codomain` as text.
    pub fn signature(&self) -> String {
        format!("{} → {}", self.domain, self.codomain)
    }

    /// Same entries viewed with different factorisations of equal size.
    pub fn reshape(&self, domain: FinObject, codomain: FinObject) -> Result<Self> {
        if domain.dim != self.domain.dim || codomain.dim != self.codomain.dim {
            return Err(Error::ObjectMismatch(format!(
                "cannot reshape {} into {domain} → {codomain}",
                self.signature()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            entries: self.entries.clone(),
        })
    }

    /// Reorders output factors: new factor `i` is old factor `perm[i]`.
    pub fn reorder_codomain(&self, perm: &[usize]) -> Result<Self> {
        let (new_obj, remap) = permutation_map(&self.codomain, perm)?;
        let cols = self.domain.dim;
        let mut entries = vec![0.0; self.entries.len()];
        for (old_y, new_y) in remap.into_iter().enumerate() {
            entries[new_y * cols..(new_y + 1) * cols]
                .copy_from_slice(&self.entries[old_y * cols..(old_y + 1) * cols]);
        }
        Ok(Self {
            domain: self.domain.clone(),
            codomain: new_obj,
            entries,
        })
    }

    /// Reorders input factors: new factor `i` is old factor `perm[i]`.
    pub fn reorder_domain(&self, perm: &[usize]) -> Result<Self> {
        let (new_obj, remap) = permutation_map(&self.domain, perm)?;
        let cols = self.domain.dim;
        let mut entries = vec![0.0; self.entries.len()];
        for y in 0..self.codomain.dim {
            for (old_x, &new_x) in remap.iter().enumerate() {
                entries[y * cols + new_x] = self.entries[y * cols + old_x];
            }
        }
        Ok(Self {
            domain: new_obj,
            codomain: self.codomain.clone(),
            entries,
        })
    }

    /// Precomposes with the deletion of extra trailing input factors, i.e.
    /// `self ⊗ del_extra`.
    pub fn extend_domain(&self, extra: &FinObject) -> Self {
        tensor(self, &StochMatrix::delete(extra))
    }
}

/// For a permutation of the factors of `obj`, the permuted object and the
/// flat-index map old → new.
fn permutation_map(obj: &FinObject, perm: &[usize]) -> Result<(FinObject, Vec<usize>)> {
    let k = obj.len();
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::ObjectMismatch(format!(
            "permutation of length {} for {obj}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::ObjectMismatch(format!("{perm:?} is not a permutation of {k} factors")));
        }
    }
    let new_obj = obj.select(perm)?;
    let old_codec = obj.codec();
    let new_codec = new_obj.codec();
    let mut old = vec![0; k];
    let mut new = vec![0; k];
    let remap = (0..obj.dim)
        .map(|i| {
            old_codec.decode_into(i, &mut old);
            for (slot, &p) in new.iter_mut().zip(perm) {
                *slot = old[p];
            }
            new_codec.encode(&new)
        })
        .collect();
    Ok((new_obj, remap))
}

/// `g ∘ f`, i.e. `Σ_y g(z|y) f(y|x)`.
pub fn compose(g: &StochMatrix, f: &StochMatrix) -> Result<StochMatrix> {
    if f.codomain != g.domain {
        return Err(Error::Compose {
            codomain: f.codomain.clone(),
            domain: g.domain.clone(),
        });
    }
    let (rows, mid, cols) = (g.codomain.dim, g.domain.dim, f.domain.dim);
    let mut entries = vec![0.0; rows * cols];
    for z in 0..rows {
        let out = &mut entries[z * cols..(z + 1) * cols];
        for y in 0..mid {
            let gzy = g.entries[z * mid + y];
            if gzy == 0.0 {
                continue;
            }
            let frow = &f.entries[y * cols..(y + 1) * cols];
            for (o, &fyx) in out.iter_mut().zip(frow) {
                *o += gzy * fyx;
            }
        }
    }
    Ok(StochMatrix {
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        entries,
    })
}

/// `f ⊗ h`, the Kronecker product: `(f ⊗ h)(y,w|x,z) = f(y|x) h(w|z)`.
pub fn tensor(f: &StochMatrix, h: &StochMatrix) -> StochMatrix {
    let (fr, fc) = (f.codomain.dim, f.domain.dim);
    let (hr, hc) = (h.codomain.dim, h.domain.dim);
    let cols = fc * hc;
    let mut entries = vec![0.0; fr * hr * cols];
    for y in 0..fr {
        for x in 0..fc {
            let a = f.entries[y * fc + x];
            if a == 0.0 {
                continue;
            }
            for w in 0..hr {
                let row = (y * hr + w) * cols + x * hc;
                let hrow = &h.entries[w * hc..(w + 1) * hc];
                for (o, &b) in entries[row..row + hc].iter_mut().zip(hrow) {
                    *o = a * b;
                }
            }
        }
    }
    StochMatrix {
        domain: f.domain.tensor(&h.domain),
        codomain: f.codomain.tensor(&h.codomain),
        entries,
    }
}

/// Deletes every output factor not in `keep`; kept factors stay in their
/// original order.
pub fn marginalize(f: &StochMatrix, keep: &[usize]) -> Result<StochMatrix> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let codomain = f.codomain.select(&keep)?;
    if keep.len() == f.codomain.len() {
        return Ok(f.clone());
    }
    let old = f.codomain.codec();
    let new = codomain.codec();
    let cols = f.domain.dim;
    let mut entries = vec![0.0; codomain.dim * cols];
    let mut tuple = vec![0; f.codomain.len()];
    let mut kept = vec![0; keep.len()];
    for y in 0..f.codomain.dim {
        old.decode_into(y, &mut tuple);
        for (slot, &p) in kept.iter_mut().zip(&keep) {
            *slot = tuple[p];
        }
        let ny = new.encode(&kept);
        let src = &f.entries[y * cols..(y + 1) * cols];
        for (o, &v) in entries[ny * cols..(ny + 1) * cols].iter_mut().zip(src) {
            *o += v;
        }
    }
    Ok(StochMatrix {
        domain: f.domain.clone(),
        codomain,
        entries,
    })
}

/// Keeps the first `n` output factors.
pub fn marginalize_prefix(f: &StochMatrix, n: usize) -> Result<StochMatrix> {
    let keep: Vec<usize> = (0..n).collect();
    marginalize(f, &keep)
}

/// Whether `f ⊗ del_X` and `g ⊗ del_X` agree within `tol`.
pub fn cancellative_check(f: &StochMatrix, g: &StochMatrix, x: &FinObject, tol: f64) -> Result<bool> {
    if !f.is_parallel(g) {
        return Err(Error::NotParallel {
            left: f.signature(),
            right: g.signature(),
        });
    }
    let del = StochMatrix::delete(x);
    Ok(tensor(f, &del).approx_eq(&tensor(g, &del), tol))
}
