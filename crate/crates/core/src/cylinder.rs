//! Clopen subsets of a countable product of finite sets.
//!
//! The space is described by an [`OmegaSpec`]: the coordinate sizes of an
//! infinite product, given by a finite prefix followed by a repeating cycle.
//! A [`CylinderSet`] is a set of the form `U × ∏_{k ≥ n} X_k` with `U` a set
//! of depth-`n` prefixes, stored as a dense membership table indexed by the
//! same mixed-radix codec as [`crate::finstoch`].

use std::fmt;

use crate::error::{Error, Result};
use crate::finstoch::{FinObject, StochMatrix};

/// Coordinate sizes of an infinite product: `prefix` first, then `cycle`
/// repeated forever. The common case is a single repeated size, and
/// `OmegaSpec::cantor()` is `2^ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaSpec {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl OmegaSpec {
    /// `prefix` followed by `tail_size` repeated.
    pub fn new(prefix: Vec<usize>, tail_size: usize) -> Result<Self> {
        Self::periodic(prefix, vec![tail_size])
    }

    /// `prefix` followed by `cycle` repeated. Every cycle entry must be at
    /// least 2, otherwise the tail would collapse to a finite object.
    pub fn periodic(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::OmegaSpec("empty tail cycle".into()));
        }
        if let Some(&s) = cycle.iter().find(|&&s| s < 2) {
            return Err(Error::OmegaSpec(format!("tail size {s} is below 2")));
        }
        if prefix.contains(&0) {
            return Err(Error::OmegaSpec("prefix contains a size-0 coordinate".into()));
        }
        Ok(Self { prefix, cycle }.normalized())
    }

    pub fn cantor() -> Self {
        Self {
            prefix: Vec::new(),
            cycle: vec![2],
        }
    }

    pub fn prefix_sizes(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn is_cantor(&self) -> bool {
        self.prefix.is_empty() && self.cycle == [2]
    }

    pub fn size_at(&self, k: usize) -> usize {
        match self.prefix.get(k) {
            Some(&s) => s,
            None => self.cycle[(k - self.prefix.len()) % self.cycle.len()],
        }
    }

    pub fn sizes(&self, n: usize) -> Vec<usize> {
        (0..n).map(|k| self.size_at(k)).collect()
    }

    /// The finite marginal on the first `n` coordinates.
    pub fn prefix_object(&self, n: usize) -> FinObject {
        FinObject::new(self.sizes(n)).expect("sizes are positive")
    }

    /// Product of the sizes of coordinates `from..to`.
    pub fn block_dim(&self, from: usize, to: usize) -> usize {
        (from..to).map(|k| self.size_at(k)).product()
    }

    /// Coordinates of `left` on even slots and `right` on odd slots.
    pub fn interleave(left: &OmegaSpec, right: &OmegaSpec) -> OmegaSpec {
        let m = left.prefix.len().max(right.prefix.len());
        let period = lcm(left.cycle.len(), right.cycle.len());
        let prefix = (0..m).flat_map(|i| [left.size_at(i), right.size_at(i)]).collect();
        let cycle = (m..m + period)
            .flat_map(|i| [left.size_at(i), right.size_at(i)])
            .collect();
        OmegaSpec { prefix, cycle }.normalized()
    }

    fn normalized(mut self) -> Self {
        let n = self.cycle.len();
        if let Some(p) = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.cycle[i] == self.cycle[i - p])) {
            self.cycle.truncate(p);
        }
        while self.prefix.last().is_some_and(|s| Some(s) == self.cycle.last()) {
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
        self
    }
}

impl fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycle.len() == 1 && self.prefix.is_empty() {
            return write!(f, "{}^ℕ", self.cycle[0]);
        }
        write!(f, "{:?}{:?}^ℕ", self.prefix, self.cycle)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A clopen set `U × ∏_{k ≥ depth} X_k`, with `U` given by one bit per
/// depth-`depth` prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    space: OmegaSpec,
    depth: usize,
    members: Vec<bool>,
}

impl CylinderSet {
    pub fn new(space: OmegaSpec, depth: usize, members: Vec<bool>) -> Result<Self> {
        let expected = space.block_dim(0, depth);
        if members.len() != expected {
            return Err(Error::CylinderLiteral(format!(
                "depth {depth} needs {expected} membership bits, got {}",
                members.len()
            )));
        }
        Ok(Self { space, depth, members })
    }

    /// The cylinder over an explicit list of depth-`depth` prefixes.
    pub fn from_prefixes(space: OmegaSpec, depth: usize, prefixes: &[Vec<usize>]) -> Result<Self> {
        let codec = space.prefix_object(depth).codec();
        let mut members = vec![false; codec.dim()];
        for p in prefixes {
            let i = codec.try_encode(p).ok_or_else(|| {
                Error::CylinderLiteral(format!("{p:?} is not a depth-{depth} prefix of {space}"))
            })?;
            members[i] = true;
        }
        Ok(Self { space, depth, members })
    }

    pub fn empty(space: OmegaSpec) -> Self {
        Self {
            space,
            depth: 0,
            members: vec![false],
        }
    }

    pub fn full(space: OmegaSpec) -> Self {
        Self {
            space,
            depth: 0,
            members: vec![true],
        }
    }

    pub fn space(&self) -> &OmegaSpec {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    /// Number of member prefixes at the current depth.
    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    /// The member prefixes, in index order.
    pub fn prefixes(&self) -> Vec<Vec<usize>> {
        let codec = self.space.prefix_object(self.depth).codec();
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| codec.decode(i))
            .collect()
    }

    /// Whether points starting with `point` lie in the set. `point` must be
    /// at least `depth` long; extra coordinates are ignored.
    pub fn contains(&self, point: &[usize]) -> Option<bool> {
        let head = point.get(..self.depth)?;
        let i = self.space.prefix_object(self.depth).codec().try_encode(head)?;
        Some(self.members[i])
    }

    /// Same set, membership table expanded to `depth`.
    pub fn lift(&self, depth: usize) -> CylinderSet {
        assert!(depth >= self.depth, "cannot lift depth {} to {depth}", self.depth);
        let block = self.space.block_dim(self.depth, depth);
        let members = self.members.iter().flat_map(|&b| std::iter::repeat_n(b, block)).collect();
        CylinderSet {
            space: self.space.clone(),
            depth,
            members,
        }
    }

    /// The minimal-depth representation of the same set.
    pub fn reduce(&self) -> CylinderSet {
        let mut depth = self.depth;
        let mut members = self.members.clone();
        while depth > 0 {
            let s = self.space.size_at(depth - 1);
            let uniform = members.chunks(s).all(|c| c.iter().all(|&b| b == c[0]));
            if !uniform {
                break;
            }
            members = members.chunks(s).map(|c| c[0]).collect();
            depth -= 1;
        }
        CylinderSet {
            space: self.space.clone(),
            depth,
            members,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.reduce().depth == self.depth
    }

    /// Whether both denote the same subset of the space.
    pub fn same_set(&self, other: &CylinderSet) -> bool {
        self.space == other.space && self.reduce() == other.reduce()
    }

    fn zip_with(&self, other: &CylinderSet, op: impl Fn(bool, bool) -> bool) -> Result<CylinderSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.lift(depth), other.lift(depth));
        let members = a.members.iter().zip(&b.members).map(|(&x, &y)| op(x, y)).collect();
        Ok(CylinderSet {
            space: self.space.clone(),
            depth,
            members,
        }
        .reduce())
    }

    pub fn union(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> CylinderSet {
        CylinderSet {
            space: self.space.clone(),
            depth: self.depth,
            members: self.members.iter().map(|&b| !b).collect(),
        }
        .reduce()
    }

    pub fn is_disjoint(&self, other: &CylinderSet) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    /// Mass of the set under a distribution `I → X_0 ⊗ … ⊗ X_{k-1}` with
    /// `k ≥ depth`.
    pub fn measure_under(&self, dist: &StochMatrix) -> Result<f64> {
        let k = dist.codomain().len();
        if !dist.domain().is_unit() || k < self.depth || dist.codomain() != &self.space.prefix_object(k) {
            return Err(Error::MeasureDepth {
                depth: self.depth,
                found: dist.codomain().clone(),
            });
        }
        let block = self.space.block_dim(self.depth, k);
        Ok(self
            .members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i * block..(i + 1) * block).map(|y| dist.get(y, 0)).sum::<f64>())
            .sum())
    }

    /// Parses `cyl(n; p1, p2, …)`, each prefix a string of `n` digits, or
    /// `*` for every depth-`n` prefix. `cyl(n;)` is the empty set.
    pub fn parse(text: &str, space: &OmegaSpec) -> Result<CylinderSet> {
        let bad = |msg: &str| Error::CylinderLiteral(format!("{msg} in {text:?}"));
        let body = text
            .trim()
            .strip_prefix("cyl")
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('('))
            .and_then(|s| s.trim_end().strip_suffix(')'))
            .ok_or_else(|| bad("expected cyl(n; ...)"))?;
        let (depth, list) = body.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let depth: usize = depth.trim().parse().map_err(|_| bad("depth is not a natural number"))?;
        let list = list.trim();
        if list == "*" {
            return Ok(CylinderSet {
                space: space.clone(),
                depth,
                members: vec![true; space.block_dim(0, depth)],
            });
        }
        let mut prefixes = Vec::new();
        if !list.is_empty() {
            for item in list.split(',') {
                let item = item.trim();
                let digits: Option<Vec<usize>> =
                    item.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
                let digits = digits.ok_or_else(|| bad(&format!("prefix {item:?} is not a digit string")))?;
                if digits.len() != depth {
                    return Err(bad(&format!("prefix {item:?} does not have length {depth}")));
                }
                prefixes.push(digits);
            }
        }
        CylinderSet::from_prefixes(space.clone(), depth, &prefixes)
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return write!(f, "cyl({}; *)", self.depth);
        }
        let items: Vec<String> = self
            .prefixes()
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect())
            .collect();
        write!(f, "cyl({}; {})", self.depth, items.join(", "))
    }
}
