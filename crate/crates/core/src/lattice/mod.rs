//! Finite ortholattices and orthomodular lattices.
//!
//! A [`FiniteOl`] is a finite bounded lattice together with an involution on
//! its elements. Elements are identified by index; labels are only for
//! display. The order is stored as bit rows and the meet and join tables are
//! derived once, at construction.
//!
//! Construction checks the structural requirements (partial order, bounds,
//! existence of all meets and joins, involutive `ortho`). Whether `ortho` is
//! actually an orthocomplementation is a separate question answered by
//! [`FiniteOl::validate_ortholattice`], and orthomodularity by
//! [`FiniteOl::check_orthomodular`].

mod builders;
mod greechie;
mod ops;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use greechie::GreechieDiagram;
pub use ops::{FoulisHolland, OlAxiom, OlViolation, OmlFlag};

/// A set of element indices.
pub type ElementSet = FixedBitSet;

/// Default size guard for table-scanning operations.
pub const DEFAULT_MAX_ELEMENTS: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty element set")]
    Empty,
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("ortho table has {got} entries for {expected} elements")]
    OrthoLength { expected: usize, got: usize },
    #[error("ortho is not an involution at element {0}")]
    NonInvolutive(usize),
    #[error("order is not antisymmetric: {0} and {1} are mutually below each other")]
    NotAntisymmetric(usize, usize),
    #[error("no least element")]
    MissingBottom,
    #[error("no greatest element")]
    MissingTop,
    #[error("elements {a} and {b} have no {op}")]
    NotALattice { a: usize, b: usize, op: &'static str },
    #[error("{size} elements exceed the size limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("the lattice is not orthomodular (witness {0}, {1})")]
    NotOrthomodular(usize, usize),
    #[error("bad Greechie diagram: {0}")]
    Greechie(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOl {
    labels: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    meet: Vec<usize>,
    join: Vec<usize>,
    ortho: Vec<usize>,
    zero: usize,
    one: usize,
}

fn empty_set(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

impl FiniteOl {
    /// Builds from any generating relation (covers or the full order); the
    /// relation is closed reflexively and transitively.
    pub fn from_relation(
        labels: Vec<String>,
        pairs: &[(usize, usize)],
        ortho: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        Self::from_relation_limited(labels, pairs, ortho, DEFAULT_MAX_ELEMENTS)
    }

    pub fn from_relation_limited(
        labels: Vec<String>,
        pairs: &[(usize, usize)],
        ortho: Vec<usize>,
        limit: usize,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        Self::check_size(n, limit)?;
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = empty_set(n);
                s.insert(i);
                s
            })
            .collect();
        for &(a, b) in pairs {
            for idx in [a, b] {
                if idx >= n {
                    return Err(LatticeError::IndexOutOfRange { index: idx, len: n });
                }
            }
            up[a].insert(b);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_up_sets(labels, up, ortho)
    }

    /// Builds from an order predicate that is already reflexive and transitive.
    pub fn from_order_fn(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        ortho: Vec<usize>,
        limit: usize,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        Self::check_size(n, limit)?;
        let up = (0..n)
            .map(|i| {
                let mut s = empty_set(n);
                s.extend((0..n).filter(|&j| leq(i, j)));
                s
            })
            .collect();
        Self::from_up_sets(labels, up, ortho)
    }

    fn check_size(n: usize, limit: usize) -> Result<(), LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > limit {
            return Err(LatticeError::TooLarge { size: n, limit });
        }
        Ok(())
    }

    fn from_up_sets(
        labels: Vec<String>,
        up: Vec<FixedBitSet>,
        ortho: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| empty_set(n)).collect();
        for (i, row) in up.iter().enumerate() {
            if !row.contains(i) {
                return Err(LatticeError::NotAntisymmetric(i, i));
            }
            for j in row.ones() {
                if j != i && up[j].contains(i) {
                    return Err(LatticeError::NotAntisymmetric(i, j));
                }
                down[j].insert(i);
            }
        }
        let zero = (0..n)
            .find(|&i| up[i].count_ones(..) == n)
            .ok_or(LatticeError::MissingBottom)?;
        let one = (0..n)
            .find(|&i| down[i].count_ones(..) == n)
            .ok_or(LatticeError::MissingTop)?;
        let meet = Self::extremal_table(&down, "meet")?;
        let join = Self::extremal_table(&up, "join")?;

        if ortho.len() != n {
            return Err(LatticeError::OrthoLength {
                expected: n,
                got: ortho.len(),
            });
        }
        for (x, &y) in ortho.iter().enumerate() {
            if y >= n {
                return Err(LatticeError::IndexOutOfRange { index: y, len: n });
            }
            if ortho[y] != x {
                return Err(LatticeError::NonInvolutive(x));
            }
        }
        Ok(FiniteOl {
            labels,
            up,
            down,
            meet,
            join,
            ortho,
            zero,
            one,
        })
    }

    /// For `cones = down` this is the meet table: the common lower bounds of
    /// `a, b` must have a greatest member, i.e. one whose cone contains them all.
    fn extremal_table(cones: &[FixedBitSet], op: &'static str) -> Result<Vec<usize>, LatticeError> {
        let n = cones.len();
        let sizes: Vec<usize> = cones.iter().map(|c| c.count_ones(..)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let mut common = cones[a].clone();
                common.intersect_with(&cones[b]);
                let best = common
                    .ones()
                    .max_by_key(|&g| sizes[g])
                    .ok_or(LatticeError::NotALattice { a, b, op })?;
                if !common.is_subset(&cones[best]) {
                    return Err(LatticeError::NotALattice { a, b, op });
                }
                table[a * n + b] = best;
                table[b * n + a] = best;
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn ortho(&self, x: usize) -> usize {
        self.ortho[x]
    }

    pub fn ortho_table(&self) -> &[usize] {
        &self.ortho
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.zero, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.one, |acc, x| self.meet(acc, x))
    }

    /// `{y : x <= y}`
    pub fn up_set(&self, x: usize) -> &ElementSet {
        &self.up[x]
    }

    /// `{y : y <= x}`
    pub fn down_set(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    pub fn full_set(&self) -> ElementSet {
        let mut s = empty_set(self.len());
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> ElementSet {
        empty_set(self.len())
    }

    pub fn set_of(&self, xs: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut s = self.empty_set();
        s.extend(xs);
        s
    }

    /// Atoms: the covers of zero.
    pub fn atoms(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.zero && self.down[x].count_ones(..) == 2)
            .collect()
    }

    /// Strict pairs `x < y` with nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up[x].ones() {
                if y == x {
                    continue;
                }
                let between = self.up[x].ones().any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All pairs `x <= y`, reflexive ones included.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        self.elements()
            .flat_map(|x| self.up[x].ones().map(move |y| (x, y)))
            .collect()
    }

    /// The structure induced on a subset with a caller-supplied complementation;
    /// returns the sub-structure and the map from new to old indices.
    pub fn restrict(
        &self,
        subset: &ElementSet,
        ortho: impl Fn(usize) -> usize,
    ) -> Result<(FiniteOl, Vec<usize>), LatticeError> {
        let old: Vec<usize> = subset.ones().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (k, &x) in old.iter().enumerate() {
            new_of[x] = k;
        }
        let mut new_ortho = Vec::with_capacity(old.len());
        for &x in &old {
            let y = ortho(x);
            if y >= self.len() || new_of[y] == usize::MAX {
                return Err(LatticeError::IndexOutOfRange {
                    index: y,
                    len: old.len(),
                });
            }
            new_ortho.push(new_of[y]);
        }
        let labels = old.iter().map(|&x| self.labels[x].clone()).collect();
        let sub = FiniteOl::from_order_fn(
            labels,
            |i, j| self.leq(old[i], old[j]),
            new_ortho,
            usize::MAX,
        )?;
        Ok((sub, old))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Vec<(usize, usize)> {
        (0..n - 1).map(|i| (i, i + 1)).collect()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn covers_are_closed_transitively() {
        let l = FiniteOl::from_relation(labels(4), &chain(4), vec![3, 2, 1, 0]).unwrap();
        assert!(l.leq(0, 3));
        assert_eq!(l.meet(1, 2), 1);
        assert_eq!(l.join(1, 2), 2);
        assert_eq!(l.covers(), chain(4));
    }

    #[test]
    fn non_lattice_is_rejected_with_pair() {
        // 0 < a, b < c, d < 1: a and b have two minimal upper bounds
        let pairs = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
        let err = FiniteOl::from_relation(labels(6), &pairs, vec![5, 4, 3, 2, 1, 0]).unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice { .. }));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            FiniteOl::from_relation(vec![], &[], vec![]).unwrap_err(),
            LatticeError::Empty
        );
        let err = FiniteOl::from_relation(labels(2), &[(0, 1)], vec![1, 1]).unwrap_err();
        assert_eq!(err, LatticeError::NonInvolutive(0));
        let err = FiniteOl::from_relation(labels(2), &[(0, 1), (1, 0)], vec![1, 0]).unwrap_err();
        assert!(matches!(err, LatticeError::NotAntisymmetric(..)));
        let err = FiniteOl::from_relation(labels(3), &[(0, 1), (0, 2)], vec![0, 2, 1]).unwrap_err();
        assert_eq!(err, LatticeError::MissingTop);
        let err = FiniteOl::from_relation(labels(2), &[(0, 1)], vec![1]).unwrap_err();
        assert!(matches!(err, LatticeError::OrthoLength { .. }));
    }

    #[test]
    fn size_guard_refuses_large_inputs() {
        let err =
            FiniteOl::from_relation_limited(labels(5), &chain(5), vec![4, 3, 2, 1, 0], 4).unwrap_err();
        assert_eq!(err, LatticeError::TooLarge { size: 5, limit: 4 });
    }
}
