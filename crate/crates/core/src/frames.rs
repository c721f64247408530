//! Orthoframes `(X, ⊥, R_i, D_ij)`, their lattices of biorthogonally closed
//! sets, and the canonical frame of a finite monadic ortholattice.

use std::collections::{BTreeMap, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rand::Rng;
use thiserror::Error;

use crate::cylindric::{check_cylindric, CylindricError, CylindricReport, CylindricStructure, Mode};
use crate::lattice::{FiniteOl, LatticeError, DEFAULT_MAX_ELEMENTS};
use crate::quantifier::{check_quantifier, QuantifierError, UnaryMap};
use crate::report::{self, AxiomCheck};

pub type PointSet = FixedBitSet;

/// Subsets are enumerated exhaustively up to this many points.
pub const EXHAUSTIVE_POINTS: usize = 12;
/// Number of random subsets tested on larger frames.
pub const SAMPLED_SUBSETS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame has no points")]
    Empty,
    #[error("point {index} out of range for {len} points")]
    OutOfRange { index: usize, len: usize },
    #[error("orthogonality is reflexive at point {0}")]
    Reflexive(usize),
    #[error("orthogonality is not symmetric: {0} ⊥ {1} but not {1} ⊥ {0}")]
    Asymmetric(usize, usize),
    #[error("relation {0} is not defined")]
    NoRelation(usize),
    #[error("relation {index} fails the monadic frame conditions ({axiom})")]
    NotMonadic { index: usize, axiom: String },
    #[error("set is not biorthogonally closed")]
    NotClosed,
    #[error("quantifier is invalid: {0}")]
    Quantifier(#[from] QuantifierError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cylindric(#[from] CylindricError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orthoframe {
    labels: Vec<String>,
    perp: Vec<PointSet>,
    /// `relations[i][x]` is `R_i[{x}]`.
    relations: Vec<Vec<PointSet>>,
    diagonals: BTreeMap<(usize, usize), PointSet>,
}

fn singleton(n: usize, x: usize) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.insert(x);
    s
}

fn full(n: usize) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.insert_range(..);
    s
}

impl Orthoframe {
    /// `perp` lists orthogonal pairs; it must already be symmetric and irreflexive.
    pub fn new(labels: Vec<String>, perp: &[(usize, usize)]) -> Result<Self, FrameError> {
        let n = labels.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let mut rows = vec![PointSet::with_capacity(n); n];
        for &(a, b) in perp {
            for index in [a, b] {
                if index >= n {
                    return Err(FrameError::OutOfRange { index, len: n });
                }
            }
            rows[a].insert(b);
        }
        for x in 0..n {
            if rows[x].contains(x) {
                return Err(FrameError::Reflexive(x));
            }
            if let Some(y) = rows[x].ones().find(|&y| !rows[y].contains(x)) {
                return Err(FrameError::Asymmetric(x, y));
            }
        }
        Ok(Orthoframe {
            labels,
            perp: rows,
            relations: Vec::new(),
            diagonals: BTreeMap::new(),
        })
    }

    /// `(X, ≠)`: every subset is closed and the lattice is the powerset.
    pub fn classical(n: usize) -> Result<Self, FrameError> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        Self::new((0..n).map(|x| x.to_string()).collect(), &pairs)
    }

    /// Appends a relation given by pairs `x R y`; returns its index.
    pub fn add_relation(&mut self, pairs: &[(usize, usize)]) -> Result<usize, FrameError> {
        let n = self.len();
        let mut rows = vec![PointSet::with_capacity(n); n];
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= n {
                    return Err(FrameError::OutOfRange { index, len: n });
                }
            }
            rows[a].insert(b);
        }
        self.relations.push(rows);
        Ok(self.relations.len() - 1)
    }

    pub fn with_relation(mut self, pairs: &[(usize, usize)]) -> Result<Self, FrameError> {
        self.add_relation(pairs)?;
        Ok(self)
    }

    pub fn set_diagonal(&mut self, i: usize, j: usize, points: &[usize]) -> Result<(), FrameError> {
        let set = self.set_of(points)?;
        self.diagonals.insert((i, j), set);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn perp_pairs(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.perp)
    }

    pub fn relation_pairs(&self, i: usize) -> Option<Vec<(usize, usize)>> {
        self.relations.get(i).map(|r| pairs_of(r))
    }

    pub fn diagonals(&self) -> &BTreeMap<(usize, usize), PointSet> {
        &self.diagonals
    }

    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.perp[x].contains(y)
    }

    pub fn related(&self, i: usize, x: usize, y: usize) -> bool {
        self.relations[i][x].contains(y)
    }

    pub fn set_of(&self, points: &[usize]) -> Result<PointSet, FrameError> {
        let n = self.len();
        let mut s = PointSet::with_capacity(n);
        for &index in points {
            if index >= n {
                return Err(FrameError::OutOfRange { index, len: n });
            }
            s.insert(index);
        }
        Ok(s)
    }

    pub fn full_set(&self) -> PointSet {
        full(self.len())
    }

    /// `A⊥ = {x : a ⊥ x for all a in A}`.
    pub fn perp_of(&self, a: &PointSet) -> PointSet {
        a.ones().fold(self.full_set(), |mut acc, x| {
            acc.intersect_with(&self.perp[x]);
            acc
        })
    }

    pub fn biortho(&self, a: &PointSet) -> PointSet {
        self.perp_of(&self.perp_of(a))
    }

    pub fn is_closed(&self, a: &PointSet) -> bool {
        self.biortho(a) == *a
    }

    /// `R_i[A] = {y : x R_i y for some x in A}`.
    pub fn image(&self, i: usize, a: &PointSet) -> PointSet {
        let rel = &self.relations[i];
        a.ones().fold(PointSet::with_capacity(self.len()), |mut acc, x| {
            acc.union_with(&rel[x]);
            acc
        })
    }

    fn relation(&self, i: usize) -> Result<&[PointSet], FrameError> {
        self.relations.get(i).map(Vec::as_slice).ok_or(FrameError::NoRelation(i))
    }

    fn describe(&self, s: &PointSet) -> String {
        let names: Vec<&str> = s.ones().map(|x| self.labels[x].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn pairs_of(rows: &[PointSet]) -> Vec<(usize, usize)> {
    rows.iter()
        .enumerate()
        .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
        .collect()
}

/// The ortholattice of closed sets together with the sets themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSetLattice {
    pub lattice: FiniteOl,
    pub sets: Vec<PointSet>,
    index: HashMap<PointSet, usize>,
}

impl ClosedSetLattice {
    pub fn index_of(&self, set: &PointSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn set(&self, element: usize) -> &PointSet {
        &self.sets[element]
    }
}

/// Enumerates closed sets as intersections of point orthogonals `{x}⊥`.
pub fn closed_set_lattice(frame: &Orthoframe) -> Result<ClosedSetLattice, FrameError> {
    closed_set_lattice_limited(frame, DEFAULT_MAX_ELEMENTS)
}

pub fn closed_set_lattice_limited(frame: &Orthoframe, limit: usize) -> Result<ClosedSetLattice, FrameError> {
    let generators: Vec<PointSet> = frame.perp.clone();
    let top = frame.full_set();
    let mut seen: HashSet<PointSet> = HashSet::from([top.clone()]);
    let mut queue = vec![top];
    while let Some(s) = queue.pop() {
        for g in &generators {
            let mut t = s.clone();
            t.intersect_with(g);
            if seen.insert(t.clone()) {
                if seen.len() > limit {
                    return Err(LatticeError::TooLarge {
                        size: seen.len(),
                        limit,
                    }
                    .into());
                }
                queue.push(t);
            }
        }
    }
    let mut sets: Vec<PointSet> = seen.into_iter().collect();
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().collect::<Vec<_>>().cmp(&b.ones().collect::<Vec<_>>()))
    });
    let index: HashMap<PointSet, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let ortho = sets.iter().map(|s| index[&frame.perp_of(s)]).collect();
    let labels = sets.iter().map(|s| frame.describe(s)).collect();
    let lattice = FiniteOl::from_order_fn(labels, |a, b| sets[a].is_subset(&sets[b]), ortho, limit)?;
    Ok(ClosedSetLattice { lattice, sets, index })
}

/// Result of a family of frame conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameReport {
    pub checks: Vec<AxiomCheck>,
}

impl FrameReport {
    pub fn holds(&self) -> bool {
        report::all_hold(&self.checks)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        report::find(&self.checks, name)
    }
}

fn m1_witness(frame: &Orthoframe) -> Option<Vec<usize>> {
    (0..frame.len()).find_map(|x| {
        if frame.perp[x].contains(x) {
            return Some(vec![x]);
        }
        frame.perp[x]
            .ones()
            .find(|&y| !frame.perp[y].contains(x))
            .map(|y| vec![x, y])
    })
}

fn m2_witness(rel: &[PointSet]) -> Option<Vec<usize>> {
    if let Some(x) = (0..rel.len()).find(|&x| !rel[x].contains(x)) {
        return Some(vec![x]);
    }
    (0..rel.len()).find_map(|x| {
        rel[x]
            .ones()
            .find_map(|y| rel[y].ones().find(|&z| !rel[x].contains(z)).map(|z| vec![x, y, z]))
    })
}

/// `x, y, z` with `y` in `R[{x}]⊥`, `y R z`, and `z` outside it.
fn m3_witness(frame: &Orthoframe, i: usize) -> Option<Vec<usize>> {
    let n = frame.len();
    (0..n).find_map(|x| {
        let o = frame.perp_of(&frame.image(i, &singleton(n, x)));
        o.ones().find_map(|y| {
            frame.relations[i][y]
                .ones()
                .find(|&z| !o.contains(z))
                .map(|z| vec![x, y, z])
        })
    })
}

/// M1 (orthogonality), M2 (reflexive and transitive), M3 (`R[{x}]⊥` closed under `R`).
pub fn check_monadic_frame(frame: &Orthoframe, i: usize) -> Result<FrameReport, FrameError> {
    let rel = frame.relation(i)?;
    Ok(FrameReport {
        checks: vec![
            AxiomCheck::new("M1", m1_witness(frame)),
            AxiomCheck::new("M2", m2_witness(rel)),
            AxiomCheck::new("M3", m3_witness(frame, i)),
        ],
    })
}

fn require_monadic(frame: &Orthoframe, i: usize) -> Result<(), FrameError> {
    let report = check_monadic_frame(frame, i)?;
    match report.checks.iter().find(|c| !c.holds) {
        Some(c) => Err(FrameError::NotMonadic {
            index: i,
            axiom: c.name.clone(),
        }),
        None => Ok(()),
    }
}

/// `∃_R A = R[A]⊥⊥` for a closed set `A`.
pub fn exists_r(frame: &Orthoframe, i: usize, a: &PointSet) -> Result<PointSet, FrameError> {
    require_monadic(frame, i)?;
    if !frame.is_closed(a) {
        return Err(FrameError::NotClosed);
    }
    Ok(frame.biortho(&frame.image(i, a)))
}

/// `∃_{R_i}` as a map on the elements of the closed-set lattice.
pub fn exists_r_map(frame: &Orthoframe, i: usize, closed: &ClosedSetLattice) -> Result<UnaryMap, FrameError> {
    require_monadic(frame, i)?;
    let map = closed
        .sets
        .iter()
        .map(|a| {
            let image = frame.biortho(&frame.image(i, a));
            closed.index_of(&image).expect("biorthogonal sets are enumerated")
        })
        .collect();
    Ok(UnaryMap(map))
}

fn subsets_to_test(n: usize, rng: &mut impl Rng) -> Vec<PointSet> {
    if n <= EXHAUSTIVE_POINTS {
        (0u32..1 << n)
            .map(|mask| {
                let mut s = PointSet::with_capacity(n);
                s.extend((0..n).filter(|&x| mask >> x & 1 == 1));
                s
            })
            .collect()
    } else {
        (0..SAMPLED_SUBSETS)
            .map(|_| {
                let mut s = PointSet::with_capacity(n);
                s.extend((0..n).filter(|_| rng.gen_bool(0.5)));
                s
            })
            .collect()
    }
}

/// For every subset `A` (sampled above [`EXHAUSTIVE_POINTS`]): `R[A]⊥` and
/// `R[A]⊥⊥` are closed under `R`, and `R[A⊥⊥] ⊆ R[A]⊥⊥`. Witnesses list the
/// points of the failing `A`.
pub fn check_lemma_r(frame: &Orthoframe, i: usize, rng: &mut impl Rng) -> Result<FrameReport, FrameError> {
    frame.relation(i)?;
    let mut w1 = None;
    let mut w2 = None;
    let mut w3 = None;
    for a in subsets_to_test(frame.len(), rng) {
        let ra = frame.image(i, &a);
        let o = frame.perp_of(&ra);
        let oo = frame.perp_of(&o);
        if w1.is_none() && !frame.image(i, &o).is_subset(&o) {
            w1 = Some(a.ones().collect());
        }
        if w2.is_none() && !frame.image(i, &oo).is_subset(&oo) {
            w2 = Some(a.ones().collect());
        }
        if w3.is_none() && !frame.image(i, &frame.biortho(&a)).is_subset(&oo) {
            w3 = Some(a.ones().collect());
        }
    }
    Ok(FrameReport {
        checks: vec![
            AxiomCheck::new("R-perp-closed", w1),
            AxiomCheck::new("R-biortho-closed", w2),
            AxiomCheck::new("R-inclusion", w3),
        ],
    })
}

/// The frame on `L ∖ {0}` with `x ⊥ y` iff `x ≤ y'` and `x R y` iff `y ≤ ∃x`,
/// and the verified embedding `α(a) = ↓a ∖ {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalFrame {
    pub frame: Orthoframe,
    /// `points[k]` is the lattice element represented by point `k`.
    pub points: Vec<usize>,
    pub closed: ClosedSetLattice,
    /// `alpha[a]` is the index of `α(a)` in `closed`.
    pub alpha: Vec<usize>,
    pub is_embedding: bool,
    pub preserves_exists: bool,
    pub is_isomorphism: bool,
}

fn canonical_orthoframe(l: &FiniteOl) -> Result<(Orthoframe, Vec<usize>), FrameError> {
    let points: Vec<usize> = l.elements().filter(|&x| x != l.zero()).collect();
    let labels = points.iter().map(|&x| l.label(x).to_string()).collect();
    let mut perp = Vec::new();
    for (a, &x) in points.iter().enumerate() {
        for (b, &y) in points.iter().enumerate() {
            if l.leq(x, l.ortho(y)) {
                perp.push((a, b));
            }
        }
    }
    Ok((Orthoframe::new(labels, &perp)?, points))
}

fn down_points(l: &FiniteOl, points: &[usize], a: usize) -> PointSet {
    let mut s = PointSet::with_capacity(points.len());
    s.extend((0..points.len()).filter(|&k| l.leq(points[k], a)));
    s
}

fn quantifier_relation(l: &FiniteOl, points: &[usize], e: &UnaryMap) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (a, &x) in points.iter().enumerate() {
        for (b, &y) in points.iter().enumerate() {
            if l.leq(y, e.apply(x)) {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Verifies that `alpha` is an injective OL-homomorphism; `None` on success.
fn embedding_witness(l: &FiniteOl, closed: &ClosedSetLattice, alpha: &[usize]) -> Option<Vec<usize>> {
    let c = &closed.lattice;
    for x in l.elements() {
        if alpha[l.ortho(x)] != c.ortho(alpha[x]) {
            return Some(vec![x]);
        }
        for y in l.elements() {
            if alpha[l.meet(x, y)] != c.meet(alpha[x], alpha[y])
                || alpha[l.join(x, y)] != c.join(alpha[x], alpha[y])
                || (x != y && alpha[x] == alpha[y])
            {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

pub fn canonical_frame(l: &FiniteOl, e: &UnaryMap) -> Result<CanonicalFrame, FrameError> {
    let report = check_quantifier(l, e);
    if let Some(bad) = ["Q1", "Q2", "Q3", "Q4", "Q5"].iter().find(|q| !report.get(q).holds) {
        return Err(QuantifierError::NotAQuantifier(bad.to_string()).into());
    }
    let (mut frame, points) = canonical_orthoframe(l)?;
    frame.add_relation(&quantifier_relation(l, &points, e))?;
    let closed = closed_set_lattice(&frame)?;
    let alpha: Vec<usize> = l
        .elements()
        .map(|a| {
            closed
                .index_of(&down_points(l, &points, a))
                .expect("principal down-sets are closed")
        })
        .collect();
    let is_embedding = embedding_witness(l, &closed, &alpha).is_none();
    let ex = exists_r_map(&frame, 0, &closed)?;
    let preserves_exists = l.elements().all(|a| alpha[e.apply(a)] == ex.apply(alpha[a]));
    let is_isomorphism = is_embedding && closed.lattice.len() == l.len();
    Ok(CanonicalFrame {
        frame,
        points,
        closed,
        alpha,
        is_embedding,
        preserves_exists,
        is_isomorphism,
    })
}

/// The canonical frame of a cylindric structure: `R_i` from `c_i` and
/// `D_ij = ↓d_ij ∖ {0}`.
pub fn canonical_cylindric_frame(c: &CylindricStructure) -> Result<(Orthoframe, Vec<usize>), FrameError> {
    let l = &c.base;
    let (mut frame, points) = canonical_orthoframe(l)?;
    for cyl in &c.cyl {
        frame.add_relation(&quantifier_relation(l, &points, cyl))?;
    }
    for i in 0..c.dims() {
        for j in 0..c.dims() {
            let d = down_points(l, &points, c.d(i, j));
            frame.diagonals.insert((i, j), d);
        }
    }
    Ok((frame, points))
}

fn diagonal(frame: &Orthoframe, i: usize, j: usize) -> Option<PointSet> {
    match frame.diagonals.get(&(i, j)) {
        Some(d) => Some(d.clone()),
        None if i == j => Some(frame.full_set()),
        None => None,
    }
}

fn compose(a: &[PointSet], b: &[PointSet]) -> Vec<PointSet> {
    a.iter()
        .map(|row| {
            row.ones().fold(PointSet::with_capacity(row.len()), |mut acc, y| {
                acc.union_with(&b[y]);
                acc
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFrameReport {
    /// `W1[i]`, `W2[i,j]`, `W3[i,j]`, `W4[i,j,k]` for every index tuple.
    pub checks: Vec<AxiomCheck>,
    /// Weak cylindric check of the complex algebra, when W1–W4 hold.
    pub complex: Option<CylindricReport>,
    /// Whether `∃_{R_i}` and `∃_{R_j}` commute on every closed set, when W1–W4 hold.
    pub quantifiers_commute: Option<bool>,
}

impl WeakFrameReport {
    pub fn frame_holds(&self) -> bool {
        report::all_hold(&self.checks)
    }

    pub fn holds(&self) -> bool {
        self.frame_holds()
            && self.complex.as_ref().is_some_and(|c| c.weak_valid())
            && self.quantifiers_commute == Some(true)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

/// The complex algebra `(closed sets, ∃_{R_i}, D_ij)` of a frame.
pub fn complex_algebra(frame: &Orthoframe) -> Result<(ClosedSetLattice, CylindricStructure), FrameError> {
    let closed = closed_set_lattice(frame)?;
    let dims = frame.relation_count();
    let cyl = (0..dims)
        .map(|i| exists_r_map(frame, i, &closed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut diag = vec![vec![closed.lattice.one(); dims]; dims];
    for (i, row) in diag.iter_mut().enumerate() {
        for (j, d) in row.iter_mut().enumerate() {
            let set = diagonal(frame, i, j).ok_or(FrameError::NotClosed)?;
            *d = closed.index_of(&set).ok_or(FrameError::NotClosed)?;
        }
    }
    let structure = CylindricStructure::new(closed.lattice.clone(), cyl, diag)?;
    Ok((closed, structure))
}

pub fn check_weak_cylindric_frame(frame: &Orthoframe) -> Result<WeakFrameReport, FrameError> {
    let dims = frame.relation_count();
    let mut checks = Vec::new();
    for i in 0..dims {
        let monadic = check_monadic_frame(frame, i)?;
        let witness = monadic.checks.iter().find(|c| !c.holds).map(|c| {
            let mut w = vec![i];
            w.extend(c.witness.iter().flatten());
            w
        });
        checks.push(AxiomCheck::new(format!("W1[{i}]"), witness));
    }
    for i in 0..dims {
        for j in i + 1..dims {
            let ij = compose(&frame.relations[i], &frame.relations[j]);
            let ji = compose(&frame.relations[j], &frame.relations[i]);
            // a point x whose successor sets differ, with the distinguishing point
            let witness = (0..frame.len()).find_map(|x| {
                ij[x]
                    .symmetric_difference(&ji[x])
                    .next()
                    .map(|y| vec![x, y])
            });
            checks.push(AxiomCheck::new(format!("W2[{i},{j}]"), witness));
        }
    }
    for i in 0..dims {
        for j in 0..dims {
            let ok = match (diagonal(frame, i, j), diagonal(frame, j, i)) {
                (Some(a), Some(b)) => a == b && frame.is_closed(&a) && (i != j || a == frame.full_set()),
                _ => false,
            };
            checks.push(AxiomCheck::new(format!("W3[{i},{j}]"), (!ok).then(|| vec![i, j])));
        }
    }
    for i in 0..dims {
        for j in 0..dims {
            for k in 0..dims {
                if j == i || j == k {
                    continue;
                }
                let ok = match (diagonal(frame, i, j), diagonal(frame, j, k), diagonal(frame, i, k)) {
                    (Some(mut a), Some(b), Some(c)) => {
                        a.intersect_with(&b);
                        frame.image(j, &a) == c
                    }
                    _ => false,
                };
                checks.push(AxiomCheck::new(format!("W4[{i},{j},{k}]"), (!ok).then(|| vec![i, j, k])));
            }
        }
    }
    let mut out = WeakFrameReport {
        checks,
        complex: None,
        quantifiers_commute: None,
    };
    if out.frame_holds() {
        let (closed, structure) = complex_algebra(frame)?;
        let commute = (0..dims).all(|i| {
            (0..dims).all(|j| {
                closed
                    .lattice
                    .elements()
                    .all(|a| structure.c(i, structure.c(j, a)) == structure.c(j, structure.c(i, a)))
            })
        });
        out.complex = Some(check_cylindric(&structure, Mode::Weak));
        out.quantifiers_commute = Some(commute);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylindric::classical_cyl_set_algebra;
    use crate::quantifier::quantifier_from_subalgebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn equivalence(classes: &[&[usize]]) -> Vec<(usize, usize)> {
        classes
            .iter()
            .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b))))
            .collect()
    }

    #[test]
    fn rejects_bad_orthogonality() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert_eq!(Orthoframe::new(labels.clone(), &[(0, 0)]), Err(FrameError::Reflexive(0)));
        assert_eq!(Orthoframe::new(labels, &[(0, 1)]), Err(FrameError::Asymmetric(0, 1)));
    }

    #[test]
    fn classical_closure_is_identity() {
        let f = Orthoframe::classical(4).unwrap();
        for mask in 0u32..16 {
            let s = f.set_of(&(0..4).filter(|&x| mask >> x & 1 == 1).collect::<Vec<_>>()).unwrap();
            assert_eq!(f.biortho(&s), s);
        }
        let c = closed_set_lattice(&f).unwrap();
        assert_eq!(c.lattice.len(), 16);
    }

    #[test]
    fn empty_orthogonality_gives_two_closed_sets() {
        let f = Orthoframe::new(vec!["x".into(), "y".into(), "z".into()], &[]).unwrap();
        assert_eq!(f.biortho(&f.set_of(&[1]).unwrap()), f.full_set());
        assert_eq!(closed_set_lattice(&f).unwrap().lattice.len(), 2);
    }

    #[test]
    fn monadic_conditions_on_classical_frames() {
        let f = Orthoframe::classical(3)
            .unwrap()
            .with_relation(&equivalence(&[&[0, 1], &[2]]))
            .unwrap();
        assert!(check_monadic_frame(&f, 0).unwrap().holds());
        let a = f.set_of(&[0]).unwrap();
        assert_eq!(exists_r(&f, 0, &a).unwrap(), f.set_of(&[0, 1]).unwrap());

        let chain = Orthoframe::classical(2)
            .unwrap()
            .with_relation(&[(0, 0), (1, 1), (0, 1)])
            .unwrap();
        let r = check_monadic_frame(&chain, 0).unwrap();
        assert!(r.get("M2").unwrap().holds);
        assert_eq!(r.get("M3").unwrap().witness, Some(vec![1, 0, 1]));
    }

    #[test]
    fn lemma_r_on_equivalence_frame() {
        let f = Orthoframe::classical(5)
            .unwrap()
            .with_relation(&equivalence(&[&[0, 3], &[1, 2, 4]]))
            .unwrap();
        assert!(check_lemma_r(&f, 0, &mut rng()).unwrap().holds());
    }

    #[test]
    fn canonical_frame_of_mo2() {
        let l = FiniteOl::mo(2);
        let a = l.index_of("a").unwrap();
        let s = l.set_of([l.zero(), a, l.ortho(a), l.one()]);
        let e = quantifier_from_subalgebra(&l, &s).unwrap();
        let c = canonical_frame(&l, &e).unwrap();
        assert_eq!(c.frame.len(), 5);
        assert!(check_monadic_frame(&c.frame, 0).unwrap().holds());
        assert!(c.is_isomorphism && c.preserves_exists);
        let b = l.index_of("b").unwrap();
        let down_b = c.closed.set(c.alpha[b]).clone();
        assert_eq!(exists_r(&c.frame, 0, &down_b).unwrap(), c.frame.full_set());
    }

    #[test]
    fn canonical_frame_of_o6_is_not_orthomodular() {
        let l = FiniteOl::o6();
        let c = canonical_frame(&l, &UnaryMap::identity(&l)).unwrap();
        assert!(c.is_isomorphism);
        assert!(c.closed.lattice.is_ortholattice());
        assert!(!c.closed.lattice.is_oml());
    }

    #[test]
    fn canonical_frame_rejects_non_quantifier() {
        let l = FiniteOl::boolean(2);
        let e = UnaryMap(vec![0; 4]);
        assert!(matches!(canonical_frame(&l, &e), Err(FrameError::Quantifier(_))));
    }

    #[test]
    fn weak_cylindric_frames() {
        let classical = classical_cyl_set_algebra(2, 2).unwrap();
        let (f, _) = canonical_cylindric_frame(&classical).unwrap();
        let r = check_weak_cylindric_frame(&f).unwrap();
        assert!(r.holds(), "{:?}", r.first_failure());

        let mut g = Orthoframe::classical(4).unwrap();
        g.add_relation(&equivalence(&[&[0, 1], &[2, 3]])).unwrap();
        g.add_relation(&equivalence(&[&[0], &[1, 2], &[3]])).unwrap();
        g.set_diagonal(0, 1, &[0, 1, 2, 3]).unwrap();
        g.set_diagonal(1, 0, &[0, 1, 2, 3]).unwrap();
        let r = check_weak_cylindric_frame(&g).unwrap();
        let w2 = r.checks.iter().find(|c| c.name == "W2[0,1]").unwrap();
        assert!(!w2.holds);
        assert!(r.complex.is_none());
    }

    #[test]
    fn single_index_reduces_to_monadic() {
        let f = Orthoframe::classical(3)
            .unwrap()
            .with_relation(&equivalence(&[&[0, 1, 2]]))
            .unwrap();
        let r = check_weak_cylindric_frame(&f).unwrap();
        assert!(r.holds());
    }
}
