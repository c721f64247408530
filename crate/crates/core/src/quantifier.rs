//! Quantifiers on finite ortholattices.
//!
//! An existential quantifier `∃` on an ortholattice is a unary map with
//!
//! * Q1 `∃0 = 0`
//! * Q2 `p <= ∃p`
//! * Q3 `∃(p ∨ q) = ∃p ∨ ∃q`
//! * Q4 `∃∃p = ∃p`
//! * Q5 `∃(∃p)' = (∃p)'`
//!
//! Quantifiers correspond to approximating subalgebras: `S = ∃[L]`, and `∃a` is
//! the least member of `S` above `a`. On Boolean algebras Q3–Q5 can be traded for
//! Q6 `∃(p ∧ ∃q) = ∃p ∧ ∃q`, which may fail on orthomodular lattices; Q6 is
//! therefore reported but never required.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ElementSet, FiniteOl, GreechieDiagram, LatticeError};
use crate::report::{self, AxiomCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantifierError {
    #[error("map has {got} entries for {expected} elements")]
    MapLength { expected: usize, got: usize },
    #[error("map sends {from} to {to}, outside the lattice")]
    MapOutOfRange { from: usize, to: usize },
    #[error("not a subalgebra (witness {witness:?})")]
    NotSubalgebra { witness: Vec<usize> },
    #[error("no least subalgebra element above {0}")]
    NotApproximating(usize),
    #[error("map is not a quantifier: {0} fails")]
    NotAQuantifier(String),
    #[error("not a Boolean algebra: {0} and {1} do not commute")]
    NotBoolean(usize, usize),
    #[error("not an ideal: {reason} (witness {witness:?})")]
    NotAnIdeal { reason: String, witness: Vec<usize> },
    #[error("element {0} is not fixed by the quantifier")]
    FixpointRequired(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A total map on element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct UnaryMap(pub Vec<usize>);

impl UnaryMap {
    pub fn new(l: &FiniteOl, map: Vec<usize>) -> Result<Self, QuantifierError> {
        if map.len() != l.len() {
            return Err(QuantifierError::MapLength {
                expected: l.len(),
                got: map.len(),
            });
        }
        if let Some((from, &to)) = map.iter().enumerate().find(|(_, &y)| y >= l.len()) {
            return Err(QuantifierError::MapOutOfRange { from, to });
        }
        Ok(UnaryMap(map))
    }

    pub fn identity(l: &FiniteOl) -> Self {
        UnaryMap(l.elements().collect())
    }

    pub fn from_fn(l: &FiniteOl, f: impl Fn(usize) -> usize) -> Self {
        UnaryMap(l.elements().map(f).collect())
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn compose(&self, inner: &UnaryMap) -> UnaryMap {
        UnaryMap(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn image(&self, l: &FiniteOl) -> ElementSet {
        l.set_of(self.0.iter().copied())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantifierReport {
    /// Q1 through Q6, in order.
    pub checks: Vec<AxiomCheck>,
    /// Q1–Q5 all hold.
    pub is_quantifier: bool,
}

impl QuantifierReport {
    pub fn get(&self, name: &str) -> &AxiomCheck {
        report::find(&self.checks, name).expect("known axiom name")
    }

    pub fn q6(&self) -> bool {
        self.get("Q6").holds
    }

    fn first_failure(&self) -> Option<&str> {
        self.checks[..5].iter().find(|c| !c.holds).map(|c| c.name.as_str())
    }
}

fn first_element(l: &FiniteOl, pred: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    l.elements().find(|&p| pred(p)).map(|p| vec![p])
}

fn first_pair(l: &FiniteOl, pred: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    l.elements()
        .find_map(|p| l.elements().find(|&q| pred(p, q)).map(|q| vec![p, q]))
}

/// Checks Q1–Q6 exhaustively. Witnesses are the failing element or pair.
pub fn check_quantifier(l: &FiniteOl, e: &UnaryMap) -> QuantifierReport {
    let ex = |x| e.apply(x);
    let q1 = (ex(l.zero()) != l.zero()).then(|| vec![l.zero()]);
    let q2 = first_element(l, |p| !l.leq(p, ex(p)));
    let q3 = first_pair(l, |p, q| ex(l.join(p, q)) != l.join(ex(p), ex(q)));
    let q4 = first_element(l, |p| ex(ex(p)) != ex(p));
    let q5 = first_element(l, |p| {
        let c = l.ortho(ex(p));
        ex(c) != c
    });
    let q6 = first_pair(l, |p, q| ex(l.meet(p, ex(q))) != l.meet(ex(p), ex(q)));
    let checks = vec![
        AxiomCheck::new("Q1", q1),
        AxiomCheck::new("Q2", q2),
        AxiomCheck::new("Q3", q3),
        AxiomCheck::new("Q4", q4),
        AxiomCheck::new("Q5", q5),
        AxiomCheck::new("Q6", q6),
    ];
    let is_quantifier = report::all_hold(&checks[..5]);
    QuantifierReport {
        checks,
        is_quantifier,
    }
}

fn require_quantifier(l: &FiniteOl, e: &UnaryMap) -> Result<(), QuantifierError> {
    let r = check_quantifier(l, e);
    match r.first_failure() {
        Some(name) => Err(QuantifierError::NotAQuantifier(name.to_string())),
        None => Ok(()),
    }
}

/// `∃a` = the least member of `s` above `a`.
pub fn quantifier_from_subalgebra(l: &FiniteOl, s: &ElementSet) -> Result<UnaryMap, QuantifierError> {
    if let Some(witness) = l.subalgebra_violation(s) {
        return Err(QuantifierError::NotSubalgebra { witness });
    }
    let mut map = Vec::with_capacity(l.len());
    for a in l.elements() {
        let mut above = l.up_set(a).clone();
        above.intersect_with(s);
        let least = above
            .ones()
            .find(|&c| above.is_subset(l.up_set(c)))
            .ok_or(QuantifierError::NotApproximating(a))?;
        map.push(least);
    }
    Ok(UnaryMap(map))
}

/// The image `{∃a}`; for a quantifier this is its approximating subalgebra.
pub fn fixpoint_subalgebra(l: &FiniteOl, e: &UnaryMap) -> ElementSet {
    e.image(l)
}

/// `∀p = (∃p')'`
pub fn forall_from_exists(l: &FiniteOl, e: &UnaryMap) -> UnaryMap {
    UnaryMap::from_fn(l, |p| l.ortho(e.apply(l.ortho(p))))
}

/// First pair `(a, b)` where `∃a <= b` and `a <= ∀b` disagree.
pub fn check_residuation(l: &FiniteOl, e: &UnaryMap) -> Option<(usize, usize)> {
    let all = forall_from_exists(l, e);
    l.elements().find_map(|a| {
        l.elements()
            .find(|&b| l.leq(e.apply(a), b) != l.leq(a, all.apply(b)))
            .map(|b| (a, b))
    })
}

/// First pair of elements whose join is not preserved.
pub fn join_preservation_witness(l: &FiniteOl, e: &UnaryMap) -> Option<(usize, usize)> {
    first_pair(l, |p, q| e.apply(l.join(p, q)) != l.join(e.apply(p), e.apply(q))).map(|v| (v[0], v[1]))
}

pub fn meet_preservation_witness(l: &FiniteOl, e: &UnaryMap) -> Option<(usize, usize)> {
    first_pair(l, |p, q| e.apply(l.meet(p, q)) != l.meet(e.apply(p), e.apply(q))).map(|v| (v[0], v[1]))
}

/// On a Boolean algebra, whether `{Q1, Q2, Q6}` and `{Q1, ..., Q5}` agree for `e`.
pub fn check_lemma_q6_boolean(b: &FiniteOl, e: &UnaryMap) -> Result<bool, QuantifierError> {
    for x in b.elements() {
        if let Some(y) = b.elements().find(|&y| !b.commutes(x, y)) {
            return Err(QuantifierError::NotBoolean(x, y));
        }
    }
    let r = check_quantifier(b, e);
    let short = r.get("Q1").holds && r.get("Q2").holds && r.get("Q6").holds;
    Ok(short == r.is_quantifier)
}

/// A finite ortholattice with a quantifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadicOl {
    pub lattice: FiniteOl,
    pub exists: UnaryMap,
}

impl MonadicOl {
    pub fn new(lattice: FiniteOl, exists: UnaryMap) -> Result<Self, QuantifierError> {
        UnaryMap::new(&lattice, exists.0.clone())?;
        require_quantifier(&lattice, &exists)?;
        Ok(MonadicOl { lattice, exists })
    }

    pub fn from_subalgebra(lattice: FiniteOl, s: &ElementSet) -> Result<Self, QuantifierError> {
        let exists = quantifier_from_subalgebra(&lattice, s)?;
        Ok(MonadicOl { lattice, exists })
    }

    pub fn report(&self) -> QuantifierReport {
        check_quantifier(&self.lattice, &self.exists)
    }

    pub fn forall(&self) -> UnaryMap {
        forall_from_exists(&self.lattice, &self.exists)
    }
}

// ---------------------------------------------------------------------------
// p-ideals and congruences

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PIdeal {
    pub members: Vec<usize>,
    pub closed_under_exists: bool,
}

fn ideal_violation(l: &FiniteOl, i: &ElementSet) -> Option<(String, Vec<usize>)> {
    if !i.contains(l.zero()) {
        return Some(("does not contain 0".into(), vec![l.zero()]));
    }
    for a in i.ones() {
        if let Some(b) = l.down_set(a).ones().find(|&b| !i.contains(b)) {
            return Some(("not downward closed".into(), vec![a, b]));
        }
        if let Some(b) = i.ones().find(|&b| !i.contains(l.join(a, b))) {
            return Some(("not closed under joins".into(), vec![a, b]));
        }
        if let Some(b) = l
            .elements()
            .find(|&b| !i.contains(l.meet(b, l.join(a, l.ortho(b)))))
        {
            return Some(("b ∧ (a ∨ b') escapes".into(), vec![a, b]));
        }
    }
    None
}

/// Checks that `i` is a p-ideal and records whether it is `∃`-closed.
pub fn p_ideal(l: &FiniteOl, i: &ElementSet, e: &UnaryMap) -> Result<PIdeal, QuantifierError> {
    if let Some((reason, witness)) = ideal_violation(l, i) {
        return Err(QuantifierError::NotAnIdeal { reason, witness });
    }
    Ok(PIdeal {
        members: i.ones().collect(),
        closed_under_exists: i.ones().all(|a| i.contains(e.apply(a))),
    })
}

pub fn is_p_ideal(l: &FiniteOl, i: &ElementSet) -> bool {
    ideal_violation(l, i).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Congruence {
    /// Class index of every element; classes are numbered by least member.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub respects_meet: bool,
    pub respects_join: bool,
    pub respects_ortho: bool,
}

impl Congruence {
    pub fn is_congruence(&self) -> bool {
        self.respects_meet && self.respects_join && self.respects_ortho
    }

    pub fn respects(&self, l: &FiniteOl, e: &UnaryMap) -> bool {
        l.elements().all(|x| {
            l.elements()
                .all(|y| self.class_of[x] != self.class_of[y] || self.class_of[e.apply(x)] == self.class_of[e.apply(y)])
        })
    }
}

/// The relation `x ~ y` iff `x ∨ a = y ∨ a` for some `a` in the ideal.
pub fn congruence_from_ideal(l: &FiniteOl, i: &ElementSet) -> Result<Congruence, QuantifierError> {
    if let Some((reason, witness)) = ideal_violation(l, i) {
        return Err(QuantifierError::NotAnIdeal { reason, witness });
    }
    let related = |x: usize, y: usize| i.ones().any(|a| l.join(x, a) == l.join(y, a));
    let n = l.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in l.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<usize> = (x..n).filter(|&y| class_of[y] == usize::MAX && related(x, y)).collect();
        for &y in &members {
            class_of[y] = id;
        }
        classes.push(members);
    }
    // a genuine equivalence has every pair inside a class related
    let transitive = classes
        .iter()
        .all(|c| c.iter().all(|&x| c.iter().all(|&y| related(x, y))));
    let same = |x: usize, y: usize| class_of[x] == class_of[y];
    let pairs_ok = |f: &dyn Fn(usize, usize) -> usize| {
        l.elements().all(|x| {
            l.elements().all(|y| {
                !same(x, y) || l.elements().all(|z| same(f(x, z), f(y, z)))
            })
        })
    };
    let respects_meet = transitive && pairs_ok(&|x, z| l.meet(x, z));
    let respects_join = transitive && pairs_ok(&|x, z| l.join(x, z));
    let respects_ortho = transitive
        && l.elements()
            .all(|x| l.elements().all(|y| !same(x, y) || same(l.ortho(x), l.ortho(y))));
    Ok(Congruence {
        class_of,
        classes,
        respects_meet,
        respects_join,
        respects_ortho,
    })
}

/// The quotient by a congruence that respects `∧`, `∨`, `'` and `∃`.
pub fn quotient(m: &MonadicOl, c: &Congruence) -> Result<MonadicOl, QuantifierError> {
    let l = &m.lattice;
    if !c.is_congruence() || !c.respects(l, &m.exists) {
        return Err(QuantifierError::NotAnIdeal {
            reason: "partition is not a congruence".into(),
            witness: vec![],
        });
    }
    let rep: Vec<usize> = c.classes.iter().map(|cl| cl[0]).collect();
    let labels = c
        .classes
        .iter()
        .map(|cl| format!("[{}]", l.label(cl[0])))
        .collect();
    let ortho = rep.iter().map(|&x| c.class_of[l.ortho(x)]).collect();
    let lattice = FiniteOl::from_order_fn(
        labels,
        |a, b| c.class_of[l.meet(rep[a], rep[b])] == a,
        ortho,
        usize::MAX,
    )?;
    let exists = UnaryMap(rep.iter().map(|&x| c.class_of[m.exists.apply(x)]).collect());
    MonadicOl::new(lattice, exists)
}

// ---------------------------------------------------------------------------
// relative commutants and interval algebras

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeCommutant {
    pub members: Vec<usize>,
    pub is_subalgebra: bool,
    pub closed_under_exists: bool,
}

/// `C(a) = {x : a commutes with x}` for a fixpoint `a` of `∃`.
pub fn relative_commutant_closure(
    l: &FiniteOl,
    e: &UnaryMap,
    a: usize,
) -> Result<RelativeCommutant, QuantifierError> {
    if e.apply(a) != a {
        return Err(QuantifierError::FixpointRequired(a));
    }
    let set = l.set_of(l.elements().filter(|&x| l.commutes(a, x)));
    Ok(RelativeCommutant {
        is_subalgebra: l.subalgebra_violation(&set).is_none(),
        closed_under_exists: set.ones().all(|x| set.contains(e.apply(x))),
        members: set.ones().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalAlgebra {
    /// `[0, a]` with `x# = a ∧ x'` and `∃` restricted.
    pub algebra: MonadicOl,
    /// Original index of each element of the interval.
    pub embedding: Vec<usize>,
    /// `x -> (x ∧ a, x ∧ a')` maps `C(a)` bijectively onto `[0,a] × [0,a']`,
    /// preserving the operations and `∃` componentwise.
    pub product_decomposition: bool,
}

fn restrict_to_interval(
    l: &FiniteOl,
    e: &UnaryMap,
    a: usize,
) -> Result<(MonadicOl, Vec<usize>), QuantifierError> {
    let (lattice, old) = l.restrict(l.down_set(a), |x| l.meet(a, l.ortho(x)))?;
    let mut new_of = vec![usize::MAX; l.len()];
    for (k, &x) in old.iter().enumerate() {
        new_of[x] = k;
    }
    let exists = UnaryMap(old.iter().map(|&x| new_of[e.apply(x)]).collect());
    if exists.0.contains(&usize::MAX) {
        return Err(QuantifierError::FixpointRequired(a));
    }
    Ok((MonadicOl::new(lattice, exists)?, old))
}

pub fn interval_algebra(l: &FiniteOl, e: &UnaryMap, a: usize) -> Result<IntervalAlgebra, QuantifierError> {
    if e.apply(a) != a {
        return Err(QuantifierError::FixpointRequired(a));
    }
    let (algebra, embedding) = restrict_to_interval(l, e, a)?;
    let ao = l.ortho(a);
    let commutant: Vec<usize> = l.elements().filter(|&x| l.commutes(a, x)).collect();
    let split = |x: usize| (l.meet(x, a), l.meet(x, ao));
    let mut images: Vec<(usize, usize)> = commutant.iter().map(|&x| split(x)).collect();
    let image_count = images.len();
    images.sort_unstable();
    images.dedup();
    let bijective = images.len() == image_count
        && image_count == l.down_set(a).count_ones(..) * l.down_set(ao).count_ones(..);
    let preserves = commutant.iter().all(|&x| {
        let (x1, x2) = split(x);
        let ortho_ok = split(l.ortho(x)) == (l.meet(a, l.ortho(x1)), l.meet(ao, l.ortho(x2)));
        let exists_ok = split(e.apply(x)) == (e.apply(x1), e.apply(x2));
        let ops_ok = commutant.iter().all(|&y| {
            let (y1, y2) = split(y);
            split(l.meet(x, y)) == (l.meet(x1, y1), l.meet(x2, y2))
                && split(l.join(x, y)) == (l.join(x1, y1), l.join(x2, y2))
        });
        ortho_ok && exists_ok && ops_ok
    });
    Ok(IntervalAlgebra {
        algebra,
        embedding,
        product_decomposition: bijective && preserves,
    })
}

// ---------------------------------------------------------------------------
// counterexample search for Q6

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchSpace {
    /// Pastings of 3-atom blocks with at most this many blocks.
    Greechie { max_blocks: usize },
    /// Boolean algebras with at most this many atoms.
    Boolean { max_atoms: u32 },
    Explicit(Vec<FiniteOl>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q6Witness {
    pub diagram: Option<GreechieDiagram>,
    pub lattice: FiniteOl,
    /// Boolean subalgebra whose quantifier fails Q6.
    pub subalgebra: ElementSet,
    pub exists: UnaryMap,
    pub p: usize,
    pub q: usize,
}

impl Q6Witness {
    /// `∃(p ∧ ∃q)`
    pub fn lhs(&self) -> usize {
        let e = &self.exists;
        e.apply(self.lattice.meet(self.p, e.apply(self.q)))
    }

    /// `∃p ∧ ∃q`
    pub fn rhs(&self) -> usize {
        let e = &self.exists;
        self.lattice.meet(e.apply(self.p), e.apply(self.q))
    }

    pub fn rhs_is_atom(&self) -> bool {
        self.lattice.atoms().contains(&self.rhs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q6Search {
    pub witness: Option<Q6Witness>,
    /// Candidate lattices examined, in enumeration order, up to and including the witness.
    pub examined: usize,
    /// Diagrams in the enumeration that do not give an orthomodular lattice.
    pub rejected: usize,
}

/// Boolean subalgebras, largest first; ties broken by members.
fn boolean_subalgebras_descending(l: &FiniteOl) -> Vec<ElementSet> {
    let mut subs = l.boolean_subalgebras();
    subs.sort_by_key(|s| (std::cmp::Reverse(s.count_ones(..)), s.ones().collect::<Vec<_>>()));
    subs
}

/// A Boolean subalgebra `S` and `p, q` with `∃(p ∧ ∃q) = 0` and `∃p ∧ ∃q != 0`.
pub fn q6_witness_in(l: &FiniteOl) -> Option<(ElementSet, UnaryMap, usize, usize)> {
    for s in boolean_subalgebras_descending(l) {
        let e = quantifier_from_subalgebra(l, &s).expect("subalgebra");
        for p in l.elements() {
            for q in l.elements() {
                let lhs = e.apply(l.meet(p, e.apply(q)));
                let rhs = l.meet(e.apply(p), e.apply(q));
                if lhs == l.zero() && rhs != l.zero() {
                    return Some((s, e, p, q));
                }
            }
        }
    }
    None
}

/// Diagrams of 3-atom blocks with exactly `blocks` blocks, in lexicographic
/// order of their sorted block lists. Fresh atoms are numbered in order of first
/// use, each new block is greater than the previous one, and two blocks share
/// at most one atom.
pub fn greechie_candidates(blocks: usize) -> Vec<Vec<[usize; 3]>> {
    fn extend(current: &mut Vec<[usize; 3]>, atoms: usize, target: usize, out: &mut Vec<Vec<[usize; 3]>>) {
        if current.len() == target {
            out.push(current.clone());
            return;
        }
        let last = *current.last().expect("seeded with one block");
        let limit = atoms + 3;
        for a in 0..limit {
            for b in a + 1..limit {
                for c in b + 1..limit {
                    let block = [a, b, c];
                    if block <= last {
                        continue;
                    }
                    // fresh atoms must be the next unused ones, in order
                    let fresh: Vec<usize> = block.iter().copied().filter(|&x| x >= atoms).collect();
                    if fresh.iter().enumerate().any(|(k, &x)| x != atoms + k) {
                        continue;
                    }
                    let overlap_ok = current
                        .iter()
                        .all(|other| other.iter().filter(|x| block.contains(x)).count() <= 1);
                    if !overlap_ok {
                        continue;
                    }
                    current.push(block);
                    extend(current, atoms + fresh.len(), target, out);
                    current.pop();
                }
            }
        }
    }
    if blocks == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    extend(&mut vec![[0, 1, 2]], 3, blocks, &mut out);
    out
}

fn atom_name(k: usize) -> String {
    const NAMES: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if k < NAMES.len() {
        (NAMES[k] as char).to_string()
    } else {
        format!("A{k}")
    }
}

pub fn diagram_of(blocks: &[[usize; 3]]) -> GreechieDiagram {
    let named: Vec<Vec<String>> = blocks
        .iter()
        .map(|b| b.iter().map(|&k| atom_name(k)).collect())
        .collect();
    GreechieDiagram::from_blocks(&named).expect("well-formed candidate")
}

/// Searches in a fixed enumeration order; the reported witness is the first in
/// that order regardless of how the scan is parallelized.
pub fn find_q6_counterexample(space: &SearchSpace) -> Q6Search {
    match space {
        SearchSpace::Boolean { max_atoms } => {
            let lattices: Vec<FiniteOl> = (0..=*max_atoms).map(FiniteOl::boolean).collect();
            search_explicit(&lattices)
        }
        SearchSpace::Explicit(lattices) => search_explicit(lattices),
        SearchSpace::Greechie { max_blocks } => {
            let mut examined = 0;
            let mut rejected = 0;
            for b in 1..=*max_blocks {
                let candidates = greechie_candidates(b);
                let outcomes: Vec<Option<Result<_, ()>>> = candidates
                    .par_iter()
                    .map(|blocks| {
                        let diagram = diagram_of(blocks);
                        match diagram.to_lattice() {
                            Err(_) => Some(Err(())),
                            Ok(l) => q6_witness_in(&l).map(|w| Ok((diagram, l, w))),
                        }
                    })
                    .collect();
                for outcome in outcomes {
                    examined += 1;
                    match outcome {
                        Some(Err(())) => rejected += 1,
                        Some(Ok((diagram, lattice, (subalgebra, exists, p, q)))) => {
                            return Q6Search {
                                witness: Some(Q6Witness {
                                    diagram: Some(diagram),
                                    lattice,
                                    subalgebra,
                                    exists,
                                    p,
                                    q,
                                }),
                                examined,
                                rejected,
                            };
                        }
                        None => {}
                    }
                }
            }
            Q6Search {
                witness: None,
                examined,
                rejected,
            }
        }
    }
}

fn search_explicit(lattices: &[FiniteOl]) -> Q6Search {
    let found = lattices
        .par_iter()
        .enumerate()
        .find_map_first(|(k, l)| q6_witness_in(l).map(|w| (k, w)));
    match found {
        Some((k, (subalgebra, exists, p, q))) => Q6Search {
            witness: Some(Q6Witness {
                diagram: None,
                lattice: lattices[k].clone(),
                subalgebra,
                exists,
                p,
                q,
            }),
            examined: k + 1,
            rejected: 0,
        },
        None => Q6Search {
            witness: None,
            examined: lattices.len(),
            rejected: 0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mo2_with_block() -> (FiniteOl, ElementSet, usize, usize) {
        let l = FiniteOl::mo(2);
        let a = l.index_of("a").unwrap();
        let b = l.index_of("b").unwrap();
        let s = l.set_of([l.zero(), a, l.ortho(a), l.one()]);
        (l, s, a, b)
    }

    #[test]
    fn trivial_quantifiers() {
        let l = FiniteOl::mo(2);
        assert!(check_quantifier(&l, &UnaryMap::identity(&l)).is_quantifier);
        let two = UnaryMap::from_fn(&l, |x| if x == l.zero() { x } else { l.one() });
        assert!(check_quantifier(&l, &two).is_quantifier);
        let all = forall_from_exists(&l, &two);
        assert_eq!(all.apply(l.one()), l.one());
        assert_eq!(all.apply(l.index_of("a").unwrap()), l.zero());
    }

    #[test]
    fn mo2_block_quantifier() {
        let (l, s, a, b) = mo2_with_block();
        let e = quantifier_from_subalgebra(&l, &s).unwrap();
        assert_eq!(e.apply(b), l.one());
        assert_eq!(e.apply(l.ortho(b)), l.one());
        assert_eq!(e.apply(a), a);
        assert_eq!(fixpoint_subalgebra(&l, &e), s);
        assert_eq!(forall_from_exists(&l, &e).apply(b), l.zero());
        assert!(check_residuation(&l, &e).is_none());
    }

    #[test]
    fn residuation_fails_for_non_quantifier() {
        let l = FiniteOl::boolean(1);
        let e = UnaryMap::from_fn(&l, |_| l.one());
        assert_eq!(check_residuation(&l, &e), Some((0, 0)));
    }

    #[test]
    fn non_subalgebra_is_refused() {
        let (l, _, a, _) = mo2_with_block();
        let s = l.set_of([l.zero(), a, l.one()]);
        assert!(matches!(
            quantifier_from_subalgebra(&l, &s),
            Err(QuantifierError::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn lemma_refuses_non_boolean() {
        let l = FiniteOl::mo(2);
        assert!(matches!(
            check_lemma_q6_boolean(&l, &UnaryMap::identity(&l)),
            Err(QuantifierError::NotBoolean(..))
        ));
    }

    #[test]
    fn p_ideal_and_quotient_on_mo2() {
        let (l, s, a, _) = mo2_with_block();
        let e = quantifier_from_subalgebra(&l, &s).unwrap();
        let zero = l.set_of([l.zero()]);
        let c = congruence_from_ideal(&l, &zero).unwrap();
        assert_eq!(c.classes.len(), l.len());
        let full = l.full_set();
        let c = congruence_from_ideal(&l, &full).unwrap();
        assert_eq!(c.classes.len(), 1);
        // {0, a} is not a p-ideal of MO2: b ∧ (a ∨ b') = b
        let i = l.set_of([l.zero(), a]);
        assert!(matches!(p_ideal(&l, &i, &e), Err(QuantifierError::NotAnIdeal { .. })));
    }

    #[test]
    fn p_ideal_in_a_product() {
        let l = FiniteOl::product(&FiniteOl::boolean(1), &FiniteOl::mo(2)).unwrap();
        let e = UnaryMap::identity(&l);
        let c = l.index_of("(1,0)").unwrap();
        let i = l.down_set(c).clone();
        let ideal = p_ideal(&l, &i, &e).unwrap();
        assert!(ideal.closed_under_exists);
        let cong = congruence_from_ideal(&l, &i).unwrap();
        assert!(cong.is_congruence());
        let m = MonadicOl::new(l.clone(), e).unwrap();
        let q = quotient(&m, &cong).unwrap();
        assert_eq!(q.lattice.len(), 6);
        assert!(q.lattice.is_oml());
    }

    #[test]
    fn relative_commutant_and_interval() {
        let (l, s, a, _) = mo2_with_block();
        let e = quantifier_from_subalgebra(&l, &s).unwrap();
        let rc = relative_commutant_closure(&l, &e, a).unwrap();
        assert_eq!(l.set_of(rc.members.iter().copied()), s);
        assert!(rc.is_subalgebra && rc.closed_under_exists);
        let b = l.index_of("b").unwrap();
        assert_eq!(
            relative_commutant_closure(&l, &e, b).unwrap_err(),
            QuantifierError::FixpointRequired(b)
        );

        let ia = interval_algebra(&l, &e, l.one()).unwrap();
        assert_eq!(ia.algebra.lattice.len(), l.len());
        assert!(ia.product_decomposition);
        let ia = interval_algebra(&l, &e, l.zero()).unwrap();
        assert_eq!(ia.algebra.lattice.len(), 1);
        assert!(ia.product_decomposition);
    }

    #[test]
    fn interval_of_a_product() {
        let l = FiniteOl::product(&FiniteOl::boolean(1), &FiniteOl::mo(2)).unwrap();
        let e = UnaryMap::identity(&l);
        let a = l.index_of("(1,0)").unwrap();
        let ia = interval_algebra(&l, &e, a).unwrap();
        assert_eq!(ia.algebra.lattice.len(), 2);
        assert!(ia.algebra.lattice.is_boolean());
        assert!(ia.product_decomposition);
    }

    #[test]
    fn candidate_enumeration_starts_with_one_shared_atom() {
        assert_eq!(greechie_candidates(1), vec![vec![[0, 1, 2]]]);
        let two = greechie_candidates(2);
        assert_eq!(two[0], vec![[0, 1, 2], [0, 3, 4]]);
        assert!(two.contains(&vec![[0, 1, 2], [3, 4, 5]]));
        assert!(two.iter().all(|d| d[0].iter().filter(|x| d[1].contains(x)).count() <= 1));
    }
}

#[cfg(test)]
mod search_tests {
    use super::*;

    #[test]
    fn first_witness_is_two_blocks_sharing_an_atom() {
        let found = find_q6_counterexample(&SearchSpace::Greechie { max_blocks: 2 });
        let w = found.witness.expect("witness");
        let d = w.diagram.as_ref().unwrap();
        assert_eq!(d.blocks, vec![vec![0, 1, 2], vec![0, 3, 4]]);
        assert_eq!(w.lattice.len(), 12);
        assert_eq!(w.lhs(), w.lattice.zero());
        assert!(w.rhs_is_atom());
        let r = check_quantifier(&w.lattice, &w.exists);
        assert!(r.is_quantifier && !r.q6());
    }

    #[test]
    fn boolean_space_has_no_witness() {
        let found = find_q6_counterexample(&SearchSpace::Boolean { max_atoms: 4 });
        assert!(found.witness.is_none());
        assert_eq!(found.examined, 5);
    }

    #[test]
    fn mo2_has_no_witness_for_the_trivial_subalgebra() {
        let l = FiniteOl::mo(2);
        let s = l.set_of([l.zero(), l.one()]);
        let e = quantifier_from_subalgebra(&l, &s).unwrap();
        assert!(check_quantifier(&l, &e).q6());
    }
}
