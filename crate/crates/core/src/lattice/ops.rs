use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{ElementSet, FiniteOl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OlAxiom {
    /// `x <= y` implies `y' <= x'`
    OrderInverting,
    /// `x ∧ x' = 0`
    ComplementMeet,
    /// `x ∨ x' = 1`
    ComplementJoin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OlViolation {
    pub axiom: OlAxiom,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmlFlag {
    pub is_oml: bool,
    /// `(x, y)` with `x <= y` and `x ∨ (x' ∧ y) != y`
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoulisHolland {
    /// Some element of the triple commutes with the other two.
    pub precondition: bool,
    pub commuting_element: Option<usize>,
    /// Distributivity of the sublattice generated by the triple.
    pub distributive: bool,
    pub witness: Option<[usize; 3]>,
}

impl FoulisHolland {
    /// The theorem's claim for this triple: precondition implies distributivity.
    pub fn holds(&self) -> bool {
        !self.precondition || self.distributive
    }
}

impl FiniteOl {
    /// Reports the first witness for each violated ortholattice axiom.
    pub fn validate_ortholattice(&self) -> Vec<OlViolation> {
        let mut out = Vec::new();
        let inverting = self.elements().find_map(|x| {
            self.up_set(x)
                .ones()
                .find(|&y| !self.leq(self.ortho(y), self.ortho(x)))
                .map(|y| vec![x, y])
        });
        if let Some(witness) = inverting {
            out.push(OlViolation {
                axiom: OlAxiom::OrderInverting,
                witness,
            });
        }
        if let Some(x) = self
            .elements()
            .find(|&x| self.meet(x, self.ortho(x)) != self.zero())
        {
            out.push(OlViolation {
                axiom: OlAxiom::ComplementMeet,
                witness: vec![x],
            });
        }
        if let Some(x) = self
            .elements()
            .find(|&x| self.join(x, self.ortho(x)) != self.one())
        {
            out.push(OlViolation {
                axiom: OlAxiom::ComplementJoin,
                witness: vec![x],
            });
        }
        out
    }

    pub fn is_ortholattice(&self) -> bool {
        self.validate_ortholattice().is_empty()
    }

    pub fn check_orthomodular(&self) -> OmlFlag {
        let witness = self.elements().find_map(|x| {
            let xo = self.ortho(x);
            self.up_set(x)
                .ones()
                .find(|&y| self.join(x, self.meet(xo, y)) != y)
                .map(|y| (x, y))
        });
        OmlFlag {
            is_oml: witness.is_none(),
            witness,
        }
    }

    pub fn is_oml(&self) -> bool {
        self.is_ortholattice() && self.check_orthomodular().is_oml
    }

    /// `x = (x ∧ y) ∨ (x ∧ y')`
    pub fn commutes(&self, x: usize, y: usize) -> bool {
        x == self.join(self.meet(x, y), self.meet(x, self.ortho(y)))
    }

    pub fn center(&self) -> ElementSet {
        self.set_of(
            self.elements()
                .filter(|&c| self.elements().all(|x| self.commutes(c, x))),
        )
    }

    /// For central `c`, checks that `x -> (x ∧ c, x ∧ c')` is a bijection onto
    /// `[0, c] × [0, c']`.
    pub fn central_decomposition_is_bijective(&self, c: usize) -> bool {
        let co = self.ortho(c);
        let mut seen = HashSet::new();
        for x in self.elements() {
            if !seen.insert((self.meet(x, c), self.meet(x, co))) {
                return false;
            }
        }
        seen.len() == self.down_set(c).count_ones(..) * self.down_set(co).count_ones(..)
    }

    pub fn is_boolean(&self) -> bool {
        self.is_oml()
            && self
                .elements()
                .all(|x| self.elements().all(|y| self.commutes(x, y)))
    }

    /// Maximal pairwise commuting sets; on an OML these are the maximal Boolean
    /// subalgebras.
    pub fn blocks(&self) -> Vec<ElementSet> {
        let n = self.len();
        let adj: Vec<FixedBitSet> = self
            .elements()
            .map(|x| self.set_of(self.elements().filter(|&y| y != x && self.commutes(x, y))))
            .collect();
        let mut out = Vec::new();
        let mut r = FixedBitSet::with_capacity(n);
        let p = self.full_set();
        let x = FixedBitSet::with_capacity(n);
        bron_kerbosch(&adj, &mut r, p, x, &mut out);
        out.sort_by_key(|b| b.ones().collect::<Vec<_>>());
        out
    }

    /// `x ∧ (x' ∨ y)`
    pub fn sasaki_product(&self, x: usize, y: usize) -> usize {
        self.meet(x, self.join(self.ortho(x), y))
    }

    /// `x' ∨ (x ∧ y)`
    pub fn sasaki_hook(&self, x: usize, y: usize) -> usize {
        self.join(self.ortho(x), self.meet(x, y))
    }

    /// First `(x, y, z)` where `x·y <= z` and `y <= x→z` disagree.
    pub fn sasaki_residuation_witness(&self) -> Option<[usize; 3]> {
        for x in self.elements() {
            for y in self.elements() {
                let prod = self.sasaki_product(x, y);
                for z in self.elements() {
                    if self.leq(prod, z) != self.leq(y, self.sasaki_hook(x, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn foulis_holland_check(&self, x: usize, y: usize, z: usize) -> FoulisHolland {
        let triple = [x, y, z];
        let commuting_element = (0..3).find_map(|k| {
            let c = triple[k];
            let others = [triple[(k + 1) % 3], triple[(k + 2) % 3]];
            others.iter().all(|&o| self.commutes(c, o)).then_some(c)
        });
        let generated = self.generate_sublattice(triple);
        let witness = self.distributivity_witness(&generated);
        FoulisHolland {
            precondition: commuting_element.is_some(),
            commuting_element,
            distributive: witness.is_none(),
            witness,
        }
    }

    /// `(a, b, c)` with `a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)`, all from `set`.
    pub fn distributivity_witness(&self, set: &ElementSet) -> Option<[usize; 3]> {
        for a in set.ones() {
            for b in set.ones() {
                for c in set.ones() {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// Closure of the generators and the bounds under `∧`, `∨`, `'`.
    pub fn generate_subalgebra(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        self.close(gens, true)
    }

    /// Closure under `∧` and `∨` only.
    pub fn generate_sublattice(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        self.close(gens, false)
    }

    fn close(&self, gens: impl IntoIterator<Item = usize>, with_ortho: bool) -> ElementSet {
        let mut set = self.empty_set();
        let mut members = Vec::new();
        let mut queue: VecDeque<usize> = gens.into_iter().collect();
        if with_ortho {
            queue.extend([self.zero(), self.one()]);
        }
        while let Some(x) = queue.pop_front() {
            if set.contains(x) {
                continue;
            }
            set.insert(x);
            if with_ortho && !set.contains(self.ortho(x)) {
                queue.push_back(self.ortho(x));
            }
            for &m in &members {
                for z in [self.meet(x, m), self.join(x, m)] {
                    if !set.contains(z) {
                        queue.push_back(z);
                    }
                }
            }
            members.push(x);
        }
        set
    }

    /// A witness that `set` is not a subalgebra: a missing bound `[b]`, a
    /// missing complement `[x]`, or a pair `[x, y]` whose meet or join is missing.
    pub fn subalgebra_violation(&self, set: &ElementSet) -> Option<Vec<usize>> {
        for b in [self.zero(), self.one()] {
            if !set.contains(b) {
                return Some(vec![b]);
            }
        }
        for x in set.ones() {
            if !set.contains(self.ortho(x)) {
                return Some(vec![x]);
            }
            for y in set.ones() {
                if !set.contains(self.meet(x, y)) || !set.contains(self.join(x, y)) {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    }

    pub fn is_subalgebra(&self, set: &ElementSet) -> bool {
        set.len() == self.len() && self.subalgebra_violation(set).is_none()
    }

    /// Every subalgebra, found by adjoining one element at a time to the
    /// subalgebras already known. Sorted by size, then by members.
    pub fn subalgebras(&self) -> Vec<ElementSet> {
        let start = self.generate_subalgebra([]);
        let mut seen: HashSet<ElementSet> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for x in self.elements() {
                if s.contains(x) {
                    continue;
                }
                let t = self.generate_subalgebra(s.ones().chain([x]));
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<ElementSet> = seen.into_iter().collect();
        out.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        out
    }

    /// Subalgebras whose members pairwise commute.
    pub fn boolean_subalgebras(&self) -> Vec<ElementSet> {
        self.subalgebras()
            .into_iter()
            .filter(|s| s.ones().all(|x| s.ones().all(|y| self.commutes(x, y))))
            .collect()
    }
}

fn bron_kerbosch(
    adj: &[FixedBitSet],
    r: &mut FixedBitSet,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<FixedBitSet>,
) {
    if p.is_clear() && x.is_clear() {
        out.push(r.clone());
        return;
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(&adj[u]).count())
        .expect("p or x is nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).collect();
    for v in candidates {
        r.insert(v);
        let mut p2 = p.clone();
        p2.intersect_with(&adj[v]);
        let mut x2 = x.clone();
        x2.intersect_with(&adj[v]);
        bron_kerbosch(adj, r, p2, x2, out);
        r.set(v, false);
        p.set(v, false);
        x.insert(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn o6_is_an_ortholattice_but_not_orthomodular() {
        let l = FiniteOl::o6();
        assert!(l.validate_ortholattice().is_empty());
        let flag = l.check_orthomodular();
        let (x, y) = flag.witness.unwrap();
        assert_eq!((l.label(x), l.label(y)), ("a", "b"));
        assert!(!flag.is_oml);
    }

    #[test]
    fn identity_ortho_on_a_chain_violates_axioms() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let l = FiniteOl::from_relation(labels, &[(0, 1), (1, 2), (2, 3)], vec![0, 1, 2, 3]).unwrap();
        let axioms: Vec<OlAxiom> = l.validate_ortholattice().iter().map(|v| v.axiom).collect();
        assert!(axioms.contains(&OlAxiom::OrderInverting));
        assert!(axioms.contains(&OlAxiom::ComplementJoin));
    }

    #[test]
    fn mo2_structure() {
        let l = FiniteOl::mo(2);
        assert!(l.is_oml());
        let a = l.index_of("a").unwrap();
        let b = l.index_of("b").unwrap();
        assert!(!l.commutes(a, b));
        assert_eq!(l.center().count_ones(..), 2);
        assert_eq!(l.blocks().len(), 2);
        assert_eq!(l.sasaki_product(a, b), a);
        assert!(l.sasaki_residuation_witness().is_none());
    }

    #[test]
    fn boolean_algebra_has_one_block_and_full_center() {
        let l = FiniteOl::boolean(3);
        assert!(l.is_boolean());
        assert_eq!(l.blocks(), vec![l.full_set()]);
        assert_eq!(l.center(), l.full_set());
        // partitions of a 3-element set
        assert_eq!(l.subalgebras().len(), 5);
    }

    #[test]
    fn foulis_holland_flags_missing_precondition() {
        let l = FiniteOl::mo(2);
        let a = l.index_of("a").unwrap();
        let b = l.index_of("b").unwrap();
        let fh = l.foulis_holland_check(a, b, l.ortho(b));
        assert!(!fh.precondition);
        assert!(fh.holds());
    }

    #[test]
    fn product_center_and_decomposition() {
        let l = FiniteOl::product(&FiniteOl::boolean(1), &FiniteOl::mo(2)).unwrap();
        let center = l.center();
        assert_eq!(center.count_ones(..), 4);
        for c in center.ones() {
            assert!(l.central_decomposition_is_bijective(c));
        }
        let c = l.index_of("(1,0)").unwrap();
        for x in l.elements() {
            for y in l.elements() {
                assert!(l.foulis_holland_check(c, x, y).distributive);
            }
        }
    }
}
