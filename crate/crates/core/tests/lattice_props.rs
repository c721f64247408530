mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use qmonadic::io::{lattice_to_json, parse_lattice, DEFAULT_LIMIT};
use qmonadic::quantifier::{
    check_quantifier, congruence_from_ideal, forall_from_exists, interval_algebra, p_ideal, quantifier_from_subalgebra,
    UnaryMap,
};
use qmonadic::FiniteOl;

fn lattices() -> &'static [FiniteOl] {
    static CELL: OnceLock<Vec<FiniteOl>> = OnceLock::new();
    CELL.get_or_init(|| common::omls(3))
}

/// A fixture lattice and a quantifier on it, picked by index.
fn monadic(k: usize, s: usize) -> (&'static FiniteOl, UnaryMap) {
    let l = &lattices()[k % lattices().len()];
    let subs = l.subalgebras();
    let e = quantifier_from_subalgebra(l, &subs[s % subs.len()]).unwrap();
    (l, e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_morgan_and_commutation_symmetry(k in any::<usize>(), x in any::<usize>(), y in any::<usize>()) {
        let l = &lattices()[k % lattices().len()];
        let (x, y) = (x % l.len(), y % l.len());
        prop_assert_eq!(l.ortho(l.join(x, y)), l.meet(l.ortho(x), l.ortho(y)));
        prop_assert_eq!(l.ortho(l.meet(x, y)), l.join(l.ortho(x), l.ortho(y)));
        prop_assert_eq!(l.commutes(x, y), l.commutes(y, x));
    }

    #[test]
    fn exists_preserves_joins_and_forall_meets(k in any::<usize>(), s in any::<usize>()) {
        let (l, e) = monadic(k, s);
        let all = forall_from_exists(l, &e);
        for x in l.elements() {
            for y in l.elements() {
                prop_assert_eq!(e.apply(l.join(x, y)), l.join(e.apply(x), e.apply(y)));
                prop_assert_eq!(all.apply(l.meet(x, y)), l.meet(all.apply(x), all.apply(y)));
            }
        }
    }

    #[test]
    fn ideal_congruences_respect_exists_iff_closed(k in any::<usize>(), s in any::<usize>()) {
        let (l, e) = monadic(k, s);
        for a in l.elements() {
            let ideal = l.down_set(a).clone();
            if let Ok(info) = p_ideal(l, &ideal, &e) {
                let c = congruence_from_ideal(l, &ideal).unwrap();
                prop_assert!(c.is_congruence());
                prop_assert_eq!(c.respects(l, &e), info.closed_under_exists);
            }
        }
    }

    #[test]
    fn central_fixpoints_split_the_algebra(k in any::<usize>(), s in any::<usize>()) {
        let (l, e) = monadic(k, s);
        for c in l.center().ones().filter(|&c| e.apply(c) == c) {
            let split = interval_algebra(l, &e, c).unwrap();
            prop_assert!(split.product_decomposition);
            prop_assert!(split.algebra.report().is_quantifier);
        }
    }
}

#[test]
fn center_elements_decompose() {
    for l in lattices() {
        prop_assert_center(l);
    }
}

fn prop_assert_center(l: &FiniteOl) {
    let center = l.center();
    assert!(l.is_subalgebra(&center));
    for c in center.ones() {
        assert!(l.central_decomposition_is_bijective(c));
        // by enumeration: x -> (x ∧ c, x ∧ c') hits every pair exactly once
        let mut pairs: Vec<(usize, usize)> = l.elements().map(|x| (l.meet(x, c), l.meet(x, l.ortho(c)))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let (lo, hi) = (l.down_set(c).count_ones(..), l.down_set(l.ortho(c)).count_ones(..));
        assert_eq!(pairs.len(), l.len());
        assert_eq!(pairs.len(), lo * hi);
    }
}

#[test]
fn blocks_are_maximal_and_distributive() {
    for l in lattices() {
        let blocks = l.blocks();
        for (a, b) in blocks.iter().enumerate() {
            assert!(l.distributivity_witness(b).is_none());
            for (c, d) in blocks.iter().enumerate() {
                assert!(a == c || !b.is_subset(d));
            }
        }
    }
}

#[test]
fn orthomodular_witnesses() {
    let mut all = lattices().to_vec();
    all.push(FiniteOl::o6());
    for l in &all {
        let flag = l.check_orthomodular();
        assert_eq!(flag.witness.is_some(), !l.is_oml());
        if let Some((x, y)) = flag.witness {
            assert!(l.leq(x, y));
            assert_ne!(l.join(x, l.meet(l.ortho(x), y)), y);
        }
    }
}

#[test]
fn quantifiers_from_subalgebras_pass_q1_to_q5() {
    for l in lattices() {
        for s in l.subalgebras() {
            let e = quantifier_from_subalgebra(l, &s).unwrap();
            assert!(check_quantifier(l, &e).is_quantifier);
        }
    }
}

#[test]
fn lattice_json_round_trip() {
    for l in lattices() {
        let back = parse_lattice(&lattice_to_json(l), DEFAULT_LIMIT).unwrap();
        assert_eq!(&back, l);
    }
}
