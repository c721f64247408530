use proptest::prelude::*;
use qmonadic::frames::{check_weak_cylindric_frame, closed_set_lattice, exists_r_map, Orthoframe, PointSet};
use qmonadic::io::{frame_to_json, parse_frame};
use qmonadic::random::{random_monadic_frame, random_orthogonality, seeded};

fn subset(n: usize, mask: u32) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.extend((0..n).filter(|&x| mask >> x & 1 == 1));
    s
}

/// Points of `a × b`, with relation 0 fixing the second coordinate and
/// relation 1 fixing the first; the two relations commute.
fn product_frame(a: usize, b: usize) -> Orthoframe {
    let n = a * b;
    let perp: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let labels = (0..n).map(|p| format!("({},{})", p / b, p % b)).collect();
    let mut f = Orthoframe::new(labels, &perp).unwrap();
    let same = |k: fn(usize, usize) -> usize| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| k(x, b) == k(y, b))
            .collect()
    };
    f.add_relation(&same(|p, b| p % b)).unwrap();
    f.add_relation(&same(|p, b| p / b)).unwrap();
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn biortho_is_a_closure_operator(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = seeded(seed);
        let perp = random_orthogonality(&mut rng, n, 0.5);
        let f = Orthoframe::new((0..n).map(|x| x.to_string()).collect(), &perp).unwrap();
        for mask in 0..1u32 << n {
            let a = subset(n, mask);
            let cl = f.biortho(&a);
            prop_assert!(a.is_subset(&cl));
            prop_assert_eq!(f.biortho(&cl), cl.clone());
            prop_assert_eq!(f.perp_of(&f.biortho(&a)), f.perp_of(&a));
            for bit in 0..n {
                let mut b = a.clone();
                b.insert(bit);
                prop_assert!(cl.is_subset(&f.biortho(&b)));
            }
        }
    }

    #[test]
    fn closed_sets_meet_by_intersection(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = seeded(seed);
        let perp = random_orthogonality(&mut rng, n, 0.5);
        let f = Orthoframe::new((0..n).map(|x| x.to_string()).collect(), &perp).unwrap();
        let c = closed_set_lattice(&f).unwrap();
        let l = &c.lattice;
        prop_assert!(l.is_ortholattice());
        for x in l.elements() {
            prop_assert_eq!(c.set(l.ortho(x)), &f.perp_of(c.set(x)));
            for y in l.elements() {
                let mut both = c.set(x).clone();
                both.intersect_with(c.set(y));
                prop_assert_eq!(c.set(l.meet(x, y)), &both);
            }
        }
    }

    #[test]
    fn frame_json_round_trip(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = seeded(seed);
        if let Some(f) = random_monadic_frame(&mut rng, n, 200) {
            prop_assert_eq!(parse_frame(&frame_to_json(&f)).unwrap(), f);
        }
    }
}

#[test]
fn commuting_relations_give_commuting_quantifiers() {
    for (a, b) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let f = product_frame(a, b);
        let closed = closed_set_lattice(&f).unwrap();
        let e0 = exists_r_map(&f, 0, &closed).unwrap();
        let e1 = exists_r_map(&f, 1, &closed).unwrap();
        assert_eq!(e0.compose(&e1), e1.compose(&e0), "{a}x{b}");
    }
    // squares with the diagonal are weak cylindric frames
    for n in 1..=3 {
        let mut f = product_frame(n, n);
        let diag: Vec<usize> = (0..n).map(|x| x * n + x).collect();
        f.set_diagonal(0, 1, &diag).unwrap();
        f.set_diagonal(1, 0, &diag).unwrap();
        let report = check_weak_cylindric_frame(&f).unwrap();
        assert!(report.frame_holds(), "{n}x{n}: {:?}", report.first_failure());
        assert_eq!(report.quantifiers_commute, Some(true));
    }
}
