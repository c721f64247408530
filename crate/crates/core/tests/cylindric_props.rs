use qmonadic::cylindric::{
    check_cylindric, classical_cyl_set_algebra, substitution_classical, substitution_sasaki, CylindricStructure, Mode,
};
use qmonadic::io::{cylindric_to_json, parse_cylindric, parse_quantifier, quantifier_to_json, DEFAULT_LIMIT};
use qmonadic::quantifier::quantifier_from_subalgebra;
use qmonadic::tensor::{as_cylindric_structure, TensorLayout};
use qmonadic::{FiniteOl, Gq, Scalar, Subspace};

fn structures() -> Vec<(String, CylindricStructure)> {
    let mut out = Vec::new();
    for (ground, dims) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
        out.push((format!("classical {ground}^{dims}"), classical_cyl_set_algebra(ground, dims).unwrap()));
    }
    let layout = TensorLayout::new(vec![2, 2]).unwrap();
    let mut v = vec![Gq::from_i64(0); 4];
    v[layout.index(&[0, 1])] = Gq::from_i64(1);
    v[layout.index(&[1, 0])] = Gq::from_i64(2);
    let s = Subspace::span(4, &[v]).unwrap();
    let closure = as_cylindric_structure(&layout, &[s], 256).unwrap();
    out.push(("tensor 2x2".into(), closure.structure));
    out
}

#[test]
fn sasaki_substitution_preserves_joins() {
    for (name, c) in structures() {
        let l = &c.base;
        assert!(l.is_oml(), "{name}");
        for i in 0..c.dims() {
            for j in 0..c.dims() {
                for x in l.elements() {
                    for y in l.elements() {
                        let f = |z| substitution_sasaki(&c, i, j, z);
                        assert_eq!(f(l.join(x, y)), l.join(f(x), f(y)), "{name}: [{i},{j}] {x} {y}");
                    }
                }
            }
        }
    }
}

#[test]
fn axiom_consequences() {
    for (name, c) in structures() {
        let r = check_cylindric(&c, Mode::Full);
        let l = &c.base;
        let n = c.dims();
        if r.get("C2").unwrap().holds {
            for i in 0..n {
                for j in 0..n {
                    assert!(l.elements().all(|x| c.c(i, c.c(j, x)) == c.c(j, c.c(i, x))), "{name}");
                }
            }
        }
        if r.get("C3").unwrap().holds {
            for i in 0..n {
                assert_eq!(c.d(i, i), l.one());
                for j in 0..n {
                    assert_eq!(c.d(i, j), c.d(j, i));
                }
            }
        }
    }
}

#[test]
fn classical_substitution_agrees_with_sasaki_on_boolean_bases() {
    for (name, c) in structures().into_iter().filter(|(_, c)| c.base.is_boolean()) {
        for i in 0..c.dims() {
            for j in 0..c.dims() {
                for x in c.base.elements() {
                    assert_eq!(substitution_classical(&c, i, j, x), substitution_sasaki(&c, i, j, x), "{name}");
                }
            }
        }
    }
}

#[test]
fn file_round_trips() {
    for (_, c) in structures() {
        assert_eq!(parse_cylindric(&cylindric_to_json(&c), None, DEFAULT_LIMIT).unwrap(), c);
    }
    for l in [FiniteOl::boolean(3), FiniteOl::mo(3)] {
        for s in l.subalgebras() {
            let e = quantifier_from_subalgebra(&l, &s).unwrap();
            let (l2, e2) = parse_quantifier(&quantifier_to_json(&l, &e), None, DEFAULT_LIMIT).unwrap();
            assert_eq!((l2, e2), (l.clone(), e));
        }
    }
}
