//! Cylindric structures: a family of quantifiers `c_i` with diagonal elements
//! `d_ij` on a finite ortholattice.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::FiniteOl;
use crate::quantifier::{check_quantifier, UnaryMap};
use crate::report::AxiomCheck;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CylindricError {
    #[error("cylindrification {index} has {got} entries for {expected} elements")]
    MapLength { index: usize, expected: usize, got: usize },
    #[error("diagonal table must be {dims}×{dims}")]
    DiagonalShape { dims: usize },
    #[error("index {index} out of range for {len} elements")]
    OutOfRange { index: usize, len: usize },
    #[error("{size} points exceed the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("ground set must be nonempty")]
    EmptyGround,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// C1–C4
    Weak,
    /// C1–C5
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylindricStructure {
    pub base: FiniteOl,
    /// `c_i` for `i` in `0..dims`.
    pub cyl: Vec<UnaryMap>,
    /// `diag[i][j]` is the element `d_ij`.
    pub diag: Vec<Vec<usize>>,
}

impl CylindricStructure {
    pub fn new(base: FiniteOl, cyl: Vec<UnaryMap>, diag: Vec<Vec<usize>>) -> Result<Self, CylindricError> {
        let n = base.len();
        let dims = cyl.len();
        for (index, c) in cyl.iter().enumerate() {
            if c.0.len() != n {
                return Err(CylindricError::MapLength {
                    index,
                    expected: n,
                    got: c.0.len(),
                });
            }
            if let Some(&bad) = c.0.iter().find(|&&y| y >= n) {
                return Err(CylindricError::OutOfRange { index: bad, len: n });
            }
        }
        if diag.len() != dims || diag.iter().any(|row| row.len() != dims) {
            return Err(CylindricError::DiagonalShape { dims });
        }
        if let Some(&bad) = diag.iter().flatten().find(|&&d| d >= n) {
            return Err(CylindricError::OutOfRange { index: bad, len: n });
        }
        Ok(CylindricStructure { base, cyl, diag })
    }

    pub fn dims(&self) -> usize {
        self.cyl.len()
    }

    pub fn c(&self, i: usize, x: usize) -> usize {
        self.cyl[i].apply(x)
    }

    pub fn d(&self, i: usize, j: usize) -> usize {
        self.diag[i][j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylindricReport {
    pub mode: Mode,
    /// C1 through C4, then C5 in full mode.
    pub checks: Vec<AxiomCheck>,
}

impl CylindricReport {
    pub fn weak_valid(&self) -> bool {
        self.checks.iter().take(4).all(|c| c.holds)
    }

    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        crate::report::find(&self.checks, name)
    }
}

/// Checks the axioms exhaustively. Witnesses list indices first, then elements:
/// C1 `[i, ...]` (the failing quantifier axiom's witness), C2 `[i, j, x]`,
/// C3 `[i, j]`, C4 `[i, j, k]`, C5 `[i, j, x]`.
pub fn check_cylindric(c: &CylindricStructure, mode: Mode) -> CylindricReport {
    let l = &c.base;
    let n = c.dims();

    let c1 = (0..n).find_map(|i| {
        let r = check_quantifier(l, &c.cyl[i]);
        r.checks[..5].iter().find(|a| !a.holds).map(|a| {
            let mut w = vec![i];
            w.extend(a.witness.clone().unwrap_or_default());
            w
        })
    });

    let c2 = (0..n).find_map(|i| {
        (i + 1..n).find_map(|j| {
            l.elements()
                .find(|&x| c.c(i, c.c(j, x)) != c.c(j, c.c(i, x)))
                .map(|x| vec![i, j, x])
        })
    });

    let c3 = (0..n).find_map(|i| {
        if c.d(i, i) != l.one() {
            return Some(vec![i, i]);
        }
        (0..n).find(|&j| c.d(i, j) != c.d(j, i)).map(|j| vec![i, j])
    });

    let c4 = (0..n).find_map(|i| {
        (0..n).find_map(|k| {
            (0..n)
                .filter(|&j| j != i && j != k)
                .find(|&j| c.d(i, k) != c.c(j, l.meet(c.d(i, j), c.d(j, k))))
                .map(|j| vec![i, j, k])
        })
    });

    let mut checks = vec![
        AxiomCheck::new("C1", c1),
        AxiomCheck::new("C2", c2),
        AxiomCheck::new("C3", c3),
        AxiomCheck::new("C4", c4),
    ];
    if mode == Mode::Full {
        let c5 = (0..n).find_map(|i| {
            (0..n).filter(|&j| j != i).find_map(|j| {
                l.elements()
                    .find(|&x| c5_term(c, i, j, x) != l.zero())
                    .map(|x| vec![i, j, x])
            })
        });
        checks.push(AxiomCheck::new("C5", c5));
    }
    CylindricReport { mode, checks }
}

/// `c_i(d_ij ∧ x) ∧ c_i(d_ij ∧ x')`
pub fn c5_term(c: &CylindricStructure, i: usize, j: usize, x: usize) -> usize {
    let l = &c.base;
    let d = c.d(i, j);
    l.meet(c.c(i, l.meet(d, x)), c.c(i, l.meet(d, l.ortho(x))))
}

/// `S^i_j x = c_i(d_ij ∧ x)`, and the identity when `i = j`.
pub fn substitution_classical(c: &CylindricStructure, i: usize, j: usize, x: usize) -> usize {
    if i == j {
        return x;
    }
    c.c(i, c.base.meet(c.d(i, j), x))
}

/// `c_i(d_ij ·s x) = c_i(d_ij ∧ (d_ij' ∨ x))`, and the identity when `i = j`.
pub fn substitution_sasaki(c: &CylindricStructure, i: usize, j: usize, x: usize) -> usize {
    if i == j {
        return x;
    }
    c.c(i, c.base.sasaki_product(c.d(i, j), x))
}

/// A failure of `f` to preserve `0`, `1`, `'`, `∧` or `∨`, as
/// `(operation, arguments)`.
pub fn boolean_endomorphism_witness(
    l: &FiniteOl,
    f: impl Fn(usize) -> usize,
) -> Option<(&'static str, Vec<usize>)> {
    if f(l.zero()) != l.zero() {
        return Some(("zero", vec![]));
    }
    if f(l.one()) != l.one() {
        return Some(("one", vec![]));
    }
    for x in l.elements() {
        if f(l.ortho(x)) != l.ortho(f(x)) {
            return Some(("ortho", vec![x]));
        }
        for y in l.elements() {
            if f(l.meet(x, y)) != l.meet(f(x), f(y)) {
                return Some(("meet", vec![x, y]));
            }
            if f(l.join(x, y)) != l.join(f(x), f(y)) {
                return Some(("join", vec![x, y]));
            }
        }
    }
    None
}

/// First pair among `sample` whose join `f` does not preserve.
pub fn join_preservation_witness(
    l: &FiniteOl,
    sample: &[usize],
    f: impl Fn(usize) -> usize,
) -> Option<(usize, usize)> {
    sample.iter().find_map(|&x| {
        sample
            .iter()
            .find(|&&y| f(l.join(x, y)) != l.join(f(x), f(y)))
            .map(|&y| (x, y))
    })
}

/// Largest number of points accepted by [`ClassicalCylSetAlgebra::new`].
pub const CLASSICAL_POINT_LIMIT: usize = 9;

/// All subsets of `X^I`, with `c_i` relaxing coordinate `i` and
/// `d_ij = {f : f(i) = f(j)}`.
///
/// A point `f` is numbered in base `|X|` with `f(0)` the most significant digit;
/// a subset is the element whose bitmask has the bits of its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCylSetAlgebra {
    pub ground: usize,
    pub dims: usize,
    pub structure: CylindricStructure,
}

impl ClassicalCylSetAlgebra {
    pub fn new(ground: usize, dims: usize) -> Result<Self, CylindricError> {
        if ground == 0 {
            return Err(CylindricError::EmptyGround);
        }
        let points = (0..dims).try_fold(1usize, |acc, _| acc.checked_mul(ground));
        let points = match points {
            Some(p) if p <= CLASSICAL_POINT_LIMIT => p,
            _ => {
                return Err(CylindricError::TooLarge {
                    size: points.unwrap_or(usize::MAX),
                    limit: CLASSICAL_POINT_LIMIT,
                })
            }
        };
        let base = FiniteOl::boolean(points as u32);
        let coords = |p: usize| -> Vec<usize> {
            let mut out = vec![0; dims];
            let mut rest = p;
            for slot in out.iter_mut().rev() {
                *slot = rest % ground;
                rest /= ground;
            }
            out
        };
        let pts: Vec<Vec<usize>> = (0..points).map(coords).collect();
        let cyl = (0..dims)
            .map(|i| {
                UnaryMap::from_fn(&base, |set| {
                    let mut out = 0usize;
                    for g in 0..points {
                        let hit = (0..points).any(|f| {
                            set >> f & 1 == 1 && (0..dims).all(|k| k == i || pts[f][k] == pts[g][k])
                        });
                        if hit {
                            out |= 1 << g;
                        }
                    }
                    out
                })
            })
            .collect();
        let diag = (0..dims)
            .map(|i| {
                (0..dims)
                    .map(|j| (0..points).filter(|&f| pts[f][i] == pts[f][j]).fold(0, |acc, f| acc | 1 << f))
                    .collect()
            })
            .collect();
        let structure = CylindricStructure::new(base, cyl, diag)?;
        Ok(ClassicalCylSetAlgebra {
            ground,
            dims,
            structure,
        })
    }

    pub fn point_index(&self, f: &[usize]) -> usize {
        f.iter().fold(0, |acc, &x| acc * self.ground + x)
    }

    /// The element for a set of points.
    pub fn subset(&self, points: &[&[usize]]) -> usize {
        points.iter().fold(0, |acc, f| acc | 1 << self.point_index(f))
    }
}

pub fn classical_cyl_set_algebra(ground: usize, dims: usize) -> Result<CylindricStructure, CylindricError> {
    ClassicalCylSetAlgebra::new(ground, dims).map(|a| a.structure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_classical_algebra() {
        let a = ClassicalCylSetAlgebra::new(2, 2).unwrap();
        let c = &a.structure;
        assert_eq!(c.base.len(), 16);
        assert_eq!(c.d(0, 1), a.subset(&[&[0, 0], &[1, 1]]));
        assert_eq!(c.c(0, a.subset(&[&[0, 1]])), a.subset(&[&[0, 1], &[1, 1]]));
        assert_eq!(c.c(1, 0), 0);
        let r = check_cylindric(c, Mode::Full);
        assert!(r.valid(), "{r:?}");
    }

    #[test]
    fn classical_substitution_examples() {
        let a = ClassicalCylSetAlgebra::new(2, 2).unwrap();
        let c = &a.structure;
        assert_eq!(substitution_classical(c, 0, 1, a.subset(&[&[0, 1]])), 0);
        assert_eq!(
            substitution_classical(c, 0, 1, a.subset(&[&[1, 1]])),
            a.subset(&[&[0, 1], &[1, 1]])
        );
        for x in c.base.elements() {
            assert_eq!(substitution_classical(c, 1, 1, x), x);
            assert_eq!(substitution_sasaki(c, 0, 1, x), substitution_classical(c, 0, 1, x));
        }
        assert_eq!(substitution_sasaki(c, 0, 1, c.base.one()), c.c(0, c.d(0, 1)));
        assert!(boolean_endomorphism_witness(&c.base, |x| substitution_classical(c, 0, 1, x)).is_none());
    }

    #[test]
    fn one_dimensional_structure_is_vacuous() {
        let l = FiniteOl::mo(2);
        let c = CylindricStructure::new(l.clone(), vec![UnaryMap::identity(&l)], vec![vec![l.one()]]).unwrap();
        assert!(check_cylindric(&c, Mode::Full).valid());
    }

    #[test]
    fn broken_diagonal_is_reported() {
        let a = ClassicalCylSetAlgebra::new(2, 2).unwrap();
        let mut c = a.structure.clone();
        c.diag[0][1] = 0;
        let r = check_cylindric(&c, Mode::Weak);
        assert_eq!(r.get("C3").unwrap().witness, Some(vec![0, 1]));
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(ClassicalCylSetAlgebra::new(2, 4), Err(CylindricError::TooLarge { .. })));
        assert_eq!(ClassicalCylSetAlgebra::new(0, 2).unwrap_err(), CylindricError::EmptyGround);
    }
}
