//! Subspace lattices of tensor products.
//!
//! Coordinates of `H_1 ⊗ ... ⊗ H_n` are tuples `(i_1, ..., i_n)` in row-major
//! order (the last factor varies fastest), so `e_{i_1} ⊗ ... ⊗ e_{i_n}` is a
//! standard basis vector. Factors are numbered from 0.
//!
//! For a set `F` of factors, `∃_F S = H_F ⊗ S^F` where `S^F` is spanned by the
//! components `v_k` of the vectors of `S` in the expansion
//! `v = Σ_k e_k ⊗ v_k` over the standard basis of `H_F`. Using a basis of `S`
//! instead of all of `S` gives the same span, which is what makes the
//! computation finite.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cylindric::CylindricStructure;
use crate::lattice::{FiniteOl, LatticeError};
use crate::linalg::{Matrix, Subspace, SubspaceError};
use crate::quantifier::UnaryMap;
use crate::scalar::Scalar;

/// Largest ambient dimension accepted by [`TensorLayout::new`].
pub const MAX_AMBIENT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("factor dimensions must be positive")]
    EmptyFactor,
    #[error("ambient dimension {dim} exceeds the limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("factor {factor} out of range for {len} factors")]
    FactorOutOfRange { factor: usize, len: usize },
    #[error("factor {factor} listed twice")]
    RepeatedFactor { factor: usize },
    #[error("subspace lives in dimension {got}, layout needs {expected}")]
    LayoutMismatch { expected: usize, got: usize },
    #[error("factors {0} and {1} have different dimensions")]
    UnequalFactors(usize, usize),
    #[error("needs {needed}, got {got}")]
    Precondition { needed: String, got: String },
    #[error("not an orthonormal basis")]
    NotOrthonormal,
    #[error("closure exceeds {limit} subspaces")]
    ClosureTooLarge { limit: usize },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TensorLayout {
    factors: Vec<usize>,
}

impl TensorLayout {
    pub fn new(factors: Vec<usize>) -> Result<Self, TensorError> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(TensorError::EmptyFactor);
        }
        let dim = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if dim > MAX_AMBIENT {
            return Err(TensorError::TooLarge {
                dim,
                limit: MAX_AMBIENT,
            });
        }
        Ok(TensorLayout { factors })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&t, &d)| acc * d + t)
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// The standard basis vector `e_{t_1} ⊗ ... ⊗ e_{t_n}`.
    pub fn basis_vector<T: Scalar>(&self, tuple: &[usize]) -> Vec<T> {
        let mut v = vec![T::zero(); self.ambient_dim()];
        v[self.index(tuple)] = T::one();
        v
    }

    fn check_factors(&self, set: &[usize]) -> Result<Vec<usize>, TensorError> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(TensorError::RepeatedFactor { factor: w[0] });
            }
        }
        if let Some(&f) = sorted.iter().find(|&&f| f >= self.len()) {
            return Err(TensorError::FactorOutOfRange {
                factor: f,
                len: self.len(),
            });
        }
        Ok(sorted)
    }

    /// Layout of the factors not in `set` (possibly with no factors, dimension 1).
    pub fn without(&self, set: &[usize]) -> TensorLayout {
        TensorLayout {
            factors: (0..self.len())
                .filter(|f| !set.contains(f))
                .map(|f| self.factors[f])
                .collect(),
        }
    }

    pub fn only(&self, set: &[usize]) -> TensorLayout {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        TensorLayout {
            factors: sorted.iter().map(|&f| self.factors[f]).collect(),
        }
    }

    /// For each ambient index, its index in the `set` part and in the rest.
    fn split(&self, set: &[usize]) -> Vec<(usize, usize)> {
        let inner = self.only(set);
        let outer = self.without(set);
        (0..self.ambient_dim())
            .map(|idx| {
                let t = self.tuple(idx);
                let (mut a, mut b) = (Vec::new(), Vec::new());
                for (f, &x) in t.iter().enumerate() {
                    if set.contains(&f) {
                        a.push(x);
                    } else {
                        b.push(x);
                    }
                }
                (inner.index(&a), outer.index(&b))
            })
            .collect()
    }

    fn check_subspace<T: Scalar>(&self, s: &Subspace<T>) -> Result<(), TensorError> {
        if s.ambient_dim() != self.ambient_dim() {
            return Err(TensorError::LayoutMismatch {
                expected: self.ambient_dim(),
                got: s.ambient_dim(),
            });
        }
        Ok(())
    }

    /// The operator acting as `u` on factor `i` and as the identity elsewhere.
    pub fn on_factor<T: Scalar>(&self, i: usize, u: &Matrix<T>) -> Result<Matrix<T>, TensorError> {
        self.check_factors(&[i])?;
        if u.rows() != self.factors[i] || u.cols() != self.factors[i] {
            return Err(TensorError::LayoutMismatch {
                expected: self.factors[i],
                got: u.rows(),
            });
        }
        let split = self.split(&[i]);
        let n = self.ambient_dim();
        Ok(Matrix::from_fn(n, n, |r, c| {
            let (kr, rr) = split[r];
            let (kc, rc) = split[c];
            if rr == rc {
                u[(kr, kc)].clone()
            } else {
                T::zero()
            }
        }))
    }
}

/// Span of `a ⊗ b` over basis vectors of `a` and `b`.
pub fn tensor_subspace<T: Scalar>(a: &Subspace<T>, b: &Subspace<T>) -> Result<Subspace<T>, TensorError> {
    let dim = a.ambient_dim() * b.ambient_dim();
    if dim > MAX_AMBIENT {
        return Err(TensorError::TooLarge {
            dim,
            limit: MAX_AMBIENT,
        });
    }
    let vectors: Vec<Vec<T>> = a
        .basis_vectors()
        .iter()
        .flat_map(|u| {
            b.basis_vectors()
                .into_iter()
                .map(move |w| u.iter().flat_map(|x| w.iter().map(move |y| x.clone() * y.clone())).collect())
        })
        .collect();
    Ok(Subspace::span(dim, &vectors)?)
}

/// `S^F`: the components of `S` along the factors in `set`.
pub fn component_span_set<T: Scalar>(
    layout: &TensorLayout,
    set: &[usize],
    s: &Subspace<T>,
) -> Result<Subspace<T>, TensorError> {
    layout.check_subspace(s)?;
    let set = layout.check_factors(set)?;
    let split = layout.split(&set);
    let inner = layout.only(&set).ambient_dim();
    let outer = layout.without(&set).ambient_dim();
    let mut vectors = Vec::new();
    for v in s.basis_vectors() {
        let mut comps = vec![vec![T::zero(); outer]; inner];
        for (idx, x) in v.into_iter().enumerate() {
            let (k, r) = split[idx];
            comps[k][r] = x;
        }
        vectors.extend(comps);
    }
    Ok(Subspace::span(outer, &vectors)?)
}

/// `H_F ⊗ B` with `B` in the space of the remaining factors.
pub fn embed_set<T: Scalar>(
    layout: &TensorLayout,
    set: &[usize],
    b: &Subspace<T>,
) -> Result<Subspace<T>, TensorError> {
    let set = layout.check_factors(set)?;
    let outer = layout.without(&set).ambient_dim();
    if b.ambient_dim() != outer {
        return Err(TensorError::LayoutMismatch {
            expected: outer,
            got: b.ambient_dim(),
        });
    }
    let split = layout.split(&set);
    let inner = layout.only(&set).ambient_dim();
    let n = layout.ambient_dim();
    let mut vectors = Vec::new();
    for w in b.basis_vectors() {
        for k in 0..inner {
            let v = (0..n)
                .map(|idx| {
                    let (kk, r) = split[idx];
                    if kk == k {
                        w[r].clone()
                    } else {
                        T::zero()
                    }
                })
                .collect();
            vectors.push(v);
        }
    }
    Ok(Subspace::span(n, &vectors)?)
}

pub fn exists_set<T: Scalar>(
    layout: &TensorLayout,
    set: &[usize],
    s: &Subspace<T>,
) -> Result<Subspace<T>, TensorError> {
    embed_set(layout, set, &component_span_set(layout, set, s)?)
}

pub fn component_span<T: Scalar>(layout: &TensorLayout, i: usize, s: &Subspace<T>) -> Result<Subspace<T>, TensorError> {
    component_span_set(layout, &[i], s)
}

/// `H_i ⊗ B` (the embedding `α`).
pub fn embed_alpha<T: Scalar>(layout: &TensorLayout, i: usize, b: &Subspace<T>) -> Result<Subspace<T>, TensorError> {
    embed_set(layout, &[i], b)
}

/// `∃_{H_i} S = H_i ⊗ S^{H_i}`
pub fn exists_factor<T: Scalar>(layout: &TensorLayout, i: usize, s: &Subspace<T>) -> Result<Subspace<T>, TensorError> {
    exists_set(layout, &[i], s)
}

/// `∀_{H_i} S = (∃_{H_i} S')'`
pub fn forall_factor<T: Scalar>(layout: &TensorLayout, i: usize, s: &Subspace<T>) -> Result<Subspace<T>, TensorError> {
    Ok(exists_factor(layout, i, &s.ortho())?.ortho())
}

/// `H_i ⊗ S_H` with `S_H = {w : e_k ⊗ w ∈ S for every k}`, computed as an
/// intersection of preimages without using complements.
pub fn forall_factor_direct<T: Scalar>(
    layout: &TensorLayout,
    i: usize,
    s: &Subspace<T>,
) -> Result<Subspace<T>, TensorError> {
    layout.check_subspace(s)?;
    layout.check_factors(&[i])?;
    let split = layout.split(&[i]);
    let outer = layout.without(&[i]).ambient_dim();
    let n = layout.ambient_dim();
    let r = s.dim();
    let mut result = Subspace::full(outer);
    for k in 0..layout.factors()[i] {
        // columns: w (outer) then coefficients a (r); rows: ambient coordinates
        // (e_k ⊗ w) - Σ a_l s_l = 0
        let system = Matrix::from_fn(n, outer + r, |idx, c| {
            if c < outer {
                let (kk, rr) = split[idx];
                if kk == k && rr == c {
                    T::one()
                } else {
                    T::zero()
                }
            } else {
                -s.basis()[(c - outer, idx)].clone()
            }
        });
        let pre: Vec<Vec<T>> = system.nullspace().into_iter().map(|x| x[..outer].to_vec()).collect();
        result = result.meet(&Subspace::span(outer, &pre)?)?;
    }
    embed_alpha(layout, i, &result)
}

/// `S^{H_i}` computed with the orthonormal basis given by the columns of `onb`.
pub fn component_span_onb<T: Scalar>(
    layout: &TensorLayout,
    i: usize,
    s: &Subspace<T>,
    onb: &Matrix<T>,
) -> Result<Subspace<T>, TensorError> {
    layout.check_subspace(s)?;
    layout.check_factors(&[i])?;
    let d = layout.factors()[i];
    if onb.rows() != d || onb.cols() != d {
        return Err(TensorError::LayoutMismatch {
            expected: d,
            got: onb.rows(),
        });
    }
    if onb.adjoint().mul(onb) != Matrix::identity(d) {
        return Err(TensorError::NotOrthonormal);
    }
    let split = layout.split(&[i]);
    let outer = layout.without(&[i]).ambient_dim();
    let mut vectors = Vec::new();
    for v in s.basis_vectors() {
        for k in 0..d {
            let mut w = vec![T::zero(); outer];
            for (idx, x) in v.iter().enumerate() {
                let (m, r) = split[idx];
                let coeff = onb[(m, k)].conj();
                if !coeff.is_zero() && !x.is_zero() {
                    w[r] = std::mem::replace(&mut w[r], T::zero()) + coeff * x.clone();
                }
            }
            vectors.push(w);
        }
    }
    Ok(Subspace::span(outer, &vectors)?)
}

/// `∃_{H_i}` with the components taken along the basis `onb`.
pub fn exists_factor_onb<T: Scalar>(
    layout: &TensorLayout,
    i: usize,
    s: &Subspace<T>,
    onb: &Matrix<T>,
) -> Result<Subspace<T>, TensorError> {
    embed_alpha(layout, i, &component_span_onb(layout, i, s, onb)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationCheck<T> {
    /// `∃_i ∃_j S`
    pub ij: Subspace<T>,
    /// `∃_j ∃_i S`
    pub ji: Subspace<T>,
    /// `∃_{i,j} S`
    pub grouped: Subspace<T>,
}

impl<T: Scalar> CommutationCheck<T> {
    pub fn holds(&self) -> bool {
        self.ij == self.ji && self.ji == self.grouped
    }
}

pub fn check_commutation<T: Scalar>(
    layout: &TensorLayout,
    i: usize,
    j: usize,
    s: &Subspace<T>,
) -> Result<CommutationCheck<T>, TensorError> {
    if i == j {
        return Err(TensorError::Precondition {
            needed: "two distinct factors".into(),
            got: format!("{i} twice"),
        });
    }
    Ok(CommutationCheck {
        ij: exists_factor(layout, i, &exists_factor(layout, j, s)?)?,
        ji: exists_factor(layout, j, &exists_factor(layout, i, s)?)?,
        grouped: exists_set(layout, &[i, j], s)?,
    })
}

fn equal_dims(layout: &TensorLayout, set: &[usize]) -> Result<(), TensorError> {
    if let Some(&first) = set.first() {
        if let Some(&other) = set.iter().find(|&&f| layout.factors()[f] != layout.factors()[first]) {
            return Err(TensorError::UnequalFactors(first, other));
        }
    }
    Ok(())
}

/// `D_F`: tensors whose coordinates are invariant under permuting the positions in `F`.
/// Spanned by the sums over orbits of standard basis vectors.
pub fn diagonal<T: Scalar>(layout: &TensorLayout, set: &[usize]) -> Result<Subspace<T>, TensorError> {
    let set = layout.check_factors(set)?;
    equal_dims(layout, &set)?;
    let n = layout.ambient_dim();
    let mut orbits: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut order = Vec::new();
    for idx in 0..n {
        let mut t = layout.tuple(idx);
        let mut vals: Vec<usize> = set.iter().map(|&f| t[f]).collect();
        vals.sort_unstable();
        for (&f, v) in set.iter().zip(vals) {
            t[f] = v;
        }
        orbits
            .entry(t.clone())
            .or_insert_with(|| {
                order.push(t);
                Vec::new()
            })
            .push(idx);
    }
    let vectors: Vec<Vec<T>> = order
        .iter()
        .map(|key| {
            let mut v = vec![T::zero(); n];
            for &idx in &orbits[key] {
                v[idx] = T::one();
            }
            v
        })
        .collect();
    Ok(Subspace::span(n, &vectors)?)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// `C(d + |F| - 1, |F|)` times the dimensions of the other factors.
pub fn diagonal_rank(layout: &TensorLayout, set: &[usize]) -> Result<usize, TensorError> {
    let set = layout.check_factors(set)?;
    equal_dims(layout, &set)?;
    let rest = layout.without(&set).ambient_dim();
    Ok(match set.first() {
        None => rest,
        Some(&f) => binomial(layout.factors()[f] + set.len() - 1, set.len()) * rest,
    })
}

fn distinct(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `D_ij ∧ D_jk = D_ijk`
pub fn check_diagonal_meet<T: Scalar>(layout: &TensorLayout, i: usize, j: usize, k: usize) -> Result<bool, TensorError> {
    let dij: Subspace<T> = diagonal(layout, &distinct(&[i, j]))?;
    let djk = diagonal(layout, &distinct(&[j, k]))?;
    let dijk = diagonal(layout, &distinct(&[i, j, k]))?;
    Ok(dij.meet(&djk)? == dijk)
}

/// `D_ik = ∃_j (D_ij ∧ D_jk)` for `j` distinct from `i` and `k`.
pub fn check_diagonal_composition<T: Scalar>(
    layout: &TensorLayout,
    i: usize,
    j: usize,
    k: usize,
) -> Result<bool, TensorError> {
    if j == i || j == k {
        return Err(TensorError::Precondition {
            needed: "j distinct from i and k".into(),
            got: format!("({i}, {j}, {k})"),
        });
    }
    let dij: Subspace<T> = diagonal(layout, &distinct(&[i, j]))?;
    let djk = diagonal(layout, &distinct(&[j, k]))?;
    let dik = diagonal(layout, &distinct(&[i, k]))?;
    Ok(exists_factor(layout, j, &dij.meet(&djk)?)? == dik)
}

/// The two terms of C5 for `S = ⟨e_0 ⊗ e_1 + e_1 ⊗ e_0⟩` in `H ⊗ H`, quantifying factor 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C5Witness<T> {
    pub dim: usize,
    pub s: Subspace<T>,
    /// `∃_0(D_01 ∧ S)`
    pub left: Subspace<T>,
    /// `∃_0(D_01 ∧ S')`
    pub right: Subspace<T>,
    pub meet: Subspace<T>,
    /// `H ⊗ ⟨e_0⟩`
    pub target: Subspace<T>,
}

impl<T: Scalar> C5Witness<T> {
    pub fn meet_contains_target(&self) -> bool {
        self.target.le(&self.meet)
    }
}

pub fn c5_counterexample<T: Scalar>(dim: usize) -> Result<C5Witness<T>, TensorError> {
    if dim < 3 {
        return Err(TensorError::Precondition {
            needed: "dimension at least 3".into(),
            got: dim.to_string(),
        });
    }
    let layout = TensorLayout::new(vec![dim, dim])?;
    let mut v = layout.basis_vector::<T>(&[0, 1]);
    v[layout.index(&[1, 0])] = T::one();
    let s = Subspace::span(layout.ambient_dim(), &[v])?;
    let d = diagonal::<T>(&layout, &[0, 1])?;
    let left = exists_factor(&layout, 0, &d.meet(&s)?)?;
    let right = exists_factor(&layout, 0, &d.meet(&s.ortho())?)?;
    let meet = left.meet(&right)?;
    let target = embed_alpha(&layout, 0, &Subspace::coordinate(dim, &[0]))?;
    Ok(C5Witness {
        dim,
        s,
        left,
        right,
        meet,
        target,
    })
}

/// A finite sublattice of subspaces closed under the cylindric operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorCylindric<T> {
    pub layout: TensorLayout,
    /// Subspace for each element of `structure.base`.
    pub elements: Vec<Subspace<T>>,
    pub structure: CylindricStructure,
}

impl<T: Scalar> TensorCylindric<T> {
    pub fn index_of(&self, s: &Subspace<T>) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }
}

/// Closes the generators, `0`, the full space and all diagonals `D_ij` under
/// meet, join, complement and every `∃_i`.
pub fn as_cylindric_structure<T: Scalar>(
    layout: &TensorLayout,
    generators: &[Subspace<T>],
    limit: usize,
) -> Result<TensorCylindric<T>, TensorError> {
    let n = layout.len();
    equal_dims(layout, &(0..n).collect::<Vec<_>>())?;
    for g in generators {
        layout.check_subspace(g)?;
    }
    let amb = layout.ambient_dim();
    let mut elements: Vec<Subspace<T>> = Vec::new();
    let mut index: HashMap<Subspace<T>, usize> = HashMap::new();
    let mut queue: Vec<Subspace<T>> = vec![Subspace::zero(amb), Subspace::full(amb)];
    for i in 0..n {
        for j in i + 1..n {
            queue.push(diagonal(layout, &[i, j])?);
        }
    }
    queue.extend(generators.iter().cloned());
    let mut cursor = 0;
    loop {
        for s in queue.drain(..) {
            if !index.contains_key(&s) {
                if elements.len() >= limit {
                    return Err(TensorError::ClosureTooLarge { limit });
                }
                index.insert(s.clone(), elements.len());
                elements.push(s);
            }
        }
        if cursor == elements.len() {
            break;
        }
        let x = elements[cursor].clone();
        queue.push(x.ortho());
        for i in 0..n {
            queue.push(exists_factor(layout, i, &x)?);
        }
        for y in &elements[..=cursor] {
            queue.push(x.meet(y)?);
            queue.push(x.join(y)?);
        }
        cursor += 1;
    }

    let labels = elements.iter().enumerate().map(|(k, s)| format!("s{k}:{}", s.dim())).collect();
    let ortho = elements.iter().map(|s| index[&s.ortho()]).collect();
    let base = FiniteOl::from_order_fn(labels, |a, b| elements[a].le(&elements[b]), ortho, limit)?;
    let cyl = (0..n)
        .map(|i| {
            elements
                .iter()
                .map(|s| Ok(index[&exists_factor(layout, i, s)?]))
                .collect::<Result<Vec<_>, TensorError>>()
                .map(UnaryMap)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let diag = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Ok(index[&diagonal(layout, &distinct(&[i, j]))?]))
                .collect::<Result<Vec<_>, TensorError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let structure = CylindricStructure::new(base, cyl, diag).expect("tables built from the closure");
    Ok(TensorCylindric {
        layout: layout.clone(),
        elements,
        structure,
    })
}
