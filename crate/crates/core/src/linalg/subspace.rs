use thiserror::Error;

use super::matrix::{inner, is_zero_vec, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector of length {got} in a space of dimension {expected}")]
    BadVector { expected: usize, got: usize },
}

/// A subspace of `T^n`, stored as the reduced row-echelon form of a basis.
///
/// The normal form is unique, so two values are equal exactly when they
/// describe the same subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: &[Vec<T>]) -> Result<Self, SubspaceError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(SubspaceError::BadVector {
                expected: ambient,
                got: v.len(),
            });
        }
        Ok(Self::from_rows_unchecked(ambient, vectors.iter().cloned()))
    }

    fn from_rows_unchecked(ambient: usize, rows: impl IntoIterator<Item = Vec<T>>) -> Self {
        let rows: Vec<Vec<T>> = rows.into_iter().filter(|r| !is_zero_vec(r)).collect();
        let mut m = Matrix::from_rows(ambient, rows);
        let pivots = m.rref_in_place();
        let basis = Matrix::from_fn(pivots.len(), ambient, |r, c| m[(r, c)].clone());
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix<T>) -> Self {
        Self::from_rows_unchecked(m.cols(), m.row_vecs().map(<[T]>::to_vec))
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix<T>) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn unit_vector(ambient: usize, k: usize) -> Vec<T> {
        let mut v = vec![T::zero(); ambient];
        v[k] = T::one();
        v
    }

    /// Span of standard basis vectors.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        Self::from_rows_unchecked(ambient, coords.iter().map(|&k| Self::unit_vector(ambient, k)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis matrix (rows are basis vectors).
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.row_vecs().map(<[T]>::to_vec).collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.ambient != other.ambient {
            return Err(SubspaceError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Reduction of `v` modulo the echelon basis; zero iff `v` lies in the subspace.
    fn residual(&self, v: &[T]) -> Vec<T> {
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (c, b) in self.basis.row(row).iter().enumerate() {
                if !b.is_zero() {
                    let cur = std::mem::replace(&mut r[c], T::zero());
                    r[c] = cur - f.clone() * b.clone();
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[T]) -> bool {
        v.len() == self.ambient && is_zero_vec(&self.residual(v))
    }

    pub fn le(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.basis.row_vecs().all(|v| other.contains(v))
    }

    /// Row space of the stacked bases.
    pub fn join(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_same(other)?;
        if self.le(other) {
            return Ok(other.clone());
        }
        if other.le(self) {
            return Ok(self.clone());
        }
        Ok(Self::from_rows_unchecked(
            self.ambient,
            self.basis.row_vecs().chain(other.basis.row_vecs()).map(<[T]>::to_vec),
        ))
    }

    /// Intersection, from the left nullspace of the stacked bases:
    /// `sum a_k u_k = sum b_l w_l` is a kernel vector of `[U; -W]^T`.
    pub fn meet(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_same(other)?;
        if self.le(other) {
            return Ok(self.clone());
        }
        if other.le(self) {
            return Ok(other.clone());
        }
        let r = self.dim();
        let s = other.dim();
        let n = self.ambient;
        let stacked_t = Matrix::from_fn(n, r + s, |c, k| {
            if k < r {
                self.basis[(k, c)].clone()
            } else {
                -other.basis[(k - r, c)].clone()
            }
        });
        let vectors = stacked_t.nullspace().into_iter().map(|coeffs| {
            let mut v = vec![T::zero(); n];
            for (k, a) in coeffs[..r].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, slot) in v.iter_mut().enumerate() {
                    let b = &self.basis[(k, c)];
                    if !b.is_zero() {
                        *slot = std::mem::replace(slot, T::zero()) + a.clone() * b.clone();
                    }
                }
            }
            v
        });
        Ok(Self::from_rows_unchecked(n, vectors.collect::<Vec<_>>()))
    }

    /// Orthogonal complement for the Hermitian inner product.
    pub fn ortho(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        Self::from_rows_unchecked(self.ambient, self.basis.conj().nullspace())
    }

    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        self.basis
            .row_vecs()
            .all(|u| other.basis.row_vecs().all(|w| inner(u, w).is_zero()))
    }

    /// Orthogonal projector `A (A* A)^{-1} A*` with `A` the basis as columns.
    pub fn projector(&self) -> Matrix<T> {
        if self.is_zero() {
            return Matrix::zeros(self.ambient, self.ambient);
        }
        let a = self.basis.transpose();
        let a_star = self.basis.conj();
        let gram_inv = a_star
            .mul(&a)
            .inverse()
            .expect("Gram matrix of a basis is invertible");
        a.mul(&gram_inv).mul(&a_star)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &Matrix<T>) -> Self {
        assert_eq!(map.cols(), self.ambient);
        Self::from_rows_unchecked(
            map.rows(),
            self.basis.row_vecs().map(|v| map.mul_vec(v)).collect::<Vec<_>>(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gq, gq_i, Gq};
    use num_traits::One;

    fn v(xs: &[i64]) -> Vec<Gq> {
        xs.iter().map(|&x| Gq::from_i64(x)).collect()
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace<Gq> {
        Subspace::span(n, &vs.iter().map(|x| v(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn complement_laws() {
        let a = span(3, &[&[1, 2, 0], &[0, 1, 1]]);
        let o = a.ortho();
        assert_eq!(o.dim(), 1);
        assert!(a.meet(&o).unwrap().is_zero());
        assert!(a.join(&o).unwrap().is_full());
        assert_eq!(o.ortho(), a);
    }

    #[test]
    fn plane_examples() {
        let e1 = span(2, &[&[1, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        assert!(e1.join(&e2).unwrap().is_full());
        let plus = span(2, &[&[1, 1]]);
        let minus = span(2, &[&[1, -1]]);
        assert!(plus.meet(&minus).unwrap().is_zero());
        assert_eq!(plus.ortho(), minus);
    }

    #[test]
    fn ortho_uses_conjugation() {
        // the bilinear complement of (1, i) would be (-i, 1)
        let a = Subspace::span(2, &[vec![Gq::one(), gq_i()]]).unwrap();
        let o = a.ortho();
        assert!(o.contains(&[gq_i(), Gq::one()]));
        assert!(!o.contains(&[-gq_i(), Gq::one()]));
    }

    #[test]
    fn canonical_form_identifies_equal_spans() {
        let a = span(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let b = span(3, &[&[1, 2, 1], &[1, 0, -1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn meet_matches_de_morgan_route() {
        let a = span(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1], &[1, 1, 0, 0]]);
        let b = span(4, &[&[1, 1, 1, 1], &[1, -1, 0, 2]]);
        let direct = a.meet(&b).unwrap();
        let dual = a.ortho().join(&b.ortho()).unwrap().ortho();
        assert_eq!(direct, dual);
    }

    #[test]
    fn projector_is_idempotent_and_selfadjoint() {
        let a = Subspace::span(3, &[vec![gq(1, 1, 0, 1), gq(0, 1, 1, 1), gq(2, 1, 0, 1)]]).unwrap();
        let p = a.projector();
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.adjoint(), p);
        assert_eq!(Subspace::column_space(&p), a);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::<Gq>::full(2);
        let b = Subspace::<Gq>::full(3);
        assert!(matches!(a.join(&b), Err(SubspaceError::DimensionMismatch { .. })));
    }
}
