//! Exact positive-semidefiniteness via congruence to a diagonal matrix.
//!
//! A Hermitian `X` is reduced by symmetric elimination `X -> E X E*`. The
//! accumulated transform `T` (unit triangular up to pivot order) satisfies
//! `T X T* = D` with `D` diagonal, which certifies `X = T^{-1} D T^{-*}`.
//! On failure the elimination state hands back a vector `v` with `v* X v < 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::{inner, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdCertificate<T> {
    pub transform: Matrix<T>,
    pub diagonal: Vec<BigRational>,
}

impl<T: Scalar> PsdCertificate<T> {
    /// Recomputes `T X T*` and checks it is the recorded nonnegative diagonal.
    pub fn verify(&self, x: &Matrix<T>) -> bool {
        if self.diagonal.iter().any(Signed::is_negative) {
            return false;
        }
        if self.transform.rank() != x.rows() {
            return false;
        }
        let d = self.transform.mul(x).mul(&self.transform.adjoint());
        let expected = Matrix::diag(self.diagonal.iter().cloned().map(T::from_rational).collect());
        d == expected
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdOutcome<T> {
    Psd(PsdCertificate<T>),
    /// `witness* X witness = value < 0`.
    NotPsd { witness: Vec<T>, value: BigRational },
    NotHermitian,
}

impl<T: Scalar> PsdOutcome<T> {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdOutcome::Psd(_))
    }

    pub fn summary(&self) -> PsdSummary {
        match self {
            PsdOutcome::Psd(c) => PsdSummary {
                psd: true,
                rank: Some(c.rank()),
                witness: None,
                value: None,
            },
            PsdOutcome::NotPsd { witness, value } => PsdSummary {
                psd: false,
                rank: None,
                witness: Some(witness.iter().map(Scalar::to_text).collect()),
                value: Some(value.to_string()),
            },
            PsdOutcome::NotHermitian => PsdSummary {
                psd: false,
                rank: None,
                witness: None,
                value: None,
            },
        }
    }
}

/// Serializable view of a [`PsdOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsdSummary {
    pub psd: bool,
    pub rank: Option<usize>,
    pub witness: Option<Vec<String>>,
    pub value: Option<String>,
}

fn quadratic_form<T: Scalar>(x: &Matrix<T>, v: &[T]) -> BigRational {
    inner(v, &x.mul_vec(v)).re()
}

fn witness_from<T: Scalar>(transform: &Matrix<T>, local: &[T]) -> Vec<T> {
    // v = T* local
    transform.adjoint().mul_vec(local)
}

pub fn check_psd<T: Scalar>(x: &Matrix<T>) -> PsdOutcome<T> {
    if !x.is_hermitian() {
        return PsdOutcome::NotHermitian;
    }
    let n = x.rows();
    let mut work = x.clone();
    let mut transform = Matrix::<T>::identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut diagonal = vec![BigRational::zero(); n];

    loop {
        if let Some(&i) = active.iter().find(|&&i| work[(i, i)].re().is_negative()) {
            let mut local = vec![T::zero(); n];
            local[i] = T::one();
            let witness = witness_from(&transform, &local);
            let value = quadratic_form(x, &witness);
            return PsdOutcome::NotPsd { witness, value };
        }
        let Some(pos) = active.iter().position(|&i| work[(i, i)].re().is_positive()) else {
            break;
        };
        let i = active.remove(pos);
        let pivot = work[(i, i)].clone();
        for &j in &active {
            if work[(j, i)].is_zero() {
                continue;
            }
            let f = work[(j, i)].clone() / pivot.clone();
            // row_j -= f row_i, then col_j -= conj(f) col_i
            for c in 0..n {
                let delta = f.clone() * work[(i, c)].clone();
                work[(j, c)] = work[(j, c)].clone() - delta;
                let delta_t = f.clone() * transform[(i, c)].clone();
                transform[(j, c)] = transform[(j, c)].clone() - delta_t;
            }
            let fc = f.conj();
            for r in 0..n {
                let delta = work[(r, i)].clone() * fc.clone();
                work[(r, j)] = work[(r, j)].clone() - delta;
            }
        }
        diagonal[i] = pivot.re();
    }

    // every remaining diagonal entry is zero; any coupling makes X indefinite
    for (a, &i) in active.iter().enumerate() {
        for &j in &active[a + 1..] {
            if work[(i, j)].is_zero() {
                continue;
            }
            let mut local = vec![T::zero(); n];
            local[i] = T::one();
            local[j] = -work[(i, j)].conj();
            let witness = witness_from(&transform, &local);
            let value = quadratic_form(x, &witness);
            return PsdOutcome::NotPsd { witness, value };
        }
    }
    PsdOutcome::Psd(PsdCertificate {
        transform,
        diagonal,
    })
}

/// `a <= b` in the Loewner order.
pub fn loewner_le<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> PsdOutcome<T> {
    check_psd(&b.sub(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gq, Gq};

    fn q(entries: &[i64], n: usize) -> Matrix<Gq> {
        Matrix::from_i64(n, n, entries)
    }

    fn assert_certified(x: &Matrix<Gq>) {
        match check_psd(x) {
            PsdOutcome::Psd(c) => assert!(c.verify(x)),
            other => panic!("expected PSD, got {other:?}"),
        }
    }

    fn assert_refuted(x: &Matrix<Gq>) {
        match check_psd(x) {
            PsdOutcome::NotPsd { witness, value } => {
                assert!(value.is_negative());
                assert_eq!(quadratic_form(x, &witness), value);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn positive_definite_and_singular() {
        assert_certified(&q(&[2, 1, 1, 2], 2));
        assert_certified(&q(&[1, 1, 1, 1], 2));
        assert_certified(&q(&[0, 0, 0, 0], 2));
        assert_certified(&q(&[1, 2, 3, 2, 4, 6, 3, 6, 9], 3));
    }

    #[test]
    fn indefinite_matrices_get_witnesses() {
        assert_refuted(&q(&[1, 2, 2, 1], 2));
        assert_refuted(&q(&[0, 1, 1, 0], 2));
        assert_refuted(&q(&[-1, 0, 0, 0], 2));
        assert_refuted(&q(&[1, 0, 0, 0, 0, 1, 0, 1, 0], 3));
    }

    #[test]
    fn complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let x = Matrix::from_rows(
            2,
            vec![vec![gq(2, 1, 0, 1), gq(0, 1, 1, 1)], vec![gq(0, 1, -1, 1), gq(2, 1, 0, 1)]],
        );
        assert_certified(&x);
        // [[1, 2i], [-2i, 1]] has eigenvalues -1 and 3
        let y = Matrix::from_rows(
            2,
            vec![vec![gq(1, 1, 0, 1), gq(0, 1, 2, 1)], vec![gq(0, 1, -2, 1), gq(1, 1, 0, 1)]],
        );
        assert_refuted(&y);
    }

    #[test]
    fn non_hermitian_is_flagged() {
        assert_eq!(check_psd(&q(&[1, 1, 0, 1], 2)), PsdOutcome::NotHermitian);
    }
}
