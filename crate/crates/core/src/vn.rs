//! Finite-dimensional *-algebras of matrices: commutants, projection
//! quantifiers, trace-preserving conditional expectations and range projections.
//!
//! The trace is the unnormalized matrix trace and the inner product on
//! matrices is `⟨a, b⟩ = tr(a* b)`.

use num_rational::BigRational;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{check_psd, inner, Matrix, PsdOutcome, Subspace};
use crate::scalar::Scalar;

/// Largest matrix size accepted (algebras live in a space of dimension `d²`).
pub const MAX_MATRIX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VnError {
    #[error("matrix size {got} does not match {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix size {dim} exceeds the limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix is not a projection")]
    NotAProjection,
    #[error("matrix is not positive semidefinite")]
    NotPositive,
    #[error("matrix does not belong to the algebra")]
    NotInAlgebra,
    #[error("span is not closed under products and adjoints")]
    NotAnAlgebra,
    #[error("algebras are not nested as required: {0}")]
    Inclusion(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAlgebra<T> {
    dim: usize,
    /// Vectorized span in canonical form.
    span: Subspace<T>,
}

fn vectorize<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    m.vectorize()
}

pub fn is_projection<T: Scalar>(p: &Matrix<T>) -> bool {
    p.is_square() && p.is_hermitian() && p.mul(p) == *p
}

/// `p <= q` for projections: `q p = p`.
pub fn projection_le<T: Scalar>(p: &Matrix<T>, q: &Matrix<T>) -> bool {
    q.mul(p) == *p
}

impl<T: Scalar> StarAlgebra<T> {
    fn check_dim(dim: usize) -> Result<(), VnError> {
        if dim > MAX_MATRIX_DIM {
            return Err(VnError::TooLarge {
                dim,
                limit: MAX_MATRIX_DIM,
            });
        }
        Ok(())
    }

    fn from_span_unchecked(dim: usize, span: Subspace<T>) -> Self {
        StarAlgebra { dim, span }
    }

    /// Validates that the span of `basis` contains the identity and is closed
    /// under products and adjoints.
    pub fn from_basis(dim: usize, basis: &[Matrix<T>]) -> Result<Self, VnError> {
        Self::check_dim(dim)?;
        for m in basis {
            if m.rows() != dim || m.cols() != dim {
                return Err(VnError::DimensionMismatch {
                    expected: dim,
                    got: m.rows(),
                });
            }
        }
        let span = Subspace::span(dim * dim, &basis.iter().map(vectorize).collect::<Vec<_>>())
            .expect("vectors of length d²");
        let alg = Self::from_span_unchecked(dim, span);
        if !alg.is_closed() {
            return Err(VnError::NotAnAlgebra);
        }
        Ok(alg)
    }

    fn is_closed(&self) -> bool {
        let basis = self.basis();
        self.contains(&Matrix::identity(self.dim))
            && basis.iter().all(|a| {
                self.contains(&a.adjoint()) && basis.iter().all(|b| self.contains(&a.mul(b)))
            })
    }

    pub fn scalars(dim: usize) -> Result<Self, VnError> {
        Self::from_basis(dim, &[Matrix::identity(dim)])
    }

    pub fn full(dim: usize) -> Result<Self, VnError> {
        Self::check_dim(dim)?;
        Ok(Self::from_span_unchecked(dim, Subspace::full(dim * dim)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Linear dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> Vec<Matrix<T>> {
        self.span
            .basis_vectors()
            .into_iter()
            .map(|v| Matrix::from_vector(self.dim, self.dim, v))
            .collect()
    }

    pub fn span(&self) -> &Subspace<T> {
        &self.span
    }

    pub fn contains(&self, x: &Matrix<T>) -> bool {
        x.rows() == self.dim && x.cols() == self.dim && self.span.contains(&vectorize(x))
    }

    pub fn le(&self, other: &Self) -> bool {
        self.span.le(&other.span)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, VnError> {
        if self.dim != other.dim {
            return Err(VnError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let span = self.span.meet(&other.span).expect("same ambient");
        Ok(Self::from_span_unchecked(self.dim, span))
    }

    /// Matrices commuting with every element.
    pub fn commutant(&self) -> Self {
        let d = self.dim;
        let basis = self.basis();
        // column (a, b) holds the entries of [E_ab, m] for every basis m, stacked
        let rows = basis.len() * d * d;
        let mut system = Matrix::zeros(rows.max(1), d * d);
        for a in 0..d {
            for b in 0..d {
                let mut e = Matrix::zeros(d, d);
                e[(a, b)] = T::one();
                for (k, m) in basis.iter().enumerate() {
                    let c = e.commutator(m);
                    for (t, x) in c.vectorize().into_iter().enumerate() {
                        system[(k * d * d + t, a * d + b)] = x;
                    }
                }
            }
        }
        let span = Subspace::span(d * d, &system.nullspace()).expect("vectors of length d²");
        Self::from_span_unchecked(d, span)
    }

    pub fn center(&self) -> Self {
        self.intersection(&self.commutant()).expect("same size")
    }

    /// The trace-orthogonal projection of `x` onto the algebra.
    pub fn expectation(&self, x: &Matrix<T>) -> Matrix<T> {
        let basis = self.basis();
        let k = basis.len();
        let gram = Matrix::from_fn(k, k, |a, b| inner(basis[a].entries(), basis[b].entries()));
        let rhs: Vec<T> = basis.iter().map(|b| inner(b.entries(), x.entries())).collect();
        let coeffs = gram.solve(&rhs).expect("Gram matrix of a basis is invertible");
        basis
            .iter()
            .zip(coeffs)
            .fold(Matrix::zeros(self.dim, self.dim), |acc, (b, c)| acc.add(&b.scale(&c)))
    }

    /// A random element: integer combination of the basis with entries in [-3, 3].
    pub fn random_element(&self, rng: &mut impl Rng) -> Matrix<T> {
        self.basis()
            .iter()
            .fold(Matrix::zeros(self.dim, self.dim), |acc, b| {
                acc.add(&b.scale(&T::from_i64(rng.gen_range(-3..=3))))
            })
    }

    /// Range projections of `a* a` for random `a` in the algebra; all lie in it.
    pub fn sample_projections(&self, rng: &mut impl Rng, count: usize) -> Vec<Matrix<T>> {
        (0..count)
            .map(|_| {
                let a = self.random_element(rng);
                range_projection_unchecked(&a.adjoint().mul(&a))
            })
            .collect()
    }
}

/// Closes `generators ∪ {1}` under adjoints and products.
pub fn build_algebra<T: Scalar>(dim: usize, generators: &[Matrix<T>]) -> Result<StarAlgebra<T>, VnError> {
    StarAlgebra::<T>::check_dim(dim)?;
    let mut vectors = vec![vectorize(&Matrix::<T>::identity(dim))];
    for g in generators {
        if g.rows() != dim || g.cols() != dim {
            return Err(VnError::DimensionMismatch {
                expected: dim,
                got: g.rows(),
            });
        }
        vectors.push(vectorize(g));
        vectors.push(vectorize(&g.adjoint()));
    }
    let mut span = Subspace::span(dim * dim, &vectors).expect("vectors of length d²");
    loop {
        let alg = StarAlgebra::from_span_unchecked(dim, span.clone());
        let basis = alg.basis();
        let mut products = span.basis_vectors();
        for a in &basis {
            for b in &basis {
                products.push(vectorize(&a.mul(b)));
            }
        }
        let next = Subspace::span(dim * dim, &products).expect("vectors of length d²");
        if next == span {
            return Ok(alg);
        }
        span = next;
    }
}

/// Projection onto the span of `m' range(p)` over the commutant of `m`: the
/// least projection of `m` above `p`.
pub fn exists_alg<T: Scalar>(m: &StarAlgebra<T>, p: &Matrix<T>) -> Result<Matrix<T>, VnError> {
    if p.rows() != m.dim() {
        return Err(VnError::DimensionMismatch {
            expected: m.dim(),
            got: p.rows(),
        });
    }
    if !is_projection(p) {
        return Err(VnError::NotAProjection);
    }
    let range = Subspace::column_space(p);
    let vectors: Vec<Vec<T>> = m
        .commutant()
        .basis()
        .iter()
        .flat_map(|c| range.basis_vectors().into_iter().map(move |v| c.mul_vec(&v)))
        .collect();
    Ok(Subspace::span(m.dim(), &vectors).expect("length d").projector())
}

fn range_projection_unchecked<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    Subspace::column_space(x).projector()
}

/// Projection onto the column space of a positive matrix.
pub fn range_projection<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>, VnError> {
    if !check_psd(x).is_psd() {
        return Err(VnError::NotPositive);
    }
    Ok(range_projection_unchecked(x))
}

/// Coefficients `c_0, ..., c_d` with `P(x) = Σ c_k x^k`, if such exist.
pub fn range_projection_polynomial<T: Scalar>(x: &Matrix<T>) -> Option<Vec<T>> {
    let p = range_projection_unchecked(x);
    let d = x.rows();
    let powers: Vec<Matrix<T>> = (0..=d as u32).map(|k| x.pow(k)).collect();
    let system = Matrix::from_fn(d * d, powers.len(), |r, c| powers[c].entries()[r].clone());
    system.solve(p.entries())
}

pub fn conditional_expectation<T: Scalar>(n: &StarAlgebra<T>, x: &Matrix<T>) -> Result<Matrix<T>, VnError> {
    if x.rows() != n.dim() || x.cols() != n.dim() {
        return Err(VnError::DimensionMismatch {
            expected: n.dim(),
            got: x.rows(),
        });
    }
    Ok(n.expectation(x))
}

/// `∃_N p`, `P(E_N p)` and `∃_N P(E_N p)` for one projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationCheck<T> {
    pub exists: Matrix<T>,
    pub range_of_expectation: Matrix<T>,
    pub exists_of_range: Matrix<T>,
}

impl<T: Scalar> ExpectationCheck<T> {
    pub fn all_equal(&self) -> bool {
        self.exists == self.range_of_expectation && self.range_of_expectation == self.exists_of_range
    }
}

pub fn check_exists_equals_range_of_expectation<T: Scalar>(
    n: &StarAlgebra<T>,
    p: &Matrix<T>,
) -> Result<ExpectationCheck<T>, VnError> {
    let exists = exists_alg(n, p)?;
    let range_of_expectation = range_projection(&n.expectation(p))?;
    let exists_of_range = exists_alg(n, &range_of_expectation)?;
    Ok(ExpectationCheck {
        exists,
        range_of_expectation,
        exists_of_range,
    })
}

/// PSD test of `E_N(p) - λ p`.
pub fn check_pimsner_popa<T: Scalar>(n: &StarAlgebra<T>, p: &Matrix<T>, lambda: &BigRational) -> PsdOutcome<T> {
    let e = n.expectation(p);
    check_psd(&e.sub(&p.scale(&T::from_rational(lambda.clone()))))
}

/// Least central projection above `p`.
pub fn central_carrier<T: Scalar>(m: &StarAlgebra<T>, p: &Matrix<T>) -> Result<Matrix<T>, VnError> {
    if !m.contains(p) {
        return Err(VnError::NotInAlgebra);
    }
    exists_alg(&m.center(), p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingSquareReport<T> {
    pub expectations_commute: bool,
    /// A basis element `x` of the ambient algebra with `E_M E_N x != E_N E_M x`,
    /// and the two values.
    pub expectation_witness: Option<[Matrix<T>; 3]>,
    /// Present when the expectations commute.
    pub quantifiers_commute: Option<bool>,
    pub quantifier_witness: Option<Matrix<T>>,
    pub sampled: usize,
    pub intersection_is_k: bool,
}

impl<T: Scalar> CommutingSquareReport<T> {
    pub fn is_commuting_square(&self) -> bool {
        self.expectations_commute && self.intersection_is_k
    }
}

pub fn check_commuting_square<T: Scalar>(
    k: &StarAlgebra<T>,
    m: &StarAlgebra<T>,
    n: &StarAlgebra<T>,
    l: &StarAlgebra<T>,
    rng: &mut impl Rng,
    samples: usize,
) -> Result<CommutingSquareReport<T>, VnError> {
    for (name, small, big) in [("K ⊆ M", k, m), ("K ⊆ N", k, n), ("M ⊆ L", m, l), ("N ⊆ L", n, l)] {
        if small.dim() != big.dim() {
            return Err(VnError::DimensionMismatch {
                expected: big.dim(),
                got: small.dim(),
            });
        }
        if !small.le(big) {
            return Err(VnError::Inclusion(name.to_string()));
        }
    }
    let expectation_witness = l.basis().into_iter().find_map(|x| {
        let mn = m.expectation(&n.expectation(&x));
        let nm = n.expectation(&m.expectation(&x));
        (mn != nm).then(|| [x, mn, nm])
    });
    let expectations_commute = expectation_witness.is_none();
    let mut quantifiers_commute = None;
    let mut quantifier_witness = None;
    let mut sampled = 0;
    if expectations_commute {
        let projections = l.sample_projections(rng, samples);
        sampled = projections.len();
        quantifier_witness = projections.into_iter().find(|p| {
            let a = exists_alg(m, &exists_alg(n, p).expect("projection"));
            let b = exists_alg(n, &exists_alg(m, p).expect("projection"));
            a != b
        });
        quantifiers_commute = Some(quantifier_witness.is_none());
    }
    let intersection_is_k = m.intersection(n)? == *k;
    Ok(CommutingSquareReport {
        expectations_commute,
        expectation_witness,
        quantifiers_commute,
        quantifier_witness,
        sampled,
        intersection_is_k,
    })
}

/// One tested inclusion in the search for `∃_N p != P(E_N p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub algebra_dim: usize,
    pub projections_tested: usize,
    pub gaps: usize,
}

/// Random unital *-subalgebras of `M_dim` and random projections; counts
/// projections where the three values of [`check_exists_equals_range_of_expectation`]
/// disagree.
pub fn search_expectation_gap<T: Scalar>(
    dim: usize,
    inclusions: usize,
    projections: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GapRecord>, VnError> {
    let full = StarAlgebra::<T>::full(dim)?;
    let mut out = Vec::new();
    for _ in 0..inclusions {
        let gens = rng.gen_range(0..=2);
        let generators: Vec<Matrix<T>> = (0..gens)
            .map(|_| {
                // sparse random matrices keep the generated algebras varied
                Matrix::from_fn(dim, dim, |_, _| {
                    if rng.gen_bool(0.3) {
                        T::from_i64(rng.gen_range(-2..=2))
                    } else {
                        T::zero()
                    }
                })
            })
            .collect();
        let n = build_algebra(dim, &generators)?;
        let mut gaps = 0;
        let ps = full.sample_projections(rng, projections);
        for p in &ps {
            if !check_exists_equals_range_of_expectation(&n, p)?.all_equal() {
                gaps += 1;
            }
        }
        out.push(GapRecord {
            algebra_dim: n.algebra_dim(),
            projections_tested: ps.len(),
            gaps,
        });
    }
    Ok(out)
}

/// Matrix units `E_ab` of size `dim`.
pub fn matrix_unit<T: Scalar>(dim: usize, a: usize, b: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(dim, dim);
    m[(a, b)] = T::one();
    m
}

/// `x ⊗ 1` and `1 ⊗ x` embeddings into `M_{d1 d2}`.
pub fn left_factor<T: Scalar>(x: &Matrix<T>, other: usize) -> Matrix<T> {
    x.kron(&Matrix::identity(other))
}

pub fn right_factor<T: Scalar>(x: &Matrix<T>, other: usize) -> Matrix<T> {
    Matrix::identity(other).kron(x)
}

/// `M_a ⊗ 1` inside `M_{ab}`.
pub fn left_tensor_algebra<T: Scalar>(a: usize, b: usize) -> Result<StarAlgebra<T>, VnError> {
    let basis: Vec<Matrix<T>> = (0..a)
        .flat_map(|r| (0..a).map(move |c| left_factor(&matrix_unit(a, r, c), b)))
        .collect();
    StarAlgebra::from_basis(a * b, &basis)
}

/// `1 ⊗ M_b` inside `M_{ab}`.
pub fn right_tensor_algebra<T: Scalar>(a: usize, b: usize) -> Result<StarAlgebra<T>, VnError> {
    let basis: Vec<Matrix<T>> = (0..b)
        .flat_map(|r| (0..b).map(move |c| right_factor(&matrix_unit(b, r, c), a)))
        .collect();
    StarAlgebra::from_basis(a * b, &basis)
}

/// Projection onto `(e_0 ⊗ e_0 + e_1 ⊗ e_1)`.
pub fn bell_projection<T: Scalar>() -> Matrix<T> {
    let mut v = vec![T::zero(); 4];
    v[0] = T::one();
    v[3] = T::one();
    Matrix::outer(&v, &v).scale(&T::from_frac(1, 2))
}
