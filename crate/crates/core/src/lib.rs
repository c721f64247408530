//! Exact finite models of quantum monadic and cylindric algebras.

pub mod cylindric;
pub mod frames;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod quantifier;
pub mod random;
pub mod report;
pub mod scalar;
pub mod scenarios;
pub mod tensor;
pub mod vn;

pub use lattice::{ElementSet, FiniteOl, GreechieDiagram, LatticeError};
pub use linalg::{Matrix, Subspace};
pub use scalar::{Gq, Scalar};

pub type GqMatrix = Matrix<Gq>;
pub type GqSubspace = Subspace<Gq>;
pub type RationalMatrix = Matrix<num_rational::BigRational>;
pub type RationalSubspace = Subspace<num_rational::BigRational>;
