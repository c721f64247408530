//! Exact linear algebra over a [`Scalar`](crate::scalar::Scalar) field.

pub mod matrix;
pub mod psd;
pub mod subspace;

pub use matrix::{inner, Matrix};
pub use psd::{check_psd, loewner_le, PsdCertificate, PsdOutcome, PsdSummary};
pub use subspace::{Subspace, SubspaceError};
