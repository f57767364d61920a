//! Fourier multipliers relative to a positive reference operator.
//!
//! A Hermitian operator `E` on a finite-dimensional space splits the space
//! into eigenspaces `H_j`. Operators that map every `H_j` into itself are the
//! *invariant operators* (Fourier multipliers) for that splitting, and each is
//! described completely by its matrix symbol: one `d_j x d_j` block per
//! eigenspace. This crate builds the splitting, tests invariance, moves between
//! operators and symbols, and computes norms, Schatten quasi-norms and traces
//! directly from symbols.
//!
//! Modules:
//!
//! * [`space`]: ambient space, partitions, coefficient vectors, symbols.
//! * [`spectral`]: eigendecomposition and eigenvalue clustering.
//! * [`multiplier`]: invariance, extraction, quantization, composition.
//! * [`analysis`]: singular values, Schatten norms, traces, Sobolev profiles.
//! * [`torus`]: truncated Fourier model of the n-torus.
//! * [`format`]: the CMAT/PART/SYM/COEF text formats.
//! * [`report`]: JSON reports shared by the CLI and bindings.

pub mod analysis;
pub mod error;
pub mod format;
pub mod linalg;
pub mod multiplier;
pub mod random;
pub mod report;
pub mod space;
pub mod spectral;
pub mod torus;

pub use error::{Error, ParseError, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use space::{
    coefficients, project, synthesize, AmbientSpace, Block, CoefficientVector, DenseOperator,
    EigenPartition, MatrixSymbol,
};
