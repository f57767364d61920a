//! From a Hermitian reference operator to its eigenspace partition.

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, orthonormalize_columns, CMatrix, HermitianEigen};
use crate::space::{AmbientSpace, Block, DenseOperator, EigenPartition};

/// Relative tolerance for the Hermitian check on the input operator.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// When two consecutive eigenvalues count as equal.
///
/// `v` and `w` merge iff `|w - v| <= max(abs_tol, rel_tol * max(|v|, |w|))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringPolicy {
    rel_tol: f64,
    abs_tol: f64,
}

impl Default for ClusteringPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
        }
    }
}

impl ClusteringPolicy {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let valid = |x: f64| x.is_finite() && x >= 0.0;
        if !valid(rel_tol) || !valid(abs_tol) || (rel_tol == 0.0 && abs_tol == 0.0) {
            return Err(Error::Argument(format!(
                "clustering tolerances must be nonnegative and not both zero \
                 (rel_tol = {rel_tol}, abs_tol = {abs_tol})"
            )));
        }
        Ok(Self { rel_tol, abs_tol })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn merges(&self, v: f64, w: f64) -> bool {
        (w - v).abs() <= self.abs_tol.max(self.rel_tol * v.abs().max(w.abs()))
    }
}

/// Eigendecomposition of a Hermitian operator with ascending eigenvalues.
///
/// The operator is symmetrized as `(E + E^*) / 2` after checking that
/// `max|E - E^*| <= 1e-10 * max(1, max|E|)`.
pub fn hermitian_eigendecompose(e: &DenseOperator) -> Result<HermitianEigen> {
    let m = e.matrix();
    let deviation = max_abs(&(m - m.adjoint()));
    if deviation > HERMITIAN_TOL * 1f64.max(max_abs(m)) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    linalg::jacobi_eigh(&sym)
}

/// Group ascending eigenvalues into blocks.
///
/// Each block gets the mean of its members as eigenvalue, and its columns of
/// `vectors` re-orthonormalized by modified Gram-Schmidt.
pub fn cluster_eigenvalues(
    values: &[f64],
    vectors: &CMatrix,
    policy: &ClusteringPolicy,
) -> Result<EigenPartition> {
    let n = vectors.nrows();
    if values.len() != vectors.ncols() || !vectors.is_square() {
        return Err(Error::Shape(format!(
            "{} eigenvalues for a {}x{} eigenvector matrix",
            values.len(),
            n,
            vectors.ncols()
        )));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Argument("eigenvalues must be ascending".into()));
    }
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || !policy.merges(values[i - 1], values[i]) {
            groups.push((start, i - start));
            start = i;
        }
    }
    let mut blocks = Vec::with_capacity(groups.len());
    for (start, len) in groups {
        let lambda = values[start..start + len].iter().sum::<f64>() / len as f64;
        let mut basis = vectors.columns(start, len).into_owned();
        orthonormalize_columns(&mut basis)?;
        blocks.push(Block::new(lambda, basis));
    }
    EigenPartition::new(AmbientSpace::new(n)?, blocks)
}

/// Eigenspace partition of a Hermitian reference operator.
pub fn partition_from_operator(
    e: &DenseOperator,
    policy: &ClusteringPolicy,
) -> Result<EigenPartition> {
    let eig = hermitian_eigendecompose(e)?;
    let p = cluster_eigenvalues(&eig.values, &eig.vectors, policy)?;
    log::info!(
        "partition: N = {}, {} blocks, multiplicities {:?}",
        p.dim(),
        p.len(),
        p.multiplicities()
    );
    Ok(p)
}
