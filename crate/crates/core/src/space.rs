//! Ambient space, eigenspace partitions, and the blocked objects that live on
//! them: coefficient vectors, matrix symbols, dense operators.

use crate::error::{Error, Result};
use crate::linalg::{orthonormality_defect, CMatrix, CVector, KahanSum, C64};

/// Tolerance on `|E^* E - I|` for partition bases.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientSpace {
    dim: usize,
    labels: Option<Vec<String>>,
}

impl AmbientSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("ambient dimension must be at least 1".into()));
        }
        Ok(Self { dim, labels: None })
    }

    pub fn with_labels(dim: usize, labels: Vec<String>) -> Result<Self> {
        if labels.len() != dim {
            return Err(Error::Shape(format!(
                "{} labels for ambient dimension {dim}",
                labels.len()
            )));
        }
        let mut space = Self::new(dim)?;
        space.labels = Some(labels);
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// One eigenspace: its eigenvalue and an orthonormal basis stored as the
/// columns of an `N x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub lambda: f64,
    pub basis: CMatrix,
}

impl Block {
    pub fn new(lambda: f64, basis: CMatrix) -> Self {
        Self { lambda, basis }
    }

    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// An orthogonal decomposition `H = H_0 + H_1 + ...` of the ambient space into
/// blocks with strictly increasing eigenvalues.
///
/// Construction validates the invariants (strict increase, dimensions add up
/// to `N`, orthonormal bases), so every `EigenPartition` value is well formed.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPartition {
    ambient: AmbientSpace,
    blocks: Vec<Block>,
    offsets: Vec<usize>,
}

impl EigenPartition {
    pub fn new(ambient: AmbientSpace, blocks: Vec<Block>) -> Result<Self> {
        let n = ambient.dim();
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut total = 0;
        for (j, b) in blocks.iter().enumerate() {
            if !b.lambda.is_finite() {
                return Err(Error::InvalidPartition(format!(
                    "block {j} has non-finite eigenvalue"
                )));
            }
            if b.basis.nrows() != n {
                return Err(Error::InvalidPartition(format!(
                    "block {j} basis vectors have length {}, expected {n}",
                    b.basis.nrows()
                )));
            }
            if b.multiplicity() == 0 {
                return Err(Error::InvalidPartition(format!("block {j} is empty")));
            }
            if j > 0 && b.lambda <= blocks[j - 1].lambda {
                return Err(Error::InvalidPartition(format!(
                    "eigenvalues not strictly increasing at block {j} ({} after {})",
                    b.lambda,
                    blocks[j - 1].lambda
                )));
            }
            offsets.push(total);
            total += b.multiplicity();
        }
        offsets.push(total);
        if total != n {
            return Err(Error::InvalidPartition(format!(
                "multiplicities sum to {total}, ambient dimension is {n}"
            )));
        }
        let partition = Self {
            ambient,
            blocks,
            offsets,
        };
        let defect = orthonormality_defect(&partition.basis_matrix());
        if defect > ORTHONORMALITY_TOL {
            return Err(Error::InvalidPartition(format!(
                "basis is not orthonormal (Gram defect {defect:e})"
            )));
        }
        Ok(partition)
    }

    /// Partition whose blocks are consecutive runs of standard basis vectors.
    pub fn from_standard_basis(lambdas: &[f64], multiplicities: &[usize]) -> Result<Self> {
        if lambdas.len() != multiplicities.len() {
            return Err(Error::Shape(format!(
                "{} eigenvalues but {} multiplicities",
                lambdas.len(),
                multiplicities.len()
            )));
        }
        let n: usize = multiplicities.iter().sum();
        let ambient = AmbientSpace::new(n)?;
        let mut start = 0;
        let blocks = lambdas
            .iter()
            .zip(multiplicities)
            .map(|(&lambda, &d)| {
                let basis = CMatrix::from_fn(n, d, |r, c| {
                    if r == start + c {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                start += d;
                Block::new(lambda, basis)
            })
            .collect();
        Self::new(ambient, blocks)
    }

    /// Blocks taken from consecutive columns of a unitary `basis`.
    pub fn from_unitary_columns(
        basis: &CMatrix,
        lambdas: &[f64],
        multiplicities: &[usize],
    ) -> Result<Self> {
        if lambdas.len() != multiplicities.len() {
            return Err(Error::Shape(format!(
                "{} eigenvalues but {} multiplicities",
                lambdas.len(),
                multiplicities.len()
            )));
        }
        let ambient = AmbientSpace::new(basis.nrows())?;
        let total: usize = multiplicities.iter().sum();
        if total != basis.ncols() {
            return Err(Error::Shape(format!(
                "multiplicities sum to {total}, basis has {} columns",
                basis.ncols()
            )));
        }
        let mut start = 0;
        let blocks = lambdas
            .iter()
            .zip(multiplicities)
            .map(|(&lambda, &d)| {
                let b = Block::new(lambda, basis.columns(start, d).into_owned());
                start += d;
                b
            })
            .collect();
        Self::new(ambient, blocks)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> Result<&Block> {
        self.blocks.get(j).ok_or(Error::BlockIndex {
            index: j,
            blocks: self.blocks.len(),
        })
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.lambda).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::multiplicity).collect()
    }

    /// Column offset of block `j` within [`basis_matrix`](Self::basis_matrix).
    pub fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    /// All basis vectors side by side, block after block. Unitary.
    pub fn basis_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut v = CMatrix::zeros(n, n);
        for (j, b) in self.blocks.iter().enumerate() {
            v.columns_mut(self.offsets[j], b.multiplicity())
                .copy_from(&b.basis);
        }
        v
    }

    /// Same eigenvalues and multiplicities, basis vectors mapped through `u`.
    pub fn transformed(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != (self.dim(), self.dim()) {
            return Err(Error::Shape(format!(
                "transform is {}x{}, partition dimension is {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block::new(b.lambda, u * &b.basis))
            .collect();
        Self::new(self.ambient.clone(), blocks)
    }

    fn check_vector(&self, f: &CVector) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::Shape(format!(
                "vector has length {}, ambient dimension is {}",
                f.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Blocked Fourier coefficients `f^(j) in C^{d_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub blocks: Vec<CVector>,
}

impl CoefficientVector {
    pub fn new(blocks: Vec<CVector>) -> Self {
        Self { blocks }
    }

    pub fn zeros(p: &EigenPartition) -> Self {
        Self::new(p.blocks().iter().map(|b| CVector::zeros(b.multiplicity())).collect())
    }

    /// Coefficients of the basis vector `e_j^k` (zero-based `k`).
    pub fn indicator(p: &EigenPartition, j: usize, k: usize) -> Result<Self> {
        let d = p.block(j)?.multiplicity();
        if k >= d {
            return Err(Error::Argument(format!(
                "basis index {k} out of range for block {j} of multiplicity {d}"
            )));
        }
        let mut c = Self::zeros(p);
        c.blocks[j][k] = C64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn check_aligned(&self, p: &EigenPartition) -> Result<()> {
        if self.blocks.len() != p.len() {
            return Err(Error::Shape(format!(
                "coefficient vector has {} blocks, partition has {}",
                self.blocks.len(),
                p.len()
            )));
        }
        for (j, (c, b)) in self.blocks.iter().zip(p.blocks()).enumerate() {
            if c.len() != b.multiplicity() {
                return Err(Error::Shape(format!(
                    "coefficient block {j} has length {}, multiplicity is {}",
                    c.len(),
                    b.multiplicity()
                )));
            }
        }
        Ok(())
    }

    /// Euclidean norms of the individual blocks.
    pub fn block_norms(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.norm()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter().map(|z| z.norm_sqr()))
            .collect::<KahanSum>()
            .value()
    }

    /// The `l^2` norm over all blocks.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Matrix symbol: one square block `sigma(l)` per partition block.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    pub blocks: Vec<CMatrix>,
}

impl MatrixSymbol {
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self> {
        for (l, b) in blocks.iter().enumerate() {
            if !b.is_square() {
                return Err(Error::Shape(format!(
                    "symbol block {l} is {}x{}, not square",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { blocks })
    }

    pub fn identity(p: &EigenPartition) -> Self {
        Self {
            blocks: p
                .blocks()
                .iter()
                .map(|b| CMatrix::identity(b.multiplicity(), b.multiplicity()))
                .collect(),
        }
    }

    pub fn zeros(p: &EigenPartition) -> Self {
        Self {
            blocks: p
                .blocks()
                .iter()
                .map(|b| CMatrix::zeros(b.multiplicity(), b.multiplicity()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn check_aligned(&self, p: &EigenPartition) -> Result<()> {
        if self.sizes() != p.multiplicities() {
            return Err(Error::Shape(format!(
                "symbol block sizes {:?} do not match partition multiplicities {:?}",
                self.sizes(),
                p.multiplicities()
            )));
        }
        Ok(())
    }

    /// `a * self + b * other`, blockwise.
    pub fn linear_combination(&self, a: C64, other: &MatrixSymbol, b: C64) -> Result<Self> {
        if self.sizes() != other.sizes() {
            return Err(Error::Shape(format!(
                "symbol block sizes {:?} and {:?} differ",
                self.sizes(),
                other.sizes()
            )));
        }
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(x, y)| x * a + y * b)
                .collect(),
        })
    }
}

/// A linear map on the ambient space in its orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: CMatrix,
}

impl DenseOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Shape(format!(
                "operator matrix is {}x{}, expected a nonempty square matrix",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn apply(&self, f: &CVector) -> Result<CVector> {
        if f.len() != self.dim() {
            return Err(Error::Shape(format!(
                "vector has length {}, operator dimension is {}",
                f.len(),
                self.dim()
            )));
        }
        Ok(&self.entries * f)
    }

    /// `self * other`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same_dim(other)?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn adjoint(&self) -> DenseOperator {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub(crate) fn check_same_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "operator dimensions {} and {} differ",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_partition(&self, p: &EigenPartition) -> Result<()> {
        if self.dim() != p.dim() {
            return Err(Error::Shape(format!(
                "operator dimension {} does not match partition dimension {}",
                self.dim(),
                p.dim()
            )));
        }
        Ok(())
    }
}

/// Orthogonal projection of `f` onto block `j`: `sum_k (f, e_j^k) e_j^k`.
pub fn project(f: &CVector, j: usize, p: &EigenPartition) -> Result<CVector> {
    p.check_vector(f)?;
    let basis = &p.block(j)?.basis;
    Ok(basis * (basis.adjoint() * f))
}

/// Fourier coefficients `f^(j, k) = (f, e_j^k)`.
pub fn coefficients(f: &CVector, p: &EigenPartition) -> Result<CoefficientVector> {
    p.check_vector(f)?;
    Ok(CoefficientVector::new(
        p.blocks().iter().map(|b| b.basis.adjoint() * f).collect(),
    ))
}

/// Inverse of [`coefficients`]: `sum_j sum_k c(j, k) e_j^k`.
pub fn synthesize(c: &CoefficientVector, p: &EigenPartition) -> Result<CVector> {
    c.check_aligned(p)?;
    let mut f = CVector::zeros(p.dim());
    for (b, cj) in p.blocks().iter().zip(&c.blocks) {
        f += &b.basis * cj;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_partition() -> EigenPartition {
        EigenPartition::from_standard_basis(&[0.0, 1.0, 4.0], &[1, 2, 3]).unwrap()
    }

    #[test]
    fn ambient_dim_must_be_positive() {
        assert!(AmbientSpace::new(0).is_err());
        assert!(AmbientSpace::with_labels(2, vec!["a".into()]).is_err());
    }

    #[test]
    fn partition_rejects_bad_input() {
        // not increasing
        assert!(EigenPartition::from_standard_basis(&[1.0, 1.0], &[1, 1]).is_err());
        // incomplete
        let ambient = AmbientSpace::new(3).unwrap();
        let b = Block::new(0.0, CMatrix::identity(3, 2));
        assert!(matches!(
            EigenPartition::new(ambient.clone(), vec![b]),
            Err(Error::InvalidPartition(_))
        ));
        // not orthonormal
        let mut basis = CMatrix::identity(3, 3);
        basis[(0, 1)] = C64::new(0.1, 0.0);
        let b = Block::new(0.0, basis);
        assert!(EigenPartition::new(ambient, vec![b]).is_err());
    }

    #[test]
    fn projection_of_own_and_other_block() {
        let p = diag_partition();
        let e0 = p.blocks()[0].basis.column(0).into_owned();
        let e1 = p.blocks()[1].basis.column(0).into_owned();
        assert_eq!(project(&e0, 0, &p).unwrap(), e0);
        assert!(project(&e1, 0, &p).unwrap().norm() == 0.0);
        assert!(matches!(
            project(&e0, 3, &p),
            Err(Error::BlockIndex { index: 3, blocks: 3 })
        ));
    }

    #[test]
    fn coefficients_of_basis_vector_are_indicator() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random::random_partition(&mut rng, &[1, 3, 2]);
        for j in 0..p.len() {
            for k in 0..p.blocks()[j].multiplicity() {
                let e = p.blocks()[j].basis.column(k).into_owned();
                let c = coefficients(&e, &p).unwrap();
                let ind = CoefficientVector::indicator(&p, j, k).unwrap();
                for (a, b) in c.blocks.iter().zip(&ind.blocks) {
                    assert!((a - b).norm() < 1e-12);
                }
                let back = synthesize(&ind, &p).unwrap();
                assert!((back - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_vector_has_zero_coefficients() {
        let p = diag_partition();
        let c = coefficients(&CVector::zeros(6), &p).unwrap();
        assert_eq!(c, CoefficientVector::zeros(&p));
        assert_eq!(synthesize(&c, &p).unwrap(), CVector::zeros(6));
    }

    #[test]
    fn shape_errors() {
        let p = diag_partition();
        assert!(matches!(
            coefficients(&CVector::zeros(5), &p),
            Err(Error::Shape(_))
        ));
        let bad = CoefficientVector::new(vec![CVector::zeros(1), CVector::zeros(2)]);
        assert!(matches!(synthesize(&bad, &p), Err(Error::Shape(_))));
        assert!(DenseOperator::new(CMatrix::zeros(2, 3)).is_err());
        assert!(MatrixSymbol::new(vec![CMatrix::zeros(1, 2)]).is_err());
    }

    #[test]
    fn transformed_partition_keeps_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = diag_partition();
        let u = random::random_unitary(&mut rng, 6);
        let q = p.transformed(&u).unwrap();
        assert_eq!(q.lambdas(), p.lambdas());
        assert_eq!(q.multiplicities(), p.multiplicities());
    }
}
