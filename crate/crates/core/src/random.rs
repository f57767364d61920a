//! Random instances for tests, demos and benchmarks.

use rand::Rng;

use crate::linalg::{orthonormalize_columns, CMatrix, CVector, C64};
use crate::space::{EigenPartition, MatrixSymbol};

fn entry<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Entries uniform in the unit square of the complex plane.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| entry(rng))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| entry(rng))
}

/// Unitary matrix from Gram-Schmidt on a random matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let mut a = random_matrix(rng, n, n);
        if orthonormalize_columns(&mut a).is_ok() {
            return a;
        }
    }
}

/// Random block sizes in `1..=max_block` adding up to `n`.
pub fn random_block_sizes<R: Rng + ?Sized>(rng: &mut R, n: usize, max_block: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let d = rng.gen_range(1..=max_block.min(left));
        sizes.push(d);
        left -= d;
    }
    sizes
}

/// Partition with the given multiplicities, eigenvalues `0, 1, 2, ...`, and a
/// random unitary basis.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, multiplicities: &[usize]) -> EigenPartition {
    let n: usize = multiplicities.iter().sum();
    let lambdas: Vec<f64> = (0..multiplicities.len()).map(|j| j as f64).collect();
    let u = random_unitary(rng, n);
    EigenPartition::from_unitary_columns(&u, &lambdas, multiplicities)
        .expect("random unitary columns form a valid partition")
}

pub fn random_symbol<R: Rng + ?Sized>(rng: &mut R, p: &EigenPartition) -> MatrixSymbol {
    MatrixSymbol {
        blocks: p
            .multiplicities()
            .into_iter()
            .map(|d| random_matrix(rng, d, d))
            .collect(),
    }
}
