//! Invariant operators and their matrix symbols.
//!
//! An operator `T` is invariant relative to a partition when it maps each
//! block `H_j` into itself. Its symbol is the family of compressions
//! `sigma(j)_{mk} = (T e_j^k, e_j^m)`, and [`quantize`] rebuilds the operator
//! from a symbol. [`extract_symbol`] is defined for every operator; for
//! non-invariant ones it is the block-diagonal part.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, max_abs, CMatrix, C64};
use crate::space::{DenseOperator, EigenPartition, MatrixSymbol};

pub const DEFAULT_INVARIANCE_TOL: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-10;

/// Outcome of an invariance test.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Largest `||B(l, j)||_F / max(1, ||T||_F)` over `l != j`, where
    /// `B(l, j)_{mk} = (T e_j^k, e_l^m)`.
    pub max_leakage: f64,
    /// `(j, l)`: source block `j` leaking into target block `l`. `None` when
    /// nothing leaks.
    pub worst_pair: Option<(usize, usize)>,
    pub tolerance_used: f64,
}

/// Measures how far `T` is from mapping every block into itself.
pub fn is_invariant(t: &DenseOperator, p: &EigenPartition, tol: f64) -> Result<InvarianceReport> {
    t.check_partition(p)?;
    if !(tol >= 0.0) {
        return Err(Error::Argument(format!("tolerance must be nonnegative, got {tol}")));
    }
    let v = p.basis_matrix();
    // Entry (row in block l, column in block j) is (T e_j^k, e_l^m).
    let coupling = v.adjoint() * t.matrix() * &v;
    let scale = 1f64.max(frobenius_norm(t.matrix()));
    let mults = p.multiplicities();

    let mut max_leakage = 0.0;
    let mut worst_pair = None;
    for (l, &dl) in mults.iter().enumerate() {
        for (j, &dj) in mults.iter().enumerate() {
            if l == j {
                continue;
            }
            let block = coupling.view((p.offset(l), p.offset(j)), (dl, dj));
            let mass = block.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / scale;
            // strict comparison: ties keep the lexicographically smaller (l, j)
            if mass > max_leakage {
                max_leakage = mass;
                worst_pair = Some((j, l));
            }
        }
    }
    Ok(InvarianceReport {
        invariant: max_leakage <= tol,
        max_leakage,
        worst_pair,
        tolerance_used: tol,
    })
}

/// Normalized commutator `||TE - ET||_F / max(1, ||T||_F ||E||_F)`.
pub fn commutes_with(t: &DenseOperator, e: &DenseOperator) -> Result<f64> {
    t.check_same_dim(e)?;
    let (tm, em) = (t.matrix(), e.matrix());
    let comm = tm * em - em * tm;
    let scale = 1f64.max(frobenius_norm(tm) * frobenius_norm(em));
    Ok(frobenius_norm(&comm) / scale)
}

/// Block compressions `sigma(j) = E_j^* T E_j`.
pub fn extract_symbol(t: &DenseOperator, p: &EigenPartition) -> Result<MatrixSymbol> {
    t.check_partition(p)?;
    let blocks = p
        .blocks()
        .iter()
        .map(|b| b.basis.adjoint() * t.matrix() * &b.basis)
        .collect();
    Ok(MatrixSymbol { blocks })
}

/// The operator with `T e_j^k = sum_m sigma(j)_{mk} e_j^m`.
pub fn quantize(sigma: &MatrixSymbol, p: &EigenPartition) -> Result<DenseOperator> {
    sigma.check_aligned(p)?;
    let n = p.dim();
    let mut t = CMatrix::zeros(n, n);
    for (b, s) in p.blocks().iter().zip(&sigma.blocks) {
        t += &b.basis * s * b.basis.adjoint();
    }
    DenseOperator::new(t)
}

/// Blockwise product `sigma_S(j) sigma_T(j)`, the symbol of `S T`.
pub fn compose_symbols(s: &MatrixSymbol, t: &MatrixSymbol) -> Result<MatrixSymbol> {
    if s.sizes() != t.sizes() {
        return Err(Error::Shape(format!(
            "cannot compose symbols with block sizes {:?} and {:?}",
            s.sizes(),
            t.sizes()
        )));
    }
    Ok(MatrixSymbol {
        blocks: s.blocks.iter().zip(&t.blocks).map(|(a, b)| a * b).collect(),
    })
}

/// Symbol of `F(E)`: block `j` is `F(lambda_j) I`.
pub fn symbol_of_function<F>(f: F, p: &EigenPartition) -> Result<MatrixSymbol>
where
    F: Fn(f64) -> C64,
{
    let mut blocks = Vec::with_capacity(p.len());
    for (j, b) in p.blocks().iter().enumerate() {
        let value = f(b.lambda);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Evaluation {
                block: j,
                lambda: b.lambda,
            });
        }
        let d = b.multiplicity();
        blocks.push(CMatrix::identity(d, d) * value);
    }
    Ok(MatrixSymbol { blocks })
}

fn check_unitary(u: &DenseOperator) -> Result<()> {
    let m = u.matrix();
    let n = m.nrows();
    let deviation = max_abs(&(m * m.adjoint() - CMatrix::identity(n, n)));
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// `U T U^*` for unitary `U`.
pub fn conjugate_by_unitary(t: &DenseOperator, u: &DenseOperator) -> Result<DenseOperator> {
    t.check_same_dim(u)?;
    check_unitary(u)?;
    DenseOperator::new(u.matrix() * t.matrix() * u.matrix().adjoint())
}

/// Compares the symbol of `T` in `p` with the symbol of `U T U^*` in the
/// partition with basis vectors `U e_j^k`. Returns the largest blockwise
/// Frobenius deviation; zero up to rounding for every unitary `U`.
pub fn check_basis_covariance(
    t: &DenseOperator,
    u: &DenseOperator,
    p: &EigenPartition,
) -> Result<f64> {
    t.check_partition(p)?;
    let conjugated = conjugate_by_unitary(t, u)?;
    let moved = p.transformed(u.matrix())?;
    let before = extract_symbol(t, p)?;
    let after = extract_symbol(&conjugated, &moved)?;
    Ok(before
        .blocks
        .iter()
        .zip(&after.blocks)
        .map(|(a, b)| frobenius_norm(&(a - b)))
        .fold(0.0, f64::max))
}
