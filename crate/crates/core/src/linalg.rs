//! Dense complex kernels: Hermitian Jacobi eigensolver, one-sided Jacobi
//! singular values, Gram-Schmidt, and a few norms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_THRESHOLD: f64 = 1e-12;

/// Compensated summation. Terms must be added in a fixed order for the
/// result to be reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `(f, g) = sum_i f_i conj(g_i)`.
pub fn inner(f: &CVector, g: &CVector) -> C64 {
    f.iter().zip(g.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Largest entry of `|A^* A - I|` for the columns of `a`.
pub fn orthonormality_defect(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let n = gram.nrows();
    max_abs(&(gram - CMatrix::identity(n, n)))
}

/// Modified Gram-Schmidt on the columns of `a`, in place.
///
/// Columns that collapse to (numerically) zero are reported as an error since
/// the caller expects a full orthonormal set back.
pub fn orthonormalize_columns(a: &mut CMatrix) -> Result<()> {
    let (rows, cols) = a.shape();
    for k in 0..cols {
        let original = (0..rows).map(|r| a[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..k {
            let mut proj = C64::new(0.0, 0.0);
            for r in 0..rows {
                proj += a[(r, i)].conj() * a[(r, k)];
            }
            for r in 0..rows {
                let v = a[(r, i)];
                a[(r, k)] -= proj * v;
            }
        }
        let norm = (0..rows).map(|r| a[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || norm <= 1e-12 * original {
            return Err(Error::Shape(format!(
                "column {k} is linearly dependent on the preceding columns"
            )));
        }
        for r in 0..rows {
            a[(r, k)] /= norm;
        }
    }
    Ok(())
}

/// Result of a Hermitian eigendecomposition: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic Jacobi for a Hermitian matrix.
///
/// The input is not checked for symmetry; only its upper triangle and the real
/// part of the diagonal are trusted. Sweeps run in fixed row-major pair order
/// until the off-diagonal Frobenius mass drops below `1e-12 * ||A||_F`.
pub fn jacobi_eigh(a: &CMatrix) -> Result<HermitianEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    let mut v = CMatrix::identity(n, n);
    let threshold = JACOBI_REL_THRESHOLD * frobenius_norm(&m);

    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&m) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // e^{-i phi} with apq = r e^{i phi}
                let phase = apq.conj() / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns: G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)] * phase;
                    m[(k, p)] = mp * c - mq * s;
                    m[(k, q)] = mp * s + mq * c;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)] * phase;
                    v[(k, p)] = vp * c - vq * s;
                    v[(k, q)] = vp * s + vq * c;
                }
                // Rows: G^*.
                let phase_c = phase.conj();
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)] * phase_c;
                    m[(p, k)] = mp * c - mq * s;
                    m[(q, k)] = mp * s + mq * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
        sweeps += 1;
        converged = off(&m) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_diagonal: off(&m),
        });
    }
    log::debug!("jacobi_eigh: n = {n}, {sweeps} sweeps");

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the sweep-determined order among exact ties.
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values of any complex matrix by one-sided (Hestenes) Jacobi,
/// returned in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    // Work on the orientation with fewer columns.
    let mut w = if a.ncols() > a.nrows() {
        a.adjoint()
    } else {
        a.clone()
    };
    let (rows, cols) = w.shape();
    if cols == 0 {
        return Vec::new();
    }
    let eps = f64::EPSILON;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for r in 0..rows {
                    let x = w[(r, p)];
                    let y = w[(r, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let x = w[(r, p)];
                    let y = w[(r, q)] * phase;
                    w[(r, p)] = x * c - y * s;
                    w[(r, q)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|c| (0..rows).map(|r| w[(r, c)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Ordinary least-squares slope of `ys` against `xs`; `None` when the `xs`
/// have no spread.
pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * xs.iter().map(|x| x * x).sum::<f64>() {
        return None;
    }
    Some(sxy / sxx)
}
