//! Quantities of an invariant operator read off its symbol: operator norm,
//! Schatten quasi-norms, trace, and Sobolev-type growth and decay profiles.
//!
//! All reductions over blocks run in ascending block order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, least_squares_slope, CMatrix, KahanSum, C64};
use crate::space::{CoefficientVector, EigenPartition, MatrixSymbol};

/// Coefficient norms at or below this are treated as zero in decay fits.
pub const DECAY_FLOOR: f64 = 1e-300;

/// Schatten exponent `r` in `(0, inf]`; `inf` is the operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenExponent(f64);

impl SchattenExponent {
    pub const INFINITY: SchattenExponent = SchattenExponent(f64::INFINITY);

    pub fn new(r: f64) -> Result<Self> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::Exponent(r));
        }
        Ok(Self(r))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for SchattenExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for SchattenExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Self::INFINITY);
        }
        let r: f64 = s
            .parse()
            .map_err(|_| Error::Argument(format!("not a Schatten exponent: {s:?}")))?;
        Self::new(r)
    }
}

/// Growth bound `||sigma(l)||_op <= C (1 + lambda_l)^{m / nu}` fitted to a
/// symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevFit {
    pub nu: f64,
    pub m: f64,
    pub c: f64,
    /// `C (1 + lambda_l)^{m/nu} - ||sigma(l)||_op` for every block.
    pub residuals: Vec<f64>,
}

/// Singular values of a square block, descending.
pub fn block_singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "singular values need a square block, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(linalg::singular_values(a))
}

fn block_operator_norm(a: &CMatrix) -> Result<f64> {
    Ok(block_singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// `sup_l ||sigma(l)||_op`, the operator norm of the quantized operator.
pub fn operator_norm_from_symbol(sigma: &MatrixSymbol) -> Result<f64> {
    if sigma.is_empty() {
        return Err(Error::EmptySymbol);
    }
    let mut best: f64 = 0.0;
    for b in &sigma.blocks {
        best = best.max(block_operator_norm(b)?);
    }
    Ok(best)
}

/// `(sum_l sum_k s_k(sigma(l))^r)^{1/r}`; a quasi-norm for `r < 1`.
pub fn schatten_norm(sigma: &MatrixSymbol, r: SchattenExponent) -> Result<f64> {
    if r.is_infinite() {
        return operator_norm_from_symbol(sigma);
    }
    let r = r.value();
    let mut acc = KahanSum::new();
    for b in &sigma.blocks {
        for s in block_singular_values(b)? {
            acc.add(s.powf(r));
        }
    }
    Ok(acc.value().powf(1.0 / r))
}

/// `sum_l Tr sigma(l)`.
pub fn trace_from_symbol(sigma: &MatrixSymbol) -> C64 {
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for b in &sigma.blocks {
        for z in b.diagonal().iter() {
            re.add(z.re);
            im.add(z.im);
        }
    }
    C64::new(re.value(), im.value())
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Argument(format!("order nu must be positive, got {nu}")));
    }
    Ok(())
}

fn log_one_plus(lambda: f64, block: usize) -> Result<f64> {
    if !(lambda > -1.0) {
        return Err(Error::Argument(format!(
            "block {block}: 1 + lambda = {} is not positive",
            1.0 + lambda
        )));
    }
    Ok(lambda.ln_1p())
}

/// Fit the growth order of a symbol from per-block eigenvalues.
///
/// `m` is the least-squares slope of `log ||sigma(l)||_op` against
/// `log(1 + lambda_l) / nu` over nonzero blocks; `C` is then the smallest
/// constant for which the bound holds on every block.
pub fn sobolev_fit_with_lambdas(sigma: &MatrixSymbol, lambdas: &[f64], nu: f64) -> Result<SobolevFit> {
    check_nu(nu)?;
    if lambdas.len() != sigma.len() {
        return Err(Error::Shape(format!(
            "{} eigenvalues for a symbol with {} blocks",
            lambdas.len(),
            sigma.len()
        )));
    }
    let mut norms = Vec::with_capacity(sigma.len());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (l, (b, &lambda)) in sigma.blocks.iter().zip(lambdas).enumerate() {
        let norm = block_operator_norm(b)?;
        let x = log_one_plus(lambda, l)? / nu;
        norms.push((x, norm));
        if norm > 0.0 {
            xs.push(x);
            ys.push(norm.ln());
        }
    }
    let m = match least_squares_slope(&xs, &ys) {
        Some(m) => m,
        None => {
            return Err(Error::InsufficientData {
                usable: xs.len(),
                needed: 2,
            })
        }
    };
    // ||sigma(l)|| / (1+lambda)^{m/nu} = exp(ln||sigma|| - m x)
    let c = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - m * x).exp())
        .fold(0.0, f64::max);
    let residuals = norms
        .iter()
        .map(|&(x, norm)| c * (m * x).exp() - norm)
        .collect();
    Ok(SobolevFit { nu, m, c, residuals })
}

pub fn sobolev_fit(sigma: &MatrixSymbol, p: &EigenPartition, nu: f64) -> Result<SobolevFit> {
    sigma.check_aligned(p)?;
    sobolev_fit_with_lambdas(sigma, &p.lambdas(), nu)
}

/// Fitted decay exponent `N` in `|f^(j)| ~ (1 + lambda_j)^{-N}`.
///
/// This is a profile from finitely many blocks, not a smoothness verdict.
pub fn decay_order(c: &CoefficientVector, p: &EigenPartition) -> Result<f64> {
    c.check_aligned(p)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (j, (norm, b)) in c.block_norms().into_iter().zip(p.blocks()).enumerate() {
        if norm > DECAY_FLOOR {
            xs.push(-log_one_plus(b.lambda, j)?);
            ys.push(norm.ln());
        }
    }
    least_squares_slope(&xs, &ys).ok_or(Error::InsufficientData {
        usable: xs.len(),
        needed: 2,
    })
}

/// `(sum_{j,k} (1 + lambda_j)^{2s/nu} |c(j, k)|^2)^{1/2}`.
pub fn sobolev_norm(c: &CoefficientVector, p: &EigenPartition, s: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    c.check_aligned(p)?;
    let mut acc = KahanSum::new();
    for (j, (cj, b)) in c.blocks.iter().zip(p.blocks()).enumerate() {
        let weight = (2.0 * s / nu * log_one_plus(b.lambda, j)?).exp();
        for z in cj.iter() {
            acc.add(weight * z.norm_sqr());
        }
    }
    Ok(acc.value().sqrt())
}
