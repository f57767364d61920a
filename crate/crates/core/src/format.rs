//! Plain-text formats for matrices, partitions, symbols and coefficients.
//!
//! All four share the same lexical rules: lines starting with `#` are
//! comments, blank lines are skipped, and a complex number is written as a
//! `re im` pair. Writers emit at most 17 significant digits and round-trip
//! exactly.
//!
//! ```text
//! CMAT v1   rows cols
//!           <rows lines of cols pairs>
//! PART v1   N J
//!           per block: j d_j lambda_j, then d_j basis vectors of N pairs
//! SYM v1    J
//!           per block: l d_l lambda_l, then d_l rows of d_l pairs
//! COEF v1   J
//!           per block: j d_j, then one row of d_j pairs
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::linalg::{CMatrix, CVector, C64};
use crate::space::{AmbientSpace, Block, CoefficientVector, DenseOperator, EigenPartition, MatrixSymbol};

/// Shortest round-trip decimal for `x`, in plain notation for moderate
/// magnitudes and exponent notation otherwise. `-0` is written as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if a.is_finite() && (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn push_complex(out: &mut String, z: C64) {
    out.push_str(&format_real(z.re));
    out.push(' ');
    out.push_str(&format_real(z.im));
}

fn push_row<'a>(out: &mut String, row: impl Iterator<Item = &'a C64>) {
    for (i, z) in row.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_complex(out, *z);
    }
    out.push('\n');
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn end_column(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.column + t.text.len())
            .unwrap_or(1)
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, column, message)
    }

    fn expect_len(&self, n: usize, what: &str) -> std::result::Result<(), ParseError> {
        if self.tokens.len() != n {
            let column = if self.tokens.len() > n {
                self.tokens[n].column
            } else {
                self.end_column()
            };
            return Err(self.error(
                column,
                format!("expected {n} fields for {what}, found {}", self.tokens.len()),
            ));
        }
        Ok(())
    }

    fn parse<T: FromStr>(&self, i: usize, what: &str) -> std::result::Result<T, ParseError> {
        let t = &self.tokens[i];
        t.text
            .parse()
            .map_err(|_| self.error(t.column, format!("invalid {what}: {:?}", t.text)))
    }

    fn complex_row(&self, len: usize) -> std::result::Result<Vec<C64>, ParseError> {
        self.expect_len(2 * len, &format!("{len} complex entries"))?;
        (0..len)
            .map(|k| {
                Ok(C64::new(
                    self.parse(2 * k, "real part")?,
                    self.parse(2 * k + 1, "imaginary part")?,
                ))
            })
            .collect()
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn next(&mut self, what: &str) -> std::result::Result<Line<'a>, ParseError> {
        for (i, raw) in self.inner.by_ref() {
            self.last_line = i + 1;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = Vec::new();
            let mut offset = 0;
            for piece in raw.split([' ', '\t', '\r']) {
                if !piece.is_empty() {
                    tokens.push(Token {
                        text: piece,
                        column: offset + 1,
                    });
                }
                offset += piece.len() + 1;
            }
            return Ok(Line {
                number: i + 1,
                tokens,
            });
        }
        Err(ParseError::new(
            self.last_line + 1,
            1,
            format!("unexpected end of input, expected {what}"),
        ))
    }

    fn finish(mut self) -> std::result::Result<(), ParseError> {
        match self.next("") {
            Ok(line) => Err(line.error(line.tokens[0].column, "trailing content")),
            Err(_) => Ok(()),
        }
    }
}

fn read_header_index(line: &Line, expected: usize, what: &str) -> std::result::Result<(), ParseError> {
    let j: usize = line.parse(0, &format!("{what} index"))?;
    if j != expected {
        return Err(line.error(
            line.tokens[0].column,
            format!("expected {what} index {expected}, found {j}"),
        ));
    }
    Ok(())
}

pub fn write_cmat(m: &CMatrix) -> String {
    let mut out = String::from("# CMAT v1\n");
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<C64> = m.row(r).iter().copied().collect();
        push_row(&mut out, row.iter());
    }
    out
}

pub fn read_cmat(text: &str) -> Result<CMatrix> {
    let mut lines = Lines::new(text);
    let header = lines.next("matrix header `rows cols`")?;
    header.expect_len(2, "matrix header `rows cols`")?;
    let rows: usize = header.parse(0, "row count")?;
    let cols: usize = header.parse(1, "column count")?;
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        let line = lines.next(&format!("matrix row {r}"))?;
        for (c, z) in line.complex_row(cols)?.into_iter().enumerate() {
            m[(r, c)] = z;
        }
    }
    lines.finish()?;
    Ok(m)
}

pub fn read_operator(text: &str) -> Result<DenseOperator> {
    DenseOperator::new(read_cmat(text)?)
}

pub fn write_partition(p: &EigenPartition) -> String {
    let mut out = String::from("# PART v1\n");
    let _ = writeln!(out, "{} {}", p.dim(), p.len());
    for (j, b) in p.blocks().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", j, b.multiplicity(), format_real(b.lambda));
        for col in b.basis.column_iter() {
            push_row(&mut out, col.iter());
        }
    }
    out
}

pub fn read_partition(text: &str) -> Result<EigenPartition> {
    let mut lines = Lines::new(text);
    let header = lines.next("partition header `N J`")?;
    header.expect_len(2, "partition header `N J`")?;
    let n: usize = header.parse(0, "ambient dimension")?;
    let nblocks: usize = header.parse(1, "block count")?;
    let mut blocks = Vec::with_capacity(nblocks);
    for j in 0..nblocks {
        let line = lines.next(&format!("block header for block {j}"))?;
        line.expect_len(3, "block header `j d_j lambda_j`")?;
        read_header_index(&line, j, "block")?;
        let d: usize = line.parse(1, "multiplicity")?;
        let lambda: f64 = line.parse(2, "eigenvalue")?;
        let mut basis = CMatrix::zeros(n, d);
        for k in 0..d {
            let row = lines.next(&format!("basis vector {k} of block {j}"))?;
            for (i, z) in row.complex_row(n)?.into_iter().enumerate() {
                basis[(i, k)] = z;
            }
        }
        blocks.push(Block::new(lambda, basis));
    }
    lines.finish()?;
    EigenPartition::new(AmbientSpace::new(n)?, blocks)
}

/// A symbol together with the eigenvalues of the blocks it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFile {
    pub symbol: MatrixSymbol,
    pub lambdas: Vec<f64>,
}

pub fn write_symbol(sigma: &MatrixSymbol, lambdas: &[f64]) -> Result<String> {
    if lambdas.len() != sigma.len() {
        return Err(Error::Shape(format!(
            "{} eigenvalues for a symbol with {} blocks",
            lambdas.len(),
            sigma.len()
        )));
    }
    let mut out = String::from("# SYM v1\n");
    let _ = writeln!(out, "{}", sigma.len());
    for (l, (b, &lambda)) in sigma.blocks.iter().zip(lambdas).enumerate() {
        let _ = writeln!(out, "{} {} {}", l, b.nrows(), format_real(lambda));
        for r in 0..b.nrows() {
            let row: Vec<C64> = b.row(r).iter().copied().collect();
            push_row(&mut out, row.iter());
        }
    }
    Ok(out)
}

pub fn read_symbol(text: &str) -> Result<SymbolFile> {
    let mut lines = Lines::new(text);
    let header = lines.next("symbol header `J`")?;
    header.expect_len(1, "symbol header `J`")?;
    let nblocks: usize = header.parse(0, "block count")?;
    let mut blocks = Vec::with_capacity(nblocks);
    let mut lambdas = Vec::with_capacity(nblocks);
    for l in 0..nblocks {
        let line = lines.next(&format!("block header for block {l}"))?;
        line.expect_len(3, "block header `l d_l lambda_l`")?;
        read_header_index(&line, l, "block")?;
        let d: usize = line.parse(1, "block size")?;
        lambdas.push(line.parse(2, "eigenvalue")?);
        let mut m = CMatrix::zeros(d, d);
        for r in 0..d {
            let row = lines.next(&format!("row {r} of block {l}"))?;
            for (c, z) in row.complex_row(d)?.into_iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        blocks.push(m);
    }
    lines.finish()?;
    Ok(SymbolFile {
        symbol: MatrixSymbol::new(blocks)?,
        lambdas,
    })
}

pub fn write_coefficients(c: &CoefficientVector) -> String {
    let mut out = String::from("# COEF v1\n");
    let _ = writeln!(out, "{}", c.blocks.len());
    for (j, b) in c.blocks.iter().enumerate() {
        let _ = writeln!(out, "{} {}", j, b.len());
        push_row(&mut out, b.iter());
    }
    out
}

pub fn read_coefficients(text: &str) -> Result<CoefficientVector> {
    let mut lines = Lines::new(text);
    let header = lines.next("coefficient header `J`")?;
    header.expect_len(1, "coefficient header `J`")?;
    let nblocks: usize = header.parse(0, "block count")?;
    let mut blocks = Vec::with_capacity(nblocks);
    for j in 0..nblocks {
        let line = lines.next(&format!("block header for block {j}"))?;
        line.expect_len(2, "block header `j d_j`")?;
        read_header_index(&line, j, "block")?;
        let d: usize = line.parse(1, "block length")?;
        let row = lines.next(&format!("coefficients of block {j}"))?;
        blocks.push(CVector::from_vec(row.complex_row(d)?));
    }
    lines.finish()?;
    Ok(CoefficientVector::new(blocks))
}
