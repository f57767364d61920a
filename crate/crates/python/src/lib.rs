//! Python bindings. Matrices cross the boundary as lists of rows of
//! `complex`, vectors as lists of `complex`.

use fmc_core::analysis::{self, SchattenExponent};
use fmc_core::multiplier;
use fmc_core::spectral::{self, ClusteringPolicy};
use fmc_core::{format, torus, CMatrix, CVector, DenseOperator, EigenPartition, Error, MatrixSymbol, C64};
use pyo3::exceptions::{PyArithmeticError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

type Rows = Vec<Vec<C64>>;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::BlockIndex { .. } => PyIndexError::new_err(err.to_string()),
        e if e.is_numerical() => PyArithmeticError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn matrix(rows: Rows) -> PyResult<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(CMatrix::from_row_iterator(r, c, rows.into_iter().flatten()))
}

fn rows(m: &CMatrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn operator(rows: Rows) -> PyResult<DenseOperator> {
    DenseOperator::new(matrix(rows)?).map_err(to_py)
}

/// Orthogonal decomposition of C^N into eigenspaces.
#[pyclass(name = "Partition", module = "fmc", frozen)]
struct PyPartition {
    inner: EigenPartition,
}

#[pymethods]
impl PyPartition {
    /// Blocks taken from consecutive columns of a unitary matrix.
    #[new]
    fn new(unitary: Rows, lambdas: Vec<f64>, dims: Vec<usize>) -> PyResult<Self> {
        let u = matrix(unitary)?;
        let inner = EigenPartition::from_unitary_columns(&u, &lambdas, &dims).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Eigenspaces of a Hermitian matrix, clustered with the given tolerances.
    #[staticmethod]
    #[pyo3(signature = (matrix, rel_tol = 1e-9, abs_tol = 1e-12))]
    fn from_operator(matrix: Rows, rel_tol: f64, abs_tol: f64) -> PyResult<Self> {
        let policy = ClusteringPolicy::new(rel_tol, abs_tol).map_err(to_py)?;
        let inner = spectral::partition_from_operator(&operator(matrix)?, &policy).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: format::read_partition(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        format::write_partition(&self.inner)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas()
    }

    #[getter]
    fn multiplicities(&self) -> Vec<usize> {
        self.inner.multiplicities()
    }

    fn basis(&self, j: usize) -> PyResult<Rows> {
        Ok(rows(&self.inner.block(j).map_err(to_py)?.basis))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Partition(dim={}, blocks={})", self.inner.dim(), self.inner.len())
    }

    /// Block coefficients of a vector.
    fn coefficients(&self, f: Vec<C64>) -> PyResult<Vec<Vec<C64>>> {
        let c = fmc_core::coefficients(&CVector::from_vec(f), &self.inner).map_err(to_py)?;
        Ok(c.blocks.iter().map(|b| b.iter().copied().collect()).collect())
    }

    fn synthesize(&self, coefficients: Vec<Vec<C64>>) -> PyResult<Vec<C64>> {
        let c = fmc_core::CoefficientVector {
            blocks: coefficients.into_iter().map(CVector::from_vec).collect(),
        };
        Ok(fmc_core::synthesize(&c, &self.inner).map_err(to_py)?.iter().copied().collect())
    }

    fn project(&self, f: Vec<C64>, j: usize) -> PyResult<Vec<C64>> {
        let p = fmc_core::project(&CVector::from_vec(f), j, &self.inner).map_err(to_py)?;
        Ok(p.iter().copied().collect())
    }
}

/// Block-diagonal symbol, one square matrix per block.
#[pyclass(name = "Symbol", module = "fmc", frozen)]
struct PySymbol {
    inner: MatrixSymbol,
}

#[pymethods]
impl PySymbol {
    #[new]
    fn new(blocks: Vec<Rows>) -> PyResult<Self> {
        let blocks = blocks.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: MatrixSymbol::new(blocks).map_err(to_py)?,
        })
    }

    /// Symbol of an operator that is invariant for the partition.
    #[staticmethod]
    fn extract(matrix: Rows, partition: &PyPartition) -> PyResult<Self> {
        let inner = multiplier::extract_symbol(&operator(matrix)?, &partition.inner).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Symbol of `F(E)` for a scalar function of the eigenvalue.
    #[staticmethod]
    fn of_function(function: Bound<'_, PyAny>, partition: &PyPartition) -> PyResult<Self> {
        let mut blocks = Vec::with_capacity(partition.inner.len());
        for b in partition.inner.blocks() {
            let value: C64 = function.call1((b.lambda,))?.extract()?;
            blocks.push(CMatrix::identity(b.multiplicity(), b.multiplicity()) * value);
        }
        Ok(Self {
            inner: MatrixSymbol::new(blocks).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<(Self, Vec<f64>)> {
        let file = format::read_symbol(text).map_err(to_py)?;
        Ok((Self { inner: file.symbol }, file.lambdas))
    }

    fn to_text(&self, lambdas: Vec<f64>) -> PyResult<String> {
        format::write_symbol(&self.inner, &lambdas).map_err(to_py)
    }

    #[getter]
    fn blocks(&self) -> Vec<Rows> {
        self.inner.blocks.iter().map(rows).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Symbol(sizes={:?})", self.inner.sizes())
    }

    fn quantize(&self, partition: &PyPartition) -> PyResult<Rows> {
        Ok(rows(multiplier::quantize(&self.inner, &partition.inner).map_err(to_py)?.matrix()))
    }

    fn compose(&self, other: &PySymbol) -> PyResult<Self> {
        let inner = multiplier::compose_symbols(&self.inner, &other.inner).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Schatten norm; `float("inf")` gives the operator norm.
    fn schatten_norm(&self, r: f64) -> PyResult<f64> {
        let r = SchattenExponent::new(r).map_err(to_py)?;
        analysis::schatten_norm(&self.inner, r).map_err(to_py)
    }

    fn operator_norm(&self) -> PyResult<f64> {
        analysis::operator_norm_from_symbol(&self.inner).map_err(to_py)
    }

    fn trace(&self) -> C64 {
        analysis::trace_from_symbol(&self.inner)
    }

    /// Fit of `|sigma(j)| ~ C (1 + lambda_j)^(m/nu)`; returns `(m, C)`.
    fn sobolev_fit(&self, partition: &PyPartition, nu: f64) -> PyResult<(f64, f64)> {
        let fit = analysis::sobolev_fit(&self.inner, &partition.inner, nu).map_err(to_py)?;
        Ok((fit.m, fit.c))
    }
}

/// Leakage report as a dict with `invariant`, `leakage`, `worst_pair`, `tolerance`.
#[pyfunction]
#[pyo3(signature = (matrix, partition, tol = multiplier::DEFAULT_INVARIANCE_TOL))]
fn is_invariant<'py>(py: Python<'py>, matrix: Rows, partition: &PyPartition, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = multiplier::is_invariant(&operator(matrix)?, &partition.inner, tol).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("invariant", r.invariant)?;
    d.set_item("leakage", r.max_leakage)?;
    d.set_item("worst_pair", r.worst_pair)?;
    d.set_item("tolerance", r.tolerance_used)?;
    Ok(d)
}

/// Scaled commutator norm of `t` against `e`.
#[pyfunction]
fn commutes_with(t: Rows, e: Rows) -> PyResult<f64> {
    multiplier::commutes_with(&operator(t)?, &operator(e)?).map_err(to_py)
}

/// `(ell, multiplicity, truncated)` for each realized level of the cube of cutoff `k`.
#[pyfunction]
fn torus_levels(n: usize, k: usize) -> PyResult<Vec<(u64, usize, bool)>> {
    let model = torus::build_torus_model(n, k).map_err(to_py)?;
    Ok(model.coarse_levels()
        .into_iter()
        .map(|l| (l.ell, l.multiplicity, l.truncated))
        .collect())
}

/// Fine (one block per frequency) and coarse (one block per level) partitions.
#[pyfunction]
fn torus_partitions(n: usize, k: usize) -> PyResult<(PyPartition, PyPartition)> {
    let model = torus::build_torus_model(n, k).map_err(to_py)?;
    Ok((
        PyPartition {
            inner: torus::fine_partition(&model),
        },
        PyPartition {
            inner: torus::coarse_partition(&model),
        },
    ))
}

/// Frequencies of the torus model in basis order.
#[pyfunction]
fn torus_frequencies(n: usize, k: usize) -> PyResult<Vec<Vec<i64>>> {
    Ok(torus::build_torus_model(n, k).map_err(to_py)?.frequencies().to_vec())
}

#[pymodule]
fn fmc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartition>()?;
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(is_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(commutes_with, m)?)?;
    m.add_function(wrap_pyfunction!(torus_levels, m)?)?;
    m.add_function(wrap_pyfunction!(torus_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(torus_frequencies, m)?)?;
    Ok(())
}
