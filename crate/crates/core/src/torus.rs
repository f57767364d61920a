//! Truncated Fourier model of the n-torus.
//!
//! Coordinates are frequency coordinates: coordinate `alpha` is the exponential
//! `e^{2 pi i j_alpha . x}`, so the Fourier basis is the standard basis and no
//! sampling happens. Frequencies live in the cube `|j|_inf <= K` and are ordered
//! by `|j|^2`, then lexicographically.
//!
//! Two partitions are available. The fine one has one block per frequency; its
//! block "eigenvalues" are the synthetic indices `0, 1, 2, ...` (the spectrum of
//! `diag(0, 1, 2, ...)`), not Laplacian eigenvalues. The coarse one groups
//! frequencies by `|j|^2`, which are the eigenspaces of the Laplacian (without
//! the `4 pi^2` factor). Coarse blocks with `|j|^2 > K^2` are missing lattice
//! points that lie outside the cube and are flagged as truncated.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};
use crate::multiplier::{is_invariant, InvarianceReport};
use crate::space::{AmbientSpace, DenseOperator, EigenPartition};

pub const MAX_DIMENSION: usize = 3;

/// Squared Euclidean length of a lattice point.
pub fn norm_sqr(j: &[i64]) -> u64 {
    j.iter().map(|&x| (x * x) as u64).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusModel {
    n: usize,
    cutoff: usize,
    frequencies: Vec<Vec<i64>>,
    ambient: AmbientSpace,
}

/// One row of the coarse multiplicity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoarseLevel {
    pub ell: u64,
    pub multiplicity: usize,
    /// The cube cutoff drops lattice points with this `|j|^2`.
    pub truncated: bool,
}

pub fn build_torus_model(n: usize, cutoff: usize) -> Result<TorusModel> {
    if !(1..=MAX_DIMENSION).contains(&n) {
        return Err(Error::Argument(format!(
            "torus dimension must be 1, 2 or 3, got {n}"
        )));
    }
    if cutoff == 0 {
        return Err(Error::Argument("torus cutoff must be at least 1".into()));
    }
    let k = cutoff as i64;
    let side = 2 * cutoff + 1;
    let mut frequencies: Vec<Vec<i64>> = (0..side.pow(n as u32))
        .map(|mut idx| {
            let mut j = vec![0i64; n];
            for x in j.iter_mut().rev() {
                *x = (idx % side) as i64 - k;
                idx /= side;
            }
            j
        })
        .collect();
    frequencies.sort_by(|a, b| norm_sqr(a).cmp(&norm_sqr(b)).then_with(|| a.cmp(b)));
    let labels = frequencies.iter().map(|j| format_frequency(j)).collect();
    let ambient = AmbientSpace::with_labels(frequencies.len(), labels)?;
    Ok(TorusModel {
        n,
        cutoff,
        frequencies,
        ambient,
    })
}

fn format_frequency(j: &[i64]) -> String {
    let parts: Vec<String> = j.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

impl TorusModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[Vec<i64>] {
        &self.frequencies
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    /// Coordinate of frequency `j`, if it is in the model.
    pub fn index_of(&self, j: &[i64]) -> Option<usize> {
        self.frequencies.iter().position(|f| f.as_slice() == j)
    }

    /// Realized values of `|j|^2` with their counts, ascending.
    pub fn coarse_levels(&self) -> Vec<CoarseLevel> {
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for j in &self.frequencies {
            *counts.entry(norm_sqr(j)).or_default() += 1;
        }
        let complete_up_to = (self.cutoff * self.cutoff) as u64;
        counts
            .into_iter()
            .map(|(ell, multiplicity)| CoarseLevel {
                ell,
                multiplicity,
                truncated: ell > complete_up_to,
            })
            .collect()
    }
}

pub fn fine_partition(model: &TorusModel) -> EigenPartition {
    let n = model.dim();
    let lambdas: Vec<f64> = (0..n).map(|i| i as f64).collect();
    EigenPartition::from_standard_basis(&lambdas, &vec![1; n])
        .expect("singleton blocks of the standard basis form a partition")
}

pub fn coarse_partition(model: &TorusModel) -> EigenPartition {
    let levels = model.coarse_levels();
    let lambdas: Vec<f64> = levels.iter().map(|l| l.ell as f64).collect();
    let dims: Vec<usize> = levels.iter().map(|l| l.multiplicity).collect();
    EigenPartition::from_standard_basis(&lambdas, &dims)
        .expect("frequency ordering makes coarse blocks contiguous")
}

/// Number of lattice points with `|j|_inf <= K` and `|j|^2 = ell`, by direct
/// enumeration of the cube.
pub fn multiplicity(ell: u64, n: usize, cutoff: usize) -> usize {
    fn count(ell: u64, left: usize, k: i64) -> usize {
        if left == 0 {
            return usize::from(ell == 0);
        }
        (-k..=k)
            .filter_map(|x| ell.checked_sub((x * x) as u64))
            .map(|rest| count(rest, left - 1, k))
            .sum()
    }
    count(ell, n, cutoff as i64)
}

/// A complex-valued function on lattice points, possibly partial.
pub struct MultiplierFunction {
    f: Box<dyn Fn(&[i64]) -> Option<C64> + Send + Sync>,
}

impl MultiplierFunction {
    /// Total multiplier.
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[i64]) -> C64 + Send + Sync + 'static,
    {
        Self {
            f: Box::new(move |j| Some(f(j))),
        }
    }

    /// Multiplier that may be undefined at some frequencies.
    pub fn partial<F>(f: F) -> Self
    where
        F: Fn(&[i64]) -> Option<C64> + Send + Sync + 'static,
    {
        Self { f: Box::new(f) }
    }

    /// Function of `|j|^2` only.
    pub fn radial<F>(f: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Self::new(move |j| f(norm_sqr(j) as f64))
    }

    pub fn eval(&self, j: &[i64]) -> Option<C64> {
        (self.f)(j)
    }
}

impl fmt::Debug for MultiplierFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MultiplierFunction")
    }
}

/// Diagonal operator with entry `a(j_alpha)` at coordinate `alpha`.
pub fn translation_invariant_operator(
    a: &MultiplierFunction,
    model: &TorusModel,
) -> Result<DenseOperator> {
    let mut diag = Vec::with_capacity(model.dim());
    for j in model.frequencies() {
        match a.eval(j) {
            Some(z) if z.re.is_finite() && z.im.is_finite() => diag.push(z),
            _ => return Err(Error::UndefinedMultiplier(j.clone())),
        }
    }
    DenseOperator::new(CMatrix::from_diagonal(&CVector::from_vec(diag)))
}

/// Identity except for a plane rotation by `angle` between frequencies `a`
/// and `b`. With `|a|^2 = |b|^2` this is invariant for the coarse partition
/// but not translation invariant.
pub fn frequency_rotation(
    model: &TorusModel,
    a: &[i64],
    b: &[i64],
    angle: f64,
) -> Result<DenseOperator> {
    let ia = model
        .index_of(a)
        .ok_or_else(|| Error::Argument(format!("frequency {a:?} not in model")))?;
    let ib = model
        .index_of(b)
        .ok_or_else(|| Error::Argument(format!("frequency {b:?} not in model")))?;
    if ia == ib {
        return Err(Error::Argument("rotation needs two distinct frequencies".into()));
    }
    let n = model.dim();
    let mut m = CMatrix::identity(n, n);
    let (c, s) = (C64::new(angle.cos(), 0.0), C64::new(angle.sin(), 0.0));
    m[(ia, ia)] = c;
    m[(ib, ib)] = c;
    m[(ia, ib)] = -s;
    m[(ib, ia)] = s;
    DenseOperator::new(m)
}

/// Invariance of one operator for both torus partitions.
#[derive(Debug, Clone)]
pub struct PartitionContrast {
    pub name: String,
    pub fine: InvarianceReport,
    pub coarse: InvarianceReport,
}

/// Invariance verdicts of the Laplacian, a heat multiplier, and a rotation
/// inside the `|j|^2 = 1` level, for both partitions.
pub fn two_partition_contrast(model: &TorusModel, tol: f64) -> Result<Vec<PartitionContrast>> {
    let fine = fine_partition(model);
    let coarse = coarse_partition(model);
    let mut a = vec![0i64; model.n()];
    let mut b = vec![0i64; model.n()];
    a[0] = 1;
    b[model.n() - 1] = 1;

    let mut cases: Vec<(String, DenseOperator)> = vec![
        (
            "laplacian".into(),
            translation_invariant_operator(&MultiplierFunction::radial(|l| C64::new(l, 0.0)), model)?,
        ),
        (
            "heat_t1".into(),
            translation_invariant_operator(
                &MultiplierFunction::radial(|l| C64::new((-l).exp(), 0.0)),
                model,
            )?,
        ),
    ];
    if model.n() >= 2 {
        cases.push((
            "rotation_ell1".into(),
            frequency_rotation(model, &a, &b, std::f64::consts::FRAC_PI_4)?,
        ));
    }
    cases
        .into_iter()
        .map(|(name, t)| {
            Ok(PartitionContrast {
                name,
                fine: is_invariant(&t, &fine, tol)?,
                coarse: is_invariant(&t, &coarse, tol)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::extract_symbol;

    #[test]
    fn model_shapes() {
        let m = build_torus_model(1, 1).unwrap();
        assert_eq!(m.frequencies(), &[vec![0], vec![-1], vec![1]]);
        let m = build_torus_model(2, 1).unwrap();
        let ells: Vec<u64> = m.frequencies().iter().map(|j| norm_sqr(j)).collect();
        assert_eq!(ells, vec![0, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(build_torus_model(2, 4).unwrap().dim(), 81);
        assert_eq!(build_torus_model(3, 2).unwrap().dim(), 125);
        assert!(build_torus_model(4, 1).is_err());
        assert!(build_torus_model(0, 1).is_err());
        assert!(build_torus_model(2, 0).is_err());
    }

    #[test]
    fn coarse_multiplicities() {
        let m = build_torus_model(2, 2).unwrap();
        let p = coarse_partition(&m);
        assert_eq!(p.lambdas(), vec![0.0, 1.0, 2.0, 4.0, 5.0, 8.0]);
        assert_eq!(p.multiplicities(), vec![1, 4, 4, 4, 8, 4]);
        let flags: Vec<bool> = m.coarse_levels().iter().map(|l| l.truncated).collect();
        assert_eq!(flags, vec![false, false, false, false, true, true]);

        let m = build_torus_model(1, 3).unwrap();
        let p = coarse_partition(&m);
        assert_eq!(p.lambdas(), vec![0.0, 1.0, 4.0, 9.0]);
        assert_eq!(p.multiplicities(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn coarse_blocks_are_unions_of_fine_blocks() {
        let m = build_torus_model(2, 2).unwrap();
        let fine = fine_partition(&m);
        let coarse = coarse_partition(&m);
        assert_eq!(fine.len(), 25);
        for b in coarse.blocks() {
            // every coarse basis vector is one of the fine singletons
            for col in b.basis.column_iter() {
                let hits = fine
                    .blocks()
                    .iter()
                    .filter(|f| (f.basis.column(0) - col).norm() < 1e-12)
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn multiplicity_by_enumeration() {
        assert_eq!(multiplicity(5, 2, 2), 8);
        assert_eq!(multiplicity(5, 2, 7), 8);
        assert_eq!(multiplicity(3, 2, 10), 0);
        for n in 1..=3 {
            assert_eq!(multiplicity(0, n, 3), 1);
        }
        // truncated level: (2,2) only
        assert_eq!(multiplicity(8, 2, 2), 4);
        assert_eq!(multiplicity(25, 2, 7), 12);
    }

    #[test]
    fn translation_invariant_examples() {
        let m = build_torus_model(2, 2).unwrap();
        let id = translation_invariant_operator(&MultiplierFunction::new(|_| C64::new(1.0, 0.0)), &m).unwrap();
        assert_eq!(id, DenseOperator::identity(25));

        let lap = translation_invariant_operator(&MultiplierFunction::radial(|l| C64::new(l, 0.0)), &m).unwrap();
        let coarse = coarse_partition(&m);
        let s = extract_symbol(&lap, &coarse).unwrap();
        for (b, block) in s.blocks.iter().zip(coarse.blocks()) {
            let d = block.multiplicity();
            assert_eq!(*b, CMatrix::identity(d, d) * C64::new(block.lambda, 0.0));
        }

        let undefined = MultiplierFunction::partial(|j| if j == [1, 0] { None } else { Some(C64::new(1.0, 0.0)) });
        assert!(matches!(
            translation_invariant_operator(&undefined, &m),
            Err(Error::UndefinedMultiplier(j)) if j == vec![1, 0]
        ));
    }

    #[test]
    fn rotation_contrast() {
        let m = build_torus_model(2, 2).unwrap();
        let rows = two_partition_contrast(&m, 1e-8).unwrap();
        for r in &rows[..2] {
            assert!(r.fine.invariant && r.coarse.invariant, "{}", r.name);
        }
        let rot = &rows[2];
        assert!(rot.coarse.invariant);
        assert!(rot.coarse.max_leakage <= 1e-12);
        assert!(!rot.fine.invariant);
        assert!(rot.fine.max_leakage > 1e-3);
    }
}
