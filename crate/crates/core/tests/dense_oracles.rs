//! Symbol-side computations checked against dense linear algebra on the
//! quantized operator, using nalgebra's own SVD, eigensolver and matrix
//! exponential as independent references.

use fmc_core::analysis::{
    operator_norm_from_symbol, schatten_norm, sobolev_norm, trace_from_symbol, SchattenExponent,
};
use fmc_core::linalg::{frobenius_norm, max_abs};
use fmc_core::multiplier::{check_basis_covariance, extract_symbol, quantize, symbol_of_function};
use fmc_core::random::{random_block_sizes, random_partition, random_symbol, random_unitary, random_vector};
use fmc_core::spectral::{hermitian_eigendecompose, partition_from_operator, ClusteringPolicy};
use fmc_core::{coefficients, synthesize, CMatrix, CVector, DenseOperator, EigenPartition, MatrixSymbol, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_singular_values(m: &CMatrix) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn dense_schatten(m: &CMatrix, r: f64) -> f64 {
    let sv = dense_singular_values(m);
    if r.is_infinite() {
        return sv.into_iter().fold(0.0, f64::max);
    }
    sv.iter().map(|s| s.powf(r)).sum::<f64>().powf(1.0 / r)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

#[test]
fn schatten_norms_match_dense_singular_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for &(n, max_block) in &[(8, 2), (24, 4), (48, 8)] {
        for _ in 0..10 {
            let dims = random_block_sizes(&mut rng, n, max_block);
            let p = random_partition(&mut rng, &dims);
            let sigma = random_symbol(&mut rng, &p);
            let t = quantize(&sigma, &p).unwrap();
            for r in [0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
                let exp = SchattenExponent::new(r).unwrap();
                let ours = schatten_norm(&sigma, exp).unwrap();
                let dense = dense_schatten(t.matrix(), r);
                assert!(rel_close(ours, dense, 1e-8), "n={n} r={r}: {ours} vs {dense}");
            }
        }
    }
}

#[test]
fn operator_norm_and_trace_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..20 {
        let dims = random_block_sizes(&mut rng, 20, 5);
        let p = random_partition(&mut rng, &dims);
        let sigma = random_symbol(&mut rng, &p);
        let t = quantize(&sigma, &p).unwrap();
        let dense_norm = dense_singular_values(t.matrix())[0];
        assert!(rel_close(operator_norm_from_symbol(&sigma).unwrap(), dense_norm, 1e-8));
        let tr = trace_from_symbol(&sigma);
        let dense_tr = t.matrix().trace();
        assert!((tr - dense_tr).norm() <= 1e-10 * 1f64.max(tr.norm()));
    }
}

#[test]
fn singular_values_satisfy_frobenius_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for n in 1..=8 {
        let a = fmc_core::random::random_matrix(&mut rng, n, n);
        let sv = fmc_core::analysis::block_singular_values(&a).unwrap();
        let sum: f64 = sv.iter().map(|s| s * s).sum();
        let fro = frobenius_norm(&a).powi(2);
        assert!((sum - fro).abs() <= 1e-10 * fro);
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        let dense = dense_singular_values(&a);
        for (x, y) in sv.iter().zip(&dense) {
            assert!((x - y).abs() <= 1e-10 * dense[0]);
        }
    }
}

#[test]
fn eigensolver_matches_reference_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for n in [2, 5, 16, 40] {
        let a = fmc_core::random::random_matrix(&mut rng, n, n);
        let h = (&a + a.adjoint()).scale(0.5);
        let eig = hermitian_eigendecompose(&DenseOperator::new(h.clone()).unwrap()).unwrap();
        let mut reference: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
        }
        // E V = V diag(values), columnwise
        for (k, &lambda) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(k);
            let resid = &h * v - v * C64::new(lambda, 0.0);
            assert!(resid.norm() < 1e-8);
        }
        assert!(fmc_core::linalg::orthonormality_defect(&eig.vectors) < 1e-10);
    }
}

/// Hermitian reference operator with prescribed spectrum in a random basis.
fn reference_operator(rng: &mut ChaCha8Rng, spectrum: &[f64]) -> DenseOperator {
    let n = spectrum.len();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        spectrum.iter().map(|&x| C64::new(x, 0.0)),
    ));
    let e = &u * d * u.adjoint();
    DenseOperator::new((&e + e.adjoint()).scale(0.5)).unwrap()
}

#[test]
fn heat_semigroup_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut spectrum: Vec<f64> = Vec::new();
    for j in 0..12 {
        for _ in 0..rng.gen_range(1..=3) {
            spectrum.push(0.5 * j as f64);
        }
    }
    let e = reference_operator(&mut rng, &spectrum);
    let p = partition_from_operator(&e, &ClusteringPolicy::default()).unwrap();
    for t in [0.1, 1.0] {
        let sigma = symbol_of_function(|l| C64::new((-t * l).exp(), 0.0), &p).unwrap();
        let ours = quantize(&sigma, &p).unwrap();
        let reference = (e.matrix() * C64::new(-t, 0.0)).exp();
        assert!(max_abs(&(ours.matrix() - reference)) < 1e-8);
    }
}

#[test]
fn spectral_reconstruction_from_identity_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let e = reference_operator(&mut rng, &[0.0, 1.0, 1.0, 2.5, 2.5, 2.5, 7.0]);
    let p = partition_from_operator(&e, &ClusteringPolicy::default()).unwrap();
    assert_eq!(p.multiplicities(), vec![1, 2, 3, 1]);
    let sigma = symbol_of_function(|l| C64::new(l, 0.0), &p).unwrap();
    let back = quantize(&sigma, &p).unwrap();
    assert!(max_abs(&(back.matrix() - e.matrix())) < 1e-8);
    let extracted = extract_symbol(&e, &p).unwrap();
    for (a, b) in extracted.blocks.iter().zip(&sigma.blocks) {
        assert!(max_abs(&(a - b)) < 1e-8);
    }
}

#[test]
fn sobolev_norm_matches_operator_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let p = EigenPartition::from_unitary_columns(
        &random_unitary(&mut rng, 9),
        &[0.0, 1.0, 3.0, 6.0],
        &[2, 3, 1, 3],
    )
    .unwrap();
    let f = random_vector(&mut rng, 9);
    let c = coefficients(&f, &p).unwrap();
    let f = synthesize(&c, &p).unwrap();
    for (s, nu) in [(0.0, 2.0), (1.0, 2.0), (-1.5, 1.0), (2.0, 0.5)] {
        let weight = quantize(
            &symbol_of_function(|l| C64::new((1.0 + l).powf(s / nu), 0.0), &p).unwrap(),
            &p,
        )
        .unwrap();
        let dense = weight.apply(&f).unwrap().norm();
        let ours = sobolev_norm(&c, &p, s, nu).unwrap();
        assert!(rel_close(ours, dense, 1e-10), "s={s}: {ours} vs {dense}");
    }
}

#[test]
fn norms_are_invariant_under_block_diagonal_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let p = random_partition(&mut rng, &[3, 1, 2, 4]);
    let sigma = random_symbol(&mut rng, &p);
    let t = quantize(&sigma, &p).unwrap();

    // unitary acting inside each block
    let v = p.basis_matrix();
    let mut inner = CMatrix::zeros(10, 10);
    for (j, d) in p.multiplicities().into_iter().enumerate() {
        let o = p.offset(j);
        inner.view_mut((o, o), (d, d)).copy_from(&random_unitary(&mut rng, d));
    }
    let u = DenseOperator::new(&v * inner * v.adjoint()).unwrap();
    assert!(check_basis_covariance(&t, &u, &p).unwrap() < 1e-10);

    let conj = fmc_core::multiplier::conjugate_by_unitary(&t, &u).unwrap();
    let moved: MatrixSymbol = extract_symbol(&conj, &p).unwrap();
    for r in [0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
        let exp = SchattenExponent::new(r).unwrap();
        let a = schatten_norm(&sigma, exp).unwrap();
        let b = schatten_norm(&moved, exp).unwrap();
        assert!(rel_close(a, b, 1e-8), "r={r}");
    }
    assert!((trace_from_symbol(&sigma) - trace_from_symbol(&moved)).norm() < 1e-8);
}
