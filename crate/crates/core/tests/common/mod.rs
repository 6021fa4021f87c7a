#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spin_init::linalg::ComplexMatrix;
use spin_init::model::RateSet;

pub fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_nalgebra(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// `V V† / tr(V V†)`
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let v = random_matrix(rng, n, n);
    let p = &v * &v.adjoint();
    let tr = p.trace();
    p.scale(C64::new(1.0, 0.0) / tr)
}

/// Rates spread over the physically interesting range.
pub fn random_rates(rng: &mut ChaCha8Rng) -> RateSet {
    RateSet {
        omega: rng.gen_range(1.0..4.0),
        gamma15: rng.gen_range(5.0..20.0),
        gamma25: rng.gen_range(1e-5..1e-3),
        gamma35: rng.gen_range(4.0..12.0),
        gamma45: rng.gen_range(4.0..12.0),
        gamma12: rng.gen_range(1e-6..1e-3),
    }
}

/// All eigenvalues of a general complex matrix, via nalgebra's Schur form.
pub fn complex_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    let schur = nalgebra::linalg::Schur::try_new(to_nalgebra(m), 1e-15, 100_000).expect("Schur converges");
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}
