#![allow(dead_code)]

use eigdeloc::randgen::sample_matrix;
use eigdeloc::{Complex64, ComplexMatrix, MatrixEnsemble, SeedStream};
use eigdeloc_oracles::Mat;

pub fn random_complex(rows: usize, cols: usize, seed: u64, index: u64) -> ComplexMatrix {
    sample_matrix(&MatrixEnsemble::complex_gaussian(rows, cols), &SeedStream::new(seed, index)).unwrap()
}

pub fn to_rows(a: &ComplexMatrix) -> Mat {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
