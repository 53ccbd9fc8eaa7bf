use num_complex::Complex64;

use super::{dot, norm2};
use crate::error::{Error, Result};

/// `|(X - v) - P_H (X - v)|` for `H = span(basis)`.
///
/// Modified Gram–Schmidt with a second orthogonalization pass. A basis
/// vector is dropped when its remainder falls below `1e-12` times the
/// largest basis norm, so rank-deficient spanning sets are fine.
pub fn dist_to_subspace(x: &[Complex64], basis: &[Vec<Complex64>], v: &[Complex64]) -> Result<f64> {
    let n = x.len();
    if v.len() != n {
        return Err(Error::Dimension(format!(
            "offset has length {}, expected {n}",
            v.len()
        )));
    }
    if let Some(b) = basis.iter().find(|b| b.len() != n) {
        return Err(Error::Dimension(format!(
            "basis vector has length {}, expected {n}",
            b.len()
        )));
    }
    let mut r: Vec<Complex64> = x.iter().zip(v).map(|(a, b)| a - b).collect();
    let q = orthonormalize(basis);
    for _ in 0..2 {
        for qk in &q {
            let c = dot(qk, &r);
            for (ri, qi) in r.iter_mut().zip(qk) {
                *ri -= c * qi;
            }
        }
    }
    Ok(norm2(&r))
}

/// Orthonormal basis of `span(basis)` by MGS with reorthogonalization;
/// numerically dependent vectors are dropped.
pub fn orthonormalize(basis: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let max_norm = basis.iter().map(|b| norm2(b)).fold(0.0, f64::max);
    let threshold = 1e-12 * max_norm;
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut w = b.clone();
        for _ in 0..2 {
            for qk in &q {
                let c = dot(qk, &w);
                for (wi, qi) in w.iter_mut().zip(qk) {
                    *wi -= c * qi;
                }
            }
        }
        let nw = norm2(&w);
        if nw > threshold && nw > 0.0 {
            w.iter_mut().for_each(|z| *z /= nw);
            q.push(w);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn axis_projection() {
        let d = dist_to_subspace(&real(&[1.0, 2.0, 2.0]), &[real(&[1.0, 0.0, 0.0])], &real(&[0.0; 3])).unwrap();
        assert!((d - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn member_and_degenerate_basis() {
        let b = vec![real(&[1.0, 1.0, 0.0]), real(&[2.0, 2.0, 0.0]), real(&[0.0, 1.0, 0.0])];
        let d = dist_to_subspace(&real(&[3.0, -1.0, 0.0]), &b, &real(&[0.0; 3])).unwrap();
        assert!(d < 1e-14);
        let d = dist_to_subspace(&real(&[0.0, 0.0, 2.0]), &[], &real(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(d, 1.0);
        assert!(dist_to_subspace(&real(&[0.0; 2]), &b, &real(&[0.0; 2])).is_err());
    }
}
