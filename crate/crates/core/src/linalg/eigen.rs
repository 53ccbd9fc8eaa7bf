//! Non-Hermitian eigensolver: Householder reduction to Hessenberg form,
//! implicitly shifted complex QR to Schur form, back-substitution for the
//! eigenvectors of the triangular factor.

use num_complex::Complex64;

use super::householder::Reflector;
use super::{canonical_phase, norm2, ComplexMatrix};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Eigenvalue, unit eigenvector and `||A v - lambda v||_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// All `n` eigenpairs of a square matrix, sorted by `(Re, Im)` of the
/// eigenvalue. Each eigenvector has its largest-modulus coordinate real
/// and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    /// Spectral norm of the decomposed matrix.
    pub norm: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.pairs.iter().map(|p| p.value)
    }

    pub fn max_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual).fold(0.0, f64::max)
    }
}

/// State of the QR iteration when it gave up: `A = Z T Z^*` with `T`
/// upper Hessenberg and triangular below row `unconverged`.
#[derive(Debug, Clone)]
pub struct PartialSchur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
    pub unconverged: usize,
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Rotation `[c s; -conj(s) c]` taking `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let s = (a / an) * b.conj() / nrm;
    (c, s)
}

#[inline]
fn rotate_rows(h: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    let n = h.cols();
    let data = &mut h.data;
    for j in cols {
        let x = data[p * n + j];
        let y = data[q * n + j];
        data[p * n + j] = x * c + s * y;
        data[q * n + j] = -s.conj() * x + y * c;
    }
}

#[inline]
fn rotate_cols(h: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    let n = h.cols();
    let data = &mut h.data;
    let sc = s.conj();
    for i in rows {
        let x = data[i * n + p];
        let y = data[i * n + q];
        data[i * n + p] = x * c + y * sc;
        data[i * n + q] = y * c - x * s;
    }
}

/// Reduces `a` to upper Hessenberg `H = Q^* A Q`, returning `(H, Q)`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let refl = Reflector::new(&x);
        refl.apply_left(&mut h, k + 1, k);
        refl.apply_right(&mut h, 0..n, k + 1);
        refl.apply_right(&mut q, 0..n, k + 1);
        h[(k + 1, k)] = refl.beta;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closer to its
/// bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = d + half + disc;
    let mu2 = d + half - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Complex Schur form `H = Z T Z^*` of an upper Hessenberg matrix,
/// accumulating into `z`. Total iteration budget is `30 n`.
fn schur(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let ulp = f64::EPSILON;
    let safmin = f64::MIN_POSITIVE;
    let smlnum = safmin * (n as f64 / ulp);
    let budget = 30 * n.max(10);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut its_since_deflation = 0usize;

    loop {
        // Look for a negligible subdiagonal entry in the active block.
        let mut lo = 0;
        let mut k = hi;
        while k > 0 {
            let sub = cabs1(h[(k, k - 1)]);
            if sub <= smlnum {
                h[(k, k - 1)] = ZERO;
                lo = k;
                break;
            }
            let mut tst = cabs1(h[(k - 1, k - 1)]) + cabs1(h[(k, k)]);
            if tst == 0.0 {
                if k >= 2 {
                    tst += h[(k - 1, k - 2)].re.abs();
                }
                if k + 1 <= hi {
                    tst += h[(k + 1, k)].re.abs();
                }
            }
            if sub <= ulp * tst {
                // Ahues & Tisseur refinement of the deflation test.
                let ab = sub.max(cabs1(h[(k - 1, k)]));
                let ba = sub.min(cabs1(h[(k - 1, k)]));
                let diff = h[(k - 1, k - 1)] - h[(k, k)];
                let aa = cabs1(h[(k, k)]).max(cabs1(diff));
                let bb = cabs1(h[(k, k)]).min(cabs1(diff));
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                    h[(k, k - 1)] = ZERO;
                    lo = k;
                    break;
                }
            }
            k -= 1;
        }

        if lo == hi {
            // 1x1 block converged.
            its_since_deflation = 0;
            if hi == 0 {
                return Ok(());
            }
            hi -= 1;
            if hi == 0 {
                return Ok(());
            }
            continue;
        }

        total += 1;
        its_since_deflation += 1;
        if total > budget {
            return Err(Error::NoConvergence {
                iterations: total - 1,
                unconverged: hi + 1,
                partial: Box::new(PartialSchur {
                    t: h.clone(),
                    z: z.clone(),
                    unconverged: hi + 1,
                }),
            });
        }

        let mu = if its_since_deflation % 10 == 0 {
            // Exceptional shift.
            let mut s = 0.75 * h[(hi, hi - 1)].re.abs();
            if hi >= 2 {
                s += h[(hi - 1, hi - 2)].re.abs();
            }
            h[(hi, hi)] + Complex64::new(s, 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        // Single-shift bulge chase over the block [lo, hi]. Rotations are
        // applied to the full rows/columns so the final T is the full Schur
        // factor.
        let (c, s) = givens(h[(lo, lo)] - mu, h[(lo + 1, lo)]);
        rotate_rows(h, lo, lo + 1, c, s, lo..n);
        rotate_cols(h, lo, lo + 1, c, s, 0..(lo + 3).min(hi + 1));
        rotate_cols(z, lo, lo + 1, c, s, 0..n);
        for k in lo + 1..hi {
            let (c, s) = givens(h[(k, k - 1)], h[(k + 1, k - 1)]);
            rotate_rows(h, k, k + 1, c, s, k - 1..n);
            h[(k + 1, k - 1)] = ZERO;
            rotate_cols(h, k, k + 1, c, s, 0..(k + 3).min(hi + 1));
            rotate_cols(z, k, k + 1, c, s, 0..n);
        }
    }
}

/// Eigenvectors of the upper triangular `t`, as columns `x_k` with
/// `(T - t_kk) x_k = 0`, `x_k[k] = 1`, `x_k[j] = 0` for `j > k`.
fn triangular_eigenvectors(t: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let n = t.rows();
    let ulp = f64::EPSILON;
    let tnorm = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| cabs1(t[(i, j)]))
        .fold(0.0, f64::max);
    let smin = (ulp * tnorm).max(f64::MIN_POSITIVE * (n as f64 / ulp));
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let tkk = t[(k, k)];
        let mut x = vec![ZERO; k + 1];
        x[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut sum = ZERO;
            for l in j + 1..=k {
                sum += t[(j, l)] * x[l];
            }
            let mut denom = t[(j, j)] - tkk;
            if cabs1(denom) < smin {
                denom = Complex64::new(smin, 0.0);
            }
            x[j] = -sum / denom;
            let big = cabs1(x[j]);
            if big > 1e150 {
                let inv = 1.0 / big;
                x.iter_mut().for_each(|z| *z *= inv);
            }
        }
        out.push(x);
    }
    out
}

/// Full eigendecomposition of a square matrix.
///
/// Every returned pair satisfies `||A v - lambda v|| <= tol ||A||`;
/// otherwise [`Error::Residual`] is returned. Non-convergence of the QR
/// iteration yields [`Error::NoConvergence`] carrying the partial Schur
/// form. Only residuals are promised for defective or clustered spectra.
pub fn eigen_decompose(a: &ComplexMatrix, tol: f64) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigen_decompose needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let (mut t, mut z) = hessenberg(a);
    schur(&mut t, &mut z)?;

    let xs = triangular_eigenvectors(&t);
    let norm = super::operator_norm(a, 1e-6);
    let mut pairs = Vec::with_capacity(n);
    for (k, x) in xs.into_iter().enumerate() {
        // v = Z[:, 0..=k] x
        let mut v = vec![ZERO; n];
        for (i, vi) in v.iter_mut().enumerate() {
            let zrow = &z.row(i)[..=k];
            *vi = zrow.iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        let nv = norm2(&v);
        v.iter_mut().for_each(|c| *c /= nv);
        canonical_phase(&mut v);
        let value = t[(k, k)];
        let av = a.mul_vec(&v);
        let r: Vec<Complex64> = av.iter().zip(&v).map(|(x, y)| x - value * y).collect();
        let residual = norm2(&r);
        let bound = tol * norm.max(f64::MIN_POSITIVE);
        if residual > bound && norm > 0.0 {
            return Err(Error::Residual { residual, bound });
        }
        pairs.push(EigenPair {
            value,
            vector: v,
            residual,
        });
    }
    pairs.sort_by(|p, q| {
        p.value
            .re
            .total_cmp(&q.value.re)
            .then(p.value.im.total_cmp(&q.value.im))
    });
    Ok(Spectrum { pairs, norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let s = eigen_decompose(&a, 1e-12).unwrap();
        assert_eq!(s.pairs[0].value, c(2.0, 0.0));
        assert_eq!(s.pairs[1].value, c(3.0, 0.0));
        assert_eq!(s.pairs[0].vector, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.pairs[1].vector, vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn swap_matrix() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = eigen_decompose(&a, 1e-12).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.pairs[0].value - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((s.pairs[1].value - c(1.0, 0.0)).norm() < 1e-14);
        let v0 = &s.pairs[0].vector;
        let v1 = &s.pairs[1].vector;
        assert!((v0[0] - c(r, 0.0)).norm() < 1e-14 && (v0[1] - c(-r, 0.0)).norm() < 1e-14);
        assert!((v1[0] - c(r, 0.0)).norm() < 1e-14 && (v1[1] - c(r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cube_roots_of_unity() {
        // Companion matrix of z^3 - 1.
        let a = ComplexMatrix::from_real(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let s = eigen_decompose(&a, 1e-10).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [c(-0.5, -h), c(-0.5, h), c(1.0, 0.0)];
        for (p, e) in s.pairs.iter().zip(expected) {
            assert!((p.value - e).norm() < 1e-12, "{} vs {}", p.value, e);
            assert!(p.residual <= 1e-10);
        }
    }

    #[test]
    fn one_by_one_and_zero() {
        let a = ComplexMatrix::from_vec(1, 1, vec![c(0.5, -2.0)]).unwrap();
        let s = eigen_decompose(&a, 1e-12).unwrap();
        assert_eq!(s.pairs[0].value, c(0.5, -2.0));
        assert_eq!(s.pairs[0].vector, vec![c(1.0, 0.0)]);
        let s = eigen_decompose(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.pairs.iter().all(|p| p.value == ZERO));
    }

    #[test]
    fn jordan_block_keeps_residual_promise() {
        let a = ComplexMatrix::from_real(3, 3, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = eigen_decompose(&a, 1e-8).unwrap();
        assert!(s.max_residual() <= 1e-8 * s.norm);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(eigen_decompose(&ComplexMatrix::zeros(2, 3), 1e-8).is_err());
    }

    #[test]
    fn hessenberg_is_similarity() {
        let a = ComplexMatrix::from_fn(5, 5, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0 - 1.0));
        let (h, q) = hessenberg(&a);
        for i in 0..5 {
            for j in 0..(i as usize).saturating_sub(1) {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        let back = q.matmul(&h).matmul(&q.adjoint());
        for (x, y) in back.data().iter().zip(a.data()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
