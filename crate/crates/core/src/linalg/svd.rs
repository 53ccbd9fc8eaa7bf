//! Singular values via Golub–Kahan bidiagonalization and bidiagonal QR.
//!
//! The smallest right singular vector is recovered without accumulating
//! the full singular vector matrices: inverse iteration on the
//! `2n x 2n` Golub–Kahan tridiagonal `[[0, B^T], [B, 0]]` (permuted to
//! tridiagonal form) at the computed smallest singular value, followed by
//! the right Householder reflectors of the bidiagonalization. This keeps
//! the cost of a kernel vector at one bidiagonalization.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::householder::Reflector;
use super::{canonical_phase, norm2, ComplexMatrix};
use crate::error::{Error, Result};
use crate::randgen::SeedStream;

/// Real upper bidiagonal factor plus what is needed to map its right
/// singular vectors back: `A = U D_L B D_R^* V^*`.
struct Bidiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
    right_reflectors: Vec<Reflector>,
    /// Unit diagonal `D_R` making the complex bidiagonal real.
    right_phase: Vec<Complex64>,
}

fn phase_of(z: Complex64) -> Complex64 {
    let a = z.norm();
    if a == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / a
    }
}

fn bidiagonalize(a: &ComplexMatrix) -> Bidiagonal {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut dc = Vec::with_capacity(n);
    let mut ec = Vec::with_capacity(n.saturating_sub(1));
    let mut right = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let x: Vec<Complex64> = (k..m).map(|i| w[(i, k)]).collect();
        let left = Reflector::new(&x);
        if k + 1 < n {
            left.apply_left(&mut w, k, k + 1);
        }
        dc.push(left.beta);
        if k + 1 < n {
            let r: Vec<Complex64> = w.row(k)[k + 1..].iter().map(|z| z.conj()).collect();
            let refl = Reflector::new(&r);
            refl.apply_right(&mut w, k + 1..m, k + 1);
            ec.push(refl.beta.conj());
            right.push(refl);
        }
    }
    // B_c = D_L B D_R^* with B real nonnegative.
    let mut d = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    let mut rphase = Vec::with_capacity(n);
    let mut r = Complex64::new(1.0, 0.0);
    for k in 0..n {
        rphase.push(r);
        let l = phase_of(dc[k] * r);
        d.push(dc[k].norm());
        if k + 1 < n {
            e.push(ec[k].norm());
            r = l * phase_of(ec[k]).conj();
        }
    }
    Bidiagonal {
        d,
        e,
        right_reflectors: right,
        right_phase: rphase,
    }
}

/// Singular values of a real upper bidiagonal matrix, descending.
///
/// Implicit-shift QR with the classical split and cancellation tests.
fn bidiagonal_singular_values(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut w = d.to_vec();
    // rv1[i] couples w[i-1] and w[i].
    let mut rv1 = vec![0.0; n];
    rv1[1..n].copy_from_slice(&e[..(n - 1)]);
    let anorm = (0..n).map(|i| w[i].abs() + rv1[i].abs()).fold(0.0, f64::max);
    if anorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let negligible = |x: f64| x.abs() <= f64::EPSILON * anorm;

    for k in (0..n).rev() {
        let mut its = 0;
        loop {
            // Find l such that rv1[l] is negligible (rv1[0] is always zero).
            let mut l = k;
            let mut cancel = false;
            loop {
                if l == 0 || negligible(rv1[l]) {
                    break;
                }
                if negligible(w[l - 1]) {
                    cancel = true;
                    break;
                }
                l -= 1;
            }
            if cancel {
                // w[l-1] is zero: chase rv1[l] out of the row.

                let mut c = 0.0;
                let mut s = 1.0;
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] *= c;
                    if negligible(f) {
                        break;
                    }
                    let g = w[i];
                    let h = f.hypot(g);
                    w[i] = h;
                    c = g / h;
                    s = -f / h;
                }

            }
            let z = w[k];
            if l == k {
                if z < 0.0 {
                    w[k] = -z;
                }
                break;
            }
            its += 1;
            if its > 75 {
                return Err(Error::SvdNoConvergence);
            }
            // Shift from the trailing 2x2 of B^T B.
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            let mut g = rv1[nm];
            let mut h = rv1[k];
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
            g = f.hypot(1.0);
            f = ((x - z) * (x + z) + h * ((y / (f + g.copysign(f))) - h)) / x;
            let mut c = 1.0;
            let mut s = 1.0;
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g *= c;
                let mut zz = f.hypot(h);
                rv1[j] = zz;
                c = f / zz;
                s = h / zz;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                zz = f.hypot(h);
                w[j] = zz;
                if zz != 0.0 {
                    c = f / zz;
                    s = h / zz;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            rv1[l] = 0.0;
            rv1[k] = f;
            w[k] = x;
        }
    }
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

/// All singular values of `a`, descending. Wide matrices are handled
/// through their adjoint.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() >= a.cols() {
        let b = bidiagonalize(a);
        bidiagonal_singular_values(&b.d, &b.e)
    } else {
        singular_values(&a.adjoint())
    }
}

/// `s_n(A) = min_{|x|=1} |Ax|` for `rows >= cols`.
pub fn smallest_singular_value(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() < a.cols() {
        return Err(Error::Dimension(format!(
            "smallest_singular_value needs rows >= cols, got {}x{}; pass the adjoint",
            a.rows(),
            a.cols()
        )));
    }
    let sv = singular_values(a)?;
    Ok(*sv.last().expect("nonempty"))
}

/// Smallest right singular pair of a matrix (zero rows are appended to
/// wide matrices, so the smallest value is then 0 and the vector spans
/// part of the kernel).
#[derive(Debug, Clone)]
pub struct RightSingular {
    /// All singular values of the (padded) matrix, descending.
    pub values: Vec<f64>,
    /// Unit right singular vector for `values.last()`, canonical phase.
    pub vector: Vec<Complex64>,
}

pub fn smallest_right_singular(a: &ComplexMatrix) -> Result<RightSingular> {
    let n = a.cols();
    let padded;
    let a = if a.rows() < n {
        padded = a.pad_rows(n);
        &padded
    } else {
        a
    };
    let bd = bidiagonalize(a);
    let values = bidiagonal_singular_values(&bd.d, &bd.e)?;
    let sigma = *values.last().expect("nonempty");
    let vb = bidiagonal_right_vector(&bd.d, &bd.e, sigma);
    // v_A = V D_R v_B
    let mut v: Vec<Complex64> = vb
        .iter()
        .zip(&bd.right_phase)
        .map(|(&x, &p)| p * x)
        .collect();
    for (k, refl) in bd.right_reflectors.iter().enumerate().rev() {
        refl.apply_vec(&mut v[k + 1..]);
    }
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    canonical_phase(&mut v);
    Ok(RightSingular { values, vector: v })
}

/// Unit `v` with `A v = 0` for an `(n-1) x n` matrix, as the right singular
/// vector of the smallest singular value.
pub fn kernel_vector(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if a.rows() + 1 != a.cols() {
        return Err(Error::Dimension(format!(
            "kernel_vector needs rows = cols - 1, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(smallest_right_singular(a)?.vector)
}

/// Right singular vector of the real bidiagonal for singular value `sigma`,
/// by inverse iteration on the Golub–Kahan tridiagonal.
fn bidiagonal_right_vector(d: &[f64], e: &[f64], sigma: f64) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return vec![1.0];
    }
    // Off-diagonal of the permuted [[0, B^T], [B, 0]] acting on
    // (v1, u1, v2, u2, ..., vn, un).
    let m = 2 * n;
    let mut off = Vec::with_capacity(m - 1);
    for k in 0..n {
        off.push(d[k]);
        if k + 1 < n {
            off.push(e[k]);
        }
    }
    let scale = off.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    let lu = TridiagLu::factor(&off, sigma, scale);

    // Deterministic start vector.
    let mut rng = SeedStream::new(0x5eed_0f_6b_u64, n as u64).rng();
    let mut x: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    for _ in 0..4 {
        lu.solve(&mut x);
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(nx.is_finite() && nx > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= nx);
    }
    let mut v: Vec<f64> = x.iter().step_by(2).copied().collect();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nv > 0.0 {
        v.iter_mut().for_each(|a| *a /= nv);
    }
    v
}

/// LU with partial pivoting of the symmetric tridiagonal `T - sigma I`
/// with zero diagonal in `T`. Zero pivots are replaced by `eps * scale`.
struct TridiagLu {
    // Row i of U has entries u0[i] (diag), u1[i], u2[i].
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(off: &[f64], sigma: f64, scale: f64) -> Self {
        let m = off.len() + 1;
        let tiny = f64::EPSILON * scale;
        let mut diag = vec![-sigma; m];
        let mut sup: Vec<f64> = off.to_vec();
        sup.push(0.0);
        let mut sup2 = vec![0.0; m];
        let mut mult = vec![0.0; m];
        let mut swapped = vec![false; m];
        for i in 0..m - 1 {
            let sub = off[i];
            if sub.abs() > diag[i].abs() {
                // Swap rows i and i+1.
                swapped[i] = true;
                let (d0, s0, t0) = (diag[i], sup[i], sup2[i]);
                diag[i] = sub;
                sup[i] = diag[i + 1];
                sup2[i] = sup[i + 1];
                let l = d0 / sub;
                mult[i] = l;
                diag[i + 1] = s0 - l * sup[i];
                sup[i + 1] = t0 - l * sup2[i];
            } else {
                if diag[i] == 0.0 {
                    diag[i] = tiny;
                }
                let l = sub / diag[i];
                mult[i] = l;
                diag[i + 1] -= l * sup[i];
                // sup2[i] stays zero, sup[i+1] unchanged.
            }
        }
        if diag[m - 1] == 0.0 {
            diag[m - 1] = tiny;
        }
        for v in diag.iter_mut() {
            if v.abs() < tiny {
                *v = tiny.copysign(*v);
            }
        }
        Self {
            u0: diag,
            u1: sup,
            u2: sup2,
            mult,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let m = b.len();
        for i in 0..m - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        for i in (0..m).rev() {
            let mut s = b[i];
            if i + 1 < m {
                s -= self.u1[i] * b[i + 1];
            }
            if i + 2 < m {
                s -= self.u2[i] * b[i + 2];
            }
            b[i] = s / self.u0[i];
        }
    }
}

/// `s_1(A)` by power iteration on `A^* A`.
///
/// Stops once the eigen-residual `|A^*A x - mu x|` falls below `tol mu`,
/// which bounds the relative error of `mu`. The start vector comes from a
/// fixed stream, so the result is a pure function of `A`.
pub fn operator_norm(a: &ComplexMatrix, tol: f64) -> f64 {
    if a.data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return 0.0;
    }
    let n = a.cols();
    let mut rng = SeedStream::new(0x0b_5e_ed, (a.rows() * 31 + n) as u64).rng();
    let mut x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|z| *z /= nx);
    let max_iter = 20_000 + 100 * n;
    let mut mu = 0.0;
    for _ in 0..max_iter {
        let ax = a.mul_vec(&x);
        let y = a.adjoint_mul_vec(&ax);
        mu = super::dot(&x, &y).re;
        let res: f64 = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - xi * mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let ny = norm2(&y);
        if ny == 0.0 {
            // x landed in the kernel; restart along a coordinate.
            x = vec![Complex64::new(0.0, 0.0); n];
            x[rng.random_range(0..n)] = Complex64::new(1.0, 0.0);
            continue;
        }
        if res <= tol * mu {
            break;
        }
        x = y.into_iter().map(|z| z / ny).collect();
    }
    mu.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::shift;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_exact_kernel() {
        assert!((smallest_singular_value(&ComplexMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-15);
        let a = ComplexMatrix::diag(&[c(3.0, 0.0), c(1.0, 0.0)]);
        let s = smallest_singular_value(&shift(&a, c(1.0, 0.0))).unwrap();
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn wide_matrix_rejected() {
        assert!(smallest_singular_value(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn known_bidiagonal() {
        // [[3, 4], [0, 0]] has singular values 5 and 0.
        let s = bidiagonal_singular_values(&[3.0, 0.0], &[4.0]).unwrap();
        assert!((s[0] - 5.0).abs() < 1e-14 && s[1].abs() < 1e-14);
        let s = bidiagonal_singular_values(&[0.0, 2.0], &[0.0]).unwrap();
        assert_eq!(s, vec![2.0, 0.0]);
    }

    #[test]
    fn kernel_simple_cases() {
        let a = ComplexMatrix::from_real(1, 2, &[1.0, 0.0]).unwrap();
        let v = kernel_vector(&a).unwrap();
        assert!(v[0].norm() < 1e-14 && (v[1] - c(1.0, 0.0)).norm() < 1e-14, "{v:?}");
        let a = ComplexMatrix::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let v = kernel_vector(&a).unwrap();
        assert!(v[0].norm() < 1e-14 && v[1].norm() < 1e-14 && (v[2] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(kernel_vector(&ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn operator_norm_small_cases() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3), 1e-8), 0.0);
        let a = ComplexMatrix::diag(&[c(2.0, 0.0), c(-5.0, 0.0)]);
        assert!((operator_norm(&a, 1e-10) - 5.0).abs() < 1e-8);
    }

    #[test]
    fn right_vector_of_nonsingular_bidiagonal() {
        let d = [2.0, 1.5, 0.3];
        let e = [0.7, -0.4];
        let s = bidiagonal_singular_values(&d, &e).unwrap();
        let v = bidiagonal_right_vector(&d, &e, s[2]);
        // |B v| = sigma_min
        let bv = [d[0] * v[0] + e[0] * v[1], d[1] * v[1] + e[1] * v[2], d[2] * v[2]];
        let nb = bv.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((nb - s[2]).abs() < 1e-13, "{nb} {}", s[2]);
    }
}
