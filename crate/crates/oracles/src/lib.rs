//! Slow, independent reference computations used by the test suites.
//!
//! Nothing here shares code with the main library: Hermitian eigenvalues
//! come from cyclic Jacobi on the real embedding, least squares from the
//! normal equations, LCD values from a dense polar grid.

use num_complex::Complex64;

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `A^* A` for a row-major `rows x cols` matrix.
pub fn gram(a: &Mat) -> Mat {
    let cols = a[0].len();
    let mut g = vec![vec![c(0.0, 0.0); cols]; cols];
    for (i, gi) in g.iter_mut().enumerate() {
        for (j, gij) in gi.iter_mut().enumerate() {
            *gij = a.iter().map(|row| row[i].conj() * row[j]).sum();
        }
    }
    g
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, ascending.
pub fn jacobi_symmetric(mut s: Vec<Vec<f64>>) -> Vec<f64> {
    let n = s.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        let total: f64 = s.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[p][q] == 0.0 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (a, b) = (s[k][p], s[k][q]);
                    s[k][p] = cs * a - sn * b;
                    s[k][q] = sn * a + cs * b;
                }
                for k in 0..n {
                    let (a, b) = (s[p][k], s[q][k]);
                    s[p][k] = cs * a - sn * b;
                    s[q][k] = sn * a + cs * b;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| s[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix, ascending, via the real symmetric
/// embedding `[[Re, -Im], [Im, Re]]` whose spectrum doubles each value.
pub fn hermitian_eigenvalues(h: &Mat) -> Vec<f64> {
    let n = h.len();
    let mut s = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = h[i][j];
            s[i][j] = z.re;
            s[i][n + j] = -z.im;
            s[n + i][j] = z.im;
            s[n + i][n + j] = z.re;
        }
    }
    let ev = jacobi_symmetric(s);
    ev.iter().step_by(2).copied().collect()
}

/// Singular values, descending, from the Gram matrix.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    let mut s: Vec<f64> = hermitian_eigenvalues(&gram(a))
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    s.reverse();
    s
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut m: Mat, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap();
        m.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    x
}

/// `|(X - v) - P_H (X - v)|` by the normal equations of a full-rank basis.
pub fn dist_least_squares(x: &[Complex64], basis: &Mat, v: &[Complex64]) -> f64 {
    let r: Vec<Complex64> = x.iter().zip(v).map(|(a, b)| a - b).collect();
    if basis.is_empty() {
        return r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    let k = basis.len();
    let g: Mat = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| basis[i].iter().zip(&basis[j]).map(|(a, b)| a.conj() * b).sum())
                .collect()
        })
        .collect();
    let rhs: Vec<Complex64> = basis
        .iter()
        .map(|bi| bi.iter().zip(&r).map(|(a, b)| a.conj() * b).sum())
        .collect();
    let coef = solve(g, rhs);
    let mut res = r.clone();
    for (ci, bi) in coef.iter().zip(basis) {
        for (ri, b) in res.iter_mut().zip(bi) {
            *ri -= ci * b;
        }
    }
    res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Minimum of `|v_I|` over all `|I| = m`, by enumeration.
pub fn min_subset_exhaustive(v: &[Complex64], m: usize) -> f64 {
    let n = v.len();
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let s: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| v[i].norm_sqr())
            .sum();
        best = best.min(s);
    }
    (best / total).sqrt()
}

fn lattice_dist(theta: Complex64, a: &[Complex64]) -> f64 {
    a.iter()
        .map(|&x| {
            let y = theta * x;
            (y.re - y.re.round()).powi(2) + (y.im - y.im.round()).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Smallest grid radius `k h` with a feasible `theta` on the polar grid
/// (angles over `[0, 2 pi)` spaced at most `h` apart along the circle).
/// `complex = false` restricts to real `theta`.
pub fn lcd_brute_force(a: &[Complex64], complex: bool, alpha: f64, gamma: f64, h: f64, r_max: f64) -> Option<f64> {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut k = 1;
    loop {
        let r = k as f64 * h;
        if r > r_max {
            return None;
        }
        let bound = (gamma * r * na).min(alpha);
        let count = if complex {
            ((2.0 * std::f64::consts::PI * r / h).ceil() as usize).max(1)
        } else {
            2
        };
        for j in 0..count {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            if lattice_dist(Complex64::from_polar(r, phi), a) < bound {
                return Some(r);
            }
        }
        k += 1;
    }
}

/// `P(chi^2_{2k} <= x) = 1 - e^{-x/2} sum_{j<k} (x/2)^j / j!`.
pub fn chi2_even_cdf(k: usize, x: f64) -> f64 {
    let y = x / 2.0;
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..k {
        if j > 0 {
            term *= y / j as f64;
        }
        sum += term;
    }
    1.0 - (-y).exp() * sum
}

/// `A x` by the definition.
pub fn matvec(a: &Mat, x: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}
