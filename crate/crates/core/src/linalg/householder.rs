use num_complex::Complex64;

use super::{norm2, ComplexMatrix};

/// `H = I - tau v v^*`, Hermitian and unitary, with `H x = beta e_1`.
#[derive(Debug, Clone)]
pub(crate) struct Reflector {
    pub v: Vec<Complex64>,
    pub tau: f64,
    pub beta: Complex64,
}

impl Reflector {
    pub fn new(x: &[Complex64]) -> Self {
        let sigma = norm2(x);
        let zero = Complex64::new(0.0, 0.0);
        if sigma == 0.0 {
            return Self {
                v: vec![zero; x.len()],
                tau: 0.0,
                beta: zero,
            };
        }
        let alpha = x[0];
        let a = alpha.norm();
        let phase = if a == 0.0 { Complex64::new(1.0, 0.0) } else { alpha / a };
        let beta = -phase * sigma;
        // v = (x - beta e1) / (alpha - beta), so v[0] = 1.
        let v0 = phase * (a + sigma);
        let inv = 1.0 / v0;
        let mut v: Vec<Complex64> = x.iter().map(|z| z * inv).collect();
        v[0] = Complex64::new(1.0, 0.0);
        // tau = 2 / |v|^2 with |x - beta e1|^2 = 2 sigma (sigma + |alpha|).
        let tau = (a + sigma) / sigma;
        Self { v, tau, beta }
    }

    /// `A[r0.., c0..] <- H A[r0.., c0..]`, with `H` acting on rows `r0..r0+len`.
    pub fn apply_left(&self, a: &mut ComplexMatrix, r0: usize, c0: usize) {
        if self.tau == 0.0 {
            return;
        }
        let cols = a.cols();
        let width = cols - c0;
        let mut s = vec![Complex64::new(0.0, 0.0); width];
        for (k, vk) in self.v.iter().enumerate() {
            let row = &a.row(r0 + k)[c0..];
            let cv = vk.conj();
            for (sj, aj) in s.iter_mut().zip(row) {
                *sj += cv * aj;
            }
        }
        for sj in s.iter_mut() {
            *sj *= self.tau;
        }
        for (k, vk) in self.v.iter().enumerate() {
            let row = &mut a.row_mut(r0 + k)[c0..];
            for (aj, sj) in row.iter_mut().zip(&s) {
                *aj -= vk * sj;
            }
        }
    }

    /// `A[rows, c0..] <- A[rows, c0..] H`, with `H` acting on columns
    /// `c0..c0+len`.
    pub fn apply_right(&self, a: &mut ComplexMatrix, rows: std::ops::Range<usize>, c0: usize) {
        if self.tau == 0.0 {
            return;
        }
        let len = self.v.len();
        for i in rows {
            let row = &mut a.row_mut(i)[c0..c0 + len];
            let s: Complex64 = row.iter().zip(&self.v).map(|(x, v)| x * v).sum::<Complex64>() * self.tau;
            for (x, v) in row.iter_mut().zip(&self.v) {
                *x -= s * v.conj();
            }
        }
    }

    /// `y <- H y`.
    pub fn apply_vec(&self, y: &mut [Complex64]) {
        if self.tau == 0.0 {
            return;
        }
        let s: Complex64 = self.v.iter().zip(y.iter()).map(|(v, x)| v.conj() * x).sum::<Complex64>() * self.tau;
        for (x, v) in y.iter_mut().zip(&self.v) {
            *x -= s * v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_to_multiple_of_e1() {
        let cases: Vec<Vec<Complex64>> = vec![
            vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3), Complex64::new(0.0, 4.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(-3.0, 0.0)],
        ];
        for x in cases {
            let r = Reflector::new(&x);
            let mut y = x.clone();
            r.apply_vec(&mut y);
            assert!((y[0] - r.beta).norm() < 1e-13, "{:?} {:?}", y, r.beta);
            for z in &y[1..] {
                assert!(z.norm() < 1e-13);
            }
            assert!((r.beta.norm() - norm2(&x)).abs() < 1e-13);
            // Applying twice is the identity.
            r.apply_vec(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }
}
