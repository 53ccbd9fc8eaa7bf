//! Dense complex linear algebra.

mod eigen;
mod householder;
mod io;
mod subspace;
mod svd;

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{eigen_decompose, EigenPair, PartialSchur, Spectrum};
pub use io::{parse_matrix, write_matrix};
pub use subspace::{dist_to_subspace, orthonormalize as subspace_orthonormal_basis};
pub use svd::{
    kernel_vector, operator_norm, singular_values, smallest_right_singular, smallest_singular_value,
    RightSingular,
};

/// Dense `rows x cols` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting bad lengths and
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix must be non-empty, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter(format!(
                "entry ({}, {}) is not finite",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A^* y`.
    pub fn adjoint_mul_vec(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.rows, "dimension mismatch in adjoint_mul_vec");
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Appends zero rows until the matrix is at least `rows` tall.
    pub(crate) fn pad_rows(&self, rows: usize) -> ComplexMatrix {
        let mut data = self.data.clone();
        data.resize(rows.max(self.rows) * self.cols, Complex64::new(0.0, 0.0));
        ComplexMatrix::from_vec_unchecked(rows.max(self.rows), self.cols, data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm, scaled to avoid overflow.
pub fn norm2(v: &[Complex64]) -> f64 {
    let scale = v
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let inv = 1.0 / scale;
    let ss: f64 = v.iter().map(|z| (z * inv).norm_sqr()).sum();
    scale * ss.sqrt()
}

/// `x^* y`.
#[inline]
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `A - lambda`, with `lambda` subtracted on the main diagonal only.
/// Works for rectangular matrices.
pub fn shift(a: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let mut out = a.clone();
    for i in 0..a.rows.min(a.cols) {
        out[(i, i)] -= lambda;
    }
    out
}

/// The columns `J` of `A`, in ascending index order.
pub fn column_submatrix(a: &ComplexMatrix, columns: &[usize]) -> Result<ComplexMatrix> {
    if columns.is_empty() {
        return Err(Error::Parameter("column index set must be nonempty".into()));
    }
    let mut sorted = columns.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&j| j >= a.cols) {
        return Err(Error::Parameter(format!(
            "column index {bad} out of range for {} columns",
            a.cols
        )));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parameter("duplicate column index".into()));
    }
    Ok(ComplexMatrix::from_fn(a.rows, sorted.len(), |i, k| a[(i, sorted[k])]))
}

/// `(Re v; Im v)`.
pub fn realify_vector(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// `[[A, -B], [B, A]]` for `M = A + sqrt(-1) B`, as a `2N x 2n` row-major
/// real array.
pub fn realify_matrix(m: &ComplexMatrix) -> (usize, usize, Vec<f64>) {
    let (r, c) = (m.rows, m.cols);
    let mut out = vec![0.0; 4 * r * c];
    let w = 2 * c;
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[i * w + j] = z.re;
            out[i * w + c + j] = -z.im;
            out[(r + i) * w + j] = z.im;
            out[(r + i) * w + c + j] = z.re;
        }
    }
    (2 * r, 2 * c, out)
}

/// Scale of rectangular singular value thresholds: `sqrt(N) - sqrt(n-1)`.
///
/// Written as `(N - n + 1) / (sqrt N + sqrt(n-1))` to avoid cancellation.
pub fn rect_scale(big_n: usize, n: usize) -> f64 {
    assert!(n >= 1 && big_n >= n, "rect_scale needs N >= n >= 1");
    let num = (big_n - n + 1) as f64;
    num / ((big_n as f64).sqrt() + ((n - 1) as f64).sqrt())
}

/// Multiplies `v` by a unit scalar so the coordinate of largest modulus
/// (lowest index on ties) is real and nonnegative.
pub fn canonical_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let rot = v[best].conj() / best_abs;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(best_abs, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_square_and_rectangular() {
        let s = shift(&ComplexMatrix::zeros(2, 2), c(1.0, 0.0));
        assert_eq!(s, ComplexMatrix::diag(&[c(-1.0, 0.0), c(-1.0, 0.0)]));
        let r = shift(&ComplexMatrix::zeros(3, 2), c(0.0, 1.0));
        for i in 0..3 {
            for j in 0..2 {
                let expected = if i == j { c(0.0, -1.0) } else { c(0.0, 0.0) };
                assert_eq!(r[(i, j)], expected);
            }
        }
    }

    #[test]
    fn shift_round_trip_on_dyadic_entries() {
        let a = ComplexMatrix::from_fn(3, 4, |i, j| c(i as f64 * 0.375 - 1.125, j as f64 / 8.0));
        let lambda = c(0.25, -2.0);
        assert_eq!(shift(&shift(&a, lambda), -lambda), a);
    }

    #[test]
    fn column_submatrix_cases() {
        let id = ComplexMatrix::identity(3);
        let e2 = column_submatrix(&id, &[1]).unwrap();
        assert_eq!(e2.column(0), vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(column_submatrix(&id, &[2, 0, 1]).unwrap(), id);
        assert!(column_submatrix(&id, &[3]).is_err());
        assert!(column_submatrix(&id, &[1, 1]).is_err());
        assert!(column_submatrix(&id, &[]).is_err());
    }

    #[test]
    fn realify_small_cases() {
        assert_eq!(realify_vector(&[c(1.0, 2.0)]), vec![1.0, 2.0]);
        let m = ComplexMatrix::from_vec(1, 1, vec![c(3.0, 4.0)]).unwrap();
        assert_eq!(realify_matrix(&m), (2, 2, vec![3.0, -4.0, 4.0, 3.0]));
    }

    #[test]
    fn rect_scale_square_band() {
        for n in [1usize, 2, 10, 100, 10_000] {
            let s = rect_scale(n, n);
            let nf = n as f64;
            assert!(s >= 1.0 / (2.0 * nf.sqrt()) && s <= 1.0 / nf.sqrt() + 1e-15, "{n} {s}");
        }
        assert!((rect_scale(11, 10) - (11f64.sqrt() - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn from_vec_validates() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_vec(0, 1, vec![]).is_err());
    }

    #[test]
    fn canonical_phase_makes_largest_real() {
        let mut v = vec![c(0.1, 0.2), c(0.0, -3.0), c(1.0, 1.0)];
        canonical_phase(&mut v);
        assert_eq!(v[1], c(3.0, 0.0));
        assert!((v[0].norm() - c(0.1, 0.2).norm()).abs() < 1e-15);
    }
}
