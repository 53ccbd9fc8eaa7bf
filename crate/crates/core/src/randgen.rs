//! Reproducible sampling of entry distributions, matrix ensembles and
//! uniform sphere vectors.
//!
//! Every random object is a pure function of a [`SeedStream`]. A stream is
//! a ChaCha8 generator keyed by the master seed and positioned on the
//! ChaCha stream selected by the stream index, so trial `k` of an
//! experiment draws the same numbers no matter which thread runs it or in
//! what order trials are scheduled.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::ComplexMatrix;

/// The generator behind every stream.
pub type StreamRng = ChaCha8Rng;

/// Mean-zero, unit-variance entry laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Gaussian,
    Rademacher,
    /// Uniform on `[-sqrt 3, sqrt 3]`.
    SymmetricUniform,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Gaussian => "gaussian",
            EntryKind::Rademacher => "rademacher",
            EntryKind::SymmetricUniform => "uniform",
        }
    }

    /// Smallest `B` with `P(|X| > t) <= 2 exp(-t^2 / B^2)` for all `t > 0`.
    ///
    /// Gaussian: `sqrt 2`. Rademacher: the constraint binds as `t -> 1`,
    /// giving `1/sqrt(ln 2)`. Uniform on `[-sqrt 3, sqrt 3]`: the same
    /// argument at `t -> sqrt 3` gives `sqrt(3 / ln 2)`.
    pub fn subgaussian_bound(self) -> f64 {
        match self {
            EntryKind::Gaussian => std::f64::consts::SQRT_2,
            EntryKind::Rademacher => 1.0 / std::f64::consts::LN_2.sqrt(),
            EntryKind::SymmetricUniform => (3.0 / std::f64::consts::LN_2).sqrt(),
        }
    }
}

impl std::str::FromStr for EntryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "normal" => Ok(EntryKind::Gaussian),
            "rademacher" | "sign" => Ok(EntryKind::Rademacher),
            "uniform" | "symmetric-uniform" => Ok(EntryKind::SymmetricUniform),
            other => Err(Error::Parse(format!("unknown entry distribution '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDistribution {
    pub kind: EntryKind,
    pub subgaussian_bound: f64,
}

impl EntryDistribution {
    pub fn new(kind: EntryKind) -> Self {
        Self {
            kind,
            subgaussian_bound: kind.subgaussian_bound(),
        }
    }

    pub fn gaussian() -> Self {
        Self::new(EntryKind::Gaussian)
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            EntryKind::Gaussian => rng.sample(StandardNormal),
            EntryKind::Rademacher => {
                if rng.next_u32() & 1 == 0 {
                    -1.0
                } else {
                    1.0
                }
            }
            EntryKind::SymmetricUniform => {
                let u: f64 = rng.random();
                (2.0 * u - 1.0) * 3f64.sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" | "genuinely-complex" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field '{other}'"))),
        }
    }
}

/// An `rows x cols` matrix with iid entries. Complex ensembles are
/// genuinely complex: `xi + sqrt(-1) xi'` with independent real and
/// imaginary parts, each drawn from `entry_dist`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixEnsemble {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub entry_dist: EntryDistribution,
}

impl MatrixEnsemble {
    pub fn new(field: Field, rows: usize, cols: usize, kind: EntryKind) -> Self {
        Self {
            field,
            rows,
            cols,
            entry_dist: EntryDistribution::new(kind),
        }
    }

    pub fn complex_gaussian(rows: usize, cols: usize) -> Self {
        Self::new(Field::Complex, rows, cols, EntryKind::Gaussian)
    }

    pub fn real_gaussian(rows: usize, cols: usize) -> Self {
        Self::new(Field::Real, rows, cols, EntryKind::Gaussian)
    }

    /// Same law, different shape.
    pub fn with_shape(&self, rows: usize, cols: usize) -> Self {
        Self { rows, cols, ..*self }
    }
}

/// Identifies one deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut key = [0u8; 32];
        let mut state = self.master_seed;
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A child stream, for objects that need their own independent
    /// sequence inside one trial.
    pub fn child(&self, index: u64) -> SeedStream {
        let mut state = self.master_seed ^ self.stream_index.rotate_left(32);
        let derived = splitmix64(&mut state) ^ 0x6a09_e667_f3bc_c908;
        SeedStream::new(derived, index)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The stream used by trial `trial_index` of a run seeded with `master_seed`.
pub fn derive_stream(master_seed: u64, trial_index: u64) -> SeedStream {
    SeedStream::new(master_seed, trial_index)
}

/// Samples a matrix from `ensemble` using the whole of `stream`.
pub fn sample_matrix(ensemble: &MatrixEnsemble, stream: &SeedStream) -> Result<ComplexMatrix> {
    sample_matrix_with(ensemble, &mut stream.rng())
}

/// Samples a matrix, continuing an existing generator.
///
/// Draw order is row-major; for complex ensembles the real part of each
/// entry is drawn before its imaginary part. Files produced from a seed
/// depend on this order.
pub fn sample_matrix_with<R: Rng + ?Sized>(
    ensemble: &MatrixEnsemble,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let (rows, cols) = (ensemble.rows, ensemble.cols);
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension(format!(
            "ensemble dimensions must be positive, got {rows}x{cols}"
        )));
    }
    let dist = ensemble.entry_dist;
    let data = match ensemble.field {
        Field::Real => (0..rows * cols)
            .map(|_| Complex64::new(dist.draw(rng), 0.0))
            .collect(),
        Field::Complex => (0..rows * cols)
            .map(|_| {
                let re = dist.draw(rng);
                let im = dist.draw(rng);
                Complex64::new(re, im)
            })
            .collect(),
    };
    Ok(ComplexMatrix::from_vec_unchecked(rows, cols, data))
}

/// Uniform unit vector on the real or complex sphere, as a normalised
/// standard Gaussian vector.
pub fn sample_unit_sphere(n: usize, field: Field, stream: &SeedStream) -> Result<Vec<Complex64>> {
    sample_unit_sphere_with(n, field, &mut stream.rng())
}

pub fn sample_unit_sphere_with<R: Rng + ?Sized>(
    n: usize,
    field: Field,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if n == 0 {
        return param("sphere dimension must be positive");
    }
    loop {
        let mut v: Vec<Complex64> = match field {
            Field::Real => (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
                .collect(),
            Field::Complex => (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        };
        let norm = crate::linalg::norm2(&v);
        if norm > 0.0 {
            v.iter_mut().for_each(|z| *z /= norm);
            return Ok(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn stream_is_deterministic() {
        let a: Vec<u64> = {
            let mut r = derive_stream(7, 3).rng();
            (0..8).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = derive_stream(7, 3).rng();
            (0..8).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_indices_give_distinct_streams() {
        let mut r3 = derive_stream(7, 3).rng();
        let mut r4 = derive_stream(7, 4).rng();
        let a: Vec<u64> = (0..4).map(|_| r3.next_u64()).collect();
        let b: Vec<u64> = (0..4).map(|_| r4.next_u64()).collect();
        assert_ne!(a, b);
        assert_ne!(derive_stream(7, 3), derive_stream(7, 4));
        let mut other_seed = derive_stream(8, 3).rng();
        assert_ne!(a[0], other_seed.next_u64());
    }

    #[test]
    fn rademacher_complex_support() {
        let ens = MatrixEnsemble::new(Field::Complex, 2, 2, EntryKind::Rademacher);
        let a = sample_matrix(&ens, &SeedStream::new(1, 0)).unwrap();
        for z in a.data() {
            assert!(z.re.abs() == 1.0 && z.im.abs() == 1.0, "{z}");
        }
    }

    #[test]
    fn real_ensemble_has_zero_imaginary_parts() {
        for kind in [EntryKind::Gaussian, EntryKind::Rademacher, EntryKind::SymmetricUniform] {
            let ens = MatrixEnsemble::new(Field::Real, 5, 7, kind);
            let a = sample_matrix(&ens, &SeedStream::new(2, 9)).unwrap();
            assert!(a.data().iter().all(|z| z.im == 0.0));
        }
    }

    #[test]
    fn sampling_is_bit_identical() {
        let ens = MatrixEnsemble::complex_gaussian(6, 4);
        let s = SeedStream::new(11, 5);
        let a = sample_matrix(&ens, &s).unwrap();
        let b = sample_matrix(&ens, &s).unwrap();
        assert!(a.data().iter().zip(b.data()).all(|(x, y)| x.re.to_bits() == y.re.to_bits()
            && x.im.to_bits() == y.im.to_bits()));
    }

    #[test]
    fn zero_dimensions_rejected() {
        let ens = MatrixEnsemble::complex_gaussian(0, 3);
        assert!(sample_matrix(&ens, &SeedStream::new(0, 0)).is_err());
        assert!(sample_unit_sphere(0, Field::Real, &SeedStream::new(0, 0)).is_err());
    }

    #[test]
    fn gaussian_entry_mean_within_clt_band() {
        let ens = MatrixEnsemble::complex_gaussian(100, 100);
        let a = sample_matrix(&ens, &SeedStream::new(3, 0)).unwrap();
        let t = a.data().len() as f64;
        let mean_re = a.data().iter().map(|z| z.re).sum::<f64>() / t;
        let mean_im = a.data().iter().map(|z| z.im).sum::<f64>() / t;
        let tol = 4.0 / t.sqrt();
        assert!(mean_re.abs() < tol && mean_im.abs() < tol, "{mean_re} {mean_im}");
    }

    #[test]
    fn moments_per_kind() {
        let t = 100_000usize;
        for kind in [EntryKind::Gaussian, EntryKind::Rademacher, EntryKind::SymmetricUniform] {
            let dist = EntryDistribution::new(kind);
            let mut rng = SeedStream::new(17, kind as u64).rng();
            let xs: Vec<f64> = (0..t).map(|_| dist.draw(&mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / t as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / t as f64;
            let tf = t as f64;
            assert!(mean.abs() <= 4.0 / tf.sqrt(), "{kind:?} mean {mean}");
            assert!((var - 1.0).abs() <= 5.0 / tf.sqrt(), "{kind:?} var {var}");
            assert!(dist.subgaussian_bound.is_finite() && dist.subgaussian_bound > 0.0);
        }
    }

    #[test]
    fn subgaussian_bounds_hold_on_a_grid() {
        // P(|X| > t) <= 2 exp(-t^2/B^2), checked against exact tails.
        let normal_tail = |t: f64| libm::erfc(t / std::f64::consts::SQRT_2);
        for i in 1..400 {
            let t = i as f64 * 0.01;
            let b = EntryKind::Gaussian.subgaussian_bound();
            assert!(normal_tail(t) <= 2.0 * (-t * t / (b * b)).exp() + 1e-15);
            let b = EntryKind::Rademacher.subgaussian_bound();
            let tail = if t < 1.0 { 1.0 } else { 0.0 };
            assert!(tail <= 2.0 * (-t * t / (b * b)).exp() + 1e-12);
            let b = EntryKind::SymmetricUniform.subgaussian_bound();
            let tail = (1.0 - t / 3f64.sqrt()).max(0.0);
            assert!(tail <= 2.0 * (-t * t / (b * b)).exp() + 1e-12);
        }
    }

    #[test]
    fn sphere_vectors_are_unit() {
        let v = sample_unit_sphere(1, Field::Complex, &SeedStream::new(5, 5)).unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-15);
        let w = sample_unit_sphere(1000, Field::Real, &SeedStream::new(5, 6)).unwrap();
        assert!((crate::linalg::norm2(&w) - 1.0).abs() < 1e-14);
        assert!(w.iter().all(|z| z.im == 0.0));
        let w = sample_unit_sphere(1000, Field::Complex, &SeedStream::new(5, 7)).unwrap();
        assert!((crate::linalg::norm2(&w) - 1.0).abs() < 1e-14);
    }
}
