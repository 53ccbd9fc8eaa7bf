use num_complex::Complex64;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{check_trials, run_trials, RunReport};
use crate::error::{param, Result};
use crate::linalg::{dot, norm2, operator_norm, shift, singular_values};
use crate::randgen::{sample_matrix_with, EntryKind, Field, MatrixEnsemble};
use crate::stats::{mean, quantile, quantile_sorted};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpnormConfig {
    pub n: usize,
    pub field: Field,
    pub kind: EntryKind,
    pub trials: usize,
    pub tol: f64,
}

/// Distribution of `|A| / sqrt(n)`; the 99.9% quantile is reported as the
/// fitted `M`.
pub fn opnorm_experiment(cfg: &OpnormConfig, master_seed: u64) -> Result<RunReport> {
    check_trials(cfg.trials)?;
    if cfg.n < 2 {
        return param("opnorm experiment needs n >= 2");
    }
    let ens = MatrixEnsemble::new(cfg.field, cfg.n, cfg.n, cfg.kind);
    let root_n = (cfg.n as f64).sqrt();
    let mut r = run_trials(master_seed, cfg.trials, |_, stream| {
        let a = sample_matrix_with(&ens, &mut stream.rng())?;
        Ok(operator_norm(&a, cfg.tol) / root_n)
    })?;
    let mut report = RunReport::new("opnorm", cfg, master_seed);
    report.put("mean", mean(&r));
    r.sort_by(f64::total_cmp);
    report.put("q50", quantile_sorted(&r, 0.5));
    report.put("q99", quantile_sorted(&r, 0.99));
    report.put("fitted_m", quantile_sorted(&r, 0.999));
    report.put("max", *r.last().expect("trials > 0"));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageConfig {
    pub big_n: usize,
    pub n: usize,
    pub field: Field,
    pub kind: EntryKind,
    pub lambda: Complex64,
    pub delta: f64,
    pub rho: f64,
    pub trials: usize,
    /// Also compute `|A - lambda|` to confirm `|(A - lambda) x| <= |A - lambda|`.
    pub check_opnorm: bool,
}

/// Unit `x = sqrt(1 - rho^2) y + rho w` with `y` a random unit vector on
/// `floor(delta n)` random coordinates and `w` a unit vector orthogonal to
/// `y`; `x` lies within `rho` of a sparse vector.
pub fn sample_compressible<R: Rng + ?Sized>(n: usize, delta: f64, rho: f64, field: Field, rng: &mut R) -> Vec<Complex64> {
    let k = ((delta * n as f64).floor() as usize).clamp(1, n);
    let g = |rng: &mut R| match field {
        Field::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
    };
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in sample_indices(rng, n, k) {
        y[i] = g(rng);
    }
    let ny = norm2(&y);
    y.iter_mut().for_each(|z| *z /= ny);
    let mut w: Vec<Complex64> = (0..n).map(|_| g(rng)).collect();
    for _ in 0..2 {
        let c = dot(&y, &w);
        for (wi, yi) in w.iter_mut().zip(&y) {
            *wi -= c * yi;
        }
    }
    let nw = norm2(&w);
    w.iter_mut().for_each(|z| *z /= nw);
    let s = (1.0 - rho * rho).sqrt();
    y.iter().zip(&w).map(|(a, b)| a * s + b * rho).collect()
}

/// Images of compressible vectors: `|(A - lambda) x| / sqrt(N)`.
pub fn incompressible_image_experiment(cfg: &ImageConfig, master_seed: u64) -> Result<RunReport> {
    check_trials(cfg.trials)?;
    if cfg.n == 0 || 2 * cfg.big_n < cfg.n {
        return param(format!("need N >= n/2, got N = {}, n = {}", cfg.big_n, cfg.n));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0 && cfg.rho > 0.0 && cfg.rho < 1.0) {
        return param("delta and rho must lie in (0, 1)");
    }
    let ens = MatrixEnsemble::new(cfg.field, cfg.big_n, cfg.n, cfg.kind);
    let root = (cfg.big_n as f64).sqrt();
    let rows = run_trials(master_seed, cfg.trials, |_, stream| {
        let mut rng = stream.rng();
        let a = shift(&sample_matrix_with(&ens, &mut rng)?, cfg.lambda);
        let x = sample_compressible(cfg.n, cfg.delta, cfg.rho, cfg.field, &mut rng);
        let image = norm2(&a.mul_vec(&x));
        let bound = if cfg.check_opnorm {
            Some(singular_values(&a)?[0])
        } else {
            None
        };
        Ok((image / root, bound.map(|b| image / b)))
    })?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut report = RunReport::new("incompressible-image", cfg, master_seed);
    report.put("q001", quantile(&ratios, 0.001));
    report.put("q01", quantile(&ratios, 0.01));
    report.put("q05", quantile(&ratios, 0.05));
    report.put("min", ratios.iter().copied().fold(f64::INFINITY, f64::min));
    report.put("mean", mean(&ratios));
    if cfg.check_opnorm {
        let worst = rows.iter().filter_map(|r| r.1).fold(0.0, f64::max);
        report.put("max_image_over_opnorm", worst);
    }
    Ok(report)
}
