use num_complex::Complex64;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_grid, check_trials, run_trials, slope_estimate, RunReport, TailCurve, MIN_HITS};
use crate::error::{param, Result};
use crate::linalg::{dist_to_subspace, rect_scale, shift, smallest_singular_value};
use crate::randgen::{sample_matrix, EntryKind, Field, MatrixEnsemble};

/// Curve plus the report echoing how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRun {
    pub curve: TailCurve,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SminTailConfig {
    pub ensemble: MatrixEnsemble,
    pub lambda: Complex64,
    /// Shifts must satisfy `|lambda| <= M sqrt(N)`.
    pub big_m: f64,
    pub eps_grid: Vec<f64>,
    pub trials: usize,
}

/// `P(s_n(A - lambda) <= eps (sqrt N - sqrt(n - 1)))` over the grid.
pub fn smin_tail(cfg: &SminTailConfig, master_seed: u64) -> Result<TailRun> {
    check_trials(cfg.trials)?;
    check_grid(&cfg.eps_grid)?;
    let (big_n, n) = (cfg.ensemble.rows, cfg.ensemble.cols);
    if big_n < n || n == 0 {
        return param(format!("smin tail needs N >= n >= 1, got {big_n}x{n}"));
    }
    if cfg.lambda.norm() > cfg.big_m * (big_n as f64).sqrt() {
        return param(format!(
            "|lambda| = {} exceeds M sqrt(N) = {}",
            cfg.lambda.norm(),
            cfg.big_m * (big_n as f64).sqrt()
        ));
    }
    let scale = rect_scale(big_n, n);
    let stats = run_trials(master_seed, cfg.trials, |_, stream| {
        let a = sample_matrix(&cfg.ensemble, stream)?;
        Ok(smallest_singular_value(&shift(&a, cfg.lambda))? / scale)
    })?;
    let curve = TailCurve::from_samples(&cfg.eps_grid, &stats);
    let mut report = RunReport::new("smin-tail", cfg, master_seed);
    report.slope = slope_estimate(&curve, MIN_HITS).ok();
    report.put("scale", scale);
    report.put("min_statistic", stats.iter().copied().fold(f64::INFINITY, f64::min));
    report.put("curve", &curve);
    Ok(TailRun { curve, report })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistTailConfig {
    pub big_n: usize,
    /// Codimension of `H`.
    pub m: usize,
    pub kind: EntryKind,
    pub field: Field,
    pub eps_grid: Vec<f64>,
    pub trials: usize,
}

/// `P(dist(X, H) <= eps sqrt(m))` for Gaussian `X` and `H` spanned by
/// `N - m` Gaussian vectors: `dist^2` is chi-square with `2m` (complex,
/// unit-variance real and imaginary parts) or `m` (real) degrees of freedom.
pub fn dist_oracle(field: Field, m: usize, eps: f64) -> f64 {
    let (dof, x) = match field {
        Field::Complex => (2 * m, m as f64 * eps * eps),
        Field::Real => (m, m as f64 * eps * eps),
    };
    ChiSquared::new(dof as f64).expect("positive dof").cdf(x)
}

pub fn dist_tail(cfg: &DistTailConfig, master_seed: u64) -> Result<TailRun> {
    check_trials(cfg.trials)?;
    check_grid(&cfg.eps_grid)?;
    if cfg.m == 0 || cfg.m >= cfg.big_n {
        return param(format!("dist tail needs 0 < m < N, got m = {}, N = {}", cfg.m, cfg.big_n));
    }
    let ens = MatrixEnsemble::new(cfg.field, cfg.big_n - cfg.m + 1, cfg.big_n, cfg.kind);
    let root_m = (cfg.m as f64).sqrt();
    let stats = run_trials(master_seed, cfg.trials, |_, stream| {
        let a = sample_matrix(&ens, stream)?;
        let x = a.row(0).to_vec();
        let basis: Vec<Vec<Complex64>> = (1..a.rows()).map(|i| a.row(i).to_vec()).collect();
        let zero = vec![Complex64::new(0.0, 0.0); cfg.big_n];
        Ok(dist_to_subspace(&x, &basis, &zero)? / root_m)
    })?;
    let mut curve = TailCurve::from_samples(&cfg.eps_grid, &stats);
    if cfg.kind == EntryKind::Gaussian {
        curve.oracle = Some(cfg.eps_grid.iter().map(|&e| dist_oracle(cfg.field, cfg.m, e)).collect());
    }
    let mut report = RunReport::new("dist-tail", cfg, master_seed);
    report.slope = slope_estimate(&curve, MIN_HITS).ok();
    if let Some(o) = &curve.oracle {
        let worst = (0..o.len())
            .map(|i| {
                let half = 0.5 * (curve.wilson_hi[i] - curve.wilson_lo[i]);
                (curve.phat[i] - o[i]).abs() / half.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        report.put("max_oracle_gap_in_half_widths", worst);
    }
    report.put("curve", &curve);
    Ok(TailRun { curve, report })
}
