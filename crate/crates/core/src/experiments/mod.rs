//! Monte Carlo harness.
//!
//! Every trial `t` draws from `derive_stream(master_seed, t)`, trials run
//! on the rayon pool, and results are folded in trial order, so outputs
//! depend only on the configuration and the master seed.

mod norms;
mod spectral;
mod tail;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

pub use norms::{incompressible_image_experiment, opnorm_experiment, ImageConfig, OpnormConfig};
pub use spectral::{deloc_experiment, normal_vector_experiment, DelocConfig, NormalConfig};
pub use tail::{dist_oracle, dist_tail, smin_tail, DistTailConfig, SminTailConfig, TailRun};

use crate::error::{param, Error, Result};
use crate::fmt::g17;
use crate::randgen::{derive_stream, SeedStream};
use crate::stats::{ols, wilson, LineFit, Z95};

/// Regression points need at least this many hits.
pub const MIN_HITS: u64 = 20;

/// Empirical tail `P(statistic <= eps)` on a grid, from shared samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCurve {
    pub eps_grid: Vec<f64>,
    pub hits: Vec<u64>,
    pub trials: u64,
    pub phat: Vec<f64>,
    pub wilson_lo: Vec<f64>,
    pub wilson_hi: Vec<f64>,
    /// Exact probabilities, when an oracle is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<f64>>,
}

impl TailCurve {
    /// Thresholds one sample of the statistic at every grid point.
    pub fn from_samples(eps_grid: &[f64], samples: &[f64]) -> Self {
        let trials = samples.len() as u64;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let hits: Vec<u64> = eps_grid
            .iter()
            .map(|&e| sorted.partition_point(|&s| s <= e) as u64)
            .collect();
        let mut phat = Vec::with_capacity(hits.len());
        let mut lo = Vec::with_capacity(hits.len());
        let mut hi = Vec::with_capacity(hits.len());
        for &h in &hits {
            phat.push(if trials == 0 { 0.0 } else { h as f64 / trials as f64 });
            let (l, u) = wilson(h, trials, Z95);
            lo.push(l);
            hi.push(u);
        }
        TailCurve {
            eps_grid: eps_grid.to_vec(),
            hits,
            trials,
            phat,
            wilson_lo: lo,
            wilson_hi: hi,
            oracle: None,
        }
    }

    /// CSV with columns `eps,hits,trials,phat,wilson_lo,wilson_hi` (plus
    /// `oracle` when present), preceded by `# key=value` comment lines.
    pub fn to_csv(&self, header: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str("eps,hits,trials,phat,wilson_lo,wilson_hi");
        if self.oracle.is_some() {
            out.push_str(",oracle");
        }
        out.push('\n');
        for i in 0..self.eps_grid.len() {
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                g17(self.eps_grid[i]),
                self.hits[i],
                self.trials,
                g17(self.phat[i]),
                g17(self.wilson_lo[i]),
                g17(self.wilson_hi[i])
            );
            if let Some(o) = &self.oracle {
                let _ = write!(out, ",{}", g17(o[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Fitted tail exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub stderr: Option<f64>,
    pub points: usize,
}

impl From<LineFit> for SlopeEstimate {
    fn from(f: LineFit) -> Self {
        Self {
            slope: f.slope,
            stderr: f.stderr,
            points: f.points,
        }
    }
}

/// OLS of `ln phat` on `ln eps` over grid points with at least `min_hits` hits.
pub fn slope_estimate(curve: &TailCurve, min_hits: u64) -> Result<SlopeEstimate> {
    let (x, y): (Vec<f64>, Vec<f64>) = curve
        .eps_grid
        .iter()
        .zip(&curve.hits)
        .zip(&curve.phat)
        .filter(|((_, &h), _)| h >= min_hits.max(1))
        .map(|((e, _), p)| (e.ln(), p.ln()))
        .unzip();
    if x.len() < 2 {
        return Err(Error::Insufficient(format!(
            "{} grid points with at least {min_hits} hits; need 2",
            x.len()
        )));
    }
    Ok(ols(&x, &y)?.into())
}

/// `count` logarithmically spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return param("log grid needs 0 < lo < hi and at least 2 points");
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return param("eps grid must be nonempty");
    }
    if grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return param("eps grid must be positive and strictly increasing");
    }
    Ok(())
}

pub(crate) fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return param("trials must be positive");
    }
    Ok(())
}

/// Runs `f(t, stream_t)` for every trial on the current rayon pool and
/// returns the results in trial order. The first failing trial, by index,
/// is reported with its index and the master seed.
pub(crate) fn run_trials<T: Send>(
    master_seed: u64,
    trials: usize,
    f: impl Fn(u64, &SeedStream) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let out: Vec<Result<T>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| f(t, &derive_stream(master_seed, t)))
        .collect();
    out.into_iter()
        .enumerate()
        .map(|(t, r)| {
            r.map_err(|e| Error::Trial {
                trial: t as u64,
                master_seed,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Full record of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub metrics: BTreeMap<String, serde_json::Value>,
    pub slope: Option<SlopeEstimate>,
    /// Trials discarded after a numerical failure or a degenerate draw.
    pub failures: u64,
    /// Wall-clock time; left empty unless requested so that reports are
    /// reproducible byte for byte.
    pub runtime_seconds: Option<f64>,
}

impl RunReport {
    pub(crate) fn new(experiment: &str, config: &impl Serialize, master_seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            master_seed,
            metrics: BTreeMap::new(),
            slope: None,
            failures: 0,
            runtime_seconds: None,
        }
    }

    pub(crate) fn put(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.metrics.insert(
            key.into(),
            serde_json::to_value(value).expect("metric serializes"),
        );
    }

    /// A numeric metric.
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).and_then(|v| v.as_f64())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_slope() {
        let eps = log_grid(0.01, 0.5, 8).unwrap();
        let curve = TailCurve {
            phat: eps.iter().map(|e| e * e * e).collect(),
            hits: vec![1000; 8],
            trials: 1000,
            wilson_lo: vec![0.0; 8],
            wilson_hi: vec![1.0; 8],
            eps_grid: eps,
            oracle: None,
        };
        let s = slope_estimate(&curve, 20).unwrap();
        assert!((s.slope - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shared_samples_are_monotone() {
        let c = TailCurve::from_samples(&[0.1, 0.2, 0.3], &[0.05, 0.2, 0.25, 0.9]);
        assert_eq!(c.hits, vec![1, 2, 3]);
        assert!(check_grid(&[]).is_err() && check_grid(&[0.2, 0.1]).is_err());
        assert!(check_trials(0).is_err());
    }
}
