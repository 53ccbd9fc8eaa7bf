//! Empirical Lévy concentration function.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{param, Result};
use crate::randgen::{SeedStream, StreamRng};
use crate::stats::{wilson, Z95};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevyEstimate {
    /// `max_c #{i : |S_i - c| <= eps} / trials` over sample centers `c`.
    pub estimate: f64,
    /// Wilson 95% upper bound for the maximal fraction.
    pub upper_conf: f64,
    pub trials: usize,
}

/// Draws `trials` samples of `S` and estimates `sup_v P(|S - v| <= eps)`.
pub fn levy_concentration(
    mut sampler: impl FnMut(&mut StreamRng) -> Vec<f64>,
    eps: f64,
    trials: usize,
    stream: &SeedStream,
) -> Result<LevyEstimate> {
    if trials < 1000 {
        return param(format!("levy concentration needs at least 1000 trials, got {trials}"));
    }
    let mut rng = stream.rng();
    let samples: Vec<Vec<f64>> = (0..trials).map(|_| sampler(&mut rng)).collect();
    levy_from_samples(&samples, eps)
}

/// Concentration estimate on fixed samples; centers are the distinct samples.
pub fn levy_from_samples(samples: &[Vec<f64>], eps: f64) -> Result<LevyEstimate> {
    if !(eps > 0.0) {
        return param(format!("eps = {eps} must be positive"));
    }
    if samples.is_empty() {
        return param("no samples");
    }
    let dim = samples[0].len();
    if samples.iter().any(|s| s.len() != dim) {
        return param("samples have different dimensions");
    }
    let mut distinct: BTreeMap<Vec<u64>, (usize, usize)> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        let key: Vec<u64> = s.iter().map(|x| (x + 0.0).to_bits()).collect();
        distinct.entry(key).or_insert((i, 0)).1 += 1;
    }
    let best = if dim == 1 {
        let mut xs: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        xs.sort_by(f64::total_cmp);
        // Window [c - eps, c + eps] around each sample c.
        let (mut lo, mut hi) = (0, 0);
        let mut best = 0;
        for &c in &xs {
            while xs[lo] < c - eps {
                lo += 1;
            }
            while hi < xs.len() && xs[hi] <= c + eps {
                hi += 1;
            }
            best = best.max(hi - lo);
        }
        best
    } else {
        let eps2 = eps * eps;
        let centers: Vec<(&Vec<f64>, usize)> = distinct
            .values()
            .map(|&(i, count)| (&samples[i], count))
            .collect();
        centers
            .iter()
            .map(|(c, _)| {
                distinct
                    .values()
                    .filter(|&&(j, _)| {
                        samples[j]
                            .iter()
                            .zip(c.iter())
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            <= eps2
                    })
                    .map(|&(_, count)| count)
                    .sum::<usize>()
            })
            .max()
            .unwrap_or(0)
    };
    let t = samples.len();
    Ok(LevyEstimate {
        estimate: best as f64 / t as f64,
        upper_conf: wilson(best as u64, t as u64, Z95).1,
        trials: t,
    })
}
