//! Compressible/incompressible vectors and spread coordinates.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressParams {
    /// Sparsity fraction: sparse means at most `floor(delta n)` nonzeros.
    pub delta: f64,
    pub rho: f64,
}

impl CompressParams {
    pub fn new(delta: f64, rho: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) || !(rho > 0.0 && rho < 1.0) {
            return param(format!("delta = {delta} and rho = {rho} must lie in (0, 1)"));
        }
        Ok(Self { delta, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Compressibility {
    Compressible,
    Incompressible,
}

/// Distance from `x` to the nearest `floor(delta n)`-sparse vector: the
/// norm of all but the largest `floor(delta n)` coordinates.
pub fn compress_distance(x: &[Complex64], delta: f64) -> f64 {
    let k = (delta * x.len() as f64).floor().max(0.0) as usize;
    let mut sq: Vec<f64> = x.iter().map(|z| z.norm_sqr()).collect();
    sq.sort_by(f64::total_cmp);
    let keep = x.len().saturating_sub(k);
    sq[..keep].iter().sum::<f64>().sqrt()
}

pub fn classify(x: &[Complex64], p: CompressParams) -> (Compressibility, f64) {
    let d = compress_distance(x, p.delta);
    let c = if d <= p.rho {
        Compressibility::Compressible
    } else {
        Compressibility::Incompressible
    };
    (c, d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadSet {
    pub indices: Vec<usize>,
    pub fraction: f64,
}

/// `{k : nu2 / sqrt(n) <= |x_k| <= nu3 / sqrt(n)}`.
pub fn spread_set(x: &[Complex64], nu2: f64, nu3: f64) -> Result<SpreadSet> {
    if !(nu2 > 0.0 && nu2 < nu3) {
        return param(format!("need 0 < nu2 < nu3, got {nu2}, {nu3}"));
    }
    let n = x.len();
    let s = (n as f64).sqrt();
    let indices: Vec<usize> = (0..n)
        .filter(|&k| {
            let a = x[k].norm() * s;
            nu2 <= a && a <= nu3
        })
        .collect();
    let fraction = if n == 0 { 0.0 } else { indices.len() as f64 / n as f64 };
    Ok(SpreadSet { indices, fraction })
}

/// Every coordinate modulus lies in `[k1 / sqrt(d), k2 / sqrt(d)]`.
pub fn totally_spread_check(y: &[Complex64], k1: f64, k2: f64) -> Result<bool> {
    if y.is_empty() {
        return param("totally spread check needs d >= 1");
    }
    let s = (y.len() as f64).sqrt();
    Ok(y.iter().all(|z| {
        let a = z.norm() * s;
        k1 <= a && a <= k2
    }))
}
