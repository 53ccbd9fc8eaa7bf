//! Baselines for vectors uniform on the unit sphere.
//!
//! `F(x) = 1 - e^{-x}` is the law of `|g|^2` for a standard complex
//! Gaussian `g = (Z + iZ')/sqrt(2)`, i.e. of `Z^2/2 + Z'^2/2`. Its
//! quantile function is `Q(s) = -ln(1 - s)`, and `H(s) = -Q(1 - s) = ln s`.
//! The subset-mass limits are `-int H` over the top or bottom `delta`
//! fraction of `[0, 1]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use libm::erf;

use crate::deloc::{max_subset_mass, min_subset_mass, profile};
use crate::error::{param, Result};
use crate::quad::integrate;
use crate::randgen::{sample_unit_sphere, Field, SeedStream};
use crate::stats::{mean, quantile_sorted};

fn check_nonneg(x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return param(format!("x = {x} must be nonnegative"));
    }
    Ok(())
}

pub fn f_cdf(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(-(-x).exp_m1())
}

/// `G(x) = F(x^2)`, the law of `|g|`.
pub fn g_cdf(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(-(-x * x).exp_m1())
}

pub fn chi2_cdf(x: f64, dof: u32) -> Result<f64> {
    check_nonneg(x)?;
    match dof {
        1 => Ok(erf((x / 2.0).sqrt())),
        2 => Ok(-(-x / 2.0).exp_m1()),
        _ => param(format!("chi-square dof {dof} not supported (1 or 2)")),
    }
}

pub fn q_quantile(s: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return param(format!("Q(s) needs s in [0, 1), got {s}"));
    }
    Ok(-(-s).ln_1p())
}

pub fn h_func(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return param(format!("H(s) needs s in (0, 1), got {s}"));
    }
    Ok(s.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassSide {
    Min,
    Max,
}

impl std::str::FromStr for MassSide {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(MassSide::Min),
            "max" => Ok(MassSide::Max),
            _ => param(format!("expected min or max, got {s:?}")),
        }
    }
}

/// Limit of the lightest (`Min`) or heaviest (`Max`) `delta n` squared
/// coordinates of a uniform unit vector.
///
/// `Min = delta + (1 - delta) ln(1 - delta)`, `Max = delta (1 - ln delta)`.
pub fn limit_mass(delta: f64, side: MassSide) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return param(format!("delta = {delta} must lie in (0, 1]"));
    }
    if delta == 1.0 {
        return Ok(1.0);
    }
    Ok(match side {
        MassSide::Min => delta + (1.0 - delta) * (-delta).ln_1p(),
        MassSide::Max => delta * (1.0 - delta.ln()),
    })
}

/// The same integrals by adaptive quadrature of `-H`.
pub fn limit_mass_quadrature(delta: f64, side: MassSide, tol: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return param(format!("delta = {delta} must lie in (0, 1]"));
    }
    let (a, b) = match side {
        MassSide::Min => (1.0 - delta, 1.0),
        MassSide::Max => (0.0, delta),
    };
    integrate(|u| -u.ln(), a, b, tol)
}

/// `eta_k = #{i : t_{k-1} <= |v_i|^2 < t_k}` for `k = 1..=L`, with
/// `t_k = (delta/n) 2^k` (complex) or `(delta^2/n^2) 2^k` (real).
pub fn dyadic_band_counts(v: &[Complex64], delta: f64, bands: usize, field: Field) -> Result<Vec<usize>> {
    if !(delta > 0.0) || bands == 0 {
        return param("dyadic bands need delta > 0 and L >= 1");
    }
    let n = v.len() as f64;
    let base = match field {
        Field::Complex => delta / n,
        Field::Real => delta * delta / (n * n),
    };
    let mut eta = vec![0; bands];
    for z in v {
        let x = z.norm_sqr();
        if x < base {
            continue;
        }
        // Largest k with base 2^{k-1} <= x, checked exactly after the log guess.
        let mut k = ((x / base).log2().floor() as i64).max(0) as usize;
        while k > 0 && base * 2f64.powi(k as i32) > x {
            k -= 1;
        }
        while base * 2f64.powi(k as i32 + 1) <= x {
            k += 1;
        }
        if k < bands {
            eta[k] += 1;
        }
    }
    Ok(eta)
}

/// Band parameters used in the sphere analysis: `delta = 1/ln n`,
/// `L = floor(log2(m / (2 delta)))`.
pub fn default_band_params(n: usize, m: usize) -> Result<(f64, usize)> {
    if n < 2 || m < 1 {
        return param("band defaults need n >= 2 and m >= 1");
    }
    let delta = 1.0 / (n as f64).ln();
    let l = (m as f64 / (2.0 * delta)).log2().floor();
    if l < 1.0 {
        return param(format!("m = {m} too small for one band at n = {n}"));
    }
    Ok((delta, l as usize))
}

/// Monte Carlo summary of subset masses of uniform unit vectors.
/// Masses are squared norms `|v_I|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereSummary {
    pub n: usize,
    pub m: usize,
    pub field: &'static str,
    pub trials: usize,
    pub mean_min_mass: f64,
    pub mean_max_mass: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub linf_max: f64,
    #[serde(skip)]
    pub linf: Vec<f64>,
}

pub fn sphere_subset_mass_simulation(
    n: usize,
    m: usize,
    field: Field,
    trials: usize,
    stream: &SeedStream,
) -> Result<SphereSummary> {
    if trials == 0 {
        return param("trials must be positive");
    }
    if m == 0 || m > n {
        return param(format!("m = {m} must satisfy 1 <= m <= n = {n}"));
    }
    let rows: Vec<(f64, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let v = sample_unit_sphere(n, field, &stream.child(t as u64))?;
            let p = profile(&v)?;
            let lo = min_subset_mass(&p, m)?;
            let hi = max_subset_mass(&p, m)?;
            Ok((lo * lo, hi * hi, p.linf))
        })
        .collect::<Result<_>>()?;
    let mins: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let maxs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let linf: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let mut sorted = mins.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(SphereSummary {
        n,
        m,
        field: field.name(),
        trials,
        mean_min_mass: mean(&mins),
        mean_max_mass: mean(&maxs),
        q05: quantile_sorted(&sorted, 0.05),
        q50: quantile_sorted(&sorted, 0.5),
        q95: quantile_sorted(&sorted, 0.95),
        linf_max: linf.iter().copied().fold(0.0, f64::max),
        linf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(f_cdf(0.0).unwrap(), 0.0);
        assert!((f_cdf(2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        assert!((g_cdf(1.0).unwrap() - 0.6321205588285577).abs() < 1e-15);
        assert!(f_cdf(-1.0).is_err());
        assert_eq!(q_quantile(0.0).unwrap(), 0.0);
        assert!((q_quantile(1.0 - (-1f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert!(q_quantile(1.0).is_err() && h_func(0.0).is_err());
        assert!((h_func(0.5).unwrap() + 2f64.ln()).abs() < 1e-15);
        let p = chi2_cdf(1.0, 1).unwrap();
        assert!((p - 0.6826894921370859).abs() < 1e-12, "{p}");
    }

    #[test]
    fn mass_limits() {
        assert!((limit_mass(0.1, MassSide::Min).unwrap() - 0.005175535907956344).abs() < 1e-15);
        assert!((limit_mass(0.1, MassSide::Max).unwrap() - 0.3302585092994046).abs() < 1e-15);
        assert_eq!(limit_mass(1.0, MassSide::Min).unwrap(), 1.0);
        assert!(limit_mass(0.0, MassSide::Max).is_err());
    }

    #[test]
    fn band_edges_are_half_open() {
        // n = 4, delta = 1: thresholds 0.25, 0.5, 1, 2.
        let v = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.25, 0.0),
        ];
        let delta = 1.0;
        let eta = dyadic_band_counts(&v, delta, 3, Field::Complex).unwrap();
        assert_eq!(eta, vec![1, 1, 1]);
    }
}
