use serde::Serialize;
use libm::erf;

use super::{check_trials, run_trials, RunReport};
use crate::baseline::{limit_mass, MassSide};
use crate::deloc::{max_subset_mass, min_subset_mass, profile};
use crate::error::{param, Error, Result};
use crate::linalg::{eigen_decompose, smallest_right_singular};
use crate::randgen::{sample_matrix, EntryKind, Field, MatrixEnsemble};
use crate::stats::{ks_distance, mean, quantile};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelocConfig {
    pub n: usize,
    pub field: Field,
    pub kind: EntryKind,
    pub m_list: Vec<usize>,
    pub trials: usize,
    /// Matrices are multiplied by this factor before decomposition.
    pub scale: f64,
    pub eig_tol: f64,
}

impl DelocConfig {
    pub fn new(n: usize, field: Field, kind: EntryKind, m_list: Vec<usize>, trials: usize) -> Self {
        Self {
            n,
            field,
            kind,
            m_list,
            trials,
            scale: 1.0,
            eig_tol: 1e-10,
        }
    }
}

struct DelocTrial {
    /// Per `m`: smallest `min_subset_mass` over all eigenvectors.
    worst: Vec<f64>,
    /// Per `m`: the same over eigenvectors of real eigenvalues, if any.
    worst_real: Vec<Option<f64>>,
    min_coord: f64,
    real_count: usize,
}

/// Worst subset mass across the spectrum, per trial and per `m`.
///
/// `c_hat` is `min_trials worst / (m/n)^{3/2}`; for real ensembles,
/// `real_c_hat` is the same over real eigenvalues normalised by `(m/n)^2`.
/// Trials whose eigensolver fails are discarded and counted.
pub fn deloc_experiment(cfg: &DelocConfig, master_seed: u64) -> Result<RunReport> {
    check_trials(cfg.trials)?;
    if cfg.n < 2 {
        return param("deloc experiment needs n >= 2");
    }
    if cfg.m_list.is_empty() || cfg.m_list.iter().any(|&m| m == 0 || m > cfg.n) {
        return param(format!("every m must satisfy 1 <= m <= n = {}", cfg.n));
    }
    if !(cfg.scale > 0.0 && cfg.scale.is_finite()) {
        return param("scale must be positive");
    }
    let ens = MatrixEnsemble::new(cfg.field, cfg.n, cfg.n, cfg.kind);
    let trials = run_trials(master_seed, cfg.trials, |_, stream| {
        let a = sample_matrix(&ens, stream)?.scale(cfg.scale);
        let spec = match eigen_decompose(&a, cfg.eig_tol) {
            Ok(s) => s,
            Err(e) if e.is_numerical() => return Ok(None),
            Err(e) => return Err(e),
        };
        let real_tol = 1e-8 * spec.norm;
        let mut worst = vec![f64::INFINITY; cfg.m_list.len()];
        let mut worst_real = vec![None; cfg.m_list.len()];
        let mut min_coord = f64::INFINITY;
        let mut real_count = 0;
        for pair in &spec.pairs {
            let p = profile(&pair.vector)?;
            min_coord = min_coord.min(p.sorted_sq[0].sqrt());
            let is_real = pair.value.im.abs() <= real_tol;
            real_count += is_real as usize;
            for (k, &m) in cfg.m_list.iter().enumerate() {
                let w = min_subset_mass(&p, m)?;
                worst[k] = worst[k].min(w);
                if is_real {
                    worst_real[k] = Some(worst_real[k].map_or(w, |x: f64| x.min(w)));
                }
            }
        }
        Ok(Some(DelocTrial {
            worst,
            worst_real,
            min_coord,
            real_count,
        }))
    })?;
    let done: Vec<&DelocTrial> = trials.iter().flatten().collect();
    let mut report = RunReport::new("deloc", cfg, master_seed);
    report.failures = (trials.len() - done.len()) as u64;
    report.put("completed", done.len());
    if done.is_empty() {
        return Err(Error::Insufficient("every trial failed".into()));
    }
    report.put(
        "min_coord",
        done.iter().map(|t| t.min_coord).fold(f64::INFINITY, f64::min),
    );
    if cfg.field == Field::Real {
        report.put("mean_real_eigenvalues", mean(&done.iter().map(|t| t.real_count as f64).collect::<Vec<_>>()));
    }
    let nf = cfg.n as f64;
    for (k, &m) in cfg.m_list.iter().enumerate() {
        let r = m as f64 / nf;
        let w: Vec<f64> = done.iter().map(|t| t.worst[k]).collect();
        let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
        report.put(format!("m{m}_worst_min"), lo);
        report.put(format!("m{m}_worst_q05"), quantile(&w, 0.05));
        report.put(format!("m{m}_worst_q50"), quantile(&w, 0.5));
        report.put(format!("m{m}_c_hat"), lo / r.powf(1.5));
        if cfg.field == Field::Real {
            let wr: Vec<f64> = done.iter().filter_map(|t| t.worst_real[k]).collect();
            if !wr.is_empty() {
                let lo = wr.iter().copied().fold(f64::INFINITY, f64::min);
                report.put(format!("m{m}_real_worst_min"), lo);
                report.put(format!("m{m}_real_c_hat"), lo / (r * r));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalConfig {
    pub n: usize,
    pub field: Field,
    pub kind: EntryKind,
    pub delta_list: Vec<f64>,
    pub trials: usize,
}

struct NormalTrial {
    min_sq: Vec<f64>,
    max_sq: Vec<f64>,
    ks: f64,
    scaled: Vec<f64>,
}

/// Kernel vectors of `(n-1) x n` matrices against the sphere limits.
///
/// For each `delta` the squared masses of the lightest and heaviest
/// `floor(delta n)` coordinates are averaged and set against
/// `limit_mass`. The coordinates `sqrt(n) |x_i|` are compared with the
/// modulus law of a standard Gaussian of the same field by the KS
/// distance (per trial and pooled). Draws whose `s_{n-1}` is below
/// `1e-12 |A|` have an ambiguous kernel and are discarded.
pub fn normal_vector_experiment(cfg: &NormalConfig, master_seed: u64) -> Result<RunReport> {
    check_trials(cfg.trials)?;
    if cfg.n < 3 {
        return param("normal vector experiment needs n >= 3");
    }
    let ms: Vec<usize> = cfg
        .delta_list
        .iter()
        .map(|&d| {
            if !(d > 0.0 && d < 1.0) {
                return param(format!("delta = {d} must lie in (0, 1)"));
            }
            let m = (d * cfg.n as f64).floor() as usize;
            if m == 0 {
                return param(format!("floor(delta n) = 0 for delta = {d}"));
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let ens = MatrixEnsemble::new(cfg.field, cfg.n - 1, cfg.n, cfg.kind);
    let field = cfg.field;
    let modulus_cdf = move |r: f64| match field {
        Field::Complex => -(-r * r).exp_m1(),
        Field::Real => erf(r / std::f64::consts::SQRT_2),
    };
    let root_n = (cfg.n as f64).sqrt();
    let trials = run_trials(master_seed, cfg.trials, |_, stream| {
        let a = sample_matrix(&ens, stream)?;
        let rs = match smallest_right_singular(&a) {
            Ok(r) => r,
            Err(e) if e.is_numerical() => return Ok(None),
            Err(e) => return Err(e),
        };
        let s = &rs.values;
        if s[cfg.n - 2] < 1e-12 * s[0] {
            return Ok(None);
        }
        let p = profile(&rs.vector)?;
        let mut min_sq = Vec::with_capacity(ms.len());
        let mut max_sq = Vec::with_capacity(ms.len());
        for &m in &ms {
            min_sq.push(min_subset_mass(&p, m)?.powi(2));
            max_sq.push(max_subset_mass(&p, m)?.powi(2));
        }
        let scaled: Vec<f64> = rs.vector.iter().map(|z| z.norm() * root_n).collect();
        let ks = ks_distance(&scaled, modulus_cdf);
        Ok(Some(NormalTrial {
            min_sq,
            max_sq,
            ks,
            scaled,
        }))
    })?;
    let done: Vec<&NormalTrial> = trials.iter().flatten().collect();
    let mut report = RunReport::new("normal-vector", cfg, master_seed);
    report.failures = (trials.len() - done.len()) as u64;
    report.put("completed", done.len());
    if done.is_empty() {
        return Err(Error::Insufficient("every draw was rank deficient".into()));
    }
    for (k, (&d, &m)) in cfg.delta_list.iter().zip(&ms).enumerate() {
        let key = crate::fmt::g17(d);
        let mn = mean(&done.iter().map(|t| t.min_sq[k]).collect::<Vec<_>>());
        let mx = mean(&done.iter().map(|t| t.max_sq[k]).collect::<Vec<_>>());
        let lim_min = limit_mass(d, MassSide::Min)?;
        let lim_max = limit_mass(d, MassSide::Max)?;
        report.put(format!("delta{key}_m"), m);
        report.put(format!("delta{key}_mean_min_mass_sq"), mn);
        report.put(format!("delta{key}_mean_max_mass_sq"), mx);
        report.put(format!("delta{key}_limit_min"), lim_min);
        report.put(format!("delta{key}_limit_max"), lim_max);
        report.put(format!("delta{key}_rel_err_min"), (mn - lim_min).abs() / lim_min);
        report.put(format!("delta{key}_rel_err_max"), (mx - lim_max).abs() / lim_max);
    }
    report.put("ks_mean", mean(&done.iter().map(|t| t.ks).collect::<Vec<_>>()));
    let pooled: Vec<f64> = done.iter().flat_map(|t| t.scaled.iter().copied()).collect();
    report.put("ks_pooled", ks_distance(&pooled, modulus_cdf));
    Ok(report)
}
