//! Arithmetic structure: LCD, compressibility, spread sets, level sets
//! and Lévy concentration.

mod geometry;
mod lcd;
mod levy;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub use geometry::{
    classify, compress_distance, spread_set, totally_spread_check, CompressParams, Compressibility,
    SpreadSet,
};
pub use lcd::{is_feasible, lattice_dist, lcd, LcdQuery, LcdResult, LcdStatus};
pub use levy::{levy_concentration, levy_from_samples, LevyEstimate};

use crate::error::{param, Result};
use crate::linalg::{norm2, subspace_orthonormal_basis};
use crate::randgen::{Field, SeedStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    /// The search resolution or cap cannot separate the LCD from `D` or `2D`.
    Indeterminate,
}

/// Whether `D <= LCD(x) < 2D`, using `template` for every search
/// parameter except the vector.
///
/// The computed value `v` brackets the true LCD in `[v - resolution, v]`.
pub fn level_set_membership(x: &[Complex64], d: f64, template: &LcdQuery) -> Result<(Membership, LcdResult)> {
    if !(d > 0.0) {
        return param(format!("D = {d} must be positive"));
    }
    let q = LcdQuery {
        a: x.to_vec(),
        ..template.clone()
    };
    let r = lcd(&q)?;
    let m = if r.is_found() {
        let lo = r.value - r.resolution;
        if r.value < d || lo >= 2.0 * d {
            Membership::NonMember
        } else if lo >= d && r.value < 2.0 * d {
            Membership::Member
        } else {
            Membership::Indeterminate
        }
    } else if q.r_max - r.resolution >= 2.0 * d {
        Membership::NonMember
    } else {
        Membership::Indeterminate
    };
    Ok((m, r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceLcdEstimate {
    /// Minimum LCD over the sampled unit vectors of `E`; an upper bound
    /// on the LCD of the subspace. Infinite if no sample had a finite LCD.
    pub upper_bound: f64,
    pub samples: usize,
    pub exceeds_cap: usize,
}

/// Samples `samples` uniform unit vectors of `E = span(basis)` and takes
/// the smallest LCD. Sample `k` uses child stream `k`, so a larger sample
/// count extends a smaller one.
pub fn lcd_subspace_estimate(
    basis: &[Vec<Complex64>],
    template: &LcdQuery,
    samples: usize,
    stream: &SeedStream,
) -> Result<SubspaceLcdEstimate> {
    if basis.is_empty() {
        return param("subspace basis must be nonempty");
    }
    let q = subspace_orthonormal_basis(basis);
    if q.is_empty() {
        return param("subspace basis is numerically zero");
    }
    let n = basis[0].len();
    let mut best = f64::INFINITY;
    let mut capped = 0;
    for k in 0..samples {
        let mut rng = stream.child(k as u64).rng();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for qk in &q {
            let g = match template.field {
                Field::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
                Field::Complex => Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            };
            for (xi, qi) in x.iter_mut().zip(qk) {
                *xi += g * qi;
            }
        }
        let nx = norm2(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let r = lcd(&LcdQuery {
            a: x,
            ..template.clone()
        })?;
        if r.is_found() {
            best = best.min(r.value);
        } else {
            capped += 1;
        }
    }
    Ok(SubspaceLcdEstimate {
        upper_bound: best,
        samples,
        exceeds_cap: capped,
    })
}
