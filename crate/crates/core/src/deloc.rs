//! Delocalization statistics and the bound/parameter formulas.
//!
//! For a unit vector the minimum of `|v_I|` over `|I| = m` is attained by
//! the `m` coordinates of smallest modulus, so every subset quantity here
//! reduces to a sort.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fmt::g17;
use crate::linalg::{norm2, shift, ComplexMatrix, Spectrum};

/// Sorted squared coordinate moduli of a normalized vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DelocProfile {
    pub n: usize,
    /// `|v_i|^2` ascending, ties in index order.
    pub sorted_sq: Vec<f64>,
    /// `order[k]` is the coordinate index of `sorted_sq[k]`.
    pub order: Vec<usize>,
    pub linf: f64,
}

pub fn profile(v: &[Complex64]) -> Result<DelocProfile> {
    let nv = norm2(v);
    if nv == 0.0 || v.is_empty() {
        return param("profile of the zero vector");
    }
    let sq: Vec<f64> = v.iter().map(|z| (z / nv).norm_sqr()).collect();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| sq[a].total_cmp(&sq[b]).then(a.cmp(&b)));
    let sorted_sq: Vec<f64> = order.iter().map(|&i| sq[i]).collect();
    let linf = sorted_sq.last().copied().unwrap_or(0.0).sqrt();
    Ok(DelocProfile {
        n: v.len(),
        sorted_sq,
        order,
        linf,
    })
}

fn check_m(p: &DelocProfile, m: usize) -> Result<()> {
    if m == 0 || m > p.n {
        return param(format!("subset size m = {m} outside 1..={}", p.n));
    }
    Ok(())
}

/// `min_{|I| = m} |v_I|`.
pub fn min_subset_mass(p: &DelocProfile, m: usize) -> Result<f64> {
    check_m(p, m)?;
    Ok(p.sorted_sq[..m].iter().sum::<f64>().sqrt())
}

/// `max_{|I| = m} |v_I|`.
pub fn max_subset_mass(p: &DelocProfile, m: usize) -> Result<f64> {
    check_m(p, m)?;
    Ok(p.sorted_sq[p.n - m..].iter().sum::<f64>().sqrt())
}

/// Indices of the `m` smallest coordinates, ascending.
pub fn min_subset(p: &DelocProfile, m: usize) -> Result<Vec<usize>> {
    check_m(p, m)?;
    let mut s = p.order[..m].to_vec();
    s.sort_unstable();
    Ok(s)
}

/// CSV rows `index,sorted_sq` followed by a `linf` record.
pub fn profile_csv(p: &DelocProfile) -> String {
    let mut out = String::from("index,sorted_sq\n");
    for (k, x) in p.sorted_sq.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", g17(*x));
    }
    let _ = writeln!(out, "linf,{}", g17(p.linf));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocWitness {
    /// Position of the eigenpair in the spectrum.
    pub eigen_index: usize,
    pub subset: Vec<usize>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocEvent {
    pub holds: bool,
    /// The worst eigenvector and its lightest `m`-subset, reported even
    /// when the event does not hold.
    pub witness: Option<LocWitness>,
}

/// Whether some eigenvector has an `m`-subset of mass below `delta`.
pub fn loc_event(spectrum: &Spectrum, m: usize, delta: f64) -> Result<LocEvent> {
    let mut worst: Option<LocWitness> = None;
    for (k, pair) in spectrum.pairs.iter().enumerate() {
        let p = profile(&pair.vector)?;
        let mass = min_subset_mass(&p, m)?;
        if worst.as_ref().is_none_or(|w| mass < w.mass) {
            worst = Some(LocWitness {
                eigen_index: k,
                subset: min_subset(&p, m)?,
                mass,
            });
        }
    }
    Ok(LocEvent {
        holds: worst.as_ref().is_some_and(|w| w.mass < delta),
        witness: worst,
    })
}

/// The parameters `t, m, n, M, lambda_0, delta, eps` of the
/// delocalization arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub t: f64,
    pub m: usize,
    pub n: usize,
    pub big_m: f64,
    pub lambda0: Complex64,
    pub delta: f64,
    pub eps: f64,
}

impl ParameterSet {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t <= 1.0) {
            return param(format!("t = {} must lie in (0, 1]", self.t));
        }
        if self.m < 1 || self.m > self.n {
            return param(format!("m = {} must satisfy 1 <= m <= n = {}", self.m, self.n));
        }
        if !(self.big_m >= 1.0) {
            return param(format!("M = {} must be >= 1", self.big_m));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return param(format!("delta = {} must lie in (0, 1/2)", self.delta));
        }
        if !(self.eps > 0.0) {
            return param(format!("eps = {} must be positive", self.eps));
        }
        Ok(())
    }
}

/// `|(A - lambda_0) v| <= delta M sqrt(n)` and `v` has an `m`-subset of
/// mass below `delta`.
pub fn approx_loc_event(a: &ComplexMatrix, v: &[Complex64], ps: &ParameterSet) -> Result<bool> {
    ps.validate()?;
    if a.cols() != v.len() || ps.n != v.len() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns, vector {} entries, n = {}",
            a.cols(),
            v.len(),
            ps.n
        )));
    }
    let r = norm2(&shift(a, ps.lambda0).mul_vec(v));
    let close = r <= ps.delta * ps.big_m * (ps.n as f64).sqrt();
    Ok(close && min_subset_mass(&profile(v)?, ps.m)? < ps.delta)
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => param(format!("unknown {} {s:?}", stringify!($name))),
                }
            }
        }
    };
}

named_enum!(
    /// Which eigenvector or normal-vector lower bound to evaluate.
    BoundVariant {
        CplxLargeM => "cplx-large-m",
        CplxSmallM => "cplx-small-m",
        MinCoord => "mincoord",
        RealLargeM => "real-large-m",
        RealSmallM => "real-small-m",
        NormalLargeM => "normal-large-m",
        NormalSmallM => "normal-small-m",
    }
);

named_enum!(
    ShiftVariant {
        Square => "square-shift",
        Rect => "rect-shift",
    }
);

named_enum!(
    ScheduleVariant {
        Cplx => "cplx",
        Real => "real",
        CplxSmall => "cplx-small",
        Normal => "normal",
        NormalSmall => "normal-small",
    }
);

named_enum!(
    NetKind {
        ComplexDisc => "complex-disc",
        RealInterval => "real-interval",
        Sphere => "sphere",
    }
);

/// The unspecified absolute constants of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c: f64,
    /// Upper range constant: large-`m` bounds need `m <= c' n`.
    pub c_prime: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self { c: 1.0, c_prime: 1.0 }
    }
}

fn check_tmn(t: f64, m: usize, n: usize) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return param(format!("t = {t} must lie in (0, 1]"));
    }
    if m < 1 || m > n {
        return param(format!("m = {m} must satisfy 1 <= m <= n = {n}"));
    }
    Ok(())
}

fn log_n(n: usize) -> Result<f64> {
    if n < 2 {
        return param(format!("n = {n}: log n must be positive (n >= 2)"));
    }
    Ok((n as f64).ln())
}

/// Right-hand side of the named lower bound on `|v_I| / |v|`.
pub fn deloc_lower_bound(
    variant: BoundVariant,
    t: f64,
    m: usize,
    n: usize,
    k: BoundConstants,
) -> Result<f64> {
    use BoundVariant::*;
    check_tmn(t, m, n)?;
    let r = m as f64 / n as f64;
    let mf = m as f64;
    let large_range = |m: usize| -> Result<()> {
        let l2 = (n as f64).ln().powi(2);
        if (m as f64) < l2 {
            return param(format!("m = {m} below log^2 n = {l2:.4}"));
        }
        if m as f64 > k.c_prime * n as f64 {
            return param(format!("m = {m} above c' n = {}", k.c_prime * n as f64));
        }
        Ok(())
    };
    let small_range = |m: usize| -> Result<()> {
        let l2 = (n as f64).ln().powi(2);
        if m > 1 && m as f64 > l2 {
            return param(format!("m = {m} above log^2 n = {l2:.4}"));
        }
        Ok(())
    };
    match variant {
        CplxLargeM | NormalLargeM => {
            large_range(m)?;
            Ok(k.c * t.sqrt() * r.powf(1.5))
        }
        RealLargeM => {
            large_range(m)?;
            Ok(k.c * t * r * r)
        }
        CplxSmallM => {
            let l = log_n(n)?;
            small_range(m)?;
            Ok(k.c * t.sqrt() / (l * l) * r.powf(1.5 + 1.0 / mf))
        }
        RealSmallM => {
            small_range(m)?;
            Ok(k.c * t * r.powf(2.0 + 1.0 / mf))
        }
        NormalSmallM => {
            let l = log_n(n)?;
            small_range(m)?;
            Ok(k.c * t.sqrt() / l * r.powf(1.5))
        }
        MinCoord => {
            let l = log_n(n)?;
            if m != 1 {
                return param("mincoord bounds single coordinates: m must be 1");
            }
            Ok(k.c * t.sqrt() / ((n as f64).powf(2.5) * l * l))
        }
    }
}

/// Solves `6 delta M sqrt(n) = eps (sqrt(n') - sqrt(n - m - 1))` for
/// `delta`, with `n' = n` (square shift) or `n' = n - 1` (rectangular).
pub fn delta_from_eps(eps: f64, big_m: f64, n: usize, m: usize, variant: ShiftVariant) -> Result<f64> {
    if !(eps > 0.0) {
        return param(format!("eps = {eps} must be positive"));
    }
    if !(big_m >= 1.0) {
        return param(format!("M = {big_m} must be >= 1"));
    }
    let top = match variant {
        ShiftVariant::Square => {
            if m < 1 || m + 1 > n {
                return param(format!("square shift needs 1 <= m <= n - 1, got m = {m}, n = {n}"));
            }
            n as f64
        }
        ShiftVariant::Rect => {
            if m < 1 || m + 2 > n {
                return param(format!("rectangular shift needs 1 <= m <= n - 2, got m = {m}, n = {n}"));
            }
            (n - 1) as f64
        }
    };
    let low = (n - m - 1) as f64;
    // sqrt(a) - sqrt(b) = (a - b) / (sqrt(a) + sqrt(b))
    let gap = (top - low) / (top.sqrt() + low.sqrt());
    Ok(eps * gap / (6.0 * big_m * (n as f64).sqrt()))
}

/// `eps` from its defining identity in terms of `t`.
pub fn epsilon_schedule(variant: ScheduleVariant, t: f64, m: usize, n: usize) -> Result<f64> {
    use ScheduleVariant::*;
    check_tmn(t, m, n)?;
    let r = m as f64 / n as f64;
    let mf = m as f64;
    Ok(match variant {
        Cplx => t.powf(mf / (2.0 * mf - 1.0)) * r.powf((mf + 2.0) / (2.0 * mf - 1.0)),
        Real => t * r.powf((mf + 1.0) / mf),
        CplxSmall => {
            let l = log_n(n)?;
            t.sqrt() / l.powf(1.0 + 1.0 / mf) * r.powf((mf + 2.0) / (2.0 * mf))
        }
        Normal => (t * r).powf(mf / (2.0 * mf - 1.0)),
        NormalSmall => t.sqrt() / log_n(n)? * r.sqrt(),
    })
}

/// Left side of each schedule's defining identity, which equals `t` at
/// the scheduled `eps`.
pub fn schedule_identity(variant: ScheduleVariant, eps: f64, m: usize, n: usize) -> f64 {
    use ScheduleVariant::*;
    let q = n as f64 / m as f64;
    let mf = m as f64;
    let l = (n as f64).ln();
    match variant {
        Cplx => q.powf(1.0 + 2.0 / mf) * eps.powf(2.0 - 1.0 / mf),
        Real => eps * q.powf((mf + 1.0) / mf),
        CplxSmall => q.powf(1.0 + 2.0 / mf) * l.powf(2.0 + 2.0 / mf) * eps * eps,
        Normal => q * eps.powf((2.0 * mf - 1.0) / mf),
        NormalSmall => eps * eps * q * l * l,
    }
}

/// Upper bounds on net cardinalities: `9/delta^2` for the unit disc,
/// `3/delta` for `[-1, 1]`, `4n(1 + 2/eps)^(2n-1)` for the complex sphere.
pub fn net_cardinality_bound(kind: NetKind, param_value: f64, n: usize) -> Result<f64> {
    match kind {
        NetKind::ComplexDisc | NetKind::RealInterval => {
            if !(param_value > 0.0 && param_value <= 1.0) {
                return param(format!("delta = {param_value} must lie in (0, 1]"));
            }
            Ok(if kind == NetKind::ComplexDisc {
                9.0 / (param_value * param_value)
            } else {
                3.0 / param_value
            })
        }
        NetKind::Sphere => {
            if !(param_value > 0.0) || n < 1 {
                return param("sphere net needs eps > 0 and n >= 1");
            }
            Ok(4.0 * n as f64 * (1.0 + 2.0 / param_value).powi(2 * n as i32 - 1))
        }
    }
}
