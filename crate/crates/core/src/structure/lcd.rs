//! Least common denominator search.
//!
//! `LCD(a) = inf { |theta| : dist(theta a, Z^N + i Z^N) < min(gamma |theta a|, alpha) }`
//! with `theta` real (real field) or complex.
//!
//! For a fixed lattice point `z`, write `r = |theta|` and `b = Re <theta a / r, z>`.
//! Both conditions `|theta a - z| < gamma r |a|` and `|theta a - z| < alpha` are
//! quadratic in `r`; their solution intervals only widen as `b` grows, so the
//! smallest feasible `r` for that `z` sits at `arg theta = -arg(sum a_j conj z_j)`
//! and has a closed form. The grid scan therefore only has to discover the
//! relevant lattice points: every scanned `theta` proposes `z = round(theta a)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Result};
use crate::linalg::norm2;
use crate::randgen::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct LcdQuery {
    pub a: Vec<Complex64>,
    /// `Real` searches `theta` on the real line, `Complex` over the plane.
    pub field: Field,
    pub alpha: f64,
    pub gamma: f64,
    pub r_max: f64,
    pub grid_step: f64,
    /// Bisection rounds for the fallback refinement.
    pub refine_iters: usize,
}

impl LcdQuery {
    pub fn new(a: Vec<Complex64>, field: Field) -> Self {
        Self {
            a,
            field,
            alpha: 1.0,
            gamma: 0.5,
            r_max: 10.0,
            grid_step: 1e-3,
            refine_iters: 60,
        }
    }

    pub fn real(a: &[f64]) -> Self {
        Self::new(a.iter().map(|&x| Complex64::new(x, 0.0)).collect(), Field::Real)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() || norm2(&self.a) == 0.0 {
            return param("lcd of the zero vector");
        }
        if self.field == Field::Real && self.a.iter().any(|z| z.im != 0.0) {
            return param("real lcd query with complex coefficients");
        }
        if !(self.alpha > 0.0) {
            return param(format!("alpha = {} must be positive", self.alpha));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return param(format!("gamma = {} must lie in (0, 1)", self.gamma));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return param(format!("r_max = {} must be positive", self.r_max));
        }
        if !(self.grid_step > 0.0 && self.grid_step < self.r_max) {
            return param(format!("grid_step = {} must lie in (0, r_max)", self.grid_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LcdStatus {
    Found,
    ExceedsCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcdResult {
    pub status: LcdStatus,
    /// `|witness|`, an upper bound on the LCD; infinite when the cap is exceeded.
    pub value: f64,
    pub witness: Complex64,
    pub achieved_dist: f64,
    /// Grid spacing: feasible regions narrower than this may be missed.
    pub resolution: f64,
}

impl LcdResult {
    pub fn is_found(&self) -> bool {
        self.status == LcdStatus::Found
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status,
            "value": self.value.is_finite().then_some(self.value),
            "witness_re": self.witness.re,
            "witness_im": self.witness.im,
            "achieved_dist": self.achieved_dist,
        })
    }
}

/// `dist(theta a, Z^N + i Z^N)`.
pub fn lattice_dist(theta: Complex64, a: &[Complex64]) -> f64 {
    a.iter()
        .map(|&x| {
            let y = theta * x;
            let dr = y.re - y.re.round();
            let di = y.im - y.im.round();
            dr * dr + di * di
        })
        .sum::<f64>()
        .sqrt()
}

/// Whether `theta` satisfies the LCD condition; also returns the distance.
pub fn is_feasible(theta: Complex64, q: &LcdQuery) -> (bool, f64) {
    let d = lattice_dist(theta, &q.a);
    let bound = (q.gamma * theta.norm() * norm2(&q.a)).min(q.alpha);
    (d < bound, d)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    r: f64,
    angle: Complex64,
    grid_theta: Complex64,
}

fn better(x: &Candidate, y: &Candidate) -> bool {
    (x.r, x.angle.re, x.angle.im) < (y.r, y.angle.re, y.angle.im)
}

/// Smallest `|theta|` feasible with respect to lattice point `round(theta0 a)`.
fn closed_form(theta0: Complex64, q: &LcdQuery, a2: f64) -> Option<Candidate> {
    let mut w = Complex64::new(0.0, 0.0);
    let mut z2 = 0.0;
    for &x in &q.a {
        let y = theta0 * x;
        let z = Complex64::new(y.re.round(), y.im.round());
        w += x * z.conj();
        z2 += z.norm_sqr();
    }
    let b = w.norm();
    if z2 == 0.0 || b == 0.0 {
        return None;
    }
    let g = 1.0 - q.gamma * q.gamma;
    let disc1 = b * b - g * a2 * z2;
    let c2 = z2 - q.alpha * q.alpha;
    let disc2 = b * b - a2 * c2;
    if disc1 <= 0.0 || disc2 <= 0.0 {
        return None;
    }
    let (s1, s2) = (disc1.sqrt(), disc2.sqrt());
    let l1 = z2 / (b + s1);
    let u1 = (b + s1) / (g * a2);
    let l2 = c2 / (b + s2);
    let u2 = (b + s2) / a2;
    let lo = l1.max(l2).max(0.0);
    let hi = u1.min(u2);
    (lo < hi).then(|| Candidate {
        r: lo,
        angle: w.conj() / b,
        grid_theta: theta0,
    })
}

fn witness_from(c: &Candidate, q: &LcdQuery) -> Option<(Complex64, f64)> {
    for k in 0..8 {
        let r = c.r * (1.0 + 1e-13 * 10f64.powi(k)) + 1e-300;
        let theta = c.angle * r;
        let (ok, d) = is_feasible(theta, q);
        if ok {
            return Some((theta, d));
        }
    }
    None
}

/// Bisection along the ray through a feasible grid point.
fn bisect_ray(theta: Complex64, q: &LcdQuery) -> (Complex64, f64) {
    let dir = theta / theta.norm();
    let mut hi = theta.norm();
    let mut lo = (hi - q.grid_step).max(0.0);
    for _ in 0..q.refine_iters {
        let mid = 0.5 * (lo + hi);
        if is_feasible(dir * mid, q).0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = dir * hi;
    (t, is_feasible(t, q).1)
}

fn ring_points(k: usize, q: &LcdQuery) -> impl Iterator<Item = Complex64> + '_ {
    let r = k as f64 * q.grid_step;
    let count = match q.field {
        Field::Real => 1,
        Field::Complex => ((std::f64::consts::PI * r / q.grid_step).ceil() as usize).max(1),
    };
    (0..count).map(move |j| Complex64::from_polar(r, std::f64::consts::PI * j as f64 / count as f64))
}

fn scan_ring(k: usize, q: &LcdQuery, a2: f64) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for theta in ring_points(k, q) {
        if let Some(c) = closed_form(theta, q, a2) {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
    }
    best
}

/// Grid scan over `|theta| <= r_max` followed by exact refinement.
///
/// The scan runs in bands of rings in parallel; the band minimum is
/// order-independent, so results do not depend on the thread count.
pub fn lcd(q: &LcdQuery) -> Result<LcdResult> {
    q.validate()?;
    let a2 = norm2(&q.a).powi(2);
    let h = q.grid_step;
    let rings = (q.r_max / h).ceil() as usize;
    let band = 64;
    let mut best: Option<Candidate> = None;
    let mut start = 1;
    while start <= rings {
        let end = (start + band).min(rings + 1);
        let found = (start..end)
            .into_par_iter()
            .filter_map(|k| scan_ring(k, q, a2))
            .reduce_with(|x, y| if better(&y, &x) { y } else { x });
        if let Some(c) = found {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
        if let Some(b) = &best {
            if (end - 1) as f64 * h >= b.r + h {
                break;
            }
        }
        start = end;
    }
    let exceeded = LcdResult {
        status: LcdStatus::ExceedsCap,
        value: f64::INFINITY,
        witness: Complex64::new(0.0, 0.0),
        achieved_dist: f64::NAN,
        resolution: h,
    };
    let Some(c) = best else {
        return Ok(exceeded);
    };
    let (witness, d) = witness_from(&c, q).unwrap_or_else(|| bisect_ray(c.grid_theta, q));
    if witness.norm() > q.r_max {
        return Ok(exceeded);
    }
    Ok(LcdResult {
        status: LcdStatus::Found,
        value: witness.norm(),
        witness,
        achieved_dist: d,
        resolution: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vector() {
        let mut a = vec![0.0; 5];
        a[0] = 1.0;
        let r = lcd(&LcdQuery::real(&a)).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9, "{r:?}");
        let (ok, _) = is_feasible(r.witness, &LcdQuery::real(&a));
        assert!(ok);
    }

    #[test]
    fn flat_vector() {
        let a = vec![0.25; 16];
        let r = lcd(&LcdQuery::real(&a)).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn cap_exceeded() {
        let mut q = LcdQuery::real(&[0.25; 16]);
        q.r_max = 2.0;
        let r = lcd(&q).unwrap();
        assert_eq!(r.status, LcdStatus::ExceedsCap);
        assert_eq!(r.to_json()["value"], serde_json::Value::Null);
        assert!(lcd(&LcdQuery::real(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn complex_basis_vector() {
        let a = vec![Complex64::new(0.6, 0.8), Complex64::new(0.0, 0.0)];
        let r = lcd(&LcdQuery::new(a, Field::Complex)).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9, "{r:?}");
    }
}
