//! Half-height `h_r` of the two-sheet members and the slab predicate.
//!
//! With `v = cosh ρ / cosh a`,
//! `h_r = ∫_1^∞ (v^{2q} − 1)^{−1/2} ((v² − 1) + tanh²a)^{−1/2} dv`,
//! which decreases from `+∞` (as `a → 0`) to `πr/(2(n − r))` (as
//! `a → ∞`). The full vertical extent of the member is `2h_r`.

use serde::{Deserialize, Serialize};

use crate::profile::{check_nr, d_from_waist, q_of, waist, SheetKernel};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightResult {
    pub n: usize,
    pub r: usize,
    pub d: f64,
    pub a: f64,
    pub h: f64,
    pub error_estimate: f64,
}

impl HeightResult {
    /// Vertical extent `2h` of the whole member.
    pub fn total_height(&self) -> f64 {
        2.0 * self.h
    }
}

fn check_proper(n: usize, r: usize) -> Result<()> {
    check_nr(n, r)?;
    if r == n {
        return Err(Error::domain("the height function needs r < n"));
    }
    Ok(())
}

/// `h_r(d)` for `d > 1`.
pub fn height(n: usize, r: usize, d: f64, cfg: &QuadratureConfig) -> Result<HeightResult> {
    check_proper(n, r)?;
    if !(d > 1.0) {
        return Err(Error::domain(format!(
            "height is only finite for d > 1 (got d = {d}); the d <= 1 members are unbounded graphs"
        )));
    }
    let a = waist(n, r, d)?;
    height_at(n, r, d, a, cfg)
}

/// `h_r` parametrised by the waist distance `a > 0`.
pub fn height_from_a(n: usize, r: usize, a: f64, cfg: &QuadratureConfig) -> Result<HeightResult> {
    check_proper(n, r)?;
    let d = d_from_waist(n, r, a)?;
    height_at(n, r, d, a, cfg)
}

fn height_at(n: usize, r: usize, d: f64, a: f64, cfg: &QuadratureConfig) -> Result<HeightResult> {
    let kernel = SheetKernel {
        q: q_of(n, r),
        tanh_sq: a.tanh().powi(2),
        power: 0.5,
    };
    let res = kernel.integrate(f64::INFINITY, cfg)?;
    let h = res.require_converged("height integral")?;
    Ok(HeightResult {
        n,
        r,
        d,
        a,
        h,
        error_estimate: res.error_estimate,
    })
}

/// `dh_r/da = −tanh a · sech²a · ∫_1^∞ (v^{2q} − 1)^{−1/2} ((v² − 1) + tanh²a)^{−3/2} dv`.
pub fn height_derivative(n: usize, r: usize, a: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_proper(n, r)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("waist a = {a} must be positive")));
    }
    let t = a.tanh();
    let kernel = SheetKernel {
        q: q_of(n, r),
        tanh_sq: t * t,
        power: 1.5,
    };
    let integral = kernel
        .integrate(f64::INFINITY, cfg)?
        .require_converged("height derivative")?;
    let sech = 1.0 / a.cosh();
    Ok(-t * sech * sech * integral)
}

/// `lim_{a→∞} h_r = πr/(2(n − r))`.
pub fn height_limit(n: usize, r: usize) -> Result<f64> {
    check_proper(n, r)?;
    Ok(std::f64::consts::PI * r as f64 / (2.0 * (n - r) as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub n: usize,
    pub r: usize,
    pub a: Vec<f64>,
    pub h: Vec<f64>,
    /// `h` increases strictly along the sequence.
    pub strictly_increasing: bool,
    pub threshold: Option<f64>,
    /// First `a` in the sequence whose height exceeds the threshold.
    pub threshold_exceeded_at: Option<f64>,
}

impl DivergenceReport {
    pub fn passed(&self) -> bool {
        self.strictly_increasing && (self.threshold.is_none() || self.threshold_exceeded_at.is_some())
    }
}

/// Heights along a strictly decreasing sequence of waists, with the
/// monotonicity and threshold verdicts.
pub fn divergence_check(
    n: usize,
    r: usize,
    a_sequence: &[f64],
    threshold: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<DivergenceReport> {
    check_proper(n, r)?;
    if a_sequence.len() < 2 {
        return Err(Error::invalid("divergence check needs at least two waists"));
    }
    if !a_sequence.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::invalid("waist sequence must be strictly decreasing"));
    }
    let mut h = Vec::with_capacity(a_sequence.len());
    for &a in a_sequence {
        h.push(height_from_a(n, r, a, cfg)?.h);
    }
    let strictly_increasing = h.windows(2).all(|w| w[1] > w[0]);
    let threshold_exceeded_at =
        threshold.and_then(|t| a_sequence.iter().zip(&h).find(|(_, hv)| **hv > t).map(|(a, _)| *a));
    Ok(DivergenceReport {
        n,
        r,
        a: a_sequence.to_vec(),
        h,
        strictly_increasing,
        threshold,
        threshold_exceeded_at,
    })
}

/// Whether a horizontal slab of the given height is thin enough for the
/// nonexistence theorem: `slab_height ≤ πr/(n − r)`.
pub fn slab_obstruction(n: usize, r: usize, slab_height: f64) -> Result<bool> {
    let limit = height_limit(n, r)?;
    if !(slab_height > 0.0) {
        return Err(Error::domain("slab height must be positive"));
    }
    Ok(slab_height <= 2.0 * limit)
}
