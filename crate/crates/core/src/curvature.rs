//! Principal curvatures, higher-order mean curvatures, `|A|` and the
//! vertical normal component of invariant hypersurfaces.
//!
//! The profile direction carries `κ1`; the `n − 1` directions tangent to
//! the equidistant hypersurfaces all carry `κ2`. Normals are oriented with
//! nonnegative vertical component on the positive branch.

use serde::{Deserialize, Serialize};

use crate::profile::{check_nr, classify_regime, first_integral, lambda_dot, ln_cosh, q_of, ProfileCurve, Regime};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub rho: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// `H_1 … H_n`.
    pub h: Vec<f64>,
    pub shape_norm: f64,
    pub n_vertical: f64,
}

/// `κ1 = λ̈ (1 + λ̇²)^{−3/2}`, `κ2 = λ̇ (1 + λ̇²)^{−1/2} tanh ρ`.
pub fn principal_curvatures(rho: f64, lambda_dot: f64, lambda_ddot: f64) -> (f64, f64) {
    if lambda_dot.is_infinite() {
        return (0.0, lambda_dot.signum() * rho.tanh());
    }
    let w = 1.0f64.hypot(lambda_dot);
    (lambda_ddot / (w * w * w), lambda_dot / w * rho.tanh())
}

/// `H_j = ((n − j) κ2 + j κ1) κ2^{j−1} / n`.
pub fn mean_curvature_j(n: usize, j: usize, kappa1: f64, kappa2: f64) -> Result<f64> {
    if j < 1 || j > n {
        return Err(Error::domain(format!("index j = {j} must satisfy 1 <= j <= n = {n}")));
    }
    let nf = n as f64;
    let jf = j as f64;
    Ok(((nf - jf) * kappa2 + jf * kappa1) * kappa2.powi(j as i32 - 1) / nf)
}

/// `H_j` along the member `(n, r, d)` from the closed form
/// `((r − j)/(r d²)) κ2^{j−1} tanh ρ cosh^{2q}ρ λ̇³ (1 + λ̇²)^{−3/2}`.
pub fn hj_on_family(n: usize, r: usize, d: f64, j: usize, rho: f64) -> Result<f64> {
    check_nr(n, r)?;
    if r == n {
        return Err(Error::domain("closed-form H_j is stated for r < n"));
    }
    if j < 1 || j > n {
        return Err(Error::domain(format!("index j = {j} must satisfy 1 <= j <= n = {n}")));
    }
    let ld = lambda_dot(n, r, d, rho)?;
    if j == r {
        return Ok(0.0);
    }
    let q = q_of(n, r);
    let (_, kappa2) = family_curvatures(n, r, d, rho)?;
    // cosh^{2q}ρ/d² · λ̇³ (1+λ̇²)^{−3/2}, in logarithms
    let log_mag = 2.0 * q * ln_cosh(rho) - 2.0 * d.ln() + 3.0 * ld.ln() - 1.5 * (ld * ld).ln_1p();
    let factor = (r as f64 - j as f64) / r as f64;
    Ok(factor * kappa2.powi(j as i32 - 1) * rho.tanh() * log_mag.exp())
}

/// `|A| = √(κ1² + (n − 1) κ2²)`.
pub fn shape_norm(n: usize, kappa1: f64, kappa2: f64) -> f64 {
    kappa1.hypot(((n - 1) as f64).sqrt() * kappa2)
}

/// `N_{n+1} = (1 + λ̇²)^{−1/2}`.
pub fn normal_vertical_component(lambda_dot: f64) -> f64 {
    if lambda_dot.is_infinite() {
        0.0
    } else {
        1.0 / 1.0f64.hypot(lambda_dot)
    }
}

pub fn curvature_sample(n: usize, rho: f64, lambda_dot: f64, lambda_ddot: f64) -> Result<CurvatureSample> {
    if n < 2 {
        return Err(Error::domain("dimension n must be at least 2"));
    }
    let (k1, k2) = principal_curvatures(rho, lambda_dot, lambda_ddot);
    let h = (1..=n)
        .map(|j| mean_curvature_j(n, j, k1, k2))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureSample {
        rho,
        kappa1: k1,
        kappa2: k2,
        h,
        shape_norm: shape_norm(n, k1, k2),
        n_vertical: normal_vertical_component(lambda_dot),
    })
}

/// Curvature data at every sample of `curve`.
pub fn curvature_along(curve: &ProfileCurve) -> Result<Vec<CurvatureSample>> {
    curve
        .samples
        .iter()
        .map(|s| curvature_sample(curve.n, s.rho, s.lambda_dot, s.lambda_ddot))
        .collect()
}

/// Closed-form `(κ1, κ2)` on the positive branch of `(n, r, d)`.
///
/// For `r < n`: `κ2 = d tanh ρ cosh^{−q}ρ`, `κ1 = −q κ2`; these stay finite
/// at the waist of a two-sheet member. For `r = n`: `κ1 = 0`,
/// `κ2 = d tanh ρ/√(1 + d²)`.
pub fn family_curvatures(n: usize, r: usize, d: f64, rho: f64) -> Result<(f64, f64)> {
    classify_regime(n, r, d)?;
    if r == n {
        return Ok((0.0, d * rho.tanh() / 1.0f64.hypot(d)));
    }
    let q = q_of(n, r);
    let k2 = (d.ln() - q * ln_cosh(rho)).exp() * rho.tanh();
    Ok((-q * k2, k2))
}

/// `√(q² + n − 1)`: `|A| = c |κ2|` along a member with `r < n`.
fn norm_constant(n: usize, r: usize) -> f64 {
    let q = if r < n { q_of(n, r) } else { 0.0 };
    (q * q + (n - 1) as f64).sqrt()
}

/// Closed-form `|A|` along `(n, r, d)` at signed distance `rho`.
pub fn family_shape_norm(n: usize, r: usize, d: f64, rho: f64) -> Result<f64> {
    let (_, k2) = family_curvatures(n, r, d, rho)?;
    Ok(if r == n {
        ((n - 1) as f64).sqrt() * k2.abs()
    } else {
        norm_constant(n, r) * k2.abs()
    })
}

/// Closed-form `|∇|A||` along `(n, r, d)`: `|∂_ρ|A|| · |∇ρ|` with
/// `|∇ρ| = (1 + λ̇²)^{−1/2}`, which is zero at the waist.
pub fn family_shape_norm_gradient(n: usize, r: usize, d: f64, rho: f64) -> Result<f64> {
    classify_regime(n, r, d)?;
    if r == n {
        let w = 1.0f64.hypot(d);
        let sech = 1.0 / rho.cosh();
        return Ok(((n - 1) as f64).sqrt() * d * sech * sech / (w * w));
    }
    let q = q_of(n, r);
    let t = rho.tanh();
    let sech2 = 1.0 - t * t;
    let cq = (d.ln() - q * ln_cosh(rho)).exp();
    let dk2 = cq * (sech2 - q * t * t);
    // 1 − d² cosh^{−2q}ρ, zero at the waist
    let grad_rho_sq = if d > 1.0 {
        let ld = lambda_dot(n, r, d, rho);
        match ld {
            Ok(v) => 1.0 / (1.0 + v * v),
            Err(_) => 0.0,
        }
    } else {
        -(2.0 * (d.ln() - q * ln_cosh(rho))).exp_m1()
    };
    Ok(norm_constant(n, r) * dk2.abs() * grad_rho_sq.max(0.0).sqrt())
}

/// Maximum of `|d/dρ FI|` over interior samples, with
/// `FI = cosh^{n−r}ρ (λ̇²/(1+λ̇²))^{r/2}`, relative to `max(1, d^r)`. Zero
/// up to discretisation error exactly when `H_r = 0` along the curve.
pub fn hr_ode_residual(curve: &ProfileCurve) -> Result<f64> {
    if curve.samples.len() < 3 {
        return Err(Error::invalid("residual needs at least 3 samples"));
    }
    let values: Vec<f64> = curve
        .samples
        .iter()
        .map(|s| first_integral(curve.n, curve.r, s.rho, s.lambda_dot))
        .collect();
    let scale = if curve.regime == Regime::Slice {
        1.0
    } else {
        curve.d.powi(curve.r as i32).max(1.0)
    };
    let mut worst: f64 = 0.0;
    for i in 1..values.len() - 1 {
        let drho = curve.samples[i + 1].rho - curve.samples[i - 1].rho;
        if drho <= 0.0 {
            return Err(Error::invalid("profile samples must have strictly increasing rho"));
        }
        let deriv = (values[i + 1] - values[i - 1]) / drho;
        worst = worst.max(deriv.abs());
    }
    Ok(worst / scale)
}
