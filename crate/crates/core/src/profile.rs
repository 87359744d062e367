//! Generating curves of the translation-invariant family with `H_r = 0`.
//!
//! A member of the family is `{(x, λ(ρ(x)))}` where `ρ` is the signed
//! distance to a base hyperplane through the origin. For `r < n` the profile
//! obeys the first integral `cosh^{n−r}ρ · (λ̇²/(1+λ̇²))^{r/2} = d^r`, so
//! `λ̇² = d²/(cosh^{2q}ρ − d²)` with `q = (n−r)/r`. For `r = n` the profile
//! is affine, `λ = dρ + c`.

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, integrate_doubling, integrate_to_infinity, IntegralResult, QuadratureConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `r = n`, `d = 0`: a horizontal slice.
    Slice,
    /// `r = n`, `d > 0`: the graph of `dρ + c`.
    TiltedGraph,
    /// `r < n`, `d > 1`: two vertical graphs over `ρ > a` glued along the
    /// equidistant hypersurface `ρ = a`.
    TwoSheets,
    /// `r < n`, `d = 1`: a graph over the halfspace `ρ > 0`.
    HalfGraph,
    /// `r < n`, `0 < d < 1`: an entire bounded graph.
    EntireGraph,
}

pub(crate) fn check_nr(n: usize, r: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("dimension n = {n} must be at least 2")));
    }
    if r < 1 || r > n {
        return Err(Error::domain(format!("order r = {r} must satisfy 1 <= r <= n = {n}")));
    }
    Ok(())
}

fn check_proper(n: usize, r: usize) -> Result<f64> {
    check_nr(n, r)?;
    if r == n {
        return Err(Error::domain("this operation needs r < n"));
    }
    Ok(q_of(n, r))
}

/// `q = (n − r)/r`.
pub fn q_of(n: usize, r: usize) -> f64 {
    (n - r) as f64 / r as f64
}

pub fn classify_regime(n: usize, r: usize, d: f64) -> Result<Regime> {
    check_nr(n, r)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::domain(format!(
            "parameter d = {d} must be finite and nonnegative"
        )));
    }
    if r == n {
        return Ok(if d == 0.0 { Regime::Slice } else { Regime::TiltedGraph });
    }
    if d == 0.0 {
        return Err(Error::domain("d = 0 is only allowed when r = n"));
    }
    Ok(if d > 1.0 {
        Regime::TwoSheets
    } else if d == 1.0 {
        Regime::HalfGraph
    } else {
        Regime::EntireGraph
    })
}

/// `ln cosh x` without overflow and with full relative accuracy near 0.
pub fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        let s = (0.5 * x).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// Waist distance `a = arccosh(d^{r/(n−r)})` of the two-sheet member.
pub fn waist(n: usize, r: usize, d: f64) -> Result<f64> {
    let q = check_proper(n, r)?;
    if !(d > 1.0 && d.is_finite()) {
        return Err(Error::domain(format!("waist needs d > 1, got {d}")));
    }
    let delta = (d.ln() / q).exp_m1();
    Ok((delta + (delta * (2.0 + delta)).sqrt()).ln_1p())
}

/// `d = cosh^q(a)`, the inverse of [`waist`].
pub fn d_from_waist(n: usize, r: usize, a: f64) -> Result<f64> {
    let q = check_proper(n, r)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("waist a = {a} must be positive")));
    }
    Ok((q * ln_cosh(a)).exp())
}

/// `cosh ρ / cosh a − 1`, accurate for `ρ` close to `a`.
fn ratio_minus_one(rho: f64, a: f64) -> f64 {
    if rho > 700.0 {
        return f64::INFINITY;
    }
    2.0 * (0.5 * (rho + a)).sinh() * (0.5 * (rho - a)).sinh() / a.cosh()
}

/// `ln(cosh^{2q}ρ / d²)`, the exponent with `λ̇ = (e^L − 1)^{−1/2}`.
fn log_excess(n: usize, r: usize, d: f64, rho: f64) -> Result<f64> {
    let q = check_proper(n, r)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("parameter d = {d} must be positive for r < n")));
    }
    if !rho.is_finite() {
        return Err(Error::domain("rho must be finite"));
    }
    let big_l = if d > 1.0 {
        let a = waist(n, r, d)?;
        if rho.abs() <= a {
            return Err(Error::domain(format!(
                "rho = {rho} is not beyond the waist a = {a} of the two-sheet member"
            )));
        }
        let s = ratio_minus_one(rho.abs(), a);
        if s.is_finite() {
            2.0 * q * s.ln_1p()
        } else {
            2.0 * q * (ln_cosh(rho) - ln_cosh(a))
        }
    } else {
        2.0 * q * ln_cosh(rho) - 2.0 * d.ln()
    };
    if !(big_l > 0.0) {
        return Err(Error::domain(format!("profile slope is infinite at rho = {rho}")));
    }
    Ok(big_l)
}

fn slope_from_log_excess(big_l: f64) -> f64 {
    if big_l > 700.0 {
        (-0.5 * big_l).exp()
    } else {
        1.0 / big_l.exp_m1().sqrt()
    }
}

/// Positive root `λ̇ = d/√(cosh^{2q}ρ − d²)`.
pub fn lambda_dot(n: usize, r: usize, d: f64, rho: f64) -> Result<f64> {
    Ok(slope_from_log_excess(log_excess(n, r, d, rho)?))
}

/// `λ̈ = −q tanh ρ · λ̇ (1 + λ̇²)` on the positive branch.
pub fn lambda_ddot(n: usize, r: usize, d: f64, rho: f64) -> Result<f64> {
    let q = check_proper(n, r)?;
    let ld = lambda_dot(n, r, d, rho)?;
    Ok(-q * rho.tanh() * ld * (1.0 + ld * ld))
}

/// `cosh^{n−r}ρ · (λ̇²/(1+λ̇²))^{r/2}`, computed in logarithms. `λ̇` may be
/// `±∞`.
pub fn first_integral(n: usize, r: usize, rho: f64, lambda_dot: f64) -> f64 {
    let s = lambda_dot.abs();
    if s == 0.0 {
        return 0.0;
    }
    let log_ratio = if s.is_infinite() {
        0.0
    } else if s > 1.0 {
        -0.5 * (1.0 / (s * s)).ln_1p()
    } else {
        s.ln() - 0.5 * (s * s).ln_1p()
    };
    ((n - r) as f64 * ln_cosh(rho) + r as f64 * log_ratio).exp()
}

/// Integrals `∫_1^V (v^{2q} − 1)^{−1/2} ((v² − 1) + τ²)^{−p} dv` with
/// `τ = tanh a` and `p ∈ {1/2, 3/2}`; `upper_minus_one = V − 1`, infinite
/// for the full height integral.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SheetKernel {
    pub q: f64,
    pub tanh_sq: f64,
    pub power: f64,
}

/// `u ≤ √3` is integrated in `u` (`v = 1 + u²`), beyond in `v`.
const SPLIT_V: f64 = 4.0;

impl SheetKernel {
    fn in_u(&self, u: f64) -> f64 {
        let s = u * u;
        // (v^{2q} − 1)/(v − 1), finite as v → 1
        let ratio = if s == 0.0 {
            2.0 * self.q
        } else {
            (2.0 * self.q * s.ln_1p()).exp_m1() / s
        };
        let w = s * (2.0 + s) + self.tanh_sq;
        2.0 / (ratio.sqrt() * w.powf(self.power))
    }

    fn in_v(&self, v: f64) -> f64 {
        let num = (2.0 * self.q * v.ln()).exp_m1();
        let w = (v * v - 1.0) + self.tanh_sq;
        1.0 / (num.sqrt() * w.powf(self.power))
    }

    pub(crate) fn integrate(&self, upper_minus_one: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        if !(upper_minus_one >= 0.0) {
            return Err(Error::domain("upper limit below the singular point"));
        }
        let head_top = upper_minus_one.min(SPLIT_V - 1.0);
        let head = integrate(|u| self.in_u(u), 0.0, head_top.sqrt(), cfg)?;
        if upper_minus_one <= SPLIT_V - 1.0 {
            return Ok(head);
        }
        let upper = 1.0 + upper_minus_one;
        let tail = if upper.is_infinite() || upper > 1e250 {
            let hint = self.q + 2.0 * self.power;
            integrate_to_infinity(|v| self.in_v(v), SPLIT_V, hint, &cfg.with_tail_start(SPLIT_V))?
        } else {
            integrate_doubling(|v| self.in_v(v), SPLIT_V, upper, SPLIT_V, cfg)?
        };
        Ok(IntegralResult {
            value: head.value + tail.value,
            error_estimate: head.error_estimate + tail.error_estimate,
            subdivisions_used: head.subdivisions_used + tail.subdivisions_used,
            converged: head.converged && tail.converged,
        })
    }
}

fn sheet_lambda(n: usize, r: usize, d: f64, rho: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let q = check_proper(n, r)?;
    let a = waist(n, r, d)?;
    if !(rho >= a) {
        return Err(Error::domain(format!("rho = {rho} lies below the waist a = {a}")));
    }
    let kernel = SheetKernel {
        q,
        tanh_sq: a.tanh().powi(2),
        power: 0.5,
    };
    kernel.integrate(ratio_minus_one(rho, a), cfg)
}

/// Upper sheet of the two-sheet member, `λ(a) = 0`, increasing to `h_r(d)`.
pub fn profile_two_sheets(n: usize, r: usize, d: f64, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    sheet_lambda(n, r, d, rho, cfg)?.require_converged("two-sheet profile")
}

/// `∫_b^ρ (cosh^{2q}ξ − 1)^{−1/2} dξ`, integrated in `ln ξ`.
pub fn profile_half_graph(n: usize, r: usize, b: f64, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let q = check_proper(n, r)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::domain(format!("half graph is defined for rho > 0, got {rho}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("base point b = {b} must be positive")));
    }
    let f = |w: f64| {
        let xi = w.exp();
        xi * slope_from_log_excess(2.0 * q * ln_cosh(xi))
    };
    let (lo, hi, sign) = if rho >= b {
        (b.ln(), rho.ln(), 1.0)
    } else {
        (rho.ln(), b.ln(), -1.0)
    };
    let res = integrate(f, lo, hi, cfg)?;
    Ok(sign * res.require_converged("half-graph profile")?)
}

/// `d ∫_0^{|ρ|} (cosh^{2q}ξ − d²)^{−1/2} dξ`, extended oddly to `ρ < 0`.
pub fn profile_entire(n: usize, r: usize, d: f64, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let q = check_proper(n, r)?;
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::domain(format!("entire graph needs 0 < d < 1, got {d}")));
    }
    if !rho.is_finite() {
        return Err(Error::domain("rho must be finite"));
    }
    let ln_d = d.ln();
    let f = |xi: f64| slope_from_log_excess(2.0 * q * ln_cosh(xi) - 2.0 * ln_d);
    let res = integrate_doubling(f, 0.0, rho.abs(), 1.0, cfg)?;
    Ok(rho.signum() * res.require_converged("entire-graph profile")?)
}

/// `λ = dρ + c`.
pub fn profile_r_equals_n(d: f64, c: f64, rho: f64) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("slope d = {d} must be finite and nonnegative")));
    }
    Ok(d * rho + c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub rho: f64,
    pub lambda: f64,
    pub lambda_dot: f64,
    pub lambda_ddot: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileOptions {
    /// Vertical offset added to every `λ`.
    pub c: f64,
    /// `+1` for the positive branch, `−1` for its reflection `t ↦ −t`.
    pub branch_sign: f64,
    /// Base point `b` of the half graph.
    pub base_point: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            c: 0.0,
            branch_sign: 1.0,
            base_point: 1.0,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub n: usize,
    pub r: usize,
    pub d: f64,
    pub regime: Regime,
    /// `(n − r)/r`; zero when `r = n`.
    pub q: f64,
    /// Waist distance, two-sheet members only.
    pub a: Option<f64>,
    /// Base point, half graphs only.
    pub base_point: Option<f64>,
    pub samples: Vec<ProfileSample>,
    pub c: f64,
    pub branch_sign: f64,
}

impl ProfileCurve {
    /// Unsigned slope `|λ̇|` at sample `i`, with the branch sign removed.
    pub fn positive_slope(&self, i: usize) -> f64 {
        self.samples[i].lambda_dot * self.branch_sign
    }
}

pub const DEFAULT_SAMPLES: usize = 512;

/// Outer extent of default grids beyond the singular endpoint.
pub const DEFAULT_EXTENT: f64 = 8.0;

/// Offset of the first two-sheet sample from the waist.
pub fn waist_offset(a: f64) -> f64 {
    1e-6 * (1.0 + a)
}

/// Half geometric from `start + eps` to `start + 1`, half uniform to
/// `start + extent`.
fn singular_grid(start: f64, eps: f64, extent: f64, samples: usize) -> Vec<f64> {
    let n_geo = samples / 2;
    let n_uni = samples - n_geo;
    let mut out = Vec::with_capacity(samples);
    let ratio = (1.0 / eps).ln();
    for i in 0..n_geo {
        let t = i as f64 / n_geo as f64;
        out.push(start + eps * (ratio * t).exp());
    }
    for i in 0..n_uni {
        let t = if n_uni == 1 { 1.0 } else { i as f64 / (n_uni - 1) as f64 };
        out.push(start + 1.0 + t * (extent - 1.0));
    }
    out
}

fn symmetric_grid(extent: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|i| -extent + 2.0 * extent * i as f64 / (samples - 1) as f64)
        .collect()
}

/// Default sampling grid of the regime fixed by `(n, r, d)`.
pub fn default_grid(n: usize, r: usize, d: f64, samples: usize) -> Result<Vec<f64>> {
    profile_grid(n, r, d, samples, DEFAULT_EXTENT)
}

/// Grid reaching `extent` beyond the singular end (two sheets, half graph)
/// or covering `[−extent, extent]` (other regimes).
pub fn profile_grid(n: usize, r: usize, d: f64, samples: usize, extent: f64) -> Result<Vec<f64>> {
    if samples < 3 {
        return Err(Error::invalid("a grid needs at least 3 samples"));
    }
    if !(extent > 1.0 && extent.is_finite()) {
        return Err(Error::invalid("grid extent must be finite and above 1"));
    }
    Ok(match classify_regime(n, r, d)? {
        Regime::TwoSheets => {
            let a = waist(n, r, d)?;
            singular_grid(a, waist_offset(a), extent, samples)
        }
        Regime::HalfGraph => singular_grid(0.0, 1e-6, extent, samples),
        _ => symmetric_grid(extent, samples),
    })
}

/// Intrinsic arclength `∫_a^ρ √(1 + λ̇²) dξ` of a two-sheet profile from
/// its waist.
pub fn arclength_two_sheets(n: usize, r: usize, d: f64, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let q = check_proper(n, r)?;
    let a = waist(n, r, d)?;
    if !(rho >= a && rho.is_finite()) {
        return Err(Error::domain(format!("rho = {rho} lies below the waist a = {a}")));
    }
    let near = rho.min(a + 1.0);
    let ch_a = a.cosh();
    // ξ = a + u²; 2u √(1+λ̇²) = 2 √(e^L / ((e^L − 1)/u²))
    let head = integrate(
        |u: f64| {
            let delta = u * u;
            if delta == 0.0 {
                let rate = 2.0 * q * a.tanh();
                return 2.0 / rate.sqrt();
            }
            let s = 2.0 * (a + 0.5 * delta).sinh() * (0.5 * delta).sinh() / ch_a;
            let big_l = 2.0 * q * s.ln_1p();
            2.0 * (big_l.exp() * delta / big_l.exp_m1()).sqrt()
        },
        0.0,
        (near - a).sqrt(),
        cfg,
    )?
    .require_converged("arclength near the waist")?;
    if rho <= near {
        return Ok(head);
    }
    let speed = |xi: f64| {
        let big_l = 2.0 * q * ratio_minus_one(xi, a).ln_1p();
        if big_l > 700.0 {
            1.0
        } else {
            (big_l.exp() / big_l.exp_m1()).sqrt()
        }
    };
    let tail = integrate(speed, near, rho, cfg)?.require_converged("arclength")?;
    Ok(head + tail)
}

fn positive_sample(
    n: usize,
    r: usize,
    d: f64,
    regime: Regime,
    rho: f64,
    opts: &ProfileOptions,
) -> Result<ProfileSample> {
    let cfg = &opts.quadrature;
    let (lambda, lambda_dot, lambda_ddot) = match regime {
        Regime::Slice | Regime::TiltedGraph => (d * rho, d, 0.0),
        Regime::TwoSheets => (
            profile_two_sheets(n, r, d, rho, cfg)?,
            lambda_dot(n, r, d, rho)?,
            lambda_ddot(n, r, d, rho)?,
        ),
        Regime::HalfGraph => (
            profile_half_graph(n, r, opts.base_point, rho, cfg)?,
            lambda_dot(n, r, d, rho)?,
            lambda_ddot(n, r, d, rho)?,
        ),
        Regime::EntireGraph => (
            profile_entire(n, r, d, rho, cfg)?,
            lambda_dot(n, r, d, rho)?,
            lambda_ddot(n, r, d, rho)?,
        ),
    };
    Ok(ProfileSample {
        rho,
        lambda,
        lambda_dot,
        lambda_ddot,
    })
}

/// Samples the profile of `(n, r, d)` on `grid`.
pub fn sample_profile(n: usize, r: usize, d: f64, grid: &[f64], opts: &ProfileOptions) -> Result<ProfileCurve> {
    let regime = classify_regime(n, r, d)?;
    if opts.branch_sign != 1.0 && opts.branch_sign != -1.0 {
        return Err(Error::invalid("branch sign must be +1 or -1"));
    }
    if !opts.c.is_finite() {
        return Err(Error::invalid("vertical offset must be finite"));
    }
    let a = if regime == Regime::TwoSheets {
        Some(waist(n, r, d)?)
    } else {
        None
    };
    let mut samples = Vec::with_capacity(grid.len());
    for &rho in grid {
        let s = positive_sample(n, r, d, regime, rho, opts)?;
        samples.push(ProfileSample {
            rho,
            lambda: opts.c + opts.branch_sign * s.lambda,
            lambda_dot: opts.branch_sign * s.lambda_dot,
            lambda_ddot: opts.branch_sign * s.lambda_ddot,
        });
    }
    Ok(ProfileCurve {
        n,
        r,
        d,
        regime,
        q: if r < n { q_of(n, r) } else { 0.0 },
        a,
        base_point: if regime == Regime::HalfGraph {
            Some(opts.base_point)
        } else {
            None
        },
        samples,
        c: opts.c,
        branch_sign: opts.branch_sign,
    })
}
