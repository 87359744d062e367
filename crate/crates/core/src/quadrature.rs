//! Adaptive Gauss–Kronrod quadrature for the singular and improper integrals
//! behind the profile and height computations.
//!
//! Every singular integrand met in this crate has an exact inverse square
//! root at one endpoint, which [`integrate_sqrt_singular`] removes with the
//! substitution `v = a + u²`. Infinite upper limits are handled by doubling
//! panels `[V, 2V]` followed by an analytic power-law tail.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panel bisections per finite integral.
    pub max_subdivisions: usize,
    /// Start of the doubling panels for infinite upper limits.
    pub tail_start: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail_start: 4.0,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize, tail_start: f64) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            tail_start,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        if !(self.tail_start > 0.0 && self.tail_start.is_finite()) {
            return Err(Error::invalid("tail_start must be positive and finite"));
        }
        Ok(())
    }

    pub(crate) fn with_tail_start(&self, tail_start: f64) -> Self {
        Self { tail_start, ..*self }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions_used: 0,
            converged: true,
        }
    }

    fn combine(self, other: IntegralResult) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
            converged: self.converged && other.converged,
        }
    }

    /// Fails with [`Error::NonConvergence`] unless `converged` is set.
    pub fn require_converged(self, what: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                value: self.value,
                error_estimate: self.error_estimate,
            })
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::domain(format!("integrand is not finite at {center}")));
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kron.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(Error::domain(format!(
                "integrand is not finite near {}",
                if f1.is_finite() { center + dx } else { center - dx }
            )));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kron * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((kron - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        a,
        b,
        value,
        error: err,
    })
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Panels are bisected largest-error first. When the subdivision budget runs
/// out the best estimate is returned with `converged` unset. The final sum
/// runs over panels in left-endpoint order, so the result does not depend on
/// the order in which panels were refined.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration limits must be finite"));
    }
    if a > b {
        return Err(Error::invalid(format!("integration limits out of order: {a} > {b}")));
    }
    if a == b {
        return Ok(IntegralResult::zero());
    }
    let first = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut done: Vec<Panel> = Vec::new();
    let mut subdivisions = 0;
    let min_width = 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    while error > cfg.target(value) && subdivisions < cfg.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        if worst.b - worst.a <= min_width {
            // cannot be refined further
            done.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    done.extend(heap);
    done.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = done.iter().map(|p| p.value).sum();
    let error: f64 = done.iter().map(|p| p.error).sum();
    Ok(IntegralResult {
        value,
        error_estimate: error,
        subdivisions_used: subdivisions,
        converged: error <= cfg.target(value),
    })
}

/// `∫_a^b g(v) (v − a)^{−1/2} dv`, computed as `∫_0^{√(b−a)} 2 g(a + u²) du`.
pub fn integrate_sqrt_singular<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if a > b {
        return Err(Error::invalid(format!("integration limits out of order: {a} > {b}")));
    }
    let top = (b - a).sqrt();
    integrate(|u| 2.0 * g(a + u * u), 0.0, top, cfg)
}

/// `∫_a^b f` split into panels of doubling width starting with
/// `first_width`; suited to integrands that decay along `[a, b]`.
pub fn integrate_doubling<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    first_width: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let mut lo = a;
    let mut width = first_width;
    let mut out = IntegralResult::zero();
    while lo < b {
        let hi = (lo + width).min(b);
        out = out.combine(integrate(&f, lo, hi, cfg)?);
        lo = hi;
        width *= 2.0;
    }
    Ok(out)
}

/// Contributions of the doubling panels must fall below this ratio for the
/// tail to count as convergent (local exponent above 1.01).
const DIVERGENCE_RATIO: f64 = 0.993;
const MAX_DOUBLINGS: usize = 1000;

/// `∫_a^∞ f(v) dv` for `f` decaying like `v^{−p}`, `p = decay_exponent_hint`.
///
/// `[a, V]` is covered by doubling panels starting at `tail_start` (or `a`,
/// whichever is larger); the remaining tail is `f(V) V/(p − 1)`. The error
/// estimate includes the difference between that tail and the one implied
/// by the exponent measured on the last two panels.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_exponent_hint: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    let p = decay_exponent_hint;
    if !(p > 1.0) {
        return Err(Error::Divergent(format!(
            "decay exponent {p} does not make the tail integrable"
        )));
    }
    if !a.is_finite() {
        return Err(Error::invalid("lower limit must be finite"));
    }
    let mut v = a.max(cfg.tail_start);
    let mut total = integrate(&f, a, v, cfg)?;
    let mut prev_contrib: Option<f64> = None;
    let mut slow_panels = 0;
    for _ in 0..MAX_DOUBLINGS {
        let panel = integrate(&f, v, 2.0 * v, cfg)?;
        total = total.combine(panel);
        v *= 2.0;
        let contrib = panel.value;
        let fv = f(v);
        if !fv.is_finite() {
            return Err(Error::domain(format!("integrand is not finite at {v}")));
        }
        let tail = fv * v / (p - 1.0);
        let mut tail_err = tail.abs();
        if let Some(prev) = prev_contrib {
            if prev != 0.0 && contrib != 0.0 && (contrib / prev) > 0.0 {
                let ratio = contrib / prev;
                if ratio >= DIVERGENCE_RATIO {
                    slow_panels += 1;
                    if slow_panels >= 4 {
                        return Err(Error::Divergent(format!(
                            "tail contributions stopped shrinking near v = {v:e}"
                        )));
                    }
                } else {
                    slow_panels = 0;
                    let p_loc = 1.0 - ratio.log2();
                    let tail_loc = fv * v / (p_loc - 1.0);
                    tail_err = (tail - tail_loc).abs();
                }
            } else if contrib == 0.0 && fv == 0.0 {
                tail_err = 0.0;
            }
        }
        prev_contrib = Some(contrib);
        let value = total.value + tail;
        let err = total.error_estimate + tail_err;
        if tail_err <= 0.25 * cfg.target(value) || tail.abs() <= 0.25 * cfg.target(value) {
            return Ok(IntegralResult {
                value,
                error_estimate: err,
                subdivisions_used: total.subdivisions_used,
                converged: total.converged && err <= cfg.target(value),
            });
        }
        if !(2.0 * v).is_finite() || v > 1e280 {
            break;
        }
    }
    Ok(IntegralResult {
        value: total.value,
        error_estimate: total.error_estimate + f(v).abs() * v / (p - 1.0),
        subdivisions_used: total.subdivisions_used,
        converged: false,
    })
}

/// `∫_a^∞ g(v) (v − a)^{−1/2} dv`: exact desingularisation on
/// `[a, max(tail_start, a + 1)]`, doubling panels beyond. The hint is the
/// decay exponent of the full integrand.
pub fn integrate_sqrt_singular_to_infinity<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    decay_exponent_hint: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let split = cfg.tail_start.max(a + 1.0);
    let head = integrate_sqrt_singular(&g, a, split, cfg)?;
    let tail = integrate_to_infinity(|v| g(v) / (v - a).sqrt(), split, decay_exponent_hint, cfg)?;
    let out = head.combine(tail);
    let converged = out.converged || (head.converged && tail.converged) || out.error_estimate <= cfg.target(out.value);
    Ok(IntegralResult { converged, ..out })
}
