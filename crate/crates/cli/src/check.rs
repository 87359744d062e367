//! The invariant suite behind `hnr check`.

use hnr_core::ambient::{christoffel, BallPoint};
use hnr_core::curvature::{family_curvatures, hr_ode_residual, mean_curvature_j, shape_norm};
use hnr_core::height::height_from_a;
use hnr_core::profile::{default_grid, first_integral, sample_profile, waist, waist_offset, ProfileOptions};
use hnr_core::quadrature::QuadratureConfig;
use hnr_core::stc::{build_fermi_mesh, dilation_transform, strong_total_curvature, MeshSpec};
use serde::Serialize;

use crate::commands::{emit_json, SCHEMA_VERSION};
use crate::{CheckArgs, CliError, CliResult};

#[derive(Serialize)]
struct CheckItem {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct CheckReport {
    schema_version: u32,
    quick: bool,
    passed: bool,
    checks: Vec<CheckItem>,
}

type Outcome = Result<String, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dims(quick: bool) -> std::ops::RangeInclusive<usize> {
    if quick {
        3..=4
    } else {
        3..=5
    }
}

fn first_integral_check(quick: bool) -> Outcome {
    let mut worst_fi: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut cases = 0;
    for n in dims(quick) {
        for r in 1..n {
            for d in [0.3, 1.0, 2.0, 6.0] {
                let grid = default_grid(n, r, d, 512).map_err(fail)?;
                let curve = sample_profile(n, r, d, &grid, &ProfileOptions::default()).map_err(fail)?;
                for s in &curve.samples {
                    let fi = first_integral(n, r, s.rho, s.lambda_dot).powf(1.0 / r as f64);
                    worst_fi = worst_fi.max((fi - d).abs() / d.max(1.0));
                }
                worst_res = worst_res.max(hr_ode_residual(&curve).map_err(fail)?);
                cases += 1;
            }
        }
    }
    if worst_fi < 1e-9 && worst_res < 1e-6 {
        Ok(format!(
            "{cases} profiles, first integral error {worst_fi:.2e}, residual {worst_res:.2e}"
        ))
    } else {
        Err(format!("first integral error {worst_fi:e}, residual {worst_res:e}"))
    }
}

fn sign_check(quick: bool) -> Outcome {
    let mut samples = 0;
    for n in dims(quick) {
        for r in 1..n {
            for d in [1.5, 3.0, 10.0] {
                let a = waist(n, r, d).map_err(fail)?;
                for i in 0..100 {
                    let rho = a + waist_offset(a) + 8.0 * i as f64 / 99.0;
                    let (k1, k2) = family_curvatures(n, r, d, rho).map_err(fail)?;
                    let scale = shape_norm(n, k1, k2).powi(r as i32);
                    for j in 1..=n {
                        let hj = mean_curvature_j(n, j, k1, k2).map_err(fail)?;
                        let ok = match j.cmp(&r) {
                            std::cmp::Ordering::Less => hj > 0.0,
                            std::cmp::Ordering::Equal => hj.abs() < 1e-12 * scale + 1e-300,
                            std::cmp::Ordering::Greater => hj < 0.0,
                        };
                        if !ok {
                            return Err(format!("({n},{r},{d}) rho={rho}: H_{j} = {hj:e}"));
                        }
                    }
                    samples += 1;
                }
            }
        }
    }
    Ok(format!("{samples} samples"))
}

fn height_check(quick: bool) -> Outcome {
    let cfg = QuadratureConfig::default();
    let pairs: &[(usize, usize)] = if quick {
        &[(3, 1), (4, 2)]
    } else {
        &[(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)]
    };
    for &(n, r) in pairs {
        let hs = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&a| height_from_a(n, r, a, &cfg).map(|h| h.h))
            .collect::<hnr_core::Result<Vec<_>>>()
            .map_err(fail)?;
        if !hs.windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("({n},{r}): heights not decreasing: {hs:?}"));
        }
    }
    Ok(format!("{} (n, r) pairs strictly decreasing", pairs.len()))
}

fn metric_diag(x: &[f64], i: usize) -> f64 {
    if i == x.len() {
        return 1.0;
    }
    let f = 0.5 * (1.0 - x.iter().map(|v| v * v).sum::<f64>());
    1.0 / (f * f)
}

/// Largest gap between closed-form Christoffel symbols and five-point
/// differences of the diagonal metric at `x`.
fn christoffel_gap(x: &[f64]) -> CliResult<f64> {
    let n = x.len();
    let h = 1e-4;
    let d_metric = |l: usize, i: usize| {
        if l == n {
            return 0.0;
        }
        let at = |s: f64| {
            let mut y = x.to_vec();
            y[l] += s;
            metric_diag(&y, i)
        };
        (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
    };
    let gamma = christoffel(&BallPoint::new(x.to_vec(), 0.0)?);
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let ginv = 1.0 / metric_diag(x, k);
        for i in 0..=n {
            for j in 0..=n {
                let mut s = 0.0;
                if j == k {
                    s += d_metric(i, k);
                }
                if i == k {
                    s += d_metric(j, k);
                }
                if i == j {
                    s -= d_metric(k, i);
                }
                worst = worst.max((0.5 * ginv * s - gamma.get(k, i, j)).abs());
            }
        }
    }
    Ok(worst)
}

fn christoffel_check(quick: bool) -> Outcome {
    let count = if quick { 40 } else { 200 };
    let golden = 0.618_033_988_749_894_9;
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let n = 2 + k % 4;
        // low-discrepancy points with |x| <= 0.9
        let raw: Vec<f64> = (0..n)
            .map(|i| ((k * (i + 2)) as f64 * golden + 0.1 * i as f64).fract() * 2.0 - 1.0)
            .collect();
        let len = raw.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        let radius = 0.9 * ((k as f64 + 0.5) * golden).fract();
        let x: Vec<f64> = raw.iter().map(|v| v * radius / len).collect();
        worst = worst.max(christoffel_gap(&x).map_err(|e| e.to_string())?);
    }
    if worst < 1e-6 {
        Ok(format!("{count} points, max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:e}"))
    }
}

fn dilation_check(quick: bool) -> Outcome {
    let (rows, columns) = if quick { (48, 8) } else { (96, 16) };
    let mut worst: f64 = 0.0;
    for (n, r, d) in [(3, 1, 2.0), (3, 1, 0.5), (4, 2, 3.0)] {
        let mesh = build_fermi_mesh(&MeshSpec {
            rows,
            columns,
            ..MeshSpec::new(n, r, d)
        })
        .map_err(fail)?;
        let q = n as f64 + 1.5;
        let base = strong_total_curvature(&mesh, q).map_err(fail)?.value;
        for c in [0.5, 2.0, 10.0] {
            let scaled = dilation_transform(&mesh, c).map_err(fail)?;
            let v = strong_total_curvature(&scaled, q).map_err(fail)?.value;
            worst = worst.max(((v - base) / base).abs());
        }
    }
    if worst <= 1e-12 {
        Ok(format!("3 meshes, max relative change {worst:.2e}"))
    } else {
        Err(format!("max relative change {worst:e}"))
    }
}

pub fn run(args: &CheckArgs) -> CliResult<()> {
    let suite: [(&'static str, fn(bool) -> Outcome); 5] = [
        ("first_integral", first_integral_check),
        ("sign_theorem", sign_check),
        ("height_monotonicity", height_check),
        ("christoffel", christoffel_check),
        ("dilation_invariance", dilation_check),
    ];
    let checks: Vec<CheckItem> = suite
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f(args.quick) {
                Ok(m) => (true, m),
                Err(m) => (false, m),
            };
            CheckItem { name, passed, detail }
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let report = CheckReport {
        schema_version: SCHEMA_VERSION,
        quick: args.quick,
        passed: failed == 0,
        checks,
    };
    emit_json(args.output.as_deref(), &report)?;
    if failed > 0 {
        return Err(CliError::CheckFailed(failed));
    }
    Ok(())
}
