//! Wavefront OBJ surfaces for n = 2, in coordinates `(x_1, x_2, t)`.

use hnr_core::ambient::mobius_add;
use hnr_core::profile::{classify_regime, profile_grid, sample_profile, ProfileOptions, Regime};
use hnr_core::quadrature::QuadratureConfig;

use crate::commands::fmt;
use crate::{CliError, CliResult, MeshGenArgs};

/// Triangulated strip over the profile rows and `columns` orbit samples on
/// `[−R, R]`. Two-sheet members run down the lower sheet and back up the
/// upper one, so the strip is joined across the waist.
pub fn surface_obj(gen: &MeshGenArgs, cfg: &QuadratureConfig) -> CliResult<String> {
    let (n, r, d) = match (gen.n, gen.r, gen.d) {
        (Some(n), Some(r), Some(d)) => (n, r, d),
        _ => return Err(CliError::Usage("mesh needs --n, --r and --d".into())),
    };
    let regime = classify_regime(n, r, d)?;
    if !(gen.orbit_radius > 0.0 && gen.orbit_radius.is_finite()) {
        return Err(CliError::Usage("orbit radius must be positive".into()));
    }
    let grid = profile_grid(n, r, d, gen.rows, gen.extent)?;
    let opts = ProfileOptions {
        base_point: gen.base_point,
        quadrature: *cfg,
        ..ProfileOptions::default()
    };
    let curve = sample_profile(n, r, d, &grid, &opts)?;

    let mut rows: Vec<(f64, f64)> = Vec::new();
    if regime == Regime::TwoSheets {
        rows.extend(curve.samples.iter().rev().map(|s| (s.rho, -s.lambda)));
    }
    rows.extend(curve.samples.iter().map(|s| (s.rho, s.lambda)));

    let cols = gen.columns;
    let radius = gen.orbit_radius;
    let mut text = format!(
        "# n={n} r={r} d={} regime={regime:?} rows={} columns={cols}\n",
        fmt(d),
        rows.len()
    );
    for &(rho, t) in &rows {
        for j in 0..cols {
            let sigma = -radius + 2.0 * radius * j as f64 / (cols - 1) as f64;
            let x = mobius_add(&[(0.5 * sigma).tanh(), 0.0], &[0.0, (0.5 * rho).tanh()]);
            text.push_str(&format!("v {} {} {}\n", fmt(x[0]), fmt(x[1]), fmt(t)));
        }
    }
    let idx = |i: usize, j: usize| i * cols + j + 1;
    for i in 0..rows.len() - 1 {
        for j in 0..cols - 1 {
            let (a, b, c, e) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            text.push_str(&format!("f {a} {b} {c}\nf {a} {c} {e}\n"));
        }
    }
    Ok(text)
}
