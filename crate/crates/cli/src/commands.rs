use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use hnr_core::ambient::Hyperplane;
use hnr_core::barrier::{containment_fixture, sweep, violation_fixture, SweepReport, Target, Verdict};
use hnr_core::curvature::curvature_sample;
use hnr_core::height::{self, height_derivative, height_from_a, height_limit, HeightResult};
use hnr_core::profile::{classify_regime, first_integral, profile_grid, sample_profile, ProfileOptions};
use hnr_core::quadrature::QuadratureConfig;
use hnr_core::stc::{
    build_fermi_mesh, decay_check, read_mesh_csv, strong_total_curvature, write_edges_csv, write_vertices_csv,
    DecayPoint, FermiMesh, MeshSpec,
};
use serde::Serialize;

use crate::{
    obj, CliError, CliResult, DecayArgs, FixtureName, HeightArgs, MeshArgs, MeshFormat, MeshGenArgs, ProfileArgs,
    StcArgs, SweepArgs,
};

pub const SCHEMA_VERSION: u32 = 1;

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `text` to `path`, or to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(path, &text)
}

pub fn profile(args: &ProfileArgs) -> CliResult<()> {
    let ProfileArgs { n, r, d, .. } = *args;
    let regime = classify_regime(n, r, d)?;
    let opts = ProfileOptions {
        c: args.c,
        branch_sign: if args.negative_branch { -1.0 } else { 1.0 },
        base_point: args.base_point,
        quadrature: args.quad.config()?,
    };
    let grid = profile_grid(n, r, d, args.samples, args.extent)?;
    let curve = sample_profile(n, r, d, &grid, &opts)?;

    let mut text = format!("# n={n} r={r} d={} regime={regime:?}\n", fmt(d));
    let mut header = vec!["rho", "lambda", "lambda_dot", "lambda_ddot", "kappa1", "kappa2"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    header.extend((1..=n).map(|j| format!("H_{j}")));
    header.extend(["shape_norm", "n_vertical", "first_integral"].map(String::from));
    text.push_str(&header.join(","));
    text.push('\n');
    for s in &curve.samples {
        let c = curvature_sample(n, s.rho, s.lambda_dot, s.lambda_ddot)?;
        let mut row = vec![s.rho, s.lambda, s.lambda_dot, s.lambda_ddot, c.kappa1, c.kappa2];
        row.extend(&c.h);
        row.extend([c.shape_norm, c.n_vertical, first_integral(n, r, s.rho, s.lambda_dot)]);
        text.push_str(&row.into_iter().map(fmt).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    emit(args.output.as_deref(), &text)
}

#[derive(Serialize)]
struct HeightReport {
    schema_version: u32,
    n: usize,
    r: usize,
    d: f64,
    a: Option<f64>,
    status: String,
    h: Option<f64>,
    total_height: Option<f64>,
    dh_da: Option<f64>,
    limit: f64,
    error_estimate: Option<f64>,
}

pub fn height(args: &HeightArgs) -> CliResult<()> {
    let (n, r) = (args.n, args.r);
    let limit = height_limit(n, r)?;
    let cfg = args.quad.config()?;
    let result: Option<HeightResult> = match (args.d, args.a) {
        (Some(d), None) => {
            classify_regime(n, r, d)?;
            if d <= 1.0 {
                None
            } else {
                Some(height::height(n, r, d, &cfg)?)
            }
        }
        (None, Some(0.0)) => None,
        (None, Some(a)) => Some(height_from_a(n, r, a, &cfg)?),
        _ => return Err(CliError::Usage("height needs exactly one of --d or --a".into())),
    };
    let report = match result {
        Some(h) => HeightReport {
            schema_version: SCHEMA_VERSION,
            n,
            r,
            d: h.d,
            a: Some(h.a),
            status: "finite".into(),
            h: Some(h.h),
            total_height: Some(h.total_height()),
            dh_da: Some(height_derivative(n, r, h.a, &cfg)?),
            limit,
            error_estimate: Some(h.error_estimate),
        },
        None => HeightReport {
            schema_version: SCHEMA_VERSION,
            n,
            r,
            d: args.d.unwrap_or(1.0),
            a: None,
            status: "infinite (d ≤ 1)".into(),
            h: None,
            total_height: None,
            dh_da: None,
            limit,
            error_estimate: None,
        },
    };
    emit_json(args.output.as_deref(), &report)
}

fn require<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

fn check_resolution(gen: &MeshGenArgs) -> CliResult<()> {
    if gen.rows < 2 || gen.columns < 2 {
        return Err(CliError::Usage(format!(
            "mesh resolution {}x{} is degenerate; rows and columns must be at least 2",
            gen.rows, gen.columns
        )));
    }
    Ok(())
}

fn generate(gen: &MeshGenArgs, cfg: QuadratureConfig) -> CliResult<FermiMesh> {
    check_resolution(gen)?;
    let spec = MeshSpec {
        rho_extent: gen.extent,
        orbit_radius: gen.orbit_radius,
        rows: gen.rows,
        columns: gen.columns,
        base_point: gen.base_point,
        quadrature: cfg,
        ..MeshSpec::new(require(gen.n, "n")?, require(gen.r, "r")?, require(gen.d, "d")?)
    };
    Ok(build_fermi_mesh(&spec)?)
}

pub fn mesh(args: &MeshArgs) -> CliResult<()> {
    let n = require(args.gen.n, "n")?;
    let cfg = args.quad.config()?;
    let format = args
        .format
        .unwrap_or(if n == 2 { MeshFormat::Obj } else { MeshFormat::Csv });
    match format {
        MeshFormat::Obj => {
            if n != 2 {
                return Err(CliError::Usage(format!("OBJ export needs n = 2, got n = {n}")));
            }
            check_resolution(&args.gen)?;
            let text = obj::surface_obj(&args.gen, &cfg)?;
            emit(args.output.as_deref(), &text)
        }
        MeshFormat::Csv => {
            let (Some(vp), Some(ep)) = (&args.vertices, &args.edges) else {
                return Err(CliError::Usage("CSV export needs --vertices and --edges".into()));
            };
            let mesh = generate(&args.gen, cfg)?;
            write_vertices_csv(&mesh, File::create(vp)?)?;
            write_edges_csv(&mesh, File::create(ep)?)?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct StcReport {
    schema_version: u32,
    n: usize,
    vertices: usize,
    edges: usize,
    q: f64,
    s: f64,
    value: f64,
    truncation_r: f64,
    tail_flag: bool,
    truncations: Vec<(f64, f64)>,
}

pub fn stc(args: &StcArgs) -> CliResult<()> {
    let mesh = match (&args.vertices, &args.edges) {
        (Some(v), Some(e)) => read_mesh_csv(BufReader::new(File::open(v)?), BufReader::new(File::open(e)?))?,
        _ => generate(&args.gen, args.quad.config()?)?,
    };
    let q = args.q.unwrap_or(mesh.n() as f64 + 1.0);
    let est = strong_total_curvature(&mesh, q)?;
    let report = StcReport {
        schema_version: SCHEMA_VERSION,
        n: mesh.n(),
        vertices: mesh.len(),
        edges: mesh.edges().len(),
        q: est.q,
        s: est.s,
        value: est.value,
        truncation_r: est.truncation_r,
        tail_flag: est.tail_flag,
        truncations: est.truncations,
    };
    emit_json(args.output.as_deref(), &report)
}

#[derive(Serialize)]
struct DecayReport {
    schema_version: u32,
    n: usize,
    r: usize,
    d: f64,
    points: Vec<DecayPoint>,
    strictly_decreasing: bool,
    final_value: f64,
}

pub fn decay(args: &DecayArgs) -> CliResult<()> {
    let points = decay_check(args.n, args.r, args.d, &args.radii, &args.quad.config()?)?;
    let strictly_decreasing = points.windows(2).all(|w| w[1].value < w[0].value);
    let final_value = points.last().map_or(f64::NAN, |p| p.value);
    let report = DecayReport {
        schema_version: SCHEMA_VERSION,
        n: args.n,
        r: args.r,
        d: args.d,
        points,
        strictly_decreasing,
        final_value,
    };
    emit_json(args.output.as_deref(), &report)
}

#[derive(Serialize)]
struct SweepOutput {
    schema_version: u32,
    fixture: Option<String>,
    n: usize,
    r: usize,
    d: f64,
    contact_tol: f64,
    verdict: &'static str,
    report: SweepReport,
}

/// `s_start`, then the multiples of `step` below it down to zero.
fn schedule(start: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(start >= 0.0 && start.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage("need s-start >= 0 and s-step > 0".into()));
    }
    let k = (start / step + 1e-9).floor() as usize;
    let mut out: Vec<f64> = (0..=k).rev().map(|i| i as f64 * step).collect();
    if start > out[0] + 1e-12 {
        out.insert(0, start);
    }
    Ok(out)
}

pub fn sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let cfg = args.quad.config()?;
    let (fixture, n, r, d, plane, target, s_schedule, t) = match (args.fixture, &args.target) {
        (Some(name), _) => {
            let fx = match name {
                FixtureName::Containment => containment_fixture(args.n)?,
                FixtureName::Violation => violation_fixture(args.n)?,
            };
            let label = format!("{name:?}").to_lowercase();
            (Some(label), fx.n, fx.r, fx.d, fx.plane, fx.target, fx.s_schedule, fx.t)
        }
        (None, Some(path)) => {
            let target = Target::read_csv(BufReader::new(File::open(path)?))?;
            let n = target.points.first().map_or(args.normal.len(), |p| p.dim());
            if args.normal.len() != n {
                return Err(CliError::Usage(format!(
                    "--normal needs {n} components, got {}",
                    args.normal.len()
                )));
            }
            let plane = Hyperplane::orthogonal_to_diameter(&args.normal, args.offset)?;
            (
                None,
                n,
                args.r,
                args.d,
                plane,
                target,
                schedule(args.s_start, args.s_step)?,
                args.t,
            )
        }
        (None, None) => return Err(CliError::Usage("sweep needs --fixture or --target".into())),
    };
    if let Some(p) = &args.write_target {
        target.write_csv(File::create(p)?)?;
    }
    let side = if args.flip { -1.0 } else { 1.0 };
    let report = sweep(&target, &plane, side, n, r, d, &s_schedule, t, args.contact_tol, &cfg)?;
    let verdict = match report.verdict {
        Verdict::NoContact => "NoContact",
        Verdict::FirstContact(_) => "FirstContact",
        Verdict::Containment => "Containment",
    };
    let out = SweepOutput {
        schema_version: SCHEMA_VERSION,
        fixture,
        n,
        r,
        d,
        contact_tol: args.contact_tol,
        verdict,
        report,
    };
    emit_json(args.output.as_deref(), &out)
}
