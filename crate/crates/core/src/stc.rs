//! Discretised invariant hypersurfaces and weighted norms of `|A|`.
//!
//! An invariant hypersurface is the orbit of its profile curve under the
//! translations along the base hyperplane `Π ≅ ℍ^{n−1}`. The induced metric
//! is `(1 + λ̇²) dρ² + cosh²ρ · g_Π`, so every field here depends on the
//! profile row and on the radial distance `σ` inside `Π` only. A
//! [`FermiMesh`] samples the two-dimensional quotient (profile × radial
//! orbit) and carries the exact `(n − 1)`-dimensional orbit volume in its
//! cell weights; intrinsic distances `ξ` are shortest paths in the quotient.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::ambient::{mobius_add, BallPoint};
use crate::curvature::{family_shape_norm, family_shape_norm_gradient};
use crate::profile::{
    arclength_two_sheets, classify_regime, profile_grid, sample_profile, waist, ProfileOptions, Regime,
};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshVertex {
    pub point: BallPoint,
    /// Signed distance to the base hyperplane.
    pub rho: f64,
    /// Radial distance inside the orbit `Π`.
    pub sigma: f64,
    pub shape_norm: f64,
    pub grad_shape_norm: f64,
    /// Intrinsic distance to the base vertex.
    pub xi: f64,
    /// Cell measure `dM`.
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// A sampled invariant hypersurface. When `grid` is set, vertex
/// `row · columns + column` sits on profile row `row` at orbit column
/// `column`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermiMesh {
    n: usize,
    vertices: Vec<MeshVertex>,
    edges: Vec<MeshEdge>,
    base: Option<usize>,
    grid: Option<(usize, usize)>,
}

/// Slack allowed in the edge triangle inequality for `ξ`.
const TRIANGLE_SLACK: f64 = 1e-9;

impl FermiMesh {
    /// Assembles and validates a mesh.
    pub fn from_parts(
        n: usize,
        vertices: Vec<MeshVertex>,
        edges: Vec<MeshEdge>,
        base: Option<usize>,
        grid: Option<(usize, usize)>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("mesh dimension n must be at least 2"));
        }
        if vertices.is_empty() {
            return Err(Error::invalid("mesh has no vertices"));
        }
        if let Some(b) = base {
            if b >= vertices.len() {
                return Err(Error::invalid("base vertex index out of range"));
            }
        }
        if let Some((rows, cols)) = grid {
            if rows * cols != vertices.len() {
                return Err(Error::invalid("grid shape does not match the vertex count"));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if !(v.weight > 0.0 && v.weight.is_finite()) {
                return Err(Error::invalid(format!("vertex {i} has non-positive area weight")));
            }
            if !(v.xi >= 0.0 && v.xi.is_finite()) {
                return Err(Error::invalid(format!("vertex {i} has invalid intrinsic distance")));
            }
            if v.xi == 0.0 && base != Some(i) {
                return Err(Error::invalid(format!(
                    "vertex {i} has zero distance but is not the base"
                )));
            }
            if !(v.shape_norm >= 0.0 && v.grad_shape_norm >= 0.0) {
                return Err(Error::invalid(format!("vertex {i} has a negative curvature field")));
            }
            if v.point.dim() != n {
                return Err(Error::invalid(format!("vertex {i} does not lie in dimension {n}")));
            }
        }
        for (k, e) in edges.iter().enumerate() {
            if e.a >= vertices.len() || e.b >= vertices.len() || !(e.length > 0.0) {
                return Err(Error::invalid(format!("edge {k} is malformed")));
            }
            let gap = (vertices[e.a].xi - vertices[e.b].xi).abs();
            if gap > e.length * (1.0 + TRIANGLE_SLACK) + TRIANGLE_SLACK {
                return Err(Error::invalid(format!(
                    "edge {k} violates the triangle inequality for xi ({gap} > {})",
                    e.length
                )));
            }
        }
        Ok(Self {
            n,
            vertices,
            edges,
            base,
            grid,
        })
    }

    /// A geometry-free mesh holding only distances and weights; curvature
    /// fields start at zero.
    pub fn from_weights(n: usize, xi: &[f64], weights: &[f64], base: Option<usize>) -> Result<Self> {
        if xi.len() != weights.len() {
            return Err(Error::invalid("xi and weights have different lengths"));
        }
        let vertices = xi
            .iter()
            .zip(weights)
            .map(|(&xi, &weight)| MeshVertex {
                point: BallPoint::origin(n),
                rho: 0.0,
                sigma: 0.0,
                shape_norm: 0.0,
                grad_shape_norm: 0.0,
                xi,
                weight,
            })
            .collect();
        Self::from_parts(n, vertices, Vec::new(), base, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[MeshVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    pub fn base(&self) -> Option<usize> {
        self.base
    }

    /// `(rows, columns)` for meshes built on a grid.
    pub fn grid(&self) -> Option<(usize, usize)> {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn shape_norm_field(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.shape_norm).collect()
    }

    pub fn grad_shape_norm_field(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.grad_shape_norm).collect()
    }

    pub fn max_xi(&self) -> f64 {
        self.vertices.iter().map(|v| v.xi).fold(0.0, f64::max)
    }

    /// Replaces the curvature fields.
    pub fn with_fields(&self, shape_norm: &[f64], grad_shape_norm: &[f64]) -> Result<Self> {
        if shape_norm.len() != self.len() || grad_shape_norm.len() != self.len() {
            return Err(Error::invalid("field length does not match the vertex count"));
        }
        let mut out = self.clone();
        for (v, (a, g)) in out.vertices.iter_mut().zip(shape_norm.iter().zip(grad_shape_norm)) {
            v.shape_norm = *a;
            v.grad_shape_norm = *g;
        }
        Self::from_parts(out.n, out.vertices, out.edges, out.base, out.grid)
    }

    /// Recomputes `ξ` as shortest-path distances from `base`.
    pub fn rebased(&self, base: usize) -> Result<Self> {
        if base >= self.len() {
            return Err(Error::invalid("base vertex index out of range"));
        }
        let xi = shortest_paths(self.len(), &self.edges, base);
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("mesh graph is disconnected"));
        }
        let mut out = self.clone();
        for (v, x) in out.vertices.iter_mut().zip(xi) {
            v.xi = x;
        }
        out.base = Some(base);
        Self::from_parts(out.n, out.vertices, out.edges, out.base, out.grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn shortest_paths(count: usize, edges: &[MeshEdge], source: usize) -> Vec<f64> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
    for e in edges {
        adj[e.a].push((e.b, e.length));
        adj[e.b].push((e.a, e.length));
    }
    let mut dist = vec![f64::INFINITY; count];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapItem { dist: du, node: u }) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let cand = du + w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapItem { dist: cand, node: v });
            }
        }
    }
    dist
}

fn check_exponents(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("norm exponent q = {q} must be at least 1")));
    }
    Ok(())
}

fn weighted_sum(mesh: &FermiMesh, field: &[f64], q: f64, s: f64, within: f64) -> Result<f64> {
    if field.len() != mesh.len() {
        return Err(Error::invalid("field length does not match the vertex count"));
    }
    let expo = -q * s - mesh.n as f64;
    let mut acc = 0.0;
    for (i, (v, u)) in mesh.vertices.iter().zip(field).enumerate() {
        if v.xi > within || *u == 0.0 {
            continue;
        }
        let w = if v.xi == 0.0 {
            if expo < 0.0 {
                return Err(Error::domain(format!(
                    "field is nonzero at vertex {i} where xi = 0 and the weight exponent is negative"
                )));
            } else if expo == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            v.xi.powf(expo)
        };
        acc += u.abs().powf(q) * w * v.weight;
    }
    Ok(acc)
}

/// `(Σ |u_i|^q ξ_i^{−qs−n} w_i)^{1/q}`.
pub fn weighted_lq_norm(mesh: &FermiMesh, field: &[f64], q: f64, s: f64) -> Result<f64> {
    check_exponents(q)?;
    Ok(weighted_sum(mesh, field, q, s, f64::INFINITY)?.powf(1.0 / q))
}

/// `‖u‖_{L^q_s} + ‖∇u‖_{L^q_{s−1}}` with the gradient magnitudes supplied
/// per vertex.
pub fn weighted_sobolev_norm(mesh: &FermiMesh, field: &[f64], gradient: &[f64], q: f64, s: f64) -> Result<f64> {
    Ok(weighted_lq_norm(mesh, field, q, s)? + weighted_lq_norm(mesh, gradient, q, s - 1.0)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormEstimate {
    pub q: f64,
    pub s: f64,
    pub value: f64,
    /// Largest intrinsic radius included.
    pub truncation_r: f64,
    /// The last truncation step still moved the value by more than
    /// `TAIL_TOLERANCE` relative.
    pub tail_flag: bool,
    /// `(R, value restricted to ξ ≤ R)`, nondecreasing in both entries.
    pub truncations: Vec<(f64, f64)>,
}

pub const TAIL_TOLERANCE: f64 = 1e-3;
const TRUNCATION_STEPS: usize = 8;

fn stc_within(mesh: &FermiMesh, q: f64, radius: f64) -> Result<f64> {
    let a = mesh.shape_norm_field();
    let g = mesh.grad_shape_norm_field();
    Ok(weighted_sum(mesh, &a, q, -1.0, radius)?.powf(1.0 / q) + weighted_sum(mesh, &g, q, -2.0, radius)?.powf(1.0 / q))
}

/// The `W^{1,q}_{−1}` norm of `|A|` on the mesh:
/// `(∫|A|^q ξ^{q−n} dM)^{1/q} + (∫|∇|A||^q ξ^{2q−n} dM)^{1/q}`.
pub fn strong_total_curvature(mesh: &FermiMesh, q: f64) -> Result<WeightedNormEstimate> {
    if !(q > mesh.n as f64) {
        return Err(Error::domain(format!(
            "strong total curvature needs q > n = {}, got {q}",
            mesh.n
        )));
    }
    let r_max = mesh.max_xi();
    let mut truncations = Vec::with_capacity(TRUNCATION_STEPS);
    for k in 1..=TRUNCATION_STEPS {
        let radius = if k == TRUNCATION_STEPS {
            r_max
        } else {
            r_max * k as f64 / TRUNCATION_STEPS as f64
        };
        truncations.push((radius, stc_within(mesh, q, radius)?));
    }
    let value = truncations[TRUNCATION_STEPS - 1].1;
    let prev = truncations[TRUNCATION_STEPS - 2].1;
    Ok(WeightedNormEstimate {
        q,
        s: -1.0,
        value,
        truncation_r: r_max,
        tail_flag: value - prev > TAIL_TOLERANCE * value,
        truncations,
    })
}

/// Strong total curvature restricted to the intrinsic ball `ξ ≤ radius`.
pub fn strong_total_curvature_within(mesh: &FermiMesh, q: f64, radius: f64) -> Result<f64> {
    if !(q > mesh.n as f64) {
        return Err(Error::domain(format!(
            "strong total curvature needs q > n = {}, got {q}",
            mesh.n
        )));
    }
    stc_within(mesh, q, radius)
}

/// Rescales the intrinsic metric by `c²`: lengths and `ξ` by `c`, weights
/// by `cⁿ`, `|A|` by `1/c`, `|∇|A||` by `1/c²`.
pub fn dilation_transform(mesh: &FermiMesh, c: f64) -> Result<FermiMesh> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("dilation factor c = {c} must be positive")));
    }
    let cn = c.powi(mesh.n as i32);
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        v.xi *= c;
        v.weight *= cn;
        v.shape_norm /= c;
        v.grad_shape_norm /= c * c;
    }
    for e in &mut out.edges {
        e.length *= c;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshSpec {
    pub n: usize,
    pub r: usize,
    pub d: f64,
    /// Extent of the profile rows beyond the singular end, or half-width.
    pub rho_extent: f64,
    pub orbit_radius: f64,
    /// Profile samples per sheet.
    pub rows: usize,
    /// Orbit samples on `[0, orbit_radius]`.
    pub columns: usize,
    /// Half-graph base point.
    pub base_point: f64,
    pub quadrature: QuadratureConfig,
}

impl MeshSpec {
    pub fn new(n: usize, r: usize, d: f64) -> Self {
        Self {
            n,
            r,
            d,
            rho_extent: 8.0,
            orbit_radius: 4.0,
            rows: 512,
            columns: 64,
            base_point: 1.0,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// `|S^k|`.
fn sphere_area(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI / (k as f64 - 1.0) * sphere_area(k - 2),
    }
}

fn orbit_cell_volume(n: usize, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let m = n - 2;
    let radial = match m {
        0 => hi - lo,
        1 => hi.cosh() - lo.cosh(),
        _ => integrate(|s: f64| s.sinh().powi(m as i32), lo, hi, cfg)?.require_converged("orbit cell")?,
    };
    Ok(sphere_area(m) * radial)
}

/// Ball point with Fermi coordinates `(ρ, σ)` over the hyperplane
/// `x_n = 0`, orbit direction `e_1`.
fn fermi_point(n: usize, rho: f64, sigma: f64, t: f64) -> Result<BallPoint> {
    let mut foot = vec![0.0; n];
    foot[0] = (0.5 * sigma).tanh();
    let mut offset = vec![0.0; n];
    offset[n - 1] = (0.5 * rho).tanh();
    BallPoint::new(mobius_add(&foot, &offset), t)
}

/// Samples `(n, r, d)` on a profile × radial-orbit grid.
///
/// Two-sheet members include both sheets: rows run down the lower sheet
/// and back up the upper one, joined across the waist. The base vertex is
/// the row closest to the base hyperplane (the upper waist row for two
/// sheets) at `σ = 0`.
pub fn build_fermi_mesh(spec: &MeshSpec) -> Result<FermiMesh> {
    let MeshSpec {
        n, r, d, rows, columns, ..
    } = *spec;
    if rows < 2 || columns < 2 {
        return Err(Error::invalid(format!("degenerate mesh resolution {rows}x{columns}")));
    }
    if !(spec.orbit_radius > 0.0 && spec.orbit_radius.is_finite()) {
        return Err(Error::invalid("orbit radius must be positive"));
    }
    let regime = classify_regime(n, r, d)?;
    let grid = profile_grid(n, r, d, if rows < 3 { 3 } else { rows }, spec.rho_extent)?;
    let opts = ProfileOptions {
        base_point: spec.base_point,
        quadrature: spec.quadrature,
        ..Default::default()
    };
    let curve = sample_profile(n, r, d, &grid, &opts)?;
    // profile rows as (ρ, t)
    let mut prof: Vec<(f64, f64)> = Vec::new();
    if regime == Regime::TwoSheets {
        prof.extend(curve.samples.iter().rev().map(|s| (s.rho, -s.lambda)));
    }
    prof.extend(curve.samples.iter().map(|s| (s.rho, s.lambda)));
    let base_row = if regime == Regime::TwoSheets {
        curve.samples.len()
    } else {
        prof.iter()
            .enumerate()
            .min_by(|x, y| x.1 .0.abs().total_cmp(&y.1 .0.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    };
    let nrows = prof.len();
    let chord = |i: usize| {
        let (r0, t0) = prof[i];
        let (r1, t1) = prof[i + 1];
        (r1 - r0).hypot(t1 - t0)
    };
    let chords: Vec<f64> = (0..nrows - 1).map(chord).collect();
    if chords.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::invalid(
            "profile rows coincide; increase the extent or lower the resolution",
        ));
    }
    let dsigma = spec.orbit_radius / (columns - 1) as f64;
    let sigmas: Vec<f64> = (0..columns).map(|j| j as f64 * dsigma).collect();
    let mut orbit_cells = Vec::with_capacity(columns);
    for j in 0..columns {
        let lo = (sigmas[j] - 0.5 * dsigma).max(0.0);
        let hi = (sigmas[j] + 0.5 * dsigma).min(spec.orbit_radius);
        orbit_cells.push(orbit_cell_volume(n, lo, hi, &spec.quadrature)?);
    }
    let idx = |i: usize, j: usize| i * columns + j;
    let mut vertices = Vec::with_capacity(nrows * columns);
    for (i, &(rho, t)) in prof.iter().enumerate() {
        let ell = 0.5 * (if i > 0 { chords[i - 1] } else { 0.0 } + if i + 1 < nrows { chords[i] } else { 0.0 });
        let a_norm = family_shape_norm(n, r, d, rho)?;
        let grad = family_shape_norm_gradient(n, r, d, rho)?;
        let stretch = rho.cosh().powi(n as i32 - 1);
        for j in 0..columns {
            vertices.push(MeshVertex {
                point: fermi_point(n, rho, sigmas[j], t)?,
                rho,
                sigma: sigmas[j],
                shape_norm: a_norm,
                grad_shape_norm: grad,
                xi: 0.0,
                weight: stretch * ell * orbit_cells[j],
            });
        }
    }
    let mut edges = Vec::new();
    for i in 0..nrows {
        let ch = prof[i].0.cosh();
        for j in 0..columns {
            if j + 1 < columns {
                edges.push(MeshEdge {
                    a: idx(i, j),
                    b: idx(i, j + 1),
                    length: ch * dsigma,
                });
            }
            if i + 1 < nrows {
                let cm = (0.5 * (prof[i].0 + prof[i + 1].0)).cosh();
                edges.push(MeshEdge {
                    a: idx(i, j),
                    b: idx(i + 1, j),
                    length: chords[i],
                });
                if j + 1 < columns {
                    let diag = chords[i].hypot(cm * dsigma);
                    edges.push(MeshEdge {
                        a: idx(i, j),
                        b: idx(i + 1, j + 1),
                        length: diag,
                    });
                    edges.push(MeshEdge {
                        a: idx(i, j + 1),
                        b: idx(i + 1, j),
                        length: diag,
                    });
                }
            }
        }
    }
    let base = idx(base_row, 0);
    let xi = shortest_paths(vertices.len(), &edges, base);
    for (v, x) in vertices.iter_mut().zip(xi) {
        v.xi = x;
    }
    FermiMesh::from_parts(n, vertices, edges, Some(base), Some((nrows, columns)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    /// Intrinsic radius `R` (arclength from the waist).
    pub radius: f64,
    /// Profile distance at which the arclength reaches `R`.
    pub rho: f64,
    /// `sup_{s ≥ R} |A|²`.
    pub sup_shape_norm_sq: f64,
    /// `R² sup_{s ≥ R} |A|²`.
    pub value: f64,
}

const DECAY_SAMPLES: usize = 400;
const DECAY_SPAN: f64 = 40.0;

/// `R² · sup |A|²` beyond intrinsic distance `R` from the waist, for each
/// `R` in `radii`.
pub fn decay_check(n: usize, r: usize, d: f64, radii: &[f64], cfg: &QuadratureConfig) -> Result<Vec<DecayPoint>> {
    if !radii.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::invalid("radii must be strictly increasing"));
    }
    if radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(Error::invalid("radii must be finite and nonnegative"));
    }
    match classify_regime(n, r, d)? {
        Regime::Slice => {
            return Ok(radii
                .iter()
                .map(|&radius| DecayPoint {
                    radius,
                    rho: radius,
                    sup_shape_norm_sq: 0.0,
                    value: 0.0,
                })
                .collect())
        }
        Regime::TwoSheets => {}
        other => {
            return Err(Error::domain(format!(
                "decay check is defined for two-sheet members and slices, not {other:?}"
            )))
        }
    }
    let a = waist(n, r, d)?;
    let mut out = Vec::with_capacity(radii.len());
    for &radius in radii {
        // arclength ≥ ρ − a, so the crossing lies in [a, a + R]
        let (mut lo, mut hi) = (a, a + radius);
        for _ in 0..200 {
            if hi - lo <= 1e-13 * (1.0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if arclength_two_sheets(n, r, d, mid, cfg)? < radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rho = hi;
        let mut sup: f64 = 0.0;
        for k in 0..DECAY_SAMPLES {
            let t = k as f64 / (DECAY_SAMPLES - 1) as f64;
            let s = rho + DECAY_SPAN * t * t;
            sup = sup.max(family_shape_norm(n, r, d, s)?.powi(2));
        }
        out.push(DecayPoint {
            radius,
            rho,
            sup_shape_norm_sq: sup,
            value: radius * radius * sup,
        });
    }
    Ok(out)
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the vertex table: a `# n=… rows=… columns=… base=…` line, then
/// `rho,sigma,x_1..x_n,t,shape_norm,grad_shape_norm,xi,weight`.
pub fn write_vertices_csv<W: Write>(mesh: &FermiMesh, mut out: W) -> Result<()> {
    let (rows, cols) = mesh.grid.map_or((String::from("-"), String::from("-")), |(r, c)| {
        (r.to_string(), c.to_string())
    });
    let base = mesh.base.map_or(String::from("-"), |b| b.to_string());
    writeln!(out, "# n={} rows={rows} columns={cols} base={base}", mesh.n)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["rho".to_string(), "sigma".to_string()];
    header.extend((1..=mesh.n).map(|i| format!("x_{i}")));
    header.extend(["t", "shape_norm", "grad_shape_norm", "xi", "weight"].map(String::from));
    w.write_record(&header)?;
    for v in &mesh.vertices {
        let mut rec = vec![fmt(v.rho), fmt(v.sigma)];
        rec.extend(v.point.x().iter().map(|c| fmt(*c)));
        rec.extend([v.point.t(), v.shape_norm, v.grad_shape_norm, v.xi, v.weight].map(fmt));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `a,b,length` rows.
pub fn write_edges_csv<W: Write>(mesh: &FermiMesh, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "length"])?;
    for e in &mesh.edges {
        w.write_record([e.a.to_string(), e.b.to_string(), fmt(e.length)])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_header_value(line: &str, key: &str) -> Result<Option<usize>> {
    let needle = format!("{key}=");
    let raw = line
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(&needle))
        .ok_or_else(|| Error::invalid(format!("mesh header lacks `{key}`")))?;
    if raw == "-" {
        return Ok(None);
    }
    raw.parse()
        .map(Some)
        .map_err(|_| Error::invalid(format!("mesh header has a bad `{key}` value")))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("not a number: {s:?}")))
}

/// Reads a mesh written by [`write_vertices_csv`] and [`write_edges_csv`].
pub fn read_mesh_csv<R1: Read, R2: Read>(mut vertices: R1, edges: R2) -> Result<FermiMesh> {
    let mut text = String::new();
    vertices.read_to_string(&mut text)?;
    let (first, rest) = text
        .split_once('\n')
        .ok_or_else(|| Error::invalid("empty vertex table"))?;
    if !first.starts_with('#') {
        return Err(Error::invalid("vertex table must start with a `# n=` line"));
    }
    let n = parse_header_value(first, "n")?.ok_or_else(|| Error::invalid("mesh header lacks n"))?;
    let rows = parse_header_value(first, "rows")?;
    let cols = parse_header_value(first, "columns")?;
    let base = parse_header_value(first, "base")?;
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let mut verts = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != n + 7 {
            return Err(Error::invalid(format!(
                "vertex row has {} fields, expected {}",
                rec.len(),
                n + 7
            )));
        }
        let vals = rec.iter().map(parse_f64).collect::<Result<Vec<_>>>()?;
        verts.push(MeshVertex {
            point: BallPoint::new(vals[2..2 + n].to_vec(), vals[2 + n])?,
            rho: vals[0],
            sigma: vals[1],
            shape_norm: vals[3 + n],
            grad_shape_norm: vals[4 + n],
            xi: vals[5 + n],
            weight: vals[6 + n],
        });
    }
    let mut rdr = csv::Reader::from_reader(edges);
    let mut edge_list = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(Error::invalid("edge row must have 3 fields"));
        }
        let a = rec[0].trim().parse().map_err(|_| Error::invalid("bad edge index"))?;
        let b = rec[1].trim().parse().map_err(|_| Error::invalid("bad edge index"))?;
        edge_list.push(MeshEdge {
            a,
            b,
            length: parse_f64(&rec[2])?,
        });
    }
    let grid = match (rows, cols) {
        (Some(r), Some(c)) => Some((r, c)),
        _ => None,
    };
    FermiMesh::from_parts(n, verts, edge_list, base, grid)
}
