//! Python module `hnr`: heights, profiles, curvatures, meshes and barrier
//! sweeps from `hnr-core`.

use std::fs::File;
use std::io::BufReader;

use hnr_core::ambient::{self, BallPoint, Hyperplane as CoreHyperplane};
use hnr_core::barrier::{self, SweepReport as CoreSweepReport, Verdict, DEFAULT_CONTACT_TOL};
use hnr_core::quadrature::QuadratureConfig;
use hnr_core::{curvature, height, profile, stc, Error};
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_parameter_error() {
        PyValueError::new_err(e.to_string())
    } else if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyIOError::new_err(e.to_string())
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for hnr_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Name of the regime of `(n, r, d)`.
#[pyfunction]
fn classify_regime(n: usize, r: usize, d: f64) -> PyResult<String> {
    Ok(format!("{:?}", profile::classify_regime(n, r, d).py()?))
}

/// Waist distance `a` of a two-sheet member, `cosh a = d^{r/(n-r)}`.
#[pyfunction]
fn waist(n: usize, r: usize, d: f64) -> PyResult<f64> {
    profile::waist(n, r, d).py()
}

#[pyfunction]
fn d_from_waist(n: usize, r: usize, a: f64) -> PyResult<f64> {
    profile::d_from_waist(n, r, a).py()
}

#[pyfunction]
fn lambda_dot(n: usize, r: usize, d: f64, rho: f64) -> PyResult<f64> {
    profile::lambda_dot(n, r, d, rho).py()
}

#[pyfunction]
fn first_integral(n: usize, r: usize, rho: f64, lambda_dot: f64) -> f64 {
    profile::first_integral(n, r, rho, lambda_dot)
}

#[pyclass(get_all, frozen)]
#[derive(Clone)]
struct HeightResult {
    n: usize,
    r: usize,
    d: f64,
    a: f64,
    h: f64,
    total_height: f64,
    error_estimate: f64,
}

#[pymethods]
impl HeightResult {
    fn __repr__(&self) -> String {
        format!("HeightResult(n={}, r={}, a={}, h={})", self.n, self.r, self.a, self.h)
    }
}

impl From<height::HeightResult> for HeightResult {
    fn from(h: height::HeightResult) -> Self {
        Self {
            n: h.n,
            r: h.r,
            d: h.d,
            a: h.a,
            h: h.h,
            total_height: h.total_height(),
            error_estimate: h.error_estimate,
        }
    }
}

/// Half-height `h_r` from either `d > 1` or the waist `a > 0`.
#[pyfunction]
#[pyo3(signature = (n, r, d=None, a=None))]
fn height_of(n: usize, r: usize, d: Option<f64>, a: Option<f64>) -> PyResult<HeightResult> {
    let res = match (d, a) {
        (Some(d), None) => height::height(n, r, d, &cfg()),
        (None, Some(a)) => height::height_from_a(n, r, a, &cfg()),
        _ => return Err(PyValueError::new_err("pass exactly one of d or a")),
    };
    Ok(res.py()?.into())
}

#[pyfunction]
fn height_derivative(n: usize, r: usize, a: f64) -> PyResult<f64> {
    height::height_derivative(n, r, a, &cfg()).py()
}

#[pyfunction]
fn height_limit(n: usize, r: usize) -> PyResult<f64> {
    height::height_limit(n, r).py()
}

#[pyfunction]
fn slab_obstruction(n: usize, r: usize, slab_height: f64) -> PyResult<bool> {
    height::slab_obstruction(n, r, slab_height).py()
}

/// Sampled profile curve with its curvature data, one list per column.
#[pyclass(get_all, frozen)]
struct Profile {
    n: usize,
    r: usize,
    d: f64,
    regime: String,
    rho: Vec<f64>,
    lam: Vec<f64>,
    lambda_dot: Vec<f64>,
    lambda_ddot: Vec<f64>,
    kappa1: Vec<f64>,
    kappa2: Vec<f64>,
    /// `h[j - 1][i]` is `H_j` at sample `i`.
    h: Vec<Vec<f64>>,
    shape_norm: Vec<f64>,
    n_vertical: Vec<f64>,
    residual: f64,
}

#[pymethods]
impl Profile {
    fn __len__(&self) -> usize {
        self.rho.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(n={}, r={}, d={}, regime={}, samples={})",
            self.n,
            self.r,
            self.d,
            self.regime,
            self.rho.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, r, d, samples=profile::DEFAULT_SAMPLES, extent=profile::DEFAULT_EXTENT, c=0.0))]
fn sample_profile(n: usize, r: usize, d: f64, samples: usize, extent: f64, c: f64) -> PyResult<Profile> {
    let grid = profile::profile_grid(n, r, d, samples, extent).py()?;
    let opts = profile::ProfileOptions {
        c,
        ..Default::default()
    };
    let curve = profile::sample_profile(n, r, d, &grid, &opts).py()?;
    let curv = curvature::curvature_along(&curve).py()?;
    let residual = curvature::hr_ode_residual(&curve).py()?;
    let col = |f: fn(&profile::ProfileSample) -> f64| curve.samples.iter().map(f).collect::<Vec<_>>();
    Ok(Profile {
        n,
        r,
        d,
        regime: format!("{:?}", curve.regime),
        rho: col(|s| s.rho),
        lam: col(|s| s.lambda),
        lambda_dot: col(|s| s.lambda_dot),
        lambda_ddot: col(|s| s.lambda_ddot),
        kappa1: curv.iter().map(|s| s.kappa1).collect(),
        kappa2: curv.iter().map(|s| s.kappa2).collect(),
        h: (0..n).map(|j| curv.iter().map(|s| s.h[j]).collect()).collect(),
        shape_norm: curv.iter().map(|s| s.shape_norm).collect(),
        n_vertical: curv.iter().map(|s| s.n_vertical).collect(),
        residual,
    })
}

/// Closed-form `(kappa1, kappa2)` on the positive branch.
#[pyfunction]
fn family_curvatures(n: usize, r: usize, d: f64, rho: f64) -> PyResult<(f64, f64)> {
    curvature::family_curvatures(n, r, d, rho).py()
}

#[pyfunction]
fn mean_curvature_j(n: usize, j: usize, kappa1: f64, kappa2: f64) -> PyResult<f64> {
    curvature::mean_curvature_j(n, j, kappa1, kappa2).py()
}

#[pyfunction]
fn normal_vertical_component(lambda_dot: f64) -> f64 {
    curvature::normal_vertical_component(lambda_dot)
}

/// `(radius, rho, sup |A|^2, R^2 sup |A|^2)` per radius.
#[pyfunction]
#[pyo3(signature = (n, r, d, radii=vec![2.0, 4.0, 6.0, 8.0, 10.0]))]
fn decay_check(n: usize, r: usize, d: f64, radii: Vec<f64>) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let pts = stc::decay_check(n, r, d, &radii, &cfg()).py()?;
    Ok(pts
        .iter()
        .map(|p| (p.radius, p.rho, p.sup_shape_norm_sq, p.value))
        .collect())
}

/// Christoffel symbols at `x`, indexed `[k][i][j]` over `0..=n`.
#[pyfunction]
fn christoffel(x: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
    let g = ambient::christoffel(&BallPoint::new(x, 0.0).py()?);
    let dim = g.dim();
    Ok((0..dim)
        .map(|k| (0..dim).map(|i| (0..dim).map(|j| g.get(k, i, j)).collect()).collect())
        .collect())
}

#[pyfunction]
fn hyp_distance(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    Ok(ambient::hyp_distance(
        &BallPoint::new(x, 0.0).py()?,
        &BallPoint::new(y, 0.0).py()?,
    ))
}

/// Totally geodesic hyperplane of the ball.
#[pyclass(frozen)]
#[derive(Clone)]
struct Hyperplane {
    inner: CoreHyperplane,
}

#[pymethods]
impl Hyperplane {
    /// Orthogonal to the diameter along `direction`, at signed distance `offset`.
    #[new]
    #[pyo3(signature = (direction, offset=0.0))]
    fn new(direction: Vec<f64>, offset: f64) -> PyResult<Self> {
        Ok(Self {
            inner: CoreHyperplane::orthogonal_to_diameter(&direction, offset).py()?,
        })
    }

    fn signed_distance(&self, x: Vec<f64>) -> PyResult<f64> {
        Ok(ambient::signed_distance_to_hyperplane(
            &BallPoint::new(x, 0.0).py()?,
            &self.inner,
        ))
    }

    fn flipped(&self) -> Self {
        Self {
            inner: self.inner.flipped(),
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Discretised hypersurface in Fermi coordinates.
#[pyclass]
struct Mesh {
    inner: stc::FermiMesh,
}

#[pymethods]
impl Mesh {
    #[staticmethod]
    #[pyo3(signature = (n, r, d, rows=128, columns=16))]
    fn generate(n: usize, r: usize, d: f64, rows: usize, columns: usize) -> PyResult<Self> {
        let spec = stc::MeshSpec {
            rows,
            columns,
            ..stc::MeshSpec::new(n, r, d)
        };
        Ok(Self {
            inner: stc::build_fermi_mesh(&spec).py()?,
        })
    }

    #[staticmethod]
    fn read_csv(vertices: &str, edges: &str) -> PyResult<Self> {
        let v = File::open(vertices).map_err(|e| PyIOError::new_err(e.to_string()))?;
        let e = File::open(edges).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(Self {
            inner: stc::read_mesh_csv(BufReader::new(v), BufReader::new(e)).py()?,
        })
    }

    fn write_csv(&self, vertices: &str, edges: &str) -> PyResult<()> {
        let v = File::create(vertices).map_err(|e| PyIOError::new_err(e.to_string()))?;
        let e = File::create(edges).map_err(|e| PyIOError::new_err(e.to_string()))?;
        stc::write_vertices_csv(&self.inner, v).py()?;
        stc::write_edges_csv(&self.inner, e).py()
    }

    /// The `W^{1,q}_{-1}` norm of `|A|`, `q > n`.
    fn strong_total_curvature(&self, q: f64) -> PyResult<f64> {
        Ok(stc::strong_total_curvature(&self.inner, q).py()?.value)
    }

    fn dilated(&self, c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: stc::dilation_transform(&self.inner, c).py()?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(get_all, frozen)]
struct SweepReport {
    /// `"Containment"`, `"NoContact"` or `"FirstContact"`.
    verdict: String,
    contact_s: Option<f64>,
    contact_gap: Option<f64>,
    witness_index: Option<usize>,
    /// `(s, t, min_gap)` per schedule step.
    trace: Vec<(f64, f64, f64)>,
    json: String,
}

impl SweepReport {
    fn from_core(rep: &CoreSweepReport) -> PyResult<Self> {
        let (verdict, contact) = match &rep.verdict {
            Verdict::NoContact => ("NoContact", None),
            Verdict::Containment => ("Containment", None),
            Verdict::FirstContact(c) => ("FirstContact", Some(c)),
        };
        Ok(Self {
            verdict: verdict.into(),
            contact_s: contact.map(|c| c.s),
            contact_gap: contact.map(|c| c.gap),
            witness_index: contact.map(|c| c.witness_index),
            trace: rep.trace.iter().map(|p| (p.s, p.t, p.min_gap)).collect(),
            json: rep.to_json().py()?,
        })
    }
}

/// Runs the bundled `"containment"` or `"violation"` sweep problem.
#[pyfunction]
#[pyo3(signature = (name, n=3, contact_tol=DEFAULT_CONTACT_TOL))]
fn run_fixture(name: &str, n: usize, contact_tol: f64) -> PyResult<SweepReport> {
    let fx = match name {
        "containment" => barrier::containment_fixture(n),
        "violation" => barrier::violation_fixture(n),
        other => return Err(PyValueError::new_err(format!("unknown fixture {other:?}"))),
    }
    .py()?;
    SweepReport::from_core(&fx.run(contact_tol, &cfg()).py()?)
}

/// Sweeps an `(n, r, d)` barrier toward `points` (each `x_1..x_n, t`) from
/// the positive side of `plane`, over the decreasing offsets `s_schedule`.
#[pyfunction]
#[pyo3(signature = (points, plane, r, d, s_schedule, t=0.0, contact_tol=DEFAULT_CONTACT_TOL))]
fn sweep(
    points: Vec<Vec<f64>>,
    plane: &Hyperplane,
    r: usize,
    d: f64,
    s_schedule: Vec<f64>,
    t: f64,
    contact_tol: f64,
) -> PyResult<SweepReport> {
    let n = plane.inner.dim();
    let pts = points
        .into_iter()
        .map(|mut p| {
            if p.len() != n + 1 {
                return Err(PyValueError::new_err(format!("points need {} coordinates", n + 1)));
            }
            let t = p.pop().unwrap_or(0.0);
            BallPoint::new(p, t).py()
        })
        .collect::<PyResult<Vec<_>>>()?;
    let target = barrier::Target::new(pts);
    let rep = barrier::sweep(&target, &plane.inner, 1.0, n, r, d, &s_schedule, t, contact_tol, &cfg()).py()?;
    SweepReport::from_core(&rep)
}

#[pymodule]
fn hnr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<HeightResult>()?;
    m.add_class::<Profile>()?;
    m.add_class::<Hyperplane>()?;
    m.add_class::<Mesh>()?;
    m.add_class::<SweepReport>()?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(waist, m)?)?;
    m.add_function(wrap_pyfunction!(d_from_waist, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_dot, m)?)?;
    m.add_function(wrap_pyfunction!(first_integral, m)?)?;
    m.add_function(wrap_pyfunction!(height_of, m)?)?;
    m.add_function(wrap_pyfunction!(height_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(height_limit, m)?)?;
    m.add_function(wrap_pyfunction!(slab_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(sample_profile, m)?)?;
    m.add_function(wrap_pyfunction!(family_curvatures, m)?)?;
    m.add_function(wrap_pyfunction!(mean_curvature_j, m)?)?;
    m.add_function(wrap_pyfunction!(normal_vertical_component, m)?)?;
    m.add_function(wrap_pyfunction!(decay_check, m)?)?;
    m.add_function(wrap_pyfunction!(christoffel, m)?)?;
    m.add_function(wrap_pyfunction!(hyp_distance, m)?)?;
    m.add_function(wrap_pyfunction!(run_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
