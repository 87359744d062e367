//! Sweeps of two-sheet barriers toward finite point sets.
//!
//! A barrier is a two-sheet member `(n, r, d)` built over an oriented base
//! hyperplane `Π`: its sheets `t = ±λ(δ)` sit on the positive side at
//! distances `δ ≥ a` from `Π`, and the region `V_d` between them is
//! `{δ ≥ a, |τ| < λ(δ)}`. Translating along the normal geodesic of `Π`
//! moves the barrier; a sweep decreases the offset `s` toward the resting
//! position and reports the first contact with the target, if any.

use serde::{Deserialize, Serialize};

use crate::ambient::{
    mobius_add, signed_distance_to_hyperplane, AdmissibleCollection, BallPoint, BoundaryCap, GeodesicLine, Hyperplane,
};
use crate::height::height;
use crate::profile::{classify_regime, profile_grid, profile_two_sheets, waist, Regime};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

pub const DEFAULT_CONTACT_TOL: f64 = 1e-6;
const ORTHOGONALITY_TOL: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normal geodesic of `plane` through its foot point, oriented along the
/// plane's normal.
pub fn normal_geodesic(plane: &Hyperplane) -> Result<GeodesicLine> {
    let foot = plane.foot_point();
    let u = plane.foot_normal();
    let neg_u: Vec<f64> = u.iter().map(|v| -v).collect();
    GeodesicLine::new(mobius_add(&foot, &neg_u), mobius_add(&foot, &u))
}

/// Checks that `line` crosses `plane` orthogonally.
fn check_orthogonal(plane: &Hyperplane, line: &GeodesicLine) -> Result<()> {
    let dist = |s: f64| plane_distance_raw(plane, &line.point_at(s));
    let (mut lo, mut hi) = (-12.0, 12.0);
    let (dlo, dhi) = (dist(lo), dist(hi));
    if dlo.signum() == dhi.signum() {
        return Err(Error::invalid("sweep geodesic does not cross the base hyperplane"));
    }
    let rising = dhi > dlo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (dist(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = line.point_at(0.5 * (lo + hi));
    let neg_p: Vec<f64> = p.iter().map(|v| -v).collect();
    let dir = mobius_add(&neg_p, line.end());
    let len = dot(&dir, &dir).sqrt();
    let centered = plane.translated_to_origin(&p)?;
    let normal = centered.foot_normal();
    let cos = dot(&dir, &normal).abs() / len;
    if (1.0 - cos).abs() > ORTHOGONALITY_TOL {
        return Err(Error::invalid(format!(
            "sweep geodesic is not orthogonal to the base hyperplane (|cos| = {cos})"
        )));
    }
    Ok(())
}

fn plane_distance_raw(plane: &Hyperplane, x: &[f64]) -> f64 {
    match BallPoint::new(x.to_vec(), 0.0) {
        Ok(p) => signed_distance_to_hyperplane(&p, plane),
        Err(_) => f64::NAN,
    }
}

impl Hyperplane {
    /// Image under the Möbius translation `x ↦ (−p) ⊕ x`.
    fn translated_to_origin(&self, p: &[f64]) -> Result<Hyperplane> {
        let neg_p: Vec<f64> = p.iter().map(|v| -v).collect();
        let foot = self.foot_point();
        let tip = mobius_add(&foot, &self.foot_normal());
        let foot_img = mobius_add(&neg_p, &foot);
        let tip_img = mobius_add(&neg_p, &tip);
        let back: Vec<f64> = foot_img.iter().map(|v| -v).collect();
        let dir = mobius_add(&back, &tip_img);
        Hyperplane::from_point_normal(&foot_img, &dir)
    }
}

/// A two-sheet barrier with its sweep geodesic and current offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedBarrier {
    n: usize,
    r: usize,
    d: f64,
    a: f64,
    h: f64,
    base: Hyperplane,
    geodesic: GeodesicLine,
    s: f64,
    t: f64,
    current: Hyperplane,
    cfg: QuadratureConfig,
}

impl PlacedBarrier {
    pub fn new(
        n: usize,
        r: usize,
        d: f64,
        base: Hyperplane,
        geodesic: GeodesicLine,
        s: f64,
        t: f64,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        if classify_regime(n, r, d)? != Regime::TwoSheets {
            return Err(Error::domain(format!(
                "barriers need a two-sheet member (d > 1, r < n), got d = {d}"
            )));
        }
        if base.dim() != n || geodesic.dim() != n {
            return Err(Error::invalid(
                "barrier hyperplane and geodesic must live in dimension n",
            ));
        }
        if !(s.is_finite() && t.is_finite()) {
            return Err(Error::invalid("barrier offsets must be finite"));
        }
        check_orthogonal(&base, &geodesic)?;
        let a = waist(n, r, d)?;
        let h = height(n, r, d, &cfg)?.h;
        let current = base.translated(&geodesic, s)?;
        Ok(Self {
            n,
            r,
            d,
            a,
            h,
            base,
            geodesic,
            s,
            t,
            current,
            cfg,
        })
    }

    /// The barrier over `plane`, swept along its normal geodesic.
    pub fn canonical(
        n: usize,
        r: usize,
        d: f64,
        plane: Hyperplane,
        s: f64,
        t: f64,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        let geodesic = normal_geodesic(&plane)?;
        Self::new(n, r, d, plane, geodesic, s, t, cfg)
    }

    pub fn with_offsets(&self, s: f64, t: f64) -> Result<Self> {
        let current = if s == self.s {
            self.current.clone()
        } else {
            self.base.translated(&self.geodesic, s)?
        };
        Ok(Self {
            s,
            t,
            current,
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Waist distance `a`.
    pub fn waist(&self) -> f64 {
        self.a
    }

    /// Half-height `h_r(d)`.
    pub fn half_height(&self) -> f64 {
        self.h
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn base(&self) -> &Hyperplane {
        &self.base
    }

    pub fn geodesic(&self) -> &GeodesicLine {
        &self.geodesic
    }

    /// The translated base hyperplane `Π_s`.
    pub fn current_plane(&self) -> &Hyperplane {
        &self.current
    }

    /// Points of the barrier: both sheets over a profile grid starting at
    /// the waist, at orbit distances `orbit` along a fixed direction in
    /// `Π_s`.
    pub fn sample_points(&self, rows: usize, orbit: &[f64]) -> Result<Vec<BallPoint>> {
        let mut rhos = vec![self.a];
        rhos.extend(profile_grid(self.n, self.r, self.d, rows.max(3), 8.0)?);
        let foot = self.current.foot_point();
        let u = self.current.foot_normal();
        let e = perpendicular(&u);
        let mut out = Vec::new();
        for &rho in &rhos {
            let lam = profile_two_sheets(self.n, self.r, self.d, rho, &self.cfg)?;
            for &sigma in orbit {
                let along: Vec<f64> = e.iter().map(|c| c * (0.5 * sigma).tanh()).collect();
                let off: Vec<f64> = u.iter().map(|c| c * (0.5 * rho).tanh()).collect();
                let x = mobius_add(&foot, &mobius_add(&along, &off));
                for sign in [1.0, -1.0] {
                    out.push(BallPoint::new(x.clone(), self.t + sign * lam)?);
                }
            }
        }
        Ok(out)
    }
}

fn perpendicular(u: &[f64]) -> Vec<f64> {
    // Gram–Schmidt on the basis vector least aligned with u
    let k = (0..u.len())
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap_or(0);
    let mut e = vec![0.0; u.len()];
    e[k] = 1.0;
    let c = dot(&e, u);
    for (ei, ui) in e.iter_mut().zip(u) {
        *ei -= c * ui;
    }
    let len = dot(&e, &e).sqrt();
    e.iter().map(|v| v / len).collect()
}

/// Signed gap of `p` to the barrier: negative inside `V_d`, positive
/// outside, zero on the sheets.
///
/// With `δ` the signed distance to `Π_s` and `τ = t − t_offset`, the gap is
/// `|τ| − λ(δ)` for `δ ≥ a` and the Fermi-chart distance `√((a − δ)² + τ²)`
/// to the waist otherwise.
pub fn barrier_classify(barrier: &PlacedBarrier, p: &BallPoint) -> Result<f64> {
    if p.dim() != barrier.n {
        return Err(Error::invalid("point and barrier dimensions differ"));
    }
    let delta = signed_distance_to_hyperplane(p, &barrier.current);
    let tau = p.t() - barrier.t;
    if delta < barrier.a {
        return Ok((barrier.a - delta).hypot(tau));
    }
    let lam = profile_two_sheets(barrier.n, barrier.r, barrier.d, delta, &barrier.cfg)?;
    Ok(tau.abs() - lam)
}

/// A finite target with an optional boundary subset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub points: Vec<BallPoint>,
    pub boundary: Vec<bool>,
}

impl Target {
    pub fn new(points: Vec<BallPoint>) -> Self {
        let boundary = vec![false; points.len()];
        Self { points, boundary }
    }

    pub fn with_boundary(points: Vec<BallPoint>, boundary: Vec<bool>) -> Result<Self> {
        if points.len() != boundary.len() {
            return Err(Error::invalid("boundary flags do not match the point count"));
        }
        Ok(Self { points, boundary })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Reads `x_1,…,x_n,t[,boundary]` rows after a header line.
    pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let has_flag = headers.iter().next_back().is_some_and(|h| h.trim() == "boundary");
        let coords = headers.len() - usize::from(has_flag);
        if coords < 3 {
            return Err(Error::invalid("target rows need at least x_1, x_2 and t"));
        }
        let mut points = Vec::new();
        let mut boundary = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .take(coords)
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::invalid(format!("not a number: {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(BallPoint::new(vals[..coords - 1].to_vec(), vals[coords - 1])?);
            boundary.push(if has_flag {
                match rec.get(coords).map(str::trim) {
                    Some("1") | Some("true") => true,
                    Some("0") | Some("false") | Some("") | None => false,
                    Some(other) => return Err(Error::invalid(format!("bad boundary flag {other:?}"))),
                }
            } else {
                false
            });
        }
        Ok(Self { points, boundary })
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let n = self.points.first().map_or(2, |p| p.dim());
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=n).map(|i| format!("x_{i}")).collect();
        header.push("t".into());
        header.push("boundary".into());
        w.write_record(&header)?;
        for (p, b) in self.points.iter().zip(&self.boundary) {
            let mut rec: Vec<String> = p.x().iter().map(|v| format!("{v:.16e}")).collect();
            rec.push(format!("{:.16e}", p.t()));
            rec.push(if *b { "1".into() } else { "0".into() });
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub s: f64,
    pub t: f64,
    pub d: f64,
    pub witness: BallPoint,
    pub witness_index: usize,
    pub boundary: bool,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    /// The schedule ended before the resting position without contact.
    NoContact,
    FirstContact(Contact),
    /// The barrier reached the end of a schedule that finishes at the
    /// resting position without touching the target.
    Containment,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub s: f64,
    pub t: f64,
    pub min_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub verdict: Verdict,
    pub trace: Vec<TracePoint>,
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn min_gap(barrier: &PlacedBarrier, target: &Target) -> Result<(f64, usize)> {
    let mut best = (f64::INFINITY, 0);
    for (i, p) in target.points.iter().enumerate() {
        let g = barrier_classify(barrier, p)?;
        if g < best.0 {
            best = (g, i);
        }
    }
    Ok(best)
}

fn check_tol(contact_tol: f64) -> Result<()> {
    if !(contact_tol > 0.0 && contact_tol.is_finite()) {
        return Err(Error::invalid("contact tolerance must be positive"));
    }
    Ok(())
}

/// Runs a sweep over `schedule`, with `place(v)` positioning the barrier
/// for schedule value `v`.
fn run_schedule<F>(
    target: &Target,
    schedule: &[f64],
    contact_tol: f64,
    place: F,
) -> Result<(Option<Contact>, Vec<TracePoint>)>
where
    F: Fn(f64) -> Result<PlacedBarrier>,
{
    check_tol(contact_tol)?;
    if schedule.is_empty() {
        return Err(Error::invalid("sweep schedule is empty"));
    }
    let mut trace = Vec::with_capacity(schedule.len());
    let mut prev: Option<f64> = None;
    for &v in schedule {
        let barrier = place(v)?;
        let (g, idx) = min_gap(&barrier, target)?;
        trace.push(TracePoint {
            s: barrier.s,
            t: barrier.t,
            min_gap: g,
        });
        if prev.is_none() && g < contact_tol {
            return Err(Error::StartNotDisjoint {
                gap: g,
                tol: contact_tol,
            });
        }
        if g < contact_tol {
            let contact = if g >= 0.0 {
                contact_at(&barrier, target, idx, g)
            } else {
                refine(target, prev.unwrap_or(v), v, contact_tol, &place)?
            };
            return Ok((Some(contact), trace));
        }
        prev = Some(v);
    }
    Ok((None, trace))
}

fn contact_at(barrier: &PlacedBarrier, target: &Target, idx: usize, gap: f64) -> Contact {
    Contact {
        s: barrier.s,
        t: barrier.t,
        d: barrier.d,
        witness: target.points[idx].clone(),
        witness_index: idx,
        boundary: target.boundary.get(idx).copied().unwrap_or(false),
        gap,
    }
}

/// Bisects between a disjoint placement `clear` and an overlapping one
/// `hit` until the minimum gap lands in `[0, contact_tol)`.
fn refine<F>(target: &Target, clear: f64, hit: f64, contact_tol: f64, place: &F) -> Result<Contact>
where
    F: Fn(f64) -> Result<PlacedBarrier>,
{
    let (mut good, mut bad) = (clear, hit);
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        let barrier = place(mid)?;
        let (g, idx) = min_gap(&barrier, target)?;
        if (0.0..contact_tol).contains(&g) {
            return Ok(contact_at(&barrier, target, idx, g));
        }
        if g >= contact_tol {
            good = mid;
        } else {
            bad = mid;
        }
        if good == mid && bad == mid {
            break;
        }
    }
    let barrier = place(good)?;
    let (g, idx) = min_gap(&barrier, target)?;
    Err(Error::NonConvergence {
        what: format!("contact refinement (witness {idx})"),
        value: g,
        error_estimate: (good - bad).abs(),
    })
}

/// Sweeps the barrier over `plane` (on its positive side when `side > 0`,
/// otherwise on the flipped side) along the plane's normal geodesic through
/// its foot point, over the strictly decreasing offsets `s_schedule` at
/// vertical offset `t`.
pub fn sweep(
    target: &Target,
    plane: &Hyperplane,
    side: f64,
    n: usize,
    r: usize,
    d: f64,
    s_schedule: &[f64],
    t: f64,
    contact_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<SweepReport> {
    let oriented = if side < 0.0 { plane.flipped() } else { plane.clone() };
    let geodesic = normal_geodesic(&oriented)?;
    sweep_along(target, &oriented, &geodesic, n, r, d, s_schedule, t, contact_tol, cfg)
}

/// As [`sweep`], translating along a caller-chosen geodesic orthogonal to
/// `plane`; the barrier sits on the side the geodesic's end points to.
pub fn sweep_along(
    target: &Target,
    plane: &Hyperplane,
    geodesic: &GeodesicLine,
    n: usize,
    r: usize,
    d: f64,
    s_schedule: &[f64],
    t: f64,
    contact_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<SweepReport> {
    if !s_schedule.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::invalid("s schedule must be strictly decreasing"));
    }
    if s_schedule.last().is_some_and(|s| *s < 0.0) {
        return Err(Error::invalid("s schedule must stay nonnegative"));
    }
    let start = s_schedule.first().copied().unwrap_or(0.0);
    let resting = PlacedBarrier::new(n, r, d, plane.clone(), geodesic.clone(), start, t, *cfg)?;
    if target.is_empty() {
        let trace = s_schedule
            .iter()
            .map(|&s| TracePoint {
                s,
                t,
                min_gap: f64::INFINITY,
            })
            .collect();
        return Ok(SweepReport {
            verdict: Verdict::Containment,
            trace,
        });
    }
    let (contact, trace) = run_schedule(target, s_schedule, contact_tol, |s| resting.with_offsets(s, t))?;
    let verdict = match contact {
        Some(c) => Verdict::FirstContact(c),
        None if s_schedule.last() == Some(&0.0) => Verdict::Containment,
        None => Verdict::NoContact,
    };
    Ok(SweepReport { verdict, trace })
}

/// Moves the barrier vertically through `t_schedule` at fixed offset `s`.
/// No contact along the whole schedule is reported as containment.
pub fn vertical_sweep(
    target: &Target,
    plane: &Hyperplane,
    n: usize,
    r: usize,
    d: f64,
    s: f64,
    t_schedule: &[f64],
    contact_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<SweepReport> {
    let monotone = t_schedule.windows(2).all(|w| w[1] > w[0]) || t_schedule.windows(2).all(|w| w[1] < w[0]);
    if !monotone {
        return Err(Error::invalid("t schedule must be strictly monotone"));
    }
    let barrier = PlacedBarrier::canonical(
        n,
        r,
        d,
        plane.clone(),
        s,
        t_schedule.first().copied().unwrap_or(0.0),
        *cfg,
    )?;
    if target.is_empty() {
        let trace = t_schedule
            .iter()
            .map(|&t| TracePoint {
                s,
                t,
                min_gap: f64::INFINITY,
            })
            .collect();
        return Ok(SweepReport {
            verdict: Verdict::Containment,
            trace,
        });
    }
    let (contact, trace) = run_schedule(target, t_schedule, contact_tol, |t| barrier.with_offsets(s, t))?;
    let verdict = match contact {
        Some(c) => Verdict::FirstContact(c),
        None => Verdict::Containment,
    };
    Ok(SweepReport { verdict, trace })
}

/// Whether the barrier side of `probe` lies strictly beyond one of the
/// collection's hyperplanes, which puts it outside the region `P`.
pub fn has_property_p(probe: &Hyperplane, collection: &AdmissibleCollection) -> bool {
    let cap = probe.ideal_caps().0;
    collection.caps().iter().any(|c| cap.is_strictly_within(c))
}

/// The hyperplane whose positive side meets the unit sphere in `cap`.
pub fn hyperplane_from_cap(cap: &BoundaryCap) -> Result<Hyperplane> {
    let beta = cap.angular_radius;
    if !(beta > 0.0 && beta < std::f64::consts::PI) {
        return Err(Error::invalid("cap radius must lie in (0, pi)"));
    }
    let len = dot(&cap.center, &cap.center).sqrt();
    let u: Vec<f64> = cap.center.iter().map(|v| v / len).collect();
    if (beta - std::f64::consts::FRAC_PI_2).abs() < 1e-14 {
        return Hyperplane::through_origin(&u);
    }
    let center: Vec<f64> = u.iter().map(|v| v / beta.cos()).collect();
    let radius = beta.tan().abs();
    // for β > π/2 the cap is the outside of a sphere centered at −u
    Hyperplane::general(center, radius, beta < std::f64::consts::FRAC_PI_2)
}

/// Probe hyperplanes with caps nested inside each collection cap:
/// `per_cap` concentric caps and their tilts toward a perpendicular
/// direction.
pub fn probe_fan(collection: &AdmissibleCollection, per_cap: usize) -> Result<Vec<Hyperplane>> {
    let mut out = Vec::new();
    for cap in collection.caps() {
        let alpha = cap.angular_radius;
        let len = dot(&cap.center, &cap.center).sqrt();
        let c: Vec<f64> = cap.center.iter().map(|v| v / len).collect();
        let e = perpendicular(&c);
        for k in 1..=per_cap {
            let beta = alpha * k as f64 / (per_cap + 1) as f64;
            out.push(hyperplane_from_cap(&BoundaryCap {
                center: c.clone(),
                angular_radius: beta,
            })?);
            let tilt = 0.5 * (alpha - beta);
            for sign in [1.0, -1.0] {
                let center: Vec<f64> = c
                    .iter()
                    .zip(&e)
                    .map(|(ci, ei)| ci * tilt.cos() + sign * ei * tilt.sin())
                    .collect();
                out.push(hyperplane_from_cap(&BoundaryCap {
                    center,
                    angular_radius: beta,
                })?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub probe: Hyperplane,
    pub property_p: bool,
    pub reports: Vec<(f64, f64, SweepReport)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CertificateVerdict {
    /// Every admissible probe sweep ended in containment. This is evidence,
    /// not proof: only finitely many probes, barriers and heights are tried.
    ConsistentWithContainment,
    Counterexample {
        probe_index: usize,
        contact: Contact,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceCertificate {
    pub verdict: CertificateVerdict,
    pub probes: Vec<ProbeOutcome>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateConfig {
    /// Barrier parameters, decreasing toward 1.
    pub d_schedule: Vec<f64>,
    pub s_schedule: Vec<f64>,
    pub t_values: Vec<f64>,
    pub contact_tol: f64,
    pub quadrature: QuadratureConfig,
}

fn in_region_closure(collection: &AdmissibleCollection, p: &BallPoint) -> bool {
    collection
        .hyperplanes()
        .iter()
        .enumerate()
        .all(|(j, plane)| collection.cap_side(j) * signed_distance_to_hyperplane(p, plane) <= 1e-9)
}

/// Sweeps barriers over every probe with property (P) and aggregates the
/// verdicts; probes without the property are recorded but skipped.
pub fn halfspace_certificate(
    target: &Target,
    collection: &AdmissibleCollection,
    probes: &[Hyperplane],
    n: usize,
    r: usize,
    cfg: &CertificateConfig,
) -> Result<HalfspaceCertificate> {
    if !cfg.d_schedule.windows(2).all(|w| w[1] < w[0]) || cfg.d_schedule.iter().any(|d| *d <= 1.0) {
        return Err(Error::invalid("d schedule must decrease strictly and stay above 1"));
    }
    if probes.is_empty() {
        return Err(Error::invalid("no probe hyperplanes supplied"));
    }
    for (i, p) in target.points.iter().enumerate() {
        if target.boundary[i] && !in_region_closure(collection, p) {
            return Err(Error::invalid(format!(
                "boundary point {i} lies outside the admissible region"
            )));
        }
    }
    let mut outcomes = Vec::with_capacity(probes.len());
    let mut verdict = CertificateVerdict::ConsistentWithContainment;
    for (k, probe) in probes.iter().enumerate() {
        let property_p = has_property_p(probe, collection);
        let mut reports = Vec::new();
        if property_p {
            'outer: for &d in &cfg.d_schedule {
                for &t in &cfg.t_values {
                    let rep = sweep(
                        target,
                        probe,
                        1.0,
                        n,
                        r,
                        d,
                        &cfg.s_schedule,
                        t,
                        cfg.contact_tol,
                        &cfg.quadrature,
                    )?;
                    let hit = match &rep.verdict {
                        Verdict::FirstContact(c) => Some(c.clone()),
                        _ => None,
                    };
                    reports.push((d, t, rep));
                    if let Some(contact) = hit {
                        if verdict == CertificateVerdict::ConsistentWithContainment {
                            verdict = CertificateVerdict::Counterexample {
                                probe_index: k,
                                contact,
                            };
                        }
                        break 'outer;
                    }
                }
            }
        }
        outcomes.push(ProbeOutcome {
            probe: probe.clone(),
            property_p,
            reports,
        });
    }
    Ok(HalfspaceCertificate {
        verdict,
        probes: outcomes,
    })
}

/// A ready-to-run sweep problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub n: usize,
    pub r: usize,
    pub d: f64,
    pub plane: Hyperplane,
    pub target: Target,
    pub s_schedule: Vec<f64>,
    pub t: f64,
}

fn fixture_schedule() -> Vec<f64> {
    (0..=120).rev().map(|k| k as f64 * 0.05).collect()
}

/// Points of the vertical hyperplane at distance 1 behind `x_n = 0`,
/// swept by a barrier on the positive side: always contained.
pub fn containment_fixture(n: usize) -> Result<Fixture> {
    if n < 2 {
        return Err(Error::domain("fixtures need n >= 2"));
    }
    let mut e = vec![0.0; n];
    e[n - 1] = 1.0;
    let plane = Hyperplane::through_origin(&e)?;
    let behind = Hyperplane::orthogonal_to_diameter(&e, -1.0)?;
    let foot = behind.foot_point();
    let mut points = Vec::new();
    let mut boundary = Vec::new();
    for (k, sigma) in [0.0f64, 0.5, 1.0, 2.0].iter().enumerate() {
        let mut dir = vec![0.0; n];
        dir[0] = (0.5 * sigma).tanh();
        let x = mobius_add(&foot, &dir);
        for t in [-1.5, -0.5, 0.0, 0.5, 1.5] {
            points.push(BallPoint::new(x.clone(), t)?);
            boundary.push(k == 3);
        }
    }
    Ok(Fixture {
        n,
        r: 1,
        d: 2.0,
        plane,
        target: Target::with_boundary(points, boundary)?,
        s_schedule: fixture_schedule(),
        t: 0.0,
    })
}

/// The containment fixture plus one point at distance `3a` on the barrier
/// side, first touched at `s = 2a`.
pub fn violation_fixture(n: usize) -> Result<Fixture> {
    let mut fx = containment_fixture(n)?;
    let a = waist(fx.n, fx.r, fx.d)?;
    let mut e = vec![0.0; n];
    e[n - 1] = 1.0;
    fx.target.points.push(BallPoint::from_polar(&e, 3.0 * a, 0.0)?);
    fx.target.boundary.push(false);
    Ok(fx)
}

impl Fixture {
    pub fn run(&self, contact_tol: f64, cfg: &QuadratureConfig) -> Result<SweepReport> {
        sweep(
            &self.target,
            &self.plane,
            1.0,
            self.n,
            self.r,
            self.d,
            &self.s_schedule,
            self.t,
            contact_tol,
            cfg,
        )
    }
}
