//! Ball-model geometry of ℍⁿ×ℝ.
//!
//! Points are `(x, t)` with `x` in the open unit ball of ℝⁿ and `t` the
//! vertical coordinate. The metric is `|dx|²/F² + dt²` with conformal factor
//! `F = (1 − |x|²)/2`. Hyperbolic isometries are built from Möbius
//! addition, which realises every hyperbolic translation along a diameter
//! and, after conjugation, along any geodesic.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Points with `|x| > 1 − BOUNDARY_GUARD` are rejected.
pub const BOUNDARY_GUARD: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

fn unit(a: &[f64]) -> Result<Vec<f64>> {
    let len = norm_sq(a).sqrt();
    if !(len.is_finite() && len > 0.0) {
        return Err(Error::invalid("direction vector must be finite and nonzero"));
    }
    Ok(scaled(a, 1.0 / len))
}

/// Möbius addition `a ⊕ x` in the unit ball.
///
/// `x ↦ a ⊕ x` is the hyperbolic translation along the diameter through `a`
/// that sends the origin to `a`. It extends continuously to unit vectors,
/// which it maps to unit vectors. `(−a) ⊕ (a ⊕ x) = x`.
pub fn mobius_add(a: &[f64], x: &[f64]) -> Vec<f64> {
    let ax = dot(a, x);
    let aa = norm_sq(a);
    let xx = norm_sq(x);
    let num_a = 1.0 + 2.0 * ax + xx;
    let num_x = 1.0 - aa;
    let den = 1.0 + 2.0 * ax + aa * xx;
    a.iter()
        .zip(x)
        .map(|(ai, xi)| (num_a * ai + num_x * xi) / den)
        .collect()
}

fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|v| -v).collect()
}

/// A point of ℍⁿ×ℝ in ball coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    x: Vec<f64>,
    t: f64,
}

impl BallPoint {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("ball point needs at least one horizontal coordinate"));
        }
        if !(x.iter().all(|v| v.is_finite()) && t.is_finite()) {
            return Err(Error::invalid("ball point coordinates must be finite"));
        }
        let r = norm_sq(&x).sqrt();
        if r > 1.0 - BOUNDARY_GUARD {
            return Err(Error::domain(format!(
                "|x| = {r} is not inside the ball (guard 1 - {BOUNDARY_GUARD:e})"
            )));
        }
        Ok(Self { x, t })
    }

    pub fn origin(n: usize) -> Self {
        Self {
            x: vec![0.0; n],
            t: 0.0,
        }
    }

    /// Point at hyperbolic distance `|rho|` from the origin along the unit
    /// direction `dir` (negative `rho` goes the other way), at height `t`.
    pub fn from_polar(dir: &[f64], rho: f64, t: f64) -> Result<Self> {
        let u = unit(dir)?;
        Self::new(scaled(&u, ball_radius(rho)), t)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Dimension `n` of the hyperbolic factor.
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x_norm_sq(&self) -> f64 {
        norm_sq(&self.x)
    }

    pub fn with_height(&self, t: f64) -> Self {
        Self { x: self.x.clone(), t }
    }
}

/// A tangent vector of ℍⁿ×ℝ, components in the canonical basis
/// `e_1 … e_{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientVector {
    base: BallPoint,
    v: Vec<f64>,
}

impl AmbientVector {
    pub fn new(base: BallPoint, v: Vec<f64>) -> Result<Self> {
        if v.len() != base.dim() + 1 {
            return Err(Error::invalid(format!(
                "tangent vector has {} components, expected {}",
                v.len(),
                base.dim() + 1
            )));
        }
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("tangent vector components must be finite"));
        }
        Ok(Self { base, v })
    }

    /// Basis vector `e_{k+1}` (zero-based `k`, `k = n` is vertical) at `base`.
    pub fn basis(base: BallPoint, k: usize) -> Result<Self> {
        let mut v = vec![0.0; base.dim() + 1];
        if k >= v.len() {
            return Err(Error::invalid(format!("basis index {k} out of range")));
        }
        v[k] = 1.0;
        Self::new(base, v)
    }

    pub fn base(&self) -> &BallPoint {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.v
    }

    pub fn horizontal(&self) -> &[f64] {
        &self.v[..self.base.dim()]
    }

    pub fn vertical(&self) -> f64 {
        self.v[self.base.dim()]
    }
}

/// `F(p) = (1 − |x|²)/2`, in `(0, 1/2]`.
pub fn conformal_factor(p: &BallPoint) -> f64 {
    0.5 * (1.0 - p.x_norm_sq())
}

/// Ambient inner product `Σ v_i w_i / F² + v_{n+1} w_{n+1}`.
pub fn ambient_inner(v: &AmbientVector, w: &AmbientVector) -> Result<f64> {
    if v.base != w.base {
        return Err(Error::invalid("tangent vectors are based at different points"));
    }
    let f = conformal_factor(&v.base);
    Ok(dot(v.horizontal(), w.horizontal()) / (f * f) + v.vertical() * w.vertical())
}

/// Ambient norm next to the Euclidean norm of the same components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormComparison {
    pub ambient: f64,
    pub euclidean: f64,
}

pub fn norm_comparison(v: &AmbientVector) -> NormComparison {
    let f = conformal_factor(&v.base);
    let h = norm_sq(v.horizontal());
    let vert = v.vertical() * v.vertical();
    NormComparison {
        ambient: (h / (f * f) + vert).sqrt(),
        euclidean: (h + vert).sqrt(),
    }
}

/// Christoffel symbols `Γ^k_{ij}` of the product metric, indices zero-based
/// over `0..=n` with `n` the vertical direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    /// Total dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_{ij}`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }
}

/// Closed-form Christoffel symbols at `p`:
/// `Γ^k_{ij} = (δ_ik x_j + δ_jk x_i − δ_ij x_k)/F` for horizontal indices,
/// zero whenever an index is vertical.
pub fn christoffel(p: &BallPoint) -> Christoffel {
    let n = p.dim();
    let dim = n + 1;
    let f = conformal_factor(p);
    let x = p.x();
    let mut data = vec![0.0; dim * dim * dim];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut g = 0.0;
                if i == k {
                    g += x[j];
                }
                if j == k {
                    g += x[i];
                }
                if i == j {
                    g -= x[k];
                }
                data[(k * dim + i) * dim + j] = g / f;
            }
        }
    }
    Christoffel { dim, data }
}

/// `L(p) = (1 + |x|²)/(1 − |x|²) ≥ 1`.
pub fn position_factor(p: &BallPoint) -> f64 {
    let s = p.x_norm_sq();
    (1.0 + s) / (1.0 - s)
}

/// Covariant derivative of the position field `X` in direction `T`:
/// horizontal part scaled by `L`, vertical part unchanged.
pub fn covariant_derivative_position(t: &AmbientVector) -> AmbientVector {
    let l = position_factor(&t.base);
    let n = t.base.dim();
    let v =
        t.v.iter()
            .enumerate()
            .map(|(k, c)| if k < n { l * c } else { *c })
            .collect();
    AmbientVector {
        base: t.base.clone(),
        v,
    }
}

/// Hyperbolic distance from the horizontal part of `p` to the origin.
pub fn hyp_distance_origin(p: &BallPoint) -> f64 {
    2.0 * p.x_norm_sq().sqrt().atanh()
}

/// Euclidean radius of the ball point at hyperbolic distance `rho` from the
/// origin.
pub fn ball_radius(rho: f64) -> f64 {
    (0.5 * rho).tanh()
}

/// Hyperbolic distance between the horizontal parts of two points.
pub fn hyp_distance(p: &BallPoint, q: &BallPoint) -> f64 {
    let diff: f64 = p.x.iter().zip(&q.x).map(|(a, b)| (a - b) * (a - b)).sum();
    let den = (1.0 - p.x_norm_sq()) * (1.0 - q.x_norm_sq());
    (1.0 + 2.0 * diff / den).acosh()
}

/// A complete geodesic of ℍⁿ, stored by its ordered ideal endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLine {
    start: Vec<f64>,
    end: Vec<f64>,
}

impl GeodesicLine {
    pub fn new(start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if start.len() != end.len() {
            return Err(Error::invalid("geodesic endpoints have different dimensions"));
        }
        let start = unit(&start)?;
        let end = unit(&end)?;
        let gap: f64 = start.iter().zip(&end).map(|(a, b)| (a - b) * (a - b)).sum();
        if gap.sqrt() < 1e-12 {
            return Err(Error::invalid("geodesic endpoints must be distinct"));
        }
        Ok(Self { start, end })
    }

    /// The diameter from `−dir` to `dir`.
    pub fn through_origin(dir: &[f64]) -> Result<Self> {
        let u = unit(dir)?;
        Ok(Self { start: neg(&u), end: u })
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn end(&self) -> &[f64] {
        &self.end
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    /// Point of the geodesic closest to the origin.
    pub fn closest_point_to_origin(&self) -> Vec<f64> {
        // half-angle θ between the endpoints: sin θ = |u1 − u2|/2
        let half_chord = 0.5
            * self
                .start
                .iter()
                .zip(&self.end)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
        let scale = 0.5 / (1.0 + half_chord);
        self.start.iter().zip(&self.end).map(|(a, b)| (a + b) * scale).collect()
    }

    /// Applies the signed translation of length `s` toward `end` to a raw
    /// ball vector (unit vectors allowed).
    fn translate_raw(&self, x: &[f64], s: f64) -> Vec<f64> {
        let m = self.closest_point_to_origin();
        let neg_m = neg(&m);
        let e = mobius_add(&neg_m, &self.end);
        let e_len = norm_sq(&e).sqrt();
        let shift = scaled(&e, ball_radius(s) / e_len);
        let y = mobius_add(&neg_m, x);
        let y = mobius_add(&shift, &y);
        mobius_add(&m, &y)
    }

    /// Point at signed distance `s` from the closest point to the origin.
    pub fn point_at(&self, s: f64) -> Vec<f64> {
        self.translate_raw(&self.closest_point_to_origin(), s)
    }

    /// Image of this geodesic under the translation of length `s` along
    /// `line`; the orientation is carried along.
    pub fn translated(&self, line: &GeodesicLine, s: f64) -> Result<GeodesicLine> {
        GeodesicLine::new(line.translate_raw(&self.start, s), line.translate_raw(&self.end, s))
    }
}

/// Hyperbolic translation of signed length `s` along `line` (toward its
/// `end`), applied slice-wise: the height is unchanged.
pub fn translate_along_geodesic(p: &BallPoint, line: &GeodesicLine, s: f64) -> Result<BallPoint> {
    if line.dim() != p.dim() {
        return Err(Error::invalid("geodesic and point dimensions differ"));
    }
    if s == 0.0 {
        return Ok(p.clone());
    }
    BallPoint::new(line.translate_raw(&p.x, s), p.t)
}

/// A totally geodesic hyperplane of ℍⁿ.
///
/// `General` is the part inside the ball of a sphere orthogonal to the unit
/// sphere (`|c|² − r² = 1`). Signed distances are positive on the side the
/// oriented normal points to; for `General` that is the inside of the sphere
/// when `positive_inside` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Hyperplane {
    ThroughOrigin {
        normal: Vec<f64>,
    },
    General {
        center: Vec<f64>,
        radius: f64,
        positive_inside: bool,
    },
}

impl Hyperplane {
    pub fn through_origin(normal: &[f64]) -> Result<Self> {
        Ok(Hyperplane::ThroughOrigin { normal: unit(normal)? })
    }

    pub fn general(center: Vec<f64>, radius: f64, positive_inside: bool) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("sphere radius must be positive"));
        }
        let c2 = norm_sq(&center);
        if ((c2 - radius * radius) - 1.0).abs() > 1e-9 * (1.0 + c2) {
            return Err(Error::invalid(format!(
                "sphere is not orthogonal to the unit sphere: |c|^2 - r^2 = {}",
                c2 - radius * radius
            )));
        }
        if center.len() < 2 {
            return Err(Error::invalid("hyperplanes need n >= 2"));
        }
        Ok(Hyperplane::General {
            center,
            radius,
            positive_inside,
        })
    }

    /// Hyperplane through `x` whose oriented normal at `x` is `normal`.
    pub fn from_point_normal(x: &[f64], normal: &[f64]) -> Result<Self> {
        let w = unit(normal)?;
        if x.len() != w.len() {
            return Err(Error::invalid("point and normal dimensions differ"));
        }
        let xw = dot(x, &w);
        let xx = norm_sq(x);
        if xx >= 1.0 {
            return Err(Error::domain("hyperplane anchor must lie inside the ball"));
        }
        if xw.abs() <= 1e-15 {
            return Ok(Hyperplane::ThroughOrigin { normal: w });
        }
        let kappa = (1.0 - xx) / (2.0 * xw);
        let center: Vec<f64> = x.iter().zip(&w).map(|(a, b)| a + kappa * b).collect();
        Ok(Hyperplane::General {
            center,
            radius: kappa.abs(),
            positive_inside: kappa > 0.0,
        })
    }

    /// Hyperplane orthogonal to the diameter along `dir` at signed distance
    /// `offset` from the origin, oriented along `dir`.
    pub fn orthogonal_to_diameter(dir: &[f64], offset: f64) -> Result<Self> {
        let e = unit(dir)?;
        Self::from_point_normal(&scaled(&e, ball_radius(offset)), &e)
    }

    pub fn dim(&self) -> usize {
        match self {
            Hyperplane::ThroughOrigin { normal } => normal.len(),
            Hyperplane::General { center, .. } => center.len(),
        }
    }

    /// Point of the hyperplane closest to the origin.
    pub fn foot_point(&self) -> Vec<f64> {
        match self {
            Hyperplane::ThroughOrigin { normal } => vec![0.0; normal.len()],
            Hyperplane::General { center, radius, .. } => {
                let c = norm_sq(center).sqrt();
                scaled(center, (c - radius) / c)
            }
        }
    }

    /// Oriented unit normal at the foot point.
    pub fn foot_normal(&self) -> Vec<f64> {
        match self {
            Hyperplane::ThroughOrigin { normal } => normal.clone(),
            Hyperplane::General {
                center,
                positive_inside,
                ..
            } => {
                let c = norm_sq(center).sqrt();
                let s = if *positive_inside { 1.0 } else { -1.0 };
                scaled(center, s / c)
            }
        }
    }

    /// Signed distance from the origin to the hyperplane's foot point,
    /// measured along the oriented normal.
    pub fn foot_offset(&self) -> f64 {
        let f = self.foot_point();
        let r = norm_sq(&f).sqrt();
        let along = dot(&f, &self.foot_normal());
        2.0 * r.atanh() * along.signum_or_zero()
    }

    pub fn flipped(&self) -> Self {
        match self {
            Hyperplane::ThroughOrigin { normal } => Hyperplane::ThroughOrigin { normal: neg(normal) },
            Hyperplane::General {
                center,
                radius,
                positive_inside,
            } => Hyperplane::General {
                center: center.clone(),
                radius: *radius,
                positive_inside: !positive_inside,
            },
        }
    }

    fn signed_distance_raw(&self, x: &[f64]) -> f64 {
        let foot = self.foot_point();
        let u = self.foot_normal();
        let y = match self {
            Hyperplane::ThroughOrigin { .. } => x.to_vec(),
            Hyperplane::General { .. } => mobius_add(&neg(&foot), x),
        };
        (2.0 * dot(&y, &u) / (1.0 - norm_sq(&y))).asinh()
    }

    /// `+1` if the ideal point `omega` lies on the positive side, `−1` if on
    /// the negative side, `0` on the ideal boundary sphere (to 1e-12).
    pub fn ideal_side(&self, omega: &[f64]) -> f64 {
        let v = match self {
            Hyperplane::ThroughOrigin { normal } => dot(omega, normal),
            Hyperplane::General {
                center,
                radius,
                positive_inside,
            } => {
                let d2: f64 = omega.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                let inside = radius * radius - d2;
                if *positive_inside {
                    inside
                } else {
                    -inside
                }
            }
        };
        if v.abs() <= 1e-12 {
            0.0
        } else {
            v.signum()
        }
    }

    /// The two caps of the unit sphere bounded by the ideal boundary,
    /// `(positive side, negative side)`.
    pub fn ideal_caps(&self) -> (BoundaryCap, BoundaryCap) {
        match self {
            Hyperplane::ThroughOrigin { normal } => (
                BoundaryCap {
                    center: normal.clone(),
                    angular_radius: std::f64::consts::FRAC_PI_2,
                },
                BoundaryCap {
                    center: neg(normal),
                    angular_radius: std::f64::consts::FRAC_PI_2,
                },
            ),
            Hyperplane::General {
                center,
                positive_inside,
                ..
            } => {
                let c = norm_sq(center).sqrt();
                let u = scaled(center, 1.0 / c);
                let alpha = (1.0 / c).acos();
                let inside = BoundaryCap {
                    center: u.clone(),
                    angular_radius: alpha,
                };
                let outside = BoundaryCap {
                    center: neg(&u),
                    angular_radius: std::f64::consts::PI - alpha,
                };
                if *positive_inside {
                    (inside, outside)
                } else {
                    (outside, inside)
                }
            }
        }
    }

    /// Image of the hyperplane under the translation of length `s` along
    /// `line`.
    pub fn translated(&self, line: &GeodesicLine, s: f64) -> Result<Self> {
        let foot = self.foot_point();
        let normal = self.foot_normal();
        // ideal endpoint of the normal geodesic through the foot point
        let tip = mobius_add(&foot, &normal);
        let foot_img = line.translate_raw(&foot, s);
        let tip_img = line.translate_raw(&tip, s);
        let dir = mobius_add(&neg(&foot_img), &tip_img);
        Self::from_point_normal(&foot_img, &dir)
    }
}

/// `Π × ℝ`, a complete totally geodesic vertical hypersurface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticalHyperplane {
    pub base: Hyperplane,
}

impl VerticalHyperplane {
    pub fn new(base: Hyperplane) -> Self {
        Self { base }
    }

    /// Signed distance from `p` to `Π × ℝ`; the height plays no role.
    pub fn signed_distance(&self, p: &BallPoint) -> f64 {
        signed_distance_to_hyperplane(p, &self.base)
    }
}

/// Height coordinate of a point of the ideal boundary of ℍⁿ×ℝ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IdealHeight {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

/// A point at infinity: a unit direction of `∂_∞ℍⁿ` with a height.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    direction: Vec<f64>,
    height: IdealHeight,
}

impl BoundaryPoint {
    pub fn new(direction: &[f64], height: IdealHeight) -> Result<Self> {
        if let IdealHeight::Finite(t) = height {
            if !t.is_finite() {
                return Err(Error::invalid("finite ideal height must be a finite number"));
            }
        }
        Ok(Self {
            direction: unit(direction)?,
            height,
        })
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn height(&self) -> IdealHeight {
        self.height
    }
}

trait SignumOrZero {
    fn signum_or_zero(self) -> f64;
}

impl SignumOrZero for f64 {
    fn signum_or_zero(self) -> f64 {
        if self == 0.0 {
            0.0
        } else {
            self.signum()
        }
    }
}

/// Signed hyperbolic distance from the horizontal part of `p` to `plane`.
pub fn signed_distance_to_hyperplane(p: &BallPoint, plane: &Hyperplane) -> f64 {
    plane.signed_distance_raw(&p.x)
}

/// Membership in the open ρ-cylinder `C_ρ` of `plane`: the points whose
/// distance to `plane × ℝ` is below `rho`.
pub fn rho_cylinder_contains(plane: &Hyperplane, rho: f64, p: &BallPoint) -> Result<bool> {
    if !(rho > 0.0) {
        return Err(Error::domain("cylinder radius must be positive"));
    }
    Ok(signed_distance_to_hyperplane(p, plane).abs() < rho)
}

/// An open cap of the unit sphere `∂_∞ℍⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCap {
    pub center: Vec<f64>,
    pub angular_radius: f64,
}

impl BoundaryCap {
    fn angle_to(&self, omega: &[f64]) -> f64 {
        let c = dot(&self.center, omega) / (norm_sq(omega).sqrt() * norm_sq(&self.center).sqrt());
        c.clamp(-1.0, 1.0).acos()
    }

    pub fn contains(&self, omega: &[f64]) -> bool {
        self.angle_to(omega) < self.angular_radius
    }

    /// Open caps are disjoint iff the angle between centers is at least the
    /// sum of the radii.
    pub fn is_disjoint(&self, other: &BoundaryCap) -> bool {
        self.angle_to(&other.center) >= self.angular_radius + other.angular_radius - 1e-12
    }

    /// Closure of `self` lies inside the open cap `other`.
    pub fn is_strictly_within(&self, other: &BoundaryCap) -> bool {
        other.angle_to(&self.center) + self.angular_radius < other.angular_radius
    }

    fn matches(&self, other: &BoundaryCap) -> bool {
        (self.angular_radius - other.angular_radius).abs() < 1e-9
            && self.center.iter().zip(&other.center).all(|(a, b)| (a - b).abs() < 1e-9)
    }
}

/// True iff every cap is bounded by the ideal sphere of its hyperplane and
/// the caps are pairwise disjoint.
pub fn admissible_check(hyperplanes: &[Hyperplane], caps: &[BoundaryCap]) -> Result<bool> {
    if hyperplanes.len() != caps.len() {
        return Err(Error::invalid("one cap per hyperplane is required"));
    }
    for (i, (plane, cap)) in hyperplanes.iter().zip(caps).enumerate() {
        let (pos, negc) = plane.ideal_caps();
        if !(cap.matches(&pos) || cap.matches(&negc)) {
            return Err(Error::invalid(format!(
                "cap {i} is not bounded by the ideal sphere of hyperplane {i}"
            )));
        }
    }
    for i in 0..caps.len() {
        for j in (i + 1)..caps.len() {
            if !caps[i].is_disjoint(&caps[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Hyperplanes with pairwise disjoint boundary caps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleCollection {
    hyperplanes: Vec<Hyperplane>,
    caps: Vec<BoundaryCap>,
}

impl AdmissibleCollection {
    pub fn new(hyperplanes: Vec<Hyperplane>, caps: Vec<BoundaryCap>) -> Result<Self> {
        if hyperplanes.is_empty() {
            return Err(Error::invalid("collection needs at least one hyperplane"));
        }
        if !admissible_check(&hyperplanes, &caps)? {
            return Err(Error::NotAdmissible("boundary caps overlap".into()));
        }
        Ok(Self { hyperplanes, caps })
    }

    /// Uses, for every hyperplane, the cap on its positive side.
    pub fn from_positive_caps(hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let caps = hyperplanes.iter().map(|h| h.ideal_caps().0).collect();
        Self::new(hyperplanes, caps)
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn caps(&self) -> &[BoundaryCap] {
        &self.caps
    }

    /// `−1` or `+1`: sign of the signed distance to hyperplane `j` on the
    /// side of its cap.
    pub fn cap_side(&self, j: usize) -> f64 {
        self.hyperplanes[j].ideal_side(&self.caps[j].center)
    }
}

/// Membership in `P(Π_1, …, Π_k)`: the intersection over `j` of the open
/// halfspaces of `Π_j × ℝ` away from cap `j`.
pub fn region_p_contains(collection: &AdmissibleCollection, p: &BallPoint) -> bool {
    collection
        .hyperplanes
        .iter()
        .enumerate()
        .all(|(j, plane)| collection.cap_side(j) * signed_distance_to_hyperplane(p, plane) < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: &[f64]) -> BallPoint {
        BallPoint::new(x.to_vec(), 0.0).unwrap()
    }

    #[test]
    fn conformal_factor_values() {
        assert_eq!(conformal_factor(&BallPoint::origin(3)), 0.5);
        assert_relative_eq!(conformal_factor(&p(&[0.5, 0.0, 0.0])), 3.0 / 8.0);
        let mut prev = 0.5;
        for k in 1..100 {
            let f = conformal_factor(&p(&[k as f64 / 100.0, 0.0]));
            assert!(f < prev && f > 0.0);
            prev = f;
        }
    }

    #[test]
    fn rejects_ideal_points() {
        assert!(BallPoint::new(vec![1.0, 0.0], 0.0).is_err());
        assert!(BallPoint::new(vec![1.0 - 1e-13, 0.0], 0.0).is_err());
        assert!(BallPoint::new(vec![0.999, 0.0], 0.0).is_ok());
        assert!(BallPoint::new(vec![f64::NAN], 0.0).is_err());
    }

    #[test]
    fn inner_product_basics() {
        let o = BallPoint::origin(2);
        let e1 = AmbientVector::basis(o.clone(), 0).unwrap();
        assert_relative_eq!(ambient_inner(&e1, &e1).unwrap(), 4.0);
        let q = p(&[0.3, -0.5]);
        let e3 = AmbientVector::basis(q.clone(), 2).unwrap();
        assert_eq!(ambient_inner(&e3, &e3).unwrap(), 1.0);
        let other = AmbientVector::basis(o, 2).unwrap();
        assert!(ambient_inner(&e3, &other).is_err());
    }

    #[test]
    fn christoffel_closed_form() {
        let g = christoffel(&BallPoint::origin(3));
        assert!(g.data.iter().all(|v| *v == 0.0));
        let g = christoffel(&p(&[0.5, 0.0, 0.0]));
        assert_relative_eq!(g.get(0, 0, 0), 4.0 / 3.0, epsilon = 1e-15);
        let q = p(&[0.1, -0.2, 0.3]);
        let g = christoffel(&q);
        let f = conformal_factor(&q);
        let x = q.x();
        // i = 0, j = 2
        assert_relative_eq!(g.get(0, 0, 2), x[2] / f);
        assert_relative_eq!(g.get(2, 0, 0), -x[2] / f);
        assert_relative_eq!(g.get(2, 0, 2), x[0] / f);
        assert_relative_eq!(g.get(0, 0, 0), x[0] / f);
        assert_eq!(g.get(1, 0, 2), 0.0);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(g.get(3, a, b), 0.0);
                assert_eq!(g.get(a, 3, b), 0.0);
                for c in 0..4 {
                    assert_eq!(g.get(a, b, c), g.get(a, c, b));
                }
            }
        }
    }

    #[test]
    fn position_factor_values() {
        assert_eq!(position_factor(&BallPoint::origin(2)), 1.0);
        let r = (1.0f64 / 3.0).sqrt();
        assert_relative_eq!(position_factor(&p(&[r, 0.0])), 2.0, epsilon = 1e-14);
        assert!(position_factor(&p(&[0.999_999, 0.0])) > 1e5);
    }

    #[test]
    fn covariant_derivative_of_position() {
        let o = BallPoint::origin(3);
        let t = AmbientVector::new(o, vec![0.3, -1.0, 2.0, 0.7]).unwrap();
        assert_eq!(covariant_derivative_position(&t), t);
        let q = p(&[0.2, 0.4, -0.1]);
        let e4 = AmbientVector::basis(q, 3).unwrap();
        assert_eq!(covariant_derivative_position(&e4), e4);
    }

    #[test]
    fn distance_and_radius_are_inverse() {
        assert_eq!(hyp_distance_origin(&BallPoint::origin(2)), 0.0);
        let rho = 2.0 * 0.5f64.atanh();
        assert_relative_eq!(ball_radius(rho), 0.5, epsilon = 1e-15);
        let back = hyp_distance_origin(&p(&[ball_radius(1.0), 0.0]));
        assert_relative_eq!(back, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn signed_distance_along_normal() {
        let plane = Hyperplane::through_origin(&[0.0, 1.0, 0.0]).unwrap();
        for rho in [-3.0, -0.5, 0.0, 0.25, 1.0, 4.0] {
            let q = BallPoint::from_polar(&[0.0, 1.0, 0.0], rho, 0.0).unwrap();
            assert_relative_eq!(signed_distance_to_hyperplane(&q, &plane), rho, epsilon = 1e-12);
        }
        assert_eq!(signed_distance_to_hyperplane(&p(&[0.3, 0.0, 0.5]), &plane), 0.0);
    }

    #[test]
    fn general_hyperplane_matches_sphere_formula() {
        // sinh d = (r² − |x − c|²) / (r (1 − |x|²)) for an inward-oriented sphere
        let plane = Hyperplane::orthogonal_to_diameter(&[1.0, 1.0], 0.8).unwrap();
        let (c, r) = match &plane {
            Hyperplane::General {
                center,
                radius,
                positive_inside,
            } => {
                assert!(*positive_inside);
                (center.clone(), *radius)
            }
            _ => panic!("expected a sphere"),
        };
        for x in [[0.1, -0.3], [0.6, 0.5], [-0.7, 0.2], [0.0, 0.0]] {
            let d2: f64 = x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
            let expect = ((r * r - d2) / (r * (1.0 - norm_sq(&x)))).asinh();
            assert_relative_eq!(signed_distance_to_hyperplane(&p(&x), &plane), expect, epsilon = 1e-12);
        }
        assert_relative_eq!(plane.foot_offset(), 0.8, epsilon = 1e-14);
        let flipped = plane.flipped();
        assert_relative_eq!(
            signed_distance_to_hyperplane(&p(&[0.2, 0.1]), &flipped),
            -signed_distance_to_hyperplane(&p(&[0.2, 0.1]), &plane),
            epsilon = 1e-15
        );
    }

    #[test]
    fn translation_identity_and_origin_image() {
        let line = GeodesicLine::through_origin(&[0.0, 0.0, 1.0]).unwrap();
        let q = BallPoint::new(vec![0.1, 0.2, -0.3], 1.5).unwrap();
        assert_eq!(translate_along_geodesic(&q, &line, 0.0).unwrap(), q);
        let img = translate_along_geodesic(&BallPoint::origin(3), &line, 1.3).unwrap();
        assert_relative_eq!(img.x()[2], ball_radius(1.3), epsilon = 1e-15);
        assert_eq!(img.x()[0], 0.0);
    }

    #[test]
    fn geodesic_closest_point() {
        let line = GeodesicLine::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let m = line.closest_point_to_origin();
        // circle centered at (1,1) with radius 1
        let d = ((m[0] - 1.0).powi(2) + (m[1] - 1.0).powi(2)).sqrt();
        assert_relative_eq!(d, 1.0, epsilon = 1e-15);
        assert_relative_eq!(m[0], m[1]);
        let at0 = line.point_at(0.0);
        assert_relative_eq!(at0[0], m[0], epsilon = 1e-15);
        assert_relative_eq!(at0[1], m[1], epsilon = 1e-15);
    }

    #[test]
    fn caps_and_admissibility() {
        let plane = Hyperplane::through_origin(&[1.0, 0.0, 0.0]).unwrap();
        let caps = plane.ideal_caps();
        assert!(admissible_check(std::slice::from_ref(&plane), std::slice::from_ref(&caps.0)).unwrap());
        let far = Hyperplane::orthogonal_to_diameter(&[1.0, 0.0, 0.0], 1.0).unwrap();
        // nested caps on the same side overlap
        assert!(!admissible_check(&[plane.clone(), far.clone()], &[caps.0.clone(), far.ideal_caps().0]).unwrap());
        // mismatched cap
        let bogus = BoundaryCap {
            center: vec![0.0, 1.0, 0.0],
            angular_radius: 0.3,
        };
        assert!(admissible_check(&[plane], &[bogus]).is_err());
    }
}
