//! Geometry kernel: oriented hyperplanes, convex bodies inside the closed unit
//! ball, their traces on the unit sphere, centroids, and ray/boundary crossings.
//!
//! Everything is dimension-generic at the API level. In the plane (sphere
//! dimension 1) all answers are computed exactly from a boundary representation
//! (see [`planar`]); in higher dimensions they come from seeded sampling
//! governed by [`GeomConfig`].

pub mod planar;
pub mod sampling;

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use planar::{Edge, PlanarRegion};

/// Global geometric tolerance for the exact code paths.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default Monte Carlo budget for dimensions without an exact path.
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("hyperplane normal has zero length")]
    ZeroNormal,
    #[error("body has empty interior")]
    EmptyBody,
    #[error("violated precondition: {0}")]
    ViolatedPre(&'static str),
    #[error("segment does not cross the body boundary")]
    NoCrossing,
}

/// Tolerance and sampling parameters shared by the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomConfig {
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for GeomConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// A point of the ambient space `R^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeomError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Self(coords))
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self(vec![x, y])
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The point of the unit circle at angle `theta`.
    pub fn on_circle(theta: f64) -> Self {
        Self(vec![theta.cos(), theta.sin()])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    /// Polar angle of the first two coordinates.
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:.6}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Affine oriented hyperplane `{x : <normal, x> = offset}` with unit normal.
///
/// The positive side (the direction of the normal) is where [`signed_eval`] is
/// positive. The offset is the signed distance of the plane from the origin.
/// Planes with `|offset| >= 1` are representable; they are rejected when a
/// cleavage is validated, since they miss the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedHyperplane {
    normal: Vec<f64>,
    offset: f64,
}

impl OrientedHyperplane {
    /// Builds a plane from any nonzero normal direction; the normal is
    /// rescaled to unit length and `offset` is kept as the signed distance.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self, GeomError> {
        if normal.iter().any(|c| !c.is_finite()) || !offset.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let len = dot(&normal, &normal).sqrt();
        if len < 1e-300 {
            return Err(GeomError::ZeroNormal);
        }
        Ok(Self {
            normal: normal.into_iter().map(|c| c / len).collect(),
            offset,
        })
    }

    /// Line in the plane with normal at angle `phi`.
    pub fn at_angle(phi: f64, offset: f64) -> Self {
        Self {
            normal: vec![phi.cos(), phi.sin()],
            offset,
        }
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Same plane, opposite orientation.
    pub fn flipped(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|c| -c).collect(),
            offset: -self.offset,
        }
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// `<normal, x> - offset`; positive in the direction of the normal.
pub fn signed_eval(h: &OrientedHyperplane, x: &Point) -> Result<f64, GeomError> {
    if h.dim() != x.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: h.dim(),
            found: x.dim(),
        });
    }
    Ok(h.eval_unchecked(x.coords()))
}

/// Which closed half-space of a plane is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Direction of the normal.
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub plane: OrientedHyperplane,
    pub side: Side,
}

impl Constraint {
    /// Signed slack: nonnegative exactly on the kept closed half-space.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.side.sign() * self.plane.eval_unchecked(x)
    }
}

/// `D^{n+1}` intersected with an ordered list of closed half-spaces.
///
/// Redundant constraints are allowed; the planar boundary representation
/// simply never produces a face for them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexBody {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl ConvexBody {
    /// The closed unit ball of `R^dim`.
    pub fn ball(dim: usize) -> Self {
        Self {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Smallest slack over all constraints and the ball, `min(side·eval, 1-|x|)`.
    pub fn slack(&self, x: &[f64]) -> f64 {
        let ball = 1.0 - dot(x, x).sqrt();
        self.constraints
            .iter()
            .map(|c| c.slack(x))
            .fold(ball, f64::min)
    }

    /// Smallest slack over the half-space constraints only (`+inf` if none).
    pub fn constraint_slack(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.slack(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.dim() == self.dim && self.slack(x.coords()) >= -tol
    }

    /// Index and slack of the most violated half-space constraint.
    pub fn worst_constraint(&self, x: &[f64]) -> Option<(usize, f64)> {
        self.constraints
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.slack(x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Planar boundary representation; only meaningful for `dim == 2`.
    pub fn planar(&self, tol: f64) -> Result<PlanarRegion, GeomError> {
        PlanarRegion::from_body(self, 1.0, 0.0, tol)
    }
}

/// Intersection of `body` with the closed half-space on `side` of `h`.
pub fn clip(body: &ConvexBody, h: &OrientedHyperplane, side: Side) -> Result<ConvexBody, GeomError> {
    if h.dim() != body.dim {
        return Err(GeomError::DimensionMismatch {
            expected: body.dim,
            found: h.dim(),
        });
    }
    let mut constraints = body.constraints.clone();
    constraints.push(Constraint {
        plane: h.clone(),
        side,
    });
    Ok(ConvexBody {
        dim: body.dim,
        constraints,
    })
}

/// Whether some point of `body` lies farther than `tol` from every
/// constraint plane and from the sphere.
///
/// In the plane this shrinks every constraint by `tol` and the disk to radius
/// `1 - tol` and tests the exact remainder for positive area. In higher
/// dimensions it draws `cfg.samples` seeded points from the ball.
pub fn is_nonempty_interior(body: &ConvexBody, tol: f64, cfg: &GeomConfig) -> bool {
    if tol >= 1.0 {
        return false;
    }
    if body.dim == 2 {
        return match PlanarRegion::from_body(body, 1.0 - tol, tol, cfg.tol.min(tol)) {
            Ok(r) => !r.is_empty() && r.area() > 0.0,
            Err(_) => false,
        };
    }
    if body.slack(&vec![0.0; body.dim]) > tol {
        return true;
    }
    sampling::ball_points(body.dim, cfg.samples, cfg.seed).any(|p| body.slack(&p) > tol)
}

/// Center of mass of a body, with its standard error (zero on exact paths).
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidEstimate {
    pub point: Point,
    pub std_error: Vec<f64>,
}

/// Center of mass under uniform density. Exact in the plane.
pub fn centroid(body: &ConvexBody, cfg: &GeomConfig) -> Result<CentroidEstimate, GeomError> {
    if body.dim == 2 {
        let region = body.planar(cfg.tol)?;
        let c = region.centroid()?;
        return Ok(CentroidEstimate {
            point: Point::xy(c[0], c[1]),
            std_error: vec![0.0, 0.0],
        });
    }
    sampling::monte_carlo_centroid(body, cfg)
}

/// Closed arc of the unit circle, counterclockwise from `start` to `end`.
///
/// Canonical form: the full circle is `[0, 2π]`; otherwise `start ∈ [-π, π)`
/// and `start < end < start + 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

const FULL_CIRCLE_EPS: f64 = 1e-12;

impl Arc {
    pub fn new(start: f64, end: f64) -> Self {
        let len = end - start;
        if len >= TAU - FULL_CIRCLE_EPS {
            return Self {
                start: 0.0,
                end: TAU,
            };
        }
        let s = wrap_angle(start);
        Self {
            start: s,
            end: s + len,
        }
    }

    pub fn full() -> Self {
        Self {
            start: 0.0,
            end: TAU,
        }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_full(&self) -> bool {
        self.len() >= TAU - FULL_CIRCLE_EPS
    }

    /// Angular offset of `theta` past `start`, in `[0, 2π)`.
    pub fn offset_of(&self, theta: f64) -> f64 {
        (theta - self.start).rem_euclid(TAU)
    }

    pub fn contains(&self, theta: f64, tol: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let u = self.offset_of(theta);
        u <= self.len() + tol || u >= TAU - tol
    }

    /// Strictly inside, at angular distance more than `margin` from both ends.
    pub fn contains_interior(&self, theta: f64, margin: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let u = self.offset_of(theta);
        u > margin && u < self.len() - margin
    }

    pub fn start_point(&self) -> Point {
        Point::on_circle(self.start)
    }

    pub fn end_point(&self) -> Point {
        Point::on_circle(self.end)
    }
}

/// Maps an angle into `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = (theta + PI).rem_euclid(TAU) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Seeded point cloud approximating a region of `S^n` for `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledRegion {
    pub body: ConvexBody,
    pub points: Vec<Point>,
    pub seed: u64,
    pub budget: usize,
}

/// The trace `body ∩ S^n` of a convex body on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereRegion {
    /// Sorted, pairwise disjoint arcs (sphere dimension 1).
    Arcs(Vec<Arc>),
    Sampled(SampledRegion),
}

impl SphereRegion {
    pub fn arcs(&self) -> Option<&[Arc]> {
        match self {
            SphereRegion::Arcs(a) => Some(a),
            SphereRegion::Sampled(_) => None,
        }
    }

    /// Total angle for arcs, or the sampled fraction of the sphere otherwise.
    pub fn measure(&self) -> f64 {
        match self {
            SphereRegion::Arcs(a) => a.iter().map(Arc::len).sum(),
            SphereRegion::Sampled(s) => s.points.len() as f64 / s.budget.max(1) as f64,
        }
    }

    /// Nonempty beyond tolerance: some arc longer than `tol`, or some sample
    /// point strictly inside.
    pub fn is_nonempty(&self, tol: f64) -> bool {
        match self {
            SphereRegion::Arcs(a) => a.iter().any(|arc| arc.len() > tol),
            SphereRegion::Sampled(s) => s
                .points
                .iter()
                .any(|p| s.body.constraint_slack(p.coords()) > tol),
        }
    }

    /// Sphere-point membership (closed, within `tol`).
    pub fn contains(&self, s: &Point, tol: f64) -> bool {
        match self {
            SphereRegion::Arcs(a) => {
                let theta = s.angle();
                a.iter().any(|arc| arc.contains(theta, tol))
            }
            SphereRegion::Sampled(r) => r.body.constraint_slack(s.coords()) >= -tol,
        }
    }
}

/// Canonical arc list: sorted by start, adjacent pieces merged.
pub fn canonical_arcs(raw: impl IntoIterator<Item = (f64, f64)>, min_len: f64) -> Vec<Arc> {
    let mut arcs: Vec<Arc> = raw
        .into_iter()
        .filter(|(a, b)| b - a > min_len)
        .map(|(a, b)| Arc::new(a, b))
        .collect();
    if arcs.iter().any(Arc::is_full) {
        return vec![Arc::full()];
    }
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut merged: Vec<Arc> = Vec::with_capacity(arcs.len());
    for arc in arcs {
        if let Some(last) = merged.last_mut() {
            if (arc.start - last.end).abs() <= 1e-12 {
                last.end = last.end.max(arc.end);
                continue;
            }
        }
        merged.push(arc);
    }
    // wrap-around join of the last arc into the first
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if (last.end - TAU - first.start).abs() <= 1e-12 {
            merged.remove(0);
            let l = merged.last_mut().unwrap();
            l.end = last.end + first.len();
            let fixed = Arc::new(l.start, l.end);
            *l = fixed;
            merged.sort_by(|a, b| a.start.total_cmp(&b.start));
        }
    }
    merged
}

/// `body ∩ S^n`. Exact arcs in the plane; a seeded cloud otherwise.
pub fn sphere_trace(body: &ConvexBody, cfg: &GeomConfig) -> Result<SphereRegion, GeomError> {
    if body.dim == 2 {
        let region = body.planar(cfg.tol)?;
        return Ok(SphereRegion::Arcs(canonical_arcs(region.arcs(), 1e-14)));
    }
    let points = sampling::sphere_points(body.dim, cfg.samples, cfg.seed)
        .filter(|p| body.constraints.iter().all(|c| c.slack(p) >= 0.0))
        .map(Point)
        .collect();
    Ok(SphereRegion::Sampled(SampledRegion {
        body: body.clone(),
        points,
        seed: cfg.seed,
        budget: cfg.samples,
    }))
}

/// Where a segment from outside to inside first meets the body boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryHit {
    pub point: Point,
    /// Parameter along `from -> to`.
    pub t: f64,
    /// Index of the active constraint, `None` when the sphere is hit.
    pub face: Option<usize>,
    pub plane: Option<OrientedHyperplane>,
    /// Set when two faces (or a face and the sphere) tie within tolerance.
    pub corner: bool,
}

/// The unique crossing of the segment `[from, to]` with `∂body`, where `to`
/// is interior and `from` exterior.
pub fn segment_boundary_hit(
    body: &ConvexBody,
    from: &Point,
    to: &Point,
    tol: f64,
) -> Result<BoundaryHit, GeomError> {
    for p in [from, to] {
        if p.dim() != body.dim {
            return Err(GeomError::DimensionMismatch {
                expected: body.dim,
                found: p.dim(),
            });
        }
    }
    if body.slack(to.coords()) <= tol {
        return Err(GeomError::ViolatedPre("segment target is not interior"));
    }
    if body.slack(from.coords()) >= -tol {
        return Err(GeomError::ViolatedPre("segment source is not exterior"));
    }
    // Entry parameter of each constraint along from + t (to - from); the
    // crossing is at the largest one.
    let mut entries: Vec<(Option<usize>, f64)> = Vec::with_capacity(body.constraints.len() + 1);
    for (i, c) in body.constraints.iter().enumerate() {
        let f0 = c.slack(from.coords());
        if f0 < 0.0 {
            let f1 = c.slack(to.coords());
            entries.push((Some(i), f0 / (f0 - f1)));
        }
    }
    let dir = to.sub(from);
    let a = dir.dot(&dir);
    let b = 2.0 * from.dot(&dir);
    let c = from.dot(from) - 1.0;
    if c > 0.0 {
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        // smaller root: first time inside the ball
        let t = (-b - disc) / (2.0 * a);
        entries.push((None, t.clamp(0.0, 1.0)));
    } else {
        entries.push((None, 0.0));
    }
    let (face, t) = entries
        .iter()
        .copied()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or(GeomError::NoCrossing)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(GeomError::NoCrossing);
    }
    let seg_len = a.sqrt();
    let ties: Vec<Option<usize>> = entries
        .iter()
        .filter(|(_, te)| (te - t).abs() * seg_len <= tol)
        .map(|(f, _)| *f)
        .collect();
    let corner = ties.len() > 1;
    // lowest-index plane among ties wins; the sphere only when no plane ties
    let face = if corner {
        ties.iter().flatten().copied().min().or(face)
    } else {
        face
    };
    Ok(BoundaryHit {
        point: from.lerp(to, t),
        t,
        face,
        plane: face.map(|i| body.constraints[i].plane.clone()),
        corner,
    })
}

/// Closest points of the segments `[p0, p1]` and `[q0, q1]` in `R^d`:
/// returns `(s, t, distance)` with the points at `p0 + s (p1 - p0)` and
/// `q0 + t (q1 - q0)`.
pub fn segment_closest(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64]) -> (f64, f64, f64) {
    const EPS: f64 = 1e-300;
    let d1: Vec<f64> = p1.iter().zip(p0).map(|(a, b)| a - b).collect();
    let d2: Vec<f64> = q1.iter().zip(q0).map(|(a, b)| a - b).collect();
    let r: Vec<f64> = p0.iter().zip(q0).map(|(a, b)| a - b).collect();
    let a = dot(&d1, &d1);
    let e = dot(&d2, &d2);
    let f = dot(&d2, &r);
    let (s, t) = if a <= EPS && e <= EPS {
        (0.0, 0.0)
    } else if a <= EPS {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = dot(&d1, &r);
        if e <= EPS {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = dot(&d1, &d2);
            let denom = a * e - b * b;
            let mut s = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    let dist = (0..p0.len())
        .map(|i| {
            let x = p0[i] + s * d1[i] - (q0[i] + t * d2[i]);
            x * x
        })
        .sum::<f64>()
        .sqrt();
    (s, t, dist)
}

/// Distance from `x` to the segment `[a, b]`, with the closest parameter.
pub fn point_segment(x: &[f64], a: &[f64], b: &[f64]) -> (f64, f64) {
    let (t, _, d) = segment_closest(a, b, x, x);
    (t, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn x_plane() -> OrientedHyperplane {
        OrientedHyperplane::new(vec![1.0, 0.0], 0.0).unwrap()
    }

    fn y_plane() -> OrientedHyperplane {
        OrientedHyperplane::new(vec![0.0, 1.0], 0.0).unwrap()
    }

    fn half_disk() -> ConvexBody {
        clip(&ConvexBody::ball(2), &x_plane(), Side::Plus).unwrap()
    }

    fn quarter_disk() -> ConvexBody {
        clip(&half_disk(), &y_plane(), Side::Plus).unwrap()
    }

    #[test]
    fn signed_eval_examples() {
        let h = x_plane();
        assert_eq!(signed_eval(&h, &Point::xy(0.5, 0.0)).unwrap(), 0.5);
        assert_eq!(signed_eval(&h, &Point::xy(0.0, 1.0)).unwrap(), 0.0);
        let h = OrientedHyperplane::new(vec![0.0, 1.0], 0.25).unwrap();
        assert_eq!(signed_eval(&h, &Point::xy(0.0, 1.0)).unwrap(), 0.75);
        assert!(matches!(
            signed_eval(&h, &Point::new(vec![0.0, 0.0, 1.0]).unwrap()),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hyperplane_normalizes_direction() {
        let h = OrientedHyperplane::new(vec![3.0, 4.0], 0.5).unwrap();
        assert!((h.normal()[0] - 0.6).abs() < 1e-15);
        assert_eq!(h.offset(), 0.5);
        assert_eq!(
            OrientedHyperplane::new(vec![0.0, 0.0], 0.0),
            Err(GeomError::ZeroNormal)
        );
    }

    #[test]
    fn clip_examples() {
        let cfg = GeomConfig::default();
        let hd = half_disk();
        assert!(hd.contains(&Point::xy(0.5, 0.0), 0.0));
        assert!(!hd.contains(&Point::xy(-0.5, 0.0), 0.0));
        let q = quarter_disk();
        assert!(q.contains(&Point::xy(0.3, 0.3), 0.0));
        assert!(!q.contains(&Point::xy(0.3, -0.3), 0.0));
        let sliver = clip(&hd, &x_plane(), Side::Minus).unwrap();
        assert!(!is_nonempty_interior(&sliver, 1e-9, &cfg));
    }

    #[test]
    fn nonempty_interior_examples() {
        let cfg = GeomConfig::default();
        assert!(is_nonempty_interior(&half_disk(), 1e-9, &cfg));
        let thin = clip(
            &ConvexBody::ball(2),
            &OrientedHyperplane::new(vec![1.0, 0.0], 0.999999).unwrap(),
            Side::Plus,
        )
        .unwrap();
        // the cap has width 1e-6, far below the 1e-3 tolerance
        assert!(!is_nonempty_interior(&thin, 1e-3, &cfg));
        assert!(is_nonempty_interior(&thin, 1e-8, &cfg));
    }

    #[test]
    fn nonempty_interior_sampled_in_three_dimensions() {
        let cfg = GeomConfig {
            samples: 20_000,
            ..GeomConfig::default()
        };
        let h = OrientedHyperplane::new(vec![0.0, 0.0, 1.0], 0.5).unwrap();
        let cap = clip(&ConvexBody::ball(3), &h, Side::Plus).unwrap();
        assert!(is_nonempty_interior(&cap, 1e-3, &cfg));
        let empty = clip(&cap, &h, Side::Minus).unwrap();
        assert!(!is_nonempty_interior(&empty, 1e-3, &cfg));
    }

    #[test]
    fn centroid_examples() {
        let cfg = GeomConfig::default();
        let c = centroid(&ConvexBody::ball(2), &cfg).unwrap().point;
        assert!(c.norm() < 1e-15);
        let expected = 4.0 / (3.0 * PI);
        let c = centroid(&half_disk(), &cfg).unwrap().point;
        assert!((c[0] - expected).abs() < 1e-12 && c[1].abs() < 1e-12);
        let c = centroid(&quarter_disk(), &cfg).unwrap().point;
        assert!((c[0] - expected).abs() < 1e-12 && (c[1] - expected).abs() < 1e-12);
        let sliver = clip(&half_disk(), &x_plane(), Side::Minus).unwrap();
        assert_eq!(centroid(&sliver, &cfg), Err(GeomError::EmptyBody));
    }

    #[test]
    fn sphere_trace_examples() {
        let cfg = GeomConfig::default();
        let full = sphere_trace(&ConvexBody::ball(2), &cfg).unwrap();
        assert_eq!(full.arcs().unwrap(), &[Arc::full()]);
        let half = sphere_trace(&half_disk(), &cfg).unwrap();
        let a = half.arcs().unwrap();
        assert_eq!(a.len(), 1);
        assert!((a[0].start + FRAC_PI_2).abs() < 1e-12 && (a[0].end - FRAC_PI_2).abs() < 1e-12);
        let quarter = sphere_trace(&quarter_disk(), &cfg).unwrap();
        let a = quarter.arcs().unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].start.abs() < 1e-12 && (a[0].end - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn band_has_two_arcs() {
        let cfg = GeomConfig::default();
        let band = clip(
            &clip(
                &ConvexBody::ball(2),
                &OrientedHyperplane::new(vec![1.0, 0.0], -0.5).unwrap(),
                Side::Plus,
            )
            .unwrap(),
            &OrientedHyperplane::new(vec![1.0, 0.0], 0.5).unwrap(),
            Side::Minus,
        )
        .unwrap();
        let trace = sphere_trace(&band, &cfg).unwrap();
        let arcs = trace.arcs().unwrap();
        assert_eq!(arcs.len(), 2);
        for a in arcs {
            assert!((a.len() - PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_hit_examples() {
        let tol = DEFAULT_TOL;
        let hd = half_disk();
        let hit = segment_boundary_hit(
            &hd,
            &Point::xy(-1.0, 0.0),
            &Point::xy(4.0 / (3.0 * PI), 0.0),
            tol,
        )
        .unwrap();
        assert!(hit.point.norm() < 1e-12);
        assert_eq!(hit.face, Some(0));
        assert!(!hit.corner);

        let hit = segment_boundary_hit(&quarter_disk(), &Point::xy(0.0, -1.0), &Point::xy(0.3, 0.3), tol)
            .unwrap();
        // y(t) = -1 + 1.3 t = 0
        let t = 1.0 / 1.3;
        assert_eq!(hit.face, Some(1));
        assert!((hit.point[0] - 0.3 * t).abs() < 1e-12 && hit.point[1].abs() < 1e-12);

        assert!(matches!(
            segment_boundary_hit(&hd, &Point::xy(0.5, 0.0), &Point::xy(0.4, 0.0), tol),
            Err(GeomError::ViolatedPre(_))
        ));
    }

    #[test]
    fn boundary_hit_on_sphere_part() {
        let hit = segment_boundary_hit(
            &half_disk(),
            &Point::xy(2.0, 0.0),
            &Point::xy(0.5, 0.0),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(hit.face, None);
        assert!((hit.point[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_hit_reports_corner() {
        let hit = segment_boundary_hit(
            &quarter_disk(),
            &Point::xy(-0.5, -0.5),
            &Point::xy(0.3, 0.3),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(hit.corner);
        assert_eq!(hit.face, Some(0));
        assert!(hit.point.norm() < 1e-12);
    }

    #[test]
    fn segment_closest_cases() {
        // crossing
        let (s, t, d) = segment_closest(&[-1.0, 0.0], &[1.0, 0.0], &[0.0, -1.0], &[0.0, 1.0]);
        assert!(d < 1e-15 && (s - 0.5).abs() < 1e-15 && (t - 0.5).abs() < 1e-15);
        // parallel, offset
        let (_, _, d) = segment_closest(&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.3], &[2.0, 0.3]);
        assert!((d - 0.3).abs() < 1e-15);
        // endpoint to interior (T-junction)
        let (s, t, d) = segment_closest(&[0.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[1.0, 0.0]);
        assert!(d < 1e-15 && s == 0.0 && (t - 0.5).abs() < 1e-15);
        // skew in 3d
        let (_, _, d) = segment_closest(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.5, -1.0, 2.0], &[0.5, 1.0, 2.0]);
        assert!((d - 2.0).abs() < 1e-15);
        let (t, d) = point_segment(&[2.0, 1.0], &[0.0, 0.0], &[1.0, 0.0]);
        assert!(t == 1.0 && (d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), -PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn canonical_arcs_merge_across_seam() {
        let arcs = canonical_arcs([(0.0, 1.0), (TAU - 1.0, TAU)], 1e-14);
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].start + 1.0).abs() < 1e-12 && (arcs[0].end - 1.0).abs() < 1e-12);
    }
}
