//! Numerical umkehr map on discretized loop embeddings in flat manifolds:
//! restriction to timbers, geodesics, cigar neighbourhoods, clearance, the
//! scaling factor with its homotopy parameter, the collapse to `∞`, the
//! mapping-space extension and the self-intersection locus.

mod locus;
mod thom;

use std::f64::consts::TAU;

use serde::Serialize;
use thiserror::Error;

use crate::blueprint::BlueprintError;
use crate::geom::{segment_closest, Arc, GeomError, Point};
use crate::operad::{Cleavage, OperadError, Permutation};

pub use locus::{complement_arcs, self_intersection_locus, LocusInterval};
pub use thom::{umkehr, umkehr_mapping, ComponentStatus, ComponentValue, Entry, ThomValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UmkehrError {
    #[error("only sphere dimension 1 is supported here, got {0}")]
    Unsupported(usize),
    #[error("cleavage has arity {expected} but {found} loops were given")]
    ArityMismatch { expected: usize, found: usize },
    #[error("no unique geodesic from {from} to {to}")]
    NonUniqueGeodesic { from: Point, to: Point },
    #[error("geodesic has zero length")]
    DegenerateGeodesic,
    #[error("loops are not embedded: loop {a:?} meets loop {b:?} (label, segment)")]
    SelfIntersecting { a: (usize, usize), b: (usize, usize) },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("cigar parameter {0} outside ]0,1[")]
    CigarParameter(f64),
    #[error(transparent)]
    Blueprint(#[from] BlueprintError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Target manifold: Euclidean space or the flat torus `R^d / L·Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FlatMetric {
    Euclidean { d: usize },
    Torus { d: usize, #[serde(rename = "L")] period: f64 },
}

impl FlatMetric {
    pub fn euclidean(d: usize) -> Result<Self, UmkehrError> {
        if d < 2 {
            return Err(UmkehrError::InvalidConfig(format!("dimension {d} < 2")));
        }
        Ok(Self::Euclidean { d })
    }

    pub fn torus(d: usize, period: f64) -> Result<Self, UmkehrError> {
        if d < 2 {
            return Err(UmkehrError::InvalidConfig(format!("dimension {d} < 2")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(UmkehrError::InvalidConfig(format!("torus period {period} must be positive")));
        }
        Ok(Self::Torus { d, period })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Euclidean { d } | Self::Torus { d, .. } => d,
        }
    }

    fn period(&self) -> Option<f64> {
        match *self {
            Self::Euclidean { .. } => None,
            Self::Torus { period, .. } => Some(period),
        }
    }

    /// Representative of `p` in the fundamental domain `[0, L)^d`.
    pub fn wrap(&self, p: &Point) -> Point {
        match self.period() {
            None => p.clone(),
            Some(l) => Point::new(p.coords().iter().map(|x| x.rem_euclid(l)).collect())
                .expect("wrapped coordinates are finite"),
        }
    }

    /// Shortest displacement from `a` to `b`.
    pub fn displacement(&self, a: &Point, b: &Point) -> Point {
        let d = b.sub(a);
        match self.period() {
            None => d,
            Some(l) => Point::new(
                d.coords()
                    .iter()
                    .map(|x| x - l * (x / l).round())
                    .collect(),
            )
            .expect("finite displacement"),
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        self.displacement(a, b).norm()
    }

    /// Lattice translations to try around a minimal image.
    fn shifts(&self) -> Vec<Point> {
        let d = self.dim();
        match self.period() {
            None => vec![Point::zeros(d)],
            Some(l) => (0..3usize.pow(d as u32))
                .map(|mut code| {
                    let v = (0..d)
                        .map(|_| {
                            let z = (code % 3) as f64 - 1.0;
                            code /= 3;
                            z * l
                        })
                        .collect();
                    Point::new(v).expect("finite shift")
                })
                .collect(),
        }
    }
}

/// `k` closed polylines in a flat manifold, loop `i` sampled at the angles
/// `2πj/m_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEmbedding {
    metric: FlatMetric,
    loops: Vec<Vec<Point>>,
}

pub const MIN_LOOP_SAMPLES: usize = 8;

impl DiscreteEmbedding {
    pub fn new(metric: FlatMetric, loops: Vec<Vec<Point>>) -> Result<Self, UmkehrError> {
        for (i, lp) in loops.iter().enumerate() {
            if lp.len() < MIN_LOOP_SAMPLES {
                return Err(UmkehrError::InvalidEmbedding(format!(
                    "loop {} has {} points, need at least {MIN_LOOP_SAMPLES}",
                    i + 1,
                    lp.len()
                )));
            }
            for (j, p) in lp.iter().enumerate() {
                if p.dim() != metric.dim() {
                    return Err(UmkehrError::InvalidEmbedding(format!(
                        "loop {} point {j} has dimension {}, metric has {}",
                        i + 1,
                        p.dim(),
                        metric.dim()
                    )));
                }
                if metric.distance(p, &lp[(j + 1) % lp.len()]) == 0.0 {
                    return Err(UmkehrError::InvalidEmbedding(format!(
                        "loop {} repeats point {j}",
                        i + 1
                    )));
                }
            }
        }
        let loops = loops
            .into_iter()
            .map(|lp| lp.iter().map(|p| metric.wrap(p)).collect())
            .collect();
        Ok(Self { metric, loops })
    }

    pub fn metric(&self) -> &FlatMetric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Sample points of loop `label`.
    pub fn points(&self, label: usize) -> &[Point] {
        &self.loops[label - 1]
    }

    pub fn step(&self, label: usize) -> f64 {
        TAU / self.loops[label - 1].len() as f64
    }

    /// Segment `j` of loop `label`, from sample `j` to its successor, with the
    /// endpoint unwrapped so that the segment is the short one.
    fn segment(&self, label: usize, j: usize) -> (Point, Point) {
        let lp = &self.loops[label - 1];
        let a = lp[j].clone();
        let b = a.add(&self.metric.displacement(&a, &lp[(j + 1) % lp.len()]));
        (a, b)
    }

    fn segment_count(&self, label: usize) -> usize {
        self.loops[label - 1].len()
    }

    /// `γ_label(θ)` by piecewise-linear interpolation.
    pub fn eval(&self, label: usize, theta: f64) -> Point {
        let m = self.segment_count(label);
        let u = theta.rem_euclid(TAU) / self.step(label);
        let j = (u.floor() as usize).min(m - 1);
        let (a, b) = self.segment(label, j);
        self.metric.wrap(&a.lerp(&b, u - j as f64))
    }

    /// Loop `σ(l)` of the result is loop `l` of `self`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self, UmkehrError> {
        if sigma.len() != self.len() {
            return Err(UmkehrError::ArityMismatch {
                expected: sigma.len(),
                found: self.len(),
            });
        }
        let mut loops = self.loops.clone();
        for (l, lp) in self.loops.iter().enumerate() {
            loops[sigma.apply(l + 1) - 1] = lp.clone();
        }
        Ok(Self {
            metric: self.metric,
            loops,
        })
    }

    /// Fails with the first pair of segments closer than `tol`, skipping pairs
    /// of adjacent segments on the same loop.
    pub fn check_embedded(&self, tol: f64) -> Result<(), UmkehrError> {
        let segs: Vec<(usize, usize, Point, Point)> = (1..=self.len())
            .flat_map(|l| (0..self.segment_count(l)).map(move |j| (l, j)))
            .map(|(l, j)| {
                let (a, b) = self.segment(l, j);
                (l, j, a, b)
            })
            .collect();
        let shifts = self.metric.shifts();
        for (x, (la, ja, a0, a1)) in segs.iter().enumerate() {
            for (lb, jb, b0, b1) in &segs[x + 1..] {
                if la == lb {
                    let m = self.segment_count(*la);
                    let gap = (jb + m - ja) % m;
                    if gap <= 1 || gap == m - 1 {
                        continue;
                    }
                }
                let base = a0.add(&self.metric.displacement(a0, b0));
                let dir = b1.sub(b0);
                for s in &shifts {
                    let q0 = base.add(s);
                    let q1 = q0.add(&dir);
                    if segment_closest(a0.coords(), a1.coords(), q0.coords(), q1.coords()).2 <= tol {
                        return Err(UmkehrError::SelfIntersecting {
                            a: (*la, *ja),
                            b: (*lb, *jb),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `γ_i` restricted to one arc of the sphere trace of `N_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedArc {
    pub label: usize,
    pub arc: Arc,
    pub params: Vec<f64>,
    pub points: Vec<Point>,
}

/// `α^{‼₁}`: each loop restricted by parameter to the trace of its timber.
pub fn restrict(g: &DiscreteEmbedding, c: &Cleavage) -> Result<Vec<RestrictedArc>, UmkehrError> {
    if c.sphere_dim() != 1 {
        return Err(UmkehrError::Unsupported(c.sphere_dim()));
    }
    if c.arity() != g.len() {
        return Err(UmkehrError::ArityMismatch {
            expected: c.arity(),
            found: g.len(),
        });
    }
    let mut out = Vec::new();
    for t in c.timbers() {
        let label = t.label;
        let arcs = t.trace.arcs().expect("planar traces are arcs");
        let step = g.step(label);
        for &arc in arcs {
            let mut params = Vec::new();
            if !arc.is_full() {
                params.push(arc.start);
            }
            let mut inner: Vec<f64> = (0..g.segment_count(label))
                .map(|j| arc.offset_of(j as f64 * step))
                .filter(|&u| u > 0.0 && u < arc.len())
                .collect();
            inner.sort_by(f64::total_cmp);
            if arc.is_full() {
                inner.insert(0, 0.0);
                inner.dedup();
            }
            params.extend(inner.into_iter().map(|u| arc.start + u));
            if !arc.is_full() {
                params.push(arc.end);
            }
            let points = params.iter().map(|&th| g.eval(label, th)).collect();
            out.push(RestrictedArc {
                label,
                arc,
                params,
                points,
            });
        }
    }
    Ok(out)
}

/// Constant-speed geodesic on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geodesic {
    pub from: Point,
    pub to: Point,
    /// `to - from` in the universal cover.
    pub displacement: Point,
    pub length: f64,
    /// Unit tangent, or the zero vector for a constant geodesic.
    pub tangent: Point,
}

impl Geodesic {
    pub fn at(&self, t: f64) -> Point {
        self.from.add(&self.displacement.scale(t))
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic {
            from: self.to.clone(),
            to: self.from.clone(),
            displacement: self.displacement.scale(-1.0),
            length: self.length,
            tangent: self.tangent.scale(-1.0),
        }
    }
}

pub fn geodesic(metric: &FlatMetric, a: &Point, b: &Point, tol: f64) -> Result<Geodesic, UmkehrError> {
    let disp = metric.displacement(a, b);
    if let Some(l) = metric.period() {
        if disp.coords().iter().any(|x| (x.abs() - l / 2.0).abs() <= tol) {
            return Err(UmkehrError::NonUniqueGeodesic {
                from: a.clone(),
                to: b.clone(),
            });
        }
    }
    let length = disp.norm();
    let tangent = if length > 0.0 {
        disp.scale(1.0 / length)
    } else {
        Point::zeros(disp.dim())
    };
    Ok(Geodesic {
        from: metric.wrap(a),
        to: metric.wrap(b),
        displacement: disp,
        length,
        tangent,
    })
}

/// Radius of the cigar around a geodesic at parameter `t`.
pub fn cigar_radius(epsilon: f64, t: f64) -> Result<f64, UmkehrError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(UmkehrError::CigarParameter(t));
    }
    Ok(epsilon * (0.5 - (t - 0.5).abs()))
}

/// Range of the supremum taken over blueprint samples for each ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupRange {
    #[default]
    Component,
    Blueprint,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UmkehrConfig {
    pub epsilon: f64,
    /// Homotopy parameter; 0 is the plain umkehr map.
    pub t: f64,
    pub density: usize,
    /// Parameter radius around the geodesic endpoints excluded from the
    /// clearance; `None` means two sample steps of each loop.
    pub eta: Option<f64>,
    pub tol: f64,
    pub sup_range: SupRange,
}

impl Default for UmkehrConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.2,
            t: 0.0,
            density: 33,
            eta: None,
            tol: 1e-9,
            sup_range: SupRange::Component,
        }
    }
}

impl UmkehrConfig {
    pub fn check(&self, metric: &FlatMetric) -> Result<(), UmkehrError> {
        let bad = |m: String| Err(UmkehrError::InvalidConfig(m));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon {} must be positive", self.epsilon));
        }
        if let Some(l) = metric.period() {
            if self.epsilon >= l / 4.0 {
                return bad(format!("epsilon {} must be below L/4 = {}", self.epsilon, l / 4.0));
            }
        }
        if !(0.0..=1.0).contains(&self.t) {
            return bad(format!("homotopy parameter {} outside [0,1]", self.t));
        }
        if self.density < 2 {
            return bad(format!("density {} < 2", self.density));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return bad(format!("tolerance {} must be positive", self.tol));
        }
        if let Some(e) = self.eta {
            if e.is_nan() || e < 0.0 {
                return bad(format!("eta {e} must be non-negative"));
            }
        }
        Ok(())
    }

    fn eta_for(&self, g: &DiscreteEmbedding, label: usize) -> f64 {
        self.eta.unwrap_or(2.0 * g.step(label))
    }
}

/// Where the clearance infimum was attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub label: usize,
    pub segment: usize,
    pub point: Point,
    /// Projection parameter on the geodesic.
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clearance {
    pub value: f64,
    pub witness: Option<Witness>,
}

fn excluded(g: &DiscreteEmbedding, label: usize, j: usize, exclude: &[(usize, f64)], cfg: &UmkehrConfig) -> bool {
    let step = g.step(label);
    let eta = cfg.eta_for(g, label);
    exclude.iter().any(|&(l, theta)| {
        l == label && (theta - (j as f64 * step - eta)).rem_euclid(TAU) <= step + 2.0 * eta
    })
}

const GOLDEN_ITERS: usize = 90;

fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for u in [lo, hi] {
        let v = f(u);
        if v < best.1 {
            best = (u, v);
        }
    }
    best
}

/// Infimum of the scaled distance `δ_y` from loop points inside the cigar
/// around `geo` to its axis, over the continuum of every loop segment not
/// within `η` of an excluded parameter. 1 when no point enters the cigar, 0
/// when a strand meets the geodesic itself.
pub fn clearance(
    g: &DiscreteEmbedding,
    geo: &Geodesic,
    cfg: &UmkehrConfig,
    exclude: &[(usize, f64)],
) -> Result<Clearance, UmkehrError> {
    if geo.length <= 0.0 {
        return Err(UmkehrError::DegenerateGeodesic);
    }
    let metric = g.metric();
    let a = &geo.from;
    let b = geo.at(1.0);
    let e = &geo.tangent;
    let ell = geo.length;
    let shifts = metric.shifts();
    let mut best = Clearance {
        value: 1.0,
        witness: None,
    };
    for label in 1..=g.len() {
        for j in 0..g.segment_count(label) {
            if excluded(g, label, j, exclude, cfg) {
                continue;
            }
            let (p0, p1) = g.segment(label, j);
            let base = a.add(&metric.displacement(a, &p0));
            let dir = p1.sub(&p0);
            for s in &shifts {
                let q0 = base.add(s);
                let q1 = q0.add(&dir);
                let (u, tg, d) = segment_closest(q0.coords(), q1.coords(), a.coords(), b.coords());
                if d <= cfg.tol && tg > 0.0 && tg < 1.0 {
                    return Ok(Clearance {
                        value: 0.0,
                        witness: Some(Witness {
                            label,
                            segment: j,
                            point: metric.wrap(&q0.lerp(&q1, u)),
                            t: tg,
                        }),
                    });
                }
                let w0 = q0.sub(a);
                let t0 = w0.dot(e) / ell;
                let dt = dir.dot(e) / ell;
                let delta = |u: f64| {
                    let w = w0.add(&dir.scale(u));
                    let along = w.dot(e);
                    let t = along / ell;
                    let rad = cfg.epsilon * t.min(1.0 - t);
                    if rad <= 0.0 {
                        return f64::INFINITY;
                    }
                    w.sub(&e.scale(along)).norm() / rad
                };
                for (tlo, thi) in [(0.0, 0.5), (0.5, 1.0)] {
                    let (ulo, uhi) = if dt.abs() < 1e-300 {
                        if t0 > tlo && t0 < thi {
                            (0.0, 1.0)
                        } else {
                            continue;
                        }
                    } else {
                        let (x, y) = ((tlo - t0) / dt, (thi - t0) / dt);
                        (x.min(y).max(0.0), x.max(y).min(1.0))
                    };
                    if ulo >= uhi {
                        continue;
                    }
                    let (u, v) = golden_min(delta, ulo, uhi);
                    if v < best.value {
                        let t = w0.add(&dir.scale(u)).dot(e) / ell;
                        best = Clearance {
                            value: v,
                            witness: Some(Witness {
                                label,
                                segment: j,
                                point: metric.wrap(&q0.lerp(&q1, u)),
                                t,
                            }),
                        };
                    }
                }
            }
        }
    }
    Ok(best)
}

/// `S = dist / (ε((1-t)·infδ + t))`, infinite past `ε` or on a zero
/// denominator.
pub fn scaling(dist: f64, epsilon: f64, inf_delta: f64, t: f64) -> f64 {
    if dist > epsilon {
        return f64::INFINITY;
    }
    let denom = epsilon * ((1.0 - t) * inf_delta + t);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    dist / denom
}
