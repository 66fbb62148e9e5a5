//! Exact boundary representation of a convex body in the plane.
//!
//! The boundary is a closed counterclockwise cycle of straight pieces, each
//! lying on one constraint line, and arcs of the circle of radius `radius`
//! centred at the origin. Clipping by a half-plane splits every piece at the
//! line, keeps the inside pieces, and closes the single gap along the line.

use std::f64::consts::TAU;

use super::{ConvexBody, GeomError};

/// Arcs shorter than this are treated as points.
const ARC_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    /// Straight piece on the line of constraint `face`.
    Segment {
        from: [f64; 2],
        to: [f64; 2],
        face: usize,
    },
    /// Counterclockwise arc, `start < end <= start + 2π`.
    Arc { start: f64, end: f64 },
}

impl Edge {
    fn start_point(&self, radius: f64) -> [f64; 2] {
        match *self {
            Edge::Segment { from, .. } => from,
            Edge::Arc { start, .. } => [radius * start.cos(), radius * start.sin()],
        }
    }

    fn end_point(&self, radius: f64) -> [f64; 2] {
        match *self {
            Edge::Segment { to, .. } => to,
            Edge::Arc { end, .. } => [radius * end.cos(), radius * end.sin()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRegion {
    radius: f64,
    edges: Vec<Edge>,
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl PlanarRegion {
    pub fn disk(radius: f64) -> Self {
        Self {
            radius,
            edges: vec![Edge::Arc {
                start: 0.0,
                end: TAU,
            }],
        }
    }

    /// Region of `body` with every constraint tightened by `shift` and the
    /// disk replaced by the one of the given radius.
    pub fn from_body(body: &ConvexBody, radius: f64, shift: f64, tol: f64) -> Result<Self, GeomError> {
        if body.dim() != 2 {
            return Err(GeomError::DimensionMismatch {
                expected: 2,
                found: body.dim(),
            });
        }
        let mut region = Self::disk(radius);
        for (face, c) in body.constraints().iter().enumerate() {
            let s = c.side.sign();
            let n = c.plane.normal();
            region.clip([s * n[0], s * n[1]], s * c.plane.offset() + shift, face, tol);
            if region.is_empty() {
                break;
            }
        }
        Ok(region)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Keeps `{x : <normal, x> >= level}`; `normal` must be unit length.
    pub fn clip(&mut self, normal: [f64; 2], level: f64, face: usize, tol: f64) {
        if self.edges.is_empty() {
            return;
        }
        let r = self.radius;
        let f = |p: [f64; 2]| normal[0] * p[0] + normal[1] * p[1] - level;
        let mut kept: Vec<Edge> = Vec::with_capacity(self.edges.len() + 1);
        let mut dropped = false;
        for edge in &self.edges {
            match *edge {
                Edge::Segment { from, to, face: ef } => {
                    let (fa, fb) = (f(from), f(to));
                    if fa >= -tol && fb >= -tol {
                        kept.push(*edge);
                    } else if fa <= tol && fb <= tol {
                        dropped = true;
                    } else {
                        dropped = true;
                        let t = fa / (fa - fb);
                        let p = [from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])];
                        if fa > 0.0 {
                            kept.push(Edge::Segment { from, to: p, face: ef });
                        } else {
                            kept.push(Edge::Segment { from: p, to, face: ef });
                        }
                    }
                }
                Edge::Arc { start, end } => {
                    let mut cuts: Vec<f64> = Vec::with_capacity(2);
                    let c = level / r;
                    if c.abs() < 1.0 {
                        let phi = normal[1].atan2(normal[0]);
                        let half = c.acos();
                        for theta in [phi - half, phi + half] {
                            let u = start + (theta - start).rem_euclid(TAU);
                            if u > start && u < end {
                                cuts.push(u);
                            }
                        }
                        cuts.sort_by(f64::total_cmp);
                    }
                    let mut a0 = start;
                    for a1 in cuts.into_iter().chain(std::iter::once(end)) {
                        if a1 - a0 > ARC_EPS {
                            let mid = 0.5 * (a0 + a1);
                            if f([r * mid.cos(), r * mid.sin()]) >= 0.0 {
                                kept.push(Edge::Arc { start: a0, end: a1 });
                            } else {
                                dropped = true;
                            }
                        }
                        a0 = a1;
                    }
                }
            }
        }
        if !dropped {
            self.edges = kept;
            self.merge_arcs();
            return;
        }
        if kept.is_empty() {
            self.edges.clear();
            return;
        }
        let m = kept.len();
        let mut closed = Vec::with_capacity(m + 1);
        for i in 0..m {
            closed.push(kept[i]);
            let end = kept[i].end_point(r);
            let next = kept[(i + 1) % m].start_point(r);
            if dist2(end, next) > tol {
                closed.push(Edge::Segment {
                    from: end,
                    to: next,
                    face,
                });
            }
        }
        self.edges = closed;
        self.merge_arcs();
    }

    /// Joins consecutive arcs that continue each other.
    fn merge_arcs(&mut self) {
        let mut out: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for e in self.edges.drain(..) {
            if let (Some(Edge::Arc { end: pend, .. }), Edge::Arc { start, end }) = (out.last_mut(), e) {
                if (start - *pend).rem_euclid(TAU).min(TAU - (start - *pend).rem_euclid(TAU)) < 1e-13 {
                    *pend += end - start;
                    continue;
                }
            }
            out.push(e);
        }
        if out.len() > 1 {
            if let (Edge::Arc { start: s0, end: e0 }, Edge::Arc { start, end }) = (out[0], out[out.len() - 1]) {
                let gap = (s0 - end).rem_euclid(TAU);
                if gap.min(TAU - gap) < 1e-13 {
                    out.pop();
                    out[0] = Edge::Arc {
                        start,
                        end: end + (e0 - s0),
                    };
                }
            }
        }
        self.edges = out;
    }

    /// `(area, ∫x dA, ∫y dA)` by Green's theorem with consistent line
    /// integrals: area from `½∮(x dy − y dx)`, first moments from
    /// `∮ x²/2 dy` and `−∮ y²/2 dx`.
    pub fn moments(&self) -> (f64, f64, f64) {
        let r = self.radius;
        let (mut area, mut mx, mut my) = (0.0, 0.0, 0.0);
        for e in &self.edges {
            match *e {
                Edge::Segment { from: a, to: b, .. } => {
                    area += 0.5 * (a[0] * b[1] - b[0] * a[1]);
                    mx += (b[1] - a[1]) * (a[0] * a[0] + a[0] * b[0] + b[0] * b[0]) / 6.0;
                    my -= (b[0] - a[0]) * (a[1] * a[1] + a[1] * b[1] + b[1] * b[1]) / 6.0;
                }
                Edge::Arc { start, end } => {
                    area += 0.5 * r * r * (end - start);
                    let fx = |t: f64| t.sin() - t.sin().powi(3) / 3.0;
                    let fy = |t: f64| -t.cos() + t.cos().powi(3) / 3.0;
                    mx += 0.5 * r.powi(3) * (fx(end) - fx(start));
                    my += 0.5 * r.powi(3) * (fy(end) - fy(start));
                }
            }
        }
        (area, mx, my)
    }

    pub fn area(&self) -> f64 {
        self.moments().0
    }

    pub fn centroid(&self) -> Result<[f64; 2], GeomError> {
        let (a, mx, my) = self.moments();
        if self.is_empty() || a <= 0.0 {
            return Err(GeomError::EmptyBody);
        }
        Ok([mx / a, my / a])
    }

    /// Circle pieces of the boundary as `(start, end)` angle pairs.
    pub fn arcs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.iter().filter_map(|e| match *e {
            Edge::Arc { start, end } => Some((start, end)),
            Edge::Segment { .. } => None,
        })
    }

    /// Straight pieces of the boundary, `(from, to, face)`.
    pub fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2], usize)> + '_ {
        self.edges.iter().filter_map(|e| match *e {
            Edge::Segment { from, to, face } => Some((from, to, face)),
            Edge::Arc { .. } => None,
        })
    }

    /// Minimum and maximum of `<dir, x>` over the region.
    pub fn extent(&self, dir: [f64; 2]) -> Option<(f64, f64)> {
        if self.is_empty() {
            return None;
        }
        let r = self.radius;
        let val = |p: [f64; 2]| dir[0] * p[0] + dir[1] * p[1];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut push = |v: f64| {
            lo = lo.min(v);
            hi = hi.max(v);
        };
        let phi = dir[1].atan2(dir[0]);
        for e in &self.edges {
            push(val(e.start_point(r)));
            push(val(e.end_point(r)));
            if let Edge::Arc { start, end } = *e {
                for extreme in [phi, phi + std::f64::consts::PI] {
                    let u = start + (extreme - start).rem_euclid(TAU);
                    if u <= end {
                        push(val([r * u.cos(), r * u.sin()]));
                    }
                }
            }
        }
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_moments() {
        let d = PlanarRegion::disk(1.0);
        let (a, mx, my) = d.moments();
        assert!((a - PI).abs() < 1e-14);
        assert!(mx.abs() < 1e-14 && my.abs() < 1e-14);
    }

    #[test]
    fn cap_area_matches_closed_form() {
        // circular segment x >= h: area = acos(h) - h sqrt(1 - h^2)
        for &h in &[-0.7, -0.2, 0.0, 0.3, 0.9] {
            let mut r = PlanarRegion::disk(1.0);
            r.clip([1.0, 0.0], h, 0, 1e-12);
            let expected = f64::acos(h) - h * (1.0 - h * h).sqrt();
            assert!((r.area() - expected).abs() < 1e-13, "h={h}");
            // centroid of a circular segment: 2 (1-h^2)^{3/2} / (3 area)
            let cx = 2.0 * (1.0 - h * h).powf(1.5) / (3.0 * expected);
            let c = r.centroid().unwrap();
            assert!((c[0] - cx).abs() < 1e-12 && c[1].abs() < 1e-13, "h={h}");
        }
    }

    #[test]
    fn square_inside_disk() {
        let mut r = PlanarRegion::disk(1.0);
        let s = 0.5;
        r.clip([1.0, 0.0], -s, 0, 1e-12);
        r.clip([-1.0, 0.0], -s, 1, 1e-12);
        r.clip([0.0, 1.0], -s, 2, 1e-12);
        r.clip([0.0, -1.0], -s, 3, 1e-12);
        assert_eq!(r.arcs().count(), 0);
        assert_eq!(r.segments().count(), 4);
        assert!((r.area() - 1.0).abs() < 1e-14);
        let (lo, hi) = r.extent([1.0, 0.0]).unwrap();
        assert!((lo + 0.5).abs() < 1e-14 && (hi - 0.5).abs() < 1e-14);
    }

    #[test]
    fn redundant_clip_adds_no_face() {
        let mut r = PlanarRegion::disk(1.0);
        r.clip([1.0, 0.0], 0.0, 0, 1e-12);
        let before = r.clone();
        r.clip([1.0, 0.0], -0.5, 1, 1e-12);
        assert_eq!(r, before);
    }

    #[test]
    fn clip_to_nothing() {
        let mut r = PlanarRegion::disk(1.0);
        r.clip([1.0, 0.0], 0.5, 0, 1e-12);
        r.clip([-1.0, 0.0], 0.0, 1, 1e-12);
        assert!(r.is_empty());
    }
}
