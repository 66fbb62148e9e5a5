//! Reference cleavages and loop families with known umkehr behaviour.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use crate::blueprint::{alpha, ray_to_sphere};
use crate::geom::{ConvexBody, OrientedHyperplane, Point};
use crate::operad::{validate, Cleavage, DecoratedTree};
use crate::umkehr::{DiscreteEmbedding, FlatMetric, UmkehrError};

fn plane(nx: f64, ny: f64, r: f64) -> OrientedHyperplane {
    OrientedHyperplane::new(vec![nx, ny], r).expect("fixture plane")
}

/// Arity 2, cut along `x = 0`; timber 1 is the right half.
pub fn chord() -> Cleavage {
    validate(
        &DecoratedTree::internal(plane(1.0, 0.0, 0.0), DecoratedTree::leaf(1), DecoratedTree::leaf(2)),
        &ConvexBody::ball(2),
    )
    .expect("chord fixture")
}

/// Arity 3, cut along `x = 0` and then `y = 0` on the right half.
pub fn tee() -> Cleavage {
    validate(
        &DecoratedTree::internal(
            plane(1.0, 0.0, 0.0),
            DecoratedTree::internal(plane(0.0, 1.0, 0.0), DecoratedTree::leaf(1), DecoratedTree::leaf(2)),
            DecoratedTree::leaf(3),
        ),
        &ConvexBody::ball(2),
    )
    .expect("tee fixture")
}

/// Arity 3 with parallel cuts `x = -0.5` (root) and `x = 0.5`: timber 1 is
/// the cap `x ≥ 0.5`, timber 2 the band, timber 3 the cap `x ≤ -0.5`.
pub fn parallel() -> Cleavage {
    validate(
        &DecoratedTree::internal(
            plane(1.0, 0.0, -0.5),
            DecoratedTree::internal(plane(1.0, 0.0, 0.5), DecoratedTree::leaf(1), DecoratedTree::leaf(2)),
            DecoratedTree::leaf(3),
        ),
        &ConvexBody::ball(2),
    )
    .expect("parallel fixture")
}

fn params(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| TAU * j as f64 / m as f64)
}

/// Loops on circles of radius `r` and `r + gap` about the origin; loop 2 is
/// traversed by `φ ↦ (r + gap)(-cos φ, sin φ)` so that, for [`chord`], the
/// images of the two preimages of a blueprint point are radially aligned.
pub fn concentric(r: f64, gap: f64, m: usize) -> DiscreteEmbedding {
    let l1 = params(m).map(|th| Point::on_circle(th).scale(r)).collect();
    let l2 = params(m)
        .map(|th| Point::xy(-(r + gap) * th.cos(), (r + gap) * th.sin()))
        .collect();
    DiscreteEmbedding::new(FlatMetric::euclidean(2).expect("d = 2"), vec![l1, l2]).expect("concentric fixture")
}

/// Loop 1 on the circle of radius `r` with phase `phase`; loop 2 sends each
/// sample of `∁N_2` to the radial push-out by `gap` of the loop-1 image of its
/// α-partner, and closes along the rest of the outer circle. Needs arity 2.
pub fn mirrored_pair(c: &Cleavage, r: f64, gap: f64, phase: f64, m: usize) -> Result<DiscreteEmbedding, UmkehrError> {
    if c.arity() != 2 {
        return Err(UmkehrError::ArityMismatch {
            expected: 2,
            found: c.arity(),
        });
    }
    let g1 = |th: f64| Point::on_circle(th + phase).scale(r);
    let l1: Vec<Point> = params(m).map(g1).collect();
    let metric = FlatMetric::euclidean(2)?;
    let first = DiscreteEmbedding::new(metric, vec![l1.clone()])?;
    let n2 = c.timber(2)?.trace.arcs().expect("planar")[0];
    let n1_len = TAU - n2.len();
    let c1 = c.timber(1)?.centroid.point.clone();
    let outer = r + gap;
    let l2 = params(m)
        .map(|phi| {
            let u = n2.offset_of(phi);
            if u < n2.len() {
                let a0 = phase + n2.start;
                Ok(Point::on_circle(a0 - u * n1_len / n2.len()).scale(outer))
            } else {
                let s = Point::on_circle(phi);
                let partner = match alpha(c, 2, &s) {
                    Ok(h) => ray_to_sphere(&c1, &h.point).angle(),
                    Err(_) => phi,
                };
                let p = first.eval(1, partner);
                Ok(p.scale(outer / p.norm()))
            }
        })
        .collect::<Result<Vec<_>, UmkehrError>>()?;
    DiscreteEmbedding::new(metric, vec![l1, l2])
}

/// Shape of the invading third loop of [`invader`]: an axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::xy(self.x0, self.y0),
            Point::xy(self.x1, self.y0),
            Point::xy(self.x1, self.y1),
            Point::xy(self.x0, self.y1),
        ]
    }

    /// `4q` points around the boundary, corners included.
    pub fn sample(&self, q: usize) -> Vec<Point> {
        let c = self.corners();
        (0..4)
            .flat_map(|side| {
                let (a, b) = (c[side].clone(), c[(side + 1) % 4].clone());
                (0..q).map(move |j| a.lerp(&b, j as f64 / q as f64))
            })
            .collect()
    }
}

/// Three loops for [`parallel`]: on the blueprint component `x = 0.5`, the
/// geodesic from loop 1 to loop 2 is the vertical segment from `(y, 0)` to
/// `(y, gap)` for every chord point `(0.5, y)`; loop 3 is `rect`. With `m` a
/// multiple of 6 the timber boundaries `±π/3` are loop vertices.
pub fn invader(c: &Cleavage, gap: f64, rect: Rect, m: usize) -> Result<DiscreteEmbedding, UmkehrError> {
    let cap = c.timber(1)?.centroid.point[0];
    let h = FRAC_PI_3.sin();
    let l1 = params(m)
        .map(|th| {
            let w = crate::geom::wrap_angle(th);
            if w.abs() >= FRAC_PI_3 {
                Point::xy(th.sin() * (0.5 - cap) / (th.cos() - cap), 0.0)
            } else {
                let f = (w + FRAC_PI_3) / (2.0 * FRAC_PI_3);
                Point::xy(-h * (PI * f).cos(), -h * (PI * f).sin())
            }
        })
        .collect();
    let l2 = params(m)
        .map(|th| {
            let w = crate::geom::wrap_angle(th);
            if w.abs() <= FRAC_PI_3 {
                Point::xy(0.5 * w.tan(), gap)
            } else {
                let f = (th - FRAC_PI_3) / (4.0 * FRAC_PI_3);
                Point::xy(h * (PI * f).cos(), gap + h * (PI * f).sin())
            }
        })
        .collect();
    let q = (m / 4).max(2);
    DiscreteEmbedding::new(FlatMetric::euclidean(2)?, vec![l1, l2, rect.sample(q)])
}

/// Pair of maps for [`chord`] whose α-partner is `θ ↦ π - θ`: loop 2 is loop
/// 1 read through the partner, displaced by `bump(φ)·(0.3, 0.4)`. The locus
/// on loop 2 is where `bump` vanishes on whole segments.
pub fn partner_pair(f1: impl Fn(f64) -> Point, bump: impl Fn(f64) -> f64, m: usize) -> Result<DiscreteEmbedding, UmkehrError> {
    let l1 = params(m).map(&f1).collect();
    let dir = Point::xy(0.3, 0.4);
    let l2 = params(m).map(|th| f1(PI - th).add(&dir.scale(bump(th)))).collect();
    DiscreteEmbedding::new(FlatMetric::euclidean(2)?, vec![l1, l2])
}

/// Smooth loop `θ ↦ Σ a_k cos(kθ) + b_k sin(kθ)` in the plane.
pub fn fourier_loop(coeffs: &[(Point, Point)]) -> impl Fn(f64) -> Point + '_ {
    move |th| {
        coeffs
            .iter()
            .enumerate()
            .fold(Point::xy(0.0, 0.0), |acc, (k, (a, b))| {
                let k = (k + 1) as f64;
                acc.add(&a.scale((k * th).cos())).add(&b.scale((k * th).sin()))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::thicken;
    use crate::umkehr::{umkehr, UmkehrConfig};

    #[test]
    fn invader_loops_are_embedded() {
        let c = parallel();
        let far = Rect { x0: 1.5, x1: 1.6, y0: 0.015, y1: 0.035 };
        let g = invader(&c, 0.05, far, 96).unwrap();
        g.check_embedded(1e-9).unwrap();
        let v = umkehr(&g, &c, &thicken(&c, 17).unwrap(), &UmkehrConfig::default()).unwrap();
        let a = v.component_with(&[1, 2]).unwrap();
        assert!(a.is_finite());
        for e in &a.entries {
            assert!((e.from[0] - e.to[0]).abs() < 0.02, "{e:?}");
            assert!((e.to[1] - e.from[1]).abs() - 0.05 < 1e-9);
        }
        let inside = Rect { x0: 0.2, x1: 0.3, y0: 0.015, y1: 0.035 };
        let g = invader(&c, 0.05, inside, 96).unwrap();
        let v = umkehr(&g, &c, &thicken(&c, 17).unwrap(), &UmkehrConfig::default()).unwrap();
        assert!(!v.component_with(&[1, 2]).unwrap().is_finite());
    }

    #[test]
    fn mirrored_pair_matches_concentric_on_chord() {
        let c = chord();
        let a = mirrored_pair(&c, 0.5, 0.05, 0.0, 64).unwrap();
        let b = concentric(0.5, 0.05, 64);
        for l in 1..=2 {
            for (p, q) in a.points(l).iter().zip(b.points(l)) {
                assert!(p.dist(q) < 1e-9, "{p} {q}");
            }
        }
    }
}
