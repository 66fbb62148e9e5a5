use std::f64::consts::TAU;

use serde::Serialize;

use crate::blueprint::{alpha, alpha_preimage_in, blueprint};
use crate::geom::{Arc, Point};
use crate::operad::Cleavage;

use super::{DiscreteEmbedding, UmkehrError};

/// Arcs of the circle not covered by `arcs`.
pub fn complement_arcs(arcs: &[Arc]) -> Vec<Arc> {
    if arcs.is_empty() {
        return vec![Arc::full()];
    }
    if arcs.iter().any(Arc::is_full) {
        return Vec::new();
    }
    let mut sorted = arcs.to_vec();
    sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut out = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        let next = &sorted[(i + 1) % sorted.len()];
        let gap = (next.start - a.end).rem_euclid(TAU);
        if gap > 0.0 {
            out.push(Arc::new(a.end, a.end + gap));
        }
    }
    out
}

/// A maximal run of parameters in `A_i^f` inside one complement arc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusInterval {
    pub label: usize,
    pub arc: Arc,
    pub lo: f64,
    pub hi: f64,
    /// The run is a proper sub-arc of the circle.
    pub contractible: bool,
}

impl LocusInterval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi == self.lo
    }
}

const GRID_PER_STEP: usize = 8;

/// `A_i^f` for each label: parameters `x ∈ ∁N_i` for which some other
/// preimage of `α(x)` has the same image under `f` within `tol`. Scanned on a
/// grid of eight points per sample step together with the loop vertices, and
/// merged into runs of consecutive grid hits.
pub fn self_intersection_locus(
    f: &DiscreteEmbedding,
    c: &Cleavage,
    tol: f64,
) -> Result<Vec<Vec<LocusInterval>>, UmkehrError> {
    if c.sphere_dim() != 1 {
        return Err(UmkehrError::Unsupported(c.sphere_dim()));
    }
    if c.arity() != f.len() {
        return Err(UmkehrError::ArityMismatch {
            expected: c.arity(),
            found: f.len(),
        });
    }
    let bp = blueprint(c)?;
    let gtol = c.config().tol;
    let metric = f.metric();
    let mut out = Vec::with_capacity(c.arity());
    for t in c.timbers() {
        let i = t.label;
        let mut runs = Vec::new();
        for arc in complement_arcs(t.trace.arcs().expect("planar traces are arcs")) {
            let m = f.points(i).len();
            let step = f.step(i);
            let n = ((arc.len() / step).ceil() as usize).max(1) * GRID_PER_STEP;
            let mut grid: Vec<f64> = (1..n).map(|j| arc.len() * j as f64 / n as f64).collect();
            grid.extend(
                (0..m)
                    .map(|j| arc.offset_of(j as f64 * step))
                    .filter(|&u| u > 0.0 && u < arc.len()),
            );
            grid.sort_by(f64::total_cmp);
            grid.dedup();

            let mut current: Option<(f64, f64)> = None;
            for u in grid {
                let x = arc.start + u;
                let hit = match alpha(c, i, &Point::on_circle(x)) {
                    Ok(h) => {
                        let fx = f.eval(i, x);
                        alpha_preimage_in(c, &bp, &h.point, gtol)
                            .map(|pre| {
                                pre.iter().any(|p| {
                                    p.label != i && metric.distance(&fx, &f.eval(p.label, p.theta)) <= tol
                                })
                            })
                            .unwrap_or(false)
                    }
                    Err(_) => false,
                };
                current = match (hit, current) {
                    (true, None) => Some((x, x)),
                    (true, Some((lo, _))) => Some((lo, x)),
                    (false, Some((lo, hi))) => {
                        runs.push(LocusInterval {
                            label: i,
                            arc,
                            lo,
                            hi,
                            contractible: hi - lo < TAU - gtol,
                        });
                        None
                    }
                    (false, None) => None,
                };
            }
            if let Some((lo, hi)) = current {
                runs.push(LocusInterval {
                    label: i,
                    arc,
                    lo,
                    hi,
                    contractible: hi - lo < TAU - gtol,
                });
            }
        }
        out.push(runs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ConvexBody, OrientedHyperplane};
    use crate::operad::{validate, DecoratedTree};
    use crate::umkehr::FlatMetric;
    use std::f64::consts::PI;

    fn chord() -> Cleavage {
        validate(
            &DecoratedTree::internal(
                OrientedHyperplane::new(vec![1.0, 0.0], 0.0).unwrap(),
                DecoratedTree::leaf(1),
                DecoratedTree::leaf(2),
            ),
            &ConvexBody::ball(2),
        )
        .unwrap()
    }

    fn f1(th: f64) -> Point {
        Point::xy(th.cos() + 0.2 * (2.0 * th).sin(), 0.8 * th.sin())
    }

    /// Loop 2 copies loop 1 through the α-partner `θ ↦ π - θ` of the chord
    /// cleavage, displaced by `bump`.
    fn pair(m: usize, bump: impl Fn(f64) -> f64) -> DiscreteEmbedding {
        let params: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let l1 = params.iter().map(|&th| f1(th)).collect();
        let l2 = params
            .iter()
            .map(|&th| f1(PI - th).add(&Point::xy(0.3, 0.4).scale(bump(th))))
            .collect();
        DiscreteEmbedding::new(FlatMetric::euclidean(2).unwrap(), vec![l1, l2]).unwrap()
    }

    #[test]
    fn complement_of_arcs() {
        let c = complement_arcs(&[Arc::new(-PI / 2.0, PI / 2.0)]);
        assert_eq!(c.len(), 1);
        assert!((c[0].start - PI / 2.0).abs() < 1e-12 && (c[0].len() - PI).abs() < 1e-12);
        assert!(complement_arcs(&[Arc::full()]).is_empty());
        let c = complement_arcs(&[Arc::new(0.0, 1.0), Arc::new(2.0, 3.0)]);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn disjoint_loops_have_empty_locus() {
        let f = pair(64, |_| 1.0);
        let loc = self_intersection_locus(&f, &chord(), 1e-9).unwrap();
        assert!(loc.iter().all(Vec::is_empty));
    }

    #[test]
    fn touching_at_one_parameter() {
        let y0 = TAU * 5.0 / 64.0;
        let f = pair(64, |th| 1.0 - (th - y0).cos());
        let loc = self_intersection_locus(&f, &chord(), 1e-9).unwrap();
        // label 2 meets at y0 itself, label 1 at its partner π - y0
        assert_eq!(loc[1].len(), 1);
        assert!(loc[1][0].is_degenerate());
        assert!((Arc::full().offset_of(loc[1][0].lo) - y0).abs() < 1e-9);
        assert_eq!(loc[0].len(), 1);
        assert!(loc[0][0].is_degenerate());
        assert!((loc[0][0].lo.rem_euclid(TAU) - (PI - y0)).abs() < 1e-9);
    }

    #[test]
    fn quarter_overlap() {
        let f = pair(64, |th| {
            let w = crate::geom::wrap_angle(th).abs();
            (w - PI / 4.0).max(0.0)
        });
        let loc = self_intersection_locus(&f, &chord(), 1e-9).unwrap();
        for runs in &loc {
            assert_eq!(runs.len(), 1);
            assert!((runs[0].len() - PI / 2.0).abs() < 1e-9, "{}", runs[0].len());
            assert!(runs[0].contractible);
        }
        // pairwise image-distance scan oracle on label 2 (right arc)
        let hits = (0..=1000)
            .map(|j| -PI / 2.0 + PI * j as f64 / 1000.0)
            .filter(|&y| f.eval(2, y).dist(&f.eval(1, PI - y)) <= 1e-9)
            .count();
        assert_eq!(hits, 501);
    }
}
