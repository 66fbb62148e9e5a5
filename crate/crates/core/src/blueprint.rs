//! Blueprint geometry of a planar cleavage: the faces `∂U(N_i)` lying on the
//! decoration planes, their connected components, the centroid-ray map `α`
//! from the complements `∁N_i` onto the blueprint, its preimages, spines, the
//! thickened blueprint, and the stable-degree bookkeeping.
//!
//! Faces, components and thickening are exact for sphere dimension 1. The map
//! `α` itself is dimension-generic.

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::geom::{point_segment, segment_boundary_hit, segment_closest, GeomError, Point};
use crate::operad::{Cleavage, FaceOrigin, OperadError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlueprintError {
    #[error("only sphere dimension 1 is supported here, got {0}")]
    Unsupported(usize),
    #[error("point is not on the blueprint")]
    NotOnBlueprint,
    #[error("point lies in the timber N_{0}, not in its complement")]
    InsideTimber(usize),
    #[error("point is not on the unit sphere")]
    NotOnSphere,
    #[error("sampling density must be at least 2, got {0}")]
    BadDensity(usize),
    #[error("spine vertex {vertex} out of range for dimension {p}")]
    SpineVertex { p: usize, vertex: usize },
    #[error("dim(M) must be at least 1")]
    BadManifoldDim,
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A face of `∂U(N_i)` on the plane of internal node `node`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacePiece {
    pub timber: usize,
    pub node: usize,
    pub from: Point,
    pub to: Point,
}

/// Maximal segment of the blueprint on one decoration plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlueprintPiece {
    pub node: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Blueprint {
    /// `faces[i - 1]` are the decoration faces of timber `i`.
    faces: Vec<Vec<FacePiece>>,
    pieces: Vec<BlueprintPiece>,
    /// Component id per piece, numbered by first appearance.
    piece_component: Vec<usize>,
    components: usize,
    tol: f64,
}

impl Blueprint {
    pub fn faces(&self, label: usize) -> &[FacePiece] {
        &self.faces[label - 1]
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &FacePiece> {
        self.faces.iter().flatten()
    }

    pub fn pieces(&self) -> &[BlueprintPiece] {
        &self.pieces
    }

    pub fn piece_component(&self, piece: usize) -> usize {
        self.piece_component[piece]
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Labels `i` with `b ∈ ∂U(N_i)` on a decoration face, ascending.
    pub fn participants(&self, b: &Point, tol: f64) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, fs)| {
                fs.iter()
                    .any(|f| point_segment(b.coords(), f.from.coords(), f.to.coords()).1 <= tol)
            })
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Component of the piece nearest to `b`, if `b` is on the blueprint.
    pub fn component_of(&self, b: &Point) -> Option<usize> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, point_segment(b.coords(), p.from.coords(), p.to.coords()).1))
            .filter(|(_, d)| *d <= self.tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| self.piece_component[i])
    }
}

fn require_planar(c: &Cleavage) -> Result<(), BlueprintError> {
    match c.sphere_dim() {
        1 => Ok(()),
        n => Err(BlueprintError::Unsupported(n)),
    }
}

/// Faces of every timber on decoration planes, and their union merged into
/// one maximal segment per overlapping run on each plane.
pub fn blueprint(c: &Cleavage) -> Result<Blueprint, BlueprintError> {
    require_planar(c)?;
    let tol = c.config().tol;
    let mut faces = Vec::with_capacity(c.arity());
    for t in c.timbers() {
        let region = t.body.planar(tol)?;
        let mut mine = Vec::new();
        for (from, to, face) in region.segments() {
            if let FaceOrigin::Node(node) = t.origins[face] {
                let (from, to) = (Point::xy(from[0], from[1]), Point::xy(to[0], to[1]));
                if from.dist(&to) > tol {
                    mine.push(FacePiece {
                        timber: t.label,
                        node,
                        from,
                        to,
                    });
                }
            }
        }
        faces.push(mine);
    }

    let mut pieces = Vec::new();
    for node in c.nodes() {
        let n = node.plane.normal();
        let dir = Point::xy(-n[1], n[0]);
        let base = Point::xy(n[0], n[1]).scale(node.plane.offset());
        let mut intervals: Vec<(f64, f64)> = faces
            .iter()
            .flatten()
            .filter(|f: &&FacePiece| f.node == node.id)
            .map(|f| {
                let (a, b) = (f.from.dot(&dir), f.to.dot(&dir));
                (a.min(b), a.max(b))
            })
            .collect();
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + tol => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        for (lo, hi) in merged {
            pieces.push(BlueprintPiece {
                node: node.id,
                from: base.add(&dir.scale(lo)),
                to: base.add(&dir.scale(hi)),
            });
        }
    }

    let mut uf = UnionFind::<usize>::new(pieces.len());
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (_, _, d) = segment_closest(
                pieces[i].from.coords(),
                pieces[i].to.coords(),
                pieces[j].from.coords(),
                pieces[j].to.coords(),
            );
            if d <= tol {
                uf.union(i, j);
            }
        }
    }
    let mut ids: Vec<Option<usize>> = vec![None; pieces.len()];
    let mut piece_component = Vec::with_capacity(pieces.len());
    let mut components = 0;
    for i in 0..pieces.len() {
        let root = uf.find(i);
        let id = *ids[root].get_or_insert_with(|| {
            components += 1;
            components - 1
        });
        piece_component.push(id);
    }
    Ok(Blueprint {
        faces,
        pieces,
        piece_component,
        components,
        tol,
    })
}

/// `|π₀(β)|`, the number of connected components of the blueprint (0 when the
/// blueprint is empty).
pub fn components(b: &Blueprint) -> usize {
    b.components
}

/// Image of `α` on one point of a complement.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaHit {
    pub point: Point,
    /// Parameter along the segment from `s` to the centroid.
    pub t: f64,
    pub face: Option<FaceOrigin>,
    pub corner: bool,
}

/// `α(s)` for `s ∈ ∁N_i`: the point where the segment from `s` to the centroid
/// `c_i` of `U(N_i)` enters `U(N_i)`.
pub fn alpha(c: &Cleavage, i: usize, s: &Point) -> Result<AlphaHit, BlueprintError> {
    let tol = c.config().tol;
    let t = c.timber(i)?;
    if (s.norm() - 1.0).abs() > tol {
        return Err(BlueprintError::NotOnSphere);
    }
    if t.trace.contains(s, tol) || t.body.constraint_slack(s.coords()) >= -tol {
        return Err(BlueprintError::InsideTimber(i));
    }
    let hit = segment_boundary_hit(&t.body, s, &t.centroid.point, tol).map_err(|e| match e {
        GeomError::ViolatedPre(_) => BlueprintError::InsideTimber(i),
        e => e.into(),
    })?;
    Ok(AlphaHit {
        point: hit.point,
        t: hit.t,
        face: hit.face.map(|f| t.origins[f]),
        corner: hit.corner,
    })
}

/// Exit point on the unit sphere of the ray from `from` through `through`.
pub fn ray_to_sphere(from: &Point, through: &Point) -> Point {
    let d = through.sub(from);
    let a = d.dot(&d);
    let b = from.dot(&d);
    let c = from.dot(from) - 1.0;
    let lambda = (-b + (b * b - a * c).max(0.0).sqrt()) / a;
    let s = from.add(&d.scale(lambda));
    let n = s.norm();
    s.scale(1.0 / n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preimage {
    pub label: usize,
    pub point: Point,
    /// Angle of `point` on the circle.
    pub theta: f64,
}

/// `α^{-1}(b)`: for every timber whose faces contain `b`, the sphere point
/// hit by the ray from its centroid through `b`. Ordered by label.
pub fn alpha_preimage(c: &Cleavage, b: &Point, tol: f64) -> Result<Vec<Preimage>, BlueprintError> {
    let bp = blueprint(c)?;
    alpha_preimage_in(c, &bp, b, tol)
}

/// [`alpha_preimage`] against a precomputed blueprint.
pub fn alpha_preimage_in(
    c: &Cleavage,
    bp: &Blueprint,
    b: &Point,
    tol: f64,
) -> Result<Vec<Preimage>, BlueprintError> {
    let labels = bp.participants(b, tol);
    if labels.is_empty() {
        return Err(BlueprintError::NotOnBlueprint);
    }
    labels
        .into_iter()
        .map(|label| {
            let centre = &c.timber(label)?.centroid.point;
            let s = ray_to_sphere(centre, b);
            Ok(Preimage {
                label,
                theta: s.angle(),
                point: s,
            })
        })
        .collect()
}

/// The `i`-spine of `Δ^p`: the edges of the simplex containing vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spine {
    pub p: usize,
    pub vertex: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn spine(p: usize, i: usize) -> Result<Spine, BlueprintError> {
    if i > p {
        return Err(BlueprintError::SpineVertex { p, vertex: i });
    }
    Ok(Spine {
        p,
        vertex: i,
        edges: (0..=p).filter(|&j| j != i).map(|j| (i, j)).collect(),
    })
}

/// A blueprint point with the timbers meeting there and one spine per
/// participant; spine vertex `j` stands for label `participants[j]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlueprintSample {
    pub point: Point,
    pub participants: Vec<usize>,
    pub component: usize,
    pub spines: Vec<Spine>,
}

impl BlueprintSample {
    /// `p_b`, one less than the number of participants.
    pub fn simplex_dim(&self) -> usize {
        self.participants.len().saturating_sub(1)
    }

    /// Edges of spine `j` translated to timber labels, i.e. the image of
    /// `spine^{p_b}[j]` inside `spine^{k-1}[participants[j]]`.
    pub fn labelled_spine(&self, j: usize) -> Vec<(usize, usize)> {
        self.spines[j]
            .edges
            .iter()
            .map(|&(a, b)| (self.participants[a], self.participants[b]))
            .collect()
    }
}

/// Finite model of `β^thick`: samples along every blueprint piece with their
/// spines.
#[derive(Debug, Clone, PartialEq)]
pub struct ThickenedBlueprint {
    pub blueprint: Blueprint,
    pub samples: Vec<BlueprintSample>,
    pub components: usize,
    pub density: usize,
}

/// Samples every piece at `density` evenly spaced points (endpoints included)
/// plus every point where another piece touches it.
pub fn thicken(c: &Cleavage, density: usize) -> Result<ThickenedBlueprint, BlueprintError> {
    if density < 2 {
        return Err(BlueprintError::BadDensity(density));
    }
    let bp = blueprint(c)?;
    let tol = c.config().tol;
    let pieces = bp.pieces();
    let mut raw: Vec<(Point, usize)> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        for j in 0..density {
            raw.push((p.from.lerp(&p.to, j as f64 / (density - 1) as f64), i));
        }
        for q in pieces.iter() {
            let (s, _, d) = segment_closest(p.from.coords(), p.to.coords(), q.from.coords(), q.to.coords());
            if d <= tol {
                raw.push((p.from.lerp(&p.to, s), i));
            }
        }
    }
    let mut samples: Vec<BlueprintSample> = Vec::new();
    for (point, piece) in raw {
        if samples.iter().any(|s| s.point.dist(&point) <= tol) {
            continue;
        }
        let participants = bp.participants(&point, tol);
        let p = participants.len().saturating_sub(1);
        let spines = (0..participants.len())
            .map(|j| spine(p, j))
            .collect::<Result<Vec<_>, _>>()?;
        samples.push(BlueprintSample {
            point,
            participants,
            component: bp.piece_component(piece),
            spines,
        });
    }
    Ok(ThickenedBlueprint {
        components: bp.components,
        blueprint: bp,
        samples,
        density,
    })
}

/// Suspension degree carried by a cleavage: `dim(M)` per blueprint component,
/// plus the padding that brings the total to `dim(M)·(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StableDegree {
    pub degree: usize,
    pub padding: usize,
}

impl StableDegree {
    pub fn total(&self) -> usize {
        self.degree + self.padding
    }
}

pub fn stable_degree(c: &Cleavage, dim_m: usize) -> Result<StableDegree, BlueprintError> {
    if dim_m < 1 {
        return Err(BlueprintError::BadManifoldDim);
    }
    let gamma = components(&blueprint(c)?);
    let k = c.arity();
    Ok(StableDegree {
        degree: dim_m * gamma,
        padding: dim_m * (k - 1 - gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ConvexBody, OrientedHyperplane};
    use crate::operad::{node_chord, validate, DecoratedTree};
    use std::f64::consts::PI;

    fn plane(nx: f64, ny: f64, r: f64) -> OrientedHyperplane {
        OrientedHyperplane::new(vec![nx, ny], r).unwrap()
    }

    fn leaf(l: usize) -> DecoratedTree {
        DecoratedTree::leaf(l)
    }

    fn chord() -> Cleavage {
        validate(
            &DecoratedTree::internal(plane(1.0, 0.0, 0.0), leaf(1), leaf(2)),
            &ConvexBody::ball(2),
        )
        .unwrap()
    }

    fn tee() -> Cleavage {
        validate(
            &DecoratedTree::internal(
                plane(1.0, 0.0, 0.0),
                DecoratedTree::internal(plane(0.0, 1.0, 0.0), leaf(1), leaf(2)),
                leaf(3),
            ),
            &ConvexBody::ball(2),
        )
        .unwrap()
    }

    fn parallel() -> Cleavage {
        validate(
            &DecoratedTree::internal(
                plane(1.0, 0.0, -0.5),
                DecoratedTree::internal(plane(1.0, 0.0, 0.5), leaf(1), leaf(2)),
                leaf(3),
            ),
            &ConvexBody::ball(2),
        )
        .unwrap()
    }

    fn same_segment(a: &Point, b: &Point, p: [f64; 2], q: [f64; 2]) -> bool {
        let (p, q) = (Point::xy(p[0], p[1]), Point::xy(q[0], q[1]));
        (a.dist(&p) < 1e-12 && b.dist(&q) < 1e-12) || (a.dist(&q) < 1e-12 && b.dist(&p) < 1e-12)
    }

    #[test]
    fn single_leaf_blueprint_is_empty() {
        let c = validate(&leaf(1), &ConvexBody::ball(2)).unwrap();
        let b = blueprint(&c).unwrap();
        assert!(b.is_empty());
        assert_eq!(components(&b), 0);
        assert_eq!(stable_degree(&c, 5).unwrap(), StableDegree { degree: 0, padding: 0 });
    }

    #[test]
    fn chord_blueprint() {
        let b = blueprint(&chord()).unwrap();
        assert_eq!(b.pieces().len(), 1);
        let p = &b.pieces()[0];
        assert!(same_segment(&p.from, &p.to, [0.0, -1.0], [0.0, 1.0]));
        for label in 1..=2 {
            let f = b.faces(label);
            assert_eq!(f.len(), 1);
            assert!(same_segment(&f[0].from, &f[0].to, [0.0, -1.0], [0.0, 1.0]));
        }
        assert_eq!(components(&b), 1);
    }

    #[test]
    fn tee_blueprint_matches_node_chords() {
        let c = tee();
        let b = blueprint(&c).unwrap();
        assert_eq!(b.pieces().len(), 2);
        assert!(same_segment(&b.pieces()[0].from, &b.pieces()[0].to, [0.0, -1.0], [0.0, 1.0]));
        assert!(same_segment(&b.pieces()[1].from, &b.pieces()[1].to, [0.0, 0.0], [1.0, 0.0]));
        for (piece, node) in b.pieces().iter().zip(c.nodes()) {
            let (p, q) = node_chord(node).unwrap();
            assert!(same_segment(&piece.from, &piece.to, p, q));
        }
        assert_eq!(components(&b), 1);
    }

    #[test]
    fn parallel_chords_are_two_components() {
        let c = parallel();
        let b = blueprint(&c).unwrap();
        assert_eq!(components(&b), 2);
        assert_eq!(stable_degree(&c, 2).unwrap(), StableDegree { degree: 4, padding: 0 });
    }

    #[test]
    fn stable_degree_with_collision() {
        let d = stable_degree(&tee(), 2).unwrap();
        assert_eq!(d, StableDegree { degree: 2, padding: 2 });
        assert_eq!(d.total(), 4);
        assert_eq!(stable_degree(&tee(), 0), Err(BlueprintError::BadManifoldDim));
    }

    #[test]
    fn alpha_examples() {
        let c = chord();
        let hit = alpha(&c, 1, &Point::xy(-1.0, 0.0)).unwrap();
        assert!(hit.point.norm() < 1e-12);
        assert_eq!(hit.face, Some(FaceOrigin::Node(0)));

        // segment from s to the centroid crosses x = 0 where t = s_x / (s_x - c_x)
        let s = Point::on_circle(2.5);
        let cx = 4.0 / (3.0 * PI);
        let hit = alpha(&c, 1, &s).unwrap();
        let t = s[0] / (s[0] - cx);
        let y = s[1] * (1.0 - t);
        assert!(hit.point[0].abs() < 1e-12);
        assert!((hit.point[1] - y).abs() < 1e-12 && y.abs() < 1.0);

        assert_eq!(alpha(&c, 1, &Point::xy(1.0, 0.0)), Err(BlueprintError::InsideTimber(1)));
        assert_eq!(alpha(&c, 1, &Point::xy(0.5, 0.0)), Err(BlueprintError::NotOnSphere));
    }

    #[test]
    fn preimage_counts() {
        let c = chord();
        let pre = alpha_preimage(&c, &Point::xy(0.0, 0.5), 1e-9).unwrap();
        assert_eq!(pre.len(), 2);
        assert_eq!(pre.iter().map(|p| p.label).collect::<Vec<_>>(), vec![1, 2]);
        for p in &pre {
            let back = alpha(&c, p.label, &p.point).unwrap();
            assert!(back.point.dist(&Point::xy(0.0, 0.5)) < 1e-9);
        }
        let c = tee();
        let pre = alpha_preimage(&c, &Point::xy(0.0, 0.0), 1e-9).unwrap();
        assert_eq!(pre.len(), 3);
        assert_eq!(
            alpha_preimage(&c, &Point::xy(-0.5, 0.3), 1e-9),
            Err(BlueprintError::NotOnBlueprint)
        );
    }

    #[test]
    fn spine_examples() {
        assert_eq!(spine(1, 0).unwrap().edges, vec![(0, 1)]);
        assert_eq!(spine(2, 1).unwrap().edges, vec![(1, 0), (1, 2)]);
        assert_eq!(spine(3, 0).unwrap().edges.len(), 3);
        assert!(spine(2, 3).is_err());
    }

    #[test]
    fn thicken_chord() {
        let tb = thicken(&chord(), 3).unwrap();
        assert_eq!(tb.samples.len(), 3);
        for s in &tb.samples {
            assert_eq!(s.participants, vec![1, 2]);
            assert_eq!(s.spines.len(), 2);
            assert!(s.spines.iter().all(|sp| sp.p == 1));
        }
        assert!(thicken(&chord(), 1).is_err());
    }

    #[test]
    fn thicken_parallel_and_tee() {
        let tb = thicken(&parallel(), 5).unwrap();
        assert_eq!(tb.components, 2);
        assert!(tb.samples.iter().all(|s| s.participants.len() == 2));
        let comps: std::collections::BTreeSet<_> = tb.samples.iter().map(|s| s.component).collect();
        assert_eq!(comps.len(), 2);

        let c = tee();
        let tb = thicken(&c, 4).unwrap();
        let origin = tb
            .samples
            .iter()
            .find(|s| s.point.norm() < 1e-12)
            .expect("junction sampled");
        assert_eq!(origin.participants, vec![1, 2, 3]);
        assert!(origin.spines.iter().all(|sp| sp.p == 2 && sp.edges.len() == 2));
        assert_eq!(
            alpha_preimage(&c, &origin.point, 1e-9).unwrap().len(),
            origin.participants.len()
        );
        // spine of participant j sits inside spine^{k-1}[label] on labels
        for j in 0..3 {
            let lab = origin.participants[j];
            assert!(origin.labelled_spine(j).iter().all(|&(a, _)| a == lab));
        }
    }
}
