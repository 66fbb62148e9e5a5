//! Seeded random cleavages for property testing.
//!
//! Tree shapes are uniform over binary planar shapes (Rémy growth), leaf
//! labels are a uniform permutation, normals are uniform on the sphere and
//! offsets uniform in `(-1, 1)`. Draws that violate the cleaving conditions are
//! rejected.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geom::{ConvexBody, GeomConfig, OrientedHyperplane};

use super::{validate_with, Cleavage, DecoratedTree, Node, OperadError};

/// Default rejection budget for [`random_cleavage`].
pub const MAX_REJECTIONS: usize = 10_000;

#[derive(Clone, Copy)]
enum Shape {
    Leaf,
    Internal(usize, usize),
}

/// Uniform random binary planar shape with `k` leaves, as an arena and root.
fn remy_shape<R: Rng + ?Sized>(rng: &mut R, k: usize) -> (Vec<Shape>, usize) {
    let mut nodes = vec![Shape::Leaf];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut root = 0;
    for _ in 1..k {
        let x = rng.random_range(0..nodes.len());
        let leaf = nodes.len();
        nodes.push(Shape::Leaf);
        parent.push(None);
        let joint = nodes.len();
        let children = if rng.random_bool(0.5) { (x, leaf) } else { (leaf, x) };
        nodes.push(Shape::Internal(children.0, children.1));
        parent.push(parent[x]);
        match parent[x] {
            None => root = joint,
            Some(p) => {
                if let Shape::Internal(l, r) = nodes[p] {
                    nodes[p] = if l == x { Shape::Internal(joint, r) } else { Shape::Internal(l, joint) };
                }
            }
        }
        parent[x] = Some(joint);
        parent[leaf] = Some(joint);
    }
    (nodes, root)
}

pub fn random_plane<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> OrientedHyperplane {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let offset = rng.random_range(-1.0..1.0);
        if let Ok(p) = OrientedHyperplane::new(v, offset) {
            return p;
        }
    }
}

/// A random decorated tree of arity `k` in `R^dim`; not validated.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, dim: usize, k: usize) -> DecoratedTree {
    let (shape, root) = remy_shape(rng, k.max(1));
    let mut labels: Vec<usize> = (1..=k.max(1)).collect();
    labels.shuffle(rng);
    let mut next_label = labels.into_iter();
    fn build<R: Rng + ?Sized>(
        shape: &[Shape],
        at: usize,
        rng: &mut R,
        dim: usize,
        labels: &mut impl Iterator<Item = usize>,
    ) -> Node {
        match shape[at] {
            Shape::Leaf => Node::Leaf(labels.next().expect("one label per leaf")),
            Shape::Internal(l, r) => {
                let plane = random_plane(rng, dim);
                let left = build(shape, l, rng, dim, labels);
                let right = build(shape, r, rng, dim, labels);
                Node::Internal {
                    plane,
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
        }
    }
    DecoratedTree::from_root(build(&shape, root, rng, dim, &mut next_label))
}

/// Rejection-samples a valid cleavage of `S^n` of arity `k`.
pub fn random_cleavage<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    cfg: &GeomConfig,
    max_rejections: usize,
) -> Result<Cleavage, OperadError> {
    let disk = ConvexBody::ball(n + 1);
    for _ in 0..=max_rejections {
        let tree = random_tree(rng, n + 1, k);
        match validate_with(&tree, &disk, cfg) {
            Ok(c) => return Ok(c),
            Err(OperadError::NonCleaving { .. }) | Err(OperadError::DegeneratePlane { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(OperadError::GaveUp(max_rejections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn shape_string(n: &Node) -> String {
        match n {
            Node::Leaf(_) => "x".into(),
            Node::Internal { left, right, .. } => format!("({} {})", shape_string(left), shape_string(right)),
        }
    }

    #[test]
    fn remy_shapes_are_uniform_for_four_leaves() {
        // 5 planar binary shapes with 4 leaves, each with probability 1/5
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts: HashMap<String, usize> = HashMap::new();
        let draws = 20_000;
        for _ in 0..draws {
            let t = random_tree(&mut rng, 2, 4);
            *counts.entry(shape_string(t.root())).or_default() += 1;
        }
        assert_eq!(counts.len(), 5);
        for c in counts.values() {
            let p = *c as f64 / draws as f64;
            assert!((p - 0.2).abs() < 0.015, "{counts:?}");
        }
    }

    #[test]
    fn random_trees_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for k in 1..8 {
            let t = random_tree(&mut rng, 2, k);
            t.check(2).unwrap();
            assert_eq!(t.arity(), k);
            assert_eq!(t.planes().len(), k - 1);
        }
    }

    #[test]
    fn random_cleavage_is_deterministic() {
        let cfg = GeomConfig::default();
        let a = random_cleavage(&mut ChaCha8Rng::seed_from_u64(9), 1, 4, &cfg, MAX_REJECTIONS).unwrap();
        let b = random_cleavage(&mut ChaCha8Rng::seed_from_u64(9), 1, 4, &cfg, MAX_REJECTIONS).unwrap();
        assert_eq!(a.tree(), b.tree());
        assert_eq!(a.arity(), 4);
    }
}
