use std::collections::BTreeSet;

use crate::geom::OrientedHyperplane;

use super::OperadError;

/// A node of a binary planar tree whose internal knots carry hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf(usize),
    Internal {
        plane: OrientedHyperplane,
        /// Cleaves the side in the direction of the normal.
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn leaves_into(&self, out: &mut Vec<usize>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Internal { left, right, .. } => {
                left.leaves_into(out);
                right.leaves_into(out);
            }
        }
    }

    fn planes_into<'a>(&'a self, out: &mut Vec<&'a OrientedHyperplane>) {
        if let Node::Internal { plane, left, right } = self {
            out.push(plane);
            left.planes_into(out);
            right.planes_into(out);
        }
    }

    fn map_labels(&self, f: &impl Fn(usize) -> usize) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(f(*l)),
            Node::Internal { plane, left, right } => Node::Internal {
                plane: plane.clone(),
                left: Box::new(left.map_labels(f)),
                right: Box::new(right.map_labels(f)),
            },
        }
    }

    fn replace_leaf(&self, label: usize, with: &Node) -> Node {
        match self {
            Node::Leaf(l) if *l == label => with.clone(),
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Internal { plane, left, right } => Node::Internal {
                plane: plane.clone(),
                left: Box::new(left.replace_leaf(label, with)),
                right: Box::new(right.replace_leaf(label, with)),
            },
        }
    }
}

/// Binary rooted planar tree with leaves labelled by a permutation of `1..=k`
/// and `k - 1` internal knots decorated by oriented hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedTree {
    root: Node,
}

impl DecoratedTree {
    pub fn leaf(label: usize) -> Self {
        Self {
            root: Node::Leaf(label),
        }
    }

    pub fn internal(plane: OrientedHyperplane, left: DecoratedTree, right: DecoratedTree) -> Self {
        Self {
            root: Node::Internal {
                plane,
                left: Box::new(left.root),
                right: Box::new(right.root),
            },
        }
    }

    pub fn from_root(root: Node) -> Self {
        Self { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Leaf labels in planar (left-to-right) order.
    pub fn leaf_labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.leaves_into(&mut out);
        out
    }

    pub fn arity(&self) -> usize {
        self.leaf_labels().len()
    }

    /// Decorations in preorder, which is also the node numbering used by
    /// [`super::Cleavage::nodes`].
    pub fn planes(&self) -> Vec<&OrientedHyperplane> {
        let mut out = Vec::new();
        self.root.planes_into(&mut out);
        out
    }

    /// Checks that the labels form a permutation of `1..=k` and that every
    /// plane lives in `R^dim`.
    pub fn check(&self, dim: usize) -> Result<(), OperadError> {
        let labels = self.leaf_labels();
        let k = labels.len();
        let set: BTreeSet<usize> = labels.iter().copied().collect();
        if set.len() != k || set.iter().any(|&l| l == 0 || l > k) {
            return Err(OperadError::Malformed(format!(
                "leaf labels {labels:?} are not a permutation of 1..={k}"
            )));
        }
        for p in self.planes() {
            if p.dim() != dim {
                return Err(OperadError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(())
    }

    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> DecoratedTree {
        Self {
            root: self.root.map_labels(&f),
        }
    }

    /// Grafts `inner` (arity `m`) at leaf `label` with the splice convention:
    /// labels below `label` are kept, labels above shift by `m - 1`, and the
    /// inner labels are offset by `label - 1`.
    pub fn graft(&self, label: usize, inner: &DecoratedTree) -> DecoratedTree {
        let m = inner.arity();
        let shifted_outer = self.relabel(|j| if j > label { j + m - 1 } else { j });
        let shifted_inner = inner.relabel(|l| l + label - 1);
        Self {
            root: shifted_outer.root.replace_leaf(label, &shifted_inner.root),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> OrientedHyperplane {
        OrientedHyperplane::new(vec![1.0, 0.0], 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_labels() {
        let t = DecoratedTree::internal(plane(), DecoratedTree::leaf(1), DecoratedTree::leaf(1));
        assert!(matches!(t.check(2), Err(OperadError::Malformed(_))));
        let t = DecoratedTree::internal(plane(), DecoratedTree::leaf(1), DecoratedTree::leaf(3));
        assert!(t.check(2).is_err());
        let t = DecoratedTree::internal(plane(), DecoratedTree::leaf(2), DecoratedTree::leaf(1));
        assert!(t.check(2).is_ok());
        assert!(matches!(t.check(3), Err(OperadError::DimensionMismatch { .. })));
    }

    #[test]
    fn graft_relabels_by_splice() {
        // outer leaves 1 2 3, graft a 2-ary tree at leaf 2
        let outer = DecoratedTree::internal(
            plane(),
            DecoratedTree::leaf(1),
            DecoratedTree::internal(plane(), DecoratedTree::leaf(3), DecoratedTree::leaf(2)),
        );
        let inner = DecoratedTree::internal(plane(), DecoratedTree::leaf(2), DecoratedTree::leaf(1));
        let g = outer.graft(2, &inner);
        assert_eq!(g.leaf_labels(), vec![1, 4, 3, 2]);
        assert_eq!(g.planes().len(), 3);
        g.check(2).unwrap();
    }

    #[test]
    fn graft_unit_is_identity() {
        let outer = DecoratedTree::internal(plane(), DecoratedTree::leaf(2), DecoratedTree::leaf(1));
        assert_eq!(outer.graft(1, &DecoratedTree::leaf(1)), outer);
        assert_eq!(outer.graft(2, &DecoratedTree::leaf(1)), outer);
    }
}
