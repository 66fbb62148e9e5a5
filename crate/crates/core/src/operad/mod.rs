//! Decorated trees, the cleaving conditions, timbers, chop equivalence,
//! operadic composition and the symmetric-group action.

mod permutation;
pub mod random;
mod tree;

use thiserror::Error;

use crate::geom::{
    self, centroid, clip, sphere_trace, Arc, CentroidEstimate, ConvexBody,
    GeomConfig, GeomError, OrientedHyperplane, Side, SphereRegion,
};

pub use permutation::Permutation;
pub use tree::{DecoratedTree, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperadError {
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("plane at {path} does not cleave its region: the {side:?} side has empty sphere trace")]
    NonCleaving { node: usize, path: String, side: Side },
    #[error("plane at {path} misses its region")]
    DegeneratePlane { node: usize, path: String },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("label {label} out of range for arity {arity}")]
    LabelOutOfRange { label: usize, arity: usize },
    #[error("no valid cleavage after {0} attempts")]
    GaveUp(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Where a constraint of a timber or node region came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceOrigin {
    /// Constraint of the incoming colour, by index.
    Incoming(usize),
    /// Decoration of the internal node with this preorder index.
    Node(usize),
}

/// An internal knot of a validated tree together with the region it cleaves.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeInfo {
    pub id: usize,
    pub path: String,
    pub plane: OrientedHyperplane,
    pub region: ConvexBody,
    pub origins: Vec<FaceOrigin>,
}

/// Outgoing colour `N_i` together with its body `U(N_i)` in the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Timber {
    pub label: usize,
    pub body: ConvexBody,
    /// `origins[c]` is the source of `body.constraints()[c]`.
    pub origins: Vec<FaceOrigin>,
    pub trace: SphereRegion,
    pub centroid: CentroidEstimate,
}

/// A decorated tree that satisfies the cleaving conditions inside its
/// incoming colour, with the resulting timbers cached in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cleavage {
    tree: DecoratedTree,
    incoming: ConvexBody,
    cfg: GeomConfig,
    timbers: Vec<Timber>,
    nodes: Vec<NodeInfo>,
}

impl Cleavage {
    pub fn tree(&self) -> &DecoratedTree {
        &self.tree
    }

    pub fn incoming(&self) -> &ConvexBody {
        &self.incoming
    }

    pub fn config(&self) -> &GeomConfig {
        &self.cfg
    }

    pub fn arity(&self) -> usize {
        self.timbers.len()
    }

    /// Ambient dimension `n + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.incoming.dim()
    }

    /// Sphere dimension `n`.
    pub fn sphere_dim(&self) -> usize {
        self.incoming.dim() - 1
    }

    pub fn timbers(&self) -> &[Timber] {
        &self.timbers
    }

    /// Timber with the given label (1-based).
    pub fn timber(&self, label: usize) -> Result<&Timber, OperadError> {
        label
            .checked_sub(1)
            .and_then(|i| self.timbers.get(i))
            .ok_or(OperadError::LabelOutOfRange {
                label,
                arity: self.arity(),
            })
    }

    /// Internal nodes in preorder.
    pub fn nodes(&self) -> &[NodeInfo] {
        &self.nodes
    }
}

/// Validates `tree` against the incoming colour with default tolerances.
pub fn validate(tree: &DecoratedTree, incoming: &ConvexBody) -> Result<Cleavage, OperadError> {
    validate_with(tree, incoming, &GeomConfig::default())
}

struct Descent<'a> {
    cfg: &'a GeomConfig,
    nodes: Vec<NodeInfo>,
    leaves: Vec<(usize, ConvexBody, Vec<FaceOrigin>, SphereRegion)>,
}

impl Descent<'_> {
    fn visit(
        &mut self,
        node: &Node,
        region: ConvexBody,
        origins: Vec<FaceOrigin>,
        trace: SphereRegion,
        path: String,
    ) -> Result<(), OperadError> {
        match node {
            Node::Leaf(label) => {
                self.leaves.push((*label, region, origins, trace));
                Ok(())
            }
            Node::Internal { plane, left, right } => {
                let id = self.nodes.len();
                if plane_misses(plane, &region, self.cfg.tol)? {
                    return Err(OperadError::DegeneratePlane { node: id, path });
                }
                let plus = clip(&region, plane, Side::Plus)?;
                let minus = clip(&region, plane, Side::Minus)?;
                let plus_trace = sphere_trace(&plus, self.cfg)?;
                let minus_trace = sphere_trace(&minus, self.cfg)?;
                for (side, t) in [(Side::Plus, &plus_trace), (Side::Minus, &minus_trace)] {
                    if !t.is_nonempty(self.cfg.tol) {
                        return Err(OperadError::NonCleaving { node: id, path, side });
                    }
                }
                self.nodes.push(NodeInfo {
                    id,
                    path: path.clone(),
                    plane: plane.clone(),
                    region,
                    origins: origins.clone(),
                });
                let mut child_origins = origins;
                child_origins.push(FaceOrigin::Node(id));
                self.visit(left, plus, child_origins.clone(), plus_trace, format!("{path}.left"))?;
                self.visit(right, minus, child_origins, minus_trace, format!("{path}.right"))
            }
        }
    }
}

/// Whether `plane` leaves the whole region strictly on one side.
fn plane_misses(plane: &OrientedHyperplane, region: &ConvexBody, tol: f64) -> Result<bool, GeomError> {
    if plane.offset().abs() >= 1.0 {
        return Ok(true);
    }
    if region.dim() == 2 {
        let r = region.planar(tol)?;
        let n = plane.normal();
        return Ok(match r.extent([n[0], n[1]]) {
            Some((lo, hi)) => lo - plane.offset() > tol || hi - plane.offset() < -tol,
            None => true,
        });
    }
    Ok(false)
}

/// Recursive descent: every internal plane must split its inherited region
/// into two parts with nonempty sphere trace. The normal side goes to the left
/// branch.
pub fn validate_with(
    tree: &DecoratedTree,
    incoming: &ConvexBody,
    cfg: &GeomConfig,
) -> Result<Cleavage, OperadError> {
    let dim = incoming.dim();
    if dim < 2 {
        return Err(OperadError::Malformed("ambient dimension must be at least 2".into()));
    }
    tree.check(dim)?;
    let mut d = Descent {
        cfg,
        nodes: Vec::new(),
        leaves: Vec::new(),
    };
    let origins = (0..incoming.constraints().len()).map(FaceOrigin::Incoming).collect();
    let trace = sphere_trace(incoming, cfg)?;
    if !trace.is_nonempty(cfg.tol) {
        return Err(OperadError::Malformed("incoming colour has empty sphere trace".into()));
    }
    d.visit(tree.root(), incoming.clone(), origins, trace, "root".into())?;
    let mut leaves = d.leaves;
    leaves.sort_by_key(|l| l.0);
    let timbers = leaves
        .into_iter()
        .map(|(label, body, origins, trace)| {
            let centroid = centroid(&body, cfg)?;
            Ok(Timber {
                label,
                body,
                origins,
                trace,
                centroid,
            })
        })
        .collect::<Result<Vec<_>, GeomError>>()?;
    Ok(Cleavage {
        tree: tree.clone(),
        incoming: incoming.clone(),
        cfg: *cfg,
        timbers,
        nodes: d.nodes,
    })
}

fn arcs_match(a: &[Arc], b: &[Arc], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let found = b.iter().enumerate().position(|(j, y)| {
            !used[j] && {
                let d = (x.start - y.start).rem_euclid(std::f64::consts::TAU);
                d.min(std::f64::consts::TAU - d) <= tol && (x.len() - y.len()).abs() <= tol
            }
        });
        match found {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

fn regions_match(a: &SphereRegion, b: &SphereRegion, tol: f64) -> bool {
    match (a, b) {
        (SphereRegion::Arcs(x), SphereRegion::Arcs(y)) => arcs_match(x, y, tol),
        (SphereRegion::Sampled(x), SphereRegion::Sampled(y)) => x
            .points
            .iter()
            .chain(&y.points)
            .all(|p| {
                let sa = x.body.constraint_slack(p.coords());
                let sb = y.body.constraint_slack(p.coords());
                sa.abs() <= tol || sb.abs() <= tol || (sa > 0.0) == (sb > 0.0)
            }),
        _ => false,
    }
}

/// Chop equivalence: the two cleavages produce the same outgoing colours,
/// label by label.
pub fn chop_equal(a: &Cleavage, b: &Cleavage, tol: f64) -> Result<bool, OperadError> {
    if a.arity() != b.arity() {
        return Err(OperadError::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(OperadError::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    Ok(a
        .timbers
        .iter()
        .zip(&b.timbers)
        .all(|(x, y)| regions_match(&x.trace, &y.trace, tol)))
}

/// Operadic composition `outer ∘_i inner`: `inner` cleaves the timber `N_i`
/// of `outer`.
pub fn compose(outer: &Cleavage, i: usize, inner: &DecoratedTree) -> Result<Cleavage, OperadError> {
    let target = outer.timber(i)?;
    validate_with(inner, &target.body, &outer.cfg)?;
    let grafted = outer.tree.graft(i, inner);
    validate_with(&grafted, &outer.incoming, &outer.cfg)
}

/// Relabels leaves by `sigma`: the timber labelled `l` becomes `sigma(l)`.
pub fn permute(c: &Cleavage, sigma: &Permutation) -> Result<Cleavage, OperadError> {
    if sigma.len() != c.arity() {
        return Err(OperadError::ArityMismatch {
            expected: c.arity(),
            found: sigma.len(),
        });
    }
    let mut timbers = c.timbers.clone();
    for t in &c.timbers {
        let new_label = sigma.apply(t.label);
        timbers[new_label - 1] = Timber {
            label: new_label,
            ..t.clone()
        };
    }
    Ok(Cleavage {
        tree: c.tree.relabel(|l| sigma.apply(l)),
        incoming: c.incoming.clone(),
        cfg: c.cfg,
        timbers,
        nodes: c.nodes.clone(),
    })
}

/// Chord of a node: its plane intersected with the node's inherited region
/// (planar case), as a pair of endpoints.
pub fn node_chord(node: &NodeInfo) -> Option<([f64; 2], [f64; 2])> {
    if node.region.dim() != 2 {
        return None;
    }
    let n = node.plane.normal();
    let r = node.plane.offset();
    let base = [r * n[0], r * n[1]];
    let dir = [-n[1], n[0]];
    let half = (1.0 - r * r).max(0.0).sqrt();
    let (mut lo, mut hi) = (-half, half);
    for c in node.region.constraints() {
        // slack(base + s dir) = a + b s >= 0
        let a = c.slack(&base);
        let b = c.side.sign() * geom::dot(c.plane.normal(), &dir);
        if b.abs() < 1e-15 {
            if a < 0.0 {
                return None;
            }
        } else if b > 0.0 {
            lo = lo.max(-a / b);
        } else {
            hi = hi.min(-a / b);
        }
    }
    if hi < lo {
        return None;
    }
    Some((
        [base[0] + lo * dir[0], base[1] + lo * dir[1]],
        [base[0] + hi * dir[0], base[1] + hi * dir[1]],
    ))
}
