//! JSON documents for cleavages, loop embeddings, blueprints and umkehr
//! values, plus OBJ export of blueprint faces.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::blueprint::{Blueprint, ThickenedBlueprint};
use crate::geom::{ConvexBody, GeomConfig, OrientedHyperplane, Point};
use crate::operad::{validate_with, Cleavage, DecoratedTree, Node, OperadError};
use crate::umkehr::{DiscreteEmbedding, FlatMetric, ThomValue, UmkehrError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Umkehr(#[from] UmkehrError),
}

fn schema(path: &str, msg: impl Into<String>) -> DocError {
    DocError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn parse_json(text: &str) -> Result<Value, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, DocError> {
    v.get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value, path: &str) -> Result<f64, DocError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, "expected a finite number"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, DocError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_vec(v: &Value, path: &str) -> Result<Vec<f64>, DocError> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array of numbers"))?
        .iter()
        .enumerate()
        .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_node(v: &Value, path: &str) -> Result<Node, DocError> {
    if !v.is_object() {
        return Err(schema(path, "expected an object"));
    }
    if let Some(l) = v.get("leaf") {
        return Ok(Node::Leaf(as_usize(l, &format!("{path}.leaf"))?));
    }
    let p = field(v, "plane", path)?;
    let ppath = format!("{path}.plane");
    let normal = as_vec(field(p, "normal", &ppath)?, &format!("{ppath}.normal"))?;
    let offset = as_f64(field(p, "offset", &ppath)?, &format!("{ppath}.offset"))?;
    let plane = OrientedHyperplane::new(normal, offset).map_err(|e| schema(&ppath, e.to_string()))?;
    let lp = format!("{path}.left");
    let rp = format!("{path}.right");
    Ok(Node::Internal {
        plane,
        left: Box::new(parse_node(field(v, "left", path)?, &lp)?),
        right: Box::new(parse_node(field(v, "right", path)?, &rp)?),
    })
}

/// Parses `{"n": int, "tree": node}` where a node is `{"leaf": label}` or
/// `{"plane": {"normal": [...], "offset": r}, "left": node, "right": node}`.
pub fn parse_tree(text: &str) -> Result<(usize, DecoratedTree), DocError> {
    let v = parse_json(text)?;
    let n = as_usize(field(&v, "n", "root")?, "n")?;
    if n < 1 {
        return Err(schema("n", "sphere dimension must be at least 1"));
    }
    let tree = DecoratedTree::from_root(parse_node(field(&v, "tree", "root")?, "root")?);
    Ok((n, tree))
}

pub fn parse_cleavage(text: &str, cfg: &GeomConfig) -> Result<Cleavage, DocError> {
    let (n, tree) = parse_tree(text)?;
    Ok(validate_with(&tree, &ConvexBody::ball(n + 1), cfg)?)
}

fn node_json(node: &Node) -> Value {
    match node {
        Node::Leaf(l) => json!({ "leaf": l }),
        Node::Internal { plane, left, right } => json!({
            "plane": { "normal": plane.normal(), "offset": plane.offset() },
            "left": node_json(left),
            "right": node_json(right),
        }),
    }
}

pub fn tree_json(n: usize, tree: &DecoratedTree) -> Value {
    json!({ "n": n, "tree": node_json(tree.root()) })
}

pub fn cleavage_json(c: &Cleavage) -> Value {
    tree_json(c.sphere_dim(), c.tree())
}

/// Parses `{"metric": {"kind": "euclidean"|"torus", "d": int, "L": real},
/// "loops": [[[x, y, ...], ...], ...]}`.
pub fn parse_loops(text: &str) -> Result<DiscreteEmbedding, DocError> {
    let v = parse_json(text)?;
    let m = field(&v, "metric", "root")?;
    let d = as_usize(field(m, "d", "metric")?, "metric.d")?;
    let kind = field(m, "kind", "metric")?
        .as_str()
        .ok_or_else(|| schema("metric.kind", "expected a string"))?;
    let metric = match kind {
        "euclidean" => FlatMetric::euclidean(d)?,
        "torus" => FlatMetric::torus(d, as_f64(field(m, "L", "metric")?, "metric.L")?)?,
        other => return Err(schema("metric.kind", format!("unknown metric \"{other}\""))),
    };
    let loops = field(&v, "loops", "root")?
        .as_array()
        .ok_or_else(|| schema("loops", "expected an array of loops"))?
        .iter()
        .enumerate()
        .map(|(i, lp)| {
            lp.as_array()
                .ok_or_else(|| schema(&format!("loops[{i}]"), "expected an array of points"))?
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let path = format!("loops[{i}][{j}]");
                    Point::new(as_vec(p, &path)?).map_err(|e| schema(&path, e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiscreteEmbedding::new(metric, loops)?)
}

pub fn loops_json(g: &DiscreteEmbedding) -> Value {
    let loops: Vec<Vec<&[f64]>> = (1..=g.len())
        .map(|l| g.points(l).iter().map(Point::coords).collect())
        .collect();
    json!({ "metric": serde_json::to_value(g.metric()).expect("metric serializes"), "loops": loops })
}

pub fn thom_json(v: &ThomValue) -> Value {
    let components: Vec<Value> = v
        .components
        .iter()
        .map(|c| {
            let entries: Vec<Value> = c
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "sample": e.sample,
                        "pair": [e.pair.0, e.pair.1],
                        "scale": e.scale,
                        "sample_scale": e.sample_scale,
                        "tangent": e.tangent.coords(),
                        "from": e.from.coords(),
                        "to": e.to.coords(),
                        "clearance": e.clearance,
                        "boundary": e.boundary,
                        "masked": e.masked,
                    })
                })
                .collect();
            json!({
                "id": c.id,
                "labels": c.labels,
                "status": c.status,
                "entries": entries,
                "uf_mask": c.uf_mask,
            })
        })
        .collect();
    let restricted: Vec<Value> = v
        .restricted
        .iter()
        .map(|r| {
            json!({
                "label": r.label,
                "arc": [r.arc.start, r.arc.end],
                "params": r.params,
                "points": r.points.iter().map(Point::coords).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut cfg = Map::new();
    cfg.insert("epsilon".into(), json!(v.config.epsilon));
    cfg.insert("t".into(), json!(if v.mapping { 1.0 } else { v.config.t }));
    cfg.insert("density".into(), json!(v.config.density));
    cfg.insert("eta".into(), json!(v.eta));
    cfg.insert("tol".into(), json!(v.config.tol));
    cfg.insert("sup_range".into(), json!(v.config.sup_range));
    cfg.insert("mapping".into(), json!(v.mapping));
    json!({
        "components": components,
        "samples": v.samples.iter().map(Point::coords).collect::<Vec<_>>(),
        "restricted": restricted,
        "config": cfg,
    })
}

pub fn blueprint_json(tb: &ThickenedBlueprint) -> Value {
    let bp = &tb.blueprint;
    let faces: Vec<Value> = bp
        .all_faces()
        .map(|f| json!({ "timber": f.timber, "node": f.node, "from": f.from.coords(), "to": f.to.coords() }))
        .collect();
    let pieces: Vec<Value> = bp
        .pieces()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "node": p.node,
                "component": bp.piece_component(i),
                "from": p.from.coords(),
                "to": p.to.coords(),
            })
        })
        .collect();
    let samples: Vec<Value> = tb
        .samples
        .iter()
        .map(|s| json!({ "point": s.point.coords(), "participants": s.participants, "component": s.component }))
        .collect();
    json!({ "components": tb.components, "faces": faces, "pieces": pieces, "samples": samples })
}

/// Blueprint pieces as OBJ polylines in the `z = 0` plane.
pub fn blueprint_obj(bp: &Blueprint) -> String {
    let mut out = String::from("# blueprint pieces\n");
    for p in bp.pieces() {
        for q in [&p.from, &p.to] {
            out.push_str(&format!("v {} {} 0\n", q[0], q[1]));
        }
    }
    for i in 0..bp.pieces().len() {
        out.push_str(&format!("l {} {}\n", 2 * i + 1, 2 * i + 2));
    }
    out
}
