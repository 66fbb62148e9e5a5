//! Seeded invariant suites behind `cleave check`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cleave::blueprint::{alpha, alpha_preimage_in, stable_degree, thicken};
use cleave::doc::{cleavage_json, loops_json};
use cleave::fixtures::{chord, fourier_loop, invader, mirrored_pair, parallel, partner_pair, Rect};
use cleave::geom::sampling::ball_points;
use cleave::geom::{point_segment, GeomConfig, Point};
use cleave::operad::random::{random_cleavage, MAX_REJECTIONS};
use cleave::operad::{node_chord, permute, Cleavage, Permutation};
use cleave::umkehr::{complement_arcs, self_intersection_locus, umkehr, DiscreteEmbedding, UmkehrConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Partition,
    Convexity,
    Alpha,
    Preimage,
    Symmetry,
    Soundness,
    Nontriviality,
    Homotopy,
    Degree,
    Locus,
}

pub struct Report {
    pub summary: String,
    pub stats: Value,
}

pub struct Failure {
    pub reason: String,
    pub counterexample: Value,
}

type Outcome = Result<Report, Failure>;

fn fail(reason: impl Into<String>, counterexample: Value) -> Failure {
    Failure {
        reason: reason.into(),
        counterexample,
    }
}

fn cleavages(rng: &mut ChaCha8Rng, count: usize, k_lo: usize, k_hi: usize, tol: f64) -> Result<Vec<Cleavage>, Failure> {
    let cfg = GeomConfig {
        tol,
        ..GeomConfig::default()
    };
    (0..count)
        .map(|_| {
            let k = rng.random_range(k_lo..=k_hi);
            random_cleavage(rng, 1, k, &cfg, MAX_REJECTIONS).map_err(|e| fail(e.to_string(), json!({ "k": k })))
        })
        .collect()
}

pub fn run(suite: Suite, seed: u64, tol: f64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Partition => partition(&mut rng, tol),
        Suite::Convexity => convexity(&mut rng, tol),
        Suite::Alpha => alpha_injective(&mut rng, tol),
        Suite::Preimage => preimage(&mut rng, tol),
        Suite::Symmetry => symmetry(&mut rng, tol),
        Suite::Soundness => soundness(&mut rng),
        Suite::Nontriviality => nontriviality(&mut rng, tol),
        Suite::Homotopy => homotopy(&mut rng),
        Suite::Degree => degree(&mut rng, tol),
        Suite::Locus => locus(&mut rng),
    }
}

fn partition(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cs = cleavages(rng, 25, 1, 5, tol)?;
    let points = 2000;
    for c in &cs {
        for _ in 0..points {
            let s = Point::on_circle(rng.random_range(0.0..TAU));
            let covering = c.timbers().iter().filter(|t| t.trace.contains(&s, tol)).count();
            let interior = c
                .timbers()
                .iter()
                .filter(|t| t.body.constraint_slack(s.coords()) > tol)
                .count();
            if covering == 0 || interior > 1 {
                return Err(fail(
                    format!("point covered by {covering} timbers, interior to {interior}"),
                    json!({ "cleavage": cleavage_json(c), "point": s.coords() }),
                ));
            }
        }
    }
    Ok(Report {
        summary: format!("{} cleavages x {points} sphere points", cs.len()),
        stats: json!({ "cleavages": cs.len(), "points": points }),
    })
}

fn convexity(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cs = cleavages(rng, 20, 1, 5, tol)?;
    let mut pairs = 0;
    for (ci, c) in cs.iter().enumerate() {
        for t in c.timbers() {
            let inside: Vec<Vec<f64>> = ball_points(2, 4000, ci as u64 * 31 + t.label as u64)
                .filter(|p| t.body.slack(p) >= 0.0)
                .take(400)
                .collect();
            for w in inside.chunks_exact(2) {
                let mid: Vec<f64> = w[0].iter().zip(&w[1]).map(|(a, b)| (a + b) / 2.0).collect();
                pairs += 1;
                if t.body.slack(&mid) < -tol {
                    return Err(fail(
                        format!("midpoint leaves timber {}", t.label),
                        json!({ "cleavage": cleavage_json(c), "a": w[0], "b": w[1] }),
                    ));
                }
            }
        }
    }
    Ok(Report {
        summary: format!("{pairs} midpoint pairs over {} cleavages", cs.len()),
        stats: json!({ "pairs": pairs }),
    })
}

fn alpha_injective(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cs = cleavages(rng, 20, 2, 5, tol)?;
    let per_arc = 200;
    let mut arcs = 0;
    for c in &cs {
        for t in c.timbers() {
            let ci = &t.centroid.point;
            for arc in complement_arcs(t.trace.arcs().expect("planar")) {
                arcs += 1;
                let mut last: Option<(f64, Point)> = None;
                for j in 1..per_arc {
                    let th = arc.start + arc.len() * j as f64 / per_arc as f64;
                    let hit = alpha(c, t.label, &Point::on_circle(th))
                        .map_err(|e| fail(e.to_string(), json!({ "cleavage": cleavage_json(c), "theta": th })))?;
                    // angle of the hit seen from the centroid, unwrapped along the arc
                    let seen = hit.point.sub(ci).angle();
                    if let Some((prev, ref p)) = last {
                        let step = (seen - prev).rem_euclid(TAU);
                        if !(step > 0.0 && step < PI) || hit.point.dist(p) <= tol {
                            return Err(fail(
                                format!("crossing parameter not monotone on timber {}", t.label),
                                json!({ "cleavage": cleavage_json(c), "theta": th }),
                            ));
                        }
                    }
                    last = Some((seen, hit.point));
                }
            }
        }
    }
    Ok(Report {
        summary: format!("{arcs} complement arcs x {per_arc} samples"),
        stats: json!({ "arcs": arcs }),
    })
}

fn preimage(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cs = cleavages(rng, 20, 2, 5, tol)?;
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &cs {
        let tb = thicken(c, 50).map_err(|e| fail(e.to_string(), cleavage_json(c)))?;
        let chords: Vec<_> = c.nodes().iter().filter_map(node_chord).collect();
        for s in &tb.samples {
            let p = chords
                .iter()
                .filter(|(a, b)| point_segment(s.point.coords(), a, b).1 <= tol)
                .count();
            let count = alpha_preimage_in(c, &tb.blueprint, &s.point, tol)
                .map_err(|e| fail(e.to_string(), cleavage_json(c)))?
                .len();
            if count != p + 1 {
                return Err(fail(
                    format!("{count} preimages where {p} planes meet"),
                    json!({ "cleavage": cleavage_json(c), "point": s.point.coords() }),
                ));
            }
            *hist.entry(count).or_default() += 1;
        }
    }
    Ok(Report {
        summary: format!("histogram {hist:?}"),
        stats: json!({ "histogram": hist }),
    })
}

/// Random arity-2 cleavage with a mirrored loop pair, resampled until the
/// polygonal loops are embedded.
fn random_pair(rng: &mut ChaCha8Rng, tol: f64, max_gap: f64) -> Result<(Cleavage, DiscreteEmbedding), Failure> {
    for _ in 0..1000 {
        let c = cleavages(rng, 1, 2, 2, tol)?.remove(0);
        let r = rng.random_range(0.4..0.7);
        let gap = rng.random_range(0.01..max_gap);
        let phase = rng.random_range(0.0..TAU);
        let g = mirrored_pair(&c, r, gap, phase, 128).map_err(|e| fail(e.to_string(), cleavage_json(&c)))?;
        if g.check_embedded(tol).is_ok() {
            return Ok((c, g));
        }
    }
    Err(fail("no embedded mirrored pair in 1000 draws", Value::Null))
}

fn symmetry(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cfg = UmkehrConfig::default();
    let swap = Permutation::new(vec![2, 1]).expect("swap");
    let mut compared = 0;
    for _ in 0..10 {
        let (c, g) = random_pair(rng, tol, 0.15)?;
        let dump = || json!({ "cleavage": cleavage_json(&c), "loops": loops_json(&g) });
        let tb = thicken(&c, cfg.density).map_err(|e| fail(e.to_string(), dump()))?;
        let v = umkehr(&g, &c, &tb, &cfg).map_err(|e| fail(e.to_string(), dump()))?;
        let pc = permute(&c, &swap).map_err(|e| fail(e.to_string(), dump()))?;
        let pg = g.permute(&swap).map_err(|e| fail(e.to_string(), dump()))?;
        let ptb = thicken(&pc, cfg.density).map_err(|e| fail(e.to_string(), dump()))?;
        let w = umkehr(&pg, &pc, &ptb, &cfg).map_err(|e| fail(e.to_string(), dump()))?;
        for (a, b) in v.components.iter().zip(&w.components) {
            if a.status != b.status {
                return Err(fail("components at infinity differ after the swap", dump()));
            }
            for e in &a.entries {
                let f = b
                    .entry(e.sample, e.pair)
                    .ok_or_else(|| fail("missing swapped entry", dump()))?;
                compared += 1;
                if (f.scale - e.scale).abs() > 1e-9 || f.tangent.add(&e.tangent).norm() > 1e-9 {
                    return Err(fail(format!("entry {:?} at sample {} is not negated", e.pair, e.sample), dump()));
                }
            }
        }
    }
    Ok(Report {
        summary: format!("{compared} entries negated under the swap"),
        stats: json!({ "entries": compared }),
    })
}

fn soundness(rng: &mut ChaCha8Rng) -> Outcome {
    let c = parallel();
    let tb = thicken(&c, 17).map_err(|e| fail(e.to_string(), Value::Null))?;
    for _ in 0..10 {
        let x0 = rng.random_range(-0.7..0.6);
        let rect = Rect { x0, x1: x0 + 0.1, y0: 0.015, y1: 0.035 };
        let g = invader(&c, 0.05, rect, 96).map_err(|e| fail(e.to_string(), Value::Null))?;
        let v = umkehr(&g, &c, &tb, &UmkehrConfig::default()).map_err(|e| fail(e.to_string(), loops_json(&g)))?;
        if v.component_with(&[1, 2]).is_none_or(|a| a.is_finite()) {
            return Err(fail("invaded component stayed finite", loops_json(&g)));
        }
    }
    Ok(Report {
        summary: "10 invaded configurations collapse to infinity".into(),
        stats: json!({ "configurations": 10 }),
    })
}

fn nontriviality(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cfg = UmkehrConfig::default();
    let mut top: f64 = 0.0;
    for _ in 0..10 {
        let (c, g) = random_pair(rng, tol, cfg.epsilon / 2.0)?;
        let dump = || json!({ "cleavage": cleavage_json(&c), "loops": loops_json(&g) });
        let tb = thicken(&c, cfg.density).map_err(|e| fail(e.to_string(), dump()))?;
        let v = umkehr(&g, &c, &tb, &cfg).map_err(|e| fail(e.to_string(), dump()))?;
        if !v.all_finite() || v.max_finite_scale() >= 1.0 {
            return Err(fail("close embeddings reached infinity", dump()));
        }
        top = top.max(v.max_finite_scale());
    }
    Ok(Report {
        summary: format!("10 close pairs finite, max scale {top:.6}"),
        stats: json!({ "max_scale": top }),
    })
}

fn homotopy(rng: &mut ChaCha8Rng) -> Outcome {
    let c = parallel();
    let tb = thicken(&c, 17).map_err(|e| fail(e.to_string(), Value::Null))?;
    let t1 = UmkehrConfig { t: 1.0, ..Default::default() };
    let eval = |rect: Rect, cfg: &UmkehrConfig| {
        let g = invader(&c, 0.05, rect, 96).map_err(|e| fail(e.to_string(), Value::Null))?;
        umkehr(&g, &c, &tb, cfg).map_err(|e| fail(e.to_string(), loops_json(&g)))
    };
    let base = Rect { x0: 0.9, x1: 1.0, y0: 0.015, y1: 0.035 };
    let reference = eval(base, &t1)?;
    let default = eval(base, &UmkehrConfig::default())?;
    let zero = eval(base, &UmkehrConfig { t: 0.0, ..Default::default() })?;
    if default.components != zero.components {
        return Err(fail("t = 0 differs from the default evaluation", Value::Null));
    }
    for _ in 0..10 {
        let x0 = rng.random_range(0.87..1.2);
        let y0 = rng.random_range(0.005..0.02);
        let rect = Rect { x0, x1: x0 + rng.random_range(0.02..0.2), y0, y1: y0 + rng.random_range(0.01..0.025) };
        if eval(rect, &t1)?.components != reference.components {
            return Err(fail("t = 1 output moved with the invader", json!({ "x0": x0, "y0": y0 })));
        }
    }
    Ok(Report {
        summary: "t = 1 stable under 10 invader perturbations; t = 0 matches default".into(),
        stats: json!({ "perturbations": 10 }),
    })
}

fn degree(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let cs = cleavages(rng, 200, 1, 5, tol)?;
    for c in &cs {
        for dim_m in [2, 3] {
            let d = stable_degree(c, dim_m).map_err(|e| fail(e.to_string(), cleavage_json(c)))?;
            if d.total() != dim_m * (c.arity() - 1) {
                return Err(fail(format!("degree {d:?} for dim(M) = {dim_m}"), cleavage_json(c)));
            }
        }
    }
    Ok(Report {
        summary: format!("{} cleavages, dim(M) in {{2, 3}}", cs.len()),
        stats: json!({ "cleavages": cs.len() }),
    })
}

fn locus(rng: &mut ChaCha8Rng) -> Outcome {
    let c = chord();
    let m = 64;
    let mut intervals = 0;
    for _ in 0..10 {
        let coeffs: Vec<(Point, Point)> = (0..3)
            .map(|k| {
                let s = if k == 0 { 1.0 } else { 0.2 };
                (
                    Point::xy(rng.random_range(-s..s), rng.random_range(-s..s)),
                    Point::xy(rng.random_range(-s..s), rng.random_range(-s..s)),
                )
            })
            .collect();
        let a = rng.random_range(0..m / 4) as f64 * TAU / m as f64 - PI / 2.0;
        let len = rng.random_range(0..m / 4) as f64 * TAU / m as f64;
        let f = partner_pair(
            fourier_loop(&coeffs),
            |th| {
                let u = (th - a).rem_euclid(TAU);
                if u <= len { 0.0 } else { (u - len).min(TAU - u) }
            },
            m,
        )
        .map_err(|e| fail(e.to_string(), Value::Null))?;
        let loc = self_intersection_locus(&f, &c, 1e-9).map_err(|e| fail(e.to_string(), loops_json(&f)))?;
        for iv in loc.iter().flatten() {
            intervals += 1;
            if !iv.contractible {
                return Err(fail("locus component is not a proper interval", loops_json(&f)));
            }
        }
    }
    Ok(Report {
        summary: format!("{intervals} locus intervals, all contractible"),
        stats: json!({ "intervals": intervals }),
    })
}
