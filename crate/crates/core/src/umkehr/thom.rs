use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::blueprint::{ray_to_sphere, ThickenedBlueprint};
use crate::geom::Point;
use crate::operad::Cleavage;

use super::{
    clearance, geodesic, restrict, scaling, DiscreteEmbedding, RestrictedArc, SupRange,
    UmkehrConfig, UmkehrError,
};

/// Value at one blueprint sample for one ordered pair of participants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub sample: usize,
    pub pair: (usize, usize),
    /// Supremum of the sample scales over the configured range.
    pub scale: f64,
    pub sample_scale: f64,
    /// Unit tangent of the geodesic from `from` to `to`, or zero in `U_f`.
    pub tangent: Point,
    pub from: Point,
    pub to: Point,
    pub clearance: Option<f64>,
    /// `scale` equals 1 within tolerance.
    pub boundary: bool,
    pub masked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentStatus {
    Finite,
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentValue {
    pub id: usize,
    /// Timber labels meeting on this component.
    pub labels: Vec<usize>,
    pub status: ComponentStatus,
    /// Empty for a component at the point at infinity.
    pub entries: Vec<Entry>,
    pub uf_mask: Vec<usize>,
}

impl ComponentValue {
    pub fn is_finite(&self) -> bool {
        self.status == ComponentStatus::Finite
    }

    pub fn max_scale(&self) -> f64 {
        match self.status {
            ComponentStatus::Infinity => f64::INFINITY,
            ComponentStatus::Finite => self.entries.iter().map(|e| e.scale).fold(0.0, f64::max),
        }
    }

    pub fn entry(&self, sample: usize, pair: (usize, usize)) -> Option<&Entry> {
        self.entries
            .iter()
            .find(|e| e.sample == sample && e.pair == pair)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThomValue {
    pub components: Vec<ComponentValue>,
    pub restricted: Vec<RestrictedArc>,
    pub samples: Vec<Point>,
    pub config: UmkehrConfig,
    /// Endpoint exclusion radius used per loop.
    pub eta: Vec<f64>,
    pub mapping: bool,
}

impl ThomValue {
    pub fn all_finite(&self) -> bool {
        self.components.iter().all(ComponentValue::is_finite)
    }

    pub fn infinite_components(&self) -> Vec<usize> {
        self.components
            .iter()
            .filter(|c| !c.is_finite())
            .map(|c| c.id)
            .collect()
    }

    /// Largest scale over finite components, 0 when there are none.
    pub fn max_finite_scale(&self) -> f64 {
        self.components
            .iter()
            .filter(|c| c.is_finite())
            .map(ComponentValue::max_scale)
            .fold(0.0, f64::max)
    }

    pub fn component_with(&self, labels: &[usize]) -> Option<&ComponentValue> {
        self.components.iter().find(|c| c.labels == labels)
    }
}

struct Raw {
    sample: usize,
    component: usize,
    pair: (usize, usize),
    scale: f64,
    tangent: Point,
    from: Point,
    to: Point,
    clearance: Option<f64>,
    masked: bool,
}

/// `α^{‼₂}`: for every blueprint sample and ordered pair of participants the
/// geodesic between the loop images of their preimages, scaled by the
/// supremum of `S` over the configured range. Components with a supremum
/// above 1 collapse to the point at infinity.
pub fn umkehr(
    g: &DiscreteEmbedding,
    c: &Cleavage,
    tb: &ThickenedBlueprint,
    cfg: &UmkehrConfig,
) -> Result<ThomValue, UmkehrError> {
    evaluate(g, c, tb, cfg, false)
}

/// The mapping-space extension: the homotopy at `t = 1` on arbitrary maps,
/// with coincident pairs sent to the zero vector and recorded in `U_f`.
pub fn umkehr_mapping(
    f: &DiscreteEmbedding,
    c: &Cleavage,
    tb: &ThickenedBlueprint,
    cfg: &UmkehrConfig,
) -> Result<ThomValue, UmkehrError> {
    evaluate(f, c, tb, cfg, true)
}

fn evaluate(
    g: &DiscreteEmbedding,
    c: &Cleavage,
    tb: &ThickenedBlueprint,
    cfg: &UmkehrConfig,
    mapping: bool,
) -> Result<ThomValue, UmkehrError> {
    cfg.check(g.metric())?;
    let restricted = restrict(g, c)?;
    if !mapping {
        g.check_embedded(cfg.tol)?;
    }
    let t = if mapping { 1.0 } else { cfg.t };
    let metric = g.metric();

    let mut raw: Vec<Raw> = Vec::new();
    for (idx, sample) in tb.samples.iter().enumerate() {
        let pre: Vec<(usize, f64, Point)> = sample
            .participants
            .iter()
            .map(|&l| {
                let s = ray_to_sphere(&c.timber(l)?.centroid.point, &sample.point);
                let theta = s.angle();
                Ok((l, theta, g.eval(l, theta)))
            })
            .collect::<Result<_, UmkehrError>>()?;
        for (a, (i, ti, pi)) in pre.iter().enumerate() {
            for (j, tj, pj) in &pre[a + 1..] {
                let dist = metric.distance(pi, pj);
                let mut push = |scale: f64, tangent: Point, clearance: Option<f64>, masked: bool| {
                    raw.push(Raw {
                        sample: idx,
                        component: sample.component,
                        pair: (*i, *j),
                        scale,
                        tangent: tangent.clone(),
                        from: pi.clone(),
                        to: pj.clone(),
                        clearance,
                        masked,
                    });
                    raw.push(Raw {
                        sample: idx,
                        component: sample.component,
                        pair: (*j, *i),
                        scale,
                        tangent: tangent.scale(-1.0),
                        from: pj.clone(),
                        to: pi.clone(),
                        clearance,
                        masked,
                    });
                };
                if mapping && dist <= cfg.tol {
                    push(0.0, Point::zeros(metric.dim()), None, true);
                    continue;
                }
                if dist > cfg.epsilon {
                    push(f64::INFINITY, Point::zeros(metric.dim()), None, false);
                    continue;
                }
                let geo = geodesic(metric, pi, pj, cfg.tol)?;
                let delta = if t < 1.0 {
                    Some(clearance(g, &geo, cfg, &[(*i, *ti), (*j, *tj)])?.value)
                } else {
                    None
                };
                push(scaling(dist, cfg.epsilon, delta.unwrap_or(1.0), t), geo.tangent, delta, false);
            }
        }
    }

    let key = |r: &Raw| match cfg.sup_range {
        SupRange::Component => (r.component, r.pair),
        SupRange::Blueprint => (0, r.pair),
        SupRange::Sample => (r.sample, r.pair),
    };
    let mut sup: HashMap<(usize, (usize, usize)), f64> = HashMap::new();
    for r in &raw {
        let s = sup.entry(key(r)).or_insert(0.0);
        *s = s.max(r.scale);
    }

    let mut components: Vec<ComponentValue> = (0..tb.components)
        .map(|id| ComponentValue {
            id,
            labels: Vec::new(),
            status: ComponentStatus::Finite,
            entries: Vec::new(),
            uf_mask: Vec::new(),
        })
        .collect();
    let mut labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); tb.components];
    for s in &tb.samples {
        labels[s.component].extend(s.participants.iter().copied());
    }
    for r in raw {
        let scale = sup[&key(&r)];
        let comp = &mut components[r.component];
        if scale > 1.0 {
            comp.status = ComponentStatus::Infinity;
        }
        if r.masked && comp.uf_mask.last() != Some(&r.sample) {
            comp.uf_mask.push(r.sample);
        }
        comp.entries.push(Entry {
            sample: r.sample,
            pair: r.pair,
            scale,
            sample_scale: r.scale,
            tangent: r.tangent,
            from: r.from,
            to: r.to,
            clearance: r.clearance,
            boundary: (scale - 1.0).abs() <= cfg.tol,
            masked: r.masked,
        });
    }
    for (comp, l) in components.iter_mut().zip(labels) {
        comp.labels = l.into_iter().collect();
        if comp.status == ComponentStatus::Infinity {
            comp.entries.clear();
        }
    }
    Ok(ThomValue {
        components,
        restricted,
        samples: tb.samples.iter().map(|s| s.point.clone()).collect(),
        config: *cfg,
        eta: (1..=g.len()).map(|l| cfg.eta_for(g, l)).collect(),
        mapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::thicken;
    use crate::geom::{ConvexBody, OrientedHyperplane};
    use crate::operad::{validate, DecoratedTree};
    use crate::umkehr::FlatMetric;
    use std::f64::consts::TAU;

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

    /// Loop 1 on radius `r`, loop 2 on radius `r + gap` traversed so that the
    /// two preimages of every chord point are radially aligned.
    fn concentric(r: f64, gap: f64, m: usize) -> DiscreteEmbedding {
        let l1 = (0..m).map(|j| Point::on_circle(TAU * j as f64 / m as f64).scale(r)).collect();
        let l2 = (0..m)
            .map(|j| {
                let th = TAU * j as f64 / m as f64;
                Point::xy(-(r + gap) * th.cos(), (r + gap) * th.sin())
            })
            .collect();
        DiscreteEmbedding::new(FlatMetric::euclidean(2).unwrap(), vec![l1, l2]).unwrap()
    }

    #[test]
    fn concentric_scales_are_gap_over_epsilon() {
        let c = chord();
        let tb = thicken(&c, 33).unwrap();
        let cfg = UmkehrConfig::default();
        let v = umkehr(&concentric(0.5, 0.05, 64), &c, &tb, &cfg).unwrap();
        assert!(v.all_finite());
        assert_eq!(v.components.len(), 1);
        assert!((v.max_finite_scale() - 0.25).abs() < 1e-9, "{}", v.max_finite_scale());
        // no third strand enters a cigar
        assert!(v.components[0].entries.iter().all(|e| e.clearance == Some(1.0)));
        for e in &v.components[0].entries {
            let back = v.components[0].entry(e.sample, (e.pair.1, e.pair.0)).unwrap();
            assert_eq!(back.scale, e.scale);
            assert!(back.tangent.add(&e.tangent).norm() < 1e-15);
        }
    }

    #[test]
    fn wide_gap_goes_to_infinity() {
        let c = chord();
        let tb = thicken(&c, 33).unwrap();
        let v = umkehr(&concentric(0.5, 0.3, 64), &c, &tb, &UmkehrConfig::default()).unwrap();
        assert_eq!(v.infinite_components(), vec![0]);
        assert!(v.components[0].entries.is_empty());
    }

    #[test]
    fn homotopy_end_ignores_clearance() {
        let c = chord();
        let tb = thicken(&c, 9).unwrap();
        let g = concentric(0.5, 0.05, 64);
        let v0 = umkehr(&g, &c, &tb, &UmkehrConfig::default()).unwrap();
        let v1 = umkehr(&g, &c, &tb, &UmkehrConfig { t: 1.0, ..Default::default() }).unwrap();
        let vm = umkehr_mapping(&g, &c, &tb, &UmkehrConfig::default()).unwrap();
        assert!(v1.components[0].entries.iter().all(|e| e.clearance.is_none()));
        assert_eq!(v1.components, vm.components);
        assert_eq!(v0.max_finite_scale(), v1.max_finite_scale());
    }

    #[test]
    fn intersecting_input_rejected_or_masked() {
        let c = chord();
        let tb = thicken(&c, 9).unwrap();
        // both loops on the unit circle with mirrored parametrization meet at every
        // pair of preimages
        let g = concentric(0.5, 0.0, 64);
        assert!(matches!(
            umkehr(&g, &c, &tb, &UmkehrConfig::default()),
            Err(UmkehrError::SelfIntersecting { .. })
        ));
        let v = umkehr_mapping(&g, &c, &tb, &UmkehrConfig::default()).unwrap();
        assert!(v.all_finite());
        assert_eq!(v.components[0].uf_mask.len(), v.samples.len());
        assert!(v.components[0]
            .entries
            .iter()
            .all(|e| e.masked && e.tangent.norm() == 0.0 && e.scale == 0.0));
    }

    #[test]
    fn sup_range_switch() {
        let c = chord();
        let tb = thicken(&c, 9).unwrap();
        let g = concentric(0.5, 0.05, 64);
        let per_sample = umkehr(&g, &c, &tb, &UmkehrConfig { sup_range: SupRange::Sample, ..Default::default() }).unwrap();
        let per_comp = umkehr(&g, &c, &tb, &UmkehrConfig::default()).unwrap();
        assert!(per_sample.components[0].entries.iter().all(|e| e.scale == e.sample_scale));
        let top = per_comp.max_finite_scale();
        assert!(per_comp.components[0].entries.iter().all(|e| e.scale == top));
    }
}
