//! Gaps and tilt across domain boundaries.
//!
//! Within a simply connected component `Y_n` of `G_r` the value
//! `cgap(y, z) = c(ζ)` along any trail `ζ` from `z` to `y` is a potential
//! difference `P_n(y) · P_n(z)⁻¹` with `P_n(y*_n) = e`. Across components the
//! reference sites are declared level, giving `cgap(y, z) = P_n(y) · P_m(z)⁻¹`.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BoundaryTilt;
use crate::cocycles::CocycleRule;
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::lattice::Site;
use crate::symbolic::{classify_defect, defect_field, Configuration, SftSpec};

/// `P(y) = c(ζ)` for trails `ζ` from the reference site to `y` inside one component.
#[derive(Clone, Debug)]
pub struct Potentials {
    pub reference: Site,
    pub values: HashMap<Site, GroupElement>,
}

impl Potentials {
    /// Breadth-first potentials on a connected set of sites.
    ///
    /// Every edge inside the set is then rechecked; a mismatch means the
    /// values depend on the path and is reported as `AmbiguousPath`. Edges
    /// whose local rule reads outside the window are not used.
    pub fn build(cfg: &Configuration, rule: &CocycleRule, sites: &[Site], reference: &Site) -> Result<Potentials> {
        let set: HashSet<&Site> = sites.iter().collect();
        if !set.contains(reference) {
            return Err(Error::Invalid(format!("reference {reference} is not in the component")));
        }
        let get = |z: &Site| cfg.get(z);
        let group = &rule.group;
        let step_value = |z: &Site, axis: usize, sign: i64| -> Result<Option<GroupElement>> {
            match rule.step(z, axis, sign, &get) {
                Ok(v) => Ok(Some(v)),
                Err(Error::OutOfWindow(_)) => Ok(None),
                Err(e) => Err(e),
            }
        };
        let mut values: HashMap<Site, GroupElement> = HashMap::with_capacity(sites.len());
        values.insert(reference.clone(), group.identity());
        let mut queue = VecDeque::from([reference.clone()]);
        while let Some(u) = queue.pop_front() {
            let pu = values[&u].clone();
            for axis in 0..rule.dim {
                for sign in [1, -1] {
                    let v = u.step(axis, sign);
                    if !set.contains(&v) || values.contains_key(&v) {
                        continue;
                    }
                    if let Some(c) = step_value(&u, axis, sign)? {
                        values.insert(v.clone(), group.mul(&c, &pu)?);
                        queue.push_back(v);
                    }
                }
            }
        }
        // Independent pass over all forward edges.
        let bad = sites
            .par_iter()
            .map(|u| -> Result<Option<Site>> {
                let Some(pu) = values.get(u) else { return Ok(None) };
                for axis in 0..rule.dim {
                    let v = u.step(axis, 1);
                    let Some(pv) = values.get(&v) else { continue };
                    if let Some(c) = step_value(u, axis, 1)? {
                        if !group.eq(pv, &group.mul(&c, pu)?)? {
                            return Ok(Some(u.clone()));
                        }
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .min();
        if let Some(u) = bad {
            return Err(Error::AmbiguousPath(format!(
                "trail values near {u} depend on the path; treat the codimension-two defects first"
            )));
        }
        Ok(Potentials { reference: reference.clone(), values })
    }

    pub fn get(&self, z: &Site) -> Option<&GroupElement> {
        self.values.get(z)
    }
}

/// `cgap(y, z)` for `y, z` in the given components with their reference sites.
pub fn cgap(
    cfg: &Configuration,
    rule: &CocycleRule,
    y: &Site,
    z: &Site,
    components: &[(Vec<Site>, Site)],
) -> Result<GroupElement> {
    if y == z {
        return Ok(rule.group.identity());
    }
    let find = |p: &Site| {
        components
            .iter()
            .find(|(sites, _)| sites.contains(p))
            .ok_or_else(|| Error::Invalid(format!("{p} is not in any listed component")))
    };
    let (cy, ry) = find(y)?;
    let (cz, rz) = find(z)?;
    let py = Potentials::build(cfg, rule, cy, ry)?;
    let pz = if ry == rz { py.clone() } else { Potentials::build(cfg, rule, cz, rz)? };
    let missing = |p: &Site| Error::TrailExitsWindow(format!("no trail inside the window reaches {p}"));
    let a = py.get(y).ok_or_else(|| missing(y))?;
    let b = pz.get(z).ok_or_else(|| missing(z))?;
    rule.group.mul(a, &rule.group.inv(b)?)
}

/// Default reference sites: the site of each component closest to the window
/// centre in `l_inf`, ties broken lexicographically.
pub fn choose_references(cfg: &Configuration, components: &[Vec<Site>]) -> Vec<Site> {
    let centre = window_centre(cfg);
    components
        .iter()
        .map(|c| c.iter().min_by_key(|z| (z.linf(&centre), (*z).clone())).unwrap().clone())
        .collect()
}

/// Knobs for the divergence verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltOptions {
    /// Box half-widths `L` at which `s(L)` is sampled.
    pub schedule: Vec<usize>,
    /// Least-squares slope of `s(L)` against `L` above which growth counts.
    pub slope_threshold: f64,
    /// Divergence also needs the largest sample above `multiple * bound`.
    pub multiple: f64,
    /// Slope bound that holds inside a single component.
    pub bound: f64,
}

impl Default for TiltOptions {
    fn default() -> Self {
        TiltOptions { schedule: vec![2, 4, 6, 8, 12, 16], slope_threshold: 0.1, multiple: 4.0, bound: 1.0 }
    }
}

/// `s(L)`: the largest `|cgap(y, z)| / |y - z|_1` over pairs inside the box of
/// half-width `L` around the window centre, with the pair attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeSample {
    pub l: usize,
    pub slope: f64,
    pub witness: Option<(Site, Site, GroupElement)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltVerdict {
    Bounded,
    /// Slopes keep growing across the window; a finite window cannot prove
    /// infinite tilt.
    DivergingWindowLimited,
    Inconclusive,
}

/// Whether the boundary is sharp in the sufficient case of a thin slab.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sharpness {
    /// The defect set lies in a slab of this thickness across `axis`.
    Sharp { axis: usize, thickness: usize },
    Unknown,
}

/// Summary of one projective component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub anchor: Site,
    pub size: usize,
    pub reference: Site,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapAnalysis {
    pub components: Vec<ComponentSummary>,
    /// One entry per pair of projective components (or the single component
    /// against itself when the window has no defects).
    pub pairs: Vec<BoundaryTilt>,
    pub verdict: TiltVerdict,
    pub sharpness: Sharpness,
    /// Largest trail distance inside `G_r` from a site of `G_r` to `G_{r+R}`.
    pub depth_spread: Option<usize>,
}

impl GapAnalysis {
    pub fn boundary_tilts(&self) -> Vec<BoundaryTilt> {
        self.pairs.clone()
    }

    /// Largest sample over all pairs.
    pub fn max_slope(&self) -> f64 {
        self.pairs.iter().flat_map(|p| p.samples.iter().map(|s| s.slope)).fold(0.0, f64::max)
    }
}

/// Tilt between the projective components of `G_r` with default references.
pub fn tilt_estimate(cfg: &Configuration, spec: &SftSpec, rule: &CocycleRule, r: usize, opts: &TiltOptions) -> Result<GapAnalysis> {
    tilt_estimate_with(cfg, spec, rule, r, opts, None)
}

/// As [`tilt_estimate`] with explicit reference sites, one per projective
/// component in the classification's order.
pub fn tilt_estimate_with(
    cfg: &Configuration,
    spec: &SftSpec,
    rule: &CocycleRule,
    r: usize,
    opts: &TiltOptions,
    references: Option<&[Site]>,
) -> Result<GapAnalysis> {
    // Fail early on groups without a pseudonorm.
    rule.group.pseudonorm(&rule.group.identity())?;
    let report = classify_defect(cfg, spec, r)?;
    let comps: Vec<Vec<Site>> = report.components.iter().filter(|c| c.projective).map(|c| c.sites.clone()).collect();
    let defect_free = report.defect_sites == 0;
    if comps.len() < 2 && !defect_free {
        return Err(Error::NoBoundary(format!(
            "G_{r} has {} projective component(s); the defects do not split the window",
            comps.len()
        )));
    }
    let refs = match references {
        Some(r) if r.len() == comps.len() => r.to_vec(),
        Some(r) => {
            return Err(Error::Invalid(format!("{} references for {} components", r.len(), comps.len())));
        }
        None => choose_references(cfg, &comps),
    };
    let pots = comps
        .par_iter()
        .zip(&refs)
        .map(|(c, y)| Potentials::build(cfg, rule, c, y))
        .collect::<Result<Vec<_>>>()?;
    let centre = window_centre(cfg);
    let mut pairs = vec![];
    if comps.len() == 1 {
        pairs.push(BoundaryTilt { components: (0, 0), ..pair_tilt(rule, &pots[0], &pots[0], &centre, opts)? });
    } else {
        for n in 0..comps.len() {
            for m in n + 1..comps.len() {
                pairs.push(BoundaryTilt { components: (n, m), ..pair_tilt(rule, &pots[n], &pots[m], &centre, opts)? });
            }
        }
    }
    let verdict = if pairs.iter().any(|p| p.verdict == TiltVerdict::DivergingWindowLimited) {
        TiltVerdict::DivergingWindowLimited
    } else if pairs.iter().any(|p| p.verdict == TiltVerdict::Inconclusive) {
        TiltVerdict::Inconclusive
    } else {
        TiltVerdict::Bounded
    };
    let components = report
        .components
        .iter()
        .filter(|c| c.projective)
        .zip(&refs)
        .map(|(c, y)| ComponentSummary { anchor: c.anchor.clone(), size: c.size, reference: y.clone() })
        .collect();
    let field = defect_field(cfg, spec)?;
    let sharpness = sharpness(&field.defect_sites(), spec.radius, r);
    let depth_spread = depth_spread(&field.unflawed(r), &field.unflawed(r + spec.radius));
    Ok(GapAnalysis { components, pairs, verdict, sharpness, depth_spread })
}

fn window_centre(cfg: &Configuration) -> Site {
    let w = cfg.window();
    Site(w.lo.iter().zip(&w.hi).map(|(a, b)| (a + b).div_euclid(2)).collect())
}

fn pair_tilt(rule: &CocycleRule, a: &Potentials, b: &Potentials, centre: &Site, opts: &TiltOptions) -> Result<BoundaryTilt> {
    let l_max = opts.schedule.iter().copied().max().unwrap_or(0) as i64;
    let near = |p: &Potentials| -> Vec<(Site, GroupElement)> {
        let mut v: Vec<(Site, GroupElement)> =
            p.values.iter().filter(|(z, _)| z.linf(centre) <= l_max).map(|(z, g)| (z.clone(), g.clone())).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v
    };
    let ys = near(a);
    let zs = near(b);
    let group = &rule.group;
    // For every pair: the box it first fits in, and its slope.
    let best: Vec<(i64, f64, Site, Site, GroupElement)> = ys
        .par_iter()
        .map(|(y, py)| -> Result<Vec<(i64, f64, Site, Site, GroupElement)>> {
            let mut out = vec![];
            for (z, pz) in &zs {
                if y == z {
                    continue;
                }
                let g = group.mul(py, &group.inv(pz)?)?;
                let slope = group.pseudonorm(&g)? as f64 / y.l1(z) as f64;
                let l = y.linf(centre).max(z.linf(centre));
                out.push((l, slope, y.clone(), z.clone(), g));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut samples = vec![];
    for &l in &opts.schedule {
        let top = best
            .iter()
            .filter(|p| p.0 <= l as i64)
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then_with(|| y.2.cmp(&x.2)).then_with(|| y.3.cmp(&x.3)));
        samples.push(SlopeSample {
            l,
            slope: top.map(|t| t.1).unwrap_or(0.0),
            witness: top.map(|t| (t.2.clone(), t.3.clone(), t.4.clone())),
        });
    }
    let verdict = verdict_of(&samples, opts);
    Ok(BoundaryTilt { components: (0, 0), samples, verdict })
}

fn verdict_of(samples: &[SlopeSample], opts: &TiltOptions) -> TiltVerdict {
    let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.witness.is_some()).map(|s| (s.l as f64, s.slope)).collect();
    if pts.len() < 2 {
        return TiltVerdict::Inconclusive;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let fit = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let top = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    if fit <= opts.slope_threshold {
        TiltVerdict::Bounded
    } else if top > opts.multiple * opts.bound {
        TiltVerdict::DivergingWindowLimited
    } else {
        TiltVerdict::Inconclusive
    }
}

fn sharpness(defects: &[Site], big_r: usize, r: usize) -> Sharpness {
    let Some(first) = defects.first() else { return Sharpness::Unknown };
    let limit = 2 * (big_r + r) + 1;
    (0..first.dim())
        .map(|k| {
            let lo = defects.iter().map(|z| z.0[k]).min().unwrap();
            let hi = defects.iter().map(|z| z.0[k]).max().unwrap();
            (k, (hi - lo + 1) as usize)
        })
        .min_by_key(|&(_, t)| t)
        .filter(|&(_, t)| t <= limit)
        .map(|(axis, thickness)| Sharpness::Sharp { axis, thickness })
        .unwrap_or(Sharpness::Unknown)
}

/// Multi-source BFS inside `region` from `targets`.
fn depth_spread(region: &[Site], targets: &[Site]) -> Option<usize> {
    let set: HashSet<&Site> = region.iter().collect();
    let mut dist: HashMap<Site, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for t in targets.iter().filter(|t| set.contains(t)) {
        dist.insert(t.clone(), 0);
        queue.push_back(t.clone());
    }
    if queue.is_empty() {
        return None;
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        for axis in 0..u.dim() {
            for sign in [1, -1] {
                let v = u.step(axis, sign);
                if set.contains(&v) && !dist.contains_key(&v) {
                    dist.insert(v.clone(), d + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    dist.values().copied().max()
}
