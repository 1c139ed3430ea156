//! The defect field `F(z) = max { r : a_{B(z,r)} in A_(r) }`, the unflawed
//! regions `G_r`, the defect set and a window-relative codimension
//! classification.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Configuration, SftSpec, Sym};
use crate::error::{Error, Result};
use crate::lattice::{connected_components, holes, Ball, Rect, Site};

/// Radius standing in for "unbounded" on periodic configurations.
pub const PERIODIC_CAP: usize = 1 << 20;

/// A defect-field value: exact, or a lower bound limited by the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum FieldValue {
    Exact(u32),
    AtLeast(u32),
}

impl FieldValue {
    /// A value the true field is known to reach.
    pub fn lower(&self) -> u32 {
        match *self {
            FieldValue::Exact(v) | FieldValue::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FieldValue::Exact(_))
    }

    /// Whether `F >= r` is verified.
    pub fn at_least(&self, r: usize) -> bool {
        self.lower() as usize >= r
    }
}

/// Defect field over a configuration window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectField {
    pub window: Rect,
    /// Constraint radius `R` of the shift.
    pub big_r: usize,
    pub values: Vec<FieldValue>,
}

impl DefectField {
    pub fn get(&self, z: &Site) -> Option<FieldValue> {
        self.window.index_of(z).map(|i| self.values[i])
    }

    /// Sites with `F < R` (for shifts with trivial `(R-1)`-constraints these are
    /// exactly the centres of inadmissible `R`-windows).
    pub fn defect_sites(&self) -> Vec<Site> {
        self.window
            .sites()
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| matches!(v, FieldValue::Exact(x) if (*x as usize) < self.big_r))
            .map(|(z, _)| z)
            .collect()
    }

    /// Sites with verified `F >= r`.
    pub fn unflawed(&self, r: usize) -> Vec<Site> {
        self.window.sites().into_iter().zip(&self.values).filter(|(_, v)| v.at_least(r)).map(|(z, _)| z).collect()
    }

    /// Largest verified lower bound in the window.
    pub fn deepest(&self) -> u32 {
        self.values.iter().map(|v| v.lower()).max().unwrap_or(0)
    }

    /// ASCII map (2D): digits capped at 9, `#` on the defect set, `·` for
    /// window-bound values. North is at the top.
    pub fn render(&self) -> String {
        let w = &self.window;
        if w.dim() != 2 {
            return format!("<{}-dimensional defect field>", w.dim());
        }
        let mut s = String::new();
        for y in (w.lo[1]..=w.hi[1]).rev() {
            for x in w.lo[0]..=w.hi[0] {
                let v = self.get(&Site(vec![x, y])).unwrap();
                s.push(match v {
                    FieldValue::Exact(x) if (x as usize) < self.big_r => '#',
                    FieldValue::Exact(x) => char::from_digit(x.min(9), 10).unwrap(),
                    FieldValue::AtLeast(_) => '·',
                });
            }
            s.push('\n');
        }
        s
    }
}

/// Largest `r <= top` with `B(z, r)` admissible, for radii below `R`.
fn small_radius_value(spec: &SftSpec, cfg: &Configuration, z: &Site, top: usize) -> Result<Option<usize>> {
    for r in (0..=top).rev() {
        let rect = Ball::new(z.clone(), r).rect();
        let cells: Option<Vec<Sym>> = rect.sites().iter().map(|s| cfg.get(s)).collect();
        let Some(cells) = cells else { continue };
        if spec.small_block_admissible(&cells, r)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Compute `F` at every site of the configuration window.
pub fn defect_field(cfg: &Configuration, spec: &SftSpec) -> Result<DefectField> {
    if cfg.dim() != spec.dim {
        return Err(Error::Invalid(format!("configuration has dimension {} but the shift {}", cfg.dim(), spec.dim)));
    }
    let big_r = spec.radius;
    let window = cfg.window().clone();
    let sites = window.sites();
    if !cfg.is_periodic() && window.shrink(big_r as i64).is_empty() {
        return Err(Error::WindowTooSmall(format!("no ball of radius {big_r} fits in the window")));
    }
    // A window is inadmissible once its known part is: near the window edge
    // the check runs on the part of `B(z, R)` inside the window.
    let bad: Vec<bool> = sites
        .par_iter()
        .map(|z| {
            let get = |s: &Site| cfg.get(s);
            match cfg.known_radius(z, PERIODIC_CAP) {
                Some(k) if k >= big_r => !spec.window_ok(z, &get).unwrap_or(true),
                _ => {
                    let known = Ball::new(z.clone(), big_r).rect().intersect(&window);
                    spec.locally_admissible(&known, &get) == Some(false)
                }
            }
        })
        .collect();
    let dist = if cfg.is_periodic() { periodic_distances(cfg, &bad) } else { box_distances(&window, &bad) };
    let values: Vec<Result<FieldValue>> = sites
        .par_iter()
        .enumerate()
        .map(|(i, z)| {
            let k = cfg.known_radius(z, PERIODIC_CAP).unwrap();
            if bad[i] {
                let top = big_r.saturating_sub(1);
                let reach = top.min(k);
                let v = small_radius_value(spec, cfg, z, reach)?.unwrap_or(0);
                return Ok(if v == reach && reach < top { FieldValue::AtLeast(v as u32) } else { FieldValue::Exact(v as u32) });
            }
            if k < big_r {
                return Ok(match small_radius_value(spec, cfg, z, k)? {
                    Some(r) if r == k => FieldValue::AtLeast(k as u32),
                    Some(r) => FieldValue::Exact(r as u32),
                    None => FieldValue::Exact(0),
                });
            }
            match dist[i] {
                Some(d) if big_r + d - 1 <= k => Ok(FieldValue::Exact((big_r + d - 1) as u32)),
                _ => Ok(FieldValue::AtLeast(k as u32)),
            }
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(DefectField { window, big_r, values })
}

/// `l_inf` distance to the nearest marked site, by king-move BFS inside the box.
fn box_distances(window: &Rect, marked: &[bool]) -> Vec<Option<usize>> {
    let mut dist: Vec<Option<usize>> = vec![None; marked.len()];
    let mut queue = VecDeque::new();
    for (i, &m) in marked.iter().enumerate() {
        if m {
            dist[i] = Some(0);
            queue.push_back(i);
        }
    }
    let dim = window.dim();
    let offsets: Vec<Site> = Ball::offsets(dim, 1).into_iter().filter(|o| o.0.iter().any(|&c| c != 0)).collect();
    while let Some(i) = queue.pop_front() {
        let z = window.site_at(i);
        let d = dist[i].unwrap();
        for o in &offsets {
            if let Some(j) = window.index_of(&z.add(o)) {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    dist
}

fn periodic_distances(cfg: &Configuration, marked: &[bool]) -> Vec<Option<usize>> {
    let window = cfg.window();
    let periods = match cfg.extension() {
        super::Extension::Periodic { periods } => periods.clone(),
        super::Extension::None => unreachable!("periodic configurations only"),
    };
    let marks: Vec<Site> = window.sites().into_iter().zip(marked).filter(|(_, &m)| m).map(|(z, _)| z).collect();
    window
        .sites()
        .par_iter()
        .map(|z| {
            marks
                .iter()
                .map(|x| {
                    (0..z.dim())
                        .map(|d| {
                            let dx = (z.0[d] - x.0[d]).rem_euclid(periods[d]);
                            dx.min(periods[d] - dx) as usize
                        })
                        .max()
                        .unwrap_or(0)
                })
                .min()
        })
        .collect()
}

/// Whether a region is the unflawed stratum or the defect set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionLabel {
    Unflawed,
    Defect,
}

/// A labelled set of sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub label: RegionLabel,
    pub r: usize,
    pub sites: BTreeSet<Site>,
}

impl Region {
    pub fn contains(&self, z: &Site) -> bool {
        self.sites.contains(z)
    }

    pub fn to_hash_set(&self) -> HashSet<Site> {
        self.sites.iter().cloned().collect()
    }
}

/// `G_r` (verified `F >= r`) and the defect set `D` (`F < R`).
pub fn defect_region(cfg: &Configuration, spec: &SftSpec, r: usize) -> Result<(Region, Region)> {
    let field = defect_field(cfg, spec)?;
    Ok(regions_of(&field, r))
}

pub(crate) fn regions_of(field: &DefectField, r: usize) -> (Region, Region) {
    let g = Region { label: RegionLabel::Unflawed, r, sites: field.unflawed(r).into_iter().collect() };
    let d = Region { label: RegionLabel::Defect, r: field.big_r, sites: field.defect_sites().into_iter().collect() };
    (g, d)
}

/// Topological type of the defects visible in a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    /// No defect sites.
    None,
    /// `G_r` splits into several projective components.
    DomainBoundary { components: usize },
    /// `G_r` is connected around one or more holes.
    Codimension2 { holes: usize },
    /// Both a splitting of `G_r` and holes.
    Mixed { components: usize, holes: usize },
    /// Defects without a topological signature in this window (or in `D >= 3`,
    /// anything other than a domain boundary).
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::None => write!(f, "none"),
            Classification::DomainBoundary { components } => write!(f, "domain-boundary({components} components)"),
            Classification::Codimension2 { holes } => write!(f, "codimension-2({holes} holes)"),
            Classification::Mixed { components, holes } => write!(f, "mixed({components} components, {holes} holes)"),
            Classification::Other => write!(f, "other"),
        }
    }
}

/// One connected component of `G_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub size: usize,
    /// Lexicographically smallest site, used as a stable identifier.
    pub anchor: Site,
    /// Largest verified field value on the component.
    pub depth: u32,
    /// Reaches at least half the deepest verified value in the window.
    pub projective: bool,
    #[serde(skip)]
    pub sites: Vec<Site>,
}

/// Classification together with the components and holes it is based on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub classification: Classification,
    pub r: usize,
    pub deepest: u32,
    pub defect_sites: usize,
    pub components: Vec<ComponentInfo>,
    #[serde(skip)]
    pub holes: Vec<Vec<Site>>,
}

/// Classify the defects of `cfg` at range `r`.
///
/// A component of `G_r` counts as projective when its deepest verified field
/// value is at least half of the deepest one in the window; exact projectivity
/// would need the infinite configuration.
pub fn classify_defect(cfg: &Configuration, spec: &SftSpec, r: usize) -> Result<ClassificationReport> {
    let field = defect_field(cfg, spec)?;
    classify_field(&field, r)
}

pub(crate) fn classify_field(field: &DefectField, r: usize) -> Result<ClassificationReport> {
    let (g, d) = regions_of(field, r);
    if g.sites.is_empty() {
        return Err(Error::WindowTooSmall(format!("no site has verified F >= {r}")));
    }
    let deepest = field.deepest();
    let gset = g.to_hash_set();
    let components: Vec<ComponentInfo> = connected_components(&gset)
        .into_iter()
        .map(|sites| {
            let depth = sites.iter().map(|z| field.get(z).unwrap().lower()).max().unwrap();
            ComponentInfo { size: sites.len(), anchor: sites[0].clone(), depth, projective: 2 * depth >= deepest, sites }
        })
        .collect();
    let holes = if field.window.dim() == 2 { holes(&gset) } else { vec![] };
    let projective = components.iter().filter(|c| c.projective).count();
    let classification = if d.sites.is_empty() {
        Classification::None
    } else {
        match (projective >= 2, holes.len()) {
            (true, 0) => Classification::DomainBoundary { components: projective },
            (true, h) => Classification::Mixed { components: projective, holes: h },
            (false, 0) => Classification::Other,
            (false, h) => Classification::Codimension2 { holes: h },
        }
    };
    Ok(ClassificationReport { classification, r, deepest, defect_sites: d.sites.len(), components, holes })
}
