//! Defect invariants: residues around codimension-two holes, `d`-poles,
//! gaps and tilt across domain boundaries, and persistence under automata.

mod gap;
mod persistence;

pub use gap::{
    cgap, choose_references, tilt_estimate, tilt_estimate_with, Potentials, GapAnalysis, Sharpness, SlopeSample,
    TiltOptions, TiltVerdict,
};
pub use persistence::{persistence_experiment, PersistenceReport, PersistenceStep, PullbackCheck};

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycles::{eval_equivariant, evaluate_trail, CocycleRule, EquivariantCochainRule};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::lattice::{boundary, connected_components_linf, loop_around, loop_around_from, Chain, Rect, Site, Trail};
use crate::symbolic::{classify_defect, defect_field, ClassificationReport, Configuration, SftSpec};

/// What a residue says about its hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueVerdict {
    /// Nonzero residue: the hole is an essential defect.
    Essential,
    /// Zero residue: this cocycle says nothing.
    Inconclusive,
}

/// Residue of a cocycle around one hole of `G_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleResidue {
    /// Index into the classification's hole list.
    pub hole: usize,
    /// Lexicographically smallest site of the hole.
    pub anchor: Site,
    pub hole_size: usize,
    /// Counterclockwise ring used for the residue.
    pub loop_: Trail,
    pub residue: GroupElement,
    /// Value on the next enclosing ring, when one fits in `G_r`.
    pub second_residue: Option<GroupElement>,
    pub verdict: ResidueVerdict,
}

impl HoleResidue {
    /// Whether the two loops agree (vacuously true without a second loop).
    pub fn loop_invariant(&self) -> bool {
        self.second_residue.as_ref().map(|v| v == &self.residue).unwrap_or(true)
    }
}

/// Tilt across one pair of projective components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTilt {
    pub components: (usize, usize),
    pub samples: Vec<SlopeSample>,
    pub verdict: TiltVerdict,
}

/// Residues and tilt for one configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefectReport {
    pub classification: ClassificationReport,
    pub residues: Vec<HoleResidue>,
    pub tilts: Vec<BoundaryTilt>,
    /// Range of the unflawed region used.
    pub r: usize,
    /// Deepest verified defect-field value in the window.
    pub r_max: u32,
}

/// Residues of `rule` around every hole of `G_r` in a planar configuration.
pub fn residue_report(cfg: &Configuration, spec: &SftSpec, rule: &CocycleRule, r: usize) -> Result<DefectReport> {
    if cfg.dim() != 2 || rule.dim != 2 {
        return Err(Error::UnsupportedDimension { found: cfg.dim(), what: "residues are taken around planar loops".into() });
    }
    let classification = classify_defect(cfg, spec, r)?;
    let (g, _) = crate::symbolic::defect_region(cfg, spec, r)?;
    let region = g.to_hash_set();
    let residues = classification
        .holes
        .par_iter()
        .enumerate()
        .map(|(i, hole)| hole_residue(cfg, rule, &region, i, hole))
        .collect::<Result<Vec<_>>>()?;
    let r_max = classification.deepest;
    Ok(DefectReport { classification, residues, tilts: vec![], r, r_max })
}

fn hole_residue(cfg: &Configuration, rule: &CocycleRule, region: &HashSet<Site>, i: usize, hole: &[Site]) -> Result<HoleResidue> {
    let loop_ = loop_around(hole, region)?;
    let residue = evaluate_trail(rule, cfg, &loop_)?;
    let bb = Rect::bounding(hole).unwrap();
    let k = bb.lo[0] - loop_.first().0[0];
    let second_residue = match loop_around_from(hole, region, k + 1) {
        Ok(t) => Some(evaluate_trail(rule, cfg, &t)?),
        Err(Error::NoEnclosingRing(_)) => None,
        Err(e) => return Err(e),
    };
    let verdict = if rule.group.is_identity(&residue) { ResidueVerdict::Inconclusive } else { ResidueVerdict::Essential };
    Ok(HoleResidue {
        hole: i,
        anchor: hole.iter().min().unwrap().clone(),
        hole_size: hole.len(),
        loop_,
        residue,
        second_residue,
        verdict,
    })
}

/// Value of an equivariant cochain on one closed shell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellValue {
    /// Box of top cells whose boundary is the shell.
    pub rect: Rect,
    pub value: GroupElement,
    /// Every cell the cochain reads on the shell lies in `G_r`.
    pub in_unflawed: bool,
}

/// Shells around one connected component of the defect set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DPole {
    pub anchor: Site,
    pub size: usize,
    /// Boxes grown by `0, 1, ...` around the component, while they fit.
    pub shells: Vec<ShellValue>,
    /// Value on the innermost shell inside `G_r`; nonzero means a pole.
    pub value: GroupElement,
    pub is_pole: bool,
}

/// Sites the cochain reads on a chain.
fn read_sites(eq: &EquivariantCochainRule, chain: &Chain) -> Vec<Site> {
    let mut out = vec![];
    for cell in chain.terms.keys() {
        if let Some(m) = eq.map(&cell.axes) {
            out.extend(m.support.iter().map(|s| cell.base.add(s)));
        }
    }
    out
}

/// Evaluate an equivariant `d`-cocycle on the boundaries of nested boxes
/// around each component of the defect set.
///
/// The boxes are boxes of `(d+1)`-cells spanning the first `d+1` axes, so
/// `d = D - 1` gives closed shells around the defect.
pub fn d_pole_search(cfg: &Configuration, spec: &SftSpec, eq: &EquivariantCochainRule, r: usize) -> Result<Vec<DPole>> {
    let dim = cfg.dim();
    if eq.dim != dim || eq.degree + 1 > dim {
        return Err(Error::WrongDegree(format!("degree {} cochain in dimension {dim}", eq.degree)));
    }
    if eq.degree + 1 != dim {
        return Err(Error::UnsupportedDimension {
            found: dim,
            what: format!("shells are boundaries of {dim}-boxes; degree {} needs a slab of the lattice", eq.degree),
        });
    }
    let field = defect_field(cfg, spec)?;
    let region: HashSet<Site> = field.unflawed(r).into_iter().collect();
    let defects: HashSet<Site> = field.defect_sites().into_iter().collect();
    let window = cfg.window();
    let comps = connected_components_linf(&defects);
    comps
        .par_iter()
        .map(|comp| {
            let bb = Rect::bounding(comp).unwrap();
            let mut shells = vec![];
            for k in 0.. {
                let rect = bb.shrink(-k);
                let shell = boundary(&Chain::solid_box(&rect));
                let reads = read_sites(eq, &shell);
                if !reads.iter().all(|z| window.contains(z)) {
                    break;
                }
                let value = eval_equivariant(eq, cfg, &shell)?;
                let in_unflawed = reads.iter().all(|z| region.contains(z));
                shells.push(ShellValue { rect, value, in_unflawed });
            }
            let Some(inner) = shells.iter().find(|s| s.in_unflawed) else {
                return Err(Error::DefectNotEnclosable(format!(
                    "no box around the defect at {} has its shell inside G_{r} and the window",
                    comp.iter().min().unwrap()
                )));
            };
            let value = inner.value.clone();
            Ok(DPole {
                anchor: comp.iter().min().unwrap().clone(),
                size: comp.len(),
                is_pole: !eq.group.is_identity(&value),
                value,
                shells,
            })
        })
        .collect()
}

/// Value of a cochain on the boundary of one box of top cells.
pub fn shell_value(cfg: &Configuration, eq: &EquivariantCochainRule, rect: &Rect) -> Result<GroupElement> {
    eval_equivariant(eq, cfg, &boundary(&Chain::solid_box(rect)))
}

/// Residue of a rule on an arbitrary closed trail.
pub fn residue(rule: &CocycleRule, cfg: &Configuration, loop_: &Trail) -> Result<GroupElement> {
    if !loop_.is_closed() {
        return Err(Error::InvalidTrail("a residue needs a closed trail".into()));
    }
    evaluate_trail(rule, cfg, loop_)
}

/// Residues and, when the unflawed region splits, tilt between every pair of
/// projective components.
pub fn defect_report(
    cfg: &Configuration,
    spec: &SftSpec,
    rule: &CocycleRule,
    r: usize,
    opts: &TiltOptions,
) -> Result<DefectReport> {
    let mut report = residue_report(cfg, spec, rule, r)?;
    let projective = report.classification.components.iter().filter(|c| c.projective).count();
    if projective >= 2 {
        match tilt_estimate(cfg, spec, rule, r, opts) {
            Ok(gap) => report.tilts = gap.boundary_tilts(),
            Err(Error::NoNontrivialPseudonorm(_)) | Err(Error::AmbiguousPath(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
