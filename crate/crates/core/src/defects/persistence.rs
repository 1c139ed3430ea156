//! Persistence of residues and gaps along automaton orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{residue_report, tilt_estimate, HoleResidue, TiltOptions, TiltVerdict};
use crate::automaton::{energy_drop_check, evolve, CaRule, EnergyDropReport};
use crate::cocycles::{evaluate_trail, pullback, CocycleRule};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::lattice::Site;
use crate::symbolic::{Classification, Configuration, SftSpec};

/// `Res C` on `Φ(a)` against `Res Φ_*C` on `a`, for one loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackCheck {
    pub anchor: Site,
    pub on_image: GroupElement,
    pub pulled_back: GroupElement,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PersistenceStep {
    pub t: usize,
    pub classification: Option<Classification>,
    pub residues: Vec<HoleResidue>,
    pub tilt: Option<TiltVerdict>,
    /// Loops of this step checked against the pulled-back rule on step `t - 1`.
    pub pullback: Vec<PullbackCheck>,
    /// Defect-field drop from this step to the next.
    pub energy: Option<EnergyDropReport>,
    /// Why part of the analysis was skipped.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub steps: Vec<PersistenceStep>,
    /// The sorted residue values agree at every step.
    pub residues_constant: bool,
    pub pullback_ok: bool,
    pub drop_bound_ok: bool,
}

/// Run `steps` automaton steps and re-analyse every configuration of the orbit.
pub fn persistence_experiment(
    cfg: &Configuration,
    spec: &SftSpec,
    rule: &CocycleRule,
    ca: &CaRule,
    steps: usize,
    r: usize,
) -> Result<PersistenceReport> {
    let orbit = evolve(ca, cfg, steps)?;
    let pulled = pullback(rule, ca)?;
    let opts = TiltOptions::default();
    let records = (0..orbit.len())
        .into_par_iter()
        .map(|t| analyse(&orbit, t, spec, rule, &pulled, ca, r, &opts))
        .collect::<Result<Vec<_>>>()?;
    let key = |s: &PersistenceStep| {
        let mut v: Vec<String> = s.residues.iter().map(|h| h.residue.to_string()).collect();
        v.sort();
        v
    };
    let residues_constant = records.windows(2).all(|w| key(&w[0]) == key(&w[1]));
    let pullback_ok = records.iter().all(|s| s.pullback.iter().all(|p| p.equal));
    let drop_bound_ok = records.iter().all(|s| s.energy.as_ref().map(|e| e.holds).unwrap_or(true));
    Ok(PersistenceReport { steps: records, residues_constant, pullback_ok, drop_bound_ok })
}

#[allow(clippy::too_many_arguments)]
fn analyse(
    orbit: &[Configuration],
    t: usize,
    spec: &SftSpec,
    rule: &CocycleRule,
    pulled: &CocycleRule,
    ca: &CaRule,
    r: usize,
    opts: &TiltOptions,
) -> Result<PersistenceStep> {
    let a = &orbit[t];
    let mut step = PersistenceStep {
        t,
        classification: None,
        residues: vec![],
        tilt: None,
        pullback: vec![],
        energy: None,
        notes: vec![],
    };
    if a.dim() == 2 {
        match residue_report(a, spec, rule, r) {
            Ok(rep) => {
                step.classification = Some(rep.classification.classification.clone());
                step.residues = rep.residues;
            }
            Err(e) => step.notes.push(format!("residues: {e}")),
        }
    } else {
        step.notes.push("residues: loops are planar".into());
    }
    if matches!(step.classification, Some(Classification::DomainBoundary { .. }) | Some(Classification::Mixed { .. })) {
        match tilt_estimate(a, spec, rule, r, opts) {
            Ok(g) => step.tilt = Some(g.verdict),
            Err(e) => step.notes.push(format!("tilt: {e}")),
        }
    }
    if t > 0 {
        let prev = &orbit[t - 1];
        for h in &step.residues {
            let on_image = h.residue.clone();
            match evaluate_trail(pulled, prev, &h.loop_) {
                Ok(pulled_back) => step.pullback.push(PullbackCheck {
                    anchor: h.anchor.clone(),
                    equal: rule.group.eq(&on_image, &pulled_back)?,
                    on_image,
                    pulled_back,
                }),
                Err(Error::TrailExitsWindow(s)) => step.notes.push(format!("pullback: loop leaves window at {s}")),
                Err(e) => return Err(e),
            }
        }
    }
    if t + 1 < orbit.len() {
        match energy_drop_check(ca, spec, a) {
            Ok(rep) => step.energy = Some(rep),
            Err(e) => step.notes.push(format!("energy: {e}")),
        }
    }
    Ok(step)
}
