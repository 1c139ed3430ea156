//! Exhaustive checks over admissible local patterns: the commuting-square
//! condition and the search for transfer functions between two rules.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{constant_steps, CocycleRule, LocalMap, TransferFunction};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::lattice::{Ball, Rect, Site};
use crate::symbolic::{Pattern, SearchBudget, SftSpec, Sym};

/// A pattern on which the two ways around a unit square disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFailure {
    pub axes: (usize, usize),
    pub pattern: Pattern,
    /// `c_j(z + e_i) · c_i(z)`.
    pub lhs: GroupElement,
    /// `c_i(z + e_j) · c_j(z)`.
    pub rhs: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleCheck {
    pub ok: bool,
    pub patterns_checked: usize,
    /// Failing patterns discarded because they do not extend by one constraint radius.
    pub discarded_nonextendable: usize,
    pub counterexample: Option<SquareFailure>,
}

/// The box around `rect` widened by `m` on every side.
fn grow(rect: &Rect, m: usize) -> Rect {
    rect.shrink(-(m as i64))
}

/// Whether a pattern on `rect` extends to an admissible pattern `m` cells wider.
pub(crate) fn extends_by(spec: &SftSpec, rect: &Rect, cells: &[Sym], m: usize, budget: SearchBudget) -> Result<bool> {
    let big = grow(rect, m);
    let sites = big.sites();
    let fixed: Vec<Option<Sym>> = sites.iter().map(|z| rect.index_of(z).map(|i| cells[i])).collect();
    spec.extends(&sites, &fixed, budget)
}

/// Locally admissible patterns on `rect` that extend `m` cells further.
pub(crate) fn extendable_patterns(spec: &SftSpec, rect: &Rect, m: usize, budget: SearchBudget) -> Result<Vec<Vec<Sym>>> {
    let sites = rect.sites();
    let all = spec.enumerate_patterns(&sites, &vec![None; sites.len()], budget)?;
    let keep: Vec<Result<bool>> = all.par_iter().map(|p| extends_by(spec, rect, p, m, budget)).collect();
    let mut out = Vec::with_capacity(all.len());
    for (p, k) in all.into_iter().zip(keep) {
        if k? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Verify `c_j(z + e_i) · c_i(z) = c_i(z + e_j) · c_j(z)` for all axis pairs.
///
/// Patterns range over the locally admissible fillings of the bounding box of
/// the four supports involved. A failing pattern is reported only when it
/// extends by one constraint radius, which screens out fillings that never
/// occur in the shift. The inverse law for backward steps holds by construction.
pub fn check_cocycle_conditions(rule: &CocycleRule, spec: &SftSpec, budget: SearchBudget) -> Result<CocycleCheck> {
    if rule.dim != spec.dim {
        return Err(Error::Invalid("rule and shift dimensions differ".into()));
    }
    let g = &rule.group;
    let origin = Site::origin(rule.dim);
    let margin = spec.radius.max(1);
    let mut checked = 0;
    let mut discarded = 0;
    for i in 0..rule.dim {
        for j in i + 1..rule.dim {
            let (si, sj) = (rule.support(i), rule.support(j));
            let mut all: Vec<Site> = vec![];
            all.extend(si.iter().cloned());
            all.extend(sj.iter().cloned());
            all.extend(sj.iter().map(|s| s.step(i, 1)));
            all.extend(si.iter().map(|s| s.step(j, 1)));
            let rect = Rect::bounding(&all).unwrap();
            let sites = rect.sites();
            let patterns = spec.enumerate_patterns(&sites, &vec![None; sites.len()], budget)?;
            checked += patterns.len();
            let eval = |cells: &Vec<Sym>| -> Result<Option<(GroupElement, GroupElement)>> {
                let get = |z: &Site| rect.index_of(z).map(|k| cells[k]);
                let lhs = g.mul(&rule.forward(j, &origin.step(i, 1), &get)?, &rule.forward(i, &origin, &get)?)?;
                let rhs = g.mul(&rule.forward(i, &origin.step(j, 1), &get)?, &rule.forward(j, &origin, &get)?)?;
                Ok(if g.eq(&lhs, &rhs)? { None } else { Some((lhs, rhs)) })
            };
            let results: Vec<Result<Option<(GroupElement, GroupElement)>>> = patterns.par_iter().map(eval).collect();
            for (cells, res) in patterns.iter().zip(results) {
                let Some((lhs, rhs)) = res? else { continue };
                if !extends_by(spec, &rect, cells, margin, budget)? {
                    discarded += 1;
                    continue;
                }
                let pattern = Pattern { rect: rect.clone(), cells: cells.clone() };
                return Ok(CocycleCheck {
                    ok: false,
                    patterns_checked: checked,
                    discarded_nonextendable: discarded,
                    counterexample: Some(SquareFailure { axes: (i, j), pattern, lhs, rhs }),
                });
            }
        }
    }
    Ok(CocycleCheck { ok: true, patterns_checked: checked, discarded_nonextendable: discarded, counterexample: None })
}

/// Whether every step value is constant on admissible patterns.
pub fn is_homomorphism_rule(rule: &CocycleRule, spec: &SftSpec, budget: SearchBudget) -> Result<bool> {
    Ok(constant_steps(rule, spec, budget)?.is_some())
}

/// Result of a transfer-function search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CohomologousOutcome {
    Found { radius: usize, transfer: TransferFunction },
    /// No transfer of radius at most `max_radius` with values in the candidate set.
    NotFound { max_radius: usize, candidates: usize, whole_group: bool },
}

impl CohomologousOutcome {
    pub fn transfer(&self) -> Option<&TransferFunction> {
        match self {
            CohomologousOutcome::Found { transfer, .. } => Some(transfer),
            _ => None,
        }
    }
}

/// One constraint `b(dst) = c2 · b(src) · c1^{-1}` between two block nodes.
struct Edge {
    src: usize,
    dst: usize,
    c1: GroupElement,
    c2: GroupElement,
}

/// Search a transfer `b` of radius `r <= max_radius` with
/// `c2(e, a) = b(σ^e a) · c1(e, a) · b(a)^{-1}`.
///
/// Each admissible edge pattern ties the value of `b` on one block to its value
/// on the shifted block, so `b` is determined on each connected component of
/// this graph by its value on one block. The search tries every candidate
/// there, which is exhaustive for finite groups; infinite groups need a finite
/// candidate set and all values of `b` must lie in it.
pub fn cohomologous_search(
    rule1: &CocycleRule,
    rule2: &CocycleRule,
    spec: &SftSpec,
    max_radius: usize,
    candidates: Option<&[GroupElement]>,
    budget: SearchBudget,
) -> Result<CohomologousOutcome> {
    if rule1.group != rule2.group || rule1.dim != rule2.dim || rule1.dim != spec.dim {
        return Err(Error::SpecMismatch("rules must share group and dimension with the shift".into()));
    }
    let g = &rule1.group;
    let whole_group = g.order().is_some();
    let mut cands: Vec<GroupElement> = match (candidates, whole_group) {
        (Some(c), _) => c.iter().map(|x| g.canonical(x)).collect::<Result<_>>()?,
        (None, true) => g.elements()?,
        (None, false) => {
            return Err(Error::Invalid("infinite groups need a finite candidate set".into()));
        }
    };
    let e = g.identity();
    cands.retain(|c| c != &e);
    cands.insert(0, e);
    let restrict = candidates.is_some() && !whole_group;
    let dim = spec.dim;
    let origin = Site::origin(dim);
    for r in 0..=max_radius {
        let ball = Ball::offsets(dim, r);
        let mut index: HashMap<Vec<Sym>, usize> = HashMap::new();
        let mut edges: Vec<Edge> = vec![];
        for d in 0..dim {
            let mut all: Vec<Site> = ball.clone();
            all.extend(ball.iter().map(|s| s.step(d, 1)));
            all.extend(rule1.support(d));
            all.extend(rule2.support(d));
            let rect = Rect::bounding(&all).unwrap();
            for cells in extendable_patterns(spec, &rect, spec.radius, budget)? {
                let get = |z: &Site| rect.index_of(z).map(|k| cells[k]);
                let src: Vec<Sym> = ball.iter().map(|s| get(s).unwrap()).collect();
                let dst: Vec<Sym> = ball.iter().map(|s| get(&s.step(d, 1)).unwrap()).collect();
                let n = index.len();
                let si = *index.entry(src).or_insert(n);
                let n = index.len();
                let di = *index.entry(dst).or_insert(n);
                let c1 = rule1.forward(d, &origin, &get)?;
                let c2 = rule2.forward(d, &origin, &get)?;
                edges.push(Edge { src: si, dst: di, c1, c2 });
            }
        }
        if let Some(values) = solve_transfer(g, index.len(), &edges, &cands, restrict)? {
            let mut blocks: Vec<(Vec<Sym>, usize)> = index.into_iter().collect();
            blocks.sort();
            let entries = blocks.into_iter().map(|(b, i)| (b, values[i].clone()));
            let transfer = LocalMap::new(ball.clone(), entries, Some(g.identity()))?;
            return Ok(CohomologousOutcome::Found { radius: r, transfer });
        }
    }
    Ok(CohomologousOutcome::NotFound { max_radius, candidates: cands.len(), whole_group })
}

/// Propagate transfer values component by component.
fn solve_transfer(
    g: &crate::groups::GroupSpec,
    n: usize,
    edges: &[Edge],
    cands: &[GroupElement],
    restrict: bool,
) -> Result<Option<Vec<GroupElement>>> {
    let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
    for (k, e) in edges.iter().enumerate() {
        adj[e.src].push(k);
        adj[e.dst].push(k);
    }
    let mut values: Vec<Option<GroupElement>> = vec![None; n];
    let mut done = vec![false; n];
    for root in 0..n {
        if done[root] {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([root]);
        done[root] = true;
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &k in &adj[u] {
                for w in [edges[k].src, edges[k].dst] {
                    if !done[w] {
                        done[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut solved = false;
        for c in cands {
            if let Some(vals) = propagate(g, root, c, &adj, edges, cands, restrict)? {
                for (u, v) in vals {
                    values[u] = Some(v);
                }
                solved = true;
                break;
            }
        }
        if !solved {
            return Ok(None);
        }
    }
    Ok(Some(values.into_iter().map(|v| v.unwrap()).collect()))
}

fn propagate(
    g: &crate::groups::GroupSpec,
    root: usize,
    start: &GroupElement,
    adj: &[Vec<usize>],
    edges: &[Edge],
    cands: &[GroupElement],
    restrict: bool,
) -> Result<Option<HashMap<usize, GroupElement>>> {
    let mut vals: HashMap<usize, GroupElement> = HashMap::from([(root, start.clone())]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let bu = vals[&u].clone();
        for &k in &adj[u] {
            let e = &edges[k];
            let want_dst = |bs: &GroupElement| -> Result<GroupElement> { g.mul(&g.mul(&e.c2, bs)?, &g.inv(&e.c1)?) };
            let (w, bw) = if e.src == u {
                (e.dst, want_dst(&bu)?)
            } else {
                (e.src, g.mul(&g.mul(&g.inv(&e.c2)?, &bu)?, &e.c1)?)
            };
            match vals.get(&w) {
                Some(existing) => {
                    if !g.eq(existing, &bw)? {
                        return Ok(None);
                    }
                }
                None => {
                    if restrict && !cands.contains(&bw) {
                        return Ok(None);
                    }
                    vals.insert(w, bw);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(Some(vals))
}
