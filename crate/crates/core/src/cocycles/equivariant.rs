//! Equivariant cochains: one local map per translation class of `d`-cells.
//!
//! The class of a cell is its set of axes. The value on the cell with base `z`
//! and axes `A` is `c_A(a_{z+S_A})`, so translating the configuration and the
//! cell together leaves values unchanged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CocycleRule, Getter, LocalMap, RuleKind};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::lattice::{Chain, CubicCell, Rect, Site};
use crate::symbolic::{Configuration, Pattern, SearchBudget, SftSpec, Sym};

/// A locally determined equivariant `d`-cochain with abelian values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivariantCochainRule {
    pub name: String,
    pub group: GroupSpec,
    pub dim: usize,
    pub degree: usize,
    /// Local maps keyed by ascending axis sets of size `degree`.
    pub maps: Vec<(Vec<usize>, LocalMap)>,
}

/// All ascending `k`-subsets of `0..n`.
pub(crate) fn axis_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl EquivariantCochainRule {
    pub fn new(name: &str, group: GroupSpec, dim: usize, degree: usize, maps: Vec<(Vec<usize>, LocalMap)>) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::InvalidGroup("equivariant cochains take abelian values".into()));
        }
        if degree > dim {
            return Err(Error::WrongDegree(format!("degree {degree} exceeds dimension {dim}")));
        }
        let mut want = axis_sets(dim, degree);
        let mut have: Vec<Vec<usize>> = maps.iter().map(|(a, _)| a.clone()).collect();
        want.sort();
        have.sort();
        if want != have {
            return Err(Error::Invalid(format!("need one map for each axis set {want:?}")));
        }
        Ok(EquivariantCochainRule { name: name.into(), group, dim, degree, maps })
    }

    /// The zero cochain.
    pub fn zero(group: GroupSpec, dim: usize, degree: usize) -> Result<Self> {
        let e = group.identity();
        let maps = axis_sets(dim, degree).into_iter().map(|a| (a, LocalMap::constant(dim, e.clone()))).collect();
        Self::new("zero", group, dim, degree, maps)
    }

    pub fn map(&self, axes: &[usize]) -> Option<&LocalMap> {
        self.maps.iter().find(|(a, _)| a == axes).map(|(_, m)| m)
    }

    pub fn map_mut(&mut self, axes: &[usize]) -> Option<&mut LocalMap> {
        self.maps.iter_mut().find(|(a, _)| a == axes).map(|(_, m)| m)
    }

    pub fn radius(&self) -> usize {
        self.maps.iter().map(|(_, m)| m.radius()).max().unwrap_or(0)
    }

    /// Value on a single cell of the cochain's degree.
    pub fn cell_value(&self, cell: &CubicCell, get: Getter) -> Result<GroupElement> {
        if cell.dim() != self.degree {
            return Err(Error::WrongDegree(format!("{}-cell for a degree {} cochain", cell.dim(), self.degree)));
        }
        let m = self.map(&cell.axes).ok_or_else(|| Error::Invalid(format!("no map for axes {:?}", cell.axes)))?;
        m.eval(&cell.base, get)
    }

    /// `C(chain, a) = sum n_x C(x, a)`.
    pub fn eval_chain(&self, chain: &Chain, get: Getter) -> Result<GroupElement> {
        let mut acc = self.group.identity();
        for (cell, &n) in chain.terms.iter() {
            let v = self.cell_value(cell, get)?;
            acc = self.group.mul(&acc, &self.group.pow(&v, n)?)?;
        }
        Ok(acc)
    }

    /// `δC` on one `(d+1)`-cell.
    pub fn coboundary_at(&self, cell: &CubicCell, get: Getter) -> Result<GroupElement> {
        let mut chain = Chain::zero(cell.dim() - 1);
        for (f, s) in cell.faces() {
            chain.add_term(f, s);
        }
        self.eval_chain(&chain, get)
    }
}

/// Evaluate an equivariant cochain on a chain in a configuration.
pub fn eval_equivariant(eq: &EquivariantCochainRule, cfg: &Configuration, chain: &Chain) -> Result<GroupElement> {
    let get = |z: &Site| cfg.get(z);
    eq.eval_chain(chain, &get)
}

/// A `(d+1)`-cell pattern on which `δC` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoboundaryFailure {
    pub axes: Vec<usize>,
    pub pattern: Pattern,
    pub value: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantCheck {
    pub ok: bool,
    pub patterns_checked: usize,
    pub discarded_nonextendable: usize,
    pub counterexample: Option<CoboundaryFailure>,
}

/// Verify `δ_d C = 0` on every admissible local patch around each class of
/// `(d+1)`-cells. Failures must extend by one constraint radius beyond the
/// bounding box of the cells read to count.
pub fn check_equivariant_cocycle(eq: &EquivariantCochainRule, spec: &SftSpec, budget: SearchBudget) -> Result<EquivariantCheck> {
    if eq.dim != spec.dim {
        return Err(Error::Invalid("cochain and shift dimensions differ".into()));
    }
    let mut checked = 0;
    let mut discarded = 0;
    let margin = spec.radius.max(1);
    for axes in axis_sets(eq.dim, eq.degree + 1) {
        let cell = CubicCell::new(Site::origin(eq.dim), axes.clone());
        let mut sites: Vec<Site> = vec![];
        for (f, _) in cell.faces() {
            let m = eq.map(&f.axes).unwrap();
            sites.extend(m.support.iter().map(|s| f.base.add(s)));
        }
        sites.sort();
        sites.dedup();
        // Only the cells read by the faces are enumerated; the rest of the
        // bounding box is filled in when a failure is tested for extension.
        let patterns = spec.enumerate_patterns(&sites, &vec![None; sites.len()], budget)?;
        checked += patterns.len();
        let values: Vec<Result<GroupElement>> = patterns
            .par_iter()
            .map(|cells| {
                let get = |z: &Site| sites.iter().position(|s| s == z).map(|k| cells[k]);
                eq.coboundary_at(&cell, &get)
            })
            .collect();
        let rect = Rect::bounding(&sites).unwrap();
        let big = rect.shrink(-(margin as i64));
        let big_sites = big.sites();
        for (cells, v) in patterns.iter().zip(values) {
            let v = v?;
            if eq.group.is_identity(&v) {
                continue;
            }
            let fixed: Vec<Option<Sym>> =
                big_sites.iter().map(|z| sites.iter().position(|s| s == z).map(|k| cells[k])).collect();
            let Some(full) = spec.witness(&big_sites, &fixed, budget)? else {
                discarded += 1;
                continue;
            };
            let pattern_cells = rect.sites().iter().map(|z| full[big.index_of(z).unwrap()]).collect();
            return Ok(EquivariantCheck {
                ok: false,
                patterns_checked: checked,
                discarded_nonextendable: discarded,
                counterexample: Some(CoboundaryFailure {
                    axes,
                    pattern: Pattern { rect: rect.clone(), cells: pattern_cells },
                    value: v,
                }),
            });
        }
    }
    Ok(EquivariantCheck { ok: true, patterns_checked: checked, discarded_nonextendable: discarded, counterexample: None })
}

/// The degree-1 equivariant cochain with `c_[d]` the forward step map.
///
/// Local rules copy their maps; other rules are tabulated on the locally
/// admissible patterns over each step support.
pub fn to_equivariant(rule: &CocycleRule, spec: &SftSpec, budget: SearchBudget) -> Result<EquivariantCochainRule> {
    if !rule.group.is_abelian() {
        return Err(Error::InvalidGroup("equivariant cochains take abelian values".into()));
    }
    let mut maps = vec![];
    for d in 0..rule.dim {
        let m = match &rule.kind {
            RuleKind::Local { maps } => maps[d].clone(),
            _ => {
                let support = rule.support(d);
                let mut entries = vec![];
                for cells in spec.enumerate_patterns(&support, &vec![None; support.len()], budget)? {
                    let get = |z: &Site| support.iter().position(|s| s == z).map(|k| cells[k]);
                    entries.push((cells.clone(), rule.forward(d, &Site::origin(rule.dim), &get)?));
                }
                LocalMap::new(support, entries, None)?
            }
        };
        maps.push((vec![d], m));
    }
    EquivariantCochainRule::new(&rule.name, rule.group.clone(), rule.dim, 1, maps)
}

/// The dynamical rule whose step along `e_d` is `c_[d]`.
pub fn from_equivariant(eq: &EquivariantCochainRule) -> Result<CocycleRule> {
    if eq.degree != 1 {
        return Err(Error::WrongDegree(format!("conversion needs degree 1, got {}", eq.degree)));
    }
    let maps = (0..eq.dim).map(|d| eq.map(&[d]).unwrap().clone()).collect();
    let mut rule = CocycleRule::local(&eq.name, eq.group.clone(), maps)?;
    rule.name = eq.name.clone();
    Ok(rule)
}
