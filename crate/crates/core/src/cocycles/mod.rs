//! Group-valued cocycles on subshifts: locally determined dynamical rules,
//! trail evaluation, the two-point view, equivariant cochains, cohomology
//! relations, pullback along cellular automata and block recoding.
//!
//! A dynamical rule gives the value of each positive unit step `z -> z + e_d`
//! from the symbols at `z + S_d` for a finite support `S_d`. The step back
//! `z + e_d -> z` is its inverse, so the inverse law holds by construction.
//! Trail values multiply later steps on the left, matching
//! `C(y + z, a) = C(y, σ^z a) · C(z, a)`.

mod check;
mod equivariant;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::automaton::CaRule;
use crate::error::{Error, Result};
use crate::groups::{vh_exponent, GroupElement, GroupSpec};
use crate::lattice::{Rect, Site, Trail};
use crate::symbolic::{Configuration, DefectField, SearchBudget, SftSpec, Sym};

pub use check::{
    check_cocycle_conditions, cohomologous_search, is_homomorphism_rule, CocycleCheck, CohomologousOutcome,
    SquareFailure,
};
pub use equivariant::{
    check_equivariant_cocycle, eval_equivariant, from_equivariant, to_equivariant, EquivariantCheck,
    EquivariantCochainRule,
};

/// Reader for the symbol at a site.
pub type Getter<'a> = &'a dyn Fn(&Site) -> Option<Sym>;

/// A finite lookup `a_{z+S} -> G` with an optional fallback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LocalMapRepr", into = "LocalMapRepr")]
pub struct LocalMap {
    pub support: Vec<Site>,
    table: HashMap<Vec<Sym>, GroupElement>,
    pub default: Option<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct LocalMapRepr {
    support: Vec<Site>,
    entries: Vec<LocalEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct LocalEntry {
    pattern: Vec<Sym>,
    value: GroupElement,
}

impl TryFrom<LocalMapRepr> for LocalMap {
    type Error = Error;
    fn try_from(r: LocalMapRepr) -> Result<Self> {
        LocalMap::new(r.support, r.entries.into_iter().map(|e| (e.pattern, e.value)), r.default)
    }
}

impl From<LocalMap> for LocalMapRepr {
    fn from(m: LocalMap) -> Self {
        let mut entries: Vec<LocalEntry> = m.table.into_iter().map(|(pattern, value)| LocalEntry { pattern, value }).collect();
        entries.sort_by(|a, b| a.pattern.cmp(&b.pattern));
        LocalMapRepr { support: m.support, entries, default: m.default }
    }
}

impl LocalMap {
    pub fn new(
        support: Vec<Site>,
        entries: impl IntoIterator<Item = (Vec<Sym>, GroupElement)>,
        default: Option<GroupElement>,
    ) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Invalid("a local map reads at least one site".into()));
        }
        let mut table = HashMap::new();
        for (k, v) in entries {
            if k.len() != support.len() {
                return Err(Error::Invalid(format!("pattern {k:?} does not fit the support")));
            }
            table.insert(k, v);
        }
        Ok(LocalMap { support, table, default })
    }

    /// A constant map reading the origin.
    pub fn constant(dim: usize, value: GroupElement) -> Self {
        LocalMap { support: vec![Site::origin(dim)], table: HashMap::new(), default: Some(value) }
    }

    /// Tabulate `f` on every symbol tuple over the support.
    pub fn from_fn(support: Vec<Site>, alphabet_size: usize, f: impl Fn(&[Sym]) -> GroupElement) -> Result<Self> {
        let n = support.len();
        let total = (alphabet_size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > 1 << 22 {
            return Err(Error::BudgetExceeded(format!("{total} patterns to tabulate")));
        }
        let mut table = HashMap::with_capacity(total as usize);
        let mut cur = vec![0 as Sym; n];
        for _ in 0..total {
            table.insert(cur.clone(), f(&cur));
            for slot in cur.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < alphabet_size {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(LocalMap { support, table, default: None })
    }

    pub fn radius(&self) -> usize {
        linf_radius(&self.support)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Sym>, &GroupElement)> {
        self.table.iter()
    }

    pub fn set(&mut self, pattern: Vec<Sym>, value: GroupElement) {
        self.table.insert(pattern, value);
    }

    pub fn lookup(&self, pattern: &[Sym]) -> Option<&GroupElement> {
        self.table.get(pattern).or(self.default.as_ref())
    }

    /// Value at `z`, reading `a_{z+S}`.
    pub fn eval(&self, z: &Site, get: Getter) -> Result<GroupElement> {
        let mut pat = Vec::with_capacity(self.support.len());
        for s in &self.support {
            let y = z.add(s);
            pat.push(get(&y).ok_or_else(|| Error::OutOfWindow(y.to_string()))?);
        }
        self.lookup(&pat).cloned().ok_or_else(|| Error::UndefinedPattern(format!("{pat:?} at {z}")))
    }
}

/// A local transfer function `b`.
pub type TransferFunction = LocalMap;

/// Target of values produced by block recoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecodeExport {
    /// Keep values in the base group.
    Keep,
    /// Map `(vh)^m` in `Z/2 * Z/2` to `m` in `Z`; other values are errors.
    VhExponent,
}

/// How a rule computes the value of a positive unit step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleKind {
    /// One local map per axis.
    Local { maps: Vec<LocalMap> },
    /// `c(e, a) = b(σ^e a) · b(a)^{-1}`.
    Coboundary { transfer: TransferFunction },
    /// `c'(e, a) = b(σ^e a) · c(e, a) · b(a)^{-1}`.
    Twisted { base: Box<CocycleRule>, transfer: TransferFunction },
    /// Pointwise power `c(e, a)^n` (abelian groups).
    Power { base: Box<CocycleRule>, n: i64 },
    /// `(Φ_* c)(e, a) = c(e, Φ(a))`.
    Pullback { base: Box<CocycleRule>, ca: CaRule },
    /// Steps of `k` base units read through a block decoding table.
    Recoded { base: Box<CocycleRule>, k: usize, blocks: Vec<Vec<Sym>>, export: RecodeExport },
}

/// A locally determined dynamical cocycle on `A^{Z^D}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleRule {
    pub name: String,
    pub group: GroupSpec,
    pub dim: usize,
    pub kind: RuleKind,
}

impl CocycleRule {
    /// A rule with one local map per axis.
    pub fn local(name: &str, group: GroupSpec, maps: Vec<LocalMap>) -> Result<Self> {
        let dim = maps.first().map(|m| m.support[0].dim()).ok_or_else(|| Error::Invalid("no axes".into()))?;
        if maps.len() != dim || maps.iter().any(|m| m.support.iter().any(|s| s.dim() != dim)) {
            return Err(Error::Invalid("one local map per axis, supports in the rule's dimension".into()));
        }
        group.validate()?;
        Ok(CocycleRule { name: name.into(), group, dim, kind: RuleKind::Local { maps } })
    }

    /// The rule whose every step is the identity.
    pub fn trivial(dim: usize, group: GroupSpec) -> Self {
        let e = group.identity();
        let maps = (0..dim).map(|_| LocalMap::constant(dim, e.clone())).collect();
        CocycleRule { name: "trivial".into(), group, dim, kind: RuleKind::Local { maps } }
    }

    pub fn twisted(base: &CocycleRule, transfer: TransferFunction) -> Self {
        CocycleRule {
            name: format!("{}~", base.name),
            group: base.group.clone(),
            dim: base.dim,
            kind: RuleKind::Twisted { base: Box::new(base.clone()), transfer },
        }
    }

    pub fn power(base: &CocycleRule, n: i64) -> Result<Self> {
        if !base.group.is_abelian() {
            return Err(Error::InvalidGroup("pointwise powers need an abelian group".into()));
        }
        Ok(CocycleRule {
            name: format!("{}^{n}", base.name),
            group: base.group.clone(),
            dim: base.dim,
            kind: RuleKind::Power { base: Box::new(base.clone()), n },
        })
    }

    /// Value of the step `z -> z + e_axis`.
    pub fn forward(&self, axis: usize, z: &Site, get: Getter) -> Result<GroupElement> {
        let g = &self.group;
        match &self.kind {
            RuleKind::Local { maps } => maps[axis].eval(z, get),
            RuleKind::Coboundary { transfer } => {
                let after = transfer.eval(&z.step(axis, 1), get)?;
                let before = transfer.eval(z, get)?;
                g.mul(&after, &g.inv(&before)?)
            }
            RuleKind::Twisted { base, transfer } => {
                let after = transfer.eval(&z.step(axis, 1), get)?;
                let before = transfer.eval(z, get)?;
                let c = base.forward(axis, z, get)?;
                g.mul(&g.mul(&after, &c)?, &g.inv(&before)?)
            }
            RuleKind::Power { base, n } => g.pow(&base.forward(axis, z, get)?, *n),
            RuleKind::Pullback { base, ca } => {
                let image = |y: &Site| -> Option<Sym> { ca.image_at(get, y).and_then(|r| r.ok()) };
                base.forward(axis, z, &image)
            }
            RuleKind::Recoded { base, k, blocks, export } => {
                let k = *k as i64;
                let inner = Rect::new(vec![0; self.dim], vec![k - 1; self.dim]);
                let decode = |x: &Site| -> Option<Sym> {
                    let outer = Site(x.0.iter().map(|c| c.div_euclid(k)).collect());
                    let pos = Site(x.0.iter().map(|c| c.rem_euclid(k)).collect());
                    let s = get(&outer)?;
                    blocks.get(s as usize).map(|b| b[inner.index_of(&pos).unwrap()])
                };
                let start = z.scale(k);
                let mut acc = base.group.identity();
                for t in 0..k {
                    let step = base.forward(axis, &start.add(&Site::unit(self.dim, axis, t)), &decode)?;
                    acc = base.group.mul(&step, &acc)?;
                }
                match export {
                    RecodeExport::Keep => Ok(acc),
                    RecodeExport::VhExponent => match &acc {
                        GroupElement::Word(w) => vh_exponent(w)
                            .map(GroupElement::int)
                            .ok_or_else(|| Error::OutsideSubgroup(format!("{w} is not a power of vh"))),
                        other => Err(Error::OutsideSubgroup(format!("{other} is not a word"))),
                    },
                }
            }
        }
    }

    /// Value of a unit step from `z` along `axis` with `sign = ±1`.
    pub fn step(&self, z: &Site, axis: usize, sign: i64, get: Getter) -> Result<GroupElement> {
        if sign > 0 {
            self.forward(axis, z, get)
        } else {
            self.group.inv(&self.forward(axis, &z.step(axis, -1), get)?)
        }
    }

    /// Offsets read by the forward step along `axis` from the origin.
    pub fn support(&self, axis: usize) -> Vec<Site> {
        let mut out: BTreeSet<Site> = BTreeSet::new();
        match &self.kind {
            RuleKind::Local { maps } => out.extend(maps[axis].support.iter().cloned()),
            RuleKind::Coboundary { transfer } => {
                out.extend(transfer.support.iter().cloned());
                out.extend(transfer.support.iter().map(|s| s.step(axis, 1)));
            }
            RuleKind::Twisted { base, transfer } => {
                out.extend(base.support(axis));
                out.extend(transfer.support.iter().cloned());
                out.extend(transfer.support.iter().map(|s| s.step(axis, 1)));
            }
            RuleKind::Power { base, .. } => out.extend(base.support(axis)),
            RuleKind::Pullback { base, ca } => {
                for s in base.support(axis) {
                    out.extend(ca.neighborhood.iter().map(|h| s.add(h)));
                }
            }
            RuleKind::Recoded { base, k, .. } => {
                let k = *k as i64;
                for t in 0..k {
                    for s in base.support(axis) {
                        let x = s.add(&Site::unit(self.dim, axis, t));
                        out.insert(Site(x.0.iter().map(|c| c.div_euclid(k)).collect()));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Largest `l_inf` norm of a support offset over all axes.
    pub fn radius(&self) -> usize {
        (0..self.dim).map(|d| linf_radius(&self.support(d))).max().unwrap_or(0)
    }
}

fn linf_radius(sites: &[Site]) -> usize {
    sites.iter().map(|s| s.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)).max().unwrap_or(0) as usize
}

/// The coboundary rule of a transfer function.
pub fn coboundary_rule(b: &TransferFunction, group: GroupSpec) -> CocycleRule {
    CocycleRule { name: "coboundary".into(), group, dim: b.support[0].dim(), kind: RuleKind::Coboundary { transfer: b.clone() } }
}

/// `Φ_* C`; invariance of the shift under `Φ` is checked separately.
pub fn pullback(rule: &CocycleRule, ca: &CaRule) -> Result<CocycleRule> {
    if ca.dim != rule.dim {
        return Err(Error::Invalid("automaton and cocycle dimensions differ".into()));
    }
    Ok(CocycleRule {
        name: format!("{}*{}", ca.name, rule.name),
        group: rule.group.clone(),
        dim: rule.dim,
        kind: RuleKind::Pullback { base: Box::new(rule.clone()), ca: ca.clone() },
    })
}

/// The `k`-block recoding of a rule and its shift.
///
/// The recoded step `w -> w + e_d` is the product of the `k` base steps from
/// `kw` to `kw + k e_d`. With `RecodeExport::VhExponent` values are exported to `Z`
/// and any value outside the cyclic subgroup generated by `vh` is an error when
/// it is evaluated.
pub fn recode_block(
    rule: &CocycleRule,
    spec: &SftSpec,
    k: usize,
    export: RecodeExport,
    budget: SearchBudget,
) -> Result<(CocycleRule, SftSpec)> {
    if k == 0 {
        return Err(Error::Invalid("block size must be positive".into()));
    }
    if export == RecodeExport::VhExponent && rule.group != GroupSpec::FreeProductZ2Z2 {
        return Err(Error::InvalidGroup("vh exponents need values in Z/2*Z/2".into()));
    }
    if k == 1 && export == RecodeExport::Keep {
        return Ok((rule.clone(), spec.clone()));
    }
    let recoded = SftSpec::recode(spec, k, budget)?;
    let blocks: Vec<Vec<Sym>> = (0..recoded.alphabet_size() as Sym).map(|s| recoded.decode(s).unwrap().to_vec()).collect();
    let group = match export {
        RecodeExport::Keep => rule.group.clone(),
        RecodeExport::VhExponent => GroupSpec::integers(),
    };
    let out = CocycleRule {
        name: format!("{}[{k}]", rule.name),
        group,
        dim: rule.dim,
        kind: RuleKind::Recoded { base: Box::new(rule.clone()), k, blocks, export },
    };
    Ok((out, recoded))
}

/// Trail value `c(ζ_N) ··· c(ζ_1)` read through `get`.
pub fn evaluate_trail_with(rule: &CocycleRule, trail: &Trail, get: Getter) -> Result<GroupElement> {
    if trail.dim() != rule.dim {
        return Err(Error::Invalid("trail and rule dimensions differ".into()));
    }
    let mut acc = rule.group.identity();
    for (z, axis, sign) in trail.steps() {
        let c = rule.step(z, axis, sign, get).map_err(|e| match e {
            Error::OutOfWindow(s) => Error::TrailExitsWindow(s),
            other => other,
        })?;
        acc = rule.group.mul(&c, &acc)?;
    }
    Ok(acc)
}

/// Trail value in a configuration.
pub fn evaluate_trail(rule: &CocycleRule, cfg: &Configuration, trail: &Trail) -> Result<GroupElement> {
    let get = |z: &Site| cfg.get(z);
    evaluate_trail_with(rule, trail, &get)
}

/// A trail value with a flag for trails passing through the defect set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailValue {
    pub value: GroupElement,
    /// Some trail site lies outside `G_R`; the value may depend on the trail.
    pub touches_defect: bool,
}

pub fn evaluate_trail_flagged(
    rule: &CocycleRule,
    cfg: &Configuration,
    trail: &Trail,
    field: &DefectField,
) -> Result<TrailValue> {
    let value = evaluate_trail(rule, cfg, trail)?;
    let touches_defect = trail.sites().iter().any(|z| !field.get(z).map(|v| v.at_least(field.big_r)).unwrap_or(false));
    Ok(TrailValue { value, touches_defect })
}

/// Two-point value `C̈(y, z) = C(z - y, σ^y a)`, read along the axis path.
pub fn two_point(rule: &CocycleRule, cfg: &Configuration, y: &Site, z: &Site) -> Result<GroupElement> {
    evaluate_trail(rule, cfg, &Trail::axis_path(y, z))
}

/// The evaluated two-point cocycle of a rule on a configuration.
pub struct TwoPointCocycle<'a> {
    pub rule: &'a CocycleRule,
    pub cfg: &'a Configuration,
}

/// Bind a rule to a configuration.
pub fn to_two_point<'a>(rule: &'a CocycleRule, cfg: &'a Configuration) -> TwoPointCocycle<'a> {
    TwoPointCocycle { rule, cfg }
}

impl TwoPointCocycle<'_> {
    pub fn value(&self, y: &Site, z: &Site) -> Result<GroupElement> {
        two_point(self.rule, self.cfg, y, z)
    }
}

/// Whether every step value is independent of the configuration, making the
/// rule a homomorphism `Z^D -> G`.
pub fn constant_steps(rule: &CocycleRule, spec: &SftSpec, budget: SearchBudget) -> Result<Option<Vec<GroupElement>>> {
    let mut out = vec![];
    for d in 0..rule.dim {
        let support = rule.support(d);
        let rect = Rect::bounding(&support).unwrap();
        let sites = rect.sites();
        let mut seen: Option<GroupElement> = None;
        let mut constant = true;
        let mut err = None;
        spec.search(&sites, &vec![None; sites.len()], budget, &mut |cells| {
            let get = |z: &Site| rect.index_of(z).map(|i| cells[i]);
            match rule.forward(d, &Site::origin(rule.dim), &get) {
                Ok(v) => match &seen {
                    None => seen = Some(v),
                    Some(s) if rule.group.eq(s, &v).unwrap_or(false) => {}
                    Some(_) => constant = false,
                },
                Err(e) => err = Some(e),
            }
            constant && err.is_none()
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if !constant {
            return Ok(None);
        }
        out.push(seen.unwrap_or_else(|| rule.group.identity()));
    }
    Ok(Some(out))
}
