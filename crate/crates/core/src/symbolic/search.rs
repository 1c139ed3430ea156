//! Backtracking enumeration of locally admissible patterns on finite site sets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Constraint, SftSpec, Sym};
use crate::error::{Error, Result};
use crate::lattice::{Ball, Rect, Site};

/// Node limit for backtracking searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_results: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000, max_results: 2_000_000 }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, ..Default::default() }
    }
}

/// What a single local test compares.
#[derive(Clone, Debug)]
enum Test {
    /// Membership in the base shift's block list.
    Block,
    /// Base Wang matching along an axis.
    Pair(usize),
}

/// A local test on cells `(site index, position inside the symbol)`.
#[derive(Clone, Debug)]
struct Check {
    cells: Vec<(usize, usize)>,
    test: Test,
}

/// The base shift against which tests are evaluated, plus symbol decoding.
struct Checker<'a> {
    base: &'a SftSpec,
    blocks: Option<&'a [Vec<Sym>]>,
    checks: Vec<Check>,
}

impl<'a> Checker<'a> {
    fn new(spec: &'a SftSpec, sites: &[Site]) -> Result<Self> {
        match &spec.constraint {
            Constraint::Recoded { base, k, blocks } => {
                let k = *k as i64;
                let inner = Rect::new(vec![0; spec.dim], vec![k - 1; spec.dim]);
                let mut base_sites = vec![];
                let mut origin = vec![];
                for (i, s) in sites.iter().enumerate() {
                    for (p, o) in inner.sites().into_iter().enumerate() {
                        base_sites.push(s.scale(k).add(&o));
                        origin.push((i, p));
                    }
                }
                let checks = base_checks(base, &base_sites)?
                    .into_iter()
                    .map(|c| Check { cells: c.cells.iter().map(|&(b, _)| origin[b]).collect(), test: c.test })
                    .collect();
                Ok(Checker { base, blocks: Some(blocks), checks })
            }
            _ => {
                Ok(Checker { base: spec, blocks: None, checks: base_checks(spec, sites)? })
            }
        }
    }

    fn value(&self, sym: Sym, pos: usize) -> Sym {
        match self.blocks {
            Some(b) => b[sym as usize][pos],
            None => sym,
        }
    }

    fn passes(&self, check: &Check, assign: &[Sym]) -> bool {
        let vals: Vec<Sym> = check.cells.iter().map(|&(i, p)| self.value(assign[i], p)).collect();
        match (&check.test, &self.base.constraint) {
            (Test::Block, Constraint::Blocks { admissible }) => admissible.contains(&vals),
            (Test::Pair(d), Constraint::Wang { tiles }) => tiles.matches(*d, vals[0], vals[1]),
            _ => true,
        }
    }
}

fn base_checks(spec: &SftSpec, sites: &[Site]) -> Result<Vec<Check>> {
    let index: HashMap<&Site, usize> = sites.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = vec![];
    match &spec.constraint {
        Constraint::Full => {}
        Constraint::Blocks { .. } => {
            let offsets = Ball::offsets(spec.dim, spec.radius);
            for c in sites {
                let cells: Option<Vec<(usize, usize)>> =
                    offsets.iter().map(|o| index.get(&c.add(o)).map(|&i| (i, 0))).collect();
                if let Some(cells) = cells {
                    out.push(Check { cells, test: Test::Block });
                }
            }
        }
        Constraint::Wang { .. } => {
            for (i, s) in sites.iter().enumerate() {
                for d in 0..spec.dim {
                    if let Some(&j) = index.get(&s.step(d, 1)) {
                        out.push(Check { cells: vec![(i, 0), (j, 0)], test: Test::Pair(d) });
                    }
                }
            }
        }
        Constraint::Recoded { .. } => {
            return Err(Error::Invalid("nested recoding is not supported".into()));
        }
    }
    Ok(out)
}

impl SftSpec {
    /// All locally admissible assignments on `sites` agreeing with `fixed`.
    ///
    /// Results list symbols in the order of `sites`.
    pub fn enumerate_patterns(&self, sites: &[Site], fixed: &[Option<Sym>], budget: SearchBudget) -> Result<Vec<Vec<Sym>>> {
        let mut out = vec![];
        self.search(sites, fixed, budget, &mut |a| {
            out.push(a.to_vec());
            true
        })?;
        Ok(out)
    }

    /// Whether some locally admissible assignment on `sites` agrees with `fixed`.
    pub fn extends(&self, sites: &[Site], fixed: &[Option<Sym>], budget: SearchBudget) -> Result<bool> {
        let mut found = false;
        self.search(sites, fixed, budget, &mut |_| {
            found = true;
            false
        })?;
        Ok(found)
    }

    /// Some locally admissible assignment on `sites` agreeing with `fixed`.
    pub fn witness(&self, sites: &[Site], fixed: &[Option<Sym>], budget: SearchBudget) -> Result<Option<Vec<Sym>>> {
        let mut found = None;
        self.search(sites, fixed, budget, &mut |a| {
            found = Some(a.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Depth-first search; `visit` returns whether to continue.
    pub(crate) fn search(
        &self,
        sites: &[Site],
        fixed: &[Option<Sym>],
        budget: SearchBudget,
        visit: &mut dyn FnMut(&[Sym]) -> bool,
    ) -> Result<()> {
        assert_eq!(sites.len(), fixed.len(), "one fixed entry per site");
        let n = sites.len();
        let checker = Checker::new(self, sites)?;
        // Search order: fixed cells first, then lexicographic.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| fixed[b].is_some().cmp(&fixed[a].is_some()).then(sites[a].cmp(&sites[b])));
        let mut rank = vec![0usize; n];
        for (k, &i) in order.iter().enumerate() {
            rank[i] = k;
        }
        let mut triggered: Vec<Vec<usize>> = vec![vec![]; n];
        for (ci, c) in checker.checks.iter().enumerate() {
            let last = c.cells.iter().map(|&(i, _)| rank[i]).max().unwrap();
            triggered[last].push(ci);
        }
        let alpha = self.alphabet_size() as Sym;
        let mut assign = vec![0 as Sym; n];
        let mut choice: Vec<Sym> = vec![0; n];
        let mut nodes = 0u64;
        let mut results = 0usize;
        let mut depth = 0usize;
        if n == 0 {
            visit(&[]);
            return Ok(());
        }
        // Iterative backtracking: choice[depth] is the next candidate to try.
        let start = |k: usize| -> Sym { fixed[order[k]].unwrap_or(0) };
        let end = |k: usize| -> Sym { fixed[order[k]].map(|s| s + 1).unwrap_or(alpha) };
        choice[0] = start(0);
        loop {
            if choice[depth] >= end(depth) {
                if depth == 0 {
                    return Ok(());
                }
                depth -= 1;
                choice[depth] += 1;
                continue;
            }
            nodes += 1;
            if nodes > budget.max_nodes {
                return Err(Error::BudgetExceeded(format!("pattern search exceeded {} nodes", budget.max_nodes)));
            }
            let site = order[depth];
            assign[site] = choice[depth];
            let ok = triggered[depth].iter().all(|&ci| checker.passes(&checker.checks[ci], &assign));
            if !ok {
                choice[depth] += 1;
                continue;
            }
            if depth + 1 == n {
                results += 1;
                if results > budget.max_results {
                    return Err(Error::BudgetExceeded(format!("more than {} patterns", budget.max_results)));
                }
                if !visit(&assign) {
                    return Ok(());
                }
                choice[depth] += 1;
                continue;
            }
            depth += 1;
            choice[depth] = start(depth);
        }
    }
}
