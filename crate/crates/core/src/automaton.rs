//! Cellular automata `Φ(a)_z = φ(a_{z+H})` on windowed configurations, block-level
//! invariance checks and the defect-field drop bound.
//!
//! Expression rules use a small total language over the neighbour values
//! `x0, x1, ...` (in neighbourhood order):
//!
//! ```text
//! expr    := or ('?' expr ':' expr)?
//! or      := and ('||' and)*
//! and     := cmp ('&&' cmp)*
//! cmp     := add (('=='|'!='|'<'|'<='|'>'|'>=') add)?
//! add     := mul (('+'|'-') mul)*
//! mul     := unary (('*'|'/'|'%') unary)*
//! unary   := ('-'|'!') unary | primary
//! primary := integer | 'x' integer | name '(' args ')' | '(' expr ')'
//! ```
//!
//! Functions: `min(a, b, ...)`, `max(a, b, ...)`, `sum()` (all neighbours) and
//! `count(k)` (neighbours equal to `k`). Booleans are `0`/`1`; `/` and `%`
//! by zero evaluate to `0` and `%` is Euclidean.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Ball, Rect, Site};
use crate::symbolic::{defect_field, Configuration, Extension, FieldValue, Pattern, SearchBudget, SftSpec, Sym};

/// How the local map is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocalRule {
    /// `φ(x) = x_0`; neighbourhood `{0}`.
    Identity,
    /// `φ(x) = x_0` with neighbourhood `{v}`, so `Φ = σ^v`.
    Shift { v: Site },
    /// Lookup table on neighbourhood patterns, with an optional fallback.
    Table { entries: Vec<(Vec<Sym>, Sym)>, default: Option<Sym> },
    /// Expression in the documented language.
    Expr { source: String },
}

/// A cellular automaton on `A^{Z^D}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CaRepr", into = "CaRepr")]
pub struct CaRule {
    pub name: String,
    pub dim: usize,
    pub alphabet_size: usize,
    pub neighborhood: Vec<Site>,
    pub local: LocalRule,
    table: HashMap<Vec<Sym>, Sym>,
    expr: Option<Expr>,
}

impl PartialEq for CaRule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.dim == other.dim
            && self.alphabet_size == other.alphabet_size
            && self.neighborhood == other.neighborhood
            && self.local == other.local
    }
}

#[derive(Serialize, Deserialize)]
struct CaRepr {
    name: String,
    dim: usize,
    alphabet_size: usize,
    neighborhood: Vec<Site>,
    local: LocalRule,
}

impl TryFrom<CaRepr> for CaRule {
    type Error = Error;
    fn try_from(r: CaRepr) -> Result<Self> {
        CaRule::new(r.name, r.dim, r.alphabet_size, r.neighborhood, r.local)
    }
}

impl From<CaRule> for CaRepr {
    fn from(c: CaRule) -> Self {
        CaRepr { name: c.name, dim: c.dim, alphabet_size: c.alphabet_size, neighborhood: c.neighborhood, local: c.local }
    }
}

impl CaRule {
    pub fn new(name: String, dim: usize, alphabet_size: usize, neighborhood: Vec<Site>, local: LocalRule) -> Result<Self> {
        if neighborhood.is_empty() || neighborhood.iter().any(|h| h.dim() != dim) {
            return Err(Error::Invalid("neighbourhood must be nonempty and match the dimension".into()));
        }
        let mut table = HashMap::new();
        let mut expr = None;
        match &local {
            LocalRule::Identity => {
                if neighborhood != vec![Site::origin(dim)] {
                    return Err(Error::Invalid("the identity rule has neighbourhood {0}".into()));
                }
            }
            LocalRule::Shift { v } => {
                if neighborhood != vec![v.clone()] {
                    return Err(Error::Invalid("a shift rule has neighbourhood {v}".into()));
                }
            }
            LocalRule::Table { entries, default } => {
                for (k, v) in entries {
                    if k.len() != neighborhood.len() || *v as usize >= alphabet_size {
                        return Err(Error::Invalid(format!("table entry {k:?} -> {v} does not fit")));
                    }
                    table.insert(k.clone(), *v);
                }
                if default.is_some_and(|d| d as usize >= alphabet_size) {
                    return Err(Error::Invalid("default symbol outside the alphabet".into()));
                }
            }
            LocalRule::Expr { source } => {
                let e = parse_expr(source)?;
                if let Some(i) = e.max_var() {
                    if i >= neighborhood.len() {
                        return Err(Error::Parse(format!("x{i} exceeds the neighbourhood of size {}", neighborhood.len())));
                    }
                }
                expr = Some(e);
            }
        }
        Ok(CaRule { name, dim, alphabet_size, neighborhood, local, table, expr })
    }

    pub fn identity(dim: usize, alphabet_size: usize) -> Self {
        Self::new("identity".into(), dim, alphabet_size, vec![Site::origin(dim)], LocalRule::Identity).unwrap()
    }

    /// `σ^v`, i.e. `Φ(a)_z = a_{z+v}`.
    pub fn shift(v: Site, alphabet_size: usize) -> Self {
        let dim = v.dim();
        let name = format!("shift{v}");
        Self::new(name, dim, alphabet_size, vec![v.clone()], LocalRule::Shift { v }).unwrap()
    }

    pub fn from_expr(name: &str, dim: usize, alphabet_size: usize, neighborhood: Vec<Site>, source: &str) -> Result<Self> {
        Self::new(name.into(), dim, alphabet_size, neighborhood, LocalRule::Expr { source: source.into() })
    }

    /// Radius `q`: largest `l_inf` norm in the neighbourhood.
    pub fn radius(&self) -> usize {
        self.neighborhood.iter().map(|h| h.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)).max().unwrap_or(0) as usize
    }

    /// `φ` on neighbour values listed in neighbourhood order.
    pub fn eval(&self, values: &[Sym]) -> Result<Sym> {
        let out = match &self.local {
            LocalRule::Identity | LocalRule::Shift { .. } => values[0],
            LocalRule::Table { default, .. } => match self.table.get(values).copied().or(*default) {
                Some(s) => s,
                None => return Err(Error::UndefinedPattern(format!("{} has no entry for {values:?}", self.name))),
            },
            LocalRule::Expr { .. } => {
                let v = self.expr.as_ref().unwrap().eval(values);
                if v < 0 || v as usize >= self.alphabet_size {
                    return Err(Error::UndefinedPattern(format!("{} maps {values:?} to {v}", self.name)));
                }
                v as Sym
            }
        };
        Ok(out)
    }

    /// `Φ(a)_z` from a cell reader; `None` when a neighbour is unknown.
    pub fn image_at(&self, get: &dyn Fn(&Site) -> Option<Sym>, z: &Site) -> Option<Result<Sym>> {
        let vals: Option<Vec<Sym>> = self.neighborhood.iter().map(|h| get(&z.add(h))).collect();
        vals.map(|v| self.eval(&v))
    }
}

/// Apply `Φ`: the window shrinks by `q` (no extension) or keeps its size (periodic).
pub fn apply(ca: &CaRule, cfg: &Configuration) -> Result<Configuration> {
    if ca.dim != cfg.dim() {
        return Err(Error::Invalid("automaton and configuration dimensions differ".into()));
    }
    let q = ca.radius() as i64;
    let out_window = if cfg.is_periodic() { cfg.window().clone() } else { cfg.window().shrink(q) };
    if out_window.is_empty() {
        return Err(Error::WindowTooSmall(format!("window side must exceed {}", 2 * q)));
    }
    let get = |s: &Site| cfg.get(s);
    let cells: Result<Vec<Sym>> = out_window
        .sites()
        .par_iter()
        .map(|z| {
            let get = |s: &Site| cfg.get(s);
            ca.image_at(&get, z).expect("neighbours lie in the window")
        })
        .collect();
    let _ = get;
    let out = Configuration::new(out_window, cells?)?;
    match cfg.extension() {
        Extension::None => Ok(out),
        e => out.with_extension(e.clone()),
    }
}

/// Apply `Φ` to a pattern; the result lives on the box shrunk by `q`.
pub fn apply_pattern(ca: &CaRule, p: &Pattern) -> Result<Pattern> {
    let out = p.rect.shrink(ca.radius() as i64);
    if out.is_empty() {
        return Err(Error::WindowTooSmall("pattern too small for the automaton".into()));
    }
    let get = |s: &Site| p.get(s);
    let cells = out.sites().iter().map(|z| ca.image_at(&get, z).unwrap()).collect::<Result<Vec<_>>>()?;
    Pattern::new(out, cells)
}

/// Outcome of a block-level invariance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum InvarianceVerdict {
    /// Every admissible `(R+q)`-block maps to an admissible `R`-block.
    ProvedOnBlocks { blocks_checked: usize },
    Counterexample { block: Pattern, image: Pattern },
    Inconclusive { reason: String },
}

impl InvarianceVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, InvarianceVerdict::ProvedOnBlocks { .. })
    }
}

/// Check `Φ(A) ⊆ A` at block level.
///
/// Candidate counterexamples must extend to an admissible pattern one constraint
/// radius further out, which filters blocks that are admissible by gluing but
/// never occur.
pub fn check_invariance(ca: &CaRule, spec: &SftSpec, budget: SearchBudget) -> InvarianceVerdict {
    let big_r = spec.radius;
    let q = ca.radius();
    let rect = Ball::new(Site::origin(spec.dim), big_r + q).rect();
    let sites = rect.sites();
    let margin = rect.shrink(-(big_r as i64));
    let margin_sites = margin.sites();
    let mut checked = 0usize;
    let mut found: Option<InvarianceVerdict> = None;
    let mut failure: Option<String> = None;
    let res = spec.search(&sites, &vec![None; sites.len()], budget, &mut |cells| {
        checked += 1;
        let block = Pattern { rect: rect.clone(), cells: cells.to_vec() };
        let image = match apply_pattern(ca, &block) {
            Ok(p) => p,
            Err(e) => {
                failure = Some(e.to_string());
                return false;
            }
        };
        let get = |z: &Site| image.get(z);
        if spec.locally_admissible(&image.rect, &get) == Some(true) {
            return true;
        }
        let fixed: Vec<Option<Sym>> = margin_sites.iter().map(|z| block.get(z)).collect();
        match spec.extends(&margin_sites, &fixed, budget) {
            Ok(true) => {
                found = Some(InvarianceVerdict::Counterexample { block, image });
                false
            }
            Ok(false) => true,
            Err(e) => {
                failure = Some(e.to_string());
                false
            }
        }
    });
    if let Some(v) = found {
        return v;
    }
    if let Some(f) = failure {
        return InvarianceVerdict::Inconclusive { reason: f };
    }
    match res {
        Ok(()) => InvarianceVerdict::ProvedOnBlocks { blocks_checked: checked },
        Err(e) => InvarianceVerdict::Inconclusive { reason: e.to_string() },
    }
}

/// Result of comparing `F_{Φ(a)}` with `F_a - q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyDropReport {
    pub holds: bool,
    pub sites_checked: usize,
    /// Site with the smallest slack `F_{Φ(a)}(z) - (F_a(z) - q)` among exact values.
    pub worst: Option<(Site, i64)>,
    /// Whether `G_{R+q}(a) ⊆ G_R(Φ(a))` on the output window.
    pub unflawed_inclusion: bool,
}

/// Verify `F_{Φ(a)}(z) >= F_a(z) - q` at every output site where it can be refuted.
pub fn energy_drop_check(ca: &CaRule, spec: &SftSpec, cfg: &Configuration) -> Result<EnergyDropReport> {
    let q = ca.radius() as i64;
    let before = defect_field(cfg, spec)?;
    let image = apply(ca, cfg)?;
    let after = defect_field(&image, spec)?;
    let big_r = spec.radius;
    let mut holds = true;
    let mut inclusion = true;
    let mut worst: Option<(Site, i64)> = None;
    let mut checked = 0;
    for z in image.window().sites() {
        let (Some(b), Some(a)) = (before.get(&z), after.get(&z)) else { continue };
        checked += 1;
        if let FieldValue::Exact(w) = a {
            let slack = w as i64 - (b.lower() as i64 - q);
            if worst.as_ref().map(|(_, s)| slack < *s).unwrap_or(true) {
                worst = Some((z.clone(), slack));
            }
            if slack < 0 {
                holds = false;
            }
        }
        if b.at_least(big_r + q as usize) && matches!(a, FieldValue::Exact(w) if (w as usize) < big_r) {
            inclusion = false;
        }
    }
    Ok(EnergyDropReport { holds: holds && inclusion, sites_checked: checked, worst, unflawed_inclusion: inclusion })
}

/// Iterate `Φ` while the window stays nonempty.
pub fn evolve(ca: &CaRule, cfg: &Configuration, steps: usize) -> Result<Vec<Configuration>> {
    let mut out = vec![cfg.clone()];
    for t in 0..steps {
        let next = apply(ca, out.last().unwrap()).map_err(|e| match e {
            Error::WindowTooSmall(_) => Error::WindowExhausted(t),
            other => other,
        })?;
        out.push(next);
    }
    Ok(out)
}

/// Sites of a box in an order usable for `Φ` tables.
pub fn neighborhood_box(dim: usize, q: usize) -> Vec<Site> {
    Rect::new(vec![-(q as i64); dim], vec![q as i64; dim]).sites()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Num(i64),
    Var(usize),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Cond(Box<Expr>, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl Expr {
    fn eval(&self, x: &[Sym]) -> i64 {
        match self {
            Expr::Num(n) => *n,
            Expr::Var(i) => x[*i] as i64,
            Expr::Neg(e) => -e.eval(x),
            Expr::Not(e) => (e.eval(x) == 0) as i64,
            Expr::Cond(c, a, b) => {
                if c.eval(x) != 0 {
                    a.eval(x)
                } else {
                    b.eval(x)
                }
            }
            Expr::Bin(op, a, b) => {
                let (l, r) = (a.eval(x), b.eval(x));
                match op {
                    Op::Add => l + r,
                    Op::Sub => l - r,
                    Op::Mul => l * r,
                    Op::Div => {
                        if r == 0 {
                            0
                        } else {
                            l.div_euclid(r)
                        }
                    }
                    Op::Rem => {
                        if r == 0 {
                            0
                        } else {
                            l.rem_euclid(r)
                        }
                    }
                    Op::Eq => (l == r) as i64,
                    Op::Ne => (l != r) as i64,
                    Op::Lt => (l < r) as i64,
                    Op::Le => (l <= r) as i64,
                    Op::Gt => (l > r) as i64,
                    Op::Ge => (l >= r) as i64,
                    Op::And => (l != 0 && r != 0) as i64,
                    Op::Or => (l != 0 || r != 0) as i64,
                }
            }
            Expr::Call(f, args) => {
                let vals: Vec<i64> = args.iter().map(|a| a.eval(x)).collect();
                match f.as_str() {
                    "min" => vals.into_iter().min().unwrap_or(0),
                    "max" => vals.into_iter().max().unwrap_or(0),
                    "sum" => x.iter().map(|&v| v as i64).sum(),
                    "count" => x.iter().filter(|&&v| v as i64 == vals[0]).count() as i64,
                    _ => unreachable!("names are checked while parsing"),
                }
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(e) | Expr::Not(e) => e.max_var(),
            Expr::Bin(_, a, b) => a.max_var().max(b.max_var()),
            Expr::Cond(a, b, c) => a.max_var().max(b.max_var()).max(c.max_var()),
            Expr::Call(_, args) => args.iter().filter_map(|a| a.max_var()).max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(&'static str),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    const SYMS: [&str; 19] =
        ["==", "!=", "<=", ">=", "&&", "||", "<", ">", "+", "-", "*", "/", "%", "!", "?", ":", "(", ")", ","];
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = vec![];
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[start..i].parse().map_err(|e| Error::Parse(format!("{e}")))?));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[start..i].to_string()));
            continue;
        }
        for sym in SYMS {
            if s[i..].starts_with(sym) {
                out.push(Tok::Sym(sym));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(Error::Parse(format!("unexpected character {c:?} in expression")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Tok::Sym(t)) if *t == s)
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.peek_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {s:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let c = self.binary(0)?;
        if self.peek_sym("?") {
            self.pos += 1;
            let a = self.expr()?;
            self.expect(":")?;
            let b = self.expr()?;
            return Ok(Expr::Cond(Box::new(c), Box::new(a), Box::new(b)));
        }
        Ok(c)
    }

    /// Precedence climbing over the binary operator levels.
    fn binary(&mut self, level: usize) -> Result<Expr> {
        const LEVELS: [&[(&str, Op)]; 5] = [
            &[("||", Op::Or)],
            &[("&&", Op::And)],
            &[("==", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)],
            &[("+", Op::Add), ("-", Op::Sub)],
            &[("*", Op::Mul), ("/", Op::Div), ("%", Op::Rem)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        loop {
            let Some(&(_, op)) = LEVELS[level].iter().find(|(s, _)| self.peek_sym(s)) else { break };
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
            if level == 2 {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_sym("-") {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek_sym("!") {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek_sym("(") {
                    self.pos += 1;
                    let mut args = vec![];
                    if !self.peek_sym(")") {
                        loop {
                            args.push(self.expr()?);
                            if self.peek_sym(",") {
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(")")?;
                    let ok = match name.as_str() {
                        "min" | "max" => !args.is_empty(),
                        "sum" => args.is_empty(),
                        "count" => args.len() == 1,
                        _ => return Err(Error::Parse(format!("unknown function {name}"))),
                    };
                    if !ok {
                        return Err(Error::Parse(format!("wrong number of arguments to {name}")));
                    }
                    return Ok(Expr::Call(name, args));
                }
                if let Some(idx) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    return Ok(Expr::Var(idx));
                }
                Err(Error::Parse(format!("unknown name {name}")))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(e)
}

/// The von Neumann neighbourhood `{0, ±e_1, ..., ±e_D}`.
pub fn von_neumann(dim: usize) -> Vec<Site> {
    let mut out = vec![Site::origin(dim)];
    for d in 0..dim {
        out.push(Site::unit(dim, d, 1));
        out.push(Site::unit(dim, d, -1));
    }
    out
}

/// Two-state majority vote on the von Neumann neighbourhood.
pub fn majority(dim: usize) -> CaRule {
    let n = 2 * dim + 1;
    CaRule::from_expr("majority", dim, 2, von_neumann(dim), &format!("sum() * 2 > {n}")).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let e = parse_expr("x0 + 2 * x1 >= 3 ? max(x0, 5) : -1").unwrap();
        assert_eq!(e.eval(&[1, 1]), 5);
        assert_eq!(e.eval(&[0, 1]), -1);
        let c = parse_expr("count(1) == 2 && !(x0 == 0) || 1 < 0").unwrap();
        assert_eq!(c.eval(&[1, 1, 0]), 1);
        assert_eq!(parse_expr("7 % 3 - 1 - 1").unwrap().eval(&[]), -1);
        assert!(parse_expr("foo(1)").is_err());
        assert!(parse_expr("1 +").is_err());
    }

    #[test]
    fn shift_translates() {
        let cfg = Configuration::from_fn(Rect::new(vec![0, 0], vec![3, 3]), |z| (z.0[0] * 4 + z.0[1]) as Sym);
        let ca = CaRule::shift(Site::from([1, 0]), 16);
        let out = apply(&ca, &cfg).unwrap();
        assert_eq!(out.window(), &Rect::new(vec![1, 1], vec![2, 2]));
        assert_eq!(out.get(&Site::from([1, 1])), cfg.get(&Site::from([2, 1])));
    }

    #[test]
    fn majority_radius_and_table() {
        let m = majority(2);
        assert_eq!(m.radius(), 1);
        assert_eq!(m.eval(&[1, 1, 1, 0, 0]).unwrap(), 1);
        assert_eq!(m.eval(&[1, 1, 0, 0, 0]).unwrap(), 0);
    }

    #[test]
    fn identity_preserves_full_shift() {
        let spec = SftSpec::full(1, vec!["0".into(), "1".into()]);
        assert!(check_invariance(&CaRule::identity(1, 2), &spec, SearchBudget::default()).is_proved());
    }
}
