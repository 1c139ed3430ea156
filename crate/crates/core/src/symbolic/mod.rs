//! Alphabets, Wang tile sets, subshifts of finite type, finite-window
//! configurations, defect fields and defect regions.
//!
//! Admissibility of patterns larger than the constraint radius is decided by
//! gluing: a pattern is admissible when every constraint window lying fully
//! inside it is admissible. Patterns smaller than the radius are admissible when
//! they extend to an admissible radius-`R` block.

mod config;
mod field;
mod search;

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Ball, Rect, Site};

pub use config::{Configuration, Extension, Pattern};
pub use field::{
    classify_defect, defect_field, defect_region, Classification, ClassificationReport, ComponentInfo, DefectField,
    FieldValue, Region, RegionLabel, PERIODIC_CAP,
};
pub use search::SearchBudget;

/// Symbol index into an alphabet.
pub type Sym = u16;

/// Tiles with a matching relation per axis: `a ⊨_d b` allows `b` at `z + e_d`
/// next to `a` at `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WangRepr", into = "WangRepr")]
pub struct WangTileSet {
    dim: usize,
    tiles: Vec<String>,
    /// `relation[d][a * n + b]`.
    relation: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct WangRepr {
    dim: usize,
    tiles: Vec<String>,
    matches: Vec<Vec<(Sym, Sym)>>,
}

impl TryFrom<WangRepr> for WangTileSet {
    type Error = Error;
    fn try_from(r: WangRepr) -> Result<Self> {
        WangTileSet::new(r.dim, r.tiles, &r.matches)
    }
}

impl From<WangTileSet> for WangRepr {
    fn from(w: WangTileSet) -> Self {
        let matches = (0..w.dim).map(|d| w.pairs(d)).collect();
        WangRepr { dim: w.dim, tiles: w.tiles, matches }
    }
}

impl WangTileSet {
    pub fn new(dim: usize, tiles: Vec<String>, matches: &[Vec<(Sym, Sym)>]) -> Result<Self> {
        let n = tiles.len();
        if dim == 0 {
            return Err(Error::Invalid("tile sets need dimension at least 1".into()));
        }
        if n == 0 || n > Sym::MAX as usize {
            return Err(Error::Invalid(format!("tile count {n} out of range")));
        }
        if matches.len() != dim {
            return Err(Error::Invalid(format!("expected {dim} match relations, got {}", matches.len())));
        }
        let mut relation = vec![vec![false; n * n]; dim];
        for (d, pairs) in matches.iter().enumerate() {
            if pairs.is_empty() {
                return Err(Error::Invalid(format!("match relation on axis {d} is empty")));
            }
            for &(a, b) in pairs {
                if a as usize >= n || b as usize >= n {
                    return Err(Error::Invalid(format!("match ({a}, {b}) names a missing tile")));
                }
                relation[d][a as usize * n + b as usize] = true;
            }
        }
        Ok(WangTileSet { dim, tiles, relation })
    }

    /// Build the relation from a predicate `f(axis, a, b)`.
    pub fn from_fn(dim: usize, tiles: Vec<String>, f: impl Fn(usize, Sym, Sym) -> bool) -> Result<Self> {
        let n = tiles.len() as Sym;
        let matches: Vec<Vec<(Sym, Sym)>> = (0..dim)
            .map(|d| (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| f(d, a, b)).collect())
            .collect();
        Self::new(dim, tiles, &matches)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.tiles
    }

    pub fn matches(&self, axis: usize, a: Sym, b: Sym) -> bool {
        self.relation[axis][a as usize * self.tiles.len() + b as usize]
    }

    pub fn pairs(&self, axis: usize) -> Vec<(Sym, Sym)> {
        let n = self.tiles.len();
        (0..n * n)
            .filter(|&k| self.relation[axis][k])
            .map(|k| ((k / n) as Sym, (k % n) as Sym))
            .collect()
    }

    /// Tiles lacking a partner in some direction, as `(tile, axis, upper side?)`.
    pub fn dead_tiles(&self) -> Vec<(Sym, usize, bool)> {
        let n = self.tiles.len() as Sym;
        let mut out = vec![];
        for d in 0..self.dim {
            for t in 0..n {
                if !(0..n).any(|b| self.matches(d, t, b)) {
                    out.push((t, d, true));
                }
                if !(0..n).any(|a| self.matches(d, a, t)) {
                    out.push((t, d, false));
                }
            }
        }
        out
    }
}

/// How admissible patterns are specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    /// Every pattern is admissible.
    Full,
    /// Admissible blocks over `B(R)` in row-major order.
    Blocks { admissible: BTreeSet<Vec<Sym>> },
    /// Nearest-neighbour matching of a Wang tile set.
    Wang { tiles: WangTileSet },
    /// Symbols are `k^D` blocks of a base shift, listed in `blocks` (row-major).
    Recoded { base: Box<SftSpec>, k: usize, blocks: Vec<Vec<Sym>> },
}

/// A subshift of finite type.
#[derive(Debug, Serialize, Deserialize)]
pub struct SftSpec {
    pub dim: usize,
    pub alphabet: Vec<String>,
    pub radius: usize,
    pub constraint: Constraint,
    /// Memo of small-radius admissibility decided by extension search.
    #[serde(skip)]
    restriction_cache: Mutex<HashMap<Vec<Sym>, bool>>,
}

impl Clone for SftSpec {
    fn clone(&self) -> Self {
        SftSpec {
            dim: self.dim,
            alphabet: self.alphabet.clone(),
            radius: self.radius,
            constraint: self.constraint.clone(),
            restriction_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for SftSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.alphabet == other.alphabet
            && self.radius == other.radius
            && self.constraint == other.constraint
    }
}

impl Eq for SftSpec {}

impl SftSpec {
    fn build(dim: usize, alphabet: Vec<String>, radius: usize, constraint: Constraint) -> Self {
        SftSpec { dim, alphabet, radius, constraint, restriction_cache: Mutex::new(HashMap::new()) }
    }

    pub fn full(dim: usize, alphabet: Vec<String>) -> Self {
        Self::build(dim, alphabet, 0, Constraint::Full)
    }

    /// SFT given by its admissible `B(R)` blocks.
    pub fn from_blocks(dim: usize, alphabet: Vec<String>, radius: usize, blocks: BTreeSet<Vec<Sym>>) -> Result<Self> {
        let len = (2 * radius + 1).pow(dim as u32);
        if blocks.is_empty() {
            return Err(Error::Invalid("no admissible blocks".into()));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() != len || b.iter().any(|&s| s as usize >= alphabet.len())) {
            return Err(Error::Invalid(format!("block {b:?} does not fit B({radius}) over the alphabet")));
        }
        Ok(Self::build(dim, alphabet, radius, Constraint::Blocks { admissible: blocks }))
    }

    /// SFT given by a predicate on `B(R)` blocks (enumerates the alphabet power).
    pub fn from_predicate(dim: usize, alphabet: Vec<String>, radius: usize, f: impl Fn(&[Sym]) -> bool) -> Result<Self> {
        let len = (2 * radius + 1).pow(dim as u32);
        let n = alphabet.len() as u64;
        let total = n.checked_pow(len as u32).filter(|&t| t <= 1 << 24).ok_or_else(|| {
            Error::BudgetExceeded(format!("{n}^{len} candidate blocks"))
        })?;
        let mut blocks = BTreeSet::new();
        for code in 0..total {
            let mut c = code;
            let b: Vec<Sym> = (0..len)
                .map(|_| {
                    let s = (c % n) as Sym;
                    c /= n;
                    s
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            if f(&b) {
                blocks.insert(b);
            }
        }
        Self::from_blocks(dim, alphabet, radius, blocks)
    }

    /// Block recoding: symbols become the admissible `k^D` blocks.
    pub fn recode(base: &SftSpec, k: usize, budget: SearchBudget) -> Result<SftSpec> {
        if k == 0 {
            return Err(Error::Invalid("block size must be at least 1".into()));
        }
        if matches!(base.constraint, Constraint::Recoded { .. }) {
            return Err(Error::Invalid("recoding an already recoded shift is not supported".into()));
        }
        let rect = Rect::new(vec![0; base.dim], vec![k as i64 - 1; base.dim]);
        let sites = rect.sites();
        // Keep blocks that extend to an admissible pattern a radius beyond the
        // block; small blocks are otherwise unconstrained under gluing.
        let margin = rect.shrink(-(base.radius as i64));
        let margin_sites = margin.sites();
        let mut blocks = vec![];
        for b in base.enumerate_patterns(&sites, &vec![None; sites.len()], budget)? {
            let fixed: Vec<Option<Sym>> = margin_sites.iter().map(|z| rect.index_of(z).map(|i| b[i])).collect();
            if base.extends(&margin_sites, &fixed, budget)? {
                blocks.push(b);
            }
        }
        if blocks.len() > Sym::MAX as usize {
            return Err(Error::BudgetExceeded(format!("{} recoded symbols", blocks.len())));
        }
        let alphabet = blocks
            .iter()
            .map(|b| b.iter().map(|&s| base.alphabet[s as usize].as_str()).collect::<Vec<_>>().join("."))
            .collect();
        let radius = base.radius.div_ceil(k);
        Ok(Self::build(
            base.dim,
            alphabet,
            radius,
            Constraint::Recoded { base: Box::new(base.clone()), k, blocks },
        ))
    }

    /// Encode a base configuration in `k`-blocks: the symbol at `w` is the block
    /// at `k w + [0, k)^D`. Only blocks lying inside the window are kept.
    pub fn encode_configuration(&self, cfg: &Configuration) -> Result<Configuration> {
        let Constraint::Recoded { k, blocks, .. } = &self.constraint else {
            return Err(Error::Invalid("encoding needs a recoded shift".into()));
        };
        let k = *k as i64;
        let w = cfg.window();
        let lo: Vec<i64> = w.lo.iter().map(|c| (c + k - 1).div_euclid(k)).collect();
        let hi: Vec<i64> = w.hi.iter().map(|c| (c + 1).div_euclid(k) - 1).collect();
        let rect = Rect::new(lo, hi);
        if rect.is_empty() {
            return Err(Error::WindowTooSmall(format!("no whole {k}-block fits in the window")));
        }
        let inner = Rect::new(vec![0; self.dim], vec![k - 1; self.dim]);
        let index: HashMap<&[Sym], Sym> = blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i as Sym)).collect();
        let mut cells = Vec::with_capacity(rect.len());
        for z in rect.sites() {
            let base = z.scale(k);
            let block: Vec<Sym> = inner.sites().iter().map(|p| cfg.get(&base.add(p)).unwrap()).collect();
            let s = index
                .get(block.as_slice())
                .ok_or_else(|| Error::UndefinedPattern(format!("block at {base} is not a recoded symbol")))?;
            cells.push(*s);
        }
        Configuration::new(rect, cells)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        self.alphabet.iter().position(|a| a == name).map(|i| i as Sym)
    }

    /// Decode a recoded symbol into its base block; identity otherwise.
    pub fn decode(&self, s: Sym) -> Option<&[Sym]> {
        match &self.constraint {
            Constraint::Recoded { blocks, .. } => blocks.get(s as usize).map(|b| b.as_slice()),
            _ => None,
        }
    }

    /// Whether the pattern read through `get` on `rect` is locally admissible:
    /// every constraint window lying fully inside `rect` is admissible.
    pub fn locally_admissible(&self, rect: &Rect, get: &dyn Fn(&Site) -> Option<Sym>) -> Option<bool> {
        match &self.constraint {
            Constraint::Full => Some(true),
            Constraint::Blocks { admissible } => {
                let r = self.radius as i64;
                let offsets = Ball::offsets(self.dim, self.radius);
                let inner = rect.shrink(r);
                if inner.is_empty() {
                    return Some(true);
                }
                for c in inner.sites() {
                    let block: Option<Vec<Sym>> = offsets.iter().map(|o| get(&c.add(o))).collect();
                    if !admissible.contains(&block?) {
                        return Some(false);
                    }
                }
                Some(true)
            }
            Constraint::Wang { tiles } => {
                for s in rect.sites() {
                    let a = get(&s)?;
                    for d in 0..self.dim {
                        let n = s.step(d, 1);
                        if rect.contains(&n) && !tiles.matches(d, a, get(&n)?) {
                            return Some(false);
                        }
                    }
                }
                Some(true)
            }
            Constraint::Recoded { base, k, blocks } => {
                let k = *k as i64;
                let base_rect = Rect::new(
                    rect.lo.iter().map(|x| x * k).collect(),
                    rect.hi.iter().map(|x| x * k + k - 1).collect(),
                );
                let inner = Rect::new(vec![0; self.dim], vec![k - 1; self.dim]);
                let decode = |b: &Site| -> Option<Sym> {
                    let outer = Site(b.0.iter().map(|x| x.div_euclid(k)).collect());
                    let pos = Site(b.0.iter().map(|x| x.rem_euclid(k)).collect());
                    let s = get(&outer)?;
                    blocks.get(s as usize).map(|blk| blk[inner.index_of(&pos).unwrap()])
                };
                base.locally_admissible(&base_rect, &decode)
            }
        }
    }

    /// Whether `B(center, R)` is an admissible window; `None` when cells are missing.
    pub fn window_ok(&self, center: &Site, get: &dyn Fn(&Site) -> Option<Sym>) -> Option<bool> {
        self.locally_admissible(&Ball::new(center.clone(), self.radius).rect(), get)
    }

    /// Membership of a block in `A_(r)` where `r` is read off the block size.
    ///
    /// Blocks of radius at least `R` are tested by gluing; smaller blocks by
    /// searching for an admissible extension to `B(R)`.
    pub fn is_admissible_block(&self, block: &Pattern) -> Result<bool> {
        let shape = block.rect.shape();
        if shape.iter().any(|&s| s % 2 == 0 || s != shape[0]) || shape.len() != self.dim {
            return Err(Error::Invalid("blocks are odd cubes of the shift's dimension".into()));
        }
        let r = shape[0] / 2;
        if r >= self.radius {
            let get = |z: &Site| block.get(z);
            return Ok(self.locally_admissible(&block.rect, &get).unwrap_or(false));
        }
        let centred = block.recentre();
        self.small_block_admissible(&centred.cells, r)
    }

    /// Whether a block on `B(0, r)` with `r < R` extends to an admissible `B(0, R)` block.
    pub(crate) fn small_block_admissible(&self, cells: &[Sym], r: usize) -> Result<bool> {
        if r >= self.radius {
            let rect = Ball::new(Site::origin(self.dim), r).rect();
            let get = |z: &Site| rect.index_of(z).map(|i| cells[i]);
            return Ok(self.locally_admissible(&rect, &get).unwrap_or(false));
        }
        if let Some(&v) = self.restriction_cache.lock().unwrap().get(cells) {
            return Ok(v);
        }
        let big = Ball::new(Site::origin(self.dim), self.radius).rect();
        let small = Ball::new(Site::origin(self.dim), r).rect();
        let sites = big.sites();
        let fixed: Vec<Option<Sym>> = sites.iter().map(|s| small.index_of(s).map(|i| cells[i])).collect();
        let v = self.extends(&sites, &fixed, SearchBudget::default())?;
        self.restriction_cache.lock().unwrap().insert(cells.to_vec(), v);
        Ok(v)
    }

    /// All admissible blocks on `B(0, r)`, in row-major order of their cells.
    pub fn admissible_blocks(&self, r: usize, budget: SearchBudget) -> Result<Vec<Vec<Sym>>> {
        let rect = Ball::new(Site::origin(self.dim), r).rect();
        if r >= self.radius {
            let sites = rect.sites();
            return self.enumerate_patterns(&sites, &vec![None; sites.len()], budget);
        }
        // Restrictions of radius-R blocks.
        let big = Ball::new(Site::origin(self.dim), self.radius).rect();
        let sites = big.sites();
        let idx: Vec<usize> = rect.sites().iter().map(|s| big.index_of(s).unwrap()).collect();
        let mut out: BTreeSet<Vec<Sym>> = BTreeSet::new();
        for b in self.enumerate_patterns(&sites, &vec![None; sites.len()], budget)? {
            out.insert(idx.iter().map(|&i| b[i]).collect());
        }
        Ok(out.into_iter().collect())
    }
}

/// The radius-1 SFT of locally matching tile patterns.
pub fn wang_to_sft(w: &WangTileSet) -> SftSpec {
    SftSpec::build(w.dim, w.tiles.clone(), 1, Constraint::Wang { tiles: w.clone() })
}

/// Whether `block` (an odd cube) lies in `A_(r)` of `spec`.
pub fn sft_admissibility_check(spec: &SftSpec, block: &Pattern) -> Result<bool> {
    spec.is_admissible_block(block)
}

/// Cap on the dense matching tables of a Wang representation.
pub const MAX_RELATION_ENTRIES: usize = 1 << 27;

/// The radius-`r` Wang representation with the blocks behind each tile.
#[derive(Clone, Debug)]
pub struct WangRepresentation {
    pub radius: usize,
    pub blocks: Vec<Vec<Sym>>,
    pub tiles: WangTileSet,
    pub index: HashMap<Vec<Sym>, usize>,
}

impl WangRepresentation {
    pub fn tile_of(&self, block: &[Sym]) -> Option<usize> {
        self.index.get(block).copied()
    }
}

/// Tiles are `A_(r)`; `a ⊨_d b` when `a` shifted by one step along `d` agrees
/// with `b` on their overlap.
///
/// For `r = 0` the overlap is empty. A Wang-constrained shift then keeps its own
/// matching relation (its tiles are already the radius-0 blocks), and a full
/// shift gets the complete relation; other shifts need `r >= R`.
pub fn wang_representation(spec: &SftSpec, r: usize, budget: SearchBudget) -> Result<WangRepresentation> {
    let blocks: Vec<Vec<Sym>> = match (&spec.constraint, r) {
        (Constraint::Wang { tiles }, 0) => {
            let tiles = tiles.clone();
            let blocks: Vec<Vec<Sym>> = (0..tiles.len() as Sym).map(|s| vec![s]).collect();
            let index = blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
            return Ok(WangRepresentation { radius: 0, blocks, tiles, index });
        }
        _ if r < spec.radius => return Err(Error::RadiusBelowSft { r, big_r: spec.radius }),
        _ => spec.admissible_blocks(r, budget)?,
    };
    if blocks.is_empty() {
        return Err(Error::Invalid(format!("no admissible blocks of radius {r}")));
    }
    let dim = spec.dim;
    let rect = Ball::new(Site::origin(dim), r).rect();
    let sites = rect.sites();
    let n = blocks.len();
    if n.saturating_mul(n).saturating_mul(dim) > MAX_RELATION_ENTRIES {
        return Err(Error::BudgetExceeded(format!("{n} tiles need a matching table larger than {MAX_RELATION_ENTRIES} entries")));
    }
    let mut relation = vec![vec![false; n * n]; dim];
    for d in 0..dim {
        // Key of `a` on the part visible from `b = a + e_d`, in `b`'s coordinates.
        let up_idx: Vec<usize> = sites.iter().filter(|s| s.0[d] > -(r as i64)).map(|s| rect.index_of(s).unwrap()).collect();
        let down_idx: Vec<usize> = sites.iter().filter(|s| s.0[d] < r as i64).map(|s| rect.index_of(s).unwrap()).collect();
        let mut by_key: HashMap<Vec<Sym>, Vec<usize>> = HashMap::new();
        for (j, b) in blocks.iter().enumerate() {
            by_key.entry(down_idx.iter().map(|&i| b[i]).collect()).or_default().push(j);
        }
        for (i, a) in blocks.iter().enumerate() {
            let key: Vec<Sym> = up_idx.iter().map(|&k| a[k]).collect();
            if let Some(js) = by_key.get(&key) {
                for &j in js {
                    relation[d][i * n + j] = true;
                }
            }
        }
    }
    let names = blocks
        .iter()
        .map(|b| b.iter().map(|&s| spec.alphabet[s as usize].as_str()).collect::<Vec<_>>().join("."))
        .collect();
    let tiles = WangTileSet { dim, tiles: names, relation };
    let index = blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    Ok(WangRepresentation { radius: r, blocks, tiles, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_mean() -> SftSpec {
        SftSpec::from_predicate(1, vec!["0".into(), "1".into()], 1, |b| !(b[0] == 1 && b[1] == 1) && !(b[1] == 1 && b[2] == 1))
            .unwrap()
    }

    #[test]
    fn single_tile_is_full_shift() {
        let w = WangTileSet::from_fn(2, vec!["x".into()], |_, _, _| true).unwrap();
        let spec = wang_to_sft(&w);
        assert_eq!(spec.admissible_blocks(2, SearchBudget::default()).unwrap().len(), 1);
    }

    #[test]
    fn full_shift_radius_zero_representation() {
        let spec = SftSpec::full(2, vec!["0".into(), "1".into()]);
        let rep = wang_representation(&spec, 0, SearchBudget::default()).unwrap();
        assert_eq!(rep.tiles.len(), 2);
        for d in 0..2 {
            assert_eq!(rep.tiles.pairs(d).len(), 4);
        }
    }

    #[test]
    fn golden_mean_radius_one_tiles() {
        let spec = golden_mean();
        let rep = wang_representation(&spec, 1, SearchBudget::default()).unwrap();
        // 3-blocks without "11": 000 001 010 100 101.
        assert_eq!(rep.tiles.len(), 5);
        let idx = |s: [Sym; 3]| rep.tile_of(&s).unwrap() as Sym;
        assert!(rep.tiles.matches(0, idx([0, 0, 1]), idx([0, 1, 0])));
        assert!(!rep.tiles.matches(0, idx([0, 0, 1]), idx([0, 0, 0])));
        assert_eq!(spec.admissible_blocks(0, SearchBudget::default()).unwrap().len(), 2);
    }

    #[test]
    fn recoding_golden_mean() {
        let spec = golden_mean();
        let rec = SftSpec::recode(&spec, 2, SearchBudget::default()).unwrap();
        assert_eq!(rec.alphabet_size(), 3);
        assert_eq!(rec.radius, 1);
        let a = rec.symbol("0.1").unwrap();
        let b = rec.symbol("1.0").unwrap();
        let rect = Rect::new(vec![0], vec![1]);
        let bad = |z: &Site| Some(if z.0[0] == 0 { a } else { b });
        assert_eq!(rec.locally_admissible(&rect, &bad), Some(false));
        let good = |z: &Site| Some(if z.0[0] == 0 { b } else { a });
        assert_eq!(rec.locally_admissible(&rect, &good), Some(true));
    }

    #[test]
    fn wang_json_round_trip() {
        let w = WangTileSet::from_fn(2, vec!["a".into(), "b".into()], |d, a, b| d == 0 || a != b).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        let back: WangTileSet = serde_json::from_str(&s).unwrap();
        assert_eq!(w, back);
    }
}
