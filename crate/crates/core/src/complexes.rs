//! Tile complexes of Wang tile sets, their homology, the abelianized
//! Conway-Lagarias group, invariant cohomology of radius-`r` representations,
//! and the chain maps between radii induced by restriction and by automata.
//!
//! A cell of the cube labelled by tile `w` is a code `t ∈ {0, 1, 2}^D`: `2`
//! marks an axis the cell spans, `0` and `1` the lower or upper side along
//! the other axes. Cells of cubes are glued when their tiles match, and the
//! classes of that relation are the cells of the complex. Translation acts
//! freely on the labelled cubical complex of `Z^D`, so these classes are
//! also its cells modulo translation.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::CaRule;
use crate::error::{Error, Result};
use crate::groups::modp::{induced_map, FpMatrix, Subquotient};
use crate::groups::{
    cohomology_of_pair, homology_of_pair_sparse, smith_normal_form, FgAbelianGroup, IntegerMatrix, SparseMatrix,
};
use crate::lattice::{Ball, Rect, Site};
use crate::symbolic::{wang_representation, SearchBudget, SftSpec, Sym, WangRepresentation, WangTileSet};

/// One face of a labelled cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceLabel {
    pub tile: usize,
    pub code: Vec<u8>,
}

/// A class of glued faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellClass {
    /// Axes the cell spans.
    pub axes: Vec<usize>,
    pub members: Vec<FaceLabel>,
}

impl CellClass {
    pub fn representative(&self) -> &FaceLabel {
        &self.members[0]
    }
}

/// The tile complex of a tile set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TileComplex {
    pub dim: usize,
    pub tiles: Vec<String>,
    /// Radius of the representation the tiles come from, if any.
    pub radius: Option<usize>,
    /// `cells[d]` lists the `d`-cells.
    pub cells: Vec<Vec<CellClass>>,
    /// `boundaries[d]` is `∂_d : C_d -> C_{d-1}`, with `∂_0` and `∂_{D+1}` zero.
    pub boundaries: Vec<SparseMatrix>,
    /// Class index of every cube cell, at `tile * 3^D + code`.
    class_of: Vec<usize>,
}

fn code_index(code: &[u8]) -> usize {
    code.iter().fold(0, |acc, &c| acc * 3 + c as usize)
}

fn code_at(dim: usize, mut idx: usize) -> Vec<u8> {
    let mut code = vec![0; dim];
    for k in (0..dim).rev() {
        code[k] = (idx % 3) as u8;
        idx /= 3;
    }
    code
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Glue the cubes of `w` along matching faces.
pub fn build_tile_complex(w: &WangTileSet) -> TileComplex {
    build(w, None)
}

fn build(w: &WangTileSet, radius: Option<usize>) -> TileComplex {
    let dim = w.dim();
    let per = 3usize.pow(dim as u32);
    let n = w.len();
    let codes: Vec<Vec<u8>> = (0..per).map(|i| code_at(dim, i)).collect();
    let mut uf = UnionFind((0..n * per).collect());
    for d in 0..dim {
        let upper: Vec<usize> = (0..per).filter(|&i| codes[i][d] == 1).collect();
        for (a, b) in w.pairs(d) {
            for &i in &upper {
                let mut lower = codes[i].clone();
                lower[d] = 0;
                uf.union(a as usize * per + i, b as usize * per + code_index(&lower));
            }
        }
    }
    let mut class_of = vec![usize::MAX; n * per];
    let mut cells: Vec<Vec<CellClass>> = vec![vec![]; dim + 1];
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    for x in 0..n * per {
        let root = uf.find(x);
        let code = &codes[x % per];
        let k = code.iter().filter(|&&c| c == 2).count();
        let c = *root_class.entry(root).or_insert_with(|| {
            let axes = (0..dim).filter(|&a| code[a] == 2).collect();
            cells[k].push(CellClass { axes, members: vec![] });
            cells[k].len() - 1
        });
        cells[k][c].members.push(FaceLabel { tile: x / per, code: code.clone() });
        class_of[x] = c;
    }
    let mut boundaries = vec![SparseMatrix::zeros(0, cells[0].len())];
    for k in 1..=dim {
        let mut m = SparseMatrix::zeros(cells[k - 1].len(), cells[k].len());
        for (j, cell) in cells[k].iter().enumerate() {
            let rep = cell.representative();
            for (i, &a) in cell.axes.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let mut code = rep.code.clone();
                code[a] = 1;
                m.add_entry(class_of[rep.tile * per + code_index(&code)], j, sign);
                code[a] = 0;
                m.add_entry(class_of[rep.tile * per + code_index(&code)], j, -sign);
            }
        }
        boundaries.push(m);
    }
    boundaries.push(SparseMatrix::zeros(cells[dim].len(), 0));
    TileComplex { dim, tiles: w.names().to_vec(), radius, cells, boundaries, class_of }
}

/// Sparse matrix in `(row, column, value)` form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplets {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl Triplets {
    pub fn of(m: &SparseMatrix) -> Self {
        let entries =
            m.columns.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(&i, &x)| (i, j, x))).collect();
        Triplets { rows: m.rows, cols: m.cols, entries }
    }
}

/// JSON view of a complex: cell counts and boundary matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexExport {
    pub dim: usize,
    pub radius: Option<usize>,
    pub tiles: usize,
    pub cell_counts: Vec<usize>,
    pub euler_characteristic: i64,
    /// `∂_1, ..., ∂_D`.
    pub boundaries: Vec<Triplets>,
}

impl TileComplex {
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    /// `∂_d`, for `0 <= d <= D + 1`.
    pub fn boundary(&self, d: usize) -> &SparseMatrix {
        &self.boundaries[d]
    }

    /// Class of the cell `code` of the cube labelled `tile`.
    pub fn class_of(&self, tile: usize, code: &[u8]) -> Option<usize> {
        if tile >= self.tiles.len() || code.len() != self.dim || code.iter().any(|&c| c > 2) {
            return None;
        }
        Some(self.class_of[tile * 3usize.pow(self.dim as u32) + code_index(code)])
    }

    /// Every `∂_d ∂_{d+1}` vanishes.
    pub fn boundary_squares_vanish(&self) -> bool {
        (0..=self.dim).all(|d| self.boundaries[d].mul(&self.boundaries[d + 1]).is_some_and(|m| m.is_zero()))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// Ranks of the integral homology groups.
    pub fn betti_numbers(&self) -> Result<Vec<usize>> {
        (0..=self.dim).map(|d| Ok(tile_homology(self, d, &FgAbelianGroup::integers())?.rank)).collect()
    }

    pub fn export(&self) -> ComplexExport {
        ComplexExport {
            dim: self.dim,
            radius: self.radius,
            tiles: self.tiles.len(),
            cell_counts: self.cell_counts(),
            euler_characteristic: self.euler_characteristic(),
            boundaries: self.boundaries[1..=self.dim].iter().map(Triplets::of).collect(),
        }
    }
}

/// `H_d` of the complex with coefficients.
pub fn tile_homology(tc: &TileComplex, d: usize, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    if d > tc.dim {
        return Err(Error::WrongDegree(format!("degree {d} in a {}-dimensional complex", tc.dim)));
    }
    homology_of_pair_sparse(&tc.boundaries[d + 1], &tc.boundaries[d], coeff)
}

/// `H^d` of the complex with coefficients.
pub fn tile_cohomology(tc: &TileComplex, d: usize, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    if d > tc.dim {
        return Err(Error::WrongDegree(format!("degree {d} in a {}-dimensional complex", tc.dim)));
    }
    cohomology_of_pair(&tc.boundaries[d + 1], &tc.boundaries[d], coeff)
}

/// The abelianized Conway-Lagarias group with coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConwayLagarias {
    pub group: FgAbelianGroup,
    /// Edge colours: the edge classes, horizontal ones (spanning axis 0) first
    /// in class order, then vertical ones. Indexes of `coords` vectors.
    pub colours: Vec<(usize, usize)>,
    /// Cyclic factors in coordinate order, `0` for `Z`.
    pub factors: Vec<u64>,
    /// Rows `rank(ψ)..` of `v⁻¹` restricted to closed balanced words, then `U`.
    reduce: Vec<Vec<i64>>,
    /// Rows of `v⁻¹` that must vanish on balanced words.
    balance: Vec<Vec<i64>>,
}

impl ConwayLagarias {
    /// Index of the colour of the edge class `class` spanning `axis`.
    pub fn colour(&self, axis: usize, class: usize) -> Option<usize> {
        self.colours.iter().position(|&c| c == (axis, class))
    }

    /// Coordinates of a balanced closed word, given by its exponent sum per colour.
    pub fn coords(&self, word: &[i64]) -> Result<Vec<i64>> {
        if word.len() != self.colours.len() {
            return Err(Error::Invalid(format!("expected {} colour exponents", self.colours.len())));
        }
        let dot = |row: &Vec<i64>| row.iter().zip(word).map(|(a, b)| a * b).sum::<i64>();
        if self.balance.iter().any(|r| dot(r) != 0) {
            return Err(Error::Invalid("word is unbalanced or not closed".into()));
        }
        Ok(self
            .reduce
            .iter()
            .zip(&self.factors)
            .map(|(r, &f)| if f == 0 { dot(r) } else { dot(r).rem_euclid(f as i64) })
            .collect())
    }
}

fn to_i64(m: &IntegerMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().ok_or_else(|| Error::Invalid("matrix entry exceeds 64 bits".into()))
}

/// Inverse of a unimodular matrix, via its own Smith form `s = u m v` with `s = ±I`.
fn unimodular_inverse(m: &IntegerMatrix) -> IntegerMatrix {
    let f = smith_normal_form(m);
    debug_assert!((0..m.rows()).all(|i| f.s.get(i, i).abs().is_one()));
    f.v.mul(&f.s).unwrap().mul(&f.u).unwrap()
}

/// The abelianized tile homotopy group of a planar tile set.
///
/// Words in the edge colours are taken up to the tile relations
/// `s + e - n - w`, restricted to balanced words (as many north as south
/// steps, as many east as west). When the complex has more than one vertex,
/// words are also required to be closed.
pub fn conway_lagarias_abelianized(w: &WangTileSet) -> Result<ConwayLagarias> {
    if w.dim() != 2 {
        return Err(Error::UnsupportedDimension { found: w.dim(), what: "tile homotopy groups are planar".into() });
    }
    let tc = build_tile_complex(w);
    if tile_homology(&tc, 0, &FgAbelianGroup::integers())?.rank != 1 {
        return Err(Error::DisconnectedColourGraph("the tile complex is not connected".into()));
    }
    let edges = &tc.cells[1];
    let mut colours: Vec<(usize, usize)> = vec![];
    for axis in 0..2 {
        colours.extend(edges.iter().enumerate().filter(|(_, c)| c.axes == [axis]).map(|(i, _)| (axis, i)));
    }
    let nc = colours.len();
    // Balance and closure conditions, one row each.
    let mut rows: Vec<Vec<i64>> = (0..2).map(|a| colours.iter().map(|&(ax, _)| (ax == a) as i64).collect()).collect();
    if tc.cells[0].len() > 1 {
        let d1 = &tc.boundaries[1];
        rows.extend((0..d1.rows).map(|i| colours.iter().map(|&(_, c)| d1.get(i, c)).collect()));
    }
    let psi = IntegerMatrix::from_rows_shape(rows.len(), nc, &rows);
    let f = smith_normal_form(&psi);
    let rank = f.rank();
    let v_inv = to_i64(&unimodular_inverse(&f.v))?;
    let balance = v_inv[..rank].to_vec();
    let kernel_rows = &v_inv[rank..];
    // Tile relations in kernel coordinates.
    let d2 = &tc.boundaries[2];
    let rel: Vec<Vec<i64>> = kernel_rows
        .iter()
        .map(|row| (0..d2.cols).map(|j| colours.iter().enumerate().map(|(k, &(_, c))| row[k] * d2.get(c, j)).sum()).collect())
        .collect();
    let k = kernel_rows.len();
    let rel = IntegerMatrix::from_rows_shape(k, d2.cols, &rel);
    let g = smith_normal_form(&rel);
    let u = to_i64(&g.u)?;
    let mut factors = vec![];
    let mut reduce = vec![];
    for i in 0..k {
        let d = if i < g.s.rows().min(g.s.cols()) { g.s.get(i, i).abs() } else { Zero::zero() };
        if d.is_one() {
            continue;
        }
        let order = d.to_u64().ok_or_else(|| Error::Invalid("torsion exceeds 64 bits".into()))?;
        factors.push(order);
        reduce.push((0..nc).map(|c| (0..k).map(|j| u[i][j] * kernel_rows[j][c]).sum()).collect());
    }
    let free = factors.iter().filter(|&&f| f == 0).count();
    let torsion: Vec<u64> = factors.iter().copied().filter(|&f| f != 0).collect();
    Ok(ConwayLagarias { group: FgAbelianGroup::new(free, &torsion), colours, factors, reduce, balance })
}

/// The tile complex of the radius-`r` representation with its blocks.
#[derive(Clone, Debug)]
pub struct RadiusComplex {
    pub rep: WangRepresentation,
    pub complex: TileComplex,
}

pub fn radius_complex(spec: &SftSpec, r: usize, budget: SearchBudget) -> Result<RadiusComplex> {
    let rep = wang_representation(spec, r, budget)?;
    let complex = build(&rep.tiles, Some(r));
    Ok(RadiusComplex { rep, complex })
}

/// `H^d_inv(X_r, G)`: cohomology of the quotient complex at radius `r`.
pub fn invariant_cohomology(
    spec: &SftSpec,
    r: usize,
    d: usize,
    coeff: &FgAbelianGroup,
    budget: SearchBudget,
) -> Result<FgAbelianGroup> {
    tile_cohomology(&radius_complex(spec, r, budget)?.complex, d, coeff)
}

/// A cellular map between two complexes, one matrix per dimension.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: TileComplex,
    pub target: TileComplex,
    /// `maps[d] : C_d(source) -> C_d(target)`.
    pub maps: Vec<SparseMatrix>,
}

/// The restriction map from radius `r + 1` to radius `r`.
pub type ConnectingMap = ChainMap;

impl ChainMap {
    /// `∂ F = F ∂` in every degree.
    pub fn commutes_with_boundary(&self) -> bool {
        (1..=self.source.dim).all(|d| {
            let lhs = self.target.boundaries[d].mul(&self.maps[d]);
            let rhs = self.maps[d - 1].mul(&self.source.boundaries[d]);
            matches!((lhs, rhs), (Some(a), Some(b)) if a == b)
        })
    }
}

/// Cellular map induced by a map of tiles.
///
/// Fails unless every cell class lands in a single class, which is what
/// makes the tile map compatible with the gluing.
pub fn tile_chain_map(source: &TileComplex, target: &TileComplex, tile_map: &[usize]) -> Result<Vec<SparseMatrix>> {
    if source.dim != target.dim || tile_map.len() != source.tiles.len() {
        return Err(Error::NonComposable("tile map does not match the complexes".into()));
    }
    (0..=source.dim)
        .map(|d| {
            let mut m = SparseMatrix::zeros(target.cells[d].len(), source.cells[d].len());
            for (j, cell) in source.cells[d].iter().enumerate() {
                let image = |f: &FaceLabel| target.class_of(tile_map[f.tile], &f.code).unwrap();
                let i = image(cell.representative());
                if let Some(bad) = cell.members.iter().find(|f| image(f) != i) {
                    return Err(Error::Invalid(format!(
                        "tile map splits a glued {d}-cell: tile {} goes elsewhere",
                        source.tiles[bad.tile]
                    )));
                }
                m.add_entry(i, j, 1);
            }
            Ok(m)
        })
        .collect()
}

fn block_map(
    src: &RadiusComplex,
    tgt: &RadiusComplex,
    f: impl Fn(&[Sym]) -> Result<Vec<Sym>> + Sync,
) -> Result<ChainMap> {
    let tiles: Vec<usize> = src
        .rep
        .blocks
        .par_iter()
        .map(|b| {
            let img = f(b)?;
            tgt.rep.tile_of(&img).ok_or_else(|| {
                Error::UndefinedPattern(format!("image block {img:?} is not admissible at radius {}", tgt.rep.radius))
            })
        })
        .collect::<Result<_>>()?;
    let maps = tile_chain_map(&src.complex, &tgt.complex, &tiles)?;
    let cm = ChainMap { source: src.complex.clone(), target: tgt.complex.clone(), maps };
    if !cm.commutes_with_boundary() {
        return Err(Error::NonzeroComposition("induced map does not commute with the boundary".into()));
    }
    Ok(cm)
}

fn ball(dim: usize, r: usize) -> Rect {
    Ball::new(Site::origin(dim), r).rect()
}

/// Chain map from radius `src` to radius `tgt <= src` by taking central sub-blocks.
pub fn restriction_map(src: &RadiusComplex, tgt: &RadiusComplex) -> Result<ChainMap> {
    let (s, t) = (src.rep.radius, tgt.rep.radius);
    if t > s {
        return Err(Error::NonComposable(format!("cannot restrict radius {s} blocks to radius {t}")));
    }
    let dim = src.complex.dim;
    let (outer, inner) = (ball(dim, s), ball(dim, t));
    let idx: Vec<usize> = inner.sites().iter().map(|z| outer.index_of(z).unwrap()).collect();
    block_map(src, tgt, |b| Ok(idx.iter().map(|&i| b[i]).collect()))
}

/// The connecting map `X_{r+1} -> X_r`, verified to be a chain map.
pub fn connecting_map(spec: &SftSpec, r: usize, budget: SearchBudget) -> Result<ConnectingMap> {
    let src = radius_complex(spec, r + 1, budget)?;
    let tgt = radius_complex(spec, r, budget)?;
    restriction_map(&src, &tgt)
}

/// Chain map from radius `r + q` to radius `r` sending each block to its image.
pub fn ca_block_map(src: &RadiusComplex, tgt: &RadiusComplex, ca: &CaRule) -> Result<ChainMap> {
    let (s, t) = (src.rep.radius, tgt.rep.radius);
    let q = ca.radius();
    if s < t + q {
        return Err(Error::NonComposable(format!("radius {s} blocks do not determine radius {t} images under a radius {q} rule")));
    }
    let dim = src.complex.dim;
    let (outer, inner) = (ball(dim, s), ball(dim, t));
    let reads: Vec<Vec<usize>> = inner
        .sites()
        .iter()
        .map(|z| ca.neighborhood.iter().map(|h| outer.index_of(&z.add(h)).unwrap()).collect())
        .collect();
    block_map(src, tgt, |b| reads.iter().map(|nb| ca.eval(&nb.iter().map(|&i| b[i]).collect::<Vec<_>>())).collect())
}

/// The map `X_{r+q} -> X_r` induced by a radius-`q` automaton.
pub fn ca_chain_map(spec: &SftSpec, ca: &CaRule, r: usize, budget: SearchBudget) -> Result<ChainMap> {
    let src = radius_complex(spec, r + ca.radius(), budget)?;
    let tgt = radius_complex(spec, r, budget)?;
    ca_block_map(&src, &tgt, ca)
}

fn prime_of(coeff: &FgAbelianGroup) -> Result<u64> {
    coeff.prime_field().ok_or_else(|| Error::InvalidGroup(format!("induced maps are computed over Z/p, not {coeff}")))
}

fn cohomology_space(tc: &TileComplex, d: usize, p: u64) -> Result<Subquotient> {
    // Coboundaries are transposed boundaries.
    let inc = FpMatrix::from_sparse(&tc.boundaries[d].transpose(), p);
    let out = FpMatrix::from_sparse(&tc.boundaries[d + 1].transpose(), p);
    Subquotient::new(&inc, &out)
}

/// Matrix of `F^* : H^d(target; Z/p) -> H^d(source; Z/p)` in chosen bases.
pub fn induced_map_on_cohomology(cm: &ChainMap, d: usize, coeff: &FgAbelianGroup) -> Result<FpMatrix> {
    let p = prime_of(coeff)?;
    if d > cm.source.dim {
        return Err(Error::WrongDegree(format!("degree {d}")));
    }
    if !cm.commutes_with_boundary() {
        return Err(Error::NonzeroComposition("not a chain map".into()));
    }
    let src = cohomology_space(&cm.target, d, p)?;
    let tgt = cohomology_space(&cm.source, d, p)?;
    induced_map(&src, &tgt, &FpMatrix::from_sparse(&cm.maps[d].transpose(), p))
}

/// What a radius-`r + q` to radius-`r` automaton map does on cohomology.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaInducedMap {
    pub r: usize,
    pub q: usize,
    pub degree: usize,
    /// `Φ^*` in chosen bases of `H^d(X_r)` and `H^d(X_{r+q})`.
    pub matrix: Vec<Vec<u64>>,
    pub rank: usize,
    /// `Φ^*` agrees with the restriction map on cohomology.
    pub equals_restriction: bool,
    pub injective: bool,
    /// Surjective onto `H^d(X_{r+q})`.
    pub surjective: bool,
}

fn fp_rows(m: &FpMatrix) -> Vec<Vec<u64>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j)).collect()).collect()
}

/// `Φ^*` on `H^d` over `Z/p`, compared against the restriction map.
pub fn ca_induced_map(
    spec: &SftSpec,
    ca: &CaRule,
    r: usize,
    d: usize,
    coeff: &FgAbelianGroup,
    budget: SearchBudget,
) -> Result<CaInducedMap> {
    let q = ca.radius();
    let src = radius_complex(spec, r + q, budget)?;
    let tgt = radius_complex(spec, r, budget)?;
    let phi = ca_block_map(&src, &tgt, ca)?;
    let zeta = restriction_map(&src, &tgt)?;
    let m = induced_map_on_cohomology(&phi, d, coeff)?;
    let z = induced_map_on_cohomology(&zeta, d, coeff)?;
    let rank = m.rank();
    Ok(CaInducedMap {
        r,
        q,
        degree: d,
        matrix: fp_rows(&m),
        rank,
        equals_restriction: m == z,
        injective: rank == m.cols,
        surjective: rank == m.rows,
    })
}

/// Checks `ζ ∘ Φ = Φ ∘ ζ` from radius `r + 1 + q` down to radius `r` at the
/// chain level.
pub fn ladder_commutes(spec: &SftSpec, ca: &CaRule, r: usize, budget: SearchBudget) -> Result<bool> {
    let q = ca.radius();
    let top = radius_complex(spec, r + 1 + q, budget)?;
    let left = radius_complex(spec, r + 1, budget)?;
    let right = radius_complex(spec, r + q, budget)?;
    let bottom = radius_complex(spec, r, budget)?;
    let a = compose(&restriction_map(&left, &bottom)?, &ca_block_map(&top, &left, ca)?)?;
    let b = compose(&ca_block_map(&right, &bottom, ca)?, &restriction_map(&top, &right)?)?;
    Ok(a == b)
}

fn compose(g: &ChainMap, f: &ChainMap) -> Result<Vec<SparseMatrix>> {
    g.maps
        .iter()
        .zip(&f.maps)
        .map(|(a, b)| a.mul(b).ok_or_else(|| Error::NonComposable("chain maps do not compose".into())))
        .collect()
}

/// One radius of a stabilization scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizationRow {
    pub r: usize,
    pub tiles: usize,
    pub group: FgAbelianGroup,
    /// Rank over `Z/p` of `H^d(X_r) -> H^d(X_{r+1})`, when the next radius was built.
    pub map_rank: Option<usize>,
    pub isomorphism: Option<bool>,
}

/// Groups `H^d_inv(X_r)` over a range of radii with the maps between them.
///
/// An isomorphism between consecutive radii is evidence about the direct
/// limit, never a proof.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub degree: usize,
    pub coefficients: FgAbelianGroup,
    pub rows: Vec<StabilizationRow>,
    /// First radius from which every computed map is an isomorphism.
    pub stable_from: Option<usize>,
    /// Why the scan stopped before `r_max`.
    pub truncated: Option<String>,
}

pub fn stabilization_scan(
    spec: &SftSpec,
    d: usize,
    coeff: &FgAbelianGroup,
    r_min: usize,
    r_max: usize,
    budget: SearchBudget,
) -> Result<StabilizationReport> {
    let mut complexes = vec![];
    let mut truncated = None;
    for r in r_min..=r_max {
        match radius_complex(spec, r, budget) {
            Ok(c) => complexes.push(c),
            Err(e @ Error::BudgetExceeded(_)) => {
                truncated = Some(format!("radius {r}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let groups = complexes.par_iter().map(|c| tile_cohomology(&c.complex, d, coeff)).collect::<Result<Vec<_>>>()?;
    let ranks: Vec<Option<FpMatrix>> = match coeff.prime_field() {
        Some(_) => complexes
            .par_windows(2)
            .map(|w| Ok(Some(induced_map_on_cohomology(&restriction_map(&w[1], &w[0])?, d, coeff)?)))
            .collect::<Result<_>>()?,
        None => vec![None; complexes.len().saturating_sub(1)],
    };
    let rows: Vec<StabilizationRow> = complexes
        .iter()
        .zip(groups)
        .enumerate()
        .map(|(i, (c, group))| {
            let m = ranks.get(i).cloned().flatten();
            StabilizationRow {
                r: c.rep.radius,
                tiles: c.rep.blocks.len(),
                group,
                map_rank: m.as_ref().map(|m| m.rank()),
                isomorphism: m.as_ref().map(|m| m.rows == m.cols && m.rank() == m.rows),
            }
        })
        .collect();
    let mut stable_from = None;
    for row in rows.iter().rev().skip(1) {
        if row.isomorphism == Some(true) {
            stable_from = Some(row.r);
        } else {
            break;
        }
    }
    Ok(StabilizationReport { degree: d, coefficients: coeff.clone(), rows, stable_from, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> WangTileSet {
        WangTileSet::from_fn(2, vec!["o".into()], |_, _, _| true).unwrap()
    }

    #[test]
    fn torus_complex() {
        let tc = build_tile_complex(&torus());
        assert_eq!(tc.cell_counts(), vec![1, 2, 1]);
        assert!(tc.boundary(2).is_zero());
        assert_eq!(tile_homology(&tc, 1, &FgAbelianGroup::integers()).unwrap(), FgAbelianGroup::free(2));
        assert!(conway_lagarias_abelianized(&torus()).unwrap().group.is_trivial());
    }

    #[test]
    fn codes_round_trip() {
        for i in 0..27 {
            assert_eq!(code_index(&code_at(3, i)), i);
        }
    }
}
