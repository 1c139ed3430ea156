//! Built-in tile sets, cocycles and example configurations.
//!
//! * Square ice: six-vertex tiles with an arrow on each arm. Horizontal arms carry
//!   `dW, dE ∈ {±1}` (the x-component of the arrow), vertical arms `dS, dN`; the
//!   ice rule is `dS + dW = dE + dN`.
//! * Dominoes: half-tiles `L R T B` (left, right, top, bottom half).
//! * Paths: each arm is blank, blue or red and each colour is used an even number
//!   of times, which gives 21 tiles.
//! * Ice cubes: unit cubes with a pin through each face, three pins pointing out.
//!
//! Lattice points are the south-west corners of tiles, so the step `z -> z + e_1`
//! runs along the south edge of the tile at `z` and `z -> z + e_2` along its west edge.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cocycles::{CocycleRule, EquivariantCochainRule, LocalMap};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::lattice::{Rect, Site};
use crate::symbolic::{wang_to_sft, Configuration, Extension, SftSpec, Sym, WangTileSet};

/// Arms `(dW, dN, dE, dS)` of an ice tile.
pub type IceArms = (i8, i8, i8, i8);

fn ice_arms() -> Vec<IceArms> {
    let mut out = vec![];
    for w in [1, -1] {
        for n in [1, -1] {
            for e in [1, -1] {
                for s in [1, -1] {
                    if s + w == e + n {
                        out.push((w, n, e, s));
                    }
                }
            }
        }
    }
    out
}

fn ice_name(a: IceArms) -> String {
    let h = |d: i8| if d > 0 { '>' } else { '<' };
    let v = |d: i8| if d > 0 { '^' } else { 'v' };
    format!("{}{}{}{}", h(a.0), v(a.1), h(a.2), v(a.3))
}

/// The six square-ice tiles, named by their `W N E S` arrows.
pub fn ice_tiles() -> WangTileSet {
    let arms = ice_arms();
    let names = arms.iter().map(|&a| ice_name(a)).collect();
    WangTileSet::from_fn(2, names, |d, a, b| {
        let (a, b) = (arms[a as usize], arms[b as usize]);
        if d == 0 {
            a.2 == b.0
        } else {
            a.1 == b.3
        }
    })
    .unwrap()
}

pub fn ice() -> SftSpec {
    wang_to_sft(&ice_tiles())
}

/// Symbol of the ice tile with the given arms.
pub fn ice_symbol(a: IceArms) -> Sym {
    ice_arms().iter().position(|&x| x == a).expect("arms obey the ice rule") as Sym
}

/// Arms of an ice symbol.
pub fn ice_arms_of(s: Sym) -> IceArms {
    ice_arms()[s as usize]
}

/// Height cocycle into `Z`: the east step reads `dS`, the north step `-dW`.
pub fn ice_height() -> CocycleRule {
    let o = vec![Site::origin(2)];
    let east = LocalMap::from_fn(o.clone(), 6, |p| GroupElement::int(ice_arms_of(p[0]).3 as i64)).unwrap();
    let north = LocalMap::from_fn(o, 6, |p| GroupElement::int(-ice_arms_of(p[0]).0 as i64)).unwrap();
    CocycleRule::local("ice-height", GroupSpec::integers(), vec![east, north]).unwrap()
}

pub const DOMINO_NAMES: [&str; 4] = ["L", "R", "T", "B"];
pub const L: Sym = 0;
pub const R: Sym = 1;
pub const T: Sym = 2;
pub const B: Sym = 3;

/// Domino half-tiles: `L` is followed by `R` along `e_1`, `B` by `T` along `e_2`.
pub fn domino_tiles() -> WangTileSet {
    WangTileSet::from_fn(2, DOMINO_NAMES.iter().map(|s| s.to_string()).collect(), |d, a, b| {
        if d == 0 {
            (a == L) == (b == R)
        } else {
            (a == B) == (b == T)
        }
    })
    .unwrap()
}

pub fn dominoes() -> SftSpec {
    wang_to_sft(&domino_tiles())
}

/// Domino cocycle into `Z/2 * Z/2`: east steps give `vhv` on a top half and `h`
/// otherwise; north steps give `hvh` on a right half and `v` otherwise.
pub fn domino_rule() -> CocycleRule {
    let o = vec![Site::origin(2)];
    let east = LocalMap::from_fn(o.clone(), 4, |p| GroupElement::word(if p[0] == T { "vhv" } else { "h" })).unwrap();
    let north = LocalMap::from_fn(o, 4, |p| GroupElement::word(if p[0] == R { "hvh" } else { "v" })).unwrap();
    CocycleRule::local("domino", GroupSpec::FreeProductZ2Z2, vec![east, north]).unwrap()
}

/// Arm colours `(W, N, E, S)`: 0 blank, 1 blue, 2 red.
pub type PathArms = [u8; 4];

fn path_arms() -> Vec<PathArms> {
    let mut out = vec![];
    for code in 0..81u32 {
        let arms = [(code % 3) as u8, (code / 3 % 3) as u8, (code / 9 % 3) as u8, (code / 27 % 3) as u8];
        let count = |c: u8| arms.iter().filter(|&&a| a == c).count();
        if count(1) % 2 == 0 && count(2) % 2 == 0 {
            out.push(arms);
        }
    }
    out
}

/// The 21 path tiles named by `W N E S` colours (`.`, `b`, `r`); blank first.
pub fn path_tiles() -> WangTileSet {
    let arms = path_arms();
    let glyph = |c: u8| ['.', 'b', 'r'][c as usize];
    let names = arms.iter().map(|a| a.iter().map(|&c| glyph(c)).collect()).collect();
    WangTileSet::from_fn(2, names, |d, a, b| {
        let (a, b) = (arms[a as usize], arms[b as usize]);
        if d == 0 {
            a[2] == b[0]
        } else {
            a[1] == b[3]
        }
    })
    .unwrap()
}

pub fn paths() -> SftSpec {
    wang_to_sft(&path_tiles())
}

pub fn path_symbol(arms: PathArms) -> Sym {
    path_arms().iter().position(|&a| a == arms).expect("even colour counts") as Sym
}

pub fn path_arms_of(s: Sym) -> PathArms {
    path_arms()[s as usize]
}

fn colour_element(c: u8) -> GroupElement {
    match c {
        0 => GroupElement::torsion(vec![0, 0]),
        1 => GroupElement::torsion(vec![1, 0]),
        _ => GroupElement::torsion(vec![0, 1]),
    }
}

/// Path parity cocycle into `(Z/2)^2`: a step records the colour of the arm it
/// crosses (south arm for east steps, west arm for north steps).
pub fn path_parity() -> CocycleRule {
    let o = vec![Site::origin(2)];
    let east = LocalMap::from_fn(o.clone(), 21, |p| colour_element(path_arms_of(p[0])[3])).unwrap();
    let north = LocalMap::from_fn(o, 21, |p| colour_element(path_arms_of(p[0])[0])).unwrap();
    CocycleRule::local("path-parity", GroupSpec::abelian(0, vec![2, 2]), vec![east, north]).unwrap()
}

/// Outward faces of an ice cube: bit `2k` is the `-e_k` face, bit `2k+1` the `+e_k` face.
fn cube_masks() -> Vec<u8> {
    (0u8..64).filter(|m| m.count_ones() == 3).collect()
}

fn cube_name(m: u8) -> String {
    let mut s = String::new();
    for k in 0..3 {
        for (bit, sign) in [(2 * k, '-'), (2 * k + 1, '+')] {
            if m & (1 << bit) != 0 {
                s.push(sign);
                s.push(['x', 'y', 'z'][k]);
            }
        }
    }
    s
}

/// The twenty ice cubes: each face carries one pin, exactly three pins point out.
pub fn ice_cube_tiles() -> WangTileSet {
    let masks = cube_masks();
    let names = masks.iter().map(|&m| cube_name(m)).collect();
    WangTileSet::from_fn(3, names, |k, a, b| {
        let (a, b) = (masks[a as usize], masks[b as usize]);
        let a_out = a & (1 << (2 * k + 1)) != 0;
        let b_out = b & (1 << (2 * k)) != 0;
        a_out != b_out
    })
    .unwrap()
}

pub fn ice_cubes() -> SftSpec {
    wang_to_sft(&ice_cube_tiles())
}

/// Symbol of the cube whose outward faces are given as `(axis, sign)`.
pub fn cube_symbol(out: &[(usize, i64)]) -> Sym {
    let m: u8 = out.iter().map(|&(k, s)| 1u8 << (2 * k + usize::from(s > 0))).sum();
    cube_masks().iter().position(|&x| x == m).expect("three outward faces") as Sym
}

fn cube_face_out(s: Sym, axis: usize, sign: i64) -> bool {
    cube_masks()[s as usize] & (1 << (2 * axis + usize::from(sign > 0))) != 0
}

/// Pin cocycle: a 2-cell with axes `{i, j}` and base `z` separates the cubes
/// `z - e_k` and `z`. Its pin points along `+e_k` when the cube at `z` takes it
/// in through its `-e_k` face. The value is the sign of the pin against the
/// normal `e_i × e_j`.
pub fn pin_cocycle() -> EquivariantCochainRule {
    let o = vec![Site::origin(3)];
    let mut maps = vec![];
    for (axes, normal_sign, k) in [(vec![0, 1], 1i64, 2usize), (vec![0, 2], -1, 1), (vec![1, 2], 1, 0)] {
        let m = LocalMap::from_fn(o.clone(), 20, |p| {
            let pin = if cube_face_out(p[0], k, -1) { -1 } else { 1 };
            GroupElement::int(pin * normal_sign)
        })
        .unwrap();
        maps.push((axes, m));
    }
    EquivariantCochainRule::new("pin", GroupSpec::integers(), 3, 2, maps).unwrap()
}

/// The golden-mean shift on `{0, 1}` (no two adjacent 1s) as a radius-1 block shift.
pub fn golden_mean() -> SftSpec {
    SftSpec::from_predicate(1, vec!["0".into(), "1".into()], 1, |b| !(b[0] == 1 && b[1] == 1 || b[1] == 1 && b[2] == 1))
        .unwrap()
}

/// Full shift on `n` symbols in dimension `dim`.
pub fn full_shift(dim: usize, n: usize) -> SftSpec {
    SftSpec::full(dim, (0..n).map(|i| i.to_string()).collect())
}

fn square(lo: i64, hi: i64) -> Rect {
    Rect::new(vec![lo, lo], vec![hi, hi])
}

/// Ice with a pole of residue 8: four mismatched edges around the 2x2 block
/// `{-1, 0}^2`, with flux lines arriving along the four half-axes.
pub fn ice_pole() -> Configuration {
    let bg = ice_symbol((1, 1, 1, 1));
    let column = ice_symbol((1, -1, 1, -1));
    let row = ice_symbol((-1, 1, -1, 1));
    let sink = ice_symbol((-1, -1, -1, -1));
    Configuration::from_fn(square(-8, 7), |z| {
        let (x, y) = (z.0[0], z.0[1]);
        if (x, y) == (0, 0) {
            sink
        } else if (x == -1 || x == 0) && y >= 0 {
            column
        } else if (y == -1 || y == 0) && x >= 0 {
            row
        } else {
            bg
        }
    })
}

/// Ice with a horizontal domain boundary between rows -1 and 0: all arrows
/// `+1` above, vertical arrows reversed below.
pub fn ice_gap() -> Configuration {
    let north = ice_symbol((1, 1, 1, 1));
    let south = ice_symbol((1, -1, 1, -1));
    Configuration::from_fn(square(-20, 20), |z| if z.0[1] >= 0 { north } else { south })
}

/// Reference points for the ice gap: `x_n = (n, 1)`, `y_n = (n, -2)`.
pub fn ice_gap_points(n: i64) -> (Site, Site) {
    (Site::from([n, 1]), Site::from([n, -2]))
}

/// Staggered vertical dominoes for `y >= 0` above aligned horizontal dominoes.
pub fn domino_gap() -> Configuration {
    let w = Rect::new(vec![-6, -12], vec![25, 13]);
    Configuration::from_fn(w, |z| {
        let (x, y) = (z.0[0], z.0[1]);
        if y >= 0 {
            if (x + y).rem_euclid(2) == 0 {
                B
            } else {
                T
            }
        } else if x.rem_euclid(2) == 0 {
            L
        } else {
            R
        }
    })
}

/// Reference points for the domino gap in original coordinates:
/// `x_n = (2n, 2)` and `y_n = (2n, -4)`.
pub fn domino_gap_points(n: i64) -> (Site, Site) {
    (Site::from([2 * n, 2]), Site::from([2 * n, -4]))
}

/// Staggered horizontal dominoes in opposite phases on either side of `x = -1/2`.
pub fn domino_gap_opposite() -> Configuration {
    let w = Rect::new(vec![-12, -6], vec![13, 25]);
    Configuration::from_fn(w, |z| {
        let (x, y) = (z.0[0], z.0[1]);
        let even = (x + y).rem_euclid(2) == 0;
        let left = if x <= -1 { even } else { !even };
        if left {
            L
        } else {
            R
        }
    })
}

/// Reference points for the opposite-phase gap: `x_n = (-4, 2n)`, `y_n = (2, 2n)`.
pub fn domino_gap_opposite_points(n: i64) -> (Site, Site) {
    (Site::from([-4, 2 * n]), Site::from([2, 2 * n]))
}

/// Path tiles with three defects: a blue path from near the origin to `x = 8`
/// and a red path from near the origin to `y = 8`, on a blank background.
pub fn paths_poles() -> Configuration {
    let blank = path_symbol([0, 0, 0, 0]);
    let blue = path_symbol([1, 0, 1, 0]);
    let red = path_symbol([0, 2, 0, 2]);
    Configuration::from_fn(square(-6, 14), |z| {
        let (x, y) = (z.0[0], z.0[1]);
        if y == 0 && (1..=7).contains(&x) {
            blue
        } else if x == 0 && (1..=7).contains(&y) {
            red
        } else {
            blank
        }
    })
}

/// Defect anchors of `paths_poles`: residues `(1,1)`, `(1,0)` and `(0,1)`.
pub fn paths_pole_sites() -> [Site; 3] {
    [Site::from([0, 0]), Site::from([8, 0]), Site::from([0, 8])]
}

/// Vertical blue paths for `y >= 0` ending on a blank lower half.
pub fn paths_boundary() -> Configuration {
    let blank = path_symbol([0, 0, 0, 0]);
    let vertical = path_symbol([0, 1, 0, 1]);
    Configuration::from_fn(square(-10, 10), |z| if z.0[1] >= 0 { vertical } else { blank })
}

/// Ice cubes with three mismatched faces at the origin: the pins along the
/// negative half-axes are reversed, so six units of pin flux leave the defect.
pub fn ice_cubes_pole() -> Configuration {
    let w = Rect::new(vec![-6; 3], vec![6; 3]);
    let bg = cube_symbol(&[(0, 1), (1, 1), (2, 1)]);
    let ray: Vec<Sym> = (0..3)
        .map(|k| {
            let out: Vec<(usize, i64)> = (0..3).map(|j| (j, if j == k { -1 } else { 1 })).collect();
            cube_symbol(&out)
        })
        .collect();
    Configuration::from_fn(w, |z| {
        let nonzero: Vec<usize> = (0..3).filter(|&k| z.0[k] != 0).collect();
        if nonzero.len() == 1 && z.0[nonzero[0]] < 0 {
            ray[nonzero[0]]
        } else {
            bg
        }
    })
}

/// A uniformly random admissible periodic configuration of a Wang shift on the
/// torus with the given periods, by randomized backtracking.
pub fn random_periodic(spec: &SftSpec, periods: &[i64], seed: u64) -> Result<Configuration> {
    let tiles = match &spec.constraint {
        crate::symbolic::Constraint::Wang { tiles } => tiles,
        _ => return Err(Error::Invalid("random periodic sampling needs a Wang shift".into())),
    };
    let dim = spec.dim;
    let rect = Rect::new(vec![0; dim], periods.iter().map(|p| p - 1).collect());
    let sites = rect.sites();
    let n = sites.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wrap = |z: &Site| -> usize {
        let w = Site(z.0.iter().zip(periods).map(|(x, p)| x.rem_euclid(*p)).collect());
        rect.index_of(&w).unwrap()
    };
    let mut assign: Vec<Option<Sym>> = vec![None; n];
    let mut options: Vec<Vec<Sym>> = vec![vec![]; n];
    let ok = |assign: &[Option<Sym>], i: usize, s: Sym| -> bool {
        let z = &sites[i];
        (0..dim).all(|d| {
            let before = assign[wrap(&z.step(d, -1))];
            let after = assign[wrap(&z.step(d, 1))];
            before.map(|b| tiles.matches(d, b, s)).unwrap_or(true) && after.map(|a| tiles.matches(d, s, a)).unwrap_or(true)
        })
    };
    let mut i = 0usize;
    let mut nodes = 0u64;
    let mut fresh = true;
    loop {
        if i == n {
            break;
        }
        if fresh {
            let mut all: Vec<Sym> = (0..spec.alphabet_size() as Sym).collect();
            all.shuffle(&mut rng);
            options[i] = all;
            fresh = false;
        }
        nodes += 1;
        if nodes > 20_000_000 {
            return Err(Error::BudgetExceeded("random periodic sampling".into()));
        }
        assign[i] = None;
        let mut placed = false;
        while let Some(s) = options[i].pop() {
            if ok(&assign, i, s) {
                assign[i] = Some(s);
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
            fresh = true;
        } else {
            if i == 0 {
                return Err(Error::Invalid("no periodic configuration with these periods".into()));
            }
            i -= 1;
        }
    }
    let cells = assign.into_iter().map(|s| s.unwrap()).collect();
    Configuration::new(rect, cells)?.with_extension(Extension::Periodic { periods: periods.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tile_counts() {
        assert_eq!(ice_tiles().len(), 6);
        assert_eq!(domino_tiles().len(), 4);
        assert_eq!(path_tiles().len(), 21);
        assert_eq!(ice_cube_tiles().len(), 20);
        assert!(ice_tiles().dead_tiles().is_empty());
    }

    #[test]
    fn periodic_samples_are_admissible() {
        for (spec, seed) in [(ice(), 1), (dominoes(), 2), (paths(), 3)] {
            let cfg = random_periodic(&spec, &[6, 6], seed).unwrap();
            let get = |z: &Site| cfg.get(z);
            let wide = Rect::new(vec![-3, -3], vec![9, 9]);
            assert_eq!(spec.locally_admissible(&wide, &get), Some(true));
        }
    }
}
