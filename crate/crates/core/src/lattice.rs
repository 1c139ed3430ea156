//! Geometry of `Z^D`: sites, boxes, trails, trail homotopy and the canonical
//! cubic cell complex with its boundary operator.
//!
//! Adjacency is `l1` distance one; balls `B(z, r)` are `l_inf` cubes.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point of `Z^D`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(pub Vec<i64>);

impl Site {
    pub fn new(coords: Vec<i64>) -> Self {
        Site(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Site(vec![0; dim])
    }

    /// The unit vector `sign * e_axis`.
    pub fn unit(dim: usize, axis: usize, sign: i64) -> Self {
        let mut v = vec![0; dim];
        v[axis] = sign;
        Site(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Site) -> Site {
        Site(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Site) -> Site {
        Site(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Site {
        Site(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Site {
        Site(self.0.iter().map(|a| a * k).collect())
    }

    /// `self + sign * e_axis`.
    pub fn step(&self, axis: usize, sign: i64) -> Site {
        let mut v = self.0.clone();
        v[axis] += sign;
        Site(v)
    }

    pub fn linf(&self, other: &Site) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0)
    }

    pub fn l1(&self, other: &Site) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum()
    }

    /// The two sites are at `l1` distance one.
    pub fn adjacent(&self, other: &Site) -> bool {
        self.dim() == other.dim() && self.l1(other) == 1
    }

    /// Axis and sign of the unit step from `self` to an adjacent `other`.
    pub fn step_to(&self, other: &Site) -> Option<(usize, i64)> {
        if !self.adjacent(other) {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .position(|(a, b)| a != b)
            .map(|axis| (axis, other.0[axis] - self.0[axis]))
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> From<[i64; N]> for Site {
    fn from(c: [i64; N]) -> Self {
        Site(c.to_vec())
    }
}

impl From<Vec<i64>> for Site {
    fn from(c: Vec<i64>) -> Self {
        Site(c)
    }
}

/// An axis-parallel box `[lo..hi]` (inclusive on both ends).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Rect {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners differ in dimension");
        Rect { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| if h >= l { (h - l + 1) as usize } else { 0 })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn contains(&self, z: &Site) -> bool {
        z.dim() == self.dim()
            && z.0
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.is_empty()
            || (0..self.dim()).all(|d| self.lo[d] <= other.lo[d] && other.hi[d] <= self.hi[d])
    }

    /// Row-major index with the last axis varying fastest.
    pub fn index_of(&self, z: &Site) -> Option<usize> {
        if !self.contains(z) {
            return None;
        }
        let shape = self.shape();
        let mut idx = 0usize;
        for d in 0..self.dim() {
            idx = idx * shape[d] + (z.0[d] - self.lo[d]) as usize;
        }
        Some(idx)
    }

    pub fn site_at(&self, mut idx: usize) -> Site {
        let shape = self.shape();
        let mut c = vec![0i64; self.dim()];
        for d in (0..self.dim()).rev() {
            c[d] = self.lo[d] + (idx % shape[d]) as i64;
            idx /= shape[d];
        }
        Site(c)
    }

    /// All sites in row-major order.
    pub fn sites(&self) -> Vec<Site> {
        (0..self.len()).map(|i| self.site_at(i)).collect()
    }

    /// The box shrunk by `q` on every side.
    pub fn shrink(&self, q: i64) -> Rect {
        Rect::new(
            self.lo.iter().map(|l| l + q).collect(),
            self.hi.iter().map(|h| h - q).collect(),
        )
    }

    pub fn translate(&self, v: &Site) -> Rect {
        Rect::new(
            self.lo.iter().zip(&v.0).map(|(a, b)| a + b).collect(),
            self.hi.iter().zip(&v.0).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect::new(
            self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect(),
            self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        )
    }

    /// Smallest box containing all given sites.
    pub fn bounding(sites: &[Site]) -> Option<Rect> {
        let first = sites.first()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for s in sites {
            for d in 0..lo.len() {
                lo[d] = lo[d].min(s.0[d]);
                hi[d] = hi[d].max(s.0[d]);
            }
        }
        Some(Rect::new(lo, hi))
    }
}

/// The ball `B(z, r) = z + [-r..r]^D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ball {
    pub center: Site,
    pub radius: usize,
}

impl Ball {
    pub fn new(center: Site, radius: usize) -> Self {
        Ball { center, radius }
    }

    pub fn rect(&self) -> Rect {
        let r = self.radius as i64;
        Rect::new(
            self.center.0.iter().map(|c| c - r).collect(),
            self.center.0.iter().map(|c| c + r).collect(),
        )
    }

    /// Exactly `(2r+1)^D` sites in row-major order.
    pub fn sites(&self) -> Vec<Site> {
        self.rect().sites()
    }

    /// Offsets of `B(0, r)` in row-major order.
    pub fn offsets(dim: usize, radius: usize) -> Vec<Site> {
        Ball::new(Site::origin(dim), radius).sites()
    }
}

/// A sequence of sites with consecutive sites adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trail {
    sites: Vec<Site>,
}

impl Trail {
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidTrail("a trail needs at least one site".into()));
        }
        let dim = sites[0].dim();
        for w in sites.windows(2) {
            if w[1].dim() != dim || !w[0].adjacent(&w[1]) {
                return Err(Error::InvalidTrail(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(Trail { sites })
    }

    /// The trail consisting of a single site (no steps).
    pub fn point(z: Site) -> Self {
        Trail { sites: vec![z] }
    }

    /// Straight trail from `start` taking `n` steps of `sign * e_axis`.
    pub fn straight(start: &Site, axis: usize, sign: i64, n: usize) -> Self {
        let mut sites = vec![start.clone()];
        for _ in 0..n {
            let next = sites.last().unwrap().step(axis, sign);
            sites.push(next);
        }
        Trail { sites }
    }

    /// Monotone trail from `a` to `b` moving along axis 0 first, then axis 1, and so on.
    pub fn axis_path(a: &Site, b: &Site) -> Self {
        let mut sites = vec![a.clone()];
        let mut cur = a.clone();
        for d in 0..a.dim() {
            let sign = (b.0[d] - cur.0[d]).signum();
            while cur.0[d] != b.0[d] {
                cur = cur.step(d, sign);
                sites.push(cur.clone());
            }
        }
        Trail { sites }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn first(&self) -> &Site {
        &self.sites[0]
    }

    pub fn last(&self) -> &Site {
        self.sites.last().unwrap()
    }

    /// Number of unit steps.
    pub fn steps_len(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.sites[0].dim()
    }

    pub fn is_closed(&self) -> bool {
        self.first() == self.last()
    }

    /// Unit steps as `(from, axis, sign)`.
    pub fn steps(&self) -> impl Iterator<Item = (&Site, usize, i64)> + '_ {
        self.sites.windows(2).map(|w| {
            let (axis, sign) = w[0].step_to(&w[1]).expect("trail invariant");
            (&w[0], axis, sign)
        })
    }

    pub fn concat(&self, other: &Trail) -> Result<Trail> {
        if self.last() != other.first() {
            return Err(Error::EndpointMismatch(format!(
                "{} does not start at {}",
                Trail::describe(other),
                self.last()
            )));
        }
        let mut sites = self.sites.clone();
        sites.extend_from_slice(&other.sites[1..]);
        Ok(Trail { sites })
    }

    pub fn reverse(&self) -> Trail {
        let mut sites = self.sites.clone();
        sites.reverse();
        Trail { sites }
    }

    /// The closed trail traversed `n` times.
    pub fn repeat(&self, n: usize) -> Result<Trail> {
        if !self.is_closed() {
            return Err(Error::EndpointMismatch("only closed trails can be repeated".into()));
        }
        let mut out = Trail::point(self.first().clone());
        for _ in 0..n {
            out = out.concat(self)?;
        }
        Ok(out)
    }

    pub fn translate(&self, v: &Site) -> Trail {
        Trail { sites: self.sites.iter().map(|s| s.add(v)).collect() }
    }

    fn describe(t: &Trail) -> String {
        format!("trail {}..{}", t.first(), t.last())
    }
}

/// An elementary cube `base + prod_{a in axes} [0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubicCell {
    pub base: Site,
    /// Strictly ascending, zero-based.
    pub axes: Vec<usize>,
}

impl CubicCell {
    pub fn new(base: Site, mut axes: Vec<usize>) -> Self {
        axes.sort_unstable();
        axes.dedup();
        CubicCell { base, axes }
    }

    pub fn vertex(z: Site) -> Self {
        CubicCell { base: z, axes: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Faces with signs: for the k-th axis `a` (zero-based), the upper face
    /// carries `(-1)^k` and the lower face `-(-1)^k`.
    pub fn faces(&self) -> Vec<(CubicCell, i64)> {
        let mut out = Vec::with_capacity(2 * self.axes.len());
        for (k, &a) in self.axes.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut rest = self.axes.clone();
            rest.remove(k);
            out.push((CubicCell { base: self.base.step(a, 1), axes: rest.clone() }, sign));
            out.push((CubicCell { base: self.base.clone(), axes: rest }, -sign));
        }
        out
    }

    /// Vertices of the cell.
    pub fn vertices(&self) -> Vec<Site> {
        let mut out = vec![self.base.clone()];
        for &a in &self.axes {
            let more: Vec<Site> = out.iter().map(|v| v.step(a, 1)).collect();
            out.extend(more);
        }
        out
    }

    pub fn translate(&self, v: &Site) -> CubicCell {
        CubicCell { base: self.base.add(v), axes: self.axes.clone() }
    }
}

/// A finite integer combination of cells of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Chain {
    pub dim: usize,
    #[serde(with = "terms_as_list")]
    pub terms: BTreeMap<CubicCell, i64>,
}

/// JSON objects need string keys, so terms travel as `[cell, coefficient]` pairs.
mod terms_as_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::CubicCell;

    pub fn serialize<S: Serializer>(m: &BTreeMap<CubicCell, i64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<CubicCell, i64>, D::Error> {
        let v: Vec<(CubicCell, i64)> = Vec::deserialize(d)?;
        Ok(v.into_iter().filter(|(_, k)| *k != 0).collect())
    }
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, terms: BTreeMap::new() }
    }

    pub fn from_cell(cell: CubicCell) -> Self {
        let mut c = Chain::zero(cell.dim());
        c.add_term(cell, 1);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, cell: CubicCell, coeff: i64) {
        assert_eq!(cell.dim(), self.dim, "chain dimension mismatch");
        if coeff == 0 {
            return;
        }
        match self.terms.entry(cell) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (c, k) in &other.terms {
            out.add_term(c.clone(), *k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Chain {
        let mut out = Chain::zero(self.dim);
        if k != 0 {
            for (c, v) in &self.terms {
                out.terms.insert(c.clone(), v * k);
            }
        }
        out
    }

    pub fn translate(&self, v: &Site) -> Chain {
        Chain {
            dim: self.dim,
            terms: self.terms.iter().map(|(c, k)| (c.translate(v), *k)).collect(),
        }
    }

    /// The 1-chain of a trail: each step `y -> z` contributes the oriented edge.
    pub fn from_trail(t: &Trail) -> Chain {
        let mut out = Chain::zero(1);
        for (from, axis, sign) in t.steps() {
            if sign > 0 {
                out.add_term(CubicCell::new(from.clone(), vec![axis]), 1);
            } else {
                out.add_term(CubicCell::new(from.step(axis, -1), vec![axis]), -1);
            }
        }
        out
    }

    /// The sum of all top-dimensional unit cubes with base in `rect`.
    pub fn solid_box(rect: &Rect) -> Chain {
        let d = rect.dim();
        let mut out = Chain::zero(d);
        for z in rect.sites() {
            out.terms.insert(CubicCell::new(z, (0..d).collect()), 1);
        }
        out
    }
}

/// Cubic boundary `d_d`. Zero on 0-chains; `boundary(boundary(c)) = 0`.
pub fn boundary(chain: &Chain) -> Chain {
    if chain.dim == 0 {
        return Chain::zero(0);
    }
    let mut acc: BTreeMap<CubicCell, i64> = BTreeMap::new();
    for (cell, k) in &chain.terms {
        for (face, s) in cell.faces() {
            *acc.entry(face).or_insert(0) += s * k;
        }
    }
    acc.retain(|_, v| *v != 0);
    Chain { dim: chain.dim - 1, terms: acc }
}

/// Whether `t1` and `t2` differ by exactly one elementary move inside `region`:
/// a square-corner swap, a backtrack deletion, or a backtrack insertion.
pub fn elementary_homotope(t1: &Trail, t2: &Trail, region: &HashSet<Site>) -> bool {
    if t1.first() != t2.first() || t1.last() != t2.last() {
        return false;
    }
    let inside = |t: &Trail| t.sites().iter().all(|s| region.contains(s));
    if !inside(t1) || !inside(t2) {
        return false;
    }
    let a = t1.sites();
    let b = t2.sites();
    if a.len() == b.len() {
        let diffs: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
        if diffs.len() != 1 {
            return false;
        }
        let i = diffs[0];
        if i == 0 || i + 1 == a.len() {
            return false;
        }
        let (p, q, r, q2) = (&a[i - 1], &a[i], &a[i + 1], &b[i]);
        // The four sites must be the corners of a unit square with q, q2 opposite.
        p.l1(r) == 2 && p.linf(r) == 1 && q2 == &p.add(r).sub(q)
    } else if a.len() == b.len() + 2 {
        is_backtrack_deletion(a, b)
    } else if b.len() == a.len() + 2 {
        is_backtrack_deletion(b, a)
    } else {
        false
    }
}

/// `long` is `short` with a backtrack `z_{n-1}, z_n, z_{n-1}` collapsed to `z_{n-1}`.
fn is_backtrack_deletion(long: &[Site], short: &[Site]) -> bool {
    (1..long.len() - 1).any(|n| {
        long[n + 1] == long[n - 1]
            && long[..n] == short[..n]
            && long[n + 2..] == short[n..]
    })
}

/// Winding number of a closed 2D trail around the lattice point `p` (not on the trail).
///
/// The trail is compared against a point slightly north-east of `p`; since trail
/// edges lie on integer lines and avoid `p`, no edge separates the two points.
pub fn winding_number(loop_: &Trail, p: &Site) -> i64 {
    debug_assert!(loop_.is_closed());
    let mut w = 0;
    for (from, axis, sign) in loop_.steps() {
        // Ray to +x at height p.y + 1/3 crosses vertical edges x = k > p.x spanning [p.y, p.y+1].
        if axis == 1 {
            let y0 = if sign > 0 { from.0[1] } else { from.0[1] - 1 };
            if y0 == p.0[1] && from.0[0] > p.0[0] {
                w += sign;
            }
        }
    }
    w
}

/// Bounded components of the complement of `region` inside its bounding box.
pub fn holes(region: &HashSet<Site>) -> Vec<Vec<Site>> {
    let sites: Vec<Site> = region.iter().cloned().collect();
    let Some(bb) = Rect::bounding(&sites) else {
        return vec![];
    };
    let frame = bb.shrink(-1);
    let complement: HashSet<Site> = frame.sites().into_iter().filter(|s| !region.contains(s)).collect();
    connected_components_linf(&complement)
        .into_iter()
        .filter(|comp| {
            comp.iter().all(|s| (0..s.dim()).all(|d| s.0[d] > frame.lo[d] && s.0[d] < frame.hi[d]))
        })
        .collect()
}

/// Homotopy of fixed-endpoint trails inside a planar region, decided by winding
/// numbers around every bounded complement component.
pub fn trails_homotopic(t1: &Trail, t2: &Trail, region: &HashSet<Site>) -> Result<bool> {
    if t1.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            found: t1.dim(),
            what: "trail homotopy is decided only in dimension 2".into(),
        });
    }
    if t1.first() != t2.first() || t1.last() != t2.last() {
        return Err(Error::EndpointMismatch("homotopic trails need equal endpoints".into()));
    }
    if !t1.sites().iter().chain(t2.sites()).all(|s| region.contains(s)) {
        return Err(Error::InvalidTrail("trail leaves the region".into()));
    }
    let lp = t1.concat(&t2.reverse())?;
    Ok(holes(region).iter().all(|h| winding_number(&lp, &h[0]) == 0))
}

/// Partition into maximal `l1`-connected subsets, each sorted, ordered by least site.
pub fn connected_components(sites: &HashSet<Site>) -> Vec<Vec<Site>> {
    let mut seen: HashSet<Site> = HashSet::new();
    let mut ordered: Vec<&Site> = sites.iter().collect();
    ordered.sort();
    let mut out = Vec::new();
    for s in ordered {
        if seen.contains(s) {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([s.clone()]);
        seen.insert(s.clone());
        while let Some(z) = queue.pop_front() {
            for d in 0..z.dim() {
                for sign in [-1, 1] {
                    let n = z.step(d, sign);
                    if sites.contains(&n) && seen.insert(n.clone()) {
                        queue.push_back(n);
                    }
                }
            }
            comp.push(z);
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Components under king-move adjacency (`l_inf` distance 1). Complements of
/// `l1`-connected regions split into holes this way: two complement sites that
/// touch diagonally carry the same winding number for every loop in the region.
pub fn connected_components_linf(sites: &HashSet<Site>) -> Vec<Vec<Site>> {
    let mut seen: HashSet<Site> = HashSet::new();
    let mut ordered: Vec<&Site> = sites.iter().collect();
    ordered.sort();
    let mut out = Vec::new();
    for s in ordered {
        if !seen.insert(s.clone()) {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([s.clone()]);
        let offsets: Vec<Site> = Ball::offsets(s.dim(), 1).into_iter().filter(|o| o.0.iter().any(|&c| c != 0)).collect();
        while let Some(z) = queue.pop_front() {
            for o in &offsets {
                let n = z.add(o);
                if sites.contains(&n) && seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
            comp.push(z);
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Counterclockwise square ring around `rect` at `l_inf` distance `k`, starting at
/// the lower-left corner.
pub fn ring(rect: &Rect, k: i64) -> Trail {
    let (x0, y0) = (rect.lo[0] - k, rect.lo[1] - k);
    let (x1, y1) = (rect.hi[0] + k, rect.hi[1] + k);
    let mut sites = vec![];
    for x in x0..x1 {
        sites.push(Site(vec![x, y0]));
    }
    for y in y0..y1 {
        sites.push(Site(vec![x1, y]));
    }
    for x in (x0 + 1..=x1).rev() {
        sites.push(Site(vec![x, y1]));
    }
    for y in (y0 + 1..=y1).rev() {
        sites.push(Site(vec![x0, y]));
    }
    sites.push(Site(vec![x0, y0]));
    Trail { sites }
}

/// The smallest concentric ring in `region` that encloses `component` and no other
/// site outside `region`.
pub fn loop_around(component: &[Site], region: &HashSet<Site>) -> Result<Trail> {
    loop_around_from(component, region, 1)
}

/// As [`loop_around`], trying rings at distance `k_min, k_min + 1, ...`.
pub fn loop_around_from(component: &[Site], region: &HashSet<Site>, k_min: i64) -> Result<Trail> {
    let Some(first) = component.first() else {
        return Err(Error::NoEnclosingRing("empty component".into()));
    };
    if first.dim() != 2 {
        return Err(Error::UnsupportedDimension { found: first.dim(), what: "loops are planar".into() });
    }
    let bb = Rect::bounding(component).unwrap();
    let comp: BTreeSet<&Site> = component.iter().collect();
    let region_sites: Vec<Site> = region.iter().cloned().collect();
    let limit = Rect::bounding(&region_sites)
        .map(|r| (r.hi[0] - r.lo[0]).max(r.hi[1] - r.lo[1]) + 1)
        .unwrap_or(0);
    for k in k_min.max(1)..=limit {
        let ring_trail = ring(&bb, k);
        if !ring_trail.sites().iter().all(|s| region.contains(s)) {
            // Once the ring leaves the region on the outside, larger rings cannot help
            // unless the obstruction is another enclosed defect; keep trying.
            continue;
        }
        let inner = bb.shrink(-(k - 1));
        let clean = inner.sites().iter().all(|s| region.contains(s) || comp.contains(s));
        if clean {
            return Ok(ring_trail);
        }
        return Err(Error::NoEnclosingRing(format!(
            "the first ring inside the region around {} also encloses other defects",
            first
        )));
    }
    Err(Error::NoEnclosingRing(format!("no ring around the component at {first} fits in the region")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_region(lo: [i64; 2], hi: [i64; 2]) -> HashSet<Site> {
        Rect::new(lo.to_vec(), hi.to_vec()).sites().into_iter().collect()
    }

    #[test]
    fn edge_boundary_is_head_minus_tail() {
        let e = CubicCell::new(Site::from([0, 0]), vec![0]);
        let b = boundary(&Chain::from_cell(e));
        assert_eq!(b.terms.get(&CubicCell::vertex(Site::from([1, 0]))), Some(&1));
        assert_eq!(b.terms.get(&CubicCell::vertex(Site::from([0, 0]))), Some(&-1));
        assert!(boundary(&b).is_zero());
    }

    #[test]
    fn square_boundary_is_counterclockwise_loop() {
        let sq = CubicCell::new(Site::from([0, 0]), vec![0, 1]);
        let loop_ = Trail::new(vec![
            Site::from([0, 0]),
            Site::from([1, 0]),
            Site::from([1, 1]),
            Site::from([0, 1]),
            Site::from([0, 0]),
        ])
        .unwrap();
        assert_eq!(boundary(&Chain::from_cell(sq)), Chain::from_trail(&loop_));
    }

    #[test]
    fn trail_concat_and_reverse() {
        let a = Trail::new(vec![Site::from([0, 0]), Site::from([1, 0])]).unwrap();
        let b = Trail::new(vec![Site::from([1, 0]), Site::from([1, 1])]).unwrap();
        let c = a.concat(&b).unwrap();
        assert_eq!(c.sites().len(), 3);
        assert_eq!(c.reverse().reverse(), c);
        assert!(b.concat(&b).is_err());
        assert!(Trail::new(vec![Site::from([0, 0]), Site::from([1, 1])]).is_err());
    }

    #[test]
    fn backtrack_deletion_is_elementary() {
        let region = box_region([-3, -3], [3, 3]);
        let a = Site::from([0, 0]);
        let b = Site::from([0, 1]);
        let c = Site::from([1, 0]);
        let t1 = Trail::new(vec![a.clone(), b, a.clone(), c.clone()]).unwrap();
        let t2 = Trail::new(vec![a, c]).unwrap();
        assert!(elementary_homotope(&t1, &t2, &region));
        assert!(elementary_homotope(&t2, &t1, &region));
        assert!(!elementary_homotope(&t1, &t1, &region));
    }

    #[test]
    fn corner_swap_needs_all_corners_in_region() {
        let t1 = Trail::new(vec![Site::from([0, 0]), Site::from([1, 0]), Site::from([1, 1])]).unwrap();
        let t2 = Trail::new(vec![Site::from([0, 0]), Site::from([0, 1]), Site::from([1, 1])]).unwrap();
        let full = box_region([0, 0], [1, 1]);
        assert!(elementary_homotope(&t1, &t2, &full));
        let mut holed = full.clone();
        holed.remove(&Site::from([0, 1]));
        assert!(!elementary_homotope(&t1, &t2, &holed));
    }

    #[test]
    fn ring_around_single_hole() {
        let mut region = box_region([-4, -4], [4, 4]);
        region.remove(&Site::from([0, 0]));
        let r = loop_around(&[Site::from([0, 0])], &region).unwrap();
        assert_eq!(r.steps_len(), 8);
        assert_eq!(winding_number(&r, &Site::from([0, 0])), 1);
        let touching = vec![Site::from([4, 0])];
        let mut edge_region = box_region([-4, -4], [4, 4]);
        edge_region.remove(&Site::from([4, 0]));
        assert!(loop_around(&touching, &edge_region).is_err());
    }

    #[test]
    fn homotopy_detects_hole() {
        let mut region = box_region([-3, -3], [3, 3]);
        region.remove(&Site::from([0, 0]));
        let r = loop_around(&[Site::from([0, 0])], &region).unwrap();
        let constant = Trail::point(r.first().clone());
        assert!(!trails_homotopic(&r, &constant, &region).unwrap());
        let full = box_region([-3, -3], [3, 3]);
        assert!(trails_homotopic(&r, &constant, &full).unwrap());
    }
}
