//! Coefficient groups: finitely generated abelian groups, the free product
//! `Z/2 * Z/2`, free groups and finite groups given by a table; pseudonorms,
//! exact integer linear algebra (Smith normal form), Ext and homology.

mod abelian;
mod matrix;
pub mod modp;

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use abelian::{
    cohomology_of_pair, ext_group, homology_of_pair, homology_of_pair_sparse, hom_group, tensor_group,
    tor_group, FgAbelianGroup,
};
pub use matrix::{smith_invariants, smith_normal_form, IntegerMatrix, SmithForm, SparseMatrix};

/// Which group a cocycle takes values in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    /// `Z^rank + Z/n_1 + ... + Z/n_K`.
    FgAbelian { rank: usize, torsion: Vec<u64> },
    /// `Z/2 * Z/2` with generators `v` and `h`.
    FreeProductZ2Z2,
    /// Free group on generators `a, b, c, ...` (inverses upper case).
    FreeGroup { generators: usize },
    /// `table[i][j]` is the index of the product of elements `i` and `j`.
    FiniteTable { table: Vec<Vec<usize>> },
}

/// A group element in canonical form. Words are reduced strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Abelian { z: Vec<i64>, t: Vec<i64> },
    Word(String),
    Finite(usize),
}

impl GroupSpec {
    pub fn integers() -> Self {
        GroupSpec::FgAbelian { rank: 1, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        GroupSpec::FgAbelian { rank: 0, torsion: vec![n] }
    }

    pub fn abelian(rank: usize, torsion: Vec<u64>) -> Self {
        GroupSpec::FgAbelian { rank, torsion }
    }

    /// Validate the spec; finite tables are checked for the group axioms.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::FgAbelian { torsion, .. } => {
                if let Some(n) = torsion.iter().find(|&&n| n < 2) {
                    return Err(Error::InvalidGroup(format!("torsion order {n} is below 2")));
                }
                Ok(())
            }
            GroupSpec::FreeProductZ2Z2 => Ok(()),
            GroupSpec::FreeGroup { generators } => {
                if *generators > 26 {
                    return Err(Error::InvalidGroup("at most 26 free generators".into()));
                }
                Ok(())
            }
            GroupSpec::FiniteTable { table } => validate_table(table).map(|_| ()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::FgAbelian { .. } => true,
            GroupSpec::FreeProductZ2Z2 => false,
            GroupSpec::FreeGroup { generators } => *generators <= 1,
            GroupSpec::FiniteTable { table } => {
                let n = table.len();
                (0..n).all(|i| (0..n).all(|j| table[i][j] == table[j][i]))
            }
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::FgAbelian { rank: 0, torsion } => Some(torsion.iter().product()),
            GroupSpec::FiniteTable { table } => Some(table.len() as u64),
            GroupSpec::FreeGroup { generators: 0 } => Some(1),
            _ => None,
        }
    }

    /// All elements of a finite group in a fixed order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        match self {
            GroupSpec::FgAbelian { rank: 0, torsion } => {
                let mut out = vec![vec![]];
                for &n in torsion {
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<i64>| {
                            (0..n as i64).map(move |k| {
                                let mut w = v.clone();
                                w.push(k);
                                w
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(|t| GroupElement::Abelian { z: vec![], t }).collect())
            }
            GroupSpec::FiniteTable { table } => Ok((0..table.len()).map(GroupElement::Finite).collect()),
            _ => Err(Error::InvalidGroup("group is infinite".into())),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::FgAbelian { rank, torsion } => {
                GroupElement::Abelian { z: vec![0; *rank], t: vec![0; torsion.len()] }
            }
            GroupSpec::FreeProductZ2Z2 | GroupSpec::FreeGroup { .. } => GroupElement::Word(String::new()),
            GroupSpec::FiniteTable { table } => {
                GroupElement::Finite(table_identity(table).unwrap_or(0))
            }
        }
    }

    /// Bring an element into canonical form, checking that it belongs to this group.
    pub fn canonical(&self, a: &GroupElement) -> Result<GroupElement> {
        match (self, a) {
            (GroupSpec::FgAbelian { rank, torsion }, GroupElement::Abelian { z, t }) => {
                if z.len() != *rank || t.len() != torsion.len() {
                    return Err(Error::SpecMismatch(format!(
                        "element has shape ({}, {}) but the group has rank {} and {} torsion factors",
                        z.len(),
                        t.len(),
                        rank,
                        torsion.len()
                    )));
                }
                Ok(GroupElement::Abelian {
                    z: z.clone(),
                    t: t.iter().zip(torsion).map(|(x, &n)| x.rem_euclid(n as i64)).collect(),
                })
            }
            (GroupSpec::FreeProductZ2Z2, GroupElement::Word(w)) => {
                if let Some(c) = w.chars().find(|c| *c != 'v' && *c != 'h') {
                    return Err(Error::SpecMismatch(format!("letter {c:?} is not v or h")));
                }
                Ok(GroupElement::Word(reduce_involutions(w)))
            }
            (GroupSpec::FreeGroup { generators }, GroupElement::Word(w)) => {
                for c in w.chars() {
                    let idx = c.to_ascii_lowercase() as i64 - 'a' as i64;
                    if !c.is_ascii_alphabetic() || idx < 0 || idx >= *generators as i64 {
                        return Err(Error::SpecMismatch(format!("letter {c:?} is not a generator")));
                    }
                }
                Ok(GroupElement::Word(reduce_free(w)))
            }
            (GroupSpec::FiniteTable { table }, GroupElement::Finite(i)) => {
                if *i >= table.len() {
                    return Err(Error::SpecMismatch(format!("index {i} exceeds the group order")));
                }
                Ok(GroupElement::Finite(*i))
            }
            _ => Err(Error::SpecMismatch(format!("{a} does not belong to {self}"))),
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        match (self, a, b) {
            (
                GroupSpec::FgAbelian { torsion, .. },
                GroupElement::Abelian { z: z1, t: t1 },
                GroupElement::Abelian { z: z2, t: t2 },
            ) => {
                if z1.len() != z2.len() || t1.len() != t2.len() || t1.len() != torsion.len() {
                    return Err(Error::SpecMismatch("abelian elements of different shapes".into()));
                }
                Ok(GroupElement::Abelian {
                    z: z1.iter().zip(z2).map(|(x, y)| x + y).collect(),
                    t: t1
                        .iter()
                        .zip(t2)
                        .zip(torsion)
                        .map(|((x, y), &n)| (x + y).rem_euclid(n as i64))
                        .collect(),
                })
            }
            (GroupSpec::FreeProductZ2Z2, GroupElement::Word(x), GroupElement::Word(y)) => {
                Ok(GroupElement::Word(reduce_involutions(&format!("{x}{y}"))))
            }
            (GroupSpec::FreeGroup { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                Ok(GroupElement::Word(reduce_free(&format!("{x}{y}"))))
            }
            (GroupSpec::FiniteTable { table }, GroupElement::Finite(i), GroupElement::Finite(j)) => {
                if *i >= table.len() || *j >= table.len() {
                    return Err(Error::SpecMismatch("index exceeds the group order".into()));
                }
                Ok(GroupElement::Finite(table[*i][*j]))
            }
            _ => Err(Error::SpecMismatch(format!("cannot multiply {a} and {b} in {self}"))),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        match (self, a) {
            (GroupSpec::FgAbelian { torsion, .. }, GroupElement::Abelian { z, t }) => Ok(GroupElement::Abelian {
                z: z.iter().map(|x| -x).collect(),
                t: t.iter().zip(torsion).map(|(x, &n)| (-x).rem_euclid(n as i64)).collect(),
            }),
            (GroupSpec::FreeProductZ2Z2, GroupElement::Word(w)) => Ok(GroupElement::Word(w.chars().rev().collect())),
            (GroupSpec::FreeGroup { .. }, GroupElement::Word(w)) => Ok(GroupElement::Word(
                w.chars().rev().map(swap_case).collect(),
            )),
            (GroupSpec::FiniteTable { table }, GroupElement::Finite(i)) => {
                let e = table_identity(table).ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
                (0..table.len())
                    .find(|&j| table[*i][j] == e)
                    .map(GroupElement::Finite)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {i} has no inverse")))
            }
            _ => Err(Error::SpecMismatch(format!("{a} does not belong to {self}"))),
        }
    }

    pub fn eq(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        Ok(self.canonical(a)? == self.canonical(b)?)
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        self.canonical(a).map(|c| c == self.identity()).unwrap_or(false)
    }

    /// `a^n` for any integer `n`.
    pub fn pow(&self, a: &GroupElement, n: i64) -> Result<GroupElement> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Product `a_k * ... * a_1` of a sequence listed in time order.
    pub fn left_product<'a, I: IntoIterator<Item = &'a GroupElement>>(&self, items: I) -> Result<GroupElement> {
        let mut acc = self.identity();
        for g in items {
            acc = self.mul(g, &acc)?;
        }
        Ok(acc)
    }

    /// Conjugation-invariant subadditive norm.
    ///
    /// Abelian groups use `sum |z_i| + sum min(t_k, n_k - t_k)`; free groups use the
    /// norm of the abelianization.
    pub fn pseudonorm(&self, a: &GroupElement) -> Result<u64> {
        match (self, self.canonical(a)?) {
            (GroupSpec::FgAbelian { torsion, .. }, GroupElement::Abelian { z, t }) => {
                let free: u64 = z.iter().map(|x| x.unsigned_abs()).sum();
                let tors: u64 = t
                    .iter()
                    .zip(torsion)
                    .map(|(&y, &n)| (y as u64).min(n - y as u64))
                    .sum();
                Ok(free + tors)
            }
            (GroupSpec::FreeGroup { generators }, GroupElement::Word(w)) => {
                let mut sums = vec![0i64; *generators];
                for c in w.chars() {
                    let idx = (c.to_ascii_lowercase() as u8 - b'a') as usize;
                    sums[idx] += if c.is_ascii_lowercase() { 1 } else { -1 };
                }
                Ok(sums.iter().map(|x| x.unsigned_abs()).sum())
            }
            (GroupSpec::FreeProductZ2Z2, _) => Err(Error::NoNontrivialPseudonorm(
                "every nonidentity element of Z/2*Z/2 is conjugate to v, h or a power of vh with its inverse; recode into the cyclic subgroup generated by vh first".into(),
            )),
            (GroupSpec::FiniteTable { .. }, _) => Err(Error::NoNontrivialPseudonorm(
                "finite groups given by table have no designated pseudonorm".into(),
            )),
            _ => unreachable!("canonical checked the element kind"),
        }
    }

    /// Parse a textual element: `e`, a word such as `vhv` or `aB`, `#k` for a table
    /// index, or comma separated integers for abelian groups (free part first).
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        match self {
            GroupSpec::FgAbelian { rank, torsion } => {
                if s == "e" || s == "0" && *rank + torsion.len() != 1 {
                    return Ok(self.identity());
                }
                let nums: std::result::Result<Vec<i64>, _> =
                    s.split(',').map(|x| x.trim().parse::<i64>()).collect();
                let nums = nums.map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
                if nums.len() != rank + torsion.len() {
                    return Err(Error::Parse(format!("{s:?} needs {} integers", rank + torsion.len())));
                }
                self.canonical(&GroupElement::Abelian { z: nums[..*rank].to_vec(), t: nums[*rank..].to_vec() })
            }
            GroupSpec::FiniteTable { .. } => {
                let k = s.trim_start_matches('#').parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
                self.canonical(&GroupElement::Finite(k))
            }
            _ => {
                let w = if s == "e" { "" } else { s };
                self.canonical(&GroupElement::Word(w.to_string()))
            }
        }
    }

    /// Parse a group description: `0`, `Z`, `Z^3`, `Z/4`, `Z^2+Z/2+Z/6`, `Z2*Z2`, `F2`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Z2*Z2" || t == "Z/2*Z/2" {
            return Ok(GroupSpec::FreeProductZ2Z2);
        }
        if let Some(n) = t.strip_prefix('F') {
            let generators = n.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            let g = GroupSpec::FreeGroup { generators };
            g.validate()?;
            return Ok(g);
        }
        let ab = FgAbelianGroup::parse(&t)?;
        Ok(GroupSpec::FgAbelian { rank: ab.rank, torsion: ab.torsion })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FgAbelian { rank, torsion } => {
                let mut parts = vec![];
                match rank {
                    0 => {}
                    1 => parts.push("Z".to_string()),
                    r => parts.push(format!("Z^{r}")),
                }
                parts.extend(torsion.iter().map(|n| format!("Z/{n}")));
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join("+"))
                }
            }
            GroupSpec::FreeProductZ2Z2 => write!(f, "Z2*Z2"),
            GroupSpec::FreeGroup { generators } => write!(f, "F{generators}"),
            GroupSpec::FiniteTable { table } => write!(f, "finite group of order {}", table.len()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Abelian { z, t } => {
                let all: Vec<String> = z.iter().chain(t.iter()).map(|x| x.to_string()).collect();
                if all.len() == 1 {
                    write!(f, "{}", all[0])
                } else {
                    write!(f, "({})", all.join(","))
                }
            }
            GroupElement::Word(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Word(w) => write!(f, "{w}"),
            GroupElement::Finite(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Serialize, Deserialize, Default)]
struct ElementRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    z: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    index: Option<usize>,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            GroupElement::Abelian { z, t } => ElementRepr { z: Some(z.clone()), t: Some(t.clone()), ..Default::default() },
            GroupElement::Word(w) => ElementRepr { word: Some(w.clone()), ..Default::default() },
            GroupElement::Finite(i) => ElementRepr { index: Some(*i), ..Default::default() },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        match r {
            ElementRepr { word: Some(w), z: None, t: None, index: None } => Ok(GroupElement::Word(w)),
            ElementRepr { index: Some(i), z: None, t: None, word: None } => Ok(GroupElement::Finite(i)),
            ElementRepr { word: None, index: None, z, t } if z.is_some() || t.is_some() => {
                Ok(GroupElement::Abelian { z: z.unwrap_or_default(), t: t.unwrap_or_default() })
            }
            _ => Err(D::Error::custom("group element needs exactly one of {z,t}, word or index")),
        }
    }
}

impl GroupElement {
    /// Integer element of `Z`.
    pub fn int(k: i64) -> Self {
        GroupElement::Abelian { z: vec![k], t: vec![] }
    }

    /// Element of a purely torsion abelian group.
    pub fn torsion(t: Vec<i64>) -> Self {
        GroupElement::Abelian { z: vec![], t }
    }

    pub fn word(w: &str) -> Self {
        GroupElement::Word(w.to_string())
    }

    /// The single integer coordinate of an element of `Z`.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroupElement::Abelian { z, t } if z.len() == 1 && t.is_empty() => Some(z[0]),
            _ => None,
        }
    }
}

/// Exponent `m` with `w = (vh)^m` in `Z/2 * Z/2`, if `w` lies in that cyclic subgroup.
pub fn vh_exponent(w: &str) -> Option<i64> {
    let w = reduce_involutions(w);
    if w.is_empty() {
        return Some(0);
    }
    if w.len() % 2 == 1 {
        return None;
    }
    let m = (w.len() / 2) as i64;
    if w.starts_with('v') {
        Some(m)
    } else {
        Some(-m)
    }
}

fn swap_case(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Cancel adjacent equal letters (each generator is an involution).
fn reduce_involutions(w: &str) -> String {
    let mut out: Vec<char> = Vec::with_capacity(w.len());
    for c in w.chars() {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

/// Cancel adjacent `x X` and `X x` pairs.
fn reduce_free(w: &str) -> String {
    let mut out: Vec<char> = Vec::with_capacity(w.len());
    for c in w.chars() {
        if out.last().map(|&p| p != c && p.eq_ignore_ascii_case(&c)).unwrap_or(false) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

fn table_identity(table: &[Vec<usize>]) -> Option<usize> {
    let n = table.len();
    (0..n).find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
}

fn validate_table(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidGroup("empty multiplication table".into()));
    }
    if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidGroup("table is not a closed square".into()));
    }
    let e = table_identity(table).ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
    for i in 0..n {
        if !(0..n).any(|j| table[i][j] == e && table[j][i] == e) {
            return Err(Error::InvalidGroup(format!("element {i} has no inverse")));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Error::InvalidGroup(format!("associativity fails on ({i},{j},{k})")));
                }
            }
        }
    }
    Ok(e)
}
