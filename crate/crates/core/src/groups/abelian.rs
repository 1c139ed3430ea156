//! Finitely generated abelian groups in invariant-factor form, Ext/Hom/Tor and
//! the homology of a pair of composable boundary matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matrix::{smith_invariants, smith_normal_form, IntegerMatrix, SparseMatrix};
use super::modp;
use crate::error::{Error, Result};

/// `Z^rank + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbelianGroup {
    /// Build from arbitrary cyclic orders; orders of 1 are dropped and the rest
    /// are rearranged into a divisor chain.
    pub fn new(rank: usize, orders: &[u64]) -> Self {
        let orders: Vec<u64> = orders.iter().copied().filter(|&n| n > 1).collect();
        if orders.is_empty() {
            return FgAbelianGroup { rank, torsion: vec![] };
        }
        let n = orders.len();
        let mut m = IntegerMatrix::zeros(n, n);
        for (i, &o) in orders.iter().enumerate() {
            m.set(i, i, BigInt::from(o));
        }
        let torsion = smith_normal_form(&m)
            .invariants()
            .into_iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_u64().expect("product of u64 orders fits"))
            .collect();
        FgAbelianGroup { rank, torsion }
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { rank: 0, torsion: vec![] }
    }

    pub fn integers() -> Self {
        FgAbelianGroup { rank: 1, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(0, &[n])
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// `Z/p` for a prime `p`, if this group is one.
    pub fn prime_field(&self) -> Option<u64> {
        match (self.rank, self.torsion.as_slice()) {
            (0, [p]) if modp::is_prime(*p) => Some(*p),
            _ => None,
        }
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(&other.torsion);
        Self::new(self.rank + other.rank, &orders)
    }

    /// `G / nG`.
    pub fn mod_n(&self, n: u64) -> FgAbelianGroup {
        let mut orders = vec![n; self.rank];
        orders.extend(self.torsion.iter().map(|&m| m.gcd(&n)));
        Self::new(0, &orders)
    }

    /// `G[n] = { g : n g = 0 }`.
    pub fn n_torsion(&self, n: u64) -> FgAbelianGroup {
        let orders: Vec<u64> = self.torsion.iter().map(|&m| m.gcd(&n)).collect();
        Self::new(0, &orders)
    }

    /// Parse `0`, `Z`, `Z^3`, `Z/4`, `Z^2+Z/2+Z/6` (also `+` may be `⊕`).
    pub fn parse(s: &str) -> Result<FgAbelianGroup> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('⊕', "+");
        if t.is_empty() {
            return Err(Error::Parse("empty group description".into()));
        }
        if t == "0" {
            return Ok(Self::trivial());
        }
        let mut rank = 0usize;
        let mut orders = vec![];
        for part in t.split('+') {
            if part == "Z" {
                rank += 1;
            } else if let Some(k) = part.strip_prefix("Z^") {
                rank += k.parse::<usize>().map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
            } else if let Some(n) = part.strip_prefix("Z/") {
                let (n, mult) = match n.split_once('^') {
                    Some((a, b)) => (a, b.parse::<usize>().map_err(|e| Error::Parse(format!("{part:?}: {e}")))?),
                    None => (n, 1),
                };
                let n = n.parse::<u64>().map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
                if n == 0 {
                    rank += mult;
                } else {
                    orders.extend(std::iter::repeat(n).take(mult));
                }
            } else if part == "0" {
            } else {
                return Err(Error::Parse(format!("cannot read group summand {part:?}")));
            }
        }
        Ok(Self::new(rank, &orders))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// `Ext(H, G) = sum_k G / n_k G` over the torsion orders `n_k` of `H`.
pub fn ext_group(h: &FgAbelianGroup, g: &FgAbelianGroup) -> FgAbelianGroup {
    h.torsion.iter().fold(FgAbelianGroup::trivial(), |acc, &n| acc.direct_sum(&g.mod_n(n)))
}

/// `Hom(H, G) = G^rank(H) + sum_k G[n_k]`.
pub fn hom_group(h: &FgAbelianGroup, g: &FgAbelianGroup) -> FgAbelianGroup {
    let mut out = FgAbelianGroup::trivial();
    for _ in 0..h.rank {
        out = out.direct_sum(g);
    }
    h.torsion.iter().fold(out, |acc, &n| acc.direct_sum(&g.n_torsion(n)))
}

/// `H (x) G = G^rank(H) + sum_k G / n_k G`.
pub fn tensor_group(h: &FgAbelianGroup, g: &FgAbelianGroup) -> FgAbelianGroup {
    let mut out = FgAbelianGroup::trivial();
    for _ in 0..h.rank {
        out = out.direct_sum(g);
    }
    h.torsion.iter().fold(out, |acc, &n| acc.direct_sum(&g.mod_n(n)))
}

/// `Tor(H, G) = sum_k G[n_k]`.
pub fn tor_group(h: &FgAbelianGroup, g: &FgAbelianGroup) -> FgAbelianGroup {
    h.torsion.iter().fold(FgAbelianGroup::trivial(), |acc, &n| acc.direct_sum(&g.n_torsion(n)))
}

/// Rank and invariant factors of both maps around the middle term of a pair.
struct PairShape {
    n: usize,
    rank_in: usize,
    rank_out: usize,
    inv_in: Vec<BigInt>,
    inv_out: Vec<BigInt>,
}

impl PairShape {
    fn integral_homology(&self) -> Result<FgAbelianGroup> {
        Ok(FgAbelianGroup::new(self.n - self.rank_in - self.rank_out, &to_orders(&self.inv_in)?))
    }

    /// Torsion of the homology one degree down; its free part is irrelevant here.
    fn lower_torsion(&self) -> Result<FgAbelianGroup> {
        Ok(FgAbelianGroup::new(0, &to_orders(&self.inv_out)?))
    }
}

fn to_orders(inv: &[BigInt]) -> Result<Vec<u64>> {
    inv.iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().ok_or_else(|| Error::Invalid(format!("torsion coefficient {x} exceeds 64 bits"))))
        .collect()
}

fn check_dense_pair(d_in: &IntegerMatrix, d_out: &IntegerMatrix) -> Result<()> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::NonComposable(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    let comp = d_out.mul(d_in).expect("shapes checked");
    if !comp.is_zero() {
        return Err(Error::NonzeroComposition("d_out * d_in != 0".into()));
    }
    Ok(())
}

fn check_sparse_pair(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<()> {
    if d_out.cols != d_in.rows {
        return Err(Error::NonComposable(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols, d_in.rows
        )));
    }
    if !d_out.mul(d_in).expect("shapes checked").is_zero() {
        return Err(Error::NonzeroComposition("d_out * d_in != 0".into()));
    }
    Ok(())
}

fn finish_homology(shape: &PairShape, coeff: &FgAbelianGroup, rank_p: impl Fn(u64) -> (usize, usize)) -> Result<FgAbelianGroup> {
    if let Some(p) = coeff.prime_field() {
        let (ri, ro) = rank_p(p);
        return Ok(FgAbelianGroup::new(0, &vec![p; shape.n - ri - ro]));
    }
    // Universal coefficients: H_d(C; G) = H_d(C) (x) G + Tor(H_{d-1}(C), G).
    let h = shape.integral_homology()?;
    Ok(tensor_group(&h, coeff).direct_sum(&tor_group(&shape.lower_torsion()?, coeff)))
}

/// `ker(d_out) / im(d_in)` with coefficients in `coeff`.
///
/// `d_in` maps into the middle term and `d_out` maps out of it. Over `Z` this
/// is read off the Smith forms; over `Z/p` by ranks modulo `p`; other
/// coefficient groups go through the universal coefficient theorem.
pub fn homology_of_pair(d_in: &IntegerMatrix, d_out: &IntegerMatrix, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    check_dense_pair(d_in, d_out)?;
    let inv_in = smith_normal_form(d_in).invariants();
    let inv_out = smith_normal_form(d_out).invariants();
    let shape = PairShape { n: d_in.rows(), rank_in: inv_in.len(), rank_out: inv_out.len(), inv_in, inv_out };
    finish_homology(&shape, coeff, |p| (modp::rank_dense(d_in, p), modp::rank_dense(d_out, p)))
}

/// Sparse variant of [`homology_of_pair`] for large boundary matrices.
pub fn homology_of_pair_sparse(d_in: &SparseMatrix, d_out: &SparseMatrix, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    check_sparse_pair(d_in, d_out)?;
    let shape = sparse_shape(d_in, d_out);
    finish_homology(&shape, coeff, |p| (modp::rank_sparse(d_in, p), modp::rank_sparse(d_out, p)))
}

fn sparse_shape(d_in: &SparseMatrix, d_out: &SparseMatrix) -> PairShape {
    let inv_in = smith_invariants(d_in);
    let inv_out = smith_invariants(d_out);
    PairShape { n: d_in.rows, rank_in: inv_in.len(), rank_out: inv_out.len(), inv_in, inv_out }
}

/// Cohomology in the middle degree of the cochain complex `Hom(C, G)`:
/// `Hom(H_d, G) + Ext(H_{d-1}, G)`. Arguments are the chain-level boundaries
/// as in [`homology_of_pair`].
pub fn cohomology_of_pair(d_in: &SparseMatrix, d_out: &SparseMatrix, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    check_sparse_pair(d_in, d_out)?;
    if let Some(p) = coeff.prime_field() {
        let n = d_in.rows;
        return Ok(FgAbelianGroup::new(0, &vec![p; n - modp::rank_sparse(d_in, p) - modp::rank_sparse(d_out, p)]));
    }
    let shape = sparse_shape(d_in, d_out);
    let h = shape.integral_homology()?;
    Ok(hom_group(&h, coeff).direct_sum(&ext_group(&shape.lower_torsion()?, coeff)))
}
