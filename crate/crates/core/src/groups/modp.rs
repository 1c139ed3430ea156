//! Linear algebra over the prime field `F_p`: ranks, kernels and subquotients,
//! used for homology with `Z/p` coefficients and for induced maps on cohomology.

use num_traits::ToPrimitive;

use super::matrix::{IntegerMatrix, SparseMatrix};
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2).
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Dense matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_sparse(m: &SparseMatrix, p: u64) -> Self {
        let mut out = Self::zeros(p, m.rows, m.cols);
        for (j, col) in m.columns.iter().enumerate() {
            for (&i, &x) in col {
                out.data[i * m.cols + j] = reduce(x, p);
            }
        }
        out
    }

    pub fn from_dense(m: &IntegerMatrix, p: u64) -> Self {
        let mut out = Self::zeros(p, m.rows(), m.cols());
        let pb = num_bigint::BigInt::from(p);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r = ((m.get(i, j) % &pb) + &pb) % &pb;
                out.data[i * m.cols() + j] = r.to_u64().unwrap();
            }
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(p: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x % p;
            }
        }
        m
    }

    pub fn mul(&self, other: &FpMatrix) -> Option<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return None;
        }
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = (out.data[idx] + a * b) % p;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0u64, |acc, j| (acc + self.get(i, j) * v[j]) % p))
            .collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p);
            for j in c..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = self.data[idx] * inv % p;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let x = self.data[r * self.cols + j];
                    if x != 0 {
                        let idx = i * self.cols + j;
                        self.data[idx] = (self.data[idx] + (p - f) * x) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the kernel, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let mut basis = vec![];
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let x = m.get(r, free);
                v[pc] = (p - x) % p;
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of an integer sparse matrix reduced mod `p`, by sparse elimination.
pub fn rank_sparse(m: &SparseMatrix, p: u64) -> usize {
    use std::collections::BTreeMap;
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    let mut rank = 0;
    for col in &m.columns {
        let mut v: BTreeMap<usize, u64> = col.iter().map(|(&i, &x)| (i, reduce(x, p))).filter(|(_, x)| *x != 0).collect();
        while let Some((&lead, &lv)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(pv) => {
                    // pv is normalised with leading coefficient 1.
                    for (&i, &x) in pv {
                        let cur = v.get(&i).copied().unwrap_or(0);
                        let nv = (cur + (p - lv) * x % p) % p;
                        if nv == 0 {
                            v.remove(&i);
                        } else {
                            v.insert(i, nv);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(lv, p);
                    for x in v.values_mut() {
                        *x = *x * inv % p;
                    }
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn rank_dense(m: &IntegerMatrix, p: u64) -> usize {
    FpMatrix::from_dense(m, p).rank()
}

/// `ker(out) / im(inc)` over `F_p` with a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub p: u64,
    pub ambient: usize,
    /// Representative vectors of a basis of the quotient.
    pub reps: Vec<Vec<u64>>,
    image_dim: usize,
    /// Row operations `E` with `E [image | reps] = [I; 0]`.
    left_inverse: FpMatrix,
}

impl Subquotient {
    /// `out` maps out of the ambient space, `inc` maps into it.
    pub fn new(inc: &FpMatrix, out: &FpMatrix) -> Result<Self> {
        let p = inc.p;
        let n = inc.rows;
        if out.cols != n {
            return Err(Error::NonComposable("subquotient maps do not meet".into()));
        }
        if !out.mul(inc).unwrap().data.iter().all(|&x| x == 0) {
            return Err(Error::NonzeroComposition("out * inc != 0 mod p".into()));
        }
        // Pivot columns of [inc | kernel basis] give an image basis followed by
        // kernel vectors completing it.
        let kernel = out.kernel();
        let mut cols: Vec<Vec<u64>> = (0..inc.cols).map(|j| inc.column(j)).collect();
        cols.extend(kernel);
        let mut red = FpMatrix::from_columns(p, n, &cols);
        let pivots = red.rref();
        let image_dim = pivots.iter().filter(|&&c| c < inc.cols).count();
        let basis: Vec<Vec<u64>> = pivots.iter().map(|&c| cols[c].clone()).collect();
        let reps = basis[image_dim..].to_vec();
        let total = basis.len();
        let mut aug = FpMatrix::zeros(p, n, total + n);
        for (j, c) in basis.iter().enumerate() {
            for i in 0..n {
                aug.set(i, j, c[i]);
            }
        }
        for i in 0..n {
            aug.set(i, total + i, 1);
        }
        aug.rref();
        let mut left_inverse = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            for j in 0..n {
                left_inverse.set(i, j, aug.get(i, total + j));
            }
        }
        Ok(Subquotient { p, ambient: n, reps, image_dim, left_inverse })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle in the quotient basis.
    pub fn coords(&self, v: &[u64]) -> Result<Vec<u64>> {
        let total = self.image_dim + self.reps.len();
        let x = self.left_inverse.apply(v);
        if x[total..].iter().any(|&c| c != 0) {
            return Err(Error::Invalid("vector is not a cycle".into()));
        }
        Ok(x[self.image_dim..total].to_vec())
    }
}

/// Matrix of the map induced by `f` between two subquotients.
pub fn induced_map(src: &Subquotient, tgt: &Subquotient, f: &FpMatrix) -> Result<FpMatrix> {
    if f.cols != src.ambient || f.rows != tgt.ambient {
        return Err(Error::NonComposable("induced map shape".into()));
    }
    let cols: Vec<Vec<u64>> = src.reps.iter().map(|v| tgt.coords(&f.apply(v))).collect::<Result<_>>()?;
    Ok(FpMatrix::from_columns(src.p, tgt.dim(), &cols))
}
