//! Exact integer matrices and the Smith normal form.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntegerMatrix { rows: r, cols: c, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    /// Build with explicit shape (needed when there are no rows).
    pub fn from_rows_shape(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Option<IntegerMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Some(out)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Some(BigInt::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Some(sign * &a[n - 1][n - 1])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

/// `s = u * m * v` with `u`, `v` unimodular and `s` diagonal with each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Smith normal form with transforms, by exact big-integer elimination.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let (rows, cols) = (m.rows, m.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = s.get(i, j);
                if !x.is_zero() && best.map(|(bi, bj)| x.abs() < s.get(bi, bj).abs()).unwrap_or(true) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                let nq = -q;
                s.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !s.get(i, t).is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                let nq = -q;
                s.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                if !s.get(t, j).is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row and repeat.
            let p = s.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { s, u, v }
}

/// Sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[j]` maps row index to nonzero entry.
    pub columns: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![BTreeMap::new(); cols] }
    }

    pub fn add_entry(&mut self, i: usize, j: usize, x: i64) {
        let e = self.columns[j].entry(i).or_insert(0);
        *e += x;
        if *e == 0 {
            self.columns[j].remove(&i);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j].get(&i).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &x) in col {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn from_dense(m: &IntegerMatrix) -> Option<Self> {
        let mut s = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let x = m.get(i, j).to_i64()?;
                if x != 0 {
                    s.columns[j].insert(i, x);
                }
            }
        }
        Some(s)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &x) in col {
                t.columns[i].insert(j, x);
            }
        }
        t
    }

    /// `self * other`, or `None` on shape mismatch.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (&k, &b) in col {
                for (&i, &a) in &self.columns[k] {
                    *acc.entry(i).or_insert(0) += a * b;
                }
            }
            acc.retain(|_, v| *v != 0);
            out.columns[j] = acc;
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}

/// Nonzero Smith invariants of a sparse matrix.
///
/// Unit pivots are eliminated sparsely first; the remaining core (usually tiny
/// for boundary matrices) goes through the dense big-integer algorithm.
pub fn smith_invariants(m: &SparseMatrix) -> Vec<BigInt> {
    // Row-major working copy with i128 entries; column index for pivot search.
    let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); m.rows];
    for (j, col) in m.columns.iter().enumerate() {
        for (&i, &x) in col {
            rows[i].insert(j, x as i128);
        }
    }
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut alive_rows: HashSet<usize> = (0..m.rows).filter(|&i| !rows[i].is_empty()).collect();
    let mut units = 0usize;
    let mut overflow = false;
    loop {
        // Pick a unit entry in a shortest row.
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in &alive_rows {
            let len = rows[i].len();
            if best.map(|b| len >= b.2).unwrap_or(false) {
                continue;
            }
            if let Some((&j, _)) = rows[i].iter().find(|(_, v)| v.abs() == 1) {
                best = Some((i, j, len));
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_row = rows[pi].clone();
        let pv = pivot_row[&pj];
        let others: Vec<usize> = col_rows[pj].iter().copied().filter(|&i| i != pi).collect();
        for i in others {
            let factor = rows[i][&pj] * pv; // pv = +-1 so this divides exactly
            for (&j, &x) in &pivot_row {
                let cur = rows[i].get(&j).copied().unwrap_or(0);
                let Some(nv) = x.checked_mul(factor).and_then(|y| cur.checked_sub(y)) else {
                    overflow = true;
                    break;
                };
                if nv == 0 {
                    rows[i].remove(&j);
                    col_rows[j].remove(&i);
                } else {
                    if cur == 0 {
                        col_rows[j].insert(i);
                    }
                    rows[i].insert(j, nv);
                }
            }
            if overflow {
                break;
            }
            if rows[i].is_empty() {
                alive_rows.remove(&i);
            }
        }
        if overflow {
            break;
        }
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pi);
        }
        rows[pi].clear();
        alive_rows.remove(&pi);
        units += 1;
    }
    let mut out = vec![BigInt::one(); units];
    if overflow {
        // Fall back to the dense algorithm on the whole matrix.
        return smith_normal_form(&m.to_dense()).invariants();
    }
    let mut live_rows: Vec<usize> = alive_rows.into_iter().collect();
    live_rows.sort_unstable();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&i| rows[i].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    if !live_rows.is_empty() {
        let mut core = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (a, &i) in live_rows.iter().enumerate() {
            for (&j, &x) in &rows[i] {
                let b = live_cols.binary_search(&j).unwrap();
                core.set(a, b, BigInt::from(x));
            }
        }
        out.extend(smith_normal_form(&core).invariants());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        let prod = f.u.mul(m).unwrap().mul(&f.v).unwrap();
        assert_eq!(prod, f.s);
        assert_eq!(f.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(f.v.determinant().unwrap().abs(), BigInt::one());
        let inv = f.invariants();
        for w in inv.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn diag_two_three() {
        let f = check(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.invariants(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let f = check(&IntegerMatrix::identity(3));
        assert_eq!(f.s, IntegerMatrix::identity(3));
        let z = check(&IntegerMatrix::zeros(2, 3));
        assert!(z.s.is_zero());
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let dense = check(&m).invariants();
        let sparse = smith_invariants(&SparseMatrix::from_dense(&m).unwrap());
        assert_eq!(dense, sparse);
    }
}
