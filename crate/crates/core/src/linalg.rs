//! Dense matrices over F_p and an incremental echelon basis.
//!
//! Pivot choice is always the first nonzero entry in the current column, so
//! every decomposition is deterministic.

use serde::Serialize;

#[inline]
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut base = (a % p) as u64;
    let mut e = (p - 2) as u64;
    let mut acc = 1u64;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

#[inline]
fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        Self { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols, p);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x % p;
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, cols.len(), p);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % p;
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

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: u32) {
        let idx = i * self.cols + j;
        self.data[idx] = (self.data[idx] + v % self.p) % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = self.p as u64;
        let mut out = Mat::zeros(self.rows, other.cols, self.p);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = other.row(k);
                for (j, &b) in row.iter().enumerate() {
                    if b != 0 {
                        acc[j] = (acc[j] + a * b as u64) % p;
                    }
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] = acc[j] as u32;
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    if x != 0 {
                        s = (s + self.data[i * self.cols + j] as u64 * x as u64) % p;
                    }
                }
                s as u32
            })
            .collect()
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(self.rows, cols, self.p);
        for i in 0..self.rows {
            m.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p) as u64;
            for j in c..cols {
                let idx = r * cols + j;
                self.data[idx] = (self.data[idx] as u64 * inv % p as u64) as u32;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = neg(f, p) as u64;
                for j in c..cols {
                    let a = self.data[r * cols + j];
                    if a != 0 {
                        let idx = i * cols + j;
                        self.data[idx] = ((self.data[idx] as u64 + nf * a as u64) % p as u64) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate on the shorter side.
        if self.rows < self.cols {
            self.clone().rref_in_place().len()
        } else {
            self.transpose().rref_in_place().len()
        }
    }

    /// Basis of the null space, as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len(), self.p);
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if v != 0 {
                    k.set(pc, t, neg(v, self.p));
                }
            }
        }
        k
    }

    /// A basis of the column space chosen among the original columns.
    pub fn column_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<u32>> = pivots.iter().map(|&c| self.col(c)).collect();
        Mat::from_cols(self.p, self.rows, &cols)
    }

    /// For a matrix of full column rank, a left inverse `L` with `L·self = I`.
    pub fn left_inverse(&self) -> Option<Mat> {
        let k = self.cols;
        let aug = self.hcat(&Mat::identity(self.rows, self.p));
        let (r, pivots) = aug.rref();
        if pivots.len() < k || pivots[..k].iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut l = Mat::zeros(k, self.rows, self.p);
        for i in 0..k {
            for j in 0..self.rows {
                l.data[i * self.rows + j] = r.get(i, k + j);
            }
        }
        Some(l)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let vs: Vec<Vec<u32>> = cols.iter().map(|&c| self.col(c)).collect();
        Mat::from_cols(self.p, self.rows, &vs)
    }
}

/// Incrementally built echelon basis of a subspace of F_p^dim.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    p: u32,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize, p: u32) -> Self {
        Self { dim, p, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            let nf = neg(f, self.p) as u64;
            for (j, &a) in row.iter().enumerate().skip(pc) {
                if a != 0 {
                    v[j] = ((v[j] as u64 + nf * a as u64) % p) as u32;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc], self.p) as u64;
        for x in w.iter_mut() {
            *x = (*x as u64 * inv % self.p as u64) as u32;
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = Mat::from_rows(3, 3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // rows 1 and 2 are dependent mod 3 (2·[1,2] = [2,1])
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn left_inverse_roundtrip() {
        let b = Mat::from_cols(5, 3, &[vec![1, 2, 3], vec![0, 1, 4]]);
        let l = b.left_inverse().unwrap();
        assert_eq!(l.mul(&b), Mat::identity(2, 5));
        let dep = Mat::from_cols(5, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(dep.left_inverse().is_none());
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(3, 2);
        assert!(e.insert(&[1, 1, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 0, 1]));
        assert!(e.contains(&[1, 0, 1]));
        assert!(!e.contains(&[1, 0, 0]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn inverse_mod() {
        for p in [2u32, 3, 5, 7, 65521] {
            for a in 1..p.min(50) {
                assert_eq!(a as u64 * inv_mod(a, p) as u64 % p as u64, 1);
            }
        }
    }
}
