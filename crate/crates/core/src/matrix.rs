//! Dense matrices over a coefficient ring. Column `j` is the image of the
//! `j`-th basis vector.

use std::fmt;

use crate::arith::inv_mod;
use crate::ring::{CoefficientRing, PrimeField};

#[derive(Clone, PartialEq)]
pub struct Matrix<R: CoefficientRing> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: CoefficientRing> Matrix<R> {
    pub fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Self {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn diagonal(ring: &R, diag: Vec<R::Elem>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(ring: &R, rows: Vec<Vec<R::Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let data: Vec<R::Elem> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * cols);
        Self {
            ring: ring.clone(),
            rows: n,
            cols,
            data,
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    /// Positions of nonzero entries.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.ring.is_zero(self.get(i, j)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| self.ring.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let ring = &self.ring;
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !ring.is_zero(b) {
                        let idx = i * out.cols + j;
                        let prod = ring.mul(a, b);
                        ring.add_assign(&mut out.data[idx], &prod);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product; basis `(i, j)` of the result has index `i * n + j`.
    pub fn kron(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let mut out = Self::zeros(ring, self.rows * other.rows, self.cols * other.cols);
        for (i1, j1) in self.nonzero_entries().collect::<Vec<_>>() {
            let a = self.get(i1, j1);
            for (i2, j2) in other.nonzero_entries() {
                out.set(
                    i1 * other.rows + i2,
                    j1 * other.cols + j2,
                    ring.mul(a, other.get(i2, j2)),
                );
            }
        }
        out
    }

    pub fn block_diagonal(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        for (i, j) in self.nonzero_entries() {
            out.set(i, j, self.get(i, j).clone());
        }
        for (i, j) in other.nonzero_entries() {
            out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ring, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn map_ring<S: CoefficientRing>(&self, target: &S) -> Matrix<S> {
        Matrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| target.from_bigint(&self.ring.to_bigint(x)))
                .collect(),
        }
    }
}

impl Matrix<PrimeField> {
    /// Basis of `{v : M v = 0}`, one vector per free column of the reduced
    /// row echelon form.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.ring.p();
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(r, pr);
            let inv = inv_mod(a[r][c], p);
            for x in a[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..self.rows {
                if i != r && a[i][c] != 0 {
                    let f = a[i][c];
                    for j in 0..self.cols {
                        a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - a[row][f]) % p;
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.cols - self.nullspace().len()
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(ring: &PrimeField, blocks: &[Matrix<PrimeField>], cols: usize) -> Self {
        let rows: Vec<Vec<u64>> = blocks.iter().flat_map(|m| m.to_rows()).collect();
        Self::from_rows(ring, rows, cols)
    }
}

impl<R: CoefficientRing> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| self.ring.to_bigint(x).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}
