//! Value tables for torus elements over `F_p`.
//!
//! For `b < p^K`, `h ↦ binom(h, b) mod p` is `p^K`-periodic (Lucas), and the
//! span of `binom(H, b)` with every `b_i < p^K` is isomorphic, as a ring, to
//! the functions `(ℤ/p^K)^ℓ → F_p`. Products become pointwise, shifts become
//! cyclic rotations. The exhaustive theorem sweep runs on these tables.

use crate::arith::lucas;
use crate::ring::{CoefficientRing, PrimeField};
use crate::torus::{MultiIndex, TorusElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicGrid {
    p: u64,
    depth: u32,
    rank: usize,
    period: usize,
    size: usize,
}

pub type Values = Vec<u32>;

impl PeriodicGrid {
    /// Functions on `(ℤ/p^depth)^rank`.
    pub fn new(p: u64, depth: u32, rank: usize) -> Self {
        let period = (p as usize).pow(depth);
        Self {
            p,
            depth,
            rank,
            period,
            size: period.pow(rank as u32),
        }
    }

    /// Smallest grid on which every index up to `max_index` is faithful.
    pub fn covering(p: u64, max_index: u64, rank: usize) -> Self {
        let mut depth = 0;
        let mut period = 1u64;
        while period <= max_index {
            period *= p;
            depth += 1;
        }
        Self::new(p, depth, rank)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Coordinates of a table position, first coordinate most significant.
    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut h = vec![0; self.rank];
        for i in (0..self.rank).rev() {
            h[i] = (idx % self.period) as i64;
            idx /= self.period;
        }
        h
    }

    pub fn index(&self, h: &[i64]) -> usize {
        h.iter()
            .fold(0, |acc, &x| acc * self.period + x.rem_euclid(self.period as i64) as usize)
    }

    pub fn zeros(&self) -> Values {
        vec![0; self.size]
    }

    /// Values of a basis element; every index must be below the period.
    pub fn from_torus(&self, x: &TorusElement<PrimeField>) -> Values {
        assert!(
            (x.max_index() as usize) < self.period || x.is_zero(),
            "element not faithful on this grid"
        );
        let p = self.p;
        let mut out = self.zeros();
        for (idx, v) in out.iter_mut().enumerate() {
            let h = self.point(idx);
            let mut acc = 0u64;
            for (b, c) in x.terms() {
                let mut t = *c;
                for (&bi, &hi) in b.iter().zip(&h) {
                    if t == 0 {
                        break;
                    }
                    t = t * lucas(hi, bi as u64, p) % p;
                }
                acc = (acc + t) % p;
            }
            *v = acc as u32;
        }
        out
    }

    /// Inverse of `from_torus`, by forward differences along each axis.
    pub fn to_torus(&self, field: &PrimeField, v: &[u32]) -> TorusElement<PrimeField> {
        let p = self.p as u32;
        let mut work = v.to_vec();
        let stride_of = |axis: usize| self.period.pow((self.rank - 1 - axis) as u32);
        for axis in 0..self.rank {
            let stride = stride_of(axis);
            for start in 0..self.size {
                if (start / stride) % self.period != 0 {
                    continue;
                }
                let mut line: Vec<u32> = (0..self.period).map(|k| work[start + k * stride]).collect();
                let mut coeffs = Vec::with_capacity(self.period);
                for _ in 0..self.period {
                    coeffs.push(line[0]);
                    for j in 0..line.len() - 1 {
                        line[j] = (line[j + 1] + p - line[j]) % p;
                    }
                    line.pop();
                }
                for (k, c) in coeffs.into_iter().enumerate() {
                    work[start + k * stride] = c;
                }
            }
        }
        TorusElement::from_terms(
            field,
            self.rank,
            work.iter().enumerate().filter(|(_, &c)| c != 0).map(|(idx, &c)| {
                let b: MultiIndex = self.point(idx).into_iter().map(|x| x as u32).collect();
                (b, c as u64)
            }),
        )
    }

    /// `f ↦ f(H + m)`.
    pub fn shift(&self, v: &[u32], m: &[i64]) -> Values {
        let per_axis: Vec<Vec<usize>> = (0..self.rank)
            .map(|i| {
                let stride = self.period.pow((self.rank - 1 - i) as u32);
                (0..self.period as i64)
                    .map(|h| (h + m[i]).rem_euclid(self.period as i64) as usize * stride)
                    .collect()
            })
            .collect();
        let mut out = self.zeros();
        for (idx, o) in out.iter_mut().enumerate() {
            let mut src = 0;
            let mut rest = idx;
            for i in (0..self.rank).rev() {
                src += per_axis[i][rest % self.period];
                rest /= self.period;
            }
            *o = v[src];
        }
        out
    }

    /// Values of `binom(Σ c_i H_i + m, r)`.
    pub fn lincomb_binom(&self, c: &[i64], m: i64, r: u32) -> Values {
        (0..self.size)
            .map(|idx| {
                let h = self.point(idx);
                let x: i64 = c.iter().zip(&h).map(|(a, b)| a * b).sum::<i64>() + m;
                lucas(x, r as u64, self.p) as u32
            })
            .collect()
    }

    /// `φ⁰` from the grid one level coarser: `φ⁰(T)(h) = T(h / p)` when `p | h`,
    /// and 0 otherwise.
    pub fn lift_phi0(&self, coarse: &PeriodicGrid, v: &[u32]) -> Values {
        assert_eq!(coarse.depth + 1, self.depth);
        let p = self.p as i64;
        (0..self.size)
            .map(|idx| {
                let h = self.point(idx);
                if h.iter().all(|&x| x % p == 0) {
                    let q: Vec<i64> = h.iter().map(|&x| x / p).collect();
                    v[coarse.index(&q)]
                } else {
                    0
                }
            })
            .collect()
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Values {
        let p = self.p;
        x.iter()
            .zip(y)
            .map(|(&a, &b)| ((a as u64 * b as u64) % p) as u32)
            .collect()
    }

    pub fn mul3(&self, x: &[u32], y: &[u32], z: &[u32]) -> Values {
        let p = self.p;
        x.iter()
            .zip(y)
            .zip(z)
            .map(|((&a, &b), &c)| ((a as u64 * b as u64 % p) * c as u64 % p) as u32)
            .collect()
    }

    pub fn scale(&self, x: &[u32], c: u64) -> Values {
        let p = self.p;
        x.iter().map(|&a| (a as u64 * c % p) as u32).collect()
    }
}

/// Checks that `x` and `y` are proportional, returning `λ` with `x = λ y`
/// when `y` is nonzero.
pub(crate) fn ratio(field: &PrimeField, x: &[u32], y: &[u32]) -> Option<u64> {
    let pos = y.iter().position(|&v| v != 0)?;
    let inv = crate::arith::inv_mod(y[pos] as u64, field.p());
    let lambda = field.mul(&(x[pos] as u64), &inv);
    x.iter()
        .zip(y)
        .all(|(&a, &b)| a as u64 == field.mul(&lambda, &(b as u64)))
        .then_some(lambda)
}
