//! Coefficient rings: the integers and prime fields.
//!
//! Elements of `Integers` are arbitrary-precision; elements of a prime field
//! are canonical residues in `[0, p)`.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, lucas, small_binom_mod};
use crate::error::ArithError;

/// Serializable name of a coefficient ring: `"Z"` or `{"Fp": p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Fp")]
    PrimeField(u64),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integers => write!(f, "Z"),
            RingTag::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

pub trait CoefficientRing: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn to_bigint(&self, x: &Self::Elem) -> BigInt;

    /// Generalized binomial coefficient mapped into the ring.
    fn binom(&self, n: i64, k: u64) -> Self::Elem;

    /// Structure constants of `binom(X, r) · binom(X, s)`, zero entries omitted.
    fn basis_product(&self, r: u32, s: u32) -> Vec<(u32, Self::Elem)>;

    fn add_assign(&self, x: &mut Self::Elem, y: &Self::Elem) {
        *x = self.add(x, y);
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn characteristic(&self) -> Option<u64> {
        match self.tag() {
            RingTag::Integers => None,
            RingTag::PrimeField(p) => Some(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl CoefficientRing for Integers {
    type Elem = BigInt;

    fn tag(&self) -> RingTag {
        RingTag::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x + y
    }
    fn add_assign(&self, x: &mut BigInt, y: &BigInt) {
        *x += y;
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        -x
    }
    fn mul(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * y
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn to_bigint(&self, x: &BigInt) -> BigInt {
        x.clone()
    }
    fn binom(&self, n: i64, k: u64) -> BigInt {
        arith::binom(n, k)
    }
    fn basis_product(&self, r: u32, s: u32) -> Vec<(u32, BigInt)> {
        arith::torus_basis_product(r as u64, s as u64)
            .into_iter()
            .map(|(t, c)| (t as u32, c))
            .collect()
    }
}

/// The prime field `F_p`.
///
/// Products of basis binomials are computed digit by digit in base `p`: by
/// Lucas, `binom(X, r) ≡ Π_k binom(x_k, r_k)`, and the single-digit products
/// never reach index `p`, so the structure constants factor over digits.
#[derive(Clone)]
pub struct PrimeField {
    p: u64,
    // digit_products[r * p + s] = nonzero (t, coef) with t < p
    digit_products: Arc<Vec<Vec<(u32, u64)>>>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        arith::check_prime(p)?;
        // Digit tables are only materialized for small characteristics.
        let table = if p <= 64 {
            let mut table = Vec::with_capacity((p * p) as usize);
            for r in 0..p {
                for s in 0..p {
                    table.push(digit_product(r, s, p));
                }
            }
            table
        } else {
            Vec::new()
        };
        Ok(Self {
            p,
            digit_products: Arc::new(table),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn digit_entry(&self, r: u64, s: u64) -> std::borrow::Cow<'_, [(u32, u64)]> {
        if self.digit_products.is_empty() {
            std::borrow::Cow::Owned(digit_product(r, s, self.p))
        } else {
            std::borrow::Cow::Borrowed(&self.digit_products[(r * self.p + s) as usize])
        }
    }
}

fn digit_product(r: u64, s: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::new();
    for i in 0..=r.min(s) {
        let t = r + s - i;
        if t >= p {
            continue;
        }
        let c = small_binom_mod(t, s, p) * small_binom_mod(s, i, p) % p;
        if c != 0 {
            out.push((t as u32, c));
        }
    }
    out.sort_unstable();
    out
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeField({})", self.p)
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl CoefficientRing for PrimeField {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, x: &u64) -> u64 {
        if *x == 0 {
            0
        } else {
            self.p - x
        }
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        x * y % self.p
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += p;
        }
        r.to_u64().expect("residue fits in u64")
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.residue(n)
    }
    fn to_bigint(&self, x: &u64) -> BigInt {
        BigInt::from(*x)
    }
    fn binom(&self, n: i64, k: u64) -> u64 {
        lucas(n, k, self.p)
    }
    fn basis_product(&self, r: u32, s: u32) -> Vec<(u32, u64)> {
        let p = self.p;
        let mut acc: Vec<(u32, u64)> = vec![(0, 1)];
        let (mut r, mut s, mut place) = (r as u64, s as u64, 1u64);
        while r > 0 || s > 0 {
            let entry = self.digit_entry(r % p, s % p);
            if entry.is_empty() {
                return Vec::new();
            }
            if entry.len() == 1 && entry[0].1 == 1 {
                let shift = entry[0].0 as u64 * place;
                for term in acc.iter_mut() {
                    term.0 += shift as u32;
                }
            } else {
                let mut next = Vec::with_capacity(acc.len() * entry.len());
                for &(t0, c0) in &acc {
                    for &(t1, c1) in entry.iter() {
                        next.push((t0 + (t1 as u64 * place) as u32, c0 * c1 % p));
                    }
                }
                acc = next;
            }
            r /= p;
            s /= p;
            place *= p;
        }
        acc.sort_unstable();
        acc
    }
}
