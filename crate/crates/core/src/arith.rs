//! Exact generalized binomial coefficients and the three expansions that all
//! torus computations are built from.
//!
//! Every expansion here is a finite map `k ↦ coefficient` expressing some
//! integer-valued polynomial in the basis `binom(X, k)`. Zero coefficients are
//! never stored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Coefficients of an integer-valued polynomial in the basis `binom(X, k)`.
pub type Expansion = BTreeMap<u64, BigInt>;

/// `n (n-1) ... (n-k+1) / k!` for an arbitrary-precision upper entry.
pub fn binom_big(n: &BigInt, k: u64) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if n.is_negative() {
        // binom(n, k) = (-1)^k binom(k - n - 1, k)
        let reflected = binom_big(&(BigInt::from(k) - n - 1), k);
        return if k.is_multiple_of(2) { reflected } else { -reflected };
    }
    if *n < BigInt::from(k) {
        return BigInt::zero();
    }
    // Use the smaller of k and n-k.
    let k = match (n - BigInt::from(k)).to_u64() {
        Some(rest) if rest < k => rest,
        _ => k,
    };
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient, exact for every integer `n`.
pub fn binom(n: i64, k: u64) -> BigInt {
    binom_big(&BigInt::from(n), k)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest prime accepted anywhere a characteristic is required. Residues are
/// multiplied in `u64`, so `p` must fit in 32 bits.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn check_prime(p: u64) -> Result<(), ArithError> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(())
}

/// `binom(n, k) mod p`, by Lucas digits for `n >= 0` and by reflection for
/// `n < 0`.
pub fn binom_mod_p(n: i64, k: u64, p: u64) -> Result<u64, ArithError> {
    check_prime(p)?;
    Ok(lucas(n, k, p))
}

/// Unchecked variant of [`binom_mod_p`]; `p` must already be a prime `<= MAX_PRIME`.
pub(crate) fn lucas(n: i64, k: u64, p: u64) -> u64 {
    if n >= 0 {
        lucas_nonneg(n as u128, k as u128, p)
    } else {
        let upper = k as u128 + n.unsigned_abs() as u128 - 1;
        let v = lucas_nonneg(upper, k as u128, p);
        if k % 2 == 1 && v != 0 {
            p - v
        } else {
            v
        }
    }
}

fn lucas_nonneg(mut n: u128, mut k: u128, p: u64) -> u64 {
    let pp = p as u128;
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = ((n % pp) as u64, (k % pp) as u64);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom_mod(nd, kd, p) % p;
        n /= pp;
        k /= pp;
    }
    acc
}

/// `binom(n, k) mod p` for `0 <= k <= n < p`.
pub(crate) fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

pub(crate) fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn insert_nonzero(map: &mut Expansion, k: u64, v: BigInt) {
    if !v.is_zero() {
        map.insert(k, v);
    }
}

/// `binom(X + m, r) = Σ_k binom(m, r - k) binom(X, k)`.
pub fn vandermonde_shift(m: i64, r: u64) -> Expansion {
    let mut out = Expansion::new();
    for k in 0..=r {
        insert_nonzero(&mut out, k, binom(m, r - k));
    }
    out
}

/// Mahler coefficients of `X ↦ binom(cX, j)`: `d_k = Δ^k f(0)`.
pub fn mahler_scale(c: i64, j: u64) -> Expansion {
    let mut diffs: Vec<BigInt> = (0..=j)
        .map(|i| binom_big(&(BigInt::from(c) * BigInt::from(i)), j))
        .collect();
    let mut out = Expansion::new();
    for k in 0..=j as usize {
        insert_nonzero(&mut out, k as u64, diffs[0].clone());
        for i in 0..diffs.len() - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
    }
    out
}

/// Structure constants of `binom(X, r) · binom(X, s)`.
pub fn torus_basis_product(r: u64, s: u64) -> Expansion {
    let mut out = Expansion::new();
    for i in 0..=r.min(s) {
        let t = r + s - i;
        insert_nonzero(&mut out, t, binom(t as i64, s) * binom(s as i64, i));
    }
    out
}

/// Evaluates `Σ_k coef_k binom(x, k)`.
pub fn eval_expansion(exp: &Expansion, x: i64) -> BigInt {
    exp.iter().map(|(&k, c)| c * binom(x, k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(u64, i64)]) -> Expansion {
        pairs.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(-1, 2), BigInt::from(1));
        assert_eq!(binom(-3, 3), BigInt::from(-10));
        assert_eq!(binom(7, 0), BigInt::from(1));
        assert_eq!(binom(-7, 0), BigInt::from(1));
        assert_eq!(binom(3, 5), BigInt::zero());
    }

    #[test]
    fn binom_matches_falling_factorial() {
        for n in -20i64..=20 {
            for k in 0..=12u64 {
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for i in 0..k {
                    num *= BigInt::from(n - i as i64);
                    den *= BigInt::from(i + 1);
                }
                assert_eq!(binom(n, k), num / den, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pascal_rule_including_negative_upper() {
        for n in -30i64..=30 {
            for k in 1..=15u64 {
                assert_eq!(binom(n, k), binom(n - 1, k) + binom(n - 1, k - 1));
            }
        }
    }

    #[test]
    fn binom_mod_p_examples() {
        for p in [2, 3, 5] {
            assert_eq!(binom_mod_p(-1, p - 1, p).unwrap(), 1);
        }
        assert_eq!(binom_mod_p(6, 3, 3).unwrap(), 2);
        assert_eq!(binom_mod_p(4, 2, 2).unwrap(), 0);
        assert_eq!(binom_mod_p(4, 2, 4), Err(ArithError::NotPrime(4)));
        assert_eq!(binom_mod_p(4, 2, 1), Err(ArithError::NotPrime(1)));
    }

    #[test]
    fn lucas_agrees_with_exact_reduction() {
        for p in [2u64, 3, 5, 7] {
            let pb = BigInt::from(p);
            for n in -60i64..=60 {
                for k in 0..=60u64 {
                    let exact = binom(n, k);
                    let reduced = ((exact % &pb) + &pb) % &pb;
                    assert_eq!(
                        BigInt::from(binom_mod_p(n, k, p).unwrap()),
                        reduced,
                        "n={n} k={k} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde_shift(1, 2), map(&[(2, 1), (1, 1)]));
        assert_eq!(vandermonde_shift(-1, 2), map(&[(2, 1), (1, -1), (0, 1)]));
        assert_eq!(vandermonde_shift(0, 3), map(&[(3, 1)]));
    }

    #[test]
    fn mahler_examples() {
        assert_eq!(mahler_scale(2, 2), map(&[(1, 1), (2, 4)]));
        assert_eq!(mahler_scale(1, 5), map(&[(5, 1)]));
        assert_eq!(mahler_scale(-1, 1), map(&[(1, -1)]));
        assert_eq!(mahler_scale(0, 0), map(&[(0, 1)]));
        assert_eq!(mahler_scale(0, 3), Expansion::new());
    }

    #[test]
    fn basis_product_examples() {
        assert_eq!(torus_basis_product(1, 1), map(&[(1, 1), (2, 2)]));
        for r in 0..6 {
            assert_eq!(torus_basis_product(r, 0), map(&[(r, 1)]));
        }
        // The top coefficient of binom(X, pb')binom(X, b'') is 1 mod p.
        for p in [2u64, 3, 5] {
            for b1 in 1..4 {
                for b2 in 1..p {
                    let prod = torus_basis_product(p * b1, b2);
                    let top = &prod[&(p * b1 + b2)];
                    assert_eq!(top % BigInt::from(p), BigInt::one());
                }
            }
        }
    }

    // Independent pointwise oracle: both sides evaluated at integers.
    #[test]
    fn expansions_agree_pointwise() {
        for r in 0..8u64 {
            for s in 0..8u64 {
                let lim = (r + s + 3) as i64;
                let prod = torus_basis_product(r, s);
                for x in -lim..=lim {
                    assert_eq!(eval_expansion(&prod, x), binom(x, r) * binom(x, s));
                }
            }
            for m in -6i64..=6 {
                let shift = vandermonde_shift(m, r);
                for x in -12i64..=12 {
                    assert_eq!(eval_expansion(&shift, x), binom(x + m, r));
                }
            }
            for c in -4i64..=4 {
                let scaled = mahler_scale(c, r);
                assert!(scaled.keys().all(|&k| k <= r));
                for x in -12i64..=12 {
                    assert_eq!(eval_expansion(&scaled, x), binom(c * x, r));
                }
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_prime(MAX_PRIME).is_ok());
    }
}
