use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::hyperalgebra::AlgebraContext;
use crate::error::ModuleError;
use crate::report::VerificationReport;
use crate::ring::CoefficientRing;

/// Attached to every decomposition: agreement at character level is a
/// necessary condition only.
pub const DECOMPOSITION_LIMITATION: &str = "character-level check: a negative or non-integral \
multiplicity refutes a good or tilting filtration, but nonnegative multiplicities do not certify one";

/// Finitely supported weight multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Character(BTreeMap<Vec<i64>, i64>);

impl Character {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_weights(weights: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut c = Self::zero();
        for w in weights {
            c.add_weight(w, 1);
        }
        c
    }

    pub fn add_weight(&mut self, w: Vec<i64>, n: i64) {
        if let Some(e) = self.0.get_mut(&w) {
            *e += n;
            if *e == 0 {
                self.0.remove(&w);
            }
        } else if n != 0 {
            self.0.insert(w, n);
        }
    }

    pub fn get(&self, w: &[i64]) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &i64)> {
        self.0.iter()
    }

    pub fn dim(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&n| n >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &n) in &other.0 {
            out.add_weight(w.clone(), n);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self(self.0.iter().map(|(w, n)| (w.clone(), n * k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Character of a tensor product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, &m) in &self.0 {
            for (v, &n) in &other.0 {
                out.add_weight(u.iter().zip(v).map(|(a, b)| a + b).collect(), m * n);
            }
        }
        out
    }

    /// Weights multiplied by `p`.
    pub fn twist(&self, p: i64) -> Self {
        Self(
            self.0
                .iter()
                .map(|(w, &n)| (w.iter().map(|x| x * p).collect(), n))
                .collect(),
        )
    }

    /// Keeps weights divisible by `p` and divides them.
    pub fn contract(&self, p: i64) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(w, _)| w.iter().all(|x| x % p == 0))
                .map(|(w, &n)| (w.iter().map(|x| x / p).collect(), n))
                .collect(),
        )
    }

    pub fn negate_weights(&self) -> Self {
        Self(
            self.0
                .iter()
                .map(|(w, &n)| (w.iter().map(|x| -x).collect(), n))
                .collect(),
        )
    }

    pub fn to_json_value(&self) -> Value {
        json!(self.0.iter().map(|(w, n)| json!([w, n])).collect::<Vec<_>>())
    }
}

/// `χ(λ)`: the weights `λ - iα`, `0 ≤ i ≤ ⟨λ, α∨⟩`.
pub fn weyl_character<R: CoefficientRing>(
    ctx: &AlgebraContext<R>,
    lambda: &[i64],
) -> Result<Character, ModuleError> {
    let n = ctx.pair_coroot(lambda);
    if n < 0 {
        return Err(ModuleError::NotDominant(lambda.to_vec()));
    }
    Ok(Character::from_weights((0..=n).map(|i| {
        lambda
            .iter()
            .zip(ctx.alpha())
            .map(|(l, a)| l - i * a)
            .collect()
    })))
}

fn sl2_weyl(n: i64) -> Character {
    Character::from_weights((0..=n).map(|i| vec![n - 2 * i]))
}

/// `ch T(m)` for `SL₂` in characteristic `p`, weights as `[k]`.
///
/// `T(m) = V(m)` below the Steinberg weight, `χ(m) + χ(2p-2-m)` between `p`
/// and `2p-2`, and `T(p-1+r) ⊗ T(m')^[1]` for `m = p-1+r+pm'`.
pub fn tilting_character(p: u64, m: i64) -> Character {
    let p = p as i64;
    if m < 0 {
        return Character::zero();
    }
    if m < p {
        return sl2_weyl(m);
    }
    let rest = m - (p - 1);
    let (r, m1) = (rest % p, rest / p);
    let low = if r == 0 {
        sl2_weyl(p - 1)
    } else {
        sl2_weyl(p - 1 + r).add(&sl2_weyl(p - 1 - r))
    };
    if m1 == 0 {
        low
    } else {
        low.mul(&tilting_character(p as u64, m1).twist(p))
    }
}

/// Structural checks on the tilting table for `m ≤ m_max`: `T(m) - χ(m)` is a
/// nonnegative combination of `χ(k)`, `k < m`, and `T(m)` is symmetric.
pub fn validate_tilting_table(p: u64, m_max: i64) -> VerificationReport {
    let mut report = VerificationReport::new("modules.tilting_table")
        .param("p", p)
        .param("m_max", m_max);
    for m in 0..=m_max {
        report.trial();
        let t = tilting_character(p, m);
        if t.negate_weights() != t {
            report.fail(json!({"m": m, "property": "symmetric"}));
        }
        report.trial();
        match peel_sl2(&t) {
            Some(terms) => {
                let top = terms.iter().map(|t| t.0).max();
                let ok = terms.iter().all(|&(k, c)| (k == m && c == 1) || (k < m && c > 0));
                if top != Some(m) || !ok {
                    report.fail(json!({"m": m, "property": "triangular", "weyl": terms}));
                }
            }
            None => report.fail(json!({"m": m, "property": "weyl_span"})),
        }
    }
    report.finish()
}

/// Peels `χ(k)` off the top weight; `None` if a negative top weight remains.
fn peel_sl2(ch: &Character) -> Option<Vec<(i64, i64)>> {
    let mut rest = ch.clone();
    let mut out = Vec::new();
    while let Some((w, &c)) = rest.0.iter().next_back() {
        let k = w[0];
        if k < 0 {
            return None;
        }
        rest = rest.sub(&sl2_weyl(k).scale(c));
        out.push((k, c));
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharBasis {
    Weyl,
    Tilting { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterDecomposition {
    pub basis: CharBasis,
    /// Highest weights and multiplicities, highest first.
    pub terms: Vec<(Vec<i64>, i64)>,
}

impl CharacterDecomposition {
    pub fn nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.1 >= 0)
    }

    pub fn to_json_value(&self) -> Value {
        let basis = match self.basis {
            CharBasis::Weyl => json!("weyl"),
            CharBasis::Tilting { p } => json!({"tilting": p}),
        };
        json!({
            "basis": basis,
            "terms": self.terms.iter().map(|(w, n)| json!([w, n])).collect::<Vec<_>>(),
            "nonnegative": self.nonnegative(),
            "note": DECOMPOSITION_LIMITATION,
        })
    }
}

/// Unique integer decomposition in a triangular basis, peeling the weight of
/// largest `⟨λ, α∨⟩` at each step. The tilting basis needs an `SL₂` context.
pub fn decompose_character<R: CoefficientRing>(
    ctx: &AlgebraContext<R>,
    ch: &Character,
    basis: CharBasis,
) -> Result<CharacterDecomposition, ModuleError> {
    if let CharBasis::Tilting { .. } = basis {
        if ctx.rank() != 1 || ctx.alpha() != [2] || ctx.coroot() != [1] {
            return Err(ModuleError::UnsupportedContext);
        }
    }
    let mut rest = ch.clone();
    let mut terms = Vec::new();
    while !rest.is_zero() {
        let (w, c) = rest
            .iter()
            .max_by_key(|(w, _)| (ctx.pair_coroot(w), (*w).clone()))
            .map(|(w, &c)| (w.clone(), c))
            .expect("nonzero character");
        if ctx.pair_coroot(&w) < 0 {
            return Err(ModuleError::NotInSpan(w));
        }
        let piece = match basis {
            CharBasis::Weyl => weyl_character(ctx, &w)?,
            CharBasis::Tilting { p } => tilting_character(p, w[0]),
        };
        rest = rest.sub(&piece.scale(c));
        terms.push((w, c));
    }
    Ok(CharacterDecomposition { basis, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ring::Integers;

    #[test]
    fn tilting_table_small_cases() {
        // p = 2: T(2) = χ(2) + χ(0), T(3) = St ⊗ T(1)^[1]
        assert_eq!(tilting_character(2, 2), sl2_weyl(2).add(&sl2_weyl(0)));
        let t3 = tilting_character(2, 3);
        assert_eq!(t3.dim(), 4);
        assert_eq!(t3, sl2_weyl(1).mul(&sl2_weyl(1).twist(2)));
        assert_eq!(tilting_character(3, 2), sl2_weyl(2));
        assert_eq!(tilting_character(3, 4).dim(), 6);
        for p in [2, 3, 5] {
            let r = validate_tilting_table(p, 40);
            assert!(r.pass, "{:?}", r.failures);
        }
    }

    #[test]
    fn decompositions() {
        let c = AlgebraContext::new(&corpus::sl2(), Integers).unwrap();
        for n in 0..8 {
            let d = decompose_character(&c, &sl2_weyl(n), CharBasis::Weyl).unwrap();
            assert_eq!(d.terms, vec![(vec![n], 1)]);
        }
        let ch = sl2_weyl(1).mul(&sl2_weyl(1));
        let d = decompose_character(&c, &ch, CharBasis::Weyl).unwrap();
        assert_eq!(d.terms, vec![(vec![2], 1), (vec![0], 1)]);
        let d = decompose_character(&c, &ch, CharBasis::Tilting { p: 2 }).unwrap();
        assert_eq!(d.terms, vec![(vec![2], 1)]);
        let bad = Character::from_weights([vec![-1]]);
        assert!(matches!(
            decompose_character(&c, &bad, CharBasis::Weyl),
            Err(ModuleError::NotInSpan(_))
        ));
        let g = AlgebraContext::new(&corpus::gl2(), Integers).unwrap();
        let chg = weyl_character(&g, &[2, 0]).unwrap();
        assert!(decompose_character(&g, &chg, CharBasis::Tilting { p: 2 }).is_err());
        assert_eq!(
            decompose_character(&g, &chg, CharBasis::Weyl).unwrap().terms,
            vec![(vec![2, 0], 1)]
        );
    }

    #[test]
    fn character_arithmetic() {
        let a = sl2_weyl(2);
        assert_eq!(a.sub(&a), Character::zero());
        assert_eq!(a.twist(3).contract(3), a);
        assert_eq!(a.contract(2), Character::from_weights([vec![1], vec![0], vec![-1]]));
        assert_eq!(a.to_json_value(), json!([[[-2], 1], [[0], 1], [[2], 1]]));
    }
}
