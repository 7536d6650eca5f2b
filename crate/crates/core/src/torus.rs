//! The commutative algebra `Dist(T)` in the basis `binom(H, b) = Π_i binom(H_i, b_i)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{AlgebraError, FormatError};
use crate::report::VerificationReport;
use crate::ring::{CoefficientRing, PrimeField, RingTag};

/// A multi-index `b ∈ ℕ^ℓ`.
pub type MultiIndex = SmallVec<[u32; 4]>;

/// A finitely supported combination `Σ coef · binom(H, b)`.
#[derive(Clone, PartialEq)]
pub struct TorusElement<R: CoefficientRing> {
    ring: R,
    rank: usize,
    terms: BTreeMap<MultiIndex, R::Elem>,
}

/// Coefficients of one coordinate's factor, `Σ_k coef_k binom(H_i, k)`.
pub(crate) type Factor<E> = Vec<(u32, E)>;

impl<R: CoefficientRing> TorusElement<R> {
    pub fn zero(ring: &R, rank: usize) -> Self {
        Self {
            ring: ring.clone(),
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &R, rank: usize) -> Self {
        Self::monomial(ring, &vec![0; rank])
    }

    /// `binom(H, b)`.
    pub fn monomial(ring: &R, b: &[u32]) -> Self {
        Self::from_terms(ring, b.len(), [(MultiIndex::from_slice(b), ring.one())])
    }

    /// `binom(H_i, k)` in rank `rank`.
    pub fn binom_h(ring: &R, rank: usize, i: usize, k: u32) -> Self {
        let mut b = vec![0; rank];
        b[i] = k;
        Self::monomial(ring, &b)
    }

    pub fn constant(ring: &R, rank: usize, c: R::Elem) -> Self {
        Self::from_terms(ring, rank, [(MultiIndex::from_elem(0, rank), c)])
    }

    /// Builds an element, summing repeated indices and dropping zeros.
    pub fn from_terms(
        ring: &R,
        rank: usize,
        terms: impl IntoIterator<Item = (MultiIndex, R::Elem)>,
    ) -> Self {
        let mut map: BTreeMap<MultiIndex, R::Elem> = BTreeMap::new();
        for (b, c) in terms {
            assert_eq!(b.len(), rank, "multi-index length must equal the rank");
            accumulate(ring, &mut map, b, &c);
        }
        map.retain(|_, c| !ring.is_zero(c));
        Self {
            ring: ring.clone(),
            rank,
            terms: map,
        }
    }

    fn from_hash(ring: &R, rank: usize, acc: HashMap<MultiIndex, R::Elem>) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Self {
            ring: ring.clone(),
            rank,
            terms,
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, R::Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &[u32]) -> R::Elem {
        self.terms.get(b).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Largest multi-index entry, 0 for the zero element.
    pub fn max_index(&self) -> u32 {
        self.terms.keys().flat_map(|b| b.iter().copied()).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.rank != other.rank {
            return Err(AlgebraError::RankMismatch(self.rank, other.rank));
        }
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch(
                self.ring.tag().to_string(),
                other.ring.tag().to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            accumulate(&self.ring, &mut terms, b.clone(), c);
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        Ok(Self {
            ring: self.ring.clone(),
            rank: self.rank,
            terms,
        })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_terms(
            &self.ring,
            self.rank,
            self.terms.iter().map(|(b, v)| (b.clone(), self.ring.mul(v, c))),
        )
    }

    /// The product, computed coordinatewise from the basis structure constants.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let ring = &self.ring;
        let mut table: HashMap<(u32, u32), Factor<R::Elem>> = HashMap::new();
        let mut acc: HashMap<MultiIndex, R::Elem> = HashMap::new();
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let coef = ring.mul(c1, c2);
                let mut partial: Vec<(MultiIndex, R::Elem)> = vec![(MultiIndex::new(), coef)];
                for i in 0..self.rank {
                    let key = (b1[i], b2[i]);
                    let factor = table
                        .entry(key)
                        .or_insert_with(|| ring.basis_product(key.0, key.1));
                    partial = extend_by_factor(ring, partial, factor);
                    if partial.is_empty() {
                        break;
                    }
                }
                for (b, c) in partial {
                    accumulate_hash(ring, &mut acc, b, &c);
                }
            }
        }
        Ok(Self::from_hash(ring, self.rank, acc))
    }

    /// Evaluation at `H = h`: `binom(H, b) ↦ Π binom(h_i, b_i)`.
    pub fn eval(&self, h: &[i64]) -> R::Elem {
        let mut total = self.ring.zero();
        for (b, c) in &self.terms {
            let mut v = c.clone();
            for (&bi, &hi) in b.iter().zip(h) {
                v = self.ring.mul(&v, &self.ring.binom(hi, bi as u64));
                if self.ring.is_zero(&v) {
                    break;
                }
            }
            self.ring.add_assign(&mut total, &v);
        }
        total
    }

    /// Substitution `H_i ↦ H_i + m_i`.
    pub fn shift(&self, m: &[i64]) -> Self {
        assert_eq!(m.len(), self.rank);
        if m.iter().all(|&x| x == 0) {
            return self.clone();
        }
        let ring = &self.ring;
        let mut table: HashMap<(usize, u32), Factor<R::Elem>> = HashMap::new();
        let mut acc: HashMap<MultiIndex, R::Elem> = HashMap::new();
        for (b, c) in &self.terms {
            let mut partial: Vec<(MultiIndex, R::Elem)> = vec![(MultiIndex::new(), c.clone())];
            for i in 0..self.rank {
                let factor = table
                    .entry((i, b[i]))
                    .or_insert_with(|| vandermonde_factor(ring, m[i], b[i]));
                partial = extend_by_factor(ring, partial, factor);
            }
            for (b, c) in partial {
                accumulate_hash(ring, &mut acc, b, &c);
            }
        }
        Self::from_hash(ring, self.rank, acc)
    }

    /// `binom(Σ_i c_i H_i + m, r)` expanded into the basis.
    pub fn lincomb_binom(ring: &R, c: &[i64], m: i64, r: u32) -> Self {
        let rank = c.len();
        // partial sums keyed by (degree used so far, index prefix)
        let mut layer: HashMap<(u32, MultiIndex), R::Elem> = HashMap::new();
        for j0 in 0..=r {
            let v = ring.binom(m, j0 as u64);
            if !ring.is_zero(&v) {
                layer.insert((r - j0, MultiIndex::new()), v);
            }
        }
        let mut scales: HashMap<(i64, u32), Factor<R::Elem>> = HashMap::new();
        for (i, &ci) in c.iter().enumerate() {
            let last = i + 1 == rank;
            let mut next: HashMap<(u32, MultiIndex), R::Elem> = HashMap::new();
            for ((used, prefix), coef) in layer {
                let choices = if last { used..=used } else { 0..=used };
                for j in choices {
                    let factor = scales
                        .entry((ci, j))
                        .or_insert_with(|| mahler_factor(ring, ci, j));
                    for (k, v) in factor.iter() {
                        let mut idx = prefix.clone();
                        idx.push(*k);
                        let key = (used - j, idx);
                        let add = ring.mul(&coef, v);
                        match next.get_mut(&key) {
                            Some(e) => ring.add_assign(e, &add),
                            None => {
                                next.insert(key, add);
                            }
                        }
                    }
                }
            }
            layer = next;
        }
        if rank == 0 {
            let total = layer
                .into_iter()
                .filter(|((used, _), _)| *used == 0)
                .fold(ring.zero(), |acc, (_, v)| ring.add(&acc, &v));
            return Self::from_terms(ring, 0, [(MultiIndex::new(), total)]);
        }
        Self::from_terms(ring, rank, layer.into_iter().map(|((_, b), v)| (b, v)))
    }

    /// `Π_i f_i(H_i)` from one factor per coordinate.
    pub(crate) fn tensor(ring: &R, factors: &[Factor<R::Elem>]) -> Self {
        let mut partial: Vec<(MultiIndex, R::Elem)> = vec![(MultiIndex::new(), ring.one())];
        for f in factors {
            partial = extend_by_factor(ring, partial, f);
        }
        Self::from_terms(ring, factors.len(), partial)
    }

    /// Changes the coefficient ring coefficientwise.
    pub fn map_ring<S: CoefficientRing>(&self, target: &S) -> TorusElement<S> {
        TorusElement::from_terms(
            target,
            self.rank,
            self.terms
                .iter()
                .map(|(b, c)| (b.clone(), target.from_bigint(&self.ring.to_bigint(c)))),
        )
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(TorusJson {
            ring: self.ring.tag(),
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| TorusTermJson {
                    b: b.to_vec(),
                    coef: self.ring.to_bigint(c).to_string(),
                })
                .collect(),
        })
        .expect("torus element serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("torus element serializes")
    }

    /// Parses an element over `ring`; the serialized ring tag must match.
    pub fn from_json(ring: &R, text: &str) -> Result<Self, FormatError> {
        let raw: TorusJson = serde_json::from_str(text)?;
        if raw.ring != ring.tag() {
            return Err(FormatError::Schema(format!(
                "element is over {}, expected {}",
                raw.ring,
                ring.tag()
            )));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.b.len() != raw.rank {
                return Err(FormatError::Schema(format!(
                    "multi-index {:?} has wrong length for rank {}",
                    t.b, raw.rank
                )));
            }
            let c: num_bigint::BigInt = t
                .coef
                .parse()
                .map_err(|_| FormatError::Schema(format!("bad coefficient {:?}", t.coef)))?;
            terms.push((MultiIndex::from_vec(t.b), ring.from_bigint(&c)));
        }
        Ok(Self::from_terms(ring, raw.rank, terms))
    }
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    ring: RingTag,
    rank: usize,
    terms: Vec<TorusTermJson>,
}

#[derive(Serialize, Deserialize)]
struct TorusTermJson {
    b: Vec<u32>,
    coef: String,
}

pub(crate) fn accumulate<R: CoefficientRing>(
    ring: &R,
    map: &mut BTreeMap<MultiIndex, R::Elem>,
    b: MultiIndex,
    c: &R::Elem,
) {
    match map.get_mut(&b) {
        Some(e) => ring.add_assign(e, c),
        None => {
            map.insert(b, c.clone());
        }
    }
}

pub(crate) fn accumulate_hash<R: CoefficientRing>(
    ring: &R,
    map: &mut HashMap<MultiIndex, R::Elem>,
    b: MultiIndex,
    c: &R::Elem,
) {
    match map.get_mut(&b) {
        Some(e) => ring.add_assign(e, c),
        None => {
            map.insert(b, c.clone());
        }
    }
}

fn extend_by_factor<R: CoefficientRing>(
    ring: &R,
    partial: Vec<(MultiIndex, R::Elem)>,
    factor: &Factor<R::Elem>,
) -> Vec<(MultiIndex, R::Elem)> {
    if let [(k, v)] = factor.as_slice() {
        let mut partial = partial;
        let unit = *v == ring.one();
        partial.retain_mut(|(b, c)| {
            b.push(*k);
            if !unit {
                *c = ring.mul(c, v);
            }
            !ring.is_zero(c)
        });
        return partial;
    }
    let mut out = Vec::with_capacity(partial.len() * factor.len());
    for (b, c) in &partial {
        for (k, v) in factor {
            let prod = ring.mul(c, v);
            if !ring.is_zero(&prod) {
                let mut idx = b.clone();
                idx.push(*k);
                out.push((idx, prod));
            }
        }
    }
    out
}

/// `binom(X + m, b) = Σ_k binom(m, b - k) binom(X, k)`.
pub(crate) fn vandermonde_factor<R: CoefficientRing>(ring: &R, m: i64, b: u32) -> Factor<R::Elem> {
    if m == 0 {
        return vec![(b, ring.one())];
    }
    (0..=b)
        .filter_map(|k| {
            let v = ring.binom(m, (b - k) as u64);
            (!ring.is_zero(&v)).then_some((k, v))
        })
        .collect()
}

/// `binom(cX, j)` in the basis, by forward differences of its values at
/// `X = 0..=j`.
pub(crate) fn mahler_factor<R: CoefficientRing>(ring: &R, c: i64, j: u32) -> Factor<R::Elem> {
    if c == 1 {
        return vec![(j, ring.one())];
    }
    let mut diffs: Vec<R::Elem> = (0..=j as i64).map(|x| ring.binom(c * x, j as u64)).collect();
    let mut out = Vec::new();
    for k in 0..=j {
        if !ring.is_zero(&diffs[0]) {
            out.push((k, diffs[0].clone()));
        }
        for i in 0..diffs.len() - 1 {
            diffs[i] = ring.sub(&diffs[i + 1], &diffs[i]);
        }
        diffs.pop();
    }
    out
}

impl TorusElement<PrimeField> {
    /// `μ₀ = Π_i binom(H_i - 1, p - 1)`.
    pub fn mu0(field: &PrimeField, rank: usize) -> Self {
        let factor = vandermonde_factor(field, -1, (field.p() - 1) as u32);
        Self::tensor(field, &vec![factor; rank])
    }

    /// `binom(H, b) ↦ binom(H, p b)`, before multiplying by `μ₀`.
    pub fn dilate(&self) -> Self {
        let p = self.ring.p() as u32;
        Self {
            ring: self.ring.clone(),
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.iter().map(|&x| x * p).collect(), *c))
                .collect(),
        }
    }

    /// The splitting on the torus: `binom(H, b) ↦ binom(H, p b) μ₀`.
    pub fn phi0(&self) -> Self {
        &self.dilate() * &Self::mu0(&self.ring, self.rank)
    }

    /// `Dist(F)` on the torus: `binom(H, b) ↦ binom(H, b / p)` when `p | b`, else 0.
    pub fn frobenius_torus(&self) -> Self {
        let p = self.ring.p() as u32;
        Self {
            ring: self.ring.clone(),
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.iter().all(|&x| x % p == 0))
                .map(|(b, c)| (b.iter().map(|&x| x / p).collect(), *c))
                .collect(),
        }
    }
}

/// Which identity of the torus lemma to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma11Part {
    /// `binom(a H_i, b) μ₀ = 0` unless `p | b`.
    I,
    /// `φ⁰ binom(a H_i, b) = binom(a H_i, p b) μ₀`.
    Ii,
    /// `φ⁰ binom(H_i + c, b) = binom(H_i + p c, p b) μ₀`.
    Iii,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma11Params {
    pub p: u64,
    pub rank: usize,
    pub a_range: (i64, i64),
    pub c_range: (i64, i64),
    pub b_max: u32,
    pub parts: Vec<Lemma11Part>,
}

/// Exhaustive sweep of the three torus identities. Each case is an exact
/// equality of canonical elements.
///
/// Both sides' Mahler coefficients are integer-valued polynomials in `a`
/// (and `c`) of degree at most `p · b_max`, so a window of `d + 1`
/// consecutive integers certifies every `a` once `p · b ≤ d`; beyond that the
/// window is a finite sample.
pub fn verify_lemma_1_1(params: &Lemma11Params) -> Result<VerificationReport, AlgebraError> {
    let field = PrimeField::new(params.p)?;
    let mut report = VerificationReport::new("verify.lemma11")
        .param("p", params.p)
        .param("rank", params.rank)
        .param("a_range", params.a_range)
        .param("c_range", params.c_range)
        .param("b_max", params.b_max)
        .param("parts", &params.parts);
    let p = params.p as u32;
    let rank = params.rank;
    let mu0 = TorusElement::mu0(&field, rank);
    let unit = |i: usize, scale: i64| -> Vec<i64> {
        let mut v = vec![0; rank];
        v[i] = scale;
        v
    };

    #[derive(Clone, Copy)]
    enum Case {
        I(usize, i64, u32),
        Ii(usize, i64, u32),
        Iii(usize, i64, u32),
    }
    let mut cases = Vec::new();
    for &part in &params.parts {
        for i in 0..rank {
            for b in 0..=params.b_max {
                match part {
                    Lemma11Part::I => {
                        if b % p != 0 {
                            cases.extend((params.a_range.0..=params.a_range.1).map(|a| Case::I(i, a, b)));
                        }
                    }
                    Lemma11Part::Ii => {
                        cases.extend((params.a_range.0..=params.a_range.1).map(|a| Case::Ii(i, a, b)));
                    }
                    Lemma11Part::Iii => {
                        cases.extend((params.c_range.0..=params.c_range.1).map(|c| Case::Iii(i, c, b)));
                    }
                }
            }
        }
    }
    let outcomes: Vec<Option<serde_json::Value>> = cases
        .par_iter()
        .map(|&case| match case {
            Case::I(i, a, b) => {
                let lhs = &TorusElement::lincomb_binom(&field, &unit(i, a), 0, b) * &mu0;
                (!lhs.is_zero()).then(|| {
                    serde_json::json!({"part": "i", "i": i, "a": a, "b": b, "lhs_terms": lhs.len()})
                })
            }
            Case::Ii(i, a, b) => {
                let lhs = TorusElement::lincomb_binom(&field, &unit(i, a), 0, b).phi0();
                let rhs = &TorusElement::lincomb_binom(&field, &unit(i, a), 0, p * b) * &mu0;
                (lhs != rhs).then(|| serde_json::json!({"part": "ii", "i": i, "a": a, "b": b}))
            }
            Case::Iii(i, c, b) => {
                let lhs = TorusElement::lincomb_binom(&field, &unit(i, 1), c, b).phi0();
                let rhs = &TorusElement::lincomb_binom(&field, &unit(i, 1), p as i64 * c, p * b) * &mu0;
                (lhs != rhs).then(|| serde_json::json!({"part": "iii", "i": i, "c": c, "b": b}))
            }
        })
        .collect();
    report.trials(outcomes.len() as u64);
    for f in outcomes.into_iter().flatten() {
        report.fail(f);
    }
    Ok(report.finish())
}

impl<R: CoefficientRing> fmt::Debug for TorusElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement[{}; ", self.ring.tag())?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (n, (b, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·C{:?}", self.ring.to_bigint(c), b.as_slice())?;
        }
        write!(f, "]")
    }
}

impl<R: CoefficientRing> Mul for &TorusElement<R> {
    type Output = TorusElement<R>;
    fn mul(self, rhs: Self) -> TorusElement<R> {
        self.checked_mul(rhs).expect("compatible torus elements")
    }
}

impl<R: CoefficientRing> Add for &TorusElement<R> {
    type Output = TorusElement<R>;
    fn add(self, rhs: Self) -> TorusElement<R> {
        self.checked_add(rhs).expect("compatible torus elements")
    }
}

impl<R: CoefficientRing> Neg for &TorusElement<R> {
    type Output = TorusElement<R>;
    fn neg(self) -> TorusElement<R> {
        self.scale(&self.ring.neg(&self.ring.one()))
    }
}

impl<R: CoefficientRing> Sub for &TorusElement<R> {
    type Output = TorusElement<R>;
    fn sub(self, rhs: Self) -> TorusElement<R> {
        self + &(-rhs)
    }
}
