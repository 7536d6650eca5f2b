//! The hyperalgebra of a reductive group of semisimple rank one, in the PBW
//! basis `F^(a) binom(H, b) E^(c)`.
//!
//! Torus parts move past root vectors by
//!
//! ```text
//! f(H) F^(k) = F^(k) f(H - kα),    E^(k) f(H) = f(H - kα) E^(k),
//! ```
//!
//! where `H - kα` substitutes `H_i ↦ H_i - k α(H_i)`. These follow from
//! `[H, F] = -α(H) F` and `[H, E] = α(H) E`, and they are the signs under
//! which the `E`/`F` straightening rule is associative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, DatumError, FormatError};
use crate::lattice::dot;
use crate::ring::{CoefficientRing, PrimeField, RingTag};
use crate::root_datum::RootDatum;
use crate::torus::{MultiIndex, TorusElement};

/// One simple root `α` of a root datum together with the coefficient ring.
pub struct AlgebraContext<R: CoefficientRing> {
    name: String,
    datum: RootDatum,
    root_index: usize,
    alpha: Vec<i64>,
    coroot: Vec<i64>,
    ring: R,
    // binom(H_α + m, r) keyed by (m, r)
    h_alpha_cache: RwLock<HashMap<(i64, u32), Arc<TorusElement<R>>>>,
}

impl<R: CoefficientRing> AlgebraContext<R> {
    /// Context of a datum with exactly one positive root.
    pub fn new(datum: &RootDatum, ring: R) -> Result<Arc<Self>, AlgebraError> {
        let positive = datum.positive_indices();
        if positive.len() != 1 || datum.semisimple_rank() != 1 {
            return Err(DatumError::NotRankOne(positive.len()).into());
        }
        Self::build(datum, datum.simple_indices[0], datum.name.clone(), ring)
    }

    /// The slice of a general datum at its `k`-th simple root: the full torus
    /// together with `E_α`, `F_α` for that one root.
    pub fn simple_root_slice(datum: &RootDatum, k: usize, ring: R) -> Result<Arc<Self>, AlgebraError> {
        let &idx = datum
            .simple_indices
            .get(k)
            .ok_or(DatumError::NoSuchSimpleRoot(k))?;
        Self::build(datum, idx, format!("{}[α{}]", datum.name, k + 1), ring)
    }

    fn build(datum: &RootDatum, idx: usize, name: String, ring: R) -> Result<Arc<Self>, AlgebraError> {
        datum.check_shape()?;
        let alpha = datum.roots[idx].clone();
        let coroot = datum.coroots[idx].clone();
        if dot(&alpha, &coroot) != 2 {
            return Err(DatumError::Invalid(format!("⟨α, α∨⟩ = {} for root #{idx}", dot(&alpha, &coroot))).into());
        }
        Ok(Arc::new(Self {
            name,
            datum: datum.clone(),
            root_index: idx,
            alpha,
            coroot,
            ring,
            h_alpha_cache: RwLock::new(HashMap::new()),
        }))
    }

    /// The same root data over another coefficient ring.
    pub fn with_ring<S: CoefficientRing>(&self, ring: S) -> Arc<AlgebraContext<S>> {
        Arc::new(AlgebraContext {
            name: self.name.clone(),
            datum: self.datum.clone(),
            root_index: self.root_index,
            alpha: self.alpha.clone(),
            coroot: self.coroot.clone(),
            ring,
            h_alpha_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    /// Torus rank `ℓ`.
    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    /// The values `α(H_i)`.
    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    /// The coefficients `c_i` of `H_α = Σ c_i H_i`.
    pub fn coroot(&self) -> &[i64] {
        &self.coroot
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// `⟨λ, α∨⟩`.
    pub fn pair_coroot(&self, weight: &[i64]) -> i64 {
        dot(weight, &self.coroot)
    }

    /// `binom(H_α + m, r)` in the torus basis.
    pub fn h_alpha_binom(&self, m: i64, r: u32) -> Arc<TorusElement<R>> {
        if let Some(x) = self.h_alpha_cache.read().expect("cache lock").get(&(m, r)) {
            return Arc::clone(x);
        }
        let x = Arc::new(TorusElement::lincomb_binom(&self.ring, &self.coroot, m, r));
        self.h_alpha_cache
            .write()
            .expect("cache lock")
            .entry((m, r))
            .or_insert(x)
            .clone()
    }

    /// `f(H) ↦ f(H + kα)`.
    pub fn shift_alpha(&self, x: &TorusElement<R>, k: i64) -> TorusElement<R> {
        if k == 0 {
            return x.clone();
        }
        let m: Vec<i64> = self.alpha.iter().map(|&a| a * k).collect();
        x.shift(&m)
    }

    fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.alpha == other.alpha && self.coroot == other.coroot && self.ring == other.ring)
    }
}

impl<R: CoefficientRing> fmt::Debug for AlgebraContext<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraContext")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("coroot", &self.coroot)
            .field("ring", &self.ring.tag())
            .finish()
    }
}

/// `Σ F^(a) T_{a,c} E^(c)`, with the torus parts grouped by `(a, c)`.
#[derive(Clone)]
pub struct PbwElement<R: CoefficientRing> {
    ctx: Arc<AlgebraContext<R>>,
    terms: BTreeMap<(u32, u32), TorusElement<R>>,
}

impl<R: CoefficientRing> PbwElement<R> {
    pub fn zero(ctx: &Arc<AlgebraContext<R>>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<AlgebraContext<R>>) -> Self {
        Self::from_torus(ctx, TorusElement::one(&ctx.ring, ctx.rank()))
    }

    /// `E^(n)`.
    pub fn e(ctx: &Arc<AlgebraContext<R>>, n: u32) -> Self {
        Self::from_part(ctx, 0, TorusElement::one(&ctx.ring, ctx.rank()), n)
    }

    /// `F^(n)`.
    pub fn f(ctx: &Arc<AlgebraContext<R>>, n: u32) -> Self {
        Self::from_part(ctx, n, TorusElement::one(&ctx.ring, ctx.rank()), 0)
    }

    pub fn from_torus(ctx: &Arc<AlgebraContext<R>>, t: TorusElement<R>) -> Self {
        Self::from_part(ctx, 0, t, 0)
    }

    /// `coef · F^(a) binom(H, b) E^(c)`.
    pub fn monomial(ctx: &Arc<AlgebraContext<R>>, a: u32, b: &[u32], c: u32, coef: R::Elem) -> Self {
        assert_eq!(b.len(), ctx.rank());
        Self::from_part(
            ctx,
            a,
            TorusElement::from_terms(&ctx.ring, ctx.rank(), [(MultiIndex::from_slice(b), coef)]),
            c,
        )
    }

    /// `F^(a) T E^(c)`.
    pub fn from_part(ctx: &Arc<AlgebraContext<R>>, a: u32, t: TorusElement<R>, c: u32) -> Self {
        assert_eq!(t.rank(), ctx.rank());
        let mut terms = BTreeMap::new();
        if !t.is_zero() {
            terms.insert((a, c), t);
        }
        Self {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<AlgebraContext<R>> {
        &self.ctx
    }

    /// Torus parts keyed by `(a, c)`.
    pub fn parts(&self) -> &BTreeMap<(u32, u32), TorusElement<R>> {
        &self.terms
    }

    /// Basis monomials `(a, b, c, coef)`, sorted by `(a, b, c)`.
    pub fn monomials(&self) -> Vec<(u32, MultiIndex, u32, R::Elem)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(&(a, c), t)| t.terms().iter().map(move |(b, v)| (a, b.clone(), c, v.clone())))
            .collect();
        out.sort_by(|x, y| (x.0, &x.1, x.2).cmp(&(y.0, &y.1, y.2)));
        out
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(TorusElement::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_context(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    fn insert_part(terms: &mut BTreeMap<(u32, u32), TorusElement<R>>, key: (u32, u32), t: TorusElement<R>) {
        if t.is_zero() {
            return;
        }
        match terms.remove(&key) {
            Some(old) => {
                let sum = &old + &t;
                if !sum.is_zero() {
                    terms.insert(key, sum);
                }
            }
            None => {
                terms.insert(key, t);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_context(other)?;
        let mut terms = self.terms.clone();
        for (&k, t) in &other.terms {
            Self::insert_part(&mut terms, k, t.clone());
        }
        Ok(Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&k, t)| (k, t.scale(c)))
            .filter(|(_, t)| !t.is_zero())
            .collect();
        Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Straightened product. For `x = F^(a) X E^(c)` and `y = F^(a') Y E^(c')`,
    ///
    /// ```text
    /// x y = Σ_r binom(a+a'-r, a) binom(c-r+c', c') F^(a+a'-r)
    ///       · X(H - (a'-r)α) binom(H_α + 2r - c - a', r) Y(H - (c-r)α)
    ///       · E^(c-r+c')
    /// ```
    ///
    /// computed as one shift of `X · Y(H + (a'-c)α) · binom(H_α + a' - c, r)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_context(other)?;
        let ctx = &self.ctx;
        let ring = &ctx.ring;
        let mut acc: BTreeMap<(u32, u32), TorusElement<R>> = BTreeMap::new();
        for (&(a, c), x) in &self.terms {
            for (&(a2, c2), y) in &other.terms {
                let d = a2 as i64 - c as i64;
                let base = x * &ctx.shift_alpha(y, d);
                for r in 0..=c.min(a2) {
                    let k1 = ring.binom((a + a2 - r) as i64, a as u64);
                    let k2 = ring.binom((c - r + c2) as i64, c2 as u64);
                    let k = ring.mul(&k1, &k2);
                    if ring.is_zero(&k) {
                        continue;
                    }
                    let inner = if r == 0 { base.clone() } else { &base * &ctx.h_alpha_binom(d, r) };
                    let t = ctx.shift_alpha(&inner, -((a2 - r) as i64)).scale(&k);
                    Self::insert_part(&mut acc, (a + a2 - r, c - r + c2), t);
                }
            }
        }
        Ok(Self {
            ctx: Arc::clone(ctx),
            terms: acc,
        })
    }

    /// `F^(k) · self`.
    pub fn lmul_f(&self, k: u32) -> Self {
        let ring = &self.ctx.ring;
        let mut terms = BTreeMap::new();
        for (&(a, c), t) in &self.terms {
            let coef = ring.binom((a + k) as i64, k as u64);
            if !ring.is_zero(&coef) {
                terms.insert((a + k, c), t.scale(&coef));
            }
        }
        Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// `self · E^(k)`.
    pub fn rmul_e(&self, k: u32) -> Self {
        let ring = &self.ctx.ring;
        let mut terms = BTreeMap::new();
        for (&(a, c), t) in &self.terms {
            let coef = ring.binom((c + k) as i64, k as u64);
            if !ring.is_zero(&coef) {
                terms.insert((a, c + k), t.scale(&coef));
            }
        }
        Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Coefficientwise change of ring into a context over the same root data.
    pub fn map_ring<S: CoefficientRing>(&self, target: &Arc<AlgebraContext<S>>) -> PbwElement<S> {
        assert_eq!(self.ctx.alpha, target.alpha);
        assert_eq!(self.ctx.coroot, target.coroot);
        let mut terms = BTreeMap::new();
        for (&k, t) in &self.terms {
            let m = t.map_ring(&target.ring);
            if !m.is_zero() {
                terms.insert(k, m);
            }
        }
        PbwElement {
            ctx: Arc::clone(target),
            terms,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let ring = &self.ctx.ring;
        serde_json::to_value(PbwJson {
            ring: ring.tag(),
            terms: self
                .monomials()
                .into_iter()
                .map(|(a, b, c, v)| PbwTermJson {
                    a,
                    b: b.to_vec(),
                    c,
                    coef: ring.to_bigint(&v).to_string(),
                })
                .collect(),
        })
        .expect("element serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("element serializes")
    }

    pub fn from_json(ctx: &Arc<AlgebraContext<R>>, text: &str) -> Result<Self, FormatError> {
        let raw: PbwJson = serde_json::from_str(text)?;
        if raw.ring != ctx.ring.tag() {
            return Err(FormatError::Schema(format!(
                "element is over {}, context is over {}",
                raw.ring,
                ctx.ring.tag()
            )));
        }
        let mut out = Self::zero(ctx);
        for t in raw.terms {
            if t.b.len() != ctx.rank() {
                return Err(FormatError::Schema(format!("multi-index {:?} has wrong length", t.b)));
            }
            let v: num_bigint::BigInt = t
                .coef
                .parse()
                .map_err(|_| FormatError::Schema(format!("bad coefficient {:?}", t.coef)))?;
            out = &out + &Self::monomial(ctx, t.a, &t.b, t.c, ctx.ring.from_bigint(&v));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PbwJson {
    ring: RingTag,
    terms: Vec<PbwTermJson>,
}

#[derive(Serialize, Deserialize)]
struct PbwTermJson {
    a: u32,
    b: Vec<u32>,
    c: u32,
    coef: String,
}

impl PbwElement<PrimeField> {
    /// `μ₀` as an element of the hyperalgebra.
    pub fn mu0(ctx: &Arc<AlgebraContext<PrimeField>>) -> Self {
        Self::from_torus(ctx, TorusElement::mu0(&ctx.ring, ctx.rank()))
    }

    /// The splitting: `F^(a) binom(H, b) E^(c) ↦ F^(pa) binom(H, pb) μ₀ E^(pc)`.
    ///
    /// This is the product of the generator images, using that `μ₀` is an
    /// idempotent commuting with `E^(pn)` and `F^(pn)`.
    pub fn phi(&self) -> Self {
        let p = self.ctx.ring.p() as u32;
        let terms = self
            .terms
            .iter()
            .map(|(&(a, c), t)| ((p * a, p * c), t.phi0()))
            .filter(|(_, t)| !t.is_zero())
            .collect();
        Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// `Dist(F)`: `F^(a) binom(H, b) E^(c) ↦ F^(a/p) binom(H, b/p) E^(c/p)` when
    /// `p` divides `a`, `c` and every `b_i`, and 0 otherwise.
    pub fn frobenius(&self) -> Self {
        let p = self.ctx.ring.p() as u32;
        let terms = self
            .terms
            .iter()
            .filter(|(&(a, c), _)| a % p == 0 && c % p == 0)
            .map(|(&(a, c), t)| ((a / p, c / p), t.frobenius_torus()))
            .filter(|(_, t)| !t.is_zero())
            .collect();
        Self {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl<R: CoefficientRing> PartialEq for PbwElement<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl<R: CoefficientRing> fmt::Debug for PbwElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pbw[{}; ", self.ctx.name)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (n, (a, b, c, v)) in self.monomials().into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·F{a}C{:?}E{c}", self.ctx.ring.to_bigint(&v), b.as_slice())?;
        }
        write!(f, "]")
    }
}

impl<R: CoefficientRing> Mul for &PbwElement<R> {
    type Output = PbwElement<R>;
    fn mul(self, rhs: Self) -> PbwElement<R> {
        self.checked_mul(rhs).expect("elements of one context")
    }
}

impl<R: CoefficientRing> Add for &PbwElement<R> {
    type Output = PbwElement<R>;
    fn add(self, rhs: Self) -> PbwElement<R> {
        self.checked_add(rhs).expect("elements of one context")
    }
}

impl<R: CoefficientRing> Neg for &PbwElement<R> {
    type Output = PbwElement<R>;
    fn neg(self) -> PbwElement<R> {
        let ring = &self.ctx.ring;
        self.scale(&ring.neg(&ring.one()))
    }
}

impl<R: CoefficientRing> Sub for &PbwElement<R> {
    type Output = PbwElement<R>;
    fn sub(self, rhs: Self) -> PbwElement<R> {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ring::Integers;
    use num_bigint::BigInt;

    fn ctx_z(rd: &RootDatum) -> Arc<AlgebraContext<Integers>> {
        AlgebraContext::new(rd, Integers).unwrap()
    }

    fn ctx_p(rd: &RootDatum, p: u64) -> Arc<AlgebraContext<PrimeField>> {
        AlgebraContext::new(rd, PrimeField::new(p).unwrap()).unwrap()
    }

    fn h(ctx: &Arc<AlgebraContext<Integers>>, i: usize, k: u32, coef: i64) -> PbwElement<Integers> {
        let mut b = vec![0; ctx.rank()];
        b[i] = k;
        PbwElement::monomial(ctx, 0, &b, 0, BigInt::from(coef))
    }

    #[test]
    fn context_reads_datum() {
        let c = ctx_z(&corpus::gl2());
        assert_eq!(c.alpha(), &[1, -1]);
        assert_eq!(c.coroot(), &[1, -1]);
        assert!(AlgebraContext::new(&corpus::sl(3), Integers).is_err());
        let s = AlgebraContext::simple_root_slice(&corpus::sl(3), 1, Integers).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(AlgebraContext::simple_root_slice(&corpus::sl(3), 2, Integers).is_err());
    }

    #[test]
    fn ef_examples() {
        let c = ctx_z(&corpus::sl2());
        let ef = &PbwElement::e(&c, 1) * &PbwElement::f(&c, 1);
        let fe = &PbwElement::f(&c, 1) * &PbwElement::e(&c, 1);
        assert_eq!(ef, &fe + &h(&c, 0, 1, 1));
        let c = ctx_z(&corpus::pgl2());
        let ef = &PbwElement::e(&c, 1) * &PbwElement::f(&c, 1);
        let fe = &PbwElement::f(&c, 1) * &PbwElement::e(&c, 1);
        assert_eq!(ef, &fe + &h(&c, 0, 1, 2));
        let ff = &PbwElement::f(&c, 1) * &PbwElement::f(&c, 1);
        assert_eq!(ff, PbwElement::f(&c, 2).scale(&BigInt::from(2)));
    }

    #[test]
    fn torus_moves_with_the_commutator_sign() {
        // [H, F] = -2F in SL₂, so F H = (H + 2) F
        let c = ctx_z(&corpus::sl2());
        let f = PbwElement::f(&c, 1);
        let hh = h(&c, 0, 1, 1);
        let lhs = &f * &hh;
        let rhs = &(&hh + &PbwElement::one(&c).scale(&BigInt::from(2))) * &f;
        assert_eq!(lhs, rhs);
        assert_eq!(&(&hh * &f) - &(&f * &hh), f.scale(&BigInt::from(-2)));
    }

    fn basis(ctx: &Arc<AlgebraContext<Integers>>, deg: u32) -> Vec<PbwElement<Integers>> {
        let mut out = Vec::new();
        let bs = crate::verify::multi_indices(ctx.rank(), deg);
        for a in 0..=deg {
            for c in 0..=deg {
                for b in &bs {
                    out.push(PbwElement::monomial(ctx, a, b, c, BigInt::from(1)));
                }
            }
        }
        out
    }

    #[test]
    fn associative_on_small_monomials() {
        for rd in [corpus::sl2(), corpus::pgl2(), corpus::gl2()] {
            let c = ctx_z(&rd);
            let deg = if rd.rank == 1 { 2 } else { 1 };
            let b = basis(&c, deg);
            for x in &b {
                for y in &b {
                    let xy = x * y;
                    for z in b.iter().step_by(3) {
                        assert_eq!(&xy * z, x * &(y * z), "{x:?} {y:?} {z:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_commutes_with_products() {
        for rd in [corpus::sl2(), corpus::pgl2(), corpus::gl2()] {
            let cz = ctx_z(&rd);
            for p in [2, 3] {
                let cp = ctx_p(&rd, p);
                let b = basis(&cz, 2);
                for x in b.iter().step_by(2) {
                    for y in b.iter().step_by(5) {
                        assert_eq!((x * y).map_ring(&cp), &x.map_ring(&cp) * &y.map_ring(&cp));
                    }
                }
            }
        }
    }

    #[test]
    fn straightening_respects_filtration_and_weight() {
        for rd in [corpus::sl2(), corpus::pgl2(), corpus::gl2()] {
            let c = ctx_z(&rd);
            for a in 0..6 {
                for b in 0..6 {
                    let prod = &PbwElement::e(&c, a) * &PbwElement::f(&c, b);
                    for (&(na, nc), _) in prod.parts() {
                        assert!(na + nc <= a + b);
                        assert_eq!(nc as i64 - na as i64, a as i64 - b as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn mu0_commutes_with_p_multiples() {
        for rd in [corpus::sl2(), corpus::pgl2(), corpus::gl2()] {
            for p in [2u32, 3] {
                let c = ctx_p(&rd, p as u64);
                let mu = PbwElement::mu0(&c);
                assert_eq!(&mu * &mu, mu);
                for n in (p..=3 * p).step_by(p as usize) {
                    let e = PbwElement::e(&c, n);
                    let f = PbwElement::f(&c, n);
                    assert_eq!(&mu * &e, &e * &mu);
                    assert_eq!(&mu * &f, &f * &mu);
                }
                // ... but not with E itself, unless α vanishes mod p
                let e = PbwElement::e(&c, 1);
                let alpha_zero = c.alpha().iter().all(|&a| a % p as i64 == 0);
                assert_eq!(&mu * &e == &e * &mu, alpha_zero);
            }
        }
    }

    #[test]
    fn phi_examples_and_corner() {
        for rd in [corpus::sl2(), corpus::pgl2(), corpus::gl2()] {
            for p in [2u32, 3] {
                let c = ctx_p(&rd, p as u64);
                let mu = PbwElement::mu0(&c);
                assert_eq!(PbwElement::one(&c).phi(), mu);
                assert_eq!(PbwElement::f(&c, 1).phi(), &PbwElement::f(&c, p) * &mu);
                assert_eq!(PbwElement::e(&c, 1).phi(), &PbwElement::e(&c, p) * &mu);
                let ef = &PbwElement::e(&c, 1) * &PbwElement::f(&c, 1);
                assert_eq!(ef.phi(), &PbwElement::e(&c, 1).phi() * &PbwElement::f(&c, 1).phi());
                for a in 0..3 {
                    for cc in 0..3 {
                        let x = PbwElement::monomial(&c, a, &vec![1; c.rank()], cc, 1);
                        let y = x.phi();
                        assert_eq!(&(&mu * &y) * &mu, y);
                        assert_eq!(y.frobenius(), x);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let c = ctx_p(&corpus::sl2(), 2);
        assert_eq!(PbwElement::e(&c, 4).frobenius(), PbwElement::e(&c, 2));
        assert!(PbwElement::e(&c, 3).frobenius().is_zero());
        assert_eq!(PbwElement::mu0(&c).frobenius(), PbwElement::one(&c));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ctx_z(&corpus::sl2());
        let b = ctx_z(&corpus::pgl2());
        let x = PbwElement::e(&a, 1);
        let y = PbwElement::e(&b, 1);
        assert_eq!(x.checked_mul(&y), Err(AlgebraError::ContextMismatch));
    }

    #[test]
    fn json_round_trip() {
        let c = ctx_z(&corpus::gl2());
        let x = &(&PbwElement::e(&c, 2) * &PbwElement::f(&c, 3)) + &h(&c, 1, 2, -5);
        let text = x.to_json();
        assert_eq!(PbwElement::from_json(&c, &text).unwrap(), x);
        let cp = ctx_p(&corpus::gl2(), 3);
        assert!(PbwElement::from_json(&cp, &text).is_err());
    }
}
