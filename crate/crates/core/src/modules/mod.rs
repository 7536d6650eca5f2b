//! Finite-dimensional weight modules over a rank-one context, given by
//! explicit divided-power operator tables.

mod character;
mod checks;

pub use character::{
    decompose_character, tilting_character, validate_tilting_table, weyl_character, CharBasis,
    Character, CharacterDecomposition, DECOMPOSITION_LIMITATION,
};
pub use checks::{
    dominant_weights, verify_characters, verify_donkin, verify_k_invariants, verify_roundtrip,
    z_extension_corpus, ZExtensionCase,
};

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::compat::TorusProjection;
use crate::error::{FormatError, ModuleError};
use crate::hyperalgebra::{AlgebraContext, PbwElement};
use crate::matrix::Matrix;
use crate::report::VerificationReport;
use crate::ring::{CoefficientRing, PrimeField};

/// A module with weight basis `v_0, …, v_{d-1}` and matrices of `E^(n)`,
/// `F^(n)` for `1 ≤ n ≤ n_max`.
///
/// `n_max` is half the spread of `⟨λ, α∨⟩` over the weights: `E^(n)` shifts
/// that pairing by `2n`, so every operator beyond `n_max` is zero.
#[derive(Clone)]
pub struct WeightModule<R: CoefficientRing> {
    ctx: Arc<AlgebraContext<R>>,
    weights: Vec<Vec<i64>>,
    op_e: Vec<Matrix<R>>,
    op_f: Vec<Matrix<R>>,
}

/// `n_max` for a list of weights.
pub fn operator_bound<R: CoefficientRing>(ctx: &AlgebraContext<R>, weights: &[Vec<i64>]) -> u32 {
    let pairings: Vec<i64> = weights.iter().map(|w| ctx.pair_coroot(w)).collect();
    match (pairings.iter().min(), pairings.iter().max()) {
        (Some(lo), Some(hi)) => ((hi - lo) / 2) as u32,
        _ => 0,
    }
}

impl<R: CoefficientRing> WeightModule<R> {
    /// Builds a module from operator tables `ops[n-1]`. Tables may be shorter
    /// than `n_max` (missing operators are zero) or longer, provided the extra
    /// operators are zero.
    pub fn new(
        ctx: &Arc<AlgebraContext<R>>,
        weights: Vec<Vec<i64>>,
        op_e: Vec<Matrix<R>>,
        op_f: Vec<Matrix<R>>,
    ) -> Result<Self, ModuleError> {
        let d = weights.len();
        if let Some(w) = weights.iter().find(|w| w.len() != ctx.rank()) {
            return Err(ModuleError::Malformed(format!("weight {w:?} has wrong length")));
        }
        let n_max = operator_bound(ctx, &weights) as usize;
        let fit = |mut ops: Vec<Matrix<R>>, name: &str| -> Result<Vec<Matrix<R>>, ModuleError> {
            if ops.iter().any(|m| m.rows() != d || m.cols() != d) {
                return Err(ModuleError::Malformed(format!("{name} matrix is not {d}×{d}")));
            }
            if ops.iter().skip(n_max).any(|m| !m.is_zero()) {
                return Err(ModuleError::Malformed(format!(
                    "{name}^(n) nonzero beyond the weight bound {n_max}"
                )));
            }
            ops.truncate(n_max);
            while ops.len() < n_max {
                ops.push(Matrix::zeros(ctx.ring(), d, d));
            }
            Ok(ops)
        };
        Ok(Self {
            ctx: Arc::clone(ctx),
            op_e: fit(op_e, "E")?,
            op_f: fit(op_f, "F")?,
            weights,
        })
    }

    pub fn zero(ctx: &Arc<AlgebraContext<R>>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            weights: Vec::new(),
            op_e: Vec::new(),
            op_f: Vec::new(),
        }
    }

    /// The one-dimensional module of weight `λ` (with `⟨λ, α∨⟩ = 0` this is a
    /// genuine module; other weights give only a torus character).
    pub fn trivial(ctx: &Arc<AlgebraContext<R>>, weight: Vec<i64>) -> Self {
        Self::new(ctx, vec![weight], vec![], vec![]).expect("one-dimensional module")
    }

    pub fn context(&self) -> &Arc<AlgebraContext<R>> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn n_max(&self) -> u32 {
        self.op_e.len() as u32
    }

    fn ring(&self) -> &R {
        self.ctx.ring()
    }

    /// `E^(n)`, with `E^(0) = 1`.
    pub fn op_e(&self, n: u32) -> Cow<'_, Matrix<R>> {
        self.op(&self.op_e, n)
    }

    /// `F^(n)`, with `F^(0) = 1`.
    pub fn op_f(&self, n: u32) -> Cow<'_, Matrix<R>> {
        self.op(&self.op_f, n)
    }

    fn op<'a>(&'a self, ops: &'a [Matrix<R>], n: u32) -> Cow<'a, Matrix<R>> {
        let d = self.dim();
        match n {
            0 => Cow::Owned(Matrix::identity(self.ring(), d)),
            n if (n as usize) <= ops.len() => Cow::Borrowed(&ops[n as usize - 1]),
            _ => Cow::Owned(Matrix::zeros(self.ring(), d, d)),
        }
    }

    /// `binom(⟨λ, α∨⟩ + m, r)` on each weight vector.
    fn h_alpha_diag(&self, m: i64, r: u32) -> Matrix<R> {
        let ring = self.ring();
        Matrix::diagonal(
            ring,
            self.weights
                .iter()
                .map(|w| ring.binom(self.ctx.pair_coroot(w) + m, r as u64))
                .collect(),
        )
    }

    /// Matrix of a hyperalgebra element acting on the module.
    pub fn action_matrix(&self, x: &PbwElement<R>) -> Result<Matrix<R>, ModuleError> {
        if !same_context(&self.ctx, x.context()) {
            return Err(ModuleError::ContextMismatch);
        }
        let ring = self.ring();
        let mut out = Matrix::zeros(ring, self.dim(), self.dim());
        for (&(a, c), t) in x.parts() {
            if a > self.n_max() || c > self.n_max() {
                continue;
            }
            let diag = Matrix::diagonal(ring, self.weights.iter().map(|w| t.eval(w)).collect());
            out = out.add(&self.op_f(a).mul(&diag).mul(&self.op_e(c)));
        }
        Ok(out)
    }

    /// Weight-pattern, divided-power and `E^(a) F^(b)` relations as matrix
    /// identities.
    pub fn validate(&self) -> VerificationReport {
        let mut report = VerificationReport::new("module.validate")
            .param("context", self.ctx.name())
            .param("dim", self.dim())
            .param("n_max", self.n_max());
        let ring = self.ring();
        let alpha = self.ctx.alpha();
        let n_max = self.n_max();
        for n in 1..=n_max {
            for (name, sign) in [("E", 1i64), ("F", -1)] {
                let m = if sign > 0 { self.op_e(n) } else { self.op_f(n) };
                for (i, j) in m.nonzero_entries() {
                    report.trial();
                    let expect: Vec<i64> = self.weights[j]
                        .iter()
                        .zip(alpha)
                        .map(|(w, a)| w + sign * n as i64 * a)
                        .collect();
                    if self.weights[i] != expect {
                        report.fail(json!({"relation": "weight", "op": name, "n": n, "row": i, "col": j}));
                    }
                }
            }
        }
        for a in 1..=n_max {
            for b in 1..=n_max {
                let coef = ring.binom((a + b) as i64, a as u64);
                for (name, ops) in [("EE", &self.op_e), ("FF", &self.op_f)] {
                    report.trial();
                    let lhs = self.op(ops, a).mul(&self.op(ops, b));
                    let rhs = self.op(ops, a + b).scale(&coef);
                    if let Some((i, j)) = first_difference(&lhs, &rhs) {
                        report.fail(json!({"relation": name, "a": a, "b": b, "row": i, "col": j}));
                    }
                }
                report.trial();
                let lhs = self.op_e(a).mul(&self.op_f(b));
                let mut rhs = Matrix::zeros(ring, self.dim(), self.dim());
                for r in 0..=a.min(b) {
                    let d = self.h_alpha_diag(2 * r as i64 - a as i64 - b as i64, r);
                    rhs = rhs.add(&self.op_f(b - r).mul(&d).mul(&self.op_e(a - r)));
                }
                if let Some((i, j)) = first_difference(&lhs, &rhs) {
                    report.fail(json!({"relation": "EF", "a": a, "b": b, "row": i, "col": j}));
                }
            }
        }
        report.finish()
    }

    /// `M ⊗ N` with `E^(n) ↦ Σ_{i+j=n} E^(i) ⊗ E^(j)`; basis `(i, j)` has
    /// index `i · dim N + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self, ModuleError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(ModuleError::ContextMismatch);
        }
        let weights: Vec<Vec<i64>> = self
            .weights
            .iter()
            .flat_map(|u| {
                other
                    .weights
                    .iter()
                    .map(move |v| u.iter().zip(v).map(|(a, b)| a + b).collect())
            })
            .collect();
        let n_max = operator_bound(&self.ctx, &weights);
        let d = weights.len();
        let build = |left: &dyn Fn(u32) -> Matrix<R>, right: &dyn Fn(u32) -> Matrix<R>| {
            (1..=n_max)
                .map(|n| {
                    (0..=n).fold(Matrix::zeros(self.ring(), d, d), |acc, i| {
                        let l = left(i);
                        if l.is_zero() {
                            return acc;
                        }
                        let r = right(n - i);
                        if r.is_zero() {
                            return acc;
                        }
                        acc.add(&l.kron(&r))
                    })
                })
                .collect::<Vec<_>>()
        };
        let op_e = build(&|n| self.op_e(n).into_owned(), &|n| other.op_e(n).into_owned());
        let op_f = build(&|n| self.op_f(n).into_owned(), &|n| other.op_f(n).into_owned());
        Self::new(&self.ctx, weights, op_e, op_f)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, ModuleError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(ModuleError::ContextMismatch);
        }
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        let n_max = operator_bound(&self.ctx, &weights);
        let op_e = (1..=n_max).map(|n| self.op_e(n).block_diagonal(&other.op_e(n))).collect();
        let op_f = (1..=n_max).map(|n| self.op_f(n).block_diagonal(&other.op_f(n))).collect();
        Self::new(&self.ctx, weights, op_e, op_f)
    }

    /// The submodule-or-subquotient spanned by the chosen basis vectors, with
    /// weights replaced by `new_weights` (index-aligned with `keep`).
    fn restrict(
        &self,
        ctx: &Arc<AlgebraContext<R>>,
        keep: &[usize],
        new_weights: Vec<Vec<i64>>,
        op: impl Fn(&'static str, u32) -> Matrix<R>,
    ) -> Result<Self, ModuleError> {
        let n_max = operator_bound(ctx, &new_weights);
        let op_e = (1..=n_max).map(|n| op("E", n).select(keep, keep)).collect();
        let op_f = (1..=n_max).map(|n| op("F", n).select(keep, keep)).collect();
        Self::new(ctx, new_weights, op_e, op_f)
    }

    /// `M^K`: weight vectors whose killed coordinates vanish, as a module
    /// over the base context.
    pub fn k_invariants(
        &self,
        proj: &TorusProjection,
        base: &Arc<AlgebraContext<R>>,
    ) -> Result<Self, ModuleError> {
        proj.check_slices(&self.ctx, base)
            .map_err(|_| ModuleError::ContextMismatch)?;
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&j| proj.killed().iter().all(|&k| self.weights[j][k] == 0))
            .collect();
        let weights = keep.iter().map(|&j| proj.restrict_weight(&self.weights[j])).collect();
        self.restrict(base, &keep, weights, |name, n| match name {
            "E" => self.op_e(n).into_owned(),
            _ => self.op_f(n).into_owned(),
        })
    }

    pub fn character(&self) -> Character {
        Character::from_weights(self.weights.iter().cloned())
    }

    pub fn map_ring<S: CoefficientRing>(&self, target: &Arc<AlgebraContext<S>>) -> WeightModule<S> {
        WeightModule {
            ctx: Arc::clone(target),
            weights: self.weights.clone(),
            op_e: self.op_e.iter().map(|m| m.map_ring(target.ring())).collect(),
            op_f: self.op_f.iter().map(|m| m.map_ring(target.ring())).collect(),
        }
    }

    pub fn to_json_value(&self) -> Value {
        let ring = self.ring();
        let table = |ops: &[Matrix<R>]| -> Value {
            let mut m = Map::new();
            for (k, mat) in ops.iter().enumerate() {
                let rows: Vec<Vec<Value>> = mat
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(|x| int_value(&ring.to_bigint(x))).collect())
                    .collect();
                m.insert((k + 1).to_string(), json!(rows));
            }
            Value::Object(m)
        };
        json!({
            "context": self.ctx.name(),
            "ring": ring.tag().to_string(),
            "dim": self.dim(),
            "weights": self.weights,
            "opE": table(&self.op_e),
            "opF": table(&self.op_f),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("module serializes")
    }

    pub fn from_json(ctx: &Arc<AlgebraContext<R>>, text: &str) -> Result<Self, FormatError> {
        let v: Value = serde_json::from_str(text)?;
        let schema = |m: &str| FormatError::Schema(m.to_string());
        let weights: Vec<Vec<i64>> = serde_json::from_value(v.get("weights").cloned().ok_or_else(|| schema("missing weights"))?)?;
        let d = weights.len();
        if let Some(dim) = v.get("dim").and_then(Value::as_u64) {
            if dim as usize != d {
                return Err(schema("dim does not match the number of weights"));
            }
        }
        let ring = ctx.ring();
        let read = |key: &str| -> Result<Vec<Matrix<R>>, FormatError> {
            let Some(obj) = v.get(key).and_then(Value::as_object) else {
                return Ok(Vec::new());
            };
            let mut entries: Vec<(u32, Matrix<R>)> = Vec::new();
            for (n, rows) in obj {
                let n: u32 = n.parse().map_err(|_| schema("operator keys must be integers"))?;
                let rows = rows.as_array().ok_or_else(|| schema("operator must be a list of rows"))?;
                let mut parsed = Vec::with_capacity(d);
                for row in rows {
                    let row = row.as_array().ok_or_else(|| schema("row must be a list"))?;
                    if row.len() != d {
                        return Err(schema("operator rows have the wrong length"));
                    }
                    let mut r = Vec::with_capacity(d);
                    for x in row {
                        r.push(ring.from_bigint(&parse_int(x).ok_or_else(|| schema("bad matrix entry"))?));
                    }
                    parsed.push(r);
                }
                if parsed.len() != d || n == 0 {
                    return Err(schema("operator has the wrong shape"));
                }
                entries.push((n, Matrix::from_rows(ring, parsed, d)));
            }
            let top = entries.iter().map(|e| e.0).max().unwrap_or(0);
            let mut ops = vec![Matrix::zeros(ring, d, d); top as usize];
            for (n, m) in entries {
                ops[n as usize - 1] = m;
            }
            Ok(ops)
        };
        let op_e = read("opE")?;
        let op_f = read("opF")?;
        Self::new(ctx, weights, op_e, op_f).map_err(|e| FormatError::Schema(e.to_string()))
    }
}

fn int_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    }
}

fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn first_difference<R: CoefficientRing>(a: &Matrix<R>, b: &Matrix<R>) -> Option<(usize, usize)> {
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| a.get(i, j) != b.get(i, j))
}

fn same_context<R: CoefficientRing>(a: &AlgebraContext<R>, b: &AlgebraContext<R>) -> bool {
    a.alpha() == b.alpha() && a.coroot() == b.coroot() && a.ring() == b.ring()
}

impl<R: CoefficientRing> PartialEq for WeightModule<R> {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx)
            && self.weights == other.weights
            && self.op_e == other.op_e
            && self.op_f == other.op_f
    }
}

impl<R: CoefficientRing> fmt::Debug for WeightModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightModule")
            .field("context", &self.ctx.name())
            .field("weights", &self.weights)
            .field("opE", &self.op_e)
            .field("opF", &self.op_f)
            .finish()
    }
}

/// The Weyl module of highest weight `λ`: basis `v_i` of weight `λ - iα`,
/// `F^(r) v_i = binom(i + r, r) v_{i+r}`, `E^(r) v_i = binom(n - i + r, r) v_{i-r}`
/// with `n = ⟨λ, α∨⟩`.
pub fn weyl_module<R: CoefficientRing>(
    ctx: &Arc<AlgebraContext<R>>,
    lambda: &[i64],
) -> Result<WeightModule<R>, ModuleError> {
    if lambda.len() != ctx.rank() {
        return Err(ModuleError::Malformed(format!("weight {lambda:?} has wrong length")));
    }
    let n = ctx.pair_coroot(lambda);
    if n < 0 {
        return Err(ModuleError::NotDominant(lambda.to_vec()));
    }
    let d = n as usize + 1;
    let ring = ctx.ring();
    let weights: Vec<Vec<i64>> = (0..=n)
        .map(|i| lambda.iter().zip(ctx.alpha()).map(|(l, a)| l - i * a).collect())
        .collect();
    let mut op_e = Vec::new();
    let mut op_f = Vec::new();
    for r in 1..=n as usize {
        let mut e = Matrix::zeros(ring, d, d);
        let mut f = Matrix::zeros(ring, d, d);
        for i in 0..d {
            if i + r < d {
                f.set(i + r, i, ring.binom((i + r) as i64, r as u64));
            }
            if i >= r {
                e.set(i - r, i, ring.binom(n - i as i64 + r as i64, r as u64));
            }
        }
        op_e.push(e);
        op_f.push(f);
    }
    WeightModule::new(ctx, weights, op_e, op_f)
}

/// Positions of weight vectors fixed by `μ₀`, read off its action matrix.
fn mu0_support(m: &WeightModule<PrimeField>) -> Vec<usize> {
    let mu = m
        .action_matrix(&PbwElement::mu0(m.context()))
        .expect("own context");
    (0..m.dim()).filter(|&j| *mu.get(j, j) == 1).collect()
}

impl WeightModule<PrimeField> {
    /// `M^[1]`: weights times `p`, `u` acting through `Dist(F)(u)`.
    pub fn frobenius_twist(&self) -> Self {
        let p = self.ring().p() as u32;
        let weights: Vec<Vec<i64>> = self
            .weights
            .iter()
            .map(|w| w.iter().map(|x| x * p as i64).collect())
            .collect();
        let n_max = operator_bound(&self.ctx, &weights);
        let d = self.dim();
        let pick = |ops: &dyn Fn(u32) -> Matrix<PrimeField>| -> Vec<Matrix<PrimeField>> {
            (1..=n_max)
                .map(|n| if n % p == 0 { ops(n / p) } else { Matrix::zeros(self.ring(), d, d) })
                .collect()
        };
        let op_e = pick(&|n| self.op_e(n).into_owned());
        let op_f = pick(&|n| self.op_f(n).into_owned());
        Self::new(&self.ctx, weights, op_e, op_f).expect("twist of a module")
    }

    /// `M^φ = μ₀ M` with `u` acting by `φ(u)`. The subspace is the image of
    /// `μ₀`, new weights are `λ / p`, and `E^(n)` acts by the matrix of
    /// `φ(E^(n))` restricted to it.
    pub fn contract(&self) -> Self {
        let p = self.ring().p() as i64;
        let keep = mu0_support(self);
        let weights: Vec<Vec<i64>> = keep
            .iter()
            .map(|&j| {
                self.weights[j]
                    .iter()
                    .map(|x| {
                        debug_assert_eq!(x % p, 0);
                        x / p
                    })
                    .collect()
            })
            .collect();
        let ctx = Arc::clone(&self.ctx);
        self.restrict(&ctx, &keep, weights, |name, n| {
            let u = match name {
                "E" => PbwElement::e(&ctx, n),
                _ => PbwElement::f(&ctx, n),
            };
            self.action_matrix(&u.phi()).expect("own context")
        })
        .expect("contraction of a module")
    }

    /// Basis of the `G₁`-invariants: vectors killed by `E^(i)`, `F^(i)` for
    /// `0 < i < p` and lying in weight spaces with `p | λ`.
    pub fn g1_invariants(&self) -> Vec<Vec<u64>> {
        let p = self.ring().p();
        let d = self.dim();
        let mut blocks = Vec::new();
        for i in 1..p as u32 {
            if i > self.n_max() {
                break;
            }
            blocks.push(self.op_e(i).into_owned());
            blocks.push(self.op_f(i).into_owned());
        }
        let off_lattice: Vec<u64> = self
            .weights
            .iter()
            .map(|w| u64::from(w.iter().any(|x| x.rem_euclid(p as i64) != 0)))
            .collect();
        blocks.push(Matrix::diagonal(self.ring(), off_lattice));
        Matrix::vstack(self.ring(), &blocks, d).nullspace()
    }
}

/// `μ₀ M` read off from weights alone, with `E^(n)` acting by `E^(pn)`
/// restricted: the contraction without going through `φ`.
pub fn contract_by_restriction(m: &WeightModule<PrimeField>) -> WeightModule<PrimeField> {
    let p = m.ring().p() as i64;
    let keep: Vec<usize> = (0..m.dim())
        .filter(|&j| m.weights[j].iter().all(|x| x % p == 0))
        .collect();
    let weights = keep
        .iter()
        .map(|&j| m.weights[j].iter().map(|x| x / p).collect())
        .collect();
    m.restrict(m.context(), &keep, weights, |name, n| match name {
        "E" => m.op_e(p as u32 * n).into_owned(),
        _ => m.op_f(p as u32 * n).into_owned(),
    })
    .expect("restriction of a module")
}
