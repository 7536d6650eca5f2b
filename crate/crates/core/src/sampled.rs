//! μ₀ properties and seeded random sweeps: torus products against pointwise
//! values, associativity, and the action-matrix homomorphism.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{AlgebraError, ModuleError};
use crate::hyperalgebra::{AlgebraContext, PbwElement};
use crate::modules::{dominant_weights, weyl_module, WeightModule};
use crate::report::VerificationReport;
use crate::ring::{CoefficientRing, PrimeField};
use crate::torus::TorusElement;
use crate::verify::sample_rng;

/// `μ₀² = μ₀`, `μ₀(h) = [p | h]` on `[0, 3p)^ℓ`, and `μ₀` commuting with
/// `E^(pn)`, `F^(pn)` for `pn ≤ 3p`.
pub fn verify_mu0(ctx: &Arc<AlgebraContext<PrimeField>>) -> VerificationReport {
    let p = ctx.ring().p();
    let rank = ctx.rank();
    let mut report = VerificationReport::new("verify.mu0")
        .param("context", ctx.name())
        .param("p", p);
    let mu_t = TorusElement::mu0(ctx.ring(), rank);
    report.trial();
    if &mu_t * &mu_t != mu_t {
        report.fail(json!({"check": "idempotent"}));
    }
    let side = 3 * p;
    let points = side.pow(rank as u32);
    for k in 0..points {
        let h: Vec<i64> = (0..rank).map(|i| ((k / side.pow(i as u32)) % side) as i64).collect();
        let expect = u64::from(h.iter().all(|x| x % p as i64 == 0));
        report.trial();
        if mu_t.eval(&h) != expect {
            report.fail(json!({"check": "indicator", "h": h}));
        }
    }
    let mu = PbwElement::mu0(ctx);
    for n in 1..=3u32 {
        let pn = p as u32 * n;
        for (name, x) in [("E", PbwElement::e(ctx, pn)), ("F", PbwElement::f(ctx, pn))] {
            report.trial();
            if &mu * &x != &x * &mu {
                report.fail(json!({"check": "commutes", "op": name, "n": pn}));
            }
        }
    }
    report.finish()
}

/// `binom(h, k) mod p` for `0 ≤ h, k < size` from Pascal's rule.
fn pascal_mod(p: u64, size: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; size]; size];
    for h in 0..size {
        t[h][0] = 1;
        for k in 1..=h {
            t[h][k] = (t[h - 1][k - 1] + if k < h { t[h - 1][k] } else { 0 }) % p;
        }
    }
    t
}

/// Random monomial pairs `binom(H, b)`, `binom(H, b')` with `b, b' ∈ [0, p³)^ℓ`:
/// the expanded product evaluated on every `h ∈ [0, p³)^ℓ` equals the product
/// of values.
pub fn verify_torus_oracle(p: u64, rank: usize, pairs: u64, seed: u64) -> Result<VerificationReport, AlgebraError> {
    let field = PrimeField::new(p)?;
    let side = (p * p * p) as usize;
    let mut report = VerificationReport::new("verify.torus_oracle")
        .param("p", p)
        .param("rank", rank)
        .param("pairs", pairs)
        .param("window", side)
        .with_seed(seed);
    let table = pascal_mod(p, 2 * side);
    let points: Vec<Vec<usize>> = (0..side.pow(rank as u32))
        .map(|k| (0..rank).map(|i| (k / side.pow(i as u32)) % side).collect())
        .collect();
    let value = |b: &[u32], h: &[usize]| -> u64 {
        b.iter().zip(h).fold(1, |acc, (&bi, &hi)| acc * table[hi][bi as usize] % p)
    };
    let bad: Vec<Option<Value>> = (0..pairs)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(seed, s);
            let mut draw = || -> Vec<u32> { (0..rank).map(|_| rng.random_range(0..side as u32)).collect() };
            let (b1, b2) = (draw(), draw());
            let prod = &TorusElement::monomial(&field, &b1) * &TorusElement::monomial(&field, &b2);
            let terms: Vec<(&[u32], u64)> = prod.terms().iter().map(|(b, c)| (b.as_slice(), *c)).collect();
            points.iter().find_map(|h| {
                let lhs = terms.iter().fold(0, |acc, (b, c)| (acc + c * value(b, h)) % p);
                let rhs = value(&b1, h) * value(&b2, h) % p;
                (lhs != rhs).then(|| json!({"sample": s, "b1": b1, "b2": b2, "h": h}))
            })
        })
        .collect();
    report.trials(pairs);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    Ok(report.finish())
}

/// A random element `F^(a) binom(H, b) E^(c)` with `a, c, b_i ≤ deg` and a
/// nonzero coefficient in `[-5, 5]`.
pub fn random_monomial<R: CoefficientRing>(
    ctx: &Arc<AlgebraContext<R>>,
    rng: &mut impl Rng,
    deg: u32,
) -> PbwElement<R> {
    let a = rng.random_range(0..=deg);
    let c = rng.random_range(0..=deg);
    let b: Vec<u32> = (0..ctx.rank()).map(|_| rng.random_range(0..=deg)).collect();
    let mut coef = 0;
    while ctx.ring().is_zero(&ctx.ring().from_i64(coef)) {
        coef = rng.random_range(-5..=5);
    }
    PbwElement::monomial(ctx, a, &b, c, ctx.ring().from_i64(coef))
}

/// `(xy)z = x(yz)` on random monomial triples.
pub fn verify_associativity<R: CoefficientRing>(
    ctx: &Arc<AlgebraContext<R>>,
    deg: u32,
    triples: u64,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("verify.associativity")
        .param("context", ctx.name())
        .param("ring", ctx.ring().tag().to_string())
        .param("deg", deg)
        .param("triples", triples)
        .with_seed(seed);
    let bad: Vec<Option<Value>> = (0..triples)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(seed, s);
            let x = random_monomial(ctx, &mut rng, deg);
            let y = random_monomial(ctx, &mut rng, deg);
            let z = random_monomial(ctx, &mut rng, deg);
            (&(&x * &y) * &z != &x * &(&y * &z)).then(|| {
                json!({"sample": s, "x": x.to_json_value(), "y": y.to_json_value(), "z": z.to_json_value()})
            })
        })
        .collect();
    report.trials(triples);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    report.finish()
}

/// `⊕ V(λ_n)` over one highest weight per `⟨λ, α∨⟩ = n ≤ n_max`.
pub fn weyl_sum<R: CoefficientRing>(
    ctx: &Arc<AlgebraContext<R>>,
    n_max: i64,
) -> Result<WeightModule<R>, ModuleError> {
    let mut m = WeightModule::zero(ctx);
    for lam in dominant_weights(ctx, n_max) {
        m = m.direct_sum(&weyl_module(ctx, &lam)?)?;
    }
    Ok(m)
}

/// `ρ(xy) = ρ(x) ρ(y)` for the action on `⊕_{n ≤ n_max} V(n)`, random
/// monomials with `a, c, b_i ≤ n_max`.
pub fn verify_action_oracle<R: CoefficientRing>(
    ctx: &Arc<AlgebraContext<R>>,
    n_max: i64,
    pairs: u64,
    seed: u64,
) -> Result<VerificationReport, ModuleError> {
    let module = weyl_sum(ctx, n_max)?;
    let mut report = VerificationReport::new("verify.action_oracle")
        .param("context", ctx.name())
        .param("ring", ctx.ring().tag().to_string())
        .param("n_max", n_max)
        .param("dim", module.dim())
        .param("pairs", pairs)
        .with_seed(seed);
    let deg = n_max as u32;
    let bad: Vec<Result<Option<Value>, ModuleError>> = (0..pairs)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(seed, s);
            let x = random_monomial(ctx, &mut rng, deg);
            let y = random_monomial(ctx, &mut rng, deg);
            let lhs = module.action_matrix(&(&x * &y))?;
            let rhs = module.action_matrix(&x)?.mul(&module.action_matrix(&y)?);
            Ok((lhs != rhs).then(|| json!({"sample": s, "x": x.to_json_value(), "y": y.to_json_value()})))
        })
        .collect();
    report.trials(pairs);
    for b in bad {
        if let Some(f) = b? {
            report.fail(f);
        }
    }
    Ok(report.finish())
}
