//! Corpus sweeps over weight modules.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::{
    decompose_character, tilting_character, validate_tilting_table, weyl_module, CharBasis,
    WeightModule, DECOMPOSITION_LIMITATION,
};
use crate::compat::TorusProjection;
use crate::corpus;
use crate::error::{AlgebraError, ModuleError};
use crate::hyperalgebra::AlgebraContext;
use crate::report::VerificationReport;
use crate::ring::PrimeField;

type Ctx = Arc<AlgebraContext<PrimeField>>;

fn sl2(p: u64) -> Result<Ctx, AlgebraError> {
    AlgebraContext::new(&corpus::sl2(), PrimeField::new(p)?)
}

/// For each `n ≤ n_max`, the first weight with `⟨λ, α∨⟩ = n` in order of
/// increasing `ℓ¹` norm, searched in the box `[-n_max, n_max]^ℓ`.
pub fn dominant_weights<R: crate::CoefficientRing>(ctx: &AlgebraContext<R>, n_max: i64) -> Vec<Vec<i64>> {
    let rank = ctx.rank();
    let side = (2 * n_max + 1) as usize;
    let mut box_points: Vec<Vec<i64>> = (0..side.pow(rank as u32))
        .map(|mut k| {
            (0..rank)
                .map(|_| {
                    let x = (k % side) as i64 - n_max;
                    k /= side;
                    x
                })
                .collect()
        })
        .collect();
    box_points.sort_by_key(|w: &Vec<i64>| (w.iter().map(|x| x.abs()).sum::<i64>(), w.clone()));
    (0..=n_max)
        .filter_map(|n| box_points.iter().find(|w| ctx.pair_coroot(w) == n).cloned())
        .collect()
}

/// `contract(frobenius_twist(V(λ))) = V(λ)` and validity of both sides.
pub fn verify_roundtrip(ctx: &Ctx, highest: &[Vec<i64>]) -> Result<VerificationReport, ModuleError> {
    let mut report = VerificationReport::new("module.roundtrip")
        .param("context", ctx.name())
        .param("p", ctx.ring().p())
        .param("highest_weights", highest);
    let outcomes: Vec<Result<Vec<serde_json::Value>, ModuleError>> = highest
        .par_iter()
        .map(|lam| {
            let v = weyl_module(ctx, lam)?;
            let twisted = v.frobenius_twist();
            let mut bad = Vec::new();
            if !twisted.validate().pass {
                bad.push(json!({"lambda": lam, "check": "twist_valid"}));
            }
            let back = twisted.contract();
            if back.weights() != v.weights() {
                bad.push(json!({"lambda": lam, "check": "weights"}));
            } else if back != v {
                bad.push(json!({"lambda": lam, "check": "matrices"}));
            }
            Ok(bad)
        })
        .collect();
    for bad in outcomes {
        report.trials(2);
        bad?.into_iter().for_each(|f| report.fail(f));
    }
    Ok(report.finish())
}

/// `dim (St ⊗ St ⊗ V(n))^{G₁} = dim contract(V(n))` for `SL₂`, `St = V(p-1)`.
/// The left side is a kernel computation, the right side the image of `μ₀`.
pub fn verify_donkin(p: u64, n_max: i64) -> Result<VerificationReport, ModuleError> {
    let ctx = sl2(p)?;
    let mut report = VerificationReport::new("module.donkin")
        .param("p", p)
        .param("n_max", n_max);
    let st = weyl_module(&ctx, &[p as i64 - 1])?;
    let stst = st.tensor(&st)?;
    let rows: Vec<Result<(i64, usize, usize), ModuleError>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let v = weyl_module(&ctx, &[n])?;
            let big = stst.tensor(&v)?;
            Ok((n, big.g1_invariants().len(), v.contract().dim()))
        })
        .collect();
    let mut dims = Vec::new();
    for row in rows {
        let (n, lhs, rhs) = row?;
        report.trial();
        if lhs != rhs {
            report.fail(json!({"n": n, "g1_invariants": lhs, "contract": rhs}));
        }
        dims.push(json!({"n": n, "g1_invariants": lhs, "contract": rhs}));
    }
    report.set_result(json!(dims));
    Ok(report.finish())
}

/// Character-level consequences of contraction for `SL₂`:
/// `contract(V(n))` decomposed in Weyl characters for `n ≤ n_max` (nonnegativity
/// recorded), and contracted tilting characters decomposed in tilting
/// characters for `p ≤ m ≤ 2p-2`, both from the table and from the module
/// `V(p-1) ⊗ V(m-p+1)`.
pub fn verify_characters(p: u64, n_max: i64) -> Result<VerificationReport, ModuleError> {
    let ctx = sl2(p)?;
    let pi = p as i64;
    let mut report = VerificationReport::new("module.characters")
        .param("p", p)
        .param("n_max", n_max)
        .param("tilting_table", "character recursion, structurally validated");
    report.note(DECOMPOSITION_LIMITATION);
    report.absorb(validate_tilting_table(p, 2 * n_max.max(2 * pi)));

    let mut weyl_rows = Vec::new();
    for n in 0..=n_max {
        report.trial();
        let contracted = weyl_module(&ctx, &[n])?.contract();
        if !contracted.validate().pass {
            report.fail(json!({"n": n, "check": "contract_valid"}));
        }
        let d = decompose_character(&ctx, &contracted.character(), CharBasis::Weyl)?;
        weyl_rows.push(json!({"n": n, "decomposition": d.terms, "nonnegative": d.nonnegative()}));
    }
    let weyl_nonneg = weyl_rows.iter().all(|r| r["nonnegative"] == true);
    report.note(format!(
        "weyl multiplicities of contracted Weyl characters nonnegative: {weyl_nonneg}"
    ));

    let mut tilting_rows = Vec::new();
    for m in pi..=2 * pi - 2 {
        report.trials(3);
        let table = tilting_character(p, m).contract(pi);
        let from_table = decompose_character(&ctx, &table, CharBasis::Tilting { p })?;
        if !from_table.nonnegative() {
            report.fail(json!({"m": m, "source": "table", "terms": from_table.terms}));
        }
        let realization = weyl_module(&ctx, &[pi - 1])?.tensor(&weyl_module(&ctx, &[m - pi + 1])?)?;
        let own = decompose_character(&ctx, &realization.character(), CharBasis::Tilting { p })?;
        if !own.nonnegative() || !own.terms.contains(&(vec![m], 1)) {
            report.fail(json!({"m": m, "source": "realization", "terms": own.terms}));
        }
        let contracted = realization.contract();
        let from_module = decompose_character(&ctx, &contracted.character(), CharBasis::Tilting { p })?;
        if !from_module.nonnegative() || !contracted.validate().pass {
            report.fail(json!({"m": m, "source": "contracted_realization", "terms": from_module.terms}));
        }
        tilting_rows.push(json!({
            "m": m,
            "table": from_table.terms,
            "realization": from_module.terms,
        }));
    }
    report.set_result(json!({
        "weyl": weyl_rows,
        "weyl_nonnegative": weyl_nonneg,
        "tilting": tilting_rows,
    }));
    Ok(report.finish())
}

/// A z-extended context, its base and the projection between them.
pub struct ZExtensionCase {
    pub name: String,
    pub hat: Ctx,
    pub base: Ctx,
    pub proj: TorusProjection,
    pub module: WeightModule<PrimeField>,
}

/// Modules over the z-extensions of `PGL₂` and `GL₂` whose weights have
/// varying killed coordinates: Weyl modules, direct sums, tensor products
/// and Frobenius twists.
pub fn z_extension_corpus(p: u64) -> Result<Vec<ZExtensionCase>, ModuleError> {
    let field = PrimeField::new(p).map_err(AlgebraError::from)?;
    let pi = p as i64;
    let mut out = Vec::new();
    for base_datum in [corpus::pgl2(), corpus::gl2()] {
        let (ext, m) = base_datum.z_extend().map_err(AlgebraError::from)?;
        let proj = TorusProjection::from_morphism(&m).map_err(AlgebraError::from)?;
        let hat = AlgebraContext::new(&ext, field.clone())?;
        let base = AlgebraContext::new(&base_datum, field.clone())?;
        let highest = dominant_weights(&hat, 2 * pi + 1);
        let killed = proj.killed()[0];
        // same highest weight with the killed coordinate moved to 0, p, 1
        let with_killed = |lam: &Vec<i64>, k: i64| -> Vec<i64> {
            let mut w = lam.clone();
            let shift = k - w[killed];
            w[killed] = k;
            // keep ⟨λ, α∨⟩ by compensating on a kept coordinate
            let j = (0..w.len()).find(|&j| hat.coroot()[j] != 0 && j != killed).unwrap();
            let c = hat.coroot()[j];
            let k_co = hat.coroot()[killed];
            if (shift * k_co) % c == 0 {
                w[j] -= shift * k_co / c;
            }
            w
        };
        let mut push = |label: String, module: WeightModule<PrimeField>| {
            out.push(ZExtensionCase {
                name: format!("{}:{}", ext.name, label),
                hat: Arc::clone(&hat),
                base: Arc::clone(&base),
                proj: proj.clone(),
                module,
            });
        };
        for lam in highest.iter().step_by(2) {
            push(format!("V{lam:?}"), weyl_module(&hat, lam)?);
        }
        for lam in highest.iter().skip(1).step_by(3) {
            let mut sum = weyl_module(&hat, &with_killed(lam, 0))?;
            for k in [pi, 1, -pi] {
                // the compensation can fail to keep λ dominant; skip those
                if let Ok(v) = weyl_module(&hat, &with_killed(lam, k)) {
                    sum = sum.direct_sum(&v)?;
                }
            }
            push(format!("sum{lam:?}"), sum);
        }
        let a = weyl_module(&hat, &with_killed(&highest[1], 1))?;
        let b = weyl_module(&hat, &with_killed(&highest[p as usize], -1))?;
        push("tensor".into(), a.tensor(&b)?);
        push("twist".into(), a.frobenius_twist().direct_sum(&b)?);
    }
    Ok(out)
}

/// `contract(M^K) = (contract M)^K` on the z-extension corpus.
pub fn verify_k_invariants(p: u64) -> Result<VerificationReport, ModuleError> {
    let cases = z_extension_corpus(p)?;
    let mut report = VerificationReport::new("module.k_invariants")
        .param("p", p)
        .param("modules", cases.len());
    let rows: Vec<Result<(serde_json::Value, Vec<serde_json::Value>), ModuleError>> = cases
        .par_iter()
        .map(|case| {
            let mut bad = Vec::new();
            let m = &case.module;
            if !m.validate().pass {
                bad.push(json!({"module": case.name, "check": "valid"}));
            }
            let lhs = m.k_invariants(&case.proj, &case.base)?.contract();
            let rhs = m.contract().k_invariants(&case.proj, &case.base)?;
            if lhs != rhs {
                bad.push(json!({"module": case.name, "check": "equal", "lhs_dim": lhs.dim(), "rhs_dim": rhs.dim()}));
            }
            let row = json!({"module": case.name, "dim": m.dim(), "contracted_invariants": lhs.dim()});
            Ok((row, bad))
        })
        .collect();
    let mut summary = Vec::new();
    for row in rows {
        let (r, bad) = row?;
        report.trials(2);
        summary.push(r);
        bad.into_iter().for_each(|f| report.fail(f));
    }
    report.set_result(json!(summary));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominant_weight_choice() {
        let c = sl2(2).unwrap();
        assert_eq!(dominant_weights(&c, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
        let g = AlgebraContext::new(&corpus::pgl2(), PrimeField::new(2).unwrap()).unwrap();
        assert_eq!(dominant_weights(&g, 4), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn small_sweeps() {
        let c = sl2(3).unwrap();
        let r = verify_roundtrip(&c, &dominant_weights(&c, 6)).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        let r = verify_donkin(2, 4).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        let r = verify_characters(3, 9).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn k_invariant_corpus() {
        for p in [2, 3] {
            let cases = z_extension_corpus(p).unwrap();
            assert!(cases.len() >= 10);
            // some case has a proper nonzero invariant subspace
            assert!(cases.iter().any(|c| {
                let k = c.module.k_invariants(&c.proj, &c.base).unwrap().dim();
                k > 0 && k < c.module.dim()
            }));
            let r = verify_k_invariants(p).unwrap();
            assert!(r.pass, "{:?}", r.failures);
        }
    }

    #[test]
    fn k_invariants_can_vanish() {
        let (ext, m) = corpus::gl2().z_extend().unwrap();
        let proj = TorusProjection::from_morphism(&m).unwrap();
        let f = PrimeField::new(3).unwrap();
        let hat = AlgebraContext::new(&ext, f.clone()).unwrap();
        let base = AlgebraContext::new(&corpus::gl2(), f).unwrap();
        let v = weyl_module(&hat, &[1, 2, 0]).unwrap();
        assert_eq!(v.k_invariants(&proj, &base).unwrap().dim(), 0);
        let v = weyl_module(&hat, &[0, 2, 0]).unwrap();
        let k = v.k_invariants(&proj, &base).unwrap();
        assert_eq!(k, weyl_module(&base, &[2, 0]).unwrap());
    }
}
