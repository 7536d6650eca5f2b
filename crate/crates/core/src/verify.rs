//! Exhaustive and sampled sweeps over the rank-one hyperalgebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::hyperalgebra::{AlgebraContext, PbwElement};
use crate::periodic::{ratio, PeriodicGrid, Values};
use crate::report::VerificationReport;
use crate::ring::{CoefficientRing, PrimeField};
use crate::torus::{MultiIndex, TorusElement};

/// All `b ∈ ℕ^rank` with `|b| = Σ b_i ≤ deg`, in lexicographic order.
pub fn multi_indices(rank: usize, deg: u32) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|b| {
                let used: u32 = b.iter().sum();
                (0..=deg - used).map(move |k| {
                    let mut c = b.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// Basis monomials `F^(a) binom(H, b) E^(c)` with `a, c, |b| ≤ deg`.
pub fn monomial_grid(rank: usize, deg: u32) -> Vec<(u32, MultiIndex, u32)> {
    let bs = multi_indices(rank, deg);
    let mut out = Vec::new();
    for a in 0..=deg {
        for b in &bs {
            for c in 0..=deg {
                out.push((a, b.clone(), c));
            }
        }
    }
    out
}

fn unit(rank: usize, i: usize, k: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = k;
    v
}

/// Conjugation of `φ⁰(binom(H_i + c, b))` past `F^(pa)` and `E^(pa)`:
///
/// ```text
/// F^(pa) φ⁰binom(H_i + c, b) = φ⁰binom(H_i + aα(H_i) + c, b) F^(pa)
/// E^(pa) φ⁰binom(H_i + c, b) = φ⁰binom(H_i - aα(H_i) + c, b) E^(pa)
/// ```
///
/// both sides multiplied out in the PBW basis.
pub fn verify_borel(
    ctx: &Arc<AlgebraContext<PrimeField>>,
    a_max: u32,
    b_max: u32,
    c_range: (i64, i64),
) -> VerificationReport {
    let mut report = VerificationReport::new("verify.borel")
        .param("context", ctx.name())
        .param("p", ctx.ring().p())
        .param("a_max", a_max)
        .param("b_max", b_max)
        .param("c_range", c_range);
    let p = ctx.ring().p() as u32;
    let rank = ctx.rank();
    let field = ctx.ring();
    let mut cases = Vec::new();
    for side in ["F", "E"] {
        for i in 0..rank {
            for a in 0..=a_max {
                for b in 0..=b_max {
                    for c in c_range.0..=c_range.1 {
                        cases.push((side, i, a, b, c));
                    }
                }
            }
        }
    }
    let failures: Vec<Option<Value>> = cases
        .par_iter()
        .map(|&(side, i, a, b, c)| {
            let alpha_i = ctx.alpha()[i];
            let torus = |shift: i64| {
                let t = TorusElement::lincomb_binom(field, &unit(rank, i, 1), c + shift, b).phi0();
                PbwElement::from_torus(ctx, t)
            };
            let (root, moved) = match side {
                "F" => (PbwElement::f(ctx, p * a), torus(a as i64 * alpha_i)),
                _ => (PbwElement::e(ctx, p * a), torus(-(a as i64) * alpha_i)),
            };
            let lhs = &root * &torus(0);
            let rhs = &moved * &root;
            (lhs != rhs).then(|| json!({"side": side, "i": i, "a": a, "b": b, "c": c}))
        })
        .collect();
    report.trials(cases.len() as u64);
    for f in failures.into_iter().flatten() {
        report.fail(f);
    }
    report.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// The splitting theorem on basis monomials with `a, c, |b| ≤ deg`:
/// `φ(xy) = φ(x)φ(y)` on all pairs, `Dist(F)(φ(x)) = x`, and the
/// `E^(pa) F^(pb) μ₀` expansion for `a, b ≤ deg`.
pub fn verify_theorem(
    ctx: &Arc<AlgebraContext<PrimeField>>,
    deg: u32,
    mode: TheoremMode,
) -> VerificationReport {
    let mut report = VerificationReport::new("verify.theorem")
        .param("context", ctx.name())
        .param("p", ctx.ring().p())
        .param("deg", deg)
        .param("mode", mode);
    if let TheoremMode::Sampled { seed, .. } = mode {
        report = report.with_seed(seed);
    }
    let grid = monomial_grid(ctx.rank(), deg);
    report.absorb(check_frobenius_inverse(ctx, &grid));
    report.absorb(check_ef_identity(ctx, deg));
    match mode {
        TheoremMode::Exhaustive => {
            report.note(
                "products are compared on p^K-periodic value tables, which represent the torus \
                 parts faithfully; the outer F^(a), E^(c') factors act by binomial scalars on \
                 distinct PBW keys",
            );
            report.absorb(check_multiplicative_exhaustive(ctx, deg));
        }
        TheoremMode::Sampled { samples, seed } => {
            report.absorb(check_multiplicative_sampled(ctx, &grid, samples, seed));
        }
    }
    report.finish()
}

fn monomial(ctx: &Arc<AlgebraContext<PrimeField>>, m: &(u32, MultiIndex, u32)) -> PbwElement<PrimeField> {
    PbwElement::monomial(ctx, m.0, &m.1, m.2, 1)
}

fn check_frobenius_inverse(
    ctx: &Arc<AlgebraContext<PrimeField>>,
    grid: &[(u32, MultiIndex, u32)],
) -> VerificationReport {
    let mut report = VerificationReport::new("theorem.frobenius_after_phi");
    let bad: Vec<Option<Value>> = grid
        .par_iter()
        .map(|m| {
            let x = monomial(ctx, m);
            (x.phi().frobenius() != x).then(|| json!({"a": m.0, "b": m.1.to_vec(), "c": m.2}))
        })
        .collect();
    report.trials(grid.len() as u64);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    report.finish()
}

/// `E^(pa) F^(pb) μ₀ = Σ_r F^(p(b-r)) φ⁰binom(H_α + 2r - a - b, r) E^(p(a-r))`.
fn check_ef_identity(ctx: &Arc<AlgebraContext<PrimeField>>, deg: u32) -> VerificationReport {
    let mut report = VerificationReport::new("theorem.ef_expansion");
    let p = ctx.ring().p() as u32;
    let mu = PbwElement::mu0(ctx);
    let pairs: Vec<(u32, u32)> = (0..=deg).flat_map(|a| (0..=deg).map(move |b| (a, b))).collect();
    let bad: Vec<Option<Value>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let lhs = &(&PbwElement::e(ctx, p * a) * &PbwElement::f(ctx, p * b)) * &mu;
            let mut rhs = PbwElement::zero(ctx);
            for r in 0..=a.min(b) {
                let t = ctx.h_alpha_binom(2 * r as i64 - a as i64 - b as i64, r).phi0();
                rhs = &rhs + &PbwElement::from_part(ctx, p * (b - r), t, p * (a - r));
            }
            (lhs != rhs).then(|| json!({"a": a, "b": b}))
        })
        .collect();
    report.trials(pairs.len() as u64);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    report.finish()
}

fn check_multiplicative_sampled(
    ctx: &Arc<AlgebraContext<PrimeField>>,
    grid: &[(u32, MultiIndex, u32)],
    samples: u64,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("theorem.multiplicative");
    let bad: Vec<Option<Value>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(seed, s);
            let i = rng.random_range(0..grid.len());
            let j = rng.random_range(0..grid.len());
            let x = monomial(ctx, &grid[i]);
            let y = monomial(ctx, &grid[j]);
            ((&x * &y).phi() != &x.phi() * &y.phi()).then(|| {
                json!({"sample": s, "x": [grid[i].0, grid[i].1.to_vec(), grid[i].2],
                       "y": [grid[j].0, grid[j].1.to_vec(), grid[j].2]})
            })
        })
        .collect();
    report.trials(samples);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    report.finish()
}

/// Independent stream for sample `index`, so samples can be drawn in any
/// order or in parallel.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Torus value tables shared by every middle product.
struct SweepTables {
    coarse: PeriodicGrid,
    fine: PeriodicGrid,
    bs: Vec<MultiIndex>,
    // [b][k] = binom(H, b)(H - kα) on the coarse grid, k ≤ deg
    coarse_shifts: Vec<Vec<Values>>,
    // [b][k] = φ⁰binom(H, b)(H - kα) on the fine grid, k ≤ p·deg
    fine_shifts: Vec<Vec<Values>>,
    coarse_binoms: BTreeMap<(i64, u32), Values>,
    fine_binoms: BTreeMap<(i64, u32), Values>,
}

impl SweepTables {
    fn new(ctx: &AlgebraContext<PrimeField>, deg: u32) -> Self {
        let field = ctx.ring();
        let p = field.p();
        let rank = ctx.rank();
        let fine = PeriodicGrid::covering(p, p * deg as u64, rank);
        let coarse = PeriodicGrid::new(p, fine.depth().saturating_sub(1), rank);
        assert!((deg as usize) < coarse.period() || deg == 0);
        let bs = multi_indices(rank, deg);
        let shifted = |g: &PeriodicGrid, v: &Values, k: u32| {
            let m: Vec<i64> = ctx.alpha().iter().map(|&a| -(k as i64) * a).collect();
            g.shift(v, &m)
        };
        let coarse_shifts: Vec<Vec<Values>> = bs
            .iter()
            .map(|b| {
                let v = coarse.from_torus(&TorusElement::monomial(field, b));
                (0..=deg).map(|k| shifted(&coarse, &v, k)).collect()
            })
            .collect();
        let fine_shifts: Vec<Vec<Values>> = bs
            .par_iter()
            .map(|b| {
                let base = coarse.from_torus(&TorusElement::monomial(field, b));
                let v = if fine.depth() == 0 { base } else { fine.lift_phi0(&coarse, &base) };
                (0..=p as u32 * deg).map(|k| shifted(&fine, &v, k)).collect()
            })
            .collect();
        let mut coarse_binoms = BTreeMap::new();
        for r in 0..=deg {
            for m in -2 * deg as i64..=0 {
                coarse_binoms.insert((m, r), coarse.lincomb_binom(ctx.coroot(), m, r));
            }
        }
        let pd = p as u32 * deg;
        let keys: Vec<(i64, u32)> = (0..=pd)
            .flat_map(|r| (-2 * pd as i64..=0).map(move |m| (m, r)))
            .collect();
        let fine_binoms = keys
            .par_iter()
            .map(|&(m, r)| ((m, r), fine.lincomb_binom(ctx.coroot(), m, r)))
            .collect();
        Self {
            coarse,
            fine,
            bs,
            coarse_shifts,
            fine_shifts,
            coarse_binoms,
            fine_binoms,
        }
    }

    /// `(binom(H, b1) E^(c)) · (F^(a2) binom(H, b2))` on the coarse grid,
    /// keyed by `(a, c)`.
    fn middle(&self, b1: usize, c: u32, a2: u32, b2: usize) -> BTreeMap<(u32, u32), Values> {
        let mut out = BTreeMap::new();
        for r in 0..=c.min(a2) {
            let m = 2 * r as i64 - c as i64 - a2 as i64;
            let v = self.coarse.mul3(
                &self.coarse_shifts[b1][(a2 - r) as usize],
                &self.coarse_binoms[&(m, r)],
                &self.coarse_shifts[b2][(c - r) as usize],
            );
            if v.iter().any(|&x| x != 0) {
                out.insert((a2 - r, c - r), v);
            }
        }
        out
    }

    /// `(φ⁰binom(H, b1) E^(pc)) · (F^(pa2) φ⁰binom(H, b2))` on the fine grid.
    fn middle_phi(&self, p: u32, b1: usize, c: u32, a2: u32, b2: usize) -> BTreeMap<(u32, u32), Values> {
        let (c, a2) = (p * c, p * a2);
        let mut out = BTreeMap::new();
        for r in 0..=c.min(a2) {
            let m = 2 * r as i64 - c as i64 - a2 as i64;
            let v = self.fine.mul3(
                &self.fine_shifts[b1][(a2 - r) as usize],
                &self.fine_binoms[&(m, r)],
                &self.fine_shifts[b2][(c - r) as usize],
            );
            if v.iter().any(|&x| x != 0) {
                out.insert((a2 - r, c - r), v);
            }
        }
        out
    }
}

/// How `cL · L = cR · R` constrains the outer scalars at one PBW key.
#[derive(Debug, Clone, Copy)]
enum Relation {
    /// `L = λ R` with `R ≠ 0`: need `cL λ = cR`.
    Proportional(u64),
    /// `R = 0`, `L ≠ 0`: need `cL = 0`.
    LeftOnly,
    /// Independent vectors: need `cL = cR = 0`.
    Independent,
}

fn check_multiplicative_exhaustive(ctx: &Arc<AlgebraContext<PrimeField>>, deg: u32) -> VerificationReport {
    let mut report = VerificationReport::new("theorem.multiplicative");
    let field = ctx.ring().clone();
    let p = field.p() as u32;
    let tables = SweepTables::new(ctx, deg);
    let nb = tables.bs.len();
    let outer: Vec<(u32, u32)> = (0..=deg).flat_map(|a| (0..=deg).map(move |c| (a, c))).collect();
    let middles: Vec<(usize, u32, u32, usize)> = (0..nb)
        .flat_map(|b1| {
            (0..=deg).flat_map(move |c| (0..=deg).flat_map(move |a2| (0..nb).map(move |b2| (b1, c, a2, b2))))
        })
        .collect();
    let failures: Vec<Vec<Value>> = middles
        .par_iter()
        .map(|&(b1, c, a2, b2)| {
            let m = tables.middle(b1, c, a2, b2);
            let mphi = tables.middle_phi(p, b1, c, a2, b2);
            // PBW key of φ(xy) ↔ (key of the middle, relation)
            let mut relations: Vec<((u32, u32), Option<(u32, u32)>, Relation)> = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            for (&(ma, mc), v) in &m {
                let key = (p * ma, p * mc);
                seen.insert(key);
                let lhs = if tables.fine.depth() == 0 { v.clone() } else { tables.fine.lift_phi0(&tables.coarse, v) };
                let rel = match mphi.get(&key) {
                    None => Relation::LeftOnly,
                    Some(r) => match ratio(&field, &lhs, r) {
                        Some(l) => Relation::Proportional(l),
                        None => Relation::Independent,
                    },
                };
                relations.push((key, Some((ma, mc)), rel));
            }
            for &key in mphi.keys() {
                if !seen.contains(&key) {
                    relations.push((key, None, Relation::Proportional(0)));
                }
            }
            let mut bad = Vec::new();
            for &(a, c2) in &outer {
                for &(key, mid, rel) in &relations {
                    let c_r = field.mul(
                        &field.binom((p * a + key.0) as i64, (p * a) as u64),
                        &field.binom((key.1 + p * c2) as i64, (p * c2) as u64),
                    );
                    let c_l = mid.map_or(0, |(ma, mc)| {
                        field.mul(
                            &field.binom((a + ma) as i64, a as u64),
                            &field.binom((mc + c2) as i64, c2 as u64),
                        )
                    });
                    let ok = match rel {
                        Relation::Proportional(l) => field.mul(&c_l, &l) == c_r,
                        Relation::LeftOnly => c_l == 0,
                        Relation::Independent => c_l == 0 && c_r == 0,
                    };
                    if !ok {
                        bad.push(json!({
                            "x": [a, tables.bs[b1].to_vec(), c],
                            "y": [a2, tables.bs[b2].to_vec(), c2],
                            "key": [key.0 + p * a, key.1 + p * c2],
                        }));
                        break;
                    }
                }
            }
            bad
        })
        .collect();
    let n = (nb * (deg as usize + 1) * (deg as usize + 1)) as u64;
    report.trials(n * n);
    failures.into_iter().flatten().for_each(|f| report.fail(f));
    report.finish()
}
