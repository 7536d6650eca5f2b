//! The projection `Dist(π̂)` from the torus algebra of a z-extension onto the
//! original torus algebra.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{AlgebraError, DatumError};
use crate::hyperalgebra::{AlgebraContext, PbwElement};
use crate::report::VerificationReport;
use crate::ring::{CoefficientRing, PrimeField};
use crate::root_datum::LatticeMorphism;
use crate::torus::{MultiIndex, TorusElement};
use crate::verify::multi_indices;

/// A coordinate projection `ℤ^ℓ′ → ℤ^ℓ` on cocharacters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusProjection {
    source_rank: usize,
    target_rank: usize,
    killed: Vec<usize>,
    // keep[j] = target coordinate of source coordinate j
    keep: Vec<Option<usize>>,
}

impl TorusProjection {
    /// Reads a 0/1 coordinate projection off a lattice morphism.
    pub fn from_morphism(m: &LatticeMorphism) -> Result<Self, DatumError> {
        let mut keep = vec![None; m.source_rank];
        for (i, row) in m.matrix.iter().enumerate() {
            if row.len() != m.source_rank {
                return Err(DatumError::NotProjection);
            }
            let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j] == 1).collect();
            let others = row.iter().filter(|&&x| x != 0 && x != 1).count();
            if ones.len() != 1 || others != 0 || keep[ones[0]].is_some() {
                return Err(DatumError::NotProjection);
            }
            keep[ones[0]] = Some(i);
        }
        if m.matrix.len() != m.target_rank {
            return Err(DatumError::NotProjection);
        }
        let killed = (0..m.source_rank).filter(|&j| keep[j].is_none()).collect();
        Ok(Self {
            source_rank: m.source_rank,
            target_rank: m.target_rank,
            killed,
            keep,
        })
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    /// Source coordinates sent to 0.
    pub fn killed(&self) -> &[usize] {
        &self.killed
    }

    pub fn keep(&self, source: usize) -> Option<usize> {
        self.keep[source]
    }

    /// Restriction of a source weight to the kept coordinates.
    pub fn restrict_weight(&self, w: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.target_rank];
        for (j, &x) in w.iter().enumerate() {
            if let Some(i) = self.keep[j] {
                out[i] = x;
            }
        }
        out
    }

    /// `binom(Ĥ_j, b) ↦ binom(H_keep(j), b)` on kept coordinates and
    /// `δ_{b,0}` on killed ones.
    pub fn dist_pi_hat<R: CoefficientRing>(&self, x: &TorusElement<R>) -> Result<TorusElement<R>, AlgebraError> {
        if x.rank() != self.source_rank {
            return Err(AlgebraError::RankMismatch(x.rank(), self.source_rank));
        }
        let terms = x
            .terms()
            .iter()
            .filter(|(b, _)| self.killed.iter().all(|&j| b[j] == 0))
            .map(|(b, c)| {
                let mut t = MultiIndex::from_elem(0, self.target_rank);
                for (j, &bj) in b.iter().enumerate() {
                    if let Some(i) = self.keep[j] {
                        t[i] = bj;
                    }
                }
                (t, c.clone())
            });
        Ok(TorusElement::from_terms(x.ring(), self.target_rank, terms))
    }

    /// `Dist(π̂)` on a rank-one slice: identity on `E`, `F`, and `dist_pi_hat`
    /// on torus parts.
    pub fn dist_pi_hat_pbw<R: CoefficientRing>(
        &self,
        x: &PbwElement<R>,
        target: &Arc<AlgebraContext<R>>,
    ) -> Result<PbwElement<R>, AlgebraError> {
        self.check_slices(x.context(), target)?;
        let mut out = PbwElement::zero(target);
        for (&(a, c), t) in x.parts() {
            out = &out + &PbwElement::from_part(target, a, self.dist_pi_hat(t)?, c);
        }
        Ok(out)
    }

    /// The extended root must vanish on killed coordinates and restrict to
    /// the base root; the same for coroots.
    pub fn check_slices<R: CoefficientRing>(
        &self,
        source: &AlgebraContext<R>,
        target: &AlgebraContext<R>,
    ) -> Result<(), AlgebraError> {
        if source.rank() != self.source_rank || target.rank() != self.target_rank {
            return Err(AlgebraError::ContextMismatch);
        }
        let alpha_ok = self.killed.iter().all(|&j| source.alpha()[j] == 0)
            && self.restrict_weight(source.alpha()) == target.alpha();
        let coroot_ok = self.restrict_weight(source.coroot()) == target.coroot();
        if alpha_ok && coroot_ok {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }
}

/// `Dist(π̂) ∘ φ̂ = φ ∘ Dist(π̂)` on torus monomials with `|b̂| ≤ deg`, plus
/// `Dist(π̂)(μ̂₀) = μ₀`. When rank-one slices are given, the same grid is
/// swept with `a, c ≤ deg` on PBW monomials.
pub fn verify_compat(
    proj: &TorusProjection,
    p: u64,
    deg: u32,
    slices: Option<(&Arc<AlgebraContext<PrimeField>>, &Arc<AlgebraContext<PrimeField>>)>,
) -> Result<VerificationReport, AlgebraError> {
    let field = PrimeField::new(p)?;
    let mut report = VerificationReport::new("verify.compat")
        .param("p", p)
        .param("deg", deg)
        .param("source_rank", proj.source_rank)
        .param("target_rank", proj.target_rank)
        .param("killed", proj.killed.clone())
        .param("slices", slices.is_some());
    let mu_hat = TorusElement::mu0(&field, proj.source_rank);
    report.trial();
    if proj.dist_pi_hat(&mu_hat)? != TorusElement::mu0(&field, proj.target_rank) {
        report.fail(json!({"check": "mu0"}));
    }
    let grid = multi_indices(proj.source_rank, deg);
    let bad: Vec<Option<serde_json::Value>> = grid
        .par_iter()
        .map(|b| {
            let x = TorusElement::monomial(&field, b);
            let lhs = proj.dist_pi_hat(&x.phi0()).expect("rank checked");
            let rhs = proj.dist_pi_hat(&x).expect("rank checked").phi0();
            (lhs != rhs).then(|| json!({"b": b.to_vec()}))
        })
        .collect();
    report.trials(grid.len() as u64);
    bad.into_iter().flatten().for_each(|f| report.fail(f));
    if let Some((hat, base)) = slices {
        proj.check_slices(hat, base)?;
        let cases: Vec<(u32, &MultiIndex, u32)> = (0..=deg)
            .flat_map(|a| grid.iter().flat_map(move |b| (0..=deg).map(move |c| (a, b, c))))
            .collect();
        let bad: Vec<Option<serde_json::Value>> = cases
            .par_iter()
            .map(|&(a, b, c)| {
                let x = PbwElement::monomial(hat, a, b, c, 1);
                let lhs = proj.dist_pi_hat_pbw(&x.phi(), base).expect("slices checked");
                let rhs = proj.dist_pi_hat_pbw(&x, base).expect("slices checked").phi();
                (lhs != rhs).then(|| json!({"a": a, "b": b.to_vec(), "c": c}))
            })
            .collect();
        report.trials(cases.len() as u64);
        bad.into_iter().flatten().for_each(|f| report.fail(f));
    }
    Ok(report.finish())
}
