//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use frobsplit_core::{corpus, AlgebraContext, PbwElement, PrimeField, TorusElement};

pub fn gl2(p: u64) -> Arc<AlgebraContext<PrimeField>> {
    AlgebraContext::new(&corpus::gl2(), PrimeField::new(p).expect("prime")).expect("rank one")
}

/// A dense-ish torus element: the sum of all `binom(H, b)` with `|b| ≤ deg`.
pub fn torus_sum(field: &PrimeField, rank: usize, deg: u32) -> TorusElement<PrimeField> {
    frobsplit_core::verify::multi_indices(rank, deg)
        .iter()
        .map(|b| TorusElement::monomial(field, b))
        .fold(TorusElement::zero(field, rank), |acc, x| &acc + &x)
}

/// `F^(a) binom(H, b) E^(c)` summed over `a, c ≤ deg` with fixed `b`.
pub fn pbw_sum(ctx: &Arc<AlgebraContext<PrimeField>>, deg: u32) -> PbwElement<PrimeField> {
    let b = vec![1; ctx.rank()];
    let mut x = PbwElement::zero(ctx);
    for a in 0..=deg {
        for c in 0..=deg {
            x = &x + &PbwElement::monomial(ctx, a, &b, c, 1);
        }
    }
    x
}
