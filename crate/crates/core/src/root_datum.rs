//! Root data with `X = Y = ℤ^ℓ` in dual coordinates, and the z-extension.
//!
//! A root datum stores the full root set (positive and negative roots) and
//! the coroot attached to each root at the same index. The cocharacter basis
//! `H_1, …, H_ℓ` of `Y` is the standard basis, so `α(H_i)` is the `i`-th
//! coordinate of `α` and a coroot's coordinates are the `c_i` with
//! `H_α = Σ c_i H_i`.

use std::collections::{HashMap, HashSet};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{DatumError, FormatError};
use crate::lattice::{self, dot, IntMatrix};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple_indices: Vec<usize>,
}

/// An integer matrix acting on cocharacters, `target_rank × source_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMorphism {
    pub source_rank: usize,
    pub target_rank: usize,
    pub matrix: IntMatrix,
}

impl LatticeMorphism {
    pub fn apply(&self, y: &[i64]) -> Vec<i64> {
        lattice::mat_vec(&self.matrix, y)
    }

    /// Pullback of a character along the morphism (the transpose action).
    pub fn pullback(&self, x: &[i64]) -> Vec<i64> {
        (0..self.source_rank)
            .map(|j| (0..self.target_rank).map(|i| self.matrix[i][j] * x[i]).sum())
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        let d = lattice::elementary_divisors(&self.matrix, self.source_rank);
        d.len() == self.target_rank && d.iter().all(|&x| x == 1)
    }
}

impl RootDatum {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let rd: RootDatum = serde_json::from_str(text)?;
        rd.check_shape()?;
        Ok(rd)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("root datum serializes")
    }

    /// Dimension and index checks, distinct from the root-datum axioms.
    pub fn check_shape(&self) -> Result<(), DatumError> {
        if self.roots.len() != self.coroots.len() {
            return Err(DatumError::Malformed(format!(
                "{} roots but {} coroots",
                self.roots.len(),
                self.coroots.len()
            )));
        }
        for (k, v) in self.roots.iter().chain(&self.coroots).enumerate() {
            if v.len() != self.rank {
                return Err(DatumError::Malformed(format!(
                    "vector #{k} has length {}, rank is {}",
                    v.len(),
                    self.rank
                )));
            }
        }
        if let Some(&i) = self.simple_indices.iter().find(|&&i| i >= self.roots.len()) {
            return Err(DatumError::Malformed(format!("simple index {i} out of range")));
        }
        Ok(())
    }

    pub fn pairing(&self, root: usize, coroot: usize) -> i64 {
        dot(&self.roots[root], &self.coroots[coroot])
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_indices.len()
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        self.simple_indices.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn simple_coroots(&self) -> Vec<Vec<i64>> {
        self.simple_indices.iter().map(|&i| self.coroots[i].clone()).collect()
    }

    /// Indices of the roots that are nonnegative combinations of simple roots.
    pub fn positive_indices(&self) -> Vec<usize> {
        let simple = self.simple_roots();
        (0..self.roots.len())
            .filter(|&k| {
                lattice::solve_in_basis(&simple, &self.roots[k])
                    .is_some_and(|x| lattice::is_nonneg_integral(&x))
            })
            .collect()
    }

    fn root_index(&self) -> HashMap<&[i64], usize> {
        self.roots.iter().enumerate().map(|(k, r)| (r.as_slice(), k)).collect()
    }

    fn coroot_index(&self) -> HashMap<&[i64], usize> {
        self.coroots.iter().enumerate().map(|(k, r)| (r.as_slice(), k)).collect()
    }

    /// Checks the root-datum axioms and the base property of `simple_indices`.
    pub fn validate(&self) -> VerificationReport {
        let mut report = VerificationReport::new("rootdatum.validate")
            .param("name", &self.name)
            .param("rank", self.rank);
        if let Err(e) = self.check_shape() {
            report.fail(serde_json::json!({ "malformed": e.to_string() }));
            return report.finish();
        }
        let n = self.roots.len();
        let roots = self.root_index();
        let coroots = self.coroot_index();
        if roots.len() != n || coroots.len() != n {
            report.fail(serde_json::json!({ "axiom": "distinct", "detail": "repeated root or coroot" }));
        }
        for k in 0..n {
            report.trial();
            if self.pairing(k, k) != 2 {
                report.fail(serde_json::json!({
                    "axiom": "pairing", "root": k, "value": self.pairing(k, k)
                }));
            }
        }
        for i in 0..n {
            for j in 0..n {
                report.trial();
                // s_i(α_j) = α_j - <α_j, α_i^∨> α_i, and dually on coroots
                let c = self.pairing(j, i);
                let image: Vec<i64> =
                    self.roots[j].iter().zip(&self.roots[i]).map(|(a, b)| a - c * b).collect();
                let d = self.pairing(i, j);
                let co_image: Vec<i64> = self.coroots[j]
                    .iter()
                    .zip(&self.coroots[i])
                    .map(|(a, b)| a - d * b)
                    .collect();
                match (roots.get(image.as_slice()), coroots.get(co_image.as_slice())) {
                    (Some(&a), Some(&b)) if a == b => {}
                    _ => report.fail(serde_json::json!({
                        "axiom": "reflection", "reflection": i, "root": j
                    })),
                }
            }
        }
        let simple = self.simple_roots();
        let independent = lattice::rank(&simple, self.rank) == simple.len();
        if !independent {
            report.fail(serde_json::json!({ "axiom": "base", "detail": "simple roots dependent" }));
        } else {
            for k in 0..n {
                report.trial();
                let signed = lattice::solve_in_basis(&simple, &self.roots[k]).is_some_and(|x| {
                    lattice::is_integral(&x)
                        && (x.iter().all(|v| !v.is_negative()) || x.iter().all(|v| !v.is_positive()))
                });
                if !signed {
                    report.fail(serde_json::json!({ "axiom": "base", "root": k }));
                }
            }
        }
        report.finish()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().pass
    }

    /// `Y ∩ ℚΦ^∨ = ℤΦ^∨`, i.e. every nonzero elementary divisor of the
    /// coroot matrix is 1.
    pub fn is_derived_simply_connected(&self) -> bool {
        if self.coroots.is_empty() {
            return true;
        }
        lattice::elementary_divisors(&self.coroots, self.rank)
            .iter()
            .all(|&d| d == 1)
    }

    /// The z-extension: `X̂ = X^sc ⊕ X`, `Ŷ = Y^sc ⊕ Y` with `Y^sc` spanned
    /// by the simple coroots, roots `(0, α)`, coroots `(α^∨_sc, α^∨)`, and
    /// the projection `Ŷ → Y`.
    pub fn z_extend(&self) -> Result<(RootDatum, LatticeMorphism), DatumError> {
        let validity = self.validate();
        if !validity.pass {
            return Err(DatumError::Invalid(format!(
                "{} failures, first {}",
                validity.failures.len(),
                validity.failures[0]
            )));
        }
        let s = self.semisimple_rank();
        let simple_coroots = self.simple_coroots();
        let mut roots = Vec::with_capacity(self.roots.len());
        let mut coroots = Vec::with_capacity(self.roots.len());
        for (alpha, coroot) in self.roots.iter().zip(&self.coroots) {
            let coords = lattice::solve_in_basis(&simple_coroots, coroot)
                .filter(|x| lattice::is_integral(x))
                .ok_or_else(|| {
                    DatumError::Invalid(format!("coroot {coroot:?} not integral in simple coroots"))
                })?;
            let mut root = vec![0; s];
            root.extend_from_slice(alpha);
            let mut co: Vec<i64> = coords.iter().map(|v| v.to_integer()).collect();
            co.extend_from_slice(coroot);
            roots.push(root);
            coroots.push(co);
        }
        let extended = RootDatum {
            name: format!("{}^z", self.name),
            rank: s + self.rank,
            roots,
            coroots,
            simple_indices: self.simple_indices.clone(),
        };
        let matrix: IntMatrix = (0..self.rank)
            .map(|i| (0..s + self.rank).map(|j| i64::from(j == s + i)).collect())
            .collect();
        let projection = LatticeMorphism {
            source_rank: s + self.rank,
            target_rank: self.rank,
            matrix,
        };
        let post = z_extension_postconditions(self, &extended, &projection);
        if !post.pass {
            return Err(DatumError::Invalid(format!("z-extension postconditions: {}", post.failures[0])));
        }
        Ok((extended, projection))
    }

    /// Bounded search for `P ∈ GL(ℓ, ℤ)` on cocharacters carrying coroots to
    /// coroots, with `P^{-T}` carrying the matching roots to roots.
    ///
    /// Entries are enumerated row-major in the order `0, 1, -1, 2, -2, …`, and
    /// the first match in that order is returned. `None` is inconclusive.
    pub fn find_isomorphism(&self, other: &RootDatum, bound: i64) -> Option<IntMatrix> {
        if self.rank != other.rank || self.roots.len() != other.roots.len() {
            return None;
        }
        let n = self.rank;
        let values: Vec<i64> = std::iter::once(0)
            .chain((1..=bound).flat_map(|v| [v, -v]))
            .collect();
        let target_coroots = other.coroot_index();
        let target_roots = other.root_index();
        // Depth-first over rows in the same row-major order; a partial matrix
        // is pruned once some coroot's image prefix matches no target coroot.
        let prefixes: Vec<HashSet<&[i64]>> = (0..=n)
            .map(|i| other.coroots.iter().map(|c| &c[..i]).collect())
            .collect();
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
        search_rows(self, other, &values, &prefixes, &mut rows, &target_roots, &target_coroots)
    }
}

fn search_rows(
    from: &RootDatum,
    to: &RootDatum,
    values: &[i64],
    prefixes: &[HashSet<&[i64]>],
    rows: &mut Vec<Vec<i64>>,
    target_roots: &HashMap<&[i64], usize>,
    target_coroots: &HashMap<&[i64], usize>,
) -> Option<IntMatrix> {
    let n = from.rank;
    if rows.len() == n {
        return check_isomorphism(from, to, rows, target_roots, target_coroots);
    }
    let depth = rows.len();
    let mut digits = vec![0usize; n];
    loop {
        let row: Vec<i64> = digits.iter().map(|&d| values[d]).collect();
        rows.push(row);
        let ok = from.coroots.iter().all(|c| {
            let image: Vec<i64> = rows.iter().map(|r| lattice::dot(r, c)).collect();
            prefixes[depth + 1].contains(image.as_slice())
        });
        if ok {
            if let Some(found) =
                search_rows(from, to, values, prefixes, rows, target_roots, target_coroots)
            {
                return Some(found);
            }
        }
        rows.pop();
        // odometer, last cell fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < values.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn check_isomorphism(
    from: &RootDatum,
    to: &RootDatum,
    p: &IntMatrix,
    target_roots: &HashMap<&[i64], usize>,
    target_coroots: &HashMap<&[i64], usize>,
) -> Option<IntMatrix> {
    let inv = lattice::unimodular_inverse(p)?;
    let inv_t = lattice::transpose(&inv, from.rank);
    let mut hit = vec![false; to.roots.len()];
    for k in 0..from.roots.len() {
        let co = lattice::mat_vec(p, &from.coroots[k]);
        let idx = *target_coroots.get(co.as_slice())?;
        let root = lattice::mat_vec(&inv_t, &from.roots[k]);
        if target_roots.get(root.as_slice()) != Some(&idx) || hit[idx] {
            return None;
        }
        hit[idx] = true;
    }
    Some(p.clone())
}

/// The z-extension postconditions, checked against the original datum.
pub fn z_extension_postconditions(
    base: &RootDatum,
    extended: &RootDatum,
    projection: &LatticeMorphism,
) -> VerificationReport {
    let mut report = VerificationReport::new("rootdatum.z_extend")
        .param("datum", &base.name)
        .param("extended_rank", extended.rank);
    report.trial();
    let validity = extended.validate();
    if !validity.pass {
        report.fail(serde_json::json!({ "postcondition": "valid", "failures": validity.failures }));
    }
    report.trial();
    if !extended.is_derived_simply_connected() {
        report.fail(serde_json::json!({ "postcondition": "derived_simply_connected" }));
    }
    report.trial();
    if !projection.is_surjective() {
        report.fail(serde_json::json!({ "postcondition": "surjective" }));
    }
    for k in 0..extended.roots.len().min(base.roots.len()) {
        report.trial();
        if projection.apply(&extended.coroots[k]) != base.coroots[k]
            || projection.pullback(&base.roots[k]) != extended.roots[k]
        {
            report.fail(serde_json::json!({ "postcondition": "compatible", "root": k }));
        }
    }
    if extended.roots.len() != base.roots.len() {
        report.fail(serde_json::json!({ "postcondition": "compatible", "detail": "root count" }));
    }
    report.finish()
}

/// Built-in root data shipped with the crate, keyed by file name.
pub mod corpus {
    use super::RootDatum;

    pub const FILES: &[(&str, &str)] = &[
        ("sl2.json", include_str!("../corpus/sl2.json")),
        ("gl2.json", include_str!("../corpus/gl2.json")),
        ("pgl2.json", include_str!("../corpus/pgl2.json")),
        ("sl3.json", include_str!("../corpus/sl3.json")),
        ("pgl3.json", include_str!("../corpus/pgl3.json")),
        ("b2.json", include_str!("../corpus/b2.json")),
    ];

    /// Looks up `name`, with or without the `.json` suffix.
    pub fn get(name: &str) -> Option<RootDatum> {
        let file = if name.ends_with(".json") {
            name.to_string()
        } else {
            format!("{name}.json")
        };
        FILES
            .iter()
            .find(|(f, _)| *f == file)
            .map(|(_, text)| RootDatum::from_json(text).expect("shipped corpus parses"))
    }

    pub fn sl2() -> RootDatum {
        get("sl2").unwrap()
    }
    pub fn gl2() -> RootDatum {
        get("gl2").unwrap()
    }
    pub fn pgl2() -> RootDatum {
        get("pgl2").unwrap()
    }

    /// `GL_n` with `X = Y = ℤ^n`, roots `ε_i - ε_j`.
    pub fn gl(n: usize) -> RootDatum {
        let mut roots = Vec::new();
        let mut simple = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if j == i + 1 {
                        simple.push(roots.len());
                    }
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[j] = -1;
                    roots.push(v);
                }
            }
        }
        RootDatum {
            name: format!("GL{n}"),
            rank: n,
            coroots: roots.clone(),
            roots,
            simple_indices: simple,
        }
    }

    /// `SL_n` with `Y` the coroot lattice (basis: simple coroots) and `X` the
    /// weight lattice (basis: fundamental weights).
    pub fn sl(n: usize) -> RootDatum {
        type_a(n, false)
    }

    /// `PGL_n` with `X` the root lattice (basis: simple roots).
    pub fn pgl(n: usize) -> RootDatum {
        type_a(n, true)
    }

    fn type_a(n: usize, adjoint: bool) -> RootDatum {
        let l = n - 1;
        let cartan = |i: usize, j: usize| -> i64 {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut simple = Vec::new();
        // α_{ij} = α_i + … + α_{j-1} for i < j, as simple-root coefficients
        for i in 0..l {
            for j in i + 1..=l {
                for sign in [1i64, -1] {
                    let coeffs: Vec<i64> =
                        (0..l).map(|k| if k >= i && k < j { sign } else { 0 }).collect();
                    // in fundamental-weight coordinates a root is Σ_k coeff_k (row k of Cartan)
                    let in_weights: Vec<i64> = (0..l)
                        .map(|m| (0..l).map(|k| coeffs[k] * cartan(k, m)).sum())
                        .collect();
                    if sign == 1 && j == i + 1 {
                        simple.push(roots.len());
                    }
                    if adjoint {
                        roots.push(coeffs.clone());
                        coroots.push(in_weights);
                    } else {
                        roots.push(in_weights);
                        coroots.push(coeffs);
                    }
                }
            }
        }
        RootDatum {
            name: format!("{}{n}", if adjoint { "PGL" } else { "SL" }),
            rank: l,
            roots,
            coroots,
            simple_indices: simple,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::corpus;
    use super::*;

    #[test]
    fn shipped_corpus_is_valid() {
        for (file, _) in corpus::FILES {
            let rd = corpus::get(file).unwrap();
            let report = rd.validate();
            assert!(report.pass, "{file}: {:?}", report.failures);
        }
    }

    #[test]
    fn generated_type_a_matches_files() {
        assert_eq!(corpus::sl(2).roots, corpus::sl2().roots);
        assert_eq!(corpus::pgl(2).coroots, corpus::pgl2().coroots);
        assert_eq!(corpus::gl(2).roots, corpus::gl2().roots);
        let sl3 = corpus::get("sl3").unwrap();
        let gen = corpus::sl(3);
        let mut a = sl3.roots.clone();
        let mut b = gen.roots.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for n in 2..=4 {
            assert!(corpus::gl(n).is_valid());
            assert!(corpus::sl(n).is_valid());
            assert!(corpus::pgl(n).is_valid());
        }
    }

    #[test]
    fn validation_examples() {
        assert!(corpus::sl2().validate().pass);
        assert!(corpus::pgl2().validate().pass);
        let mut bad = corpus::sl2();
        bad.coroots = vec![vec![2], vec![-2]];
        let report = bad.validate();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f["axiom"] == "pairing"));
    }

    #[test]
    fn malformed_is_reported_separately() {
        let mut bad = corpus::sl2();
        bad.coroots.pop();
        assert!(matches!(bad.check_shape(), Err(DatumError::Malformed(_))));
        let report = bad.validate();
        assert!(report.failures[0].get("malformed").is_some());
        assert!(RootDatum::from_json(r#"{"name":"x","rank":1,"roots":[[2,0]],"coroots":[[1]],"simple_indices":[0]}"#).is_err());
    }

    #[test]
    fn simply_connected_examples() {
        assert!(corpus::sl2().is_derived_simply_connected());
        assert!(!corpus::pgl2().is_derived_simply_connected());
        assert!(corpus::gl2().is_derived_simply_connected());
        assert!(corpus::get("sl3").unwrap().is_derived_simply_connected());
        assert!(!corpus::get("pgl3").unwrap().is_derived_simply_connected());
        // SO(5): the short coroots are 2ε_i
        assert!(!corpus::get("b2").unwrap().is_derived_simply_connected());
    }

    #[test]
    fn z_extend_pgl2() {
        let (ext, proj) = corpus::pgl2().z_extend().unwrap();
        assert_eq!(ext.rank, 2);
        assert!(ext.roots.contains(&vec![0, 1]));
        assert!(ext.coroots.contains(&vec![1, 2]));
        assert_eq!(proj.matrix, vec![vec![0, 1]]);
        assert_eq!(proj.apply(&[5, 7]), vec![7]);
        assert!(ext.is_derived_simply_connected());
        assert!(proj.is_surjective());
    }

    #[test]
    fn z_extend_corpus() {
        let mut all: Vec<RootDatum> = corpus::FILES.iter().map(|(f, _)| corpus::get(f).unwrap()).collect();
        for n in 2..=4 {
            all.extend([corpus::sl(n), corpus::pgl(n), corpus::gl(n)]);
        }
        for rd in all {
            let (ext, proj) = rd.z_extend().unwrap_or_else(|e| panic!("{}: {e}", rd.name));
            assert!(z_extension_postconditions(&rd, &ext, &proj).pass);
            // Cartan integers are preserved
            for &i in &rd.simple_indices {
                for &j in &rd.simple_indices {
                    assert_eq!(ext.pairing(j, i), rd.pairing(j, i));
                }
            }
        }
    }

    #[test]
    fn z_extend_rejects_invalid() {
        let mut bad = corpus::sl2();
        bad.coroots = vec![vec![2], vec![-2]];
        assert!(matches!(bad.z_extend(), Err(DatumError::Invalid(_))));
    }

    #[test]
    fn isomorphism_examples() {
        let (ext, _) = corpus::pgl2().z_extend().unwrap();
        assert_eq!(
            ext.find_isomorphism(&corpus::gl2(), 2),
            Some(vec![vec![1, 0], vec![1, -1]])
        );
        assert_eq!(corpus::sl2().find_isomorphism(&corpus::sl2(), 1), Some(vec![vec![1]]));
        assert_eq!(corpus::sl2().find_isomorphism(&corpus::pgl2(), 5), None);
        assert_eq!(corpus::gl2().find_isomorphism(&corpus::sl2(), 5), None);
    }

    #[test]
    fn isomorphism_results_verify_by_substitution() {
        let (ext, _) = corpus::sl(3).z_extend().unwrap();
        let (ext2, _) = corpus::sl(3).z_extend().unwrap();
        // the search order prefers a leading 0, so a symmetry of the diagram
        // is found before the identity
        let p = ext.find_isomorphism(&ext2, 1).unwrap();
        assert_eq!(p[0], vec![0, 1, 0, 0]);
        assert_eq!(lattice::determinant(&p).abs(), 1);
        for k in 0..ext.roots.len() {
            assert!(ext2.coroots.contains(&lattice::mat_vec(&p, &ext.coroots[k])));
        }
        let gl2 = corpus::gl2();
        let p = gl2.find_isomorphism(&gl2, 1).unwrap();
        let inv_t = lattice::transpose(&lattice::unimodular_inverse(&p).unwrap(), 2);
        for k in 0..gl2.roots.len() {
            assert!(gl2.coroots.contains(&lattice::mat_vec(&p, &gl2.coroots[k])));
            assert!(gl2.roots.contains(&lattice::mat_vec(&inv_t, &gl2.roots[k])));
        }
    }

    #[test]
    fn json_round_trip() {
        let rd = corpus::get("b2").unwrap();
        assert_eq!(RootDatum::from_json(&rd.to_json()).unwrap(), rd);
    }
}
