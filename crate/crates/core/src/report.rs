//! Deterministic verification reports.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Record of one check. `pass` holds exactly when `failures` is empty.
///
/// Two runs with the same check name, parameters and seed produce
/// byte-identical JSON once `wall_time_ms` is removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub trials: u64,
    pub failures: Vec<Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<Value>,
    pub wall_time_ms: u64,
    #[serde(skip)]
    started: Option<Instant>,
}

/// Reports keep at most this many counterexamples; `trials` still counts all.
pub const MAX_RECORDED_FAILURES: usize = 50;

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            parameters: Map::new(),
            seed: None,
            trials: 0,
            failures: Vec::new(),
            pass: true,
            notes: Vec::new(),
            result: None,
            wall_time_ms: 0,
            started: Some(Instant::now()),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn trial(&mut self) {
        self.trials += 1;
    }

    pub fn trials(&mut self, n: u64) {
        self.trials += n;
    }

    pub fn fail(&mut self, counterexample: Value) {
        self.pass = false;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(counterexample);
        }
    }

    /// Folds a sub-report in, tagging its counterexamples with its check name.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.trials += other.trials;
        for f in other.failures {
            self.fail(serde_json::json!({ "check": other.check, "counterexample": f }));
        }
        if !other.pass && self.pass {
            self.pass = false;
        }
    }

    pub fn set_result(&mut self, value: Value) {
        self.result = Some(value);
    }

    pub fn finish(mut self) -> Self {
        if let Some(start) = self.started.take() {
            self.wall_time_ms = start.elapsed().as_millis() as u64;
        }
        self.pass = self.failures.is_empty() && self.pass;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the timing field, for determinism comparisons.
    pub fn to_canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("wall_time_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: {} trials, {} failures, {} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.trials,
            self.failures.len(),
            self.wall_time_ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_no_failures() {
        let mut r = VerificationReport::new("x").param("p", 3);
        r.trial();
        assert!(r.clone().finish().pass);
        r.fail(serde_json::json!({"at": 1}));
        let r = r.finish();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 1);
    }

    #[test]
    fn canonical_json_drops_time() {
        let mut a = VerificationReport::new("x").param("p", 3).with_seed(7).finish();
        let mut b = a.clone();
        a.wall_time_ms = 1;
        b.wall_time_ms = 99;
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert!(!a.to_canonical_json().contains("wall_time_ms"));
        let back: VerificationReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back.seed, Some(7));
    }

    #[test]
    fn failures_are_capped() {
        let mut r = VerificationReport::new("x");
        for i in 0..(MAX_RECORDED_FAILURES + 10) {
            r.trial();
            r.fail(serde_json::json!(i));
        }
        let r = r.finish();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), MAX_RECORDED_FAILURES);
        assert_eq!(r.trials, (MAX_RECORDED_FAILURES + 10) as u64);
    }
}
