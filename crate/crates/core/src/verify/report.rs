use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The clause's precondition does not hold for these parameters.
    Inapplicable,
    /// A failure that may be an artifact of under-estimated norms.
    Inconclusive,
}

/// One measured inequality.
///
/// For upper-bound checks `margin = bound - measured`; for lower-bound
/// checks `margin = measured - bound`. Weak checks pass when the margin is
/// non-negative, strict ones when it is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub samples: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

// keep reports representable in JSON
fn finite(x: f64) -> f64 {
    if x.is_nan() {
        x
    } else {
        x.clamp(-f64::MAX, f64::MAX)
    }
}

impl CertReport {
    fn with(check: &str, measured: f64, bound: f64, margin: f64, pass: bool) -> Self {
        CertReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            measured: finite(measured),
            bound: finite(bound),
            margin: finite(margin),
            samples: 0,
            seed: 0,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            notes: Vec::new(),
        }
    }

    /// `measured <= bound`.
    pub fn at_most(check: &str, measured: f64, bound: f64) -> Self {
        let margin = bound - measured;
        Self::with(check, measured, bound, margin, margin >= 0.0)
    }

    /// `measured < bound`.
    pub fn below(check: &str, measured: f64, bound: f64) -> Self {
        let margin = bound - measured;
        Self::with(check, measured, bound, margin, margin > 0.0)
    }

    /// `measured >= bound`.
    pub fn at_least(check: &str, measured: f64, bound: f64) -> Self {
        let margin = measured - bound;
        Self::with(check, measured, bound, margin, margin >= 0.0)
    }

    /// `measured > bound`.
    pub fn above(check: &str, measured: f64, bound: f64) -> Self {
        let margin = measured - bound;
        Self::with(check, measured, bound, margin, margin > 0.0)
    }

    pub fn inapplicable(check: &str, why: &str) -> Self {
        let mut r = Self::with(check, 0.0, 0.0, 0.0, false);
        r.verdict = Verdict::Inapplicable;
        r.notes.push(why.to_string());
        r
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), finite(value));
        self
    }

    pub fn sampled(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Turns a failure into an inconclusive result.
    pub fn soften(mut self, why: &str) -> Self {
        if self.verdict == Verdict::Fail {
            self.verdict = Verdict::Inconclusive;
            self.notes.push(why.to_string());
        }
        self
    }
}
