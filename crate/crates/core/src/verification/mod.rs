//! Property harness: axiom and convexity checks on space models, inequality
//! audits along trajectories, and soundness of the computed rates.
//!
//! Every check is deterministic given its seed and returns a [`CheckReport`].

mod axioms;
mod lemma;
mod soundness;

pub use axioms::{
    check_index_implication, check_space_axioms, check_uc_implication, sampling_radius, IndexForm,
};
pub use lemma::{check_lemma_inequalities, check_residual_cap};
pub use soundness::{check_delta_witness, check_phi_soundness, SoundnessOutcome};

use serde::Serialize;

/// Default slack: `lhs <= rhs + SLACK * max(1, |rhs|)`.
pub const SLACK: f64 = 1e-9;

/// At most this many failures are kept verbatim in a report.
pub const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// The bound exceeds the step budget, so it could not be checked.
    #[serde(rename = "UNVERIFIED-AT-SCALE")]
    UnverifiedAtScale,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::UnverifiedAtScale => "UNVERIFIED-AT-SCALE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    /// Which inequality and where.
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub slack_violated: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub samples: u64,
    /// The first [`MAX_RECORDED_FAILURES`] failures.
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    /// No failures were found.
    pub passed: bool,
    /// `passed`, refined by whether the check could run at full scale.
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            check_name: name.into(),
            samples: 0,
            failures: Vec::new(),
            failure_count: 0,
            passed: true,
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    /// Records `lhs <= rhs` up to the default slack.
    pub fn le(&mut self, lhs: f64, rhs: f64, inputs: impl FnOnce() -> String) -> bool {
        self.le_with(lhs, rhs, SLACK, inputs)
    }

    pub fn le_with(&mut self, lhs: f64, rhs: f64, slack: f64, inputs: impl FnOnce() -> String) -> bool {
        let ok = lhs <= rhs + slack * rhs.abs().max(1.0);
        if !ok {
            self.fail(Failure { inputs: inputs(), lhs, rhs, slack_violated: lhs - rhs });
        }
        ok
    }

    pub fn fail(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(failure);
        }
        self.passed = false;
        self.verdict = Verdict::Fail;
    }

    pub fn unverified(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::UnverifiedAtScale;
        }
    }

    /// Merges another report's failures and sample count into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.samples += other.samples;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        self.failure_count += other.failure_count;
        self.notes.extend(other.notes);
        self.passed &= other.passed;
        self.verdict = match (self.verdict, other.verdict) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::UnverifiedAtScale, _) | (_, Verdict::UnverifiedAtScale) => {
                Verdict::UnverifiedAtScale
            }
            _ => Verdict::Pass,
        };
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{:<28} {:>10} samples  {:>6} failures  {}",
            self.check_name, self.samples, self.failure_count, self.verdict
        )
    }
}
