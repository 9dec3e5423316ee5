use std::fmt;

use crate::rewrite::{validate_trace, EquivOutcome, EquivVerdict, Trace, ValidationError};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Proved,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "Proved",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// Outcome of one law checked on one instance. A proved report carries a
/// trace from `lhs` to `rhs`.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub axiom: String,
    pub instance: String,
    pub lhs: Term,
    pub rhs: Term,
    pub verdict: Verdict,
    pub trace: Option<Trace>,
    pub budget_used: usize,
}

impl CheckReport {
    pub fn from_outcome(
        axiom: impl Into<String>,
        instance: impl Into<String>,
        lhs: Term,
        rhs: Term,
        outcome: EquivOutcome,
    ) -> Self {
        let (verdict, trace) = match outcome.verdict {
            EquivVerdict::Proved(t) => (Verdict::Proved, Some(t)),
            EquivVerdict::Unknown => (Verdict::Unknown, None),
        };
        CheckReport {
            axiom: axiom.into(),
            instance: instance.into(),
            lhs,
            rhs,
            verdict,
            trace,
            budget_used: outcome.explored,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }

    /// The family a label belongs to: `inv-rev` is reported under `inv`.
    pub fn family(&self) -> &str {
        self.axiom.split('-').next().unwrap_or(&self.axiom)
    }

    /// Replays the attached trace. Unknown reports have nothing to replay.
    pub fn replay(&self) -> Result<(), ValidationError> {
        match &self.trace {
            Some(trace) => validate_trace(trace, &self.lhs, &self.rhs),
            None => Ok(()),
        }
    }
}

/// `<axiom> <verdict> budget=<n>`
impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} budget={}",
            self.axiom, self.verdict, self.budget_used
        )
    }
}
