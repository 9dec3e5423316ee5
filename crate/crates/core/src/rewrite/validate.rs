//! Replays traces. Each step is re-checked against the rule's side
//! conditions by pattern matching written independently of the rule
//! implementations, so a faulty rewrite cannot vouch for itself.

use thiserror::Error;

use crate::term::{alpha_eq, substitute, Position, Term, TermKind};

use super::{Direction, RewriteStep, Rule, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("step {index}: position {at} does not resolve")]
    BadPosition { index: usize, at: Position },
    #[error("step {index}: the term outside position {at} changed")]
    ContextChanged { index: usize, at: Position },
    #[error("step {index}: not an instance of {rule}: {reason}")]
    NotAnInstance {
        index: usize,
        rule: Rule,
        reason: String,
    },
    #[error("step {index} does not start where step {} ended", index - 1)]
    Broken { index: usize },
    #[error("trace does not start at the source term")]
    WrongStart,
    #[error("trace does not end at the target term")]
    WrongEnd,
}

/// Checks that `redex → contractum` is an instance of `rule`, up to
/// α-equivalence of the contractum.
pub fn check_rule_instance(rule: Rule, redex: &Term, contractum: &Term) -> Result<(), String> {
    match rule {
        Rule::BetaStar => {
            let TermKind::Scaled(l, eps, b) = redex.kind() else {
                return Err("redex is not a scaled application".into());
            };
            let TermKind::Abs(x, a) = l.kind() else {
                return Err("left of redex is not an abstraction".into());
            };
            if !a.free_vars().contains(x) {
                return Err("bound variable does not occur free in the body".into());
            }
            let TermKind::Scaled(l2, eps2, b2) = contractum.kind() else {
                return Err("contractum is not a scaled application".into());
            };
            let TermKind::Abs(y, a2) = l2.kind() else {
                return Err("left of contractum is not an abstraction".into());
            };
            if eps != eps2 || !alpha_eq(b, b2) {
                return Err("the `ε B` wrapper changed".into());
            }
            if a2.free_vars().contains(y) {
                return Err("new binder occurs free in the substituted body".into());
            }
            if !alpha_eq(a2, &substitute(a, x, b)) {
                return Err("body is not A[x:=B]".into());
            }
            Ok(())
        }
        Rule::R1 => {
            let TermKind::Scaled(l, _, a2) = redex.kind() else {
                return Err("redex is not a scaled application".into());
            };
            let TermKind::Abs(x, a) = l.kind() else {
                return Err("left of redex is not an abstraction".into());
            };
            if a.free_vars().contains(x) {
                return Err("bound variable occurs free".into());
            }
            if !alpha_eq(a, a2) {
                return Err("argument differs from the body".into());
            }
            if !alpha_eq(contractum, a) {
                return Err("contractum is not the body".into());
            }
            Ok(())
        }
        Rule::R2 => {
            let TermKind::Scaled(l, eps, a) = redex.kind() else {
                return Err("redex is not a scaled application".into());
            };
            let TermKind::Abs(x, body) = l.kind() else {
                return Err("left of redex is not an abstraction".into());
            };
            let TermKind::Scaled(b, mu, last) = body.kind() else {
                return Err("body is not a scaled application".into());
            };
            if !matches!(last.kind(), TermKind::Var(v) if v == x) {
                return Err("body does not end in the bound variable".into());
            }
            if b.free_vars().contains(x) {
                return Err("bound variable occurs free in B".into());
            }
            let TermKind::Scaled(b2, prod, a2) = contractum.kind() else {
                return Err("contractum is not a scaled application".into());
            };
            if *prod != eps.mul(mu) || !alpha_eq(b, b2) || !alpha_eq(a, a2) {
                return Err("contractum is not B (εμ) A".into());
            }
            Ok(())
        }
        Rule::Ext1 => {
            let TermKind::Abs(x, body) = redex.kind() else {
                return Err("redex is not an abstraction".into());
            };
            let TermKind::Scaled(b, one, last) = body.kind() else {
                return Err("body is not a scaled application".into());
            };
            if !one.is_one() {
                return Err("scale is not neutral".into());
            }
            if !matches!(last.kind(), TermKind::Var(v) if v == x) || b.free_vars().contains(x) {
                return Err("body is not B 1 x with x fresh for B".into());
            }
            if !alpha_eq(contractum, b) {
                return Err("contractum is not B".into());
            }
            Ok(())
        }
        Rule::Ext2 => {
            let TermKind::Scaled(l, one, _) = redex.kind() else {
                return Err("redex is not a scaled application".into());
            };
            let TermKind::Abs(x, b) = l.kind() else {
                return Err("left of redex is not an abstraction".into());
            };
            if !one.is_one() {
                return Err("scale is not neutral".into());
            }
            if b.free_vars().contains(x) {
                return Err("bound variable occurs free".into());
            }
            if !alpha_eq(contractum, b) {
                return Err("contractum is not the body".into());
            }
            Ok(())
        }
    }
}

fn validate_step_at(index: usize, step: &RewriteStep) -> Result<(), ValidationError> {
    let bad_position = || ValidationError::BadPosition {
        index,
        at: step.at.clone(),
    };
    let before = step.before.subterm(&step.at).ok_or_else(bad_position)?;
    let after = step.after.subterm(&step.at).ok_or_else(bad_position)?;
    let rebuilt = step
        .before
        .replace_at(&step.at, after.clone())
        .ok_or_else(bad_position)?;
    if rebuilt != step.after {
        return Err(ValidationError::ContextChanged {
            index,
            at: step.at.clone(),
        });
    }
    let (redex, contractum) = match step.rule.direction {
        Direction::Forward => (before, after),
        Direction::Backward => (after, before),
    };
    check_rule_instance(step.rule.rule, redex, contractum).map_err(|reason| {
        ValidationError::NotAnInstance {
            index,
            rule: step.rule.rule,
            reason,
        }
    })
}

pub fn validate_step(step: &RewriteStep) -> Result<(), ValidationError> {
    validate_step_at(0, step)
}

/// Checks that `trace` is a chain of valid steps leading from `from` to `to`
/// (both up to α-equivalence). An empty trace proves `from ≡α to`.
pub fn validate_trace(trace: &Trace, from: &Term, to: &Term) -> Result<(), ValidationError> {
    let Some(first) = trace.steps.first() else {
        return if alpha_eq(from, to) {
            Ok(())
        } else {
            Err(ValidationError::WrongEnd)
        };
    };
    if !alpha_eq(&first.before, from) {
        return Err(ValidationError::WrongStart);
    }
    for (i, step) in trace.steps.iter().enumerate() {
        if i > 0 && !alpha_eq(&trace.steps[i - 1].after, &step.before) {
            return Err(ValidationError::Broken { index: i });
        }
        validate_step_at(i, step)?;
    }
    let last = trace.steps.last().expect("nonempty");
    if !alpha_eq(&last.after, to) {
        return Err(ValidationError::WrongEnd);
    }
    Ok(())
}
