//! Oriented rewrite rules, normalization, trace validation and the
//! equivalence search.
//!
//! The five rules are `(β*)`, `(R1)`, `(R2)`, `(ext1)` and `(ext2)`. Every
//! rewrite is recorded as a [`RewriteStep`] carrying the whole term before and
//! after, so a [`Trace`] can be replayed by [`validate_trace`] without access
//! to the engine that produced it.

mod normalize;
mod rules;
mod search;
mod validate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::parse_term;
use crate::term::{alpha_eq, Position, Term};

pub use normalize::{
    normalize, normalize_with, simplify, Limits, NormalizeOutcome, NormalizeStatus, Strategy,
    DEFAULT_MAX_SIZE, DEFAULT_NORMALIZE_BUDGET,
};
pub use rules::{contract, step, step_beta_star, step_ext1, step_ext2, step_r1, step_r2};
pub use search::{
    equiv, equiv_detailed, EquivOutcome, EquivVerdict, ProofMethod, DEFAULT_EQUIV_BUDGET,
};
pub use validate::{check_rule_instance, validate_step, validate_trace, ValidationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    BetaStar,
    R1,
    R2,
    Ext1,
    Ext2,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::BetaStar, Rule::R1, Rule::R2, Rule::Ext1, Rule::Ext2];

    pub fn label(self) -> &'static str {
        match self {
            Rule::BetaStar => "beta*",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::Ext1 => "ext1",
            Rule::Ext2 => "ext2",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// A rule together with the direction it was used in. Backward steps only
/// occur inside equivalence proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleId {
    pub rule: Rule,
    pub direction: Direction,
}

impl RuleId {
    pub fn forward(rule: Rule) -> Self {
        RuleId {
            rule,
            direction: Direction::Forward,
        }
    }

    pub fn backward(rule: Rule) -> Self {
        RuleId {
            rule,
            direction: Direction::Backward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("position {0} does not address a subterm")]
    PositionInvalid(Position),
    #[error("rule {rule} does not apply at {at}")]
    RuleNotApplicable { rule: Rule, at: Position },
}

/// One rewrite: `after` is `before` with the rule applied at `at`. For a
/// backward step the rule rewrites `after` into `before`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: RuleId,
    pub at: Position,
    pub before: Term,
    pub after: Term,
}

impl RewriteStep {
    /// The same rewrite read in the opposite direction.
    pub fn reversed(&self) -> RewriteStep {
        RewriteStep {
            rule: RuleId {
                rule: self.rule.rule,
                direction: self.rule.direction.flip(),
            },
            at: self.at.clone(),
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }
}

/// Serialized as `<rule> <direction> @ <position> : <before> ==> <after>`.
impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} @ {} : {} ==> {}",
            self.rule.rule, self.rule.direction, self.at, self.before, self.after
        )
    }
}

impl FromStr for RewriteStep {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let (head, terms) = line.split_once(" : ").ok_or("missing ` : `")?;
        let (before, after) = terms.split_once(" ==> ").ok_or("missing ` ==> `")?;
        let mut words = head.split_whitespace();
        let rule: Rule = words.next().ok_or("missing rule")?.parse()?;
        let direction = match words.next() {
            Some("forward") => Direction::Forward,
            Some("backward") => Direction::Backward,
            other => return Err(format!("bad direction {other:?}")),
        };
        if words.next() != Some("@") {
            return Err("missing `@`".into());
        }
        let at: Position = words.next().ok_or("missing position")?.parse()?;
        if words.next().is_some() {
            return Err("trailing words before ` : `".into());
        }
        Ok(RewriteStep {
            rule: RuleId { rule, direction },
            at,
            before: parse_term(before.trim()).map_err(|e| e.to_string())?,
            after: parse_term(after.trim()).map_err(|e| e.to_string())?,
        })
    }
}

/// A chain of rewrite steps; consecutive steps agree up to α-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<RewriteStep>,
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: RewriteStep) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }

    /// The trace read backwards: every step reversed, in reverse order.
    pub fn reversed(&self) -> Trace {
        Trace {
            steps: self.steps.iter().rev().map(RewriteStep::reversed).collect(),
        }
    }

    /// True if each step starts where the previous one ended.
    pub fn is_chained(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| alpha_eq(&w[0].after, &w[1].before))
    }

    /// Every term the trace passes through, starting from `start`.
    pub fn terms<'a>(&'a self, start: &'a Term) -> impl Iterator<Item = &'a Term> + 'a {
        std::iter::once(start).chain(self.steps.iter().map(|s| &s.after))
    }

    pub fn parse(text: &str) -> Result<Trace, String> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| l.parse().map_err(|e| format!("line {}: {e}", i + 1)))
            .collect::<Result<Vec<_>, _>>()
            .map(|steps| Trace { steps })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}
