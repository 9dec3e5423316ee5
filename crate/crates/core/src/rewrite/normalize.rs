use crate::term::{Dir, Position, Term, TermKind};

use super::rules::{contract, fold, LocalStep};
use super::{RewriteStep, Rule, RuleId, Trace};

pub const DEFAULT_NORMALIZE_BUDGET: usize = 1000;

/// Terms larger than this stop normalization with `BudgetExhausted`.
pub const DEFAULT_MAX_SIZE: usize = 200_000;

/// Forward rules by priority: simplifying rules before the size-growing one.
const PRIORITY: [Rule; 5] = [Rule::Ext2, Rule::R2, Rule::R1, Rule::Ext1, Rule::BetaStar];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalizeStatus {
    Normal,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct NormalizeOutcome {
    pub result: Term,
    pub trace: Trace,
    pub status: NormalizeStatus,
}

impl NormalizeOutcome {
    pub fn is_normal(&self) -> bool {
        self.status == NormalizeStatus::Normal
    }
}

/// Which moves the normalizer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// The five forward rules only.
    Standard,
    /// The forward rules plus the dilation fold (a backward `(β*)` immediately
    /// followed by `(R2)`), tried after `(ext1)` and before `(β*)`.
    Folding,
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_steps: usize,
    pub max_size: usize,
}

impl Limits {
    pub fn steps(max_steps: usize) -> Self {
        Limits {
            max_steps,
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

/// Leftmost-outermost normalization with the forward rules.
pub fn normalize(t: &Term, budget: usize) -> NormalizeOutcome {
    normalize_with(t, Limits::steps(budget), Strategy::Standard)
}

/// Leftmost-outermost normalization that also folds nested dilations around
/// the same base.
pub fn simplify(t: &Term, budget: usize) -> NormalizeOutcome {
    normalize_with(t, Limits::steps(budget), Strategy::Folding)
}

pub fn normalize_with(t: &Term, limits: Limits, strategy: Strategy) -> NormalizeOutcome {
    let mut current = t.clone();
    let mut trace = Trace::new();
    loop {
        if current.size() > limits.max_size {
            return NormalizeOutcome {
                result: current,
                trace,
                status: NormalizeStatus::BudgetExhausted,
            };
        }
        let Some((at, local)) = find_redex(&current, strategy) else {
            return NormalizeOutcome {
                result: current,
                trace,
                status: NormalizeStatus::Normal,
            };
        };
        if trace.len() + local.len() > limits.max_steps {
            return NormalizeOutcome {
                result: current,
                trace,
                status: NormalizeStatus::BudgetExhausted,
            };
        }
        for (rule, _, after) in local {
            let next = current
                .replace_at(&at, after)
                .expect("redex position resolves");
            trace.push(RewriteStep {
                rule,
                at: at.clone(),
                before: current,
                after: next.clone(),
            });
            current = next;
        }
    }
}

/// Moves applicable at the root of `s`, highest priority first.
pub(crate) fn local_moves(s: &Term, strategy: Strategy) -> Option<Vec<LocalStep>> {
    for rule in PRIORITY {
        if strategy == Strategy::Folding && rule == Rule::BetaStar {
            if let Some(steps) = fold(s) {
                return Some(steps.into());
            }
        }
        if let Some(out) = contract(rule, s) {
            return Some(vec![(RuleId::forward(rule), s.clone(), out)]);
        }
    }
    None
}

/// The first position in preorder at which some move applies.
fn find_redex(t: &Term, strategy: Strategy) -> Option<(Position, Vec<LocalStep>)> {
    fn go(t: &Term, strategy: Strategy, path: &mut Vec<Dir>) -> Option<(Position, Vec<LocalStep>)> {
        if let Some(steps) = local_moves(t, strategy) {
            return Some((Position(path.clone()), steps));
        }
        match t.kind() {
            TermKind::Var(_) => None,
            TermKind::Abs(_, body) => {
                path.push(Dir::Body);
                let r = go(body, strategy, path);
                path.pop();
                r
            }
            TermKind::Scaled(l, _, r) => {
                path.push(Dir::Left);
                if let Some(found) = go(l, strategy, path) {
                    return Some(found);
                }
                path.pop();
                path.push(Dir::Right);
                let found = go(r, strategy, path);
                path.pop();
                found
            }
        }
    }
    go(t, strategy, &mut Vec::new())
}
