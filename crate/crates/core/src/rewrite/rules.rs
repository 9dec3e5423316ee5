use crate::term::{
    alpha_eq, fresh_var, fresh_var_by, substitute, Position, Term, TermKind, VarName, VarSet,
};

use super::{RewriteError, Rule, RuleId};

/// Applies `rule` left to right at the root of `s`, if it matches.
pub fn contract(rule: Rule, s: &Term) -> Option<Term> {
    match rule {
        Rule::BetaStar => beta_star(s),
        Rule::R1 => r1(s),
        Rule::R2 => r2(s),
        Rule::Ext1 => ext1(s),
        Rule::Ext2 => ext2(s),
    }
}

/// `(x λ A) ε B  →  (y λ A[x:=B]) ε B` for `x ∈ FV(A)`.
fn beta_star(s: &Term) -> Option<Term> {
    let TermKind::Scaled(l, eps, b) = s.kind() else {
        return None;
    };
    let TermKind::Abs(x, a) = l.kind() else {
        return None;
    };
    if !a.is_free(x) {
        return None;
    }
    let body = substitute(a, x, b);
    let y = fresh_var_by(x, |n| n == x || b.is_free(n) || body.is_free(n));
    Some(Term::scaled(Term::abs(y, body), eps.clone(), b.clone()))
}

/// `(x λ A) ε A  →  A` for `x ∉ FV(A)`.
fn r1(s: &Term) -> Option<Term> {
    let TermKind::Scaled(l, _, a2) = s.kind() else {
        return None;
    };
    let TermKind::Abs(x, a) = l.kind() else {
        return None;
    };
    (!a.is_free(x) && alpha_eq(a, a2)).then(|| a.clone())
}

/// `(x λ (B μ x)) ε A  →  B (εμ) A` for `x ∉ FV(B)`.
fn r2(s: &Term) -> Option<Term> {
    let TermKind::Scaled(l, eps, a) = s.kind() else {
        return None;
    };
    let TermKind::Abs(x, body) = l.kind() else {
        return None;
    };
    let TermKind::Scaled(b, mu, xv) = body.kind() else {
        return None;
    };
    (xv.as_var() == Some(x) && !b.is_free(x))
        .then(|| Term::scaled(b.clone(), eps.mul(mu), a.clone()))
}

/// `x λ (B 1 x)  →  B` for `x ∉ FV(B)`.
fn ext1(s: &Term) -> Option<Term> {
    let TermKind::Abs(x, body) = s.kind() else {
        return None;
    };
    let TermKind::Scaled(b, one, xv) = body.kind() else {
        return None;
    };
    (one.is_one() && xv.as_var() == Some(x) && !b.is_free(x)).then(|| b.clone())
}

/// `(x λ B) 1 A  →  B` for `x ∉ FV(B)`.
fn ext2(s: &Term) -> Option<Term> {
    let TermKind::Scaled(l, one, _) = s.kind() else {
        return None;
    };
    let TermKind::Abs(x, b) = l.kind() else {
        return None;
    };
    (one.is_one() && !b.is_free(x)).then(|| b.clone())
}

/// Applies `rule` forward at position `at` of `t`.
pub fn step(t: &Term, at: &Position, rule: Rule) -> Result<Term, RewriteError> {
    let sub = t
        .subterm(at)
        .ok_or_else(|| RewriteError::PositionInvalid(at.clone()))?;
    let out = contract(rule, sub).ok_or_else(|| RewriteError::RuleNotApplicable {
        rule,
        at: at.clone(),
    })?;
    Ok(t.replace_at(at, out).expect("position resolved above"))
}

pub fn step_beta_star(t: &Term, at: &Position) -> Result<Term, RewriteError> {
    step(t, at, Rule::BetaStar)
}

pub fn step_r1(t: &Term, at: &Position) -> Result<Term, RewriteError> {
    step(t, at, Rule::R1)
}

pub fn step_r2(t: &Term, at: &Position) -> Result<Term, RewriteError> {
    step(t, at, Rule::R2)
}

pub fn step_ext1(t: &Term, at: &Position) -> Result<Term, RewriteError> {
    step(t, at, Rule::Ext1)
}

pub fn step_ext2(t: &Term, at: &Position) -> Result<Term, RewriteError> {
    step(t, at, Rule::Ext2)
}

/// A local rewrite `before → after` at some position.
pub(crate) type LocalStep = (RuleId, Term, Term);

/// The derived dilation fold
///
/// ```text
/// (y λ (L ν X')) μ X  →  L (μν) X      y ∉ FV(L ν X'),  X' ≡α X
/// ```
///
/// realized as a backward `(β*)` that abstracts the right occurrence of `X`
/// followed by a forward `(R2)`. On dilations this is the composition law
/// `X ∘μ (X ∘ν L') = X ∘_{μν} L'`.
pub(crate) fn fold(s: &Term) -> Option<[LocalStep; 2]> {
    let TermKind::Scaled(l, mu, x) = s.kind() else {
        return None;
    };
    let TermKind::Abs(y, body) = l.kind() else {
        return None;
    };
    let TermKind::Scaled(left, nu, x2) = body.kind() else {
        return None;
    };
    if body.is_free(y) || !alpha_eq(x, x2) {
        return None;
    }
    let w = fresh_var_by(y, |n| left.is_free(n) || x.is_free(n));
    let abstracted = Term::scaled(
        Term::abs(
            w.clone(),
            Term::scaled(left.clone(), nu.clone(), Term::var(w)),
        ),
        mu.clone(),
        x.clone(),
    );
    let folded = Term::scaled(left.clone(), mu.mul(nu), x.clone());
    Some([
        (
            RuleId::backward(Rule::BetaStar),
            s.clone(),
            abstracted.clone(),
        ),
        (RuleId::forward(Rule::R2), abstracted, folded),
    ])
}

/// Most subsets of occurrences tried when abstracting; beyond this only the
/// single occurrences and the full set are offered.
const MAX_SUBSET_OCCURRENCES: usize = 4;

/// Inverse `(β*)` at the root of `s = (y λ C) ε B` with `y ∉ FV(C)`: every
/// `(x λ C') ε B` with `C'[x:=B] ≡α C` obtained by abstracting a nonempty set
/// of capture-free occurrences of `B` in `C`.
pub(crate) fn beta_star_inverse(s: &Term) -> Vec<Term> {
    let TermKind::Scaled(l, eps, b) = s.kind() else {
        return Vec::new();
    };
    let TermKind::Abs(y, c) = l.kind() else {
        return Vec::new();
    };
    if c.is_free(y) {
        return Vec::new();
    }
    let mut occurrences = Vec::new();
    find_occurrences(c, b, &mut Vec::new(), &mut occurrences);
    if occurrences.is_empty() {
        return Vec::new();
    }
    let mut avoid: VarSet = c.all_vars();
    avoid.extend(b.free_vars().iter().cloned());
    let x = fresh_var(&avoid, &VarName::new("x").expect("valid name"));
    let var = Term::var(x.clone());

    let n = occurrences.len();
    let subsets: Vec<Vec<usize>> = if n <= MAX_SUBSET_OCCURRENCES {
        (1u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut v: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        v.push((0..n).collect());
        v
    };
    subsets
        .into_iter()
        .filter_map(|subset| {
            let mut body = c.clone();
            for i in subset {
                body = body.replace_at(&occurrences[i], var.clone())?;
            }
            let candidate =
                Term::scaled(Term::abs(x.clone(), body.clone()), eps.clone(), b.clone());
            alpha_eq(&substitute(&body, &x, b), c).then_some(candidate)
        })
        .collect()
}

/// Positions inside `t` holding a copy of `target` whose free variables are
/// not bound on the way down.
fn find_occurrences(
    t: &Term,
    target: &Term,
    path: &mut Vec<crate::term::Dir>,
    out: &mut Vec<Position>,
) {
    use crate::term::Dir;
    if t.size() == target.size() && alpha_eq(t, target) {
        out.push(Position(path.clone()));
        return;
    }
    if t.size() <= target.size() {
        return;
    }
    match t.kind() {
        TermKind::Var(_) => {}
        TermKind::Abs(x, body) => {
            if target.is_free(x) {
                return;
            }
            path.push(Dir::Body);
            find_occurrences(body, target, path, out);
            path.pop();
        }
        TermKind::Scaled(l, _, r) => {
            path.push(Dir::Left);
            find_occurrences(l, target, path, out);
            path.pop();
            path.push(Dir::Right);
            find_occurrences(r, target, path, out);
            path.pop();
        }
    }
}
