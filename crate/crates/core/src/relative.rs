//! Relative terms over a base `(A, ε)` and their translation into base terms.
//!
//! A relative variable `u` stands for `A ∘ε u`; relative application and
//! abstraction are conjugated by dilations around `A`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::emergent::dilation;
use crate::gen::TermGen;
use crate::report::CheckReport;
use crate::rewrite::{equiv, equiv_detailed, EquivVerdict};
use crate::scale::Scale;
use crate::syntax::{parse_term, ParseError};
use crate::term::{
    fresh_var, fresh_var_by, name, substitute, substitute_avoiding, Term, TermKind, VarName, VarSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("relative variable `{0}` is free in the base term")]
    VariableClash(VarName),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelContext {
    pub base: Term,
    pub scale: Scale,
}

impl RelContext {
    pub fn new(base: Term, scale: Scale) -> Self {
        RelContext { base, scale }
    }

    /// `A ∘ε t`
    fn up(&self, t: &Term) -> Term {
        dilation(&self.base, &self.scale, t)
    }

    /// `A ∘_{ε⁻¹} t`
    fn down(&self, t: &Term) -> Term {
        dilation(&self.base, &self.scale.inv(), t)
    }

    fn check(&self, b: &RelTerm) -> Result<(), RelError> {
        match b.all_vars().intersection(self.base.free_vars()).next() {
            Some(v) => Err(RelError::VariableClash(v.clone())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelTerm {
    Var(VarName),
    Abs(VarName, Box<RelTerm>),
    Scaled(Box<RelTerm>, Scale, Box<RelTerm>),
}

impl RelTerm {
    pub fn var(v: VarName) -> Self {
        RelTerm::Var(v)
    }

    pub fn abs(x: VarName, body: RelTerm) -> Self {
        RelTerm::Abs(x, Box::new(body))
    }

    pub fn scaled(l: RelTerm, s: Scale, r: RelTerm) -> Self {
        RelTerm::Scaled(Box::new(l), s, Box::new(r))
    }

    /// The same tree read as a base term.
    pub fn erase(&self) -> Term {
        match self {
            RelTerm::Var(v) => Term::var(v.clone()),
            RelTerm::Abs(x, b) => Term::abs(x.clone(), b.erase()),
            RelTerm::Scaled(l, s, r) => Term::scaled(l.erase(), s.clone(), r.erase()),
        }
    }

    pub fn lift(t: &Term) -> RelTerm {
        match t.kind() {
            TermKind::Var(v) => RelTerm::Var(v.clone()),
            TermKind::Abs(x, b) => RelTerm::abs(x.clone(), RelTerm::lift(b)),
            TermKind::Scaled(l, s, r) => {
                RelTerm::scaled(RelTerm::lift(l), s.clone(), RelTerm::lift(r))
            }
        }
    }

    pub fn all_vars(&self) -> VarSet {
        self.erase().all_vars()
    }
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.erase())
    }
}

/// Relative terms share the base grammar.
impl FromStr for RelTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s).map(|t| RelTerm::lift(&t))
    }
}

pub fn rel_free_vars(b: &RelTerm) -> VarSet {
    match b {
        RelTerm::Var(v) => VarSet::from([v.clone()]),
        RelTerm::Abs(x, body) => {
            let mut fv = rel_free_vars(body);
            fv.remove(x);
            fv
        }
        RelTerm::Scaled(l, _, r) => {
            let mut fv = rel_free_vars(l);
            fv.extend(rel_free_vars(r));
            fv
        }
    }
}

fn translate_unchecked(ctx: &RelContext, b: &RelTerm) -> Term {
    match b {
        RelTerm::Var(x) => Term::var(x.clone()),
        RelTerm::Scaled(l, mu, r) => ctx.down(&Term::scaled(
            ctx.up(&translate_unchecked(ctx, l)),
            mu.clone(),
            ctx.up(&translate_unchecked(ctx, r)),
        )),
        RelTerm::Abs(u, body) => {
            let inner = Term::abs(u.clone(), ctx.up(&translate_unchecked(ctx, body)));
            let mut taken = inner.all_vars();
            taken.extend(ctx.base.free_vars().iter().cloned());
            let z = fresh_var(&taken, &name("z"));
            let applied = Term::app(inner, ctx.down(&Term::var(z.clone())));
            ctx.down(&Term::abs(z, applied))
        }
    }
}

/// The translation `E` of a relative term into a base term.
pub fn translate(ctx: &RelContext, b: &RelTerm) -> Result<Term, RelError> {
    ctx.check(b)?;
    Ok(translate_unchecked(ctx, b))
}

/// `A ∘_{ε⁻¹} (z λ (A ∘ε (E[B])[u := A ∘_{ε⁻¹} z]))`, the short form of the
/// translation of `u λ B`.
pub fn translate_simplified(ctx: &RelContext, u: &VarName, b: &RelTerm) -> Result<Term, RelError> {
    ctx.check(&RelTerm::abs(u.clone(), b.clone()))?;
    let eb = translate_unchecked(ctx, b);
    let z = fresh_var_by(&name("z"), |c| {
        c == u || ctx.base.free_vars().contains(c) || eb.all_vars().contains(c)
    });
    let body = substitute(&eb, u, &ctx.down(&Term::var(z.clone())));
    Ok(ctx.down(&Term::abs(z, ctx.up(&body))))
}

/// Capture-avoiding substitution on the relative tree. Renamed binders also
/// avoid the base's free variables.
pub fn rel_substitute(
    ctx: &RelContext,
    b: &RelTerm,
    v: &VarName,
    c: &RelTerm,
) -> Result<RelTerm, RelError> {
    ctx.check(b)?;
    ctx.check(c)?;
    ctx.check(&RelTerm::Var(v.clone()))?;
    let t = substitute_avoiding(&b.erase(), v, &c.erase(), ctx.base.free_vars());
    Ok(RelTerm::lift(&t))
}

pub fn rel_equiv(
    ctx: &RelContext,
    b: &RelTerm,
    c: &RelTerm,
    budget: usize,
) -> Result<EquivVerdict, RelError> {
    Ok(equiv(&translate(ctx, b)?, &translate(ctx, c)?, budget))
}

fn rel_check(
    ctx: &RelContext,
    axiom: &str,
    b: &RelTerm,
    c: &RelTerm,
    budget: usize,
) -> Result<CheckReport, RelError> {
    let lhs = translate(ctx, b)?;
    let rhs = translate(ctx, c)?;
    let outcome = equiv_detailed(&lhs, &rhs, budget);
    let instance = format!("A={} eps={} {b} ~ {c}", ctx.base, ctx.scale);
    Ok(CheckReport::from_outcome(
        axiom, instance, lhs, rhs, outcome,
    ))
}

/// `E[B[v := C]] ≡ E[B][v := E[C]]`.
pub fn check_prelsub(
    ctx: &RelContext,
    b: &RelTerm,
    v: &VarName,
    c: &RelTerm,
    budget: usize,
) -> Result<CheckReport, RelError> {
    let lhs = translate(ctx, &rel_substitute(ctx, b, v, c)?)?;
    let rhs = substitute(&translate(ctx, b)?, v, &translate(ctx, c)?);
    let outcome = equiv_detailed(&lhs, &rhs, budget);
    let instance = format!("A={} eps={} B={b} {v}:={c}", ctx.base, ctx.scale);
    Ok(CheckReport::from_outcome(
        "prelsub", instance, lhs, rhs, outcome,
    ))
}

/// `E[u λ B] ≡` its short form.
pub fn check_psimply(
    ctx: &RelContext,
    u: &VarName,
    b: &RelTerm,
    budget: usize,
) -> Result<CheckReport, RelError> {
    let lhs = translate(ctx, &RelTerm::abs(u.clone(), b.clone()))?;
    let rhs = translate_simplified(ctx, u, b)?;
    let outcome = equiv_detailed(&lhs, &rhs, budget);
    let instance = format!("A={} eps={} u={u} B={b}", ctx.base, ctx.scale);
    Ok(CheckReport::from_outcome(
        "psimply", instance, lhs, rhs, outcome,
    ))
}

/// Random relative terms whose variables avoid the base's free variables.
pub fn rel_term_gen(ctx: &RelContext, seed: u64) -> TermGen {
    let pool: Vec<&str> = ["p", "q", "r", "s", "t", "u", "v", "w"]
        .into_iter()
        .filter(|v| !ctx.base.free_vars().contains(&name(v)))
        .take(3)
        .collect();
    TermGen::new(seed).with_vars(&pool)
}

pub const REL_RULE_LABELS: [&str; 5] = ["rel_beta*", "rel_R1", "rel_R2", "rel_ext1", "rel_ext2"];

/// The five rules stated relatively on random instances of depth `depth`,
/// `count` instances per rule, each checked through the translation.
pub fn check_scaled_calculus_with(
    ctx: &RelContext,
    seed: u64,
    count: usize,
    depth: usize,
    budget: usize,
) -> Result<Vec<CheckReport>, RelError> {
    let mut g = rel_term_gen(ctx, seed);
    let mut out = Vec::with_capacity(count * 5);
    let base_fv = ctx.base.free_vars().clone();
    for _ in 0..count {
        let c = RelTerm::lift(&g.term(depth));
        let b = RelTerm::lift(&g.term(depth));
        let mu = g.scale();
        let nu = g.scale();
        let fresh_for = |hint: &str, terms: &[&RelTerm]| {
            let mut taken = base_fv.clone();
            for t in terms {
                taken.extend(t.all_vars());
            }
            fresh_var(&taken, &name(hint))
        };

        // (β*): (x λ C) μ B → (y λ C[x:=B]) μ B with x free in C
        let x = g.var();
        let c_x = if rel_free_vars(&c).contains(&x) {
            c.clone()
        } else {
            RelTerm::scaled(c.clone(), g.scale(), RelTerm::Var(x.clone()))
        };
        let substituted = rel_substitute(ctx, &c_x, &x, &b)?;
        let y = fresh_for("y", &[&substituted, &b, &RelTerm::Var(x.clone())]);
        out.push(rel_check(
            ctx,
            "rel_beta*",
            &RelTerm::scaled(RelTerm::abs(x.clone(), c_x), mu.clone(), b.clone()),
            &RelTerm::scaled(RelTerm::abs(y, substituted), mu.clone(), b.clone()),
            budget,
        )?);

        // (R1): (x λ B) μ B → B with x fresh
        let x = fresh_for("x", &[&b]);
        out.push(rel_check(
            ctx,
            "rel_R1",
            &RelTerm::scaled(RelTerm::abs(x, b.clone()), mu.clone(), b.clone()),
            &b,
            budget,
        )?);

        // (R2): (x λ (B ν x)) μ C → B (μν) C
        let x = fresh_for("x", &[&b]);
        out.push(rel_check(
            ctx,
            "rel_R2",
            &RelTerm::scaled(
                RelTerm::abs(
                    x.clone(),
                    RelTerm::scaled(b.clone(), nu.clone(), RelTerm::Var(x)),
                ),
                mu.clone(),
                c.clone(),
            ),
            &RelTerm::scaled(b.clone(), mu.mul(&nu), c.clone()),
            budget,
        )?);

        // (ext1): x λ (B 1 x) → B
        let x = fresh_for("x", &[&b]);
        out.push(rel_check(
            ctx,
            "rel_ext1",
            &RelTerm::abs(
                x.clone(),
                RelTerm::scaled(b.clone(), Scale::one(), RelTerm::Var(x)),
            ),
            &b,
            budget,
        )?);

        // (ext2): (x λ B) 1 C → B
        let x = fresh_for("x", &[&b]);
        out.push(rel_check(
            ctx,
            "rel_ext2",
            &RelTerm::scaled(RelTerm::abs(x, b.clone()), Scale::one(), c.clone()),
            &b,
            budget,
        )?);
    }
    Ok(out)
}

/// [`check_scaled_calculus_with`] at depth 2.
pub fn check_scaled_calculus(
    ctx: &RelContext,
    seed: u64,
    count: usize,
    budget: usize,
) -> Result<Vec<CheckReport>, RelError> {
    check_scaled_calculus_with(ctx, seed, count, 2, budget)
}

/// The translation laws on random instances: `count` substitution
/// commutations, `count` short-form comparisons and `count` instances of each
/// relative rule.
pub fn check_relative_batch(
    ctx: &RelContext,
    seed: u64,
    count: usize,
    depth: usize,
    budget: usize,
) -> Result<Vec<CheckReport>, RelError> {
    let mut g = rel_term_gen(ctx, seed);
    let mut out = Vec::with_capacity(count * 7);
    for _ in 0..count {
        let b = RelTerm::lift(&g.term(depth));
        let c = RelTerm::lift(&g.term(depth));
        let v = match rel_free_vars(&b).into_iter().collect::<Vec<_>>() {
            free if !free.is_empty() && g.bool() => free[g.index(free.len())].clone(),
            _ => g.var(),
        };
        out.push(check_prelsub(ctx, &b, &v, &c, budget)?);
    }
    for _ in 0..count {
        let u = g.var();
        let b = RelTerm::lift(&g.term(depth));
        out.push(check_psimply(ctx, &u, &b, budget)?);
    }
    out.extend(check_scaled_calculus_with(
        ctx,
        seed ^ 0x5eed,
        count,
        depth.min(2),
        budget,
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::DEFAULT_EQUIV_BUDGET;
    use crate::term::alpha_eq;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn r(src: &str) -> RelTerm {
        src.parse().unwrap()
    }

    fn ctx(base: &str, scale: &str) -> RelContext {
        RelContext::new(t(base), scale.parse().unwrap())
    }

    #[test]
    fn free_variables() {
        assert_eq!(rel_free_vars(&r("u")), VarSet::from([name("u")]));
        assert!(rel_free_vars(&r(r"(u \ u)")).is_empty());
        assert_eq!(
            rel_free_vars(&r("(u {m} v)")),
            VarSet::from([name("u"), name("v")])
        );
    }

    #[test]
    fn translation_clauses() {
        let c = ctx("a", "e");
        assert_eq!(translate(&c, &r("x")).unwrap(), t("x"));
        let got = translate(&c, &r("(x {m} y)")).unwrap();
        let expected = t(r"((w \ (((v \ x) {e} a) {m} ((v \ y) {e} a))) {e^-1} a)");
        assert!(alpha_eq(&got, &expected), "{got}");
        assert_eq!(
            translate(&c, &r("a")),
            Err(RelError::VariableClash(name("a")))
        );
        let got = translate(&c, &r(r"(u \ u)")).unwrap();
        let expected = t(r"((y \ (z \ ((u \ ((y \ u) {e} a)) {1} ((y \ z) {e^-1} a)))) {e^-1} a)");
        assert!(alpha_eq(&got, &expected), "{got}");
    }

    #[test]
    fn neutral_scale_translation_collapses() {
        let c = ctx("a", "1");
        for src in ["x", "(x {m} y)", r"(u \ (u {e} v))", r"((u \ u) {1} v)"] {
            let b = r(src);
            let v = equiv(
                &translate(&c, &b).unwrap(),
                &b.erase(),
                DEFAULT_EQUIV_BUDGET,
            );
            assert!(v.is_proved(), "{src}");
        }
    }

    #[test]
    fn simplified_translation() {
        let c = ctx("a", "e");
        let got = translate_simplified(&c, &name("u"), &r("u")).unwrap();
        let expected = t(r"((y \ (z \ ((y \ ((y \ z) {e^-1} a)) {e} a))) {e^-1} a)");
        assert!(alpha_eq(&got, &expected), "{got}");
        let got = translate_simplified(&c, &name("u"), &r("v")).unwrap();
        assert!(alpha_eq(
            &got,
            &t(r"((y \ (z \ ((y \ v) {e} a))) {e^-1} a)")
        ));
        for src in ["u", "v", "(u {m} v)", r"(v \ (u {1} v))"] {
            let rep = check_psimply(&c, &name("u"), &r(src), DEFAULT_EQUIV_BUDGET).unwrap();
            assert!(rep.is_proved(), "{src}");
            rep.replay().unwrap();
        }
    }

    #[test]
    fn substitution_rules() {
        let c = ctx("a", "e");
        let x = name("x");
        assert_eq!(
            rel_substitute(&c, &r("x"), &x, &r("(p {m} q)")).unwrap(),
            r("(p {m} q)")
        );
        assert_eq!(rel_substitute(&c, &r("y"), &x, &r("q")).unwrap(), r("y"));
        assert_eq!(
            rel_substitute(&c, &r(r"(u \ x)"), &x, &r("w")).unwrap(),
            r(r"(u \ w)")
        );
        // capture is avoided without touching the base's free variable
        let got = rel_substitute(&c, &r(r"(u \ x)"), &x, &r("u")).unwrap();
        assert_eq!(got, r(r"(u_1 \ u)"));
        assert!(rel_substitute(&c, &r("x"), &x, &r("a")).is_err());
    }

    #[test]
    fn prelsub_examples() {
        let c = ctx("a", "e");
        let x = name("x");
        let rep = check_prelsub(&c, &r("x"), &x, &r("(p {m} q)"), 1).unwrap();
        assert!(rep.is_proved());
        assert!(check_prelsub(&c, &r("u"), &x, &r("q"), 10)
            .unwrap()
            .is_proved());
        let rep = check_prelsub(
            &c,
            &r(r"(u \ (x {m} u))"),
            &x,
            &r("w"),
            DEFAULT_EQUIV_BUDGET,
        )
        .unwrap();
        assert!(rep.is_proved());
        rep.replay().unwrap();
    }

    #[test]
    fn relative_equivalence_examples() {
        let c = ctx("a", "e");
        let b = r(r"(p \ (q {m} p))");
        assert!(rel_equiv(&c, &b, &b, 1).unwrap().is_proved());
        let v = rel_equiv(&c, &r(r"((x \ y) {1} q)"), &r("y"), DEFAULT_EQUIV_BUDGET).unwrap();
        assert!(v.is_proved());
        let v = rel_equiv(
            &c,
            &r(r"((x \ (b0 {m} x)) {e0} a0)"),
            &r("(b0 {e0*m} a0)"),
            DEFAULT_EQUIV_BUDGET,
        )
        .unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn scaled_calculus_examples() {
        for (base, scale) in [("a", "e"), ("a", "1"), (r"(u \ u)", "e^2")] {
            let reports =
                check_scaled_calculus(&ctx(base, scale), 0, 3, DEFAULT_EQUIV_BUDGET).unwrap();
            assert_eq!(reports.len(), 15);
            for rep in &reports {
                assert!(
                    rep.is_proved(),
                    "{base} {scale}: {} {}",
                    rep.axiom,
                    rep.instance
                );
                rep.replay().unwrap();
            }
        }
    }
}
