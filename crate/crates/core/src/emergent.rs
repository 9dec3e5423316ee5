//! Dilations, the bullet operation and application, and instance checks for
//! the emergent-algebra laws and the classical λ-calculus fragment.

use thiserror::Error;

use crate::corpus::combinator_corpus;
use crate::gen::TermGen;
use crate::oracle::lambda_normalize;
use crate::report::{CheckReport, Verdict};
use crate::rewrite::{equiv_detailed, normalize, EquivOutcome, EquivVerdict, ProofMethod};
use crate::scale::Scale;
use crate::term::{alpha_eq, fresh_var, name, Term, TermKind, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmergentError {
    #[error("{0} has an application at a non-neutral scale")]
    NotT1Term(Term),
}

/// `B ∘ε A = (y λ A) ε B`, with `y` fresh for both terms.
pub fn dilation(b: &Term, eps: &Scale, a: &Term) -> Term {
    let mut taken: VarSet = a.free_vars().clone();
    taken.extend(b.free_vars().iter().cloned());
    let y = fresh_var(&taken, &name("y"));
    Term::scaled(Term::abs(y, a.clone()), eps.clone(), b.clone())
}

/// `B •ε A = B ∘_{ε⁻¹} A`.
pub fn bullet(b: &Term, eps: &Scale, a: &Term) -> Term {
    dilation(b, &eps.inv(), a)
}

/// `A B = A 1 B`.
pub fn app(a: &Term, b: &Term) -> Term {
    Term::app(a.clone(), b.clone())
}

fn check(axiom: &str, instance: &str, lhs: Term, rhs: Term, budget: usize) -> CheckReport {
    let outcome = equiv_detailed(&lhs, &rhs, budget);
    CheckReport::from_outcome(axiom, instance, lhs, rhs, outcome)
}

/// The idempotent right quasigroup laws on one instance: `idem`, `inv` and
/// `inv-rev` (the two inverse laws), `unit`, `compose`.
pub fn check_irq_axioms(
    a: &Term,
    b: &Term,
    eps: &Scale,
    mu: &Scale,
    budget: usize,
) -> Vec<CheckReport> {
    let instance = format!("A={a} B={b} eps={eps} mu={mu}");
    let inv = eps.inv();
    vec![
        check("idem", &instance, dilation(a, eps, a), a.clone(), budget),
        check(
            "inv",
            &instance,
            dilation(a, eps, &dilation(a, &inv, b)),
            b.clone(),
            budget,
        ),
        check(
            "inv-rev",
            &instance,
            dilation(a, &inv, &dilation(a, eps, b)),
            b.clone(),
            budget,
        ),
        check(
            "unit",
            &instance,
            dilation(a, &Scale::one(), b),
            b.clone(),
            budget,
        ),
        check(
            "compose",
            &instance,
            dilation(a, eps, &dilation(a, mu, b)),
            dilation(a, &eps.mul(mu), b),
            budget,
        ),
    ]
}

/// True iff every application in `t` is at the neutral scale.
pub fn is_t1_term(t: &Term) -> bool {
    match t.kind() {
        TermKind::Var(_) => true,
        TermKind::Abs(_, body) => is_t1_term(body),
        TermKind::Scaled(l, s, r) => s.is_one() && is_t1_term(l) && is_t1_term(r),
    }
}

/// Compares the engine's normal form of a T₁ term with the classical
/// βη-normal form computed by [`lambda_normalize`].
pub fn check_t1_agreement(t: &Term, budget: usize) -> Result<CheckReport, EmergentError> {
    let oracle = lambda_normalize(t, budget)?;
    let engine = normalize(t, budget);
    let agree =
        engine.is_normal() && oracle.is_normal() && alpha_eq(&engine.result, &oracle.result);
    Ok(CheckReport {
        axiom: "t1".into(),
        instance: t.to_string(),
        lhs: t.clone(),
        rhs: engine.result,
        verdict: if agree {
            Verdict::Proved
        } else {
            Verdict::Unknown
        },
        budget_used: engine.trace.len() + oracle.steps,
        trace: agree.then_some(engine.trace),
    })
}

/// `B ε A ≡ A ∘ε (B A)`.
pub fn prop1_instance(a: &Term, b: &Term, eps: &Scale, budget: usize) -> CheckReport {
    let lhs = Term::scaled(b.clone(), eps.clone(), a.clone());
    let rhs = dilation(a, eps, &app(b, a));
    check("prop1", &format!("A={a} B={b} eps={eps}"), lhs, rhs, budget)
}

/// `B A ≡ (x λ (B ε⁻¹ x)) ε A ≡ (x λ (B ε⁻¹ A)) ε A`, checked link by link;
/// the report's trace runs through the middle term.
pub fn prop2_instance(a: &Term, b: &Term, eps: &Scale, budget: usize) -> CheckReport {
    let mut taken: VarSet = a.free_vars().clone();
    taken.extend(b.free_vars().iter().cloned());
    let x = fresh_var(&taken, &name("x"));
    let inv = eps.inv();
    let lhs = app(b, a);
    let mid = Term::scaled(
        Term::abs(
            x.clone(),
            Term::scaled(b.clone(), inv.clone(), Term::var(x.clone())),
        ),
        eps.clone(),
        a.clone(),
    );
    let rhs = Term::scaled(
        Term::abs(x, Term::scaled(b.clone(), inv, a.clone())),
        eps.clone(),
        a.clone(),
    );
    let first = equiv_detailed(&lhs, &mid, budget);
    let second = equiv_detailed(&mid, &rhs, budget);
    let explored = first.explored + second.explored;
    let verdict = match (first.verdict, second.verdict) {
        (EquivVerdict::Proved(mut t1), EquivVerdict::Proved(t2)) => {
            t1.extend(t2);
            EquivVerdict::Proved(t1)
        }
        _ => EquivVerdict::Unknown,
    };
    let outcome = EquivOutcome {
        method: verdict.is_proved().then_some(ProofMethod::Search),
        verdict,
        explored,
    };
    CheckReport::from_outcome(
        "prop2",
        format!("A={a} B={b} eps={eps} via {mid}"),
        lhs,
        rhs,
        outcome,
    )
}

/// `count` random instances of the quasigroup laws, terms of depth `depth`.
pub fn check_irq_batch(seed: u64, count: usize, depth: usize, budget: usize) -> Vec<CheckReport> {
    let mut g = TermGen::new(seed);
    let mut out = Vec::with_capacity(count * 5);
    for _ in 0..count {
        let a = g.term(depth);
        let b = g.term(depth);
        let eps = g.scale();
        let mu = g.scale();
        out.extend(check_irq_axioms(&a, &b, &eps, &mu, budget));
    }
    out
}

/// Both propositions on `count` random instances each.
pub fn check_prop_batch(seed: u64, count: usize, depth: usize, budget: usize) -> Vec<CheckReport> {
    let mut g = TermGen::new(seed);
    let mut out = Vec::with_capacity(count * 2);
    for _ in 0..count {
        let a = g.term(depth);
        let b = g.term(depth);
        let eps = g.scale();
        out.push(prop1_instance(&a, &b, &eps, budget));
    }
    for _ in 0..count {
        let a = g.term(depth);
        let b = g.term(depth);
        let eps = g.scale();
        out.push(prop2_instance(&a, &b, &eps, budget));
    }
    out
}

/// Engine against oracle on the combinator corpus.
pub fn check_lambda_batch(budget: usize) -> Vec<CheckReport> {
    combinator_corpus()
        .into_iter()
        .map(|entry| {
            let mut report =
                check_t1_agreement(&entry.term, budget).expect("corpus is neutral-scale");
            report.instance = entry.name;
            report
        })
        .collect()
}
