use std::collections::BTreeSet;

use lscale_core::emergent::{bullet, check_irq_axioms, dilation, is_t1_term};
use lscale_core::gen::TermGen;
use lscale_core::relative::{rel_equiv, rel_term_gen, translate, RelContext, RelTerm};
use lscale_core::rewrite::{
    equiv, equiv_detailed, normalize, step_beta_star, validate_trace, EquivVerdict,
    DEFAULT_EQUIV_BUDGET,
};
use lscale_core::term::{alpha_eq, alpha_key, name, substitute, Position, Term, TermKind, VarName};
use lscale_core::{parse_term, print_term, to_dot, Scale};

/// Free variables recomputed from scratch, independent of the cached sets.
fn fv(t: &Term) -> BTreeSet<String> {
    match t.kind() {
        TermKind::Var(v) => BTreeSet::from([v.to_string()]),
        TermKind::Abs(x, b) => {
            let mut s = fv(b);
            s.remove(x.as_str());
            s
        }
        TermKind::Scaled(l, _, r) => fv(l).union(&fv(r)).cloned().collect(),
    }
}

/// Renames every binder to a name not used anywhere else, giving an
/// α-equivalent copy with different binder names.
fn rename_binders(t: &Term, counter: &mut usize) -> Term {
    match t.kind() {
        TermKind::Var(_) => t.clone(),
        TermKind::Abs(x, b) => {
            *counter += 1;
            let fresh = name(&format!("r{counter}"));
            let body = substitute(b, x, &Term::var(fresh.clone()));
            Term::abs(fresh, rename_binders(&body, counter))
        }
        TermKind::Scaled(l, s, r) => Term::scaled(
            rename_binders(l, counter),
            s.clone(),
            rename_binders(r, counter),
        ),
    }
}

#[test]
fn substitution_laws_on_random_triples() {
    let mut g = TermGen::new(0);
    for _ in 0..1000 {
        let a = g.term(4);
        let b = g.term(3);
        let v = g.var();
        let s = substitute(&a, &v, &b);

        let mut bound: BTreeSet<String> = fv(&a);
        bound.remove(v.as_str());
        let allowed: BTreeSet<String> = bound.union(&fv(&b)).cloned().collect();
        assert!(fv(&s).is_subset(&allowed), "{a}[{v}:={b}] = {s}");
        if fv(&a).contains(v.as_str()) {
            assert_eq!(fv(&s), allowed, "{a}[{v}:={b}] = {s}");
        } else {
            assert!(alpha_eq(&s, &a));
        }
        assert!(alpha_eq(&substitute(&a, &v, &Term::var(v.clone())), &a));

        let a2 = rename_binders(&a, &mut 0);
        assert!(alpha_eq(&a, &a2));
        assert!(alpha_eq(&substitute(&a2, &v, &b), &s), "{a} vs {a2}");
    }
}

#[test]
fn capture_case() {
    let out = substitute(
        &parse_term(r"(x \ y)").unwrap(),
        &name("y"),
        &Term::var(name("x")),
    );
    assert_eq!(out, parse_term(r"(x_1 \ x)").unwrap());
    assert_eq!(fv(&out), BTreeSet::from(["x".to_string()]));
}

#[test]
fn alpha_key_agrees_with_alpha_eq() {
    let mut g = TermGen::new(3);
    for _ in 0..500 {
        let a = g.term(4);
        let b = rename_binders(&a, &mut 100);
        assert_eq!(alpha_key(&a), alpha_key(&b));
        let c = g.term(4);
        assert_eq!(alpha_eq(&a, &c), alpha_key(&a) == alpha_key(&c));
    }
}

#[test]
fn print_parse_round_trip() {
    let mut g = TermGen::new(0);
    for _ in 0..1000 {
        let t = g.term(5);
        let text = print_term(&t);
        assert_eq!(parse_term(&text).unwrap(), t, "{text}");
    }
}

#[test]
fn dot_is_deterministic() {
    let t = parse_term(r"((x \ (x {e} y)) {m^2} b)").unwrap();
    assert_eq!(to_dot(&t), to_dot(&t.clone()));
    assert_eq!(to_dot(&t), to_dot(&parse_term(&print_term(&t)).unwrap()));
}

#[test]
fn normal_forms_have_no_beta_redex() {
    let mut g = TermGen::new(11);
    for _ in 0..300 {
        let t = g.term(4);
        let out = normalize(&t, 500);
        if !out.is_normal() {
            continue;
        }
        for at in out.result.positions() {
            if let TermKind::Scaled(l, _, _) = out.result.subterm(&at).unwrap().kind() {
                if let TermKind::Abs(x, body) = l.kind() {
                    assert!(!body.is_free(x), "{} at {at}", out.result);
                }
            }
        }
        validate_trace(&out.trace, &t, &out.result).unwrap();
    }
}

#[test]
fn normalize_is_deterministic() {
    let mut g = TermGen::new(5);
    for _ in 0..100 {
        let t = g.term(4);
        assert_eq!(normalize(&t, 200).trace, normalize(&t, 200).trace);
    }
}

#[test]
fn beta_star_steps_are_provable_both_ways() {
    let mut g = TermGen::new(8);
    let (mut checked, mut same_normal_form) = (0, 0);
    while checked < 100 {
        let body = g.term(3);
        let x = g.var();
        if !body.is_free(&x) {
            continue;
        }
        let redex = Term::scaled(Term::abs(x, body), g.scale(), g.term(2));
        let contractum = step_beta_star(&redex, &Position::root()).unwrap();
        for (l, r) in [(&redex, &contractum), (&contractum, &redex)] {
            let v = equiv(l, r, DEFAULT_EQUIV_BUDGET);
            validate_trace(v.trace().expect("proved"), l, r).unwrap();
        }
        let (n1, n2) = (normalize(&redex, 500), normalize(&contractum, 500));
        if n1.is_normal() && n2.is_normal() {
            same_normal_form += alpha_eq(&n1.result, &n2.result) as usize;
            checked += 1;
        }
    }
    assert!(same_normal_form > 0);
}

/// The fixed rule priority makes normal forms depend on the order of
/// contraction: (R2) wins at the root of this redex, while its (β*)
/// contractum is already normal.
#[test]
fn normal_forms_are_not_confluent_across_beta_star() {
    let redex = parse_term(r"((c \ (a {e*m^-2} c)) {e^2} b)").unwrap();
    let contractum = step_beta_star(&redex, &Position::root()).unwrap();
    let (n1, n2) = (normalize(&redex, 10), normalize(&contractum, 10));
    assert!(n1.is_normal() && n2.is_normal());
    assert_eq!(n1.result, parse_term("(a {e^3*m^-2} b)").unwrap());
    assert!(alpha_eq(&n2.result, &contractum));
    assert!(!alpha_eq(&n1.result, &n2.result));
    assert!(equiv(&n1.result, &n2.result, DEFAULT_EQUIV_BUDGET).is_proved());
}

#[test]
fn equivalence_is_a_congruence() {
    let mut g = TermGen::new(21);
    let mut checked = 0;
    while checked < 50 {
        let a = g.term(3);
        let b = normalize(&a, 50).result;
        if alpha_eq(&a, &b) {
            continue;
        }
        let budget = 200;
        assert!(equiv(&a, &b, budget).is_proved());
        let c = g.term(2);
        let eps = g.scale();
        let x = g.var();
        for (l, r) in [
            (
                Term::scaled(a.clone(), eps.clone(), c.clone()),
                Term::scaled(b.clone(), eps.clone(), c.clone()),
            ),
            (
                Term::scaled(c.clone(), eps.clone(), a.clone()),
                Term::scaled(c.clone(), eps.clone(), b.clone()),
            ),
            (
                Term::abs(x.clone(), a.clone()),
                Term::abs(x.clone(), b.clone()),
            ),
        ] {
            let v = equiv(&l, &r, budget * 4);
            validate_trace(v.trace().expect("proved"), &l, &r).unwrap();
        }
        checked += 1;
    }
}

#[test]
fn equiv_verdicts_are_deterministic() {
    let mut g = TermGen::new(2);
    for _ in 0..50 {
        let (a, b) = (g.term(3), g.term(3));
        let first = equiv(&a, &b, 100);
        assert_eq!(first, equiv(&a, &b, 100));
    }
}

#[test]
fn omega_is_not_equivalent_to_a_variable_at_small_budget() {
    let omega = parse_term(r"((x \ (x {1} x)) {1} (x \ (x {1} x)))").unwrap();
    assert_eq!(
        equiv(&omega, &parse_term("z").unwrap(), 200),
        EquivVerdict::Unknown
    );
}

#[test]
fn bullet_inverts_dilation() {
    let mut g = TermGen::new(4);
    for _ in 0..100 {
        let (a, b, eps) = (g.term(3), g.term(3), g.scale());
        for lhs in [
            dilation(&a, &eps, &bullet(&a, &eps, &b)),
            bullet(&a, &eps, &dilation(&a, &eps, &b)),
        ] {
            let v = equiv(&lhs, &b, DEFAULT_EQUIV_BUDGET);
            validate_trace(v.trace().expect("proved"), &lhs, &b).unwrap();
        }
    }
}

#[test]
fn irq_laws_at_depth_three() {
    let mut g = TermGen::new(9);
    for _ in 0..50 {
        let reports = check_irq_axioms(
            &g.term(3),
            &g.term(3),
            &g.scale(),
            &g.scale(),
            DEFAULT_EQUIV_BUDGET,
        );
        for r in reports {
            assert!(r.is_proved(), "{} {}", r.axiom, r.instance);
            r.replay().unwrap();
        }
    }
}

#[test]
fn t1_is_closed_under_its_constructors() {
    let mut g = TermGen::new(6);
    for _ in 0..200 {
        let (a, b) = (g.t1_term(3), g.t1_term(3));
        assert!(is_t1_term(&a) && is_t1_term(&b));
        assert!(is_t1_term(&Term::app(a.clone(), b.clone())));
        assert!(is_t1_term(&Term::abs(g.var(), a.clone())));
        assert!(is_t1_term(&substitute(&a, &g.var(), &b)));
    }
}

#[test]
fn relative_binder_renaming() {
    let ctx = RelContext::new(parse_term("a").unwrap(), Scale::named("e"));
    let mut g = rel_term_gen(&ctx, 12);
    for _ in 0..50 {
        let body = RelTerm::lift(&g.term(3));
        let u = g.var();
        let fresh: VarName = name("k");
        let renamed = RelTerm::lift(&substitute(&body.erase(), &u, &Term::var(fresh.clone())));
        let (b1, b2) = (RelTerm::abs(u, body), RelTerm::abs(fresh, renamed));
        assert!(
            rel_equiv(&ctx, &b1, &b2, DEFAULT_EQUIV_BUDGET)
                .unwrap()
                .is_proved(),
            "{b1}"
        );
    }
}

#[test]
fn dilation_round_trip_lemma() {
    let mut g = TermGen::new(13);
    for _ in 0..100 {
        let (a, d, e) = (g.term(3), g.term(3), g.scale());
        let lhs = dilation(&a, &e.inv(), &dilation(&a, &e, &d));
        let out = equiv_detailed(&lhs, &d, DEFAULT_EQUIV_BUDGET);
        validate_trace(out.verdict.trace().expect("proved"), &lhs, &d).unwrap();
    }
    let ctx = RelContext::new(parse_term(r"(u \ u)").unwrap(), "e^2".parse().unwrap());
    assert!(translate(&ctx, &"(p {m} q)".parse().unwrap()).is_ok());
}
