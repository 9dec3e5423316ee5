//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lscale_core::corpus::combinator_corpus;
use lscale_core::emergent::{check_irq_batch, check_lambda_batch, check_prop_batch};
use lscale_core::gen::TermGen;
use lscale_core::lambda_normalize;
use lscale_core::relative::{check_relative_batch, RelContext, REL_RULE_LABELS};
use lscale_core::rewrite::{normalize, NormalizeStatus, DEFAULT_EQUIV_BUDGET};
use lscale_core::term::{alpha_eq, substitute, Term, TermKind};
use lscale_core::{parse_term, print_term, CheckReport, Scale};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn tally(reports: &[CheckReport]) -> BTreeMap<String, (usize, usize)> {
    let mut m: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in reports {
        let e = m.entry(r.axiom.clone()).or_default();
        e.0 += 1;
        e.1 += r.is_proved() as usize;
    }
    m
}

fn describe(t: &BTreeMap<String, (usize, usize)>) -> String {
    t.iter()
        .map(|(k, (n, p))| format!("{k} {p}/{n}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cli(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_lscale"))
        .args(args)
        .output()
        .ok()
        .and_then(|o| o.status.code())
}

fn irq(all: &mut Vec<CheckReport>) -> Outcome {
    let start = Instant::now();
    let reports = check_irq_batch(0, 200, 4, DEFAULT_EQUIV_BUDGET);
    let lib_time = start.elapsed();
    let start = Instant::now();
    let code = cli(&[
        "check", "irq", "--count", "200", "--depth", "4", "--seed", "0",
    ]);
    let cli_time = start.elapsed();
    let t = tally(&reports);
    let families: BTreeSet<&str> = reports
        .iter()
        .filter(|r| r.is_proved())
        .map(|r| r.family())
        .collect();
    let ok = reports.iter().all(|r| r.is_proved())
        && families == BTreeSet::from(["compose", "idem", "inv", "unit"])
        && t.values().all(|(n, _)| *n == 200)
        && code == Some(0)
        && lib_time.max(cli_time) < Duration::from_secs(60);
    all.extend(reports);
    outcome(
        ok,
        format!("{}; cli exit {code:?} in {cli_time:.2?}", describe(&t)),
    )
}

fn propositions(all: &mut Vec<CheckReport>) -> Outcome {
    let reports = check_prop_batch(0, 100, 4, DEFAULT_EQUIV_BUDGET);
    let t = tally(&reports);
    let ok =
        reports.iter().all(|r| r.is_proved()) && t.values().all(|(n, _)| *n == 100) && t.len() == 2;
    all.extend(reports);
    outcome(ok, describe(&t))
}

fn lambda(all: &mut Vec<CheckReport>) -> Outcome {
    let reports = check_lambda_batch(1000);
    let mut bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.is_proved())
        .map(|r| r.instance.clone())
        .collect();
    for entry in combinator_corpus() {
        if let Some(expected) = entry.expected {
            let got = lambda_normalize(&entry.term, 1000).expect("neutral-scale corpus");
            let engine = normalize(&entry.term, 1000);
            if !alpha_eq(&got.result, &expected) || !alpha_eq(&engine.result, &expected) {
                bad.push(format!("{} expected {expected}", entry.name));
            }
        }
    }
    let n = reports.len();
    all.extend(reports);
    outcome(
        bad.is_empty(),
        format!("{n} corpus terms, disagreements: {bad:?}"),
    )
}

fn relative(all: &mut Vec<CheckReport>) -> Outcome {
    let ctx = RelContext::new(parse_term("a").expect("base"), Scale::named("e"));
    let reports = match check_relative_batch(&ctx, 0, 100, 3, DEFAULT_EQUIV_BUDGET) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let t = tally(&reports);
    let enough = |label: &str, min: usize| t.get(label).is_some_and(|(n, _)| *n >= min);
    let ok = reports.iter().all(|r| r.is_proved())
        && enough("prelsub", 100)
        && enough("psimply", 100)
        && REL_RULE_LABELS.iter().all(|l| enough(l, 50));
    all.extend(reports);
    outcome(ok, describe(&t))
}

fn free(t: &Term) -> BTreeSet<String> {
    match t.kind() {
        TermKind::Var(v) => BTreeSet::from([v.to_string()]),
        TermKind::Abs(x, b) => {
            let mut s = free(b);
            s.remove(x.as_str());
            s
        }
        TermKind::Scaled(l, _, r) => free(l).union(&free(r)).cloned().collect(),
    }
}

fn substitution_laws() -> Outcome {
    let mut g = TermGen::new(0);
    let mut violations = 0;
    for i in 0..1000 {
        let (a, v, b) = (g.term(4), g.var(), g.term(3));
        let s = substitute(&a, &v, &b);
        let mut expected = free(&a);
        let v_free = expected.remove(v.as_str());
        expected.extend(free(&b));
        let law1 = free(&s).is_subset(&expected) && (!v_free || free(&s) == expected);
        let law2 = alpha_eq(&substitute(&a, &v, &Term::var(v.clone())), &a);
        let law3 = v_free || alpha_eq(&s, &a);
        // an α-variant of `a` with every binder renamed apart
        let fresh = lscale_core::term::name(&format!("w{i}"));
        let a2 = match a.kind() {
            TermKind::Abs(x, body) => {
                Term::abs(fresh.clone(), substitute(body, x, &Term::var(fresh)))
            }
            _ => a.clone(),
        };
        let law4 = !alpha_eq(&a, &a2) || alpha_eq(&substitute(&a2, &v, &b), &s);
        violations += [law1, law2, law3, law4].iter().filter(|ok| !**ok).count();
    }
    outcome(
        violations == 0,
        format!("1000 triples, {violations} violations"),
    )
}

fn soundness(all: &[CheckReport]) -> Outcome {
    let proved: Vec<&CheckReport> = all.iter().filter(|r| r.is_proved()).collect();
    let failed = proved.iter().filter(|r| r.replay().is_err()).count();
    outcome(
        failed == 0 && !proved.is_empty(),
        format!(
            "{} proved verdicts replayed, {failed} failures",
            proved.len()
        ),
    )
}

fn divergence() -> Outcome {
    let omega = parse_term(r"((x \ (x {1} x)) {1} (x \ (x {1} x)))").expect("omega");
    let mut ok = true;
    for budget in [10, 100, 1000] {
        let out = normalize(&omega, budget);
        ok &= out.status == NormalizeStatus::BudgetExhausted && out.trace.len() == budget;
    }
    let runs: Vec<_> = (0..3).map(|_| normalize(&omega, 1000).trace).collect();
    let deterministic = runs.windows(2).all(|w| w[0] == w[1]);
    outcome(
        ok && deterministic,
        format!("budgets 10/100/1000 exhausted: {ok}, identical traces: {deterministic}"),
    )
}

fn frontend() -> Outcome {
    let mut g = TermGen::new(0);
    let mismatches = (0..1000)
        .filter(|_| {
            let t = g.term(5);
            parse_term(&print_term(&t)).ok().as_ref() != Some(&t)
        })
        .count();
    let codes = [
        cli(&["equiv", r"((x \ (b {m} x)) {e} a)", "(b {e*m} a)"]),
        cli(&[
            "reduce",
            r"((x \ (x {1} x)) {1} (x \ (x {1} x)))",
            "--budget",
            "20",
        ]),
        cli(&["check", "irq", "--count", "200", "--seed", "0"]),
    ];
    outcome(
        mismatches == 0 && codes.iter().all(|c| *c == Some(0)),
        format!("{mismatches} round-trip mismatches, cli exit codes {codes:?}"),
    )
}

fn main() -> ExitCode {
    let mut all = Vec::new();
    let results = [
        ("1 quasigroup laws", irq(&mut all)),
        ("2 propositions", propositions(&mut all)),
        ("3 lambda embedding", lambda(&mut all)),
        ("4 relative calculus", relative(&mut all)),
        ("5 substitution laws", substitution_laws()),
        ("6 soundness audit", soundness(&all)),
        ("7 divergence", divergence()),
        ("8 frontend", frontend()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.ok as usize;
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
