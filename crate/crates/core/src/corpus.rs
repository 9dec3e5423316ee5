//! Terminating neutral-scale terms built from the usual combinators.

use std::collections::HashMap;

use crate::oracle::church;
use crate::syntax::parse_term_with;
use crate::term::Term;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub term: Term,
    /// Classical normal form, when known in closed form.
    pub expected: Option<Term>,
}

fn macros() -> HashMap<String, Term> {
    let mut m = HashMap::new();
    let defs = [
        ("I", r"(x \ x)"),
        ("K", r"(x \ (y \ x))"),
        ("S", r"(x \ (y \ (z \ ((x z) (y z)))))"),
        ("B", r"(x \ (y \ (z \ (x (y z)))))"),
        ("C", r"(x \ (y \ (z \ ((x z) y))))"),
        ("plus", r"(m \ (n \ (f \ (x \ ((m f) ((n f) x))))))"),
        ("times", r"(m \ (n \ (f \ (m (n f)))))"),
    ];
    for (k, v) in defs {
        let t = parse_term_with(v, &m).expect("corpus definition parses");
        m.insert(k.to_string(), t);
    }
    for n in 0..=6 {
        m.insert(format!("c{n}"), church(n));
    }
    m
}

pub fn combinator_corpus() -> Vec<CorpusEntry> {
    let m = macros();
    let entry = |name: &str, src: &str, expected: Option<&str>| CorpusEntry {
        name: name.to_string(),
        term: parse_term_with(src, &m).expect("corpus term parses"),
        expected: expected.map(|e| parse_term_with(e, &m).expect("corpus term parses")),
    };
    let mut out = vec![
        entry("I", "I", None),
        entry("I a", "(I a)", Some("a")),
        entry("K", "K", None),
        entry("K a b", "((K a) b)", Some("a")),
        entry(
            "S a b",
            r"(((x \ (y \ ((x {1} z) {1} (y {1} z)))) {1} a) {1} b)",
            Some("((a z) (b z))"),
        ),
        entry("S a b c", "(((S a) b) c)", Some("((a c) (b c))")),
        entry("S K K a", "(((S K) K) a)", Some("a")),
        entry("S K K", "((S K) K)", Some("I")),
        entry("B a b c", "(((B a) b) c)", Some("(a (b c))")),
        entry("C a b c", "(((C a) b) c)", Some("((a c) b)")),
        entry("C K a b", "(((C K) a) b)", Some("b")),
        entry("B I I a", "(((B I) I) a)", Some("a")),
    ];
    for n in 0..=5 {
        out.push(entry(&format!("church {n}"), &format!("c{n}"), None));
        out.push(entry(
            &format!("church {n} f x"),
            &format!("((c{n} f) x)"),
            None,
        ));
    }
    out.push(entry("plus 2 3", "((plus c2) c3)", Some("c5")));
    out.push(entry("times 2 3", "((times c2) c3)", Some("c6")));
    out.push(entry("plus 0 4", "((plus c0) c4)", Some("c4")));
    out.push(entry("times 1 5", "((times c1) c5)", Some("c5")));
    out
}
