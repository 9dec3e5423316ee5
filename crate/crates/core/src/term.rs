//! Term syntax, variable accounting, α-equivalence and capture-avoiding
//! substitution.
//!
//! Terms are immutable and reference counted; every node caches its free
//! variables and size so that rule side conditions are cheap to test.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::scale::{is_identifier, Scale};

/// Identifiers the concrete syntax reserves; they can never name a variable.
pub const RESERVED_WORDS: &[&str] = &["dil"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("`{0}` is not a valid variable name")]
    Invalid(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: &str) -> Result<Self, NameError> {
        if !is_identifier(name) {
            return Err(NameError::Invalid(name.to_string()));
        }
        if RESERVED_WORDS.contains(&name) {
            return Err(NameError::Reserved(name.to_string()));
        }
        Ok(VarName(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VarName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarName::new(s)
    }
}

/// Variable name from a literal; panics on an invalid name.
pub fn name(s: &str) -> VarName {
    VarName::new(s).unwrap_or_else(|e| panic!("{e}"))
}

pub type VarSet = BTreeSet<VarName>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Var(VarName),
    /// `x λ A`
    Abs(VarName, Term),
    /// `A ε B`
    Scaled(Term, Scale, Term),
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    free: VarSet,
    size: usize,
}

/// A λ-Scale term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    pub fn var(v: VarName) -> Term {
        let mut free = VarSet::new();
        free.insert(v.clone());
        Term(Arc::new(Node {
            kind: TermKind::Var(v),
            free,
            size: 1,
        }))
    }

    pub fn abs(binder: VarName, body: Term) -> Term {
        let mut free = body.0.free.clone();
        free.remove(&binder);
        let size = body.size() + 2;
        Term(Arc::new(Node {
            kind: TermKind::Abs(binder, body),
            free,
            size,
        }))
    }

    pub fn scaled(left: Term, scale: Scale, right: Term) -> Term {
        let mut free = left.0.free.clone();
        free.extend(right.0.free.iter().cloned());
        let size = left.size() + right.size() + 1;
        Term(Arc::new(Node {
            kind: TermKind::Scaled(left, scale, right),
            free,
            size,
        }))
    }

    /// Application at the neutral scale, `A 1 B`.
    pub fn app(left: Term, right: Term) -> Term {
        Term::scaled(left, Scale::one(), right)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn free_vars(&self) -> &VarSet {
        &self.0.free
    }

    pub fn is_free(&self, v: &VarName) -> bool {
        self.0.free.contains(v)
    }

    /// Number of nodes in the syntactic tree, binder leaves included.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn as_var(&self) -> Option<&VarName> {
        match self.kind() {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self.kind() {
            TermKind::Var(v) => {
                out.insert(v.clone());
            }
            TermKind::Abs(x, body) => {
                out.insert(x.clone());
                body.collect_vars(out);
            }
            TermKind::Scaled(l, _, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self.kind() {
            TermKind::Var(_) => 0,
            TermKind::Abs(_, body) => 1 + body.depth(),
            TermKind::Scaled(l, _, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn subterm(&self, at: &Position) -> Option<&Term> {
        let mut t = self;
        for dir in &at.0 {
            t = t.child(*dir)?;
        }
        Some(t)
    }

    fn child(&self, dir: Dir) -> Option<&Term> {
        match (self.kind(), dir) {
            (TermKind::Abs(_, body), Dir::Body) => Some(body),
            (TermKind::Scaled(l, _, _), Dir::Left) => Some(l),
            (TermKind::Scaled(_, _, r), Dir::Right) => Some(r),
            _ => None,
        }
    }

    /// Replaces the subterm at `at`; `None` if the position does not resolve.
    pub fn replace_at(&self, at: &Position, new: Term) -> Option<Term> {
        self.replace_path(&at.0, new)
    }

    fn replace_path(&self, path: &[Dir], new: Term) -> Option<Term> {
        let Some((first, rest)) = path.split_first() else {
            return Some(new);
        };
        match (self.kind(), first) {
            (TermKind::Abs(x, body), Dir::Body) => {
                Some(Term::abs(x.clone(), body.replace_path(rest, new)?))
            }
            (TermKind::Scaled(l, s, r), Dir::Left) => Some(Term::scaled(
                l.replace_path(rest, new)?,
                s.clone(),
                r.clone(),
            )),
            (TermKind::Scaled(l, s, r), Dir::Right) => Some(Term::scaled(
                l.clone(),
                s.clone(),
                r.replace_path(rest, new)?,
            )),
            _ => None,
        }
    }

    /// All positions in preorder: a node before its children, left before
    /// right.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<Dir>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        match self.kind() {
            TermKind::Var(_) => {}
            TermKind::Abs(_, body) => {
                path.push(Dir::Body);
                body.collect_positions(path, out);
                path.pop();
            }
            TermKind::Scaled(l, _, r) => {
                path.push(Dir::Left);
                l.collect_positions(path, out);
                path.pop();
                path.push(Dir::Right);
                r.collect_positions(path, out);
                path.pop();
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

/// Canonical fully parenthesized form, e.g. `((x \ (b {m} x)) {e} a)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::Abs(x, body) => write!(f, "({x} \\ {body})"),
            TermKind::Scaled(l, s, r) => write!(f, "({l} {{{s}}} {r})"),
        }
    }
}

/// Step direction inside a syntactic tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
    Body,
}

/// Address of a subterm, as the path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<Dir>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, dir: Dir) -> Position {
        let mut path = self.0.clone();
        path.push(dir);
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for d in &self.0 {
            f.write_str(match d {
                Dir::Left => "L",
                Dir::Right => "R",
                Dir::Body => "B",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "root" {
            return Ok(Position::root());
        }
        s.chars()
            .map(|c| match c {
                'L' => Ok(Dir::Left),
                'R' => Ok(Dir::Right),
                'B' => Ok(Dir::Body),
                other => Err(format!("bad position step `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

pub fn all_vars(t: &Term) -> VarSet {
    t.all_vars()
}

pub fn free_vars(t: &Term) -> VarSet {
    t.free_vars().clone()
}

/// First of `hint`, `hint_1`, `hint_2`, ... for which `taken` is false.
pub fn fresh_var_by(hint: &VarName, taken: impl Fn(&VarName) -> bool) -> VarName {
    if !taken(hint) {
        return hint.clone();
    }
    (1u64..)
        .map(|i| VarName(Arc::from(format!("{}_{i}", hint.as_str()))))
        .find(|v| !taken(v))
        .expect("unbounded name supply")
}

pub fn fresh_var(avoid: &VarSet, hint: &VarName) -> VarName {
    fresh_var_by(hint, |v| avoid.contains(v))
}

/// α-equivalence: equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(
        a: &'a Term,
        b: &'a Term,
        ea: &mut Vec<&'a VarName>,
        eb: &mut Vec<&'a VarName>,
    ) -> bool {
        if ea.is_empty() && Arc::ptr_eq(&a.0, &b.0) {
            return true;
        }
        if a.size() != b.size() {
            return false;
        }
        match (a.kind(), b.kind()) {
            (TermKind::Var(x), TermKind::Var(y)) => {
                let ix = ea.iter().rposition(|v| *v == x);
                let iy = eb.iter().rposition(|v| *v == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (TermKind::Abs(x, ba), TermKind::Abs(y, bb)) => {
                ea.push(x);
                eb.push(y);
                let r = go(ba, bb, ea, eb);
                ea.pop();
                eb.pop();
                r
            }
            (TermKind::Scaled(la, sa, ra), TermKind::Scaled(lb, sb, rb)) => {
                sa == sb && go(la, lb, ea, eb) && go(ra, rb, ea, eb)
            }
            _ => false,
        }
    }
    if a.free_vars() != b.free_vars() {
        return false;
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// A string that is equal for two terms iff they are α-equivalent. Bound
/// occurrences print as de Bruijn indices (`#0` is the nearest binder).
pub fn alpha_key(t: &Term) -> String {
    fn go<'a>(t: &'a Term, env: &mut Vec<&'a VarName>, out: &mut String) {
        match t.kind() {
            TermKind::Var(v) => match env.iter().rposition(|b| *b == v) {
                Some(i) => {
                    out.push('#');
                    out.push_str(&(env.len() - 1 - i).to_string());
                }
                None => out.push_str(v.as_str()),
            },
            TermKind::Abs(x, body) => {
                out.push_str("(\\ ");
                env.push(x);
                go(body, env, out);
                env.pop();
                out.push(')');
            }
            TermKind::Scaled(l, s, r) => {
                out.push('(');
                go(l, env, out);
                out.push_str(" {");
                out.push_str(&s.to_string());
                out.push_str("} ");
                go(r, env, out);
                out.push(')');
            }
        }
    }
    let mut out = String::with_capacity(t.size() * 3);
    go(t, &mut Vec::new(), &mut out);
    out
}

/// A hash that agrees on α-equivalent terms; collisions must be resolved
/// with [`alpha_eq`].
pub fn alpha_hash(t: &Term) -> u64 {
    fn go<'a, H: Hasher>(t: &'a Term, env: &mut Vec<&'a VarName>, h: &mut H) {
        match t.kind() {
            TermKind::Var(v) => match env.iter().rposition(|b| *b == v) {
                Some(i) => {
                    0u8.hash(h);
                    (env.len() - 1 - i).hash(h);
                }
                None => {
                    1u8.hash(h);
                    v.as_str().hash(h);
                }
            },
            TermKind::Abs(x, body) => {
                2u8.hash(h);
                env.push(x);
                go(body, env, h);
                env.pop();
            }
            TermKind::Scaled(l, s, r) => {
                3u8.hash(h);
                s.hash(h);
                go(l, env, h);
                go(r, env, h);
            }
        }
    }
    let mut h = std::collections::hash_map::DefaultHasher::new();
    go(t, &mut Vec::new(), &mut h);
    h.finish()
}

/// `a[v := b]`, renaming binders of `a` that would capture free variables of
/// `b`.
pub fn substitute(a: &Term, v: &VarName, b: &Term) -> Term {
    substitute_avoiding(a, v, b, &VarSet::new())
}

/// As [`substitute`], with renamed binders additionally kept out of `avoid`.
pub fn substitute_avoiding(a: &Term, v: &VarName, b: &Term, avoid: &VarSet) -> Term {
    if !a.is_free(v) {
        return a.clone();
    }
    match a.kind() {
        // v is free in a, so this is the (s1) case.
        TermKind::Var(_) => b.clone(),
        TermKind::Scaled(l, s, r) => Term::scaled(
            substitute_avoiding(l, v, b, avoid),
            s.clone(),
            substitute_avoiding(r, v, b, avoid),
        ),
        TermKind::Abs(x, body) => {
            // x != v here, otherwise v would not be free in a.
            if !b.is_free(x) {
                return Term::abs(x.clone(), substitute_avoiding(body, v, b, avoid));
            }
            let fresh = fresh_var_by(x, |n| {
                n == v || b.is_free(n) || body.is_free(n) || avoid.contains(n)
            });
            let renamed = substitute_avoiding(body, x, &Term::var(fresh.clone()), avoid);
            Term::abs(fresh, substitute_avoiding(&renamed, v, b, avoid))
        }
    }
}
