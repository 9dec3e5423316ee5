//! Classical untyped λ-calculus with de Bruijn indices, used as ground truth
//! for the neutral-scale fragment. Shares no code with the rewrite engine
//! beyond conversion to and from [`Term`].

use std::fmt;

use crate::emergent::{is_t1_term, EmergentError};
use crate::rewrite::NormalizeStatus;
use crate::term::{fresh_var_by, name, Term, TermKind, VarName};

#[derive(Clone, PartialEq, Eq)]
enum Db {
    /// Bound variable, `0` is the nearest binder.
    Bound(usize),
    Free(VarName),
    /// Binder name kept as a hint for converting back.
    Lam(VarName, Box<Db>),
    App(Box<Db>, Box<Db>),
}

impl fmt::Debug for Db {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Db::Bound(i) => write!(f, "#{i}"),
            Db::Free(v) => write!(f, "{v}"),
            Db::Lam(_, b) => write!(f, "(λ {b:?})"),
            Db::App(l, r) => write!(f, "({l:?} {r:?})"),
        }
    }
}

fn to_db(t: &Term, env: &mut Vec<VarName>) -> Db {
    match t.kind() {
        TermKind::Var(v) => match env.iter().rposition(|b| b == v) {
            Some(i) => Db::Bound(env.len() - 1 - i),
            None => Db::Free(v.clone()),
        },
        TermKind::Abs(x, body) => {
            env.push(x.clone());
            let b = to_db(body, env);
            env.pop();
            Db::Lam(x.clone(), Box::new(b))
        }
        TermKind::Scaled(l, _, r) => Db::App(Box::new(to_db(l, env)), Box::new(to_db(r, env))),
    }
}

fn free_names(t: &Db, out: &mut Vec<VarName>) {
    match t {
        Db::Bound(_) => {}
        Db::Free(v) => out.push(v.clone()),
        Db::Lam(_, b) => free_names(b, out),
        Db::App(l, r) => {
            free_names(l, out);
            free_names(r, out);
        }
    }
}

/// Binder names are chosen distinct from every free name and every enclosing
/// binder, so no capture can occur.
fn from_db(t: &Db, free: &[VarName], env: &mut Vec<VarName>) -> Term {
    match t {
        Db::Bound(i) => Term::var(env[env.len() - 1 - i].clone()),
        Db::Free(v) => Term::var(v.clone()),
        Db::Lam(hint, b) => {
            let x = fresh_var_by(hint, |c| free.contains(c) || env.contains(c));
            env.push(x.clone());
            let body = from_db(b, free, env);
            env.pop();
            Term::abs(x, body)
        }
        Db::App(l, r) => Term::app(from_db(l, free, env), from_db(r, free, env)),
    }
}

fn shift(t: &Db, by: isize, cutoff: usize) -> Db {
    match t {
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + by) as usize),
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::Lam(x, b) => Db::Lam(x.clone(), Box::new(shift(b, by, cutoff + 1))),
        Db::App(l, r) => Db::App(
            Box::new(shift(l, by, cutoff)),
            Box::new(shift(r, by, cutoff)),
        ),
    }
}

fn subst(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Bound(i) if *i == j => s.clone(),
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::Lam(x, b) => Db::Lam(x.clone(), Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        Db::App(l, r) => Db::App(Box::new(subst(l, j, s)), Box::new(subst(r, j, s))),
    }
}

fn occurs(t: &Db, j: usize) -> bool {
    match t {
        Db::Bound(i) => *i == j,
        Db::Free(_) => false,
        Db::Lam(_, b) => occurs(b, j + 1),
        Db::App(l, r) => occurs(l, j) || occurs(r, j),
    }
}

/// One leftmost-outermost β or η step.
fn step(t: &Db) -> Option<Db> {
    match t {
        Db::Bound(_) | Db::Free(_) => None,
        Db::App(l, r) => {
            if let Db::Lam(_, body) = &**l {
                return Some(shift(&subst(body, 0, &shift(r, 1, 0)), -1, 0));
            }
            if let Some(l2) = step(l) {
                return Some(Db::App(Box::new(l2), r.clone()));
            }
            step(r).map(|r2| Db::App(l.clone(), Box::new(r2)))
        }
        Db::Lam(x, body) => {
            if let Db::App(f, arg) = &**body {
                if **arg == Db::Bound(0) && !occurs(f, 0) {
                    return Some(shift(f, -1, 0));
                }
            }
            step(body).map(|b| Db::Lam(x.clone(), Box::new(b)))
        }
    }
}

fn size(t: &Db) -> usize {
    match t {
        Db::Bound(_) | Db::Free(_) => 1,
        Db::Lam(_, b) => 1 + size(b),
        Db::App(l, r) => 1 + size(l) + size(r),
    }
}

const MAX_SIZE: usize = 200_000;

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub result: Term,
    pub steps: usize,
    pub status: NormalizeStatus,
}

impl OracleOutcome {
    pub fn is_normal(&self) -> bool {
        self.status == NormalizeStatus::Normal
    }
}

/// Normal-order βη-normalization of a neutral-scale term, reading `A 1 B`
/// as application.
pub fn lambda_normalize(t: &Term, budget: usize) -> Result<OracleOutcome, EmergentError> {
    if !is_t1_term(t) {
        return Err(EmergentError::NotT1Term(t.clone()));
    }
    let mut current = to_db(t, &mut Vec::new());
    let mut steps = 0;
    let status = loop {
        if size(&current) > MAX_SIZE {
            break NormalizeStatus::BudgetExhausted;
        }
        let Some(next) = step(&current) else {
            break NormalizeStatus::Normal;
        };
        if steps == budget {
            break NormalizeStatus::BudgetExhausted;
        }
        current = next;
        steps += 1;
    };
    let mut free = Vec::new();
    free_names(&current, &mut free);
    Ok(OracleOutcome {
        result: from_db(&current, &free, &mut Vec::new()),
        steps,
        status,
    })
}

/// The `n`-th Church numeral `λf.λx. f (f … (f x))`.
pub fn church(n: usize) -> Term {
    let (f, x) = (name("f"), name("x"));
    let mut body = Term::var(x.clone());
    for _ in 0..n {
        body = Term::app(Term::var(f.clone()), body);
    }
    Term::abs(f, Term::abs(x, body))
}
