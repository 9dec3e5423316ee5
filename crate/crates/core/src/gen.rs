//! Seeded random terms and scales for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scale::{Generator, Scale};
use crate::term::{name, Term, VarName};

pub struct TermGen {
    rng: ChaCha8Rng,
    /// Pool for both free variables and binders.
    pub vars: Vec<VarName>,
    pub generators: Vec<Generator>,
    /// Exponents are drawn from `-max_exponent..=max_exponent`.
    pub max_exponent: i64,
}

impl TermGen {
    /// Variables `a, b, c`; generators `e, m`; exponents in `[-2, 2]`.
    pub fn new(seed: u64) -> Self {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            vars: ["a", "b", "c"].into_iter().map(name).collect(),
            generators: ["e", "m"]
                .into_iter()
                .map(|g| Generator::new(g).expect("valid generator"))
                .collect(),
            max_exponent: 2,
        }
    }

    pub fn with_vars(mut self, vars: &[&str]) -> Self {
        self.vars = vars.iter().map(|v| name(v)).collect();
        self
    }

    pub fn var(&mut self) -> VarName {
        let i = self.rng.random_range(0..self.vars.len());
        self.vars[i].clone()
    }

    pub fn scale(&mut self) -> Scale {
        let m = self.max_exponent;
        let exps: Vec<(Generator, i64)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), self.rng.random_range(-m..=m)))
            .collect();
        Scale::from_exponents(exps)
    }

    /// Uniform over the three constructors until depth `depth`, where only
    /// variables remain.
    pub fn term(&mut self, depth: usize) -> Term {
        self.term_with(depth, false)
    }

    /// A term whose applications are all at scale `1`.
    pub fn t1_term(&mut self, depth: usize) -> Term {
        self.term_with(depth, true)
    }

    fn term_with(&mut self, depth: usize, neutral: bool) -> Term {
        let pick = if depth == 0 {
            0
        } else {
            self.rng.random_range(0..3)
        };
        match pick {
            0 => Term::var(self.var()),
            1 => {
                let x = self.var();
                Term::abs(x, self.term_with(depth - 1, neutral))
            }
            _ => {
                let l = self.term_with(depth - 1, neutral);
                let s = if neutral { Scale::one() } else { self.scale() };
                let r = self.term_with(depth - 1, neutral);
                Term::scaled(l, s, r)
            }
        }
    }

    /// A random term with its free variables abstracted.
    pub fn closed_term(&mut self, depth: usize) -> Term {
        let t = self.term(depth);
        let free: Vec<VarName> = t.free_vars().iter().cloned().collect();
        free.into_iter().rev().fold(t, |body, v| Term::abs(v, body))
    }

    pub fn bool(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }
}
