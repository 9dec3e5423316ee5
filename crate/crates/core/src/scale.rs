//! The commutative scale group, realized as the free abelian group over named
//! generators.
//!
//! A [`Scale`] is a finite map from generators to nonzero exponents. The map is
//! kept canonical at all times, so structural equality is group equality and
//! the neutral element is the empty map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaleError {
    #[error("invalid generator name `{0}`")]
    BadGenerator(String),
    #[error("invalid scale literal `{text}`: {reason}")]
    BadLiteral { text: String, reason: String },
}

/// A named generator of the scale group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Self, ScaleError> {
        if is_identifier(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(ScaleError::BadGenerator(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Letter followed by letters, digits or underscores.
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An element of the scale group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scale {
    exps: BTreeMap<Generator, BigInt>,
}

impl Scale {
    /// The neutral element `1`.
    pub fn one() -> Self {
        Scale::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(g, BigInt::one());
        Scale { exps }
    }

    /// Builds a scale from a generator name, panicking on an invalid name.
    pub fn named(name: &str) -> Self {
        Scale::generator(Generator::new(name).expect("valid generator name"))
    }

    /// Canonicalizing constructor: repeated generators are combined and zero
    /// exponents dropped.
    pub fn from_exponents<I, E>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let mut exps: BTreeMap<Generator, BigInt> = BTreeMap::new();
        for (g, e) in pairs {
            *exps.entry(g).or_insert_with(BigInt::zero) += e.into();
        }
        exps.retain(|_, e| !e.is_zero());
        Scale { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn inv(&self) -> Scale {
        Scale {
            exps: self.exps.iter().map(|(g, e)| (g.clone(), -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Scale) -> Scale {
        let mut exps = self.exps.clone();
        for (g, e) in &other.exps {
            *exps.entry(g.clone()).or_insert_with(BigInt::zero) += e;
        }
        exps.retain(|_, e| !e.is_zero());
        Scale { exps }
    }

    pub fn pow(&self, n: i64) -> Scale {
        let n = BigInt::from(n);
        Scale::from_exponents(self.exps.iter().map(|(g, e)| (g.clone(), e * &n)))
    }

    /// Exponent of `g`, zero when absent.
    pub fn exponent(&self, g: &Generator) -> BigInt {
        self.exps.get(g).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&Generator, &BigInt)> {
        self.exps.iter()
    }
}

pub fn scale_mul(a: &Scale, b: &Scale) -> Scale {
    a.mul(b)
}

pub fn scale_inv(a: &Scale) -> Scale {
    a.inv()
}

pub fn scale_is_one(a: &Scale) -> bool {
    a.is_one()
}

impl Mul for &Scale {
    type Output = Scale;

    fn mul(self, rhs: &Scale) -> Scale {
        Scale::mul(self, rhs)
    }
}

impl Mul for Scale {
    type Output = Scale;

    fn mul(self, rhs: Scale) -> Scale {
        Scale::mul(&self, &rhs)
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Scale {
    type Err = ScaleError;

    /// Accepts `1`, or `*`-separated factors `g` / `g^n` / `1`, in any order,
    /// with optional whitespace around tokens.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ScaleError::BadLiteral {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text.trim().is_empty() {
            return Err(bad("empty scale"));
        }
        let mut pairs = Vec::new();
        for factor in text.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((name, exp)) => {
                    let exp = exp.trim();
                    let digits = exp.strip_prefix('-').unwrap_or(exp);
                    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                        return Err(bad("exponent must be an integer"));
                    }
                    let exp: BigInt = exp
                        .parse()
                        .map_err(|_| bad("exponent must be an integer"))?;
                    (name.trim(), exp)
                }
                None => (factor, BigInt::one()),
            };
            if name.is_empty() {
                return Err(bad("missing generator"));
            }
            let g = Generator::new(name).map_err(|_| bad("generator must be an identifier"))?;
            pairs.push((g, exp));
        }
        Ok(Scale::from_exponents(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scale {
        text.parse().unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(scale_mul(&s("a^2*b^-1"), &s("b")), s("a^2"));
        assert_eq!(scale_mul(&s("e"), &Scale::one()), s("e"));
        assert!(scale_mul(&s("a"), &s("a^-1")).is_one());
    }

    #[test]
    fn inv_examples() {
        assert_eq!(scale_inv(&s("a^2")), s("a^-2"));
        assert!(scale_inv(&Scale::one()).is_one());
        assert_eq!(scale_inv(&s("a*b^-3")).to_string(), "a^-1*b^3");
    }

    #[test]
    fn zero_exponents_vanish() {
        assert!(scale_is_one(&s("a^0")));
        assert!(scale_is_one(&s("a*a^-1")));
        assert!(scale_is_one(&s("1")));
        assert_eq!(s("b^0*a").to_string(), "a");
    }

    #[test]
    fn printing_is_sorted_and_canonical() {
        assert_eq!(s("b^-1 * a^2").to_string(), "a^2*b^-1");
        assert_eq!(s("e*m").to_string(), "e*m");
        assert_eq!(s("m*e*e").to_string(), "e^2*m");
        assert_eq!(Scale::one().to_string(), "1");
    }

    #[test]
    fn bad_literals() {
        for text in ["", "^2", "a^", "a^x", "2a", "a**b", "a^-"] {
            assert!(text.parse::<Scale>().is_err(), "{text:?} should not parse");
        }
    }

    #[test]
    fn large_exponents_do_not_overflow() {
        let big = s("a^9223372036854775807");
        let sq = scale_mul(&big, &big);
        assert_eq!(sq.to_string(), "a^18446744073709551614");
        assert!(scale_mul(&sq, &sq.inv()).is_one());
    }

    fn arb_scale() -> impl Strategy<Value = Scale> {
        prop::collection::vec((0usize..4, -5i64..=5), 0..6).prop_map(|pairs| {
            let names = ["a", "b", "c", "d"];
            Scale::from_exponents(
                pairs
                    .into_iter()
                    .map(|(g, e)| (Generator::new(names[g]).unwrap(), e)),
            )
        })
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_scale(), b in arb_scale(), c in arb_scale()) {
            prop_assert_eq!(scale_mul(&scale_mul(&a, &b), &c), scale_mul(&a, &scale_mul(&b, &c)));
            prop_assert_eq!(scale_mul(&a, &b), scale_mul(&b, &a));
            prop_assert_eq!(scale_mul(&a, &Scale::one()), a.clone());
            prop_assert!(scale_mul(&a, &scale_inv(&a)).is_one());
            prop_assert_eq!(scale_inv(&scale_inv(&a)), a);
        }

        #[test]
        fn canonical_form_is_idempotent(a in arb_scale()) {
            let again = Scale::from_exponents(a.exponents().map(|(g, e)| (g.clone(), e.clone())));
            prop_assert_eq!(&again, &a);
            let reparsed: Scale = a.to_string().parse().unwrap();
            prop_assert_eq!(reparsed, a);
        }
    }
}
