//! The λ-Scale calculus: untyped λ-terms whose applications carry an element
//! of a commutative scale group.
//!
//! - [`scale`]: the free abelian group of scales.
//! - [`term`]: terms, free variables, α-equivalence, substitution.
//! - [`rewrite`]: the five rewrite rules, normalization, trace validation and
//!   the equivalence search.
//! - [`emergent`]: dilations and checks of the quasigroup laws; [`oracle`] is
//!   an independent classical λ-calculus for the neutral-scale fragment.
//! - [`relative`]: relative terms and their translation.
//! - [`syntax`]: parser, printer and DOT export.

pub mod corpus;
pub mod emergent;
pub mod gen;
pub mod oracle;
pub mod relative;
pub mod report;
pub mod rewrite;
pub mod scale;
pub mod syntax;
pub mod term;

pub use emergent::{
    app, bullet, check_irq_axioms, check_irq_batch, check_lambda_batch, check_prop_batch,
    check_t1_agreement, dilation, is_t1_term, prop1_instance, prop2_instance, EmergentError,
};
pub use oracle::{lambda_normalize, OracleOutcome};
pub use relative::{
    check_prelsub, check_psimply, check_relative_batch, check_scaled_calculus,
    check_scaled_calculus_with, rel_equiv, rel_free_vars, rel_substitute, translate,
    translate_simplified, RelContext, RelError, RelTerm,
};
pub use report::{CheckReport, Verdict};
pub use rewrite::{
    equiv, normalize, simplify, validate_trace, EquivVerdict, NormalizeOutcome, NormalizeStatus,
    RewriteStep, Rule, Trace,
};
pub use scale::{scale_inv, scale_is_one, scale_mul, Generator, Scale};
pub use syntax::{parse_term, parse_term_with, print_term, to_dot, ParseError, SourceSpan};
pub use term::{alpha_eq, free_vars, fresh_var, substitute, Position, Term, TermKind, VarName};
