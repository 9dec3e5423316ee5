//! Concrete syntax.
//!
//! ```text
//! term  := IDENT
//!        | '(' IDENT '\' term ')'           abstraction  x λ A
//!        | '(' term '{' scale '}' term ')'  scaled application  A ε B
//!        | '(' term term ')'                application  A 1 B
//!        | 'dil' '{' scale '}' '(' term ',' term ')'   dilation  B ∘ε A
//! ```
//!
//! `λ` is accepted in place of `\`. Printing always uses the explicit
//! `{1}` form, so `parse_term(&print_term(t)) == t`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::emergent::dilation;
use crate::scale::Scale;
use crate::term::{Term, TermKind, VarName, RESERVED_WORDS};

/// Byte range `start..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("unbalanced parentheses at {span}")]
    UnbalancedParens { span: SourceSpan },
    #[error("bad scale literal at {span}: {message}")]
    BadScaleLiteral { span: SourceSpan, message: String },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnbalancedParens { span }
            | ParseError::BadScaleLiteral { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Lambda,
    Comma,
    Ident(String),
    /// Raw text between `{` and `}`.
    Scale(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Scale(s) => write!(f, "scale `{{{s}}}`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' | '\\' | 'λ' => {
                chars.next();
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Lambda,
                };
                out.push((tok, SourceSpan::new(i, i + c.len_utf8())));
            }
            '{' => {
                chars.next();
                let close = src[i..].find('}').map(|off| i + off);
                let Some(close) = close else {
                    return Err(ParseError::Syntax {
                        span: SourceSpan::new(i, src.len()),
                        message: "unterminated `{`".into(),
                    });
                };
                while chars.peek().is_some_and(|&(j, _)| j <= close) {
                    chars.next();
                }
                out.push((
                    Tok::Scale(src[i + 1..close].to_string()),
                    SourceSpan::new(i, close + 1),
                ));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(src[i..end].to_string()), SourceSpan::new(i, end)));
            }
            other => {
                return Err(ParseError::Syntax {
                    span: SourceSpan::new(i, i + other.len_utf8()),
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    len: usize,
    macros: Option<&'a HashMap<String, Term>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn span_here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan::new(self.len, self.len))
    }

    fn bump(&mut self) -> Option<(Tok, SourceSpan)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((tok, span)) => ParseError::Syntax {
                span: *span,
                message: format!("expected {wanted}, found {tok}"),
            },
            None => ParseError::Syntax {
                span: SourceSpan::new(self.len, self.len),
                message: format!("expected {wanted}, found end of input"),
            },
        }
    }

    /// Consumes the `)` closing the group opened at `open`.
    fn close(&mut self, open: SourceSpan) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ParseError::UnbalancedParens { span: open }),
            Some(_) => Err(self.unexpected("`)`")),
        }
    }

    fn var_name(&self, text: &str, span: SourceSpan) -> Result<VarName, ParseError> {
        VarName::new(text).map_err(|e| ParseError::Syntax {
            span,
            message: e.to_string(),
        })
    }

    fn scale(&mut self) -> Result<Scale, ParseError> {
        match self.bump() {
            Some((Tok::Scale(text), span)) => {
                text.parse()
                    .map_err(|e: crate::scale::ScaleError| ParseError::BadScaleLiteral {
                        span,
                        message: e.to_string(),
                    })
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`{scale}`"))
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let Some((tok, span)) = self.bump() else {
            return Err(self.unexpected("a term"));
        };
        match tok {
            Tok::Ident(id) if id == "dil" => self.dilation_sugar(),
            Tok::Ident(id) => {
                if let Some(t) = self.macros.and_then(|m| m.get(&id)) {
                    return Ok(t.clone());
                }
                Ok(Term::var(self.var_name(&id, span)?))
            }
            Tok::LParen => self.group(span),
            Tok::RParen => Err(ParseError::UnbalancedParens { span }),
            other => Err(ParseError::Syntax {
                span,
                message: format!("expected a term, found {other}"),
            }),
        }
    }

    fn group(&mut self, open: SourceSpan) -> Result<Term, ParseError> {
        if let (Some(Tok::Ident(id)), Some(Tok::Lambda)) = (self.peek(), self.peek_at(1)) {
            let id = id.clone();
            let span = self.span_here();
            let binder = self.var_name(&id, span)?;
            self.pos += 2;
            let body = self.term_in_group(open)?;
            self.close(open)?;
            return Ok(Term::abs(binder, body));
        }
        let left = self.term_in_group(open)?;
        let t = if let Some(Tok::Scale(_)) = self.peek() {
            let scale = self.scale()?;
            let right = self.term_in_group(open)?;
            Term::scaled(left, scale, right)
        } else {
            let right = self.term_in_group(open)?;
            Term::app(left, right)
        };
        self.close(open)?;
        Ok(t)
    }

    /// A term that must appear before the group opened at `open` closes.
    fn term_in_group(&mut self, open: SourceSpan) -> Result<Term, ParseError> {
        match self.peek() {
            None => Err(ParseError::UnbalancedParens { span: open }),
            Some(Tok::RParen) => Err(self.unexpected("a term")),
            _ => self.term(),
        }
    }

    fn dilation_sugar(&mut self) -> Result<Term, ParseError> {
        let scale = self.scale()?;
        let open = self.span_here();
        match self.bump() {
            Some((Tok::LParen, _)) => {}
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`(` after `dil{..}`"));
            }
        }
        let base = self.term_in_group(open)?;
        match self.bump() {
            Some((Tok::Comma, _)) => {}
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`,`"));
            }
        }
        let arg = self.term_in_group(open)?;
        self.close(open)?;
        Ok(dilation(&base, &scale, &arg))
    }
}

fn parse_with(src: &str, macros: Option<&HashMap<String, Term>>) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
        macros,
    };
    let t = p.term()?;
    match p.peek() {
        None => Ok(t),
        Some(Tok::RParen) => Err(ParseError::UnbalancedParens {
            span: p.span_here(),
        }),
        Some(_) => Err(p.unexpected("end of input")),
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_with(src, None)
}

/// Parses with `let`-style macros: an identifier in term position that names a
/// macro is replaced by its term. Binder positions are never expanded.
pub fn parse_term_with(src: &str, macros: &HashMap<String, Term>) -> Result<Term, ParseError> {
    parse_with(src, Some(macros))
}

pub fn parse_scale(src: &str) -> Result<Scale, ParseError> {
    src.parse()
        .map_err(|e: crate::scale::ScaleError| ParseError::BadScaleLiteral {
            span: SourceSpan::new(0, src.len()),
            message: e.to_string(),
        })
}

pub fn is_reserved(word: &str) -> bool {
    RESERVED_WORDS.contains(&word)
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// GraphViz rendering of the syntactic tree. Node ids are preorder indices;
/// a λ-node's first child is its binder leaf.
pub fn to_dot(t: &Term) -> String {
    fn go(t: &Term, next: &mut usize, out: &mut String) -> usize {
        let id = *next;
        *next += 1;
        match t.kind() {
            TermKind::Var(v) => {
                let _ = writeln!(out, "  n{id} [label=\"{v}\", shape=plaintext];");
            }
            TermKind::Abs(x, body) => {
                let _ = writeln!(out, "  n{id} [label=\"λ\"];");
                let leaf = *next;
                *next += 1;
                let _ = writeln!(out, "  n{leaf} [label=\"{x}\", shape=plaintext];");
                let b = go(body, next, out);
                let _ = writeln!(out, "  n{id} -> n{leaf} [label=\"L\"];");
                let _ = writeln!(out, "  n{id} -> n{b} [label=\"R\"];");
            }
            TermKind::Scaled(l, s, r) => {
                let _ = writeln!(out, "  n{id} [label=\"{s}\"];");
                let a = go(l, next, out);
                let b = go(r, next, out);
                let _ = writeln!(out, "  n{id} -> n{a} [label=\"L\"];");
                let _ = writeln!(out, "  n{id} -> n{b} [label=\"R\"];");
            }
        }
        id
    }
    let mut out = String::from("digraph term {\n  ordering=out;\n");
    go(t, &mut 0, &mut out);
    out.push_str("}\n");
    out
}
