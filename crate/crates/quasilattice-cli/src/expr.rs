//! Expression grammar for ring elements and translation sets.
//!
//! Scalar expressions build single ring elements:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := ['-'] primary ['^' uint]
//! primary := uint | z | b | '(' expr ')'
//! ```
//!
//! `z` is the root of unity of a cyclotomic field; `b` is the generator of a
//! complex Pisot field. Set expressions build lists of ring elements:
//!
//! ```text
//! setexpr := setterm ('+' setterm)*            union, in written order
//! setterm := ['-'] setcore
//! setcore := '{' [expr (',' expr)*] '}'
//!          | roots_of_unity '(' uint ')'
//!          | factor '*' setterm                scale every element
//! ```
//!
//! `roots_of_unity(j)` expands to the j-th roots of unity when they exist in
//! the field: all z^(kn/j) when j divides the cyclotomic order n, and the
//! powers of -z^((n/s)(s+1)/2) when j = 2s for odd s dividing n (the extra
//! sign supplies the missing square root of unity).

use std::sync::Arc;

use quasilattice::ring::{FieldDescriptor, FieldSpec, RingElement};

use crate::errors::{CliError, Result};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn tokenize(text: &str, start: Span) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = start.line;
    let mut col = start.col;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut value: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(dig) = d.to_digit(10) {
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(i64::from(dig)))
                            .ok_or_else(|| {
                                CliError::parse(span.line, span.col, "integer literal overflows")
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Int(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(ident),
                    span,
                });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    other => {
                        return Err(CliError::parse(
                            span.line,
                            span.col,
                            format!("unexpected character {other:?}"),
                        ));
                    }
                };
                chars.next();
                col += 1;
                out.push(Token { tok, span });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Arc<FieldSpec>,
    tokens: Vec<Token>,
    pos: usize,
    end: Span,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Arc<FieldSpec>, text: &str, start: Span) -> Result<Parser<'a>> {
        let tokens = tokenize(text, start)?;
        let end = tokens.last().map_or(start, |t| t.span);
        Ok(Parser {
            field,
            tokens,
            pos: 0,
            end,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let span = self.span();
        match self.next() {
            Some(t) if t.tok == tok => Ok(()),
            Some(t) => Err(CliError::parse(
                t.span.line,
                t.span.col,
                format!("expected {what}, found {:?}", t.tok),
            )),
            None => Err(CliError::parse(
                span.line,
                span.col,
                format!("expected {what}, found end of expression"),
            )),
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let span = self.span();
        Err(CliError::parse(span.line, span.col, msg))
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(&Tok::Minus) {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = acc.try_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement> {
        let negate = self.eat(&Tok::Minus);
        let base = self.primary()?;
        let value = if self.eat(&Tok::Caret) {
            let exp = self.uint("exponent")?;
            base.pow(exp)
        } else {
            base
        };
        Ok(if negate { value.neg() } else { value })
    }

    fn primary(&mut self) -> Result<RingElement> {
        let span = self.span();
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(v)) => Ok(self.field.integer(v)),
            Some(Tok::Ident(name)) => match (name.as_str(), self.field.descriptor()) {
                ("z", FieldDescriptor::Cyclotomic { .. })
                | ("b", FieldDescriptor::ComplexPisot { .. }) => Ok(self.field.generator()),
                ("z", _) => Err(CliError::parse(
                    span.line,
                    span.col,
                    "z denotes a root of unity; this field is not cyclotomic (its \
                     generator is written b)",
                )),
                ("b", _) => Err(CliError::parse(
                    span.line,
                    span.col,
                    "b denotes a complex Pisot generator; this field is cyclotomic \
                     (its generator is written z)",
                )),
                (other, _) => Err(CliError::parse(
                    span.line,
                    span.col,
                    format!("unknown identifier {other:?} in a scalar expression"),
                )),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(other) => Err(CliError::parse(
                span.line,
                span.col,
                format!("expected a number, generator, or '(', found {other:?}"),
            )),
            None => Err(CliError::parse(
                span.line,
                span.col,
                "expected a number, generator, or '(', found end of expression",
            )),
        }
    }

    fn uint(&mut self, what: &str) -> Result<u32> {
        let span = self.span();
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(v)) if v >= 0 => u32::try_from(v).map_err(|_| {
                CliError::parse(span.line, span.col, format!("{what} {v} is too large"))
            }),
            other => Err(CliError::parse(
                span.line,
                span.col,
                format!("expected a nonnegative integer {what}, found {other:?}"),
            )),
        }
    }

    fn set_expr(&mut self) -> Result<Vec<RingElement>> {
        let mut acc = self.set_term()?;
        while self.eat(&Tok::Plus) {
            acc.extend(self.set_term()?);
        }
        Ok(acc)
    }

    fn set_term(&mut self) -> Result<Vec<RingElement>> {
        if self.eat(&Tok::Minus) {
            let inner = self.set_term()?;
            return Ok(inner.into_iter().map(|x| x.neg()).collect());
        }
        match self.peek() {
            Some(Tok::LBrace) => {
                self.next();
                let mut elements = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        elements.push(self.expr()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        self.expect(Tok::RBrace, "'}' or ','")?;
                        break;
                    }
                }
                Ok(elements)
            }
            Some(Tok::Ident(name)) if name == "roots_of_unity" => {
                self.next();
                self.expect(Tok::LParen, "'('")?;
                let span = self.span();
                let j = self.uint("root order")?;
                self.expect(Tok::RParen, "')'")?;
                self.roots_of_unity(j, span)
            }
            _ => {
                // A scalar factor scaling a set: factor '*' setterm.
                let scalar = self.factor()?;
                self.expect(Tok::Star, "'*' (a bare scalar is not a set; write {x})")?;
                let inner = self.set_term()?;
                inner
                    .into_iter()
                    .map(|x| scalar.try_mul(&x).map_err(CliError::from))
                    .collect()
            }
        }
    }

    /// The j-th roots of unity inside the cyclotomic field of order n.
    fn roots_of_unity(&self, j: u32, span: Span) -> Result<Vec<RingElement>> {
        let n = match self.field.cyclotomic_order() {
            Some(n) => n,
            None => {
                return Err(CliError::parse(
                    span.line,
                    span.col,
                    "roots_of_unity requires a cyclotomic field",
                ));
            }
        };
        if j == 0 {
            return Err(CliError::parse(span.line, span.col, "root order must be positive"));
        }
        let base = if n % j == 0 {
            self.field.generator_pow(n / j)
        } else if j % 2 == 0 && (j / 2) % 2 == 1 && n % (j / 2) == 0 {
            // j = 2s with s odd: -z^((n/s)(s+1)/2) has order exactly 2s.
            let s = j / 2;
            self.field.generator_pow((n / s) * ((s + 1) / 2)).neg()
        } else {
            return Err(CliError::parse(
                span.line,
                span.col,
                format!("the {j}-th roots of unity do not lie in cyclotomic({n})"),
            ));
        };
        let mut out = Vec::with_capacity(j as usize);
        let mut acc = self.field.one();
        for _ in 0..j {
            acc = acc.try_mul(&base)?;
            out.push(acc.clone());
        }
        Ok(out)
    }

    fn finish(&mut self) -> Result<()> {
        if self.pos < self.tokens.len() {
            let t = &self.tokens[self.pos];
            return Err(CliError::parse(
                t.span.line,
                t.span.col,
                format!("unexpected trailing {:?}", t.tok),
            ));
        }
        Ok(())
    }
}

/// Parse a scalar ring expression. `start` is the 1-based position of the
/// expression text within its source document, for diagnostics.
pub fn parse_ring_expr(
    text: &str,
    field: &Arc<FieldSpec>,
    start: Span,
) -> Result<RingElement> {
    let mut p = Parser::new(field, text, start)?;
    if p.tokens.is_empty() {
        return p.fail("empty expression");
    }
    let value = p.expr()?;
    p.finish()?;
    Ok(value)
}

/// Parse a set expression into a list of ring elements (written order).
pub fn parse_set_expr(
    text: &str,
    field: &Arc<FieldSpec>,
    start: Span,
) -> Result<Vec<RingElement>> {
    let mut p = Parser::new(field, text, start)?;
    if p.tokens.is_empty() {
        return p.fail("empty set expression");
    }
    let value = p.set_expr()?;
    p.finish()?;
    Ok(value)
}
