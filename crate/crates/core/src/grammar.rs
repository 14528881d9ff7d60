//! Text form of polynomials: `3*x0^2*x1 - 1/2*x2^3`.
//!
//! Coefficients are signed integers or `a/b`; variables are looked up in a
//! caller-supplied name list; terms are joined by `+` / `-`. The printer
//! emits terms in descending lexicographic order so that output is canonical.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Exponents, MultiPoly};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Num(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    vars: &'a [&'a str],
    tokens: Vec<Token>,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn number(&mut self) -> Result<BigInt> {
        match self.next() {
            Some(Token::Num(n)) => Ok(n),
            other => Err(Error::Parse(format!("expected a number, found {other:?}"))),
        }
    }

    fn term(&mut self, negate: bool) -> Result<(Exponents, F::Elem)> {
        let mut exps = vec![0u32; self.vars.len()];
        let mut coeff = if negate {
            self.field.neg(&self.field.one())
        } else {
            self.field.one()
        };
        loop {
            match self.next() {
                Some(Token::Num(num)) => {
                    let den = if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        self.number()?
                    } else {
                        BigInt::one()
                    };
                    let c = self.field.from_ratio(&num, &den)?;
                    coeff = self.field.mul(&coeff, &c);
                }
                Some(Token::Ident(name)) => {
                    let v = self
                        .vars
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                    let e = if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        let n = self.number()?;
                        u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                    } else {
                        1
                    };
                    exps[v] += e;
                }
                other => return Err(Error::Parse(format!("expected a factor, found {other:?}"))),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                return Ok((exps, coeff));
            }
        }
    }
}

/// Parses a homogeneous form. `degree` fixes the degree of a zero result and,
/// when given, is enforced on nonzero results too.
pub fn parse_poly<F: Field>(
    field: &F,
    text: &str,
    vars: &[&str],
    degree: Option<u32>,
) -> Result<MultiPoly<F>> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser {
        field,
        vars,
        tokens,
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut negate = match p.peek() {
        Some(Token::Minus) => {
            p.pos += 1;
            true
        }
        Some(Token::Plus) => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        terms.push(p.term(negate)?);
        match p.next() {
            None => break,
            Some(Token::Plus) => negate = false,
            Some(Token::Minus) => negate = true,
            Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
    terms.retain(|(_, c)| !field.is_zero(c));
    let mut deg = degree;
    for (e, _) in &terms {
        let d: u32 = e.iter().sum();
        match deg {
            None => deg = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::Parse(format!(
                    "`{text}` is not homogeneous of degree {expected}"
                )))
            }
            _ => {}
        }
    }
    MultiPoly::from_terms(field, vars.len(), deg.unwrap_or(0), terms)
}

/// Canonical text form of a polynomial.
pub fn format_poly<F: Field, S: AsRef<str>>(field: &F, p: &MultiPoly<F>, vars: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (e, c) in p.terms().rev() {
        let mut coeff = field.format(c);
        let negative = coeff.starts_with('-');
        if negative {
            coeff.remove(0);
        }
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let constant = e.iter().all(|&k| k == 0);
        if coeff != "1" || constant {
            factors.push(coeff);
        }
        for (v, &k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => factors.push(vars[v].as_ref().to_string()),
                _ => factors.push(format!("{}^{}", vars[v].as_ref(), k)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// `x0, ..., x{n-1}`.
pub fn ambient_vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// `s0, ..., s{n-1}`.
pub fn param_vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}
