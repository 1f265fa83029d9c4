//! Text syntax for polynomials: `w4^3*w7 + w6^2*w7`, `1`, `0`.

use std::fmt::Write;

use crate::algebra::{Monomial, Poly, Presentation};

/// A syntax error at a 1-based column of the parsed string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextError {
    pub column: usize,
    pub message: String,
}

/// Resolves generator names while parsing.
pub trait Alphabet {
    fn vars(&self) -> usize;
    fn lookup(&self, name: &str) -> Option<usize>;
}

impl Alphabet for Presentation {
    fn vars(&self) -> usize {
        self.num_generators()
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.generator_index(name)
    }
}

impl Alphabet for [String] {
    fn vars(&self) -> usize {
        self.len()
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(u64),
    Star,
    Caret,
    Plus,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, TextError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let column = s[..pos].chars().count() + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '*' => Token::Star,
            '^' => Token::Caret,
            '+' => Token::Plus,
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
                let n =
                    text.parse().map_err(|_| TextError { column, message: format!("number `{text}` too large") })?;
                out.push((column, Token::Int(n)));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                out.push((column, Token::Ident(chars[start..i].iter().map(|(_, c)| c).collect())));
                continue;
            }
            other => return Err(TextError { column, message: format!("unexpected character `{other}`") }),
        };
        out.push((column, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, A: Alphabet + ?Sized> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    alphabet: &'a A,
}

impl<A: Alphabet + ?Sized> Parser<'_, A> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TextError> {
        Err(TextError { column: self.column(), message: message.into() })
    }

    fn exponent(&mut self) -> Result<u64, TextError> {
        if self.peek() != Some(&Token::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        match self.peek() {
            Some(Token::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an exponent after `^`"),
        }
    }

    /// Returns `None` when the term has an even coefficient.
    fn term(&mut self) -> Result<Option<Monomial>, TextError> {
        let mut exps = vec![0u64; self.alphabet.vars()];
        let mut odd = true;
        loop {
            match self.peek().cloned() {
                Some(Token::Ident(name)) => {
                    let Some(g) = self.alphabet.lookup(&name) else {
                        return self.err(format!("unknown generator `{name}`"));
                    };
                    self.pos += 1;
                    exps[g] += self.exponent()?;
                }
                Some(Token::Int(n)) => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    if n % 2 == 0 && !(n == 0 && e == 0) {
                        odd = false;
                    }
                }
                _ => return self.err("expected a generator or a constant"),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if !odd {
            return Ok(None);
        }
        let exps: Vec<u16> = exps
            .into_iter()
            .map(|e| {
                u16::try_from(e).map_err(|_| TextError { column: self.column(), message: "exponent too large".into() })
            })
            .collect::<Result<_, _>>()?;
        Ok(Some(Monomial::from_exponents(&exps)))
    }
}

/// Parses a polynomial over `alphabet`. Integer constants are reduced mod 2.
pub fn parse_poly<A: Alphabet + ?Sized>(s: &str, alphabet: &A) -> Result<Poly, TextError> {
    let tokens = tokenize(s)?;
    let end = s.chars().count() + 1;
    let mut p = Parser { tokens, pos: 0, end, alphabet };
    let mut out = Poly::zero();
    loop {
        if let Some(m) = p.term()? {
            out.toggle(m);
        }
        match p.peek() {
            None => break,
            Some(Token::Plus) => p.pos += 1,
            Some(_) => return p.err("expected `+`, `*` or end of input"),
        }
    }
    Ok(out)
}

/// Parses a single monomial (no `+`, coefficient 1).
pub fn parse_monomial<A: Alphabet + ?Sized>(s: &str, alphabet: &A) -> Result<Monomial, TextError> {
    let tokens = tokenize(s)?;
    let end = s.chars().count() + 1;
    let mut p = Parser { tokens, pos: 0, end, alphabet };
    let m = p.term()?;
    if p.peek().is_some() {
        return p.err("expected a single monomial");
    }
    m.ok_or(TextError { column: 1, message: "monomial has an even coefficient".into() })
}

pub fn format_monomial(m: &Monomial, names: &[impl AsRef<str>]) -> String {
    let mut s = String::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(names[i].as_ref());
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Terms largest first under the presentation's term order.
pub fn format_poly(p: &Poly, pres: &Presentation) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let names: Vec<&str> = pres.generators().iter().map(|g| g.name.as_str()).collect();
    pres.sorted_terms(p).into_iter().map(|m| format_monomial(m, &names)).collect::<Vec<_>>().join(" + ")
}

pub fn format_lead(m: &Monomial, pres: &Presentation) -> String {
    let names: Vec<&str> = pres.generators().iter().map(|g| g.name.as_str()).collect();
    format_monomial(m, &names)
}
