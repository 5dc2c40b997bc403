//! Expression reader. Grammar (whitespace-insensitive):
//!
//! ```text
//! expr      = term { ("+" | "-") term } ;
//! term      = unary { ["*"] unary } ;             juxtaposition multiplies
//! unary     = "-" unary | "+" unary | power ;
//! power     = atom [ "^" exponent ] ;
//! exponent  = ["-"] digits ;                      negative only on scalars
//! atom      = generator | number | "i" | "q" | "(" expr ")" ;
//! generator = ("a" | "α" | "b" | "β") [ "'" | "†" | "*" ] ;
//! number    = digits ["." digits] [("e" | "E") ["+" | "-"] digits] ["i"] ;
//! ```
//!
//! A `*` right after a generator is the adjoint unless an atom follows it, so
//! `a*b` is `αβ`, while `a*`, `a* + b` and `a**b` contain `α*`.

use num_complex::Complex64;

use super::{Algebra, Letter, NcPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Gen(Letter),
    Num(Complex64),
    Q,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(u64),
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

impl Lexer {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_non_ws(&self, from: usize) -> Option<char> {
        self.chars[from..].iter().copied().find(|c| !c.is_whitespace())
    }

    fn starts_atom(c: char) -> bool {
        matches!(c, 'a' | 'b' | 'α' | 'β' | 'q' | 'i' | '(' | '.') || c.is_ascii_digit()
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        let mut after_caret = false;
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(&c) = self.chars.get(self.pos) else { break };
            let tok = match c {
                'a' | 'α' | 'b' | 'β' => {
                    self.pos += 1;
                    let base = if matches!(c, 'a' | 'α') { Letter::Alpha } else { Letter::Beta };
                    let adj = match self.chars.get(self.pos) {
                        Some('\'') | Some('†') => {
                            self.pos += 1;
                            true
                        }
                        Some('*') => {
                            let atom_follows = self.peek_non_ws(self.pos + 1).is_some_and(Self::starts_atom);
                            if !atom_follows {
                                self.pos += 1;
                            }
                            !atom_follows
                        }
                        _ => false,
                    };
                    Tok::Gen(if adj { base.adjoint() } else { base })
                }
                'q' => {
                    self.pos += 1;
                    Tok::Q
                }
                'i' => {
                    self.pos += 1;
                    Tok::Num(Complex64::new(0.0, 1.0))
                }
                '+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                '-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                '*' | '·' => {
                    self.pos += 1;
                    Tok::Star
                }
                '^' => {
                    self.pos += 1;
                    Tok::Caret
                }
                '(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                ')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                d if d.is_ascii_digit() || d == '.' => {
                    if after_caret {
                        self.int()?
                    } else {
                        self.number()?
                    }
                }
                other => return Err(syntax(start, format!("unexpected character '{other}'"))),
            };
            after_caret = tok == Tok::Caret || (after_caret && tok == Tok::Minus);
            out.push((start, tok));
        }
        Ok(out)
    }

    fn int(&mut self) -> Result<Tok> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u64>().map(Tok::Int).map_err(|_| syntax(start, format!("bad exponent '{s}'")))
    }

    fn number(&mut self) -> Result<Tok> {
        let start = self.pos;
        let digits = |lx: &mut Lexer| {
            while lx.chars.get(lx.pos).is_some_and(|c| c.is_ascii_digit()) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.chars.get(self.pos), Some('e') | Some('E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+') | Some('-')) {
                self.pos += 1;
            }
            if self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: f64 = s.parse().map_err(|_| syntax(start, format!("bad number '{s}'")))?;
        if self.chars.get(self.pos) == Some(&'i') {
            self.pos += 1;
            Ok(Tok::Num(Complex64::new(0.0, v)))
        } else {
            Ok(Tok::Num(Complex64::new(v, 0.0)))
        }
    }
}

struct Parser<'a> {
    alg: &'a Algebra,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.alg.checked_mul(&acc, &rhs)?;
                }
                Some(Tok::Gen(_)) | Some(Tok::Num(_)) | Some(Tok::Q) | Some(Tok::LParen) => {
                    let rhs = self.unary()?;
                    acc = self.alg.checked_mul(&acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<NcPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let e = match self.bump() {
            Some(Tok::Int(e)) => e,
            _ => return Err(syntax(pos, "expected integer exponent")),
        };
        let e32 = u32::try_from(e).map_err(|_| Error::DegreeOverflow { degree: u32::MAX, max: self.alg.max_degree() })?;
        if negative {
            let scalar = scalar_value(&base).ok_or_else(|| syntax(pos, "negative exponent on a non-scalar"))?;
            if scalar == Complex64::new(0.0, 0.0) {
                return Err(syntax(pos, "zero raised to a negative power"));
            }
            return Ok(NcPoly::constant(scalar.powi(-(e32 as i32))));
        }
        if let Some(s) = scalar_value(&base) {
            return Ok(NcPoly::constant(s.powi(e32 as i32)));
        }
        self.alg.pow(&base, e32)
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Gen(l)) => Ok(NcPoly::generator(l)),
            Some(Tok::Num(c)) => Ok(NcPoly::constant(c)),
            Some(Tok::Q) => Ok(NcPoly::constant(Complex64::new(self.alg.q().value(), 0.0))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(self.toks.get(self.at - 1).map(|(p, _)| *p).unwrap_or(self.end), "expected ')'")),
                }
            }
            Some(t) => Err(syntax(pos, format!("unexpected token {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn scalar_value(p: &NcPoly) -> Option<Complex64> {
    if p.is_zero() {
        return Some(Complex64::new(0.0, 0.0));
    }
    (p.len() == 1 && p.degree() == 0).then(|| p.coeff(&super::CanonicalMonomial::UNIT))
}

pub(super) fn parse(alg: &Algebra, text: &str) -> Result<NcPoly> {
    let chars: Vec<char> = text.chars().collect();
    let end = chars.len();
    let toks = Lexer { chars, pos: 0 }.tokens()?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser { alg, toks, at: 0, end };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(out.pruned(alg.prune_threshold()))
}
