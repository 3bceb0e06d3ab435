//! Ordinal expressions.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' factor)?
//! atom   := nat | 'w' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and only `w` may appear as the base of `^`.

use thiserror::Error;

use crate::cnf::{self, Cnf};

/// Largest natural literal accepted.
pub const MAX_NAT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("SyntaxError at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("UnsupportedBase at {pos}: only w can be raised to a power")]
    UnsupportedBase { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdExpr {
    Lit0,
    LitNat(u64),
    Omega,
    Add(Box<OrdExpr>, Box<OrdExpr>),
    Mul(Box<OrdExpr>, Box<OrdExpr>),
    /// `w` raised to the exponent.
    Pow(Box<OrdExpr>),
}

pub fn parse(text: &str) -> Result<OrdExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OrdExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.eat(b'+') {
            lhs = OrdExpr::Add(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<OrdExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = OrdExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OrdExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        if base != OrdExpr::Omega {
            return Err(ParseError::UnsupportedBase { pos: start });
        }
        Ok(OrdExpr::Pow(Box::new(self.factor()?)))
    }

    fn atom(&mut self) -> Result<OrdExpr, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'w') => {
                self.pos += 1;
                Ok(OrdExpr::Omega)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.nat(),
            Some(_) => Err(self.error("expected a natural, 'w' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<OrdExpr, ParseError> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
            v = v.saturating_mul(10).saturating_add(u64::from(c - b'0'));
            self.pos += 1;
        }
        if v > MAX_NAT {
            return Err(ParseError::Syntax {
                pos: start,
                msg: format!("natural exceeds {MAX_NAT}"),
            });
        }
        Ok(if v == 0 {
            OrdExpr::Lit0
        } else {
            OrdExpr::LitNat(v)
        })
    }
}

pub fn eval_cnf(e: &OrdExpr) -> Cnf {
    match e {
        OrdExpr::Lit0 => Cnf::zero(),
        OrdExpr::LitNat(n) => cnf::nat(*n),
        OrdExpr::Omega => Cnf::omega(),
        OrdExpr::Add(a, b) => cnf::add(&eval_cnf(a), &eval_cnf(b)),
        OrdExpr::Mul(a, b) => cnf::mul(&eval_cnf(a), &eval_cnf(b)),
        OrdExpr::Pow(e) => cnf::omega_pow(&eval_cnf(e)),
    }
}

/// Parses and evaluates in one go.
pub fn parse_cnf(text: &str) -> Result<Cnf, ParseError> {
    parse(text).map(|e| eval_cnf(&e))
}
