//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term { ("+"|"-") term } ;
//! term     := factor { ("*"|"/") factor } ;
//! factor   := base [ "^" "(" rational ")" | "^" integer ] ;
//! base     := "(" expr ")" | variable | rational ;
//! rational := integer [ "/" positive-integer ] ;
//! ```
//!
//! A leading unary minus on a term is accepted as shorthand for `-1*term`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ast::AlgExpr;
use super::mpoly::MPoly;
use super::ExprError;
use crate::rational::Rational;

pub fn parse_expr(text: &str, vars: &[String]) -> Result<AlgExpr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ExprError {
        ExprError::Syntax { offset: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<AlgExpr, ExprError> {
        let mut terms = Vec::new();
        let first_neg = self.eat(b'-');
        let t = self.term()?;
        terms.push(if first_neg { AlgExpr::neg(t) } else { t });
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                let t = self.term()?;
                terms.push(AlgExpr::neg(t));
            } else {
                break;
            }
        }
        Ok(AlgExpr::add(terms))
    }

    fn term(&mut self) -> Result<AlgExpr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = AlgExpr::mul(vec![acc, f]);
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let start = self.pos;
                let f = self.factor()?;
                if matches!(&f, AlgExpr::Const(c) if c.is_zero()) {
                    self.pos = start;
                    return Err(self.syntax("division by zero"));
                }
                acc = AlgExpr::div(acc, f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<AlgExpr, ExprError> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp_start = self.pos;
        let exponent = if self.eat(b'(') {
            let q = self.rational().map_err(|_| ExprError::MalformedExponent {
                offset: exp_start,
                message: "expected a rational exponent".into(),
            })?;
            if !self.eat(b')') {
                return Err(ExprError::MalformedExponent { offset: self.pos, message: "expected ')'".into() });
            }
            q
        } else {
            let k = self.integer().map_err(|_| ExprError::MalformedExponent {
                offset: exp_start,
                message: "expected an integer exponent".into(),
            })?;
            Rational::from_integer(k)
        };
        if exponent.numer().bits() > 62 {
            return Err(ExprError::MalformedExponent { offset: exp_start, message: "exponent too large".into() });
        }
        if exponent < Rational::zero() && matches!(&base, AlgExpr::Const(c) if c.is_zero()) {
            return Err(ExprError::MalformedExponent { offset: exp_start, message: "negative power of zero".into() });
        }
        Ok(AlgExpr::pow(base, exponent))
    }

    fn base(&mut self) -> Result<AlgExpr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(AlgExpr::Poly(MPoly::var(self.vars, i))),
                    None => Err(ExprError::UnknownVariable { name: name.to_string(), offset: start }),
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' => Ok(AlgExpr::Const(self.rational()?)),
            Some(_) => Err(self.syntax("expected '(', a variable or a number")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.syntax("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("validated digits"))
    }

    fn rational(&mut self) -> Result<Rational, ExprError> {
        let n = self.integer()?;
        // A '/' directly followed by digits continues the rational literal.
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.syntax("zero denominator"));
                }
                return Ok(Rational::new(n, d));
            }
            self.pos = save;
        }
        Ok(Rational::new(n, BigInt::one()))
    }
}
