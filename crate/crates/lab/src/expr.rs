//! Rational-function expressions in one variable.
//!
//! Grammar: integer literals, a single variable, `+ - * / ^` and
//! parentheses. `^` binds tightest and takes a literal exponent in `0..=64`;
//! operators of equal precedence associate to the left.

use height_core::arith::{Field, RatFunc, RatFuncField};
use num_bigint::BigInt;

pub const MAX_EXPONENT: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent {exp} at {pos} exceeds {MAX_EXPONENT}")]
    ExponentOverflow { pos: usize, exp: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, C: Field> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    rf: RatFuncField<C>,
    var: &'a str,
}

impl<C: Field> Parser<'_, C> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        self.at += 1;
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<RatFunc<C>, ExprError> {
        let mut acc = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if c == '+' { self.rf.add(&acc, &rhs) } else { self.rf.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc<C>, ExprError> {
        let mut acc = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let pos = self.pos();
            let rhs = self.unary()?;
            acc = if c == '*' {
                self.rf.mul(&acc, &rhs)
            } else {
                self.rf.div(&acc, &rhs).ok_or(ExprError::DivisionByZero { pos })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc<C>, ExprError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                let v = self.unary()?;
                Ok(self.rf.neg(&v))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc<C>, ExprError> {
        let mut acc = self.atom()?;
        while let Tok::Op('^') = self.peek() {
            self.bump();
            let pos = self.pos();
            let Tok::Int(e) = self.bump() else {
                self.at -= 1;
                return self.syntax("exponent must be a nonnegative integer literal");
            };
            let e = u64::try_from(&e)
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or_else(|| ExprError::ExponentOverflow { pos, exp: e.to_string() })?;
            acc = self.rf.pow(&acc, e as u32);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RatFunc<C>, ExprError> {
        match self.bump() {
            Tok::Int(n) => Ok(self.rf.constant(&self.rf.base().from_bigint(&n))),
            Tok::Ident(name) if name == self.var => Ok(self.rf.var()),
            Tok::Ident(name) => {
                self.at -= 1;
                self.syntax(format!("unknown variable `{name}`, expected `{}`", self.var))
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    Tok::Op(')') => Ok(inner),
                    _ => {
                        self.at -= 1;
                        self.syntax("expected `)`")
                    }
                }
            }
            Tok::End => {
                self.at -= 1;
                self.syntax("unexpected end of input")
            }
            Tok::Op(c) => {
                self.at -= 1;
                self.syntax(format!("unexpected `{c}`"))
            }
        }
    }
}

/// Parses `text` as a rational function in `var` with coefficients in
/// `consts`. Positions in errors are character offsets.
pub fn parse_expression<C: Field>(text: &str, var: &str, consts: &C) -> Result<RatFunc<C>, ExprError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        rf: RatFuncField::new(consts.clone()),
        var,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(v)
}
