//! Expression grammar shared by scalars and polynomials.
//!
//! `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/')? unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' int)?`,
//! `atom := number | name | '(' expr ')'`. Juxtaposition means multiplication.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug)]
pub enum Expr {
    Num(BigInt),
    Var(String, usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(s: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let mut t = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                t.push(chars[i]);
                i += 1;
                col += 1;
            }
            toks.push((Tok::Num(t), l0, c0));
        } else if c.is_alphabetic() {
            let mut t = String::new();
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                t.push(chars[i]);
                i += 1;
                col += 1;
            }
            toks.push((Tok::Name(t), l0, c0));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), l0, c0));
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn at(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.at();
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    let (l, c) = self.at();
                    e = Expr::Div(Box::new(e), Box::new(self.unary()?), l, c);
                }
                Tok::Num(_) | Tok::Name(_) | Tok::Sym('(') => {
                    e = Expr::Mul(Box::new(e), Box::new(self.power()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if *self.peek() == Tok::Sym('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            if let Tok::Num(n) = self.peek().clone() {
                let k: u32 = match n.parse() {
                    Ok(k) => k,
                    Err(_) => return self.err("exponent too large"),
                };
                self.bump();
                return Ok(Expr::Pow(Box::new(base), k));
            }
            return self.err("expected a non-negative integer exponent");
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let (l, c) = self.at();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n.parse().unwrap()))
            }
            Tok::Name(s) => {
                self.bump();
                Ok(Expr::Var(s, l, c))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::Sym(')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut lx = lex(s)?;
    let e = lx.expr()?;
    if *lx.peek() != Tok::End {
        return lx.err("trailing input");
    }
    Ok(e)
}

/// Values an expression can be evaluated into.
pub trait Evaluable: Sized + Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn pow(&self, k: u32) -> Self;
    /// Division is only supported by constants.
    fn div(&self, o: &Self) -> Option<Self>;
}

pub fn eval<T: Evaluable>(e: &Expr, ctx: &dyn Fn(&str, usize, usize) -> Result<T>, from_int: &dyn Fn(&BigInt) -> T) -> Result<T> {
    Ok(match e {
        Expr::Num(n) => from_int(n),
        Expr::Var(s, l, c) => ctx(s, *l, *c)?,
        Expr::Add(a, b) => eval(a, ctx, from_int)?.add(&eval(b, ctx, from_int)?),
        Expr::Sub(a, b) => eval(a, ctx, from_int)?.sub(&eval(b, ctx, from_int)?),
        Expr::Mul(a, b) => eval(a, ctx, from_int)?.mul(&eval(b, ctx, from_int)?),
        Expr::Neg(a) => eval(a, ctx, from_int)?.neg(),
        Expr::Pow(a, k) => eval(a, ctx, from_int)?.pow(*k),
        Expr::Div(a, b, l, c) => {
            let x = eval(a, ctx, from_int)?;
            let y = eval(b, ctx, from_int)?;
            x.div(&y).ok_or(Error::Parse {
                line: *l,
                column: *c,
                message: "division only by nonzero constants".into(),
            })?
        }
    })
}

impl Evaluable for Scalar {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn pow(&self, k: u32) -> Self {
        Scalar::pow(self, k as i64).unwrap()
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.invert().ok().map(|i| self * &i)
    }
}

pub fn eval_scalar(e: &Expr, field: FieldSpec) -> Result<Scalar> {
    let ctx = |name: &str, l: usize, c: usize| -> Result<Scalar> {
        if name == "z" && field.is_cyclotomic() {
            Ok(Scalar::zeta(field))
        } else {
            Err(Error::Parse {
                line: l,
                column: c,
                message: format!("unknown symbol {name}"),
            })
        }
    };
    let fi = |n: &BigInt| Scalar::from_rational(field, BigRational::from_integer(n.clone()));
    eval(e, &ctx, &fi)
}
