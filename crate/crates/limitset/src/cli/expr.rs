//! The expression grammar shared by polynomial and matrix-entry values:
//! integers, rationals through division, one variable symbol, the four
//! arithmetic operators, integer powers and parentheses.
//!
//!   expr   := term (('+' | '-') term)*
//!   term   := factor (('*' | '/') factor)*
//!   factor := '-' factor | atom ('^' uint)?
//!   atom   := integer | variable | '(' expr ')'

use crate::numfield::poly::QPoly;
use crate::numfield::{FieldElement, NumberField, NumFieldError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

impl ExprError {
    fn new(col: usize, msg: impl Into<String>) -> Self {
        ExprError { col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(BigInt),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(ExprError::new(self.pos + 1, "expected integer exponent after '^'"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ExprError::new(start + 1, "exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ExprError::new(self.pos + 1, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(Expr::Int(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == self.var {
                    Ok(Expr::Var)
                } else {
                    Err(ExprError::new(
                        start + 1,
                        format!("unknown symbol {:?}; the variable here is {:?}", name, self.var),
                    ))
                }
            }
            Some(c) => Err(ExprError::new(
                self.pos + 1,
                format!("unexpected character {:?}", c as char),
            )),
            None => Err(ExprError::new(self.pos + 1, "unexpected end of expression")),
        }
    }
}

fn parse(src: &str, var: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, var };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ExprError::new(p.pos + 1, "trailing input after expression"));
    }
    Ok(e)
}

/// Parse an expression in the field generator `t` to an exact element.
pub fn parse_field_element(
    src: &str,
    field: &Arc<NumberField>,
) -> Result<FieldElement, ExprError> {
    let expr = parse(src, "t")?;
    eval_field(&expr, field)
}

fn eval_field(e: &Expr, field: &Arc<NumberField>) -> Result<FieldElement, ExprError> {
    Ok(match e {
        Expr::Int(n) => FieldElement::from_rational(
            field.clone(),
            BigRational::from_integer(n.clone()),
        ),
        Expr::Var => FieldElement::generator(field.clone()),
        Expr::Neg(a) => eval_field(a, field)?.neg(),
        Expr::Add(a, b) => eval_field(a, field)?.add(&eval_field(b, field)?),
        Expr::Sub(a, b) => eval_field(a, field)?.sub(&eval_field(b, field)?),
        Expr::Mul(a, b) => eval_field(a, field)?.mul(&eval_field(b, field)?),
        Expr::Div(a, b) => eval_field(a, field)?
            .div(&eval_field(b, field)?)
            .map_err(|err| match err {
                NumFieldError::DivisionByZero => ExprError::new(1, "division by zero"),
                other => ExprError::new(1, other.to_string()),
            })?,
        Expr::Pow(a, k) => eval_field(a, field)?.pow(*k),
    })
}

/// Parse a polynomial in `x` with rational coefficients; division is only
/// allowed by constants.
pub fn parse_polynomial(src: &str) -> Result<QPoly, ExprError> {
    let expr = parse(src, "x")?;
    eval_poly(&expr)
}

fn eval_poly(e: &Expr) -> Result<QPoly, ExprError> {
    Ok(match e {
        Expr::Int(n) => QPoly::new(vec![BigRational::from_integer(n.clone())]),
        Expr::Var => QPoly::new(vec![BigRational::zero(), BigRational::one()]),
        Expr::Neg(a) => scale(&eval_poly(a)?, &-BigRational::one()),
        Expr::Add(a, b) => add(&eval_poly(a)?, &eval_poly(b)?),
        Expr::Sub(a, b) => add(&eval_poly(a)?, &scale(&eval_poly(b)?, &-BigRational::one())),
        Expr::Mul(a, b) => mul(&eval_poly(a)?, &eval_poly(b)?),
        Expr::Div(a, b) => {
            let d = eval_poly(b)?;
            if d.degree() > 0 {
                return Err(ExprError::new(1, "polynomial division is not part of the grammar"));
            }
            let c = d.coeff(0);
            if c.is_zero() {
                return Err(ExprError::new(1, "division by zero"));
            }
            scale(&eval_poly(a)?, &(BigRational::one() / c))
        }
        Expr::Pow(a, k) => {
            let base = eval_poly(a)?;
            let mut acc = QPoly::new(vec![BigRational::one()]);
            for _ in 0..*k {
                acc = mul(&acc, &base);
            }
            acc
        }
    })
}

fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let len = a.coeffs().len().max(b.coeffs().len());
    QPoly::new((0..len).map(|i| a.coeff(i) + b.coeff(i)).collect())
}

fn scale(a: &QPoly, s: &BigRational) -> QPoly {
    QPoly::new(a.coeffs().iter().map(|c| c * s).collect())
}

fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.degree() + b.degree() + 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    QPoly::new(out)
}

/// Print a polynomial in descending powers of `var` in the input grammar.
pub fn format_polynomial(p: &QPoly, var: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        use num_traits::Signed;
        let mag = c.abs();
        if first {
            if c.is_negative() {
                out.push('-');
            }
            first = false;
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let coeff_str = if mag.is_one() && i > 0 {
            String::new()
        } else {
            format!("{}", mag)
        };
        match i {
            0 => out.push_str(&coeff_str),
            _ => {
                if !coeff_str.is_empty() {
                    out.push_str(&coeff_str);
                    out.push('*');
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{}", i));
                }
            }
        }
    }
    if first {
        out.push('0');
    }
    out
}
