//! Exact rational expressions in `q`, used for every tabulated count.
//!
//! Grammar: sums and differences of products and quotients of factors, where a
//! factor is an integer, `q`, a parenthesised expression, or a factor raised to
//! a non-negative integer power with `^`. Juxtaposition of factors is
//! multiplication, so `(q-1)(q-7)/24+1` and `3q` parse as written.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error in `{src}` at byte {pos}: {msg}")]
    Parse { src: String, pos: usize, msg: &'static str },
    #[error("`{src}` is not an integer at q = {q}: {value}")]
    NotIntegral { src: String, q: u64, value: String },
    #[error("division by zero in `{0}`")]
    DivideByZero(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(i128),
    Q,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

/// A parsed expression; keeps its source text for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    src: String,
    root: Node,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser { src, bytes: src.as_bytes(), pos: 0 };
        let root = p.sum()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Expr { src: src.to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    /// Exact value at `q`, which must be an integer.
    pub fn eval(&self, q: u64) -> Result<i128, ExprError> {
        let v =
            eval(&self.root, Q::from_integer(q as i128)).ok_or_else(|| ExprError::DivideByZero(self.src.clone()))?;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(ExprError::NotIntegral { src: self.src.clone(), q, value: v.to_string() })
        }
    }
}

fn eval(n: &Node, q: Q) -> Option<Q> {
    Some(match n {
        Node::Num(v) => Q::from_integer(*v),
        Node::Q => q,
        Node::Add(a, b) => eval(a, q)? + eval(b, q)?,
        Node::Sub(a, b) => eval(a, q)? - eval(b, q)?,
        Node::Mul(a, b) => eval(a, q)? * eval(b, q)?,
        Node::Div(a, b) => {
            let d = eval(b, q)?;
            if d == Q::from_integer(0) {
                return None;
            }
            eval(a, q)? / d
        }
        Node::Neg(a) => -eval(a, q)?,
        Node::Pow(a, e) => {
            let base = eval(a, q)?;
            (0..*e).fold(Q::from_integer(1), |acc, _| acc * base)
        }
    })
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> ExprError {
        ExprError::Parse { src: self.src.to_string(), pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'(') | Some(b'q') => {
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos].parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(Node::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(Node::Q)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
                // `3q` and `2(q-1)`
                match self.bytes.get(self.pos) {
                    Some(b'q') | Some(b'(') => {
                        let rhs = self.power()?;
                        Ok(Node::Mul(Box::new(Node::Num(v)), Box::new(rhs)))
                    }
                    _ => Ok(Node::Num(v)),
                }
            }
            _ => Err(self.err("expected a number, `q` or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, q: u64) -> i128 {
        Expr::parse(s).unwrap().eval(q).unwrap()
    }

    #[test]
    fn evaluates_table_style_expressions() {
        assert_eq!(ev("q(q+1)/2", 5), 15);
        assert_eq!(ev("(q-1)(q-7)/24+1", 7), 1);
        assert_eq!(ev("(q-1)^2/3+q", 7), 19);
        assert_eq!(ev("3(q-1)^2/4", 5), 12);
        assert_eq!(ev("q^3(q^3-1)(q^2-1)", 3), 5616);
        assert_eq!(ev("1/6 q^3(q^2+q+1)(q+1)", 3), 234);
        assert_eq!(ev("-q+2*q", 11), 11);
        assert_eq!(ev("0", 3), 0);
    }

    #[test]
    fn rejects_non_integral_values() {
        let e = Expr::parse("(q-1)/4").unwrap();
        assert!(matches!(e.eval(7), Err(ExprError::NotIntegral { .. })));
        assert_eq!(e.eval(5), Ok(1));
    }

    #[test]
    fn parse_errors() {
        assert!(Expr::parse("(q-1").is_err());
        assert!(Expr::parse("q+").is_err());
        assert!(Expr::parse("x").is_err());
        assert!(matches!(Expr::parse("1/(q-3)").unwrap().eval(3), Err(ExprError::DivideByZero(_))));
    }
}
