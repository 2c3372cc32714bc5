//! Polynomial input grammar: integer literals, `x`, `y`, `+`, `-`, `*`, `/`
//! (by a nonzero constant), `^` with a nonnegative integer exponent, and
//! parentheses.

use num::{BigInt, BigRational, Zero};

use super::poly::BivariatePoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let start = i - 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                Token::Num(digits.parse().expect("digits parse"))
            }
            'x' | 'X' => Token::X,
            'y' | 'Y' => Token::Y,
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::Open,
            ')' => Token::Close,
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        };
        out.push(tok);
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BivariatePoly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BivariatePoly> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Star => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Token::Slash => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = constant_value(&d)
                        .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                    if c.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BivariatePoly> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek() == Some(&Token::Plus) {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<BivariatePoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected an integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BivariatePoly> {
        match self.next() {
            Some(Token::Num(n)) => Ok(BivariatePoly::constant(BigRational::from_integer(n))),
            Some(Token::X) => Ok(BivariatePoly::x()),
            Some(Token::Y) => Ok(BivariatePoly::y()),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(Error::Parse("unbalanced parenthesis".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

fn constant_value(p: &BivariatePoly) -> Option<BigRational> {
    match p.terms().len() {
        0 => Some(BigRational::zero()),
        1 => p.terms().get(&(0, 0)).cloned(),
        _ => None,
    }
}

pub fn parse_poly(s: &str) -> Result<BivariatePoly> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(p)
}
