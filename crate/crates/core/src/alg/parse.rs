//! Infix parser for polynomial expressions such as
//! `16*z^3*x^11 + (16z^4 + 16z^2 + 1) x^10 - z(32z^2 - 5)x^9`.
//!
//! Juxtaposition means multiplication, `^` and `**` are powers, and `/` is
//! allowed only with a constant divisor.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{MPoly, Var};
use super::AlgError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, AlgError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().expect("digits")));
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                if chars.get(i + 1) == Some(&'*') {
                    out.push(Tok::Caret);
                    i += 2;
                } else {
                    out.push(Tok::Star);
                    i += 1;
                }
            }
            '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if let Some(v) = Var::from_name(&word) {
                    out.push(Tok::Var(v));
                } else {
                    // "zx" is z*x
                    for ch in word.chars() {
                        let v = Var::from_name(&ch.to_string()).ok_or_else(|| {
                            AlgError::Parse(format!("unknown identifier {word:?}"))
                        })?;
                        out.push(Tok::Var(v));
                    }
                }
            }
            _ => return Err(AlgError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MPoly, AlgError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, AlgError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(AlgError::Parse("division by a non-constant".into()));
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MPoly, AlgError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(k)) => {
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| AlgError::Parse("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                Some(Tok::LParen) => {
                    let k = match self.next() {
                        Some(Tok::Num(k)) => k,
                        _ => return Err(AlgError::Parse("expected exponent".into())),
                    };
                    if self.next() != Some(Tok::RParen) {
                        return Err(AlgError::Parse("expected ')'".into()));
                    }
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| AlgError::Parse("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                _ => Err(AlgError::Parse("expected exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, AlgError> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(MPoly::constant(BigRational::from_integer(n))),
            Some(Tok::Var(v)) => Ok(MPoly::var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(AlgError::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Minus) => Ok(-self.power()?),
            t => Err(AlgError::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_poly(text: &str) -> Result<MPoly, AlgError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(AlgError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgError::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_powers() {
        let a = parse_poly("16z^3x^11 + (z^2+1)x").unwrap();
        let b = parse_poly("16*z**3*x**11 + z^2*x + x").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("-(x-1)^2").unwrap(), parse_poly("-x^2+2x-1").unwrap());
        assert_eq!(parse_poly("x/2 + 1/3").unwrap(), parse_poly("3x + 2").unwrap().scale(&crate::rational::ratio(1, 6)));
        assert!(parse_poly("s^{2}").is_err());
        assert_eq!(parse_poly("s^(2)").unwrap(), parse_poly("s*s").unwrap());
    }

    #[test]
    fn greek_names() {
        assert_eq!(
            parse_poly("λ^2 + eta").unwrap(),
            parse_poly("lambda*lambda + η").unwrap()
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("q").is_err());
        assert!(parse_poly("x/(x+1)").is_err());
        assert!(parse_poly("").is_err());
    }
}
