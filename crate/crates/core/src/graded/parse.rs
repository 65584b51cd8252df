//! Element expressions: `coeff * name^e * ...` terms joined by `+` and `-`.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::element::{Monomial, RingElement};
use super::ring::PresentedRing;
use crate::coeffs::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut it: Peekable<CharIndices> = s.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '+' | '-' | '*' | '/' | '^' => {
                it.next();
                out.push(match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    _ => Token::Caret,
                });
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                out.push(Token::Int(s[i..end].parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                out.push(Token::Ident(s[i..end].to_string()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

impl PresentedRing {
    /// Parse an element expression such as `5*z15 - 5*y15 + 2/3*x2^2*x3`.
    pub fn parse(&self, expr: &str) -> Result<RingElement> {
        let tokens = tokenize(expr)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let err = |msg: &str| Error::Parse(format!("{msg} in {expr:?}"));
        let mut pos = 0;
        let mut out = RingElement::zero();
        let mut first = true;
        while pos < tokens.len() {
            let mut negative = false;
            let mut signed = false;
            while let Some(t @ (Token::Plus | Token::Minus)) = tokens.get(pos) {
                negative ^= *t == Token::Minus;
                signed = true;
                pos += 1;
            }
            if !first && !signed {
                return Err(err("expected + or -"));
            }
            first = false;
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            let mut exps = vec![0u32; self.ngens()];
            loop {
                match tokens.get(pos) {
                    Some(Token::Int(n)) => {
                        num *= n;
                        pos += 1;
                        if tokens.get(pos) == Some(&Token::Slash) {
                            match tokens.get(pos + 1) {
                                Some(Token::Int(d)) => den *= d,
                                _ => return Err(err("expected denominator")),
                            }
                            pos += 2;
                        }
                    }
                    Some(Token::Ident(name)) => {
                        let i = self.generator_index(name).ok_or_else(|| err(&format!("unknown generator {name}")))?;
                        pos += 1;
                        let mut e = 1u32;
                        if tokens.get(pos) == Some(&Token::Caret) {
                            match tokens.get(pos + 1) {
                                Some(Token::Int(k)) => {
                                    e = u32::try_from(k).map_err(|_| err("exponent too large"))?;
                                }
                                _ => return Err(err("expected exponent")),
                            }
                            pos += 2;
                        }
                        exps[i] += e;
                    }
                    _ => return Err(err("expected a factor")),
                }
                if tokens.get(pos) == Some(&Token::Star) {
                    pos += 1;
                } else {
                    break;
                }
            }
            if negative {
                num = -num;
            }
            let c = Scalar::from_ratio(self.base(), num, den)?;
            out.add_term(Monomial(exps), c);
        }
        Ok(out)
    }

    /// Canonical text form: ascending degree, graded-lex within a degree.
    pub fn format(&self, e: &RingElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<_> = e.terms().collect();
        terms.sort_by(|(a, _), (b, _)| self.monomial_degree(a).cmp(&self.monomial_degree(b)).then(a.cmp(b)));
        let mut s = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let v = c.value();
            let negative = v.is_negative();
            let abs = v.abs();
            match (k, negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    let name = &self.generators()[i].name;
                    if *e == 1 { name.clone() } else { format!("{name}^{e}") }
                })
                .collect();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::BaseRing;
    use crate::graded::Generator;

    fn ring(base: BaseRing) -> PresentedRing {
        PresentedRing::polynomial(
            base,
            vec![Generator::new("x2", 8), Generator::new("x3", 12), Generator::new("y15", 60)],
            60,
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let r = ring(BaseRing::Rational);
        for s in ["x2^3 - 2/3*x3^2", "-x2", "7", "0", "3*y15 + x2^6*x3 - x3^5"] {
            let e = r.parse(s).unwrap();
            assert_eq!(r.parse(&r.format(&e)).unwrap(), e);
        }
        assert_eq!(r.format(&r.parse("x3^2 + x2^3").unwrap()), "x2^3 + x3^2");
        assert_eq!(r.format(&r.parse("x2*2*x2 - x2^2").unwrap()), "x2^2");
    }

    #[test]
    fn errors() {
        let r = ring(BaseRing::Local(5));
        assert!(r.parse("").is_err());
        assert!(r.parse("w").is_err());
        assert!(r.parse("x2 x3").is_err());
        assert!(r.parse("x2^").is_err());
        assert!(matches!(r.parse("1/5*x2"), Err(Error::NotInRing(..))));
        assert!(r.parse("1/3*x2").is_ok());
        assert!(r.parse("x2 + ; x3").is_err());
    }
}
