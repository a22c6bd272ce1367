//! Element expressions: `±`-separated terms, each a `*`-product of rational
//! literals and names with optional integer exponents, e.g. `2*x*y - 1/2*t^-1`.
//! A chain term ends in `@generator`, as in `2*t@m`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::Coeff;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Coeff,
    /// Names in order, with exponents.
    pub atoms: Vec<(String, i64, usize)>,
}

/// Error position is a byte offset into the input.
pub type ExprError = (usize, String);

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits")
    }

    fn number(&mut self) -> Result<Coeff, ExprError> {
        let start = self.pos;
        let n: BigInt = self.digits().parse().map_err(|_| (start, "expected a number".to_string()))?;
        if self.s.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return Err((at, "malformed rational: missing denominator".into()));
            }
            let d: BigInt = d.parse().expect("digits");
            if d.is_zero() {
                return Err((at, "zero denominator".into()));
            }
            return Ok(Coeff::new(n, d));
        }
        Ok(Coeff::from_integer(n))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || matches!(self.s[self.pos], b'_' | b'\'')) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }
}

/// A signed rational literal such as `-3/4`.
pub fn parse_rational(s: &str) -> Result<Coeff, ExprError> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    let (neg, body, shift) = match t.strip_prefix('-') {
        Some(b) => (true, b, 1),
        None => (false, t, 0),
    };
    if body.is_empty() || !body.as_bytes()[0].is_ascii_digit() {
        return Err((offset, format!("expected a rational number, found `{t}`")));
    }
    let mut lx = Lexer { s: body.as_bytes(), pos: 0 };
    let v = lx.number().map_err(|(p, m)| (p + offset + shift, m))?;
    if lx.pos != body.len() {
        return Err((lx.pos + offset + shift, format!("unexpected `{}`", &body[lx.pos..])));
    }
    Ok(if neg { -v } else { v })
}

pub fn parse_expr(s: &str) -> Result<Vec<Term>, ExprError> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Coeff::one();
        match lx.peek() {
            Some(b'+') => lx.pos += 1,
            Some(b'-') => {
                sign = -sign;
                lx.pos += 1;
            }
            None if first => return Err((lx.pos, "empty expression".into())),
            None => return Err((lx.pos, "expected a term".into())),
            _ if first => {}
            Some(c) => return Err((lx.pos, format!("expected `+` or `-`, found `{}`", c as char))),
        }
        first = false;
        let mut term = Term {
            coefficient: sign,
            atoms: Vec::new(),
        };
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => term.coefficient *= lx.number()?,
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let at = lx.pos;
                    let name = lx.ident();
                    let mut exponent = 1;
                    if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        let neg = lx.peek() == Some(b'-');
                        if neg {
                            lx.pos += 1;
                        }
                        let e_at = lx.pos;
                        let d = lx.digits();
                        exponent = d.parse::<i64>().map_err(|_| (e_at, "expected an integer exponent".to_string()))?;
                        if neg {
                            exponent = -exponent;
                        }
                    }
                    term.atoms.push((name, exponent, at));
                }
                Some(b'@') => {
                    let at = lx.pos;
                    lx.pos += 1;
                    let name = lx.ident();
                    if name.is_empty() {
                        return Err((lx.pos, "expected a generator name after `@`".into()));
                    }
                    term.atoms.push((format!("@{name}"), 1, at));
                    // `@gen` closes a chain term, so it may follow a word directly
                    if lx.peek() == Some(b'*') {
                        return Err((lx.pos, "`@generator` must end its term".into()));
                    }
                    break;
                }
                Some(c) => return Err((lx.pos, format!("unexpected `{}`", c as char))),
                None => return Err((lx.pos, "expected a factor".into())),
            }
            match lx.peek() {
                Some(b'*') => lx.pos += 1,
                Some(b'@') => {}
                _ => break,
            }
        }
        terms.push(term);
        if lx.peek().is_none() {
            return Ok(terms);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff;

    #[test]
    fn terms_and_exponents() {
        let t = parse_expr("2*x*y - 1/2*t^-1 + 3").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].coefficient, coeff(2));
        assert_eq!(t[0].atoms.iter().map(|a| a.0.as_str()).collect::<Vec<_>>(), ["x", "y"]);
        assert_eq!(t[1].coefficient, Coeff::new((-1).into(), 2.into()));
        assert_eq!(t[1].atoms[0].1, -1);
        assert!(t[2].atoms.is_empty());
        assert_eq!(parse_expr("-t + 1").unwrap()[0].coefficient, coeff(-1));
        assert_eq!(parse_expr("M'").unwrap()[0].atoms[0].0, "M'");
        let c = parse_expr("-2*t^-1@m + 1@M").unwrap();
        assert_eq!(c[0].atoms.iter().map(|a| a.0.as_str()).collect::<Vec<_>>(), ["t", "@m"]);
        assert_eq!(c[1].atoms[0].0, "@M");
    }

    #[test]
    fn malformed() {
        assert_eq!(parse_expr("3/").unwrap_err().0, 2);
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("x y").is_err());
        assert!(parse_expr("x@m*y").is_err());
        assert!(parse_rational("3/").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_rational(" -3/4").unwrap(), Coeff::new((-3).into(), 4.into()));
    }
}
