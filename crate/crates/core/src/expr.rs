//! Reader for polynomial expressions in named variables.
//!
//! Accepts integers, identifiers, `+`, `-`, `*`, `^` with a non-negative
//! integer exponent, parentheses, and implicit multiplication by
//! juxtaposition (`2 l110 (s + t)`). Identifiers must name a variable of the
//! target ring.

use crate::scalar::{ParamPoly, ParamPolyRing, ParseElem, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unexpected {found} at byte {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("bad number `{0}`")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(text[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ExprError::Unexpected { found: format!("`{c}`"), pos: i });
        }
    }
    Ok(out)
}

struct Parser<'a, R: Ring> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    ring: &'a ParamPolyRing<R>,
    end: usize,
}

impl<R: ParseElem> Parser<'_, R> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn unexpected(&self) -> ExprError {
        match self.toks.get(self.at) {
            Some((t, pos)) => ExprError::Unexpected { found: format!("{t:?}"), pos: *pos },
            None => ExprError::Unexpected { found: "end of input".into(), pos: self.end },
        }
    }

    fn expr(&mut self) -> Result<ParamPoly<R::Elem>, ExprError> {
        let mut acc = self.ring.zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.at += 1;
                    1
                }
                Some(Tok::Sym('-')) => {
                    self.at += 1;
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            let term = self.term()?;
            acc = if sign < 0 { self.ring.sub(&acc, &term) } else { self.ring.add(&acc, &term) };
            first = false;
        }
    }

    fn term(&mut self) -> Result<ParamPoly<R::Elem>, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.at += 1;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
    }

    fn factor(&mut self) -> Result<ParamPoly<R::Elem>, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e: u32 = n.parse().map_err(|_| ExprError::BadNumber(n))?;
                    return Ok(self.ring.pow(&base, e));
                }
                _ => return Err(self.unexpected()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamPoly<R::Elem>, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let c = self.ring.base().parse_elem(&n).map_err(|_| ExprError::BadNumber(n))?;
                Ok(self.ring.constant(c))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let idx = self.ring.var_index(&name).ok_or(ExprError::UnknownVariable(name))?;
                Ok(self.ring.var(idx).expect("index comes from var_index"))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(self.unexpected());
                }
                self.at += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

pub fn parse_expr<R: ParseElem>(text: &str, ring: &ParamPolyRing<R>) -> Result<ParamPoly<R::Elem>, ExprError> {
    let mut p = Parser { toks: lex(text)?, at: 0, ring, end: text.len() };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rationals;

    fn ring() -> ParamPolyRing<Rationals> {
        ParamPolyRing::new(Rationals, ["x", "y", "l110", "s", "t"].iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn implicit_products_and_powers() {
        let r = ring();
        let a = parse_expr("2 x (y + 1)^2 - x*y", &r).unwrap();
        let b = parse_expr("2*x*y^2 + 3*x*y + 2*x", &r).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn leading_sign_and_nested() {
        let r = ring();
        let a = parse_expr("-l110 (-(s - t) + 2 t)", &r).unwrap();
        let b = parse_expr("l110 s - 3 l110 t", &r).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_expr("x - x", &r).unwrap(), r.zero());
    }

    #[test]
    fn errors() {
        let r = ring();
        assert_eq!(parse_expr("x + z", &r), Err(ExprError::UnknownVariable("z".into())));
        assert!(matches!(parse_expr("x +", &r), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_expr("(x", &r), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_expr("x $ y", &r), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_expr("x ^ y", &r), Err(ExprError::Unexpected { .. })));
    }
}
