//! Recursive-descent parser for function expressions.
//!
//! ```text
//! expr   := term {("+" | "-") term}
//! term   := ["-"] factor {"*" factor}
//! factor := rational | blade | coord | "X" | "(" expr ")" | "-" factor
//!         | "inv(" expr ")" | "sgn(" expr ")"
//!         | "abs_pow(" expr "," rational ")" | "part(" expr "," blade ")"
//! ```
//!
//! A leading minus negates the whole product that follows it, so `-a*b` is
//! `-(a*b)` and `-a + b` is `(-a) + b`. Blades are `e` followed by ascending
//! digits (`e13`), or underscore-separated indices (`e1_10`) when an index
//! exceeds nine. `part(f, 1)` selects the scalar part.

use crate::blade::Blade;
use crate::element::CliffordElement;
use crate::error::{Error, Result};
use crate::function::expr::Expr;
use crate::rational::Rational;
use crate::signature::Signature;

/// Parses `text` into an expression over `sig`.
pub fn parse_expr(text: &str, sig: Signature) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, sig };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a Clifford element written as `3/2 + 2*e13 - e2`.
pub fn parse_element(text: &str, sig: Signature) -> Result<CliffordElement> {
    let e = parse_expr(text, sig)?;
    e.as_const()
        .cloned()
        .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("'{text}' is not a constant element") })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: Signature,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let negate = self.eat(b'-');
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(if negate { acc.neg() } else { acc })
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::scalar(self.sig, self.rational()?)),
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Syntax { pos: start, msg: format!("integer '{text}' out of range") })
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.integer()?;
            if den == 0 {
                return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_int(num))
    }

    fn signed_rational(&mut self) -> Result<Rational> {
        if self.eat(b'-') {
            return Ok(-self.rational()?);
        }
        self.eat(b'+');
        self.rational()
    }

    fn identifier(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        (start, String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn word(&mut self) -> Result<Expr> {
        let (start, id) = self.identifier();
        let sig = self.sig;
        let err = |msg: String| Error::Syntax { pos: start, msg };
        match id.as_str() {
            "X" => Ok(Expr::vector_x(sig)),
            "inv" | "sgn" | "abs_pow" | "part" => {
                self.expect(b'(')?;
                let arg = self.expr()?;
                let out = match id.as_str() {
                    "inv" => arg.inv(),
                    "sgn" => arg.sgn()?,
                    "abs_pow" => {
                        self.expect(b',')?;
                        arg.abs_pow(self.signed_rational()?)?
                    }
                    _ => {
                        self.expect(b',')?;
                        let blade = if self.peek() == Some(b'1') {
                            self.pos += 1;
                            Blade::SCALAR
                        } else {
                            let (at, text) = self.identifier();
                            parse_blade(&text, &sig).map_err(|msg| Error::Syntax { pos: at, msg })?
                        };
                        arg.part(blade)
                    }
                };
                self.expect(b')')?;
                Ok(out)
            }
            _ if id.starts_with('x') && id.len() > 1 && id[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let i: usize = id[1..].parse().map_err(|_| err(format!("bad coordinate '{id}'")))?;
                if i == 0 || i > sig.dim() {
                    return Err(err(format!("coordinate '{id}' outside 1..={}", sig.dim())));
                }
                Ok(Expr::coord(sig, i - 1))
            }
            _ if id.starts_with('e') => {
                let blade = parse_blade(&id, &sig).map_err(err)?;
                Ok(Expr::constant(CliffordElement::blade(sig, blade, Rational::one())))
            }
            "" => Err(err("expected an operand".into())),
            _ => Err(err(format!("unknown identifier '{id}'"))),
        }
    }
}

fn parse_blade(id: &str, sig: &Signature) -> std::result::Result<Blade, String> {
    let body = id.strip_prefix('e').ok_or_else(|| format!("'{id}' is not a blade"))?;
    if body.is_empty() {
        return Err(format!("blade '{id}' has no indices"));
    }
    let indices: Vec<usize> = if body.contains('_') {
        body.split('_').map(|s| s.parse().map_err(|_| format!("bad blade '{id}'"))).collect::<Result<_, _>>()?
    } else {
        body.bytes()
            .map(|b| if b.is_ascii_digit() { Ok((b - b'0') as usize) } else { Err(format!("bad blade '{id}'")) })
            .collect::<Result<_, _>>()?
    };
    Blade::from_indices(&indices, sig).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::expr::Kind;
    use crate::rational::q;

    fn s21() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    #[test]
    fn appendix_function_structure() {
        let s = s21();
        let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
        let e1 = Expr::constant(CliffordElement::generator(s, 0));
        let e2 = Expr::constant(CliffordElement::generator(s, 1));
        let expected = Expr::coord(s, 0).mul(&e1).add(&Expr::coord(s, 1).mul(&e2).neg());
        assert_eq!(f, expected);
    }

    #[test]
    fn functions_and_grades() {
        let s = s21();
        assert!(matches!(parse_expr("inv(X)", s).unwrap().kind(), Kind::Inv(x) if *x == Expr::vector_x(s)));
        assert!(matches!(parse_expr("abs_pow(e1, 1/2)", s), Err(Error::Grade(_))));
        assert!(matches!(parse_expr("sgn(X)", s), Err(Error::Grade(_))));
        let p = parse_expr("abs_pow(X*X, -1/2)", s).unwrap();
        assert!(matches!(p.kind(), Kind::AbsPow(_, e) if *e == q(-1, 2)));
    }

    #[test]
    fn elements_fold() {
        let s = Signature::new(3, 0).unwrap();
        let e = parse_element("3/2 + 2*e13 - e2", s).unwrap();
        assert_eq!(e.to_string(), "3/2 + 2*e13 - e2");
        assert_eq!(parse_element("e1*e2", s).unwrap().to_string(), "e12");
    }

    #[test]
    fn unary_minus_binds_the_product() {
        let s = s21();
        assert_eq!(parse_expr("-x1*x2 + x3", s).unwrap(), parse_expr("(-1)*(x1*x2) + x3", s).unwrap());
        assert_eq!(parse_expr("x1 * -x2", s).unwrap(), parse_expr("x1*(-1*x2)", s).unwrap());
    }

    #[test]
    fn syntax_errors_report_position() {
        let s = s21();
        assert_eq!(parse_expr("x1 + ", s), Err(Error::Syntax { pos: 5, msg: "unexpected end of input".into() }));
        assert!(matches!(parse_expr("x4", s), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_expr("e21", s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("x1 x2", s), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_expr("1/0", s), Err(Error::Syntax { .. })));
    }

    #[test]
    fn wide_blades() {
        let s = Signature::new(6, 5).unwrap();
        let e = parse_element("e1_10 + e1_11", s).unwrap();
        assert_eq!(e.to_string(), "e1_10 + e1_11");
    }

    #[test]
    fn render_round_trip() {
        let s = s21();
        for t in ["x1*e1 - x2*e2", "inv(X + e3)*abs_pow(X*X, -1/2)*sgn(x1)", "part(X*e12, e2) - 3/4*e123"] {
            let e = parse_expr(t, s).unwrap();
            assert_eq!(parse_expr(&e.to_string(), s).unwrap(), e, "{t}");
        }
    }
}
