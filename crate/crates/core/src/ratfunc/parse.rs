//! Expression grammar for `M±`:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := number | 'x' | 'y' | parameter | '(' expr ')'
//! ```
//!
//! Numbers are decimal literals converted to exact rationals. Parameters are
//! substituted at parse time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{Rational, RationalFunc2};
use crate::error::{Error, Result};

pub type Params = BTreeMap<String, Rational>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if b.is_ascii_digit() || b == b'.' {
            let mut int_part = String::new();
            let mut frac_part = String::new();
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                int_part.push(bytes[self.pos] as char);
                self.pos += 1;
            }
            if self.pos < bytes.len() && bytes[self.pos] == b'.' {
                self.pos += 1;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    frac_part.push(bytes[self.pos] as char);
                    self.pos += 1;
                }
            }
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(Error::Syntax {
                    pos: start,
                    message: "expected digits".into(),
                });
            }
            let digits = format!("{int_part}{frac_part}");
            let numer: BigInt = digits.parse().unwrap_or_default();
            let denom = num_traits::pow(BigInt::from(10), frac_part.len());
            return Ok((Tok::Num(Rational::new(numer, denom)), start));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^()".contains(&b) {
            self.pos += 1;
            return Ok((Tok::Op(b as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap();
        Err(Error::Syntax {
            pos: start,
            message: format!("unexpected character `{ch}`"),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
    params: &'a Params,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, pos) = self.lexer.next()?;
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.tok_pos,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalFunc2> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = self.tok {
            self.bump()?;
            let rhs = self.term()?;
            acc = if op == '+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunc2> {
        let mut acc = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.tok {
            let op_pos = self.tok_pos;
            self.bump()?;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs)
                    .map_err(|_| Error::ZeroDivisor { pos: op_pos })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunc2> {
        match self.tok {
            Tok::Op('-') => {
                self.bump()?;
                Ok(self.unary()?.neg())
            }
            Tok::Op('+') => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunc2> {
        let base = self.atom()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        let Tok::Num(ref e) = self.tok else {
            return self.syntax("exponent must be a nonnegative integer literal");
        };
        if !e.is_integer() || e.numer() > &BigInt::from(64) {
            return self.syntax("exponent must be a nonnegative integer no larger than 64");
        }
        let e: u32 = e.to_integer().try_into().unwrap();
        self.bump()?;
        if e == 0 && base.is_zero() {
            return Ok(RationalFunc2::constant(Rational::one()));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<RationalFunc2> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.bump()?;
                Ok(RationalFunc2::constant(v))
            }
            Tok::Ident(name) => {
                let pos = self.tok_pos;
                let value = match name.as_str() {
                    "x" => RationalFunc2::x(),
                    "y" => RationalFunc2::y(),
                    _ => match self.params.get(&name) {
                        Some(v) => RationalFunc2::constant(v.clone()),
                        None => return Err(Error::UnknownParameter { name, pos }),
                    },
                };
                self.bump()?;
                Ok(value)
            }
            Tok::Op('(') => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::Op(')') {
                    return self.syntax("expected `)`");
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::End => self.syntax("unexpected end of expression"),
            Tok::Op(c) => self.syntax(format!("unexpected `{c}`")),
        }
    }
}

/// Parses an expression in `x`, `y` and named parameters into a reduced
/// rational function.
pub fn parse_expr(text: &str, params: &Params) -> Result<RationalFunc2> {
    let mut parser = Parser {
        lexer: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        tok_pos: 0,
        params,
    };
    parser.bump()?;
    if parser.tok == Tok::End {
        return parser.syntax("empty expression");
    }
    let out = parser.expr()?;
    if parser.tok != Tok::End {
        return parser.syntax("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::rational;

    fn p(text: &str) -> Result<RationalFunc2> {
        let mut params = Params::new();
        params.insert("m0".into(), rational(4, 1));
        parse_expr(text, &params)
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(
            p("0.25*x").unwrap(),
            RationalFunc2::x().scale(&rational(1, 4))
        );
        assert_eq!(p("1.5").unwrap().as_constant(), Some(rational(3, 2)));
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x^2").unwrap(), RationalFunc2::x().pow(2).neg());
        assert_eq!(p("2*3+4").unwrap().as_constant(), Some(rational(10, 1)));
        assert_eq!(p("8/2/2").unwrap().as_constant(), Some(rational(2, 1)));
        assert_eq!(p("(1+1)^3").unwrap().as_constant(), Some(rational(8, 1)));
    }

    #[test]
    fn error_positions() {
        assert!(matches!(p("x + "), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(p("x $ y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(p("(x + y"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(p("x^y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(p("x^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(p(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(p("x y"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn unknown_parameter() {
        assert_eq!(
            p("x + delta"),
            Err(Error::UnknownParameter {
                name: "delta".into(),
                pos: 4
            })
        );
    }

    #[test]
    fn division_by_zero_polynomial() {
        assert_eq!(p("x/(y - y)"), Err(Error::ZeroDivisor { pos: 1 }));
        assert_eq!(p("1/(m0 - 4)"), Err(Error::ZeroDivisor { pos: 1 }));
    }
}
