//! Polynomial expressions in `x`: rational literals, `+ - * /`, unary minus,
//! `^` with nonnegative integer exponents, and parentheses.
//!
//! Precedence from tightest: `^`, unary `-`, `* /`, `+ -`. Division is only
//! by nonzero constants, which is how `3/2` literals are written.

use itergcd::{config, Poly, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("at offset {offset}: {message}")]
    Invalid { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::X => "'x'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const OPERAND: &[&str] = &["number", "'x'", "'('", "'-'"];
const AFTER_OPERAND: &[&str] = &["'+'", "'-'", "'*'", "'/'", "'^'", "')'", "end of input"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Num(n), start));
                continue;
            }
            b'x' => Tok::X,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: OPERAND.iter().chain(AFTER_OPERAND).copied().collect(),
                    found: format!("{ch:?}"),
                });
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    max_degree: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        self.pos += 1;
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    self.check_degree(acc.deg() + rhs.deg())?;
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !num_traits::Zero::is_zero(&c) => {
                            acc = acc.scale(&num_traits::Inv::inv(c));
                        }
                        Some(_) => {
                            return Err(ParseError::Invalid {
                                offset: at,
                                message: "division by zero".into(),
                            })
                        }
                        None => {
                            return Err(ParseError::Invalid {
                                offset: at,
                                message: "division by a nonconstant polynomial".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let Tok::Num(e) = self.peek().clone() else {
            return Err(self.unexpected(&["nonnegative integer exponent"]));
        };
        self.bump();
        let e = e.to_usize().ok_or_else(|| ParseError::Invalid {
            offset: at,
            message: format!("exponent {e} is too large"),
        })?;
        self.check_degree(base.deg().saturating_mul(e)).map_err(|_| ParseError::Invalid {
            offset: at,
            message: format!("degree {} exceeds the cap {}", base.deg().saturating_mul(e), self.max_degree),
        })?;
        if *self.peek() == Tok::Caret {
            // x^2^3 is ambiguous; ask for parentheses.
            return Err(self.unexpected(&["'*'", "'/'", "'+'", "'-'", "')'", "end of input"]));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Poly::constant(Rational::from_integer(n)))
            }
            Tok::X => {
                self.bump();
                Ok(Poly::x())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["')'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(OPERAND)),
        }
    }

    fn check_degree(&self, deg: usize) -> Result<(), ParseError> {
        if deg > self.max_degree {
            return Err(ParseError::Invalid {
                offset: self.offset(),
                message: format!("degree {deg} exceeds the cap {}", self.max_degree),
            });
        }
        Ok(())
    }
}

/// Parse a polynomial expression in `x`.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        max_degree: config::get().max_degree,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(AFTER_OPERAND));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itergcd::poly::{int, rat};

    #[test]
    fn examples() {
        assert_eq!(
            parse_poly("x^2 - 3/2*x + 1").unwrap(),
            Poly::new(vec![int(1), rat(-3, 2), int(1)])
        );
        assert_eq!(parse_poly("(x+1)^3").unwrap(), Poly::from_ints(&[1, 3, 3, 1]));
        assert_eq!(parse_poly("-x^2").unwrap(), Poly::from_ints(&[0, 0, -1]));
        assert_eq!(parse_poly("-(x+1)").unwrap(), Poly::from_ints(&[-1, -1]));
        assert_eq!(parse_poly("x/2").unwrap(), Poly::new(vec![int(0), rat(1, 2)]));
        assert_eq!(parse_poly(" 0 ").unwrap(), Poly::zero());
    }

    #[test]
    fn negative_exponent() {
        match parse_poly("x^-1").unwrap_err() {
            ParseError::Syntax { offset, expected, .. } => {
                assert_eq!(offset, 2);
                assert_eq!(expected, vec!["nonnegative integer exponent"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors() {
        assert!(parse_poly("x^1/2").is_ok());
        assert!(matches!(parse_poly("x^(2)"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_poly("2x"), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_poly("(x+1"), Err(ParseError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_poly("x/(x+1)"), Err(ParseError::Invalid { offset: 2, .. })));
        assert!(matches!(parse_poly("1/0"), Err(ParseError::Invalid { .. })));
        assert!(matches!(parse_poly("y"), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly(""), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly("x^100000000"), Err(ParseError::Invalid { .. })));
        assert!(matches!(parse_poly("x^2^3"), Err(ParseError::Syntax { offset: 3, .. })));
    }
}
