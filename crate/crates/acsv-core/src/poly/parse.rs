//! Parser for the polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' UINT)?
//! atom   := RATIONAL | IDENT | '(' expr ')' | ('+' | '-') factor
//! RATIONAL := UINT ('/' UINT)?
//! ```
//!
//! There is no implicit multiplication (`2x` is an error) and `/` appears
//! only inside rational literals, never as an operator.  Identifiers must
//! name ring variables; anything else reports its position.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rat::Rat;

use super::{Polynomial, Ring};

/// Parse failure with 1-based line/column of the offending token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Next token together with its starting position.
    fn next_tok(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n')) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let b = match self.peek() {
            None => return Ok((Tok::End, line, col)),
            Some(b) => b,
        };
        let tok = match b {
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'-' => {
                self.bump();
                Tok::Minus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'^' => {
                self.bump();
                Tok::Caret
            }
            b'/' => {
                self.bump();
                Tok::Slash
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.bump();
                }
                let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(digits.parse::<BigInt>().unwrap())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while matches!(
                    self.peek(),
                    Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'0'..=b'9') | Some(b'_')
                ) {
                    self.bump();
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Ident(name.to_string())
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: alloc::format!("unexpected character '{}'", other as char),
                })
            }
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    idx: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.idx]
    }

    fn advance(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err<T>(&self, line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn parse_expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    let (_, l, c) = self.advance();
                    let rhs = self.parse_term().map_err(at_op(l, c, "+"))?;
                    acc = acc.try_add(&rhs).expect("same ring");
                }
                Tok::Minus => {
                    let (_, l, c) = self.advance();
                    let rhs = self.parse_term().map_err(at_op(l, c, "-"))?;
                    acc = acc.try_sub(&rhs).expect("same ring");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek().0, Tok::Star) {
            let (_, l, c) = self.advance();
            let rhs = self.parse_factor().map_err(at_op(l, c, "*"))?;
            acc = acc.try_mul(&rhs).expect("same ring");
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.parse_atom()?;
        if !matches!(self.peek().0, Tok::Caret) {
            return Ok(base);
        }
        let (_, cl, cc) = self.advance();
        match self.advance() {
            (Tok::Int(n), l, c) => {
                let e = u16::try_from(&n).map_err(|_| ParseError {
                    line: l,
                    col: c,
                    msg: alloc::format!("exponent {n} is too large"),
                })?;
                base.pow(e as u32).map_err(|_| ParseError {
                    line: l,
                    col: c,
                    msg: alloc::format!("exponent {n} overflows the supported degree range"),
                })
            }
            (_, _, _) => self.err(cl, cc, "'^' must be followed by a nonnegative integer"),
        }
    }

    fn parse_atom(&mut self) -> Result<Polynomial, ParseError> {
        let (tok, line, col) = self.advance();
        match tok {
            Tok::Int(n) => {
                // maybe a rational literal `a/b`
                if matches!(self.peek().0, Tok::Slash) {
                    let (_, sl, sc) = self.advance();
                    match self.advance() {
                        (Tok::Int(d), dl, dc) => {
                            if d.is_zero() {
                                return self.err(dl, dc, "zero denominator in rational literal");
                            }
                            Ok(Polynomial::constant(self.ring, Rat::new(n, d)))
                        }
                        _ => self.err(sl, sc, "'/' is only valid inside a rational literal a/b"),
                    }
                } else {
                    Ok(Polynomial::constant(self.ring, Rat::from_integer(n)))
                }
            }
            Tok::Ident(name) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::variable(self.ring, i).expect("index in range")),
                None => self.err(line, col, alloc::format!("unknown variable '{name}'")),
            },
            Tok::LParen => {
                let inner = self.parse_expr()?;
                match self.advance() {
                    (Tok::RParen, _, _) => Ok(inner),
                    (_, l, c) => self.err(l, c, "expected ')'"),
                }
            }
            Tok::Minus => {
                let f = self.parse_factor().map_err(at_op(line, col, "-"))?;
                Ok(Polynomial::zero(self.ring).try_sub(&f).expect("same ring"))
            }
            Tok::Plus => self.parse_factor().map_err(at_op(line, col, "+")),
            Tok::End => self.err(line, col, "unexpected end of input"),
            Tok::Slash => self.err(line, col, "'/' is only valid inside a rational literal a/b"),
            other => self.err(line, col, alloc::format!("unexpected token {other:?}")),
        }
    }
}

/// When an operand is missing right after an operator, report the error at
/// the operator's position (so `x*` fails at the `*`).
fn at_op(line: usize, col: usize, op: &'static str) -> impl Fn(ParseError) -> ParseError {
    move |e: ParseError| {
        if e.msg == "unexpected end of input" {
            ParseError { line, col, msg: alloc::format!("missing operand after '{op}'") }
        } else {
            e
        }
    }
}

/// Parse a polynomial from text; identifiers must be variables of `ring`.
pub fn parse_polynomial(src: &str, ring: &Ring) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer::new(src);
    let mut toks = Vec::new();
    loop {
        let t = lx.next_tok()?;
        let end = matches!(t.0, Tok::End);
        toks.push(t);
        if end {
            break;
        }
    }
    let mut parser = Parser { toks, idx: 0, ring };
    let poly = parser.parse_expr()?;
    match parser.peek() {
        (Tok::End, _, _) => Ok(poly),
        (tok, l, c) => Err(ParseError {
            line: *l,
            col: *c,
            msg: alloc::format!("unexpected token {tok:?} after expression"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn accepts_the_core_grammar() {
        let r = ring();
        for ok in [
            "2 - x*y^2 - 2*x*y - x + y",
            "1/2*x + 3/4",
            "-(x + y)^2",
            "- x",
            "(x)",
            "3/2",
            "x^0",
            "1 / 2",
        ] {
            assert!(parse_polynomial(ok, &r).is_ok(), "should parse: {ok}");
        }
        assert_eq!(
            parse_polynomial("(x + y)^2", &r).unwrap(),
            parse_polynomial("x^2 + 2*x*y + y^2", &r).unwrap()
        );
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let r = ring();
        let e = parse_polynomial("2x", &r).unwrap_err();
        assert_eq!((e.line, e.col), (1, 2));
    }

    #[test]
    fn dangling_operator_points_at_the_operator() {
        let r = ring();
        let e = parse_polynomial("x*", &r).unwrap_err();
        assert_eq!((e.line, e.col), (1, 2));
        assert!(e.msg.contains("missing operand"));
    }

    #[test]
    fn unknown_variable_is_named() {
        let r = ring();
        let e = parse_polynomial("x + q*y", &r).unwrap_err();
        assert!(e.msg.contains("'q'"));
        assert_eq!((e.line, e.col), (1, 5));
    }

    #[test]
    fn slash_is_not_division() {
        let r = ring();
        assert!(parse_polynomial("x/2", &r).is_err());
        assert!(parse_polynomial("(1+1)/2", &r).is_err());
        assert!(parse_polynomial("1/0", &r).is_err());
    }

    #[test]
    fn exponent_bounds_checked() {
        let r = ring();
        assert!(parse_polynomial("x^65535", &r).is_ok());
        assert!(parse_polynomial("x^65536", &r).is_err());
        assert!(parse_polynomial("x^y", &r).is_err());
    }
}
