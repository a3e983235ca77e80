//! Recursive-descent parser for exact field-coefficient expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' ['-'] integer)*
//! primary := '(' expr ')' | 'i' | 'c2' | integer ['/' integer]
//! ```
//!
//! `i` is the imaginary unit and `c2` denotes 2^(1/3); `c2^-1` parses to
//! `c2^2 / 2`. Errors carry the byte offset and the expected token set.

use num::BigInt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    ImaginaryUnit,
    CubeRootTwo,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(n) => format!("number {n}"),
            Token::ImaginaryUnit => "'i'".into(),
            Token::CubeRootTwo => "'c2'".into(),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn tokenize(mut self) -> Result<Vec<(usize, Token)>> {
        let mut tokens = Vec::new();
        while self.pos < self.input.len() {
            let start = self.pos;
            let byte = self.input[self.pos];
            match byte {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let mut end = self.pos;
                    while end < self.input.len() && self.input[end].is_ascii_digit() {
                        end += 1;
                    }
                    let digits = std::str::from_utf8(&self.input[self.pos..end]).unwrap();
                    tokens.push((start, Token::Number(digits.parse().unwrap())));
                    self.pos = end;
                }
                b'i' => {
                    tokens.push((start, Token::ImaginaryUnit));
                    self.pos += 1;
                }
                b'c' => {
                    if self.input.get(self.pos + 1) == Some(&b'2') {
                        tokens.push((start, Token::CubeRootTwo));
                        self.pos += 2;
                    } else {
                        return Err(unexpected(start, "'c2'", "'c'"));
                    }
                }
                b'+' => {
                    tokens.push((start, Token::Plus));
                    self.pos += 1;
                }
                b'-' => {
                    tokens.push((start, Token::Minus));
                    self.pos += 1;
                }
                b'*' => {
                    tokens.push((start, Token::Star));
                    self.pos += 1;
                }
                b'/' => {
                    tokens.push((start, Token::Slash));
                    self.pos += 1;
                }
                b'^' => {
                    tokens.push((start, Token::Caret));
                    self.pos += 1;
                }
                b'(' => {
                    tokens.push((start, Token::LParen));
                    self.pos += 1;
                }
                b')' => {
                    tokens.push((start, Token::RParen));
                    self.pos += 1;
                }
                other => {
                    return Err(unexpected(
                        start,
                        "number, 'i', 'c2', operator or parenthesis",
                        &format!("{:?}", char::from(other)),
                    ));
                }
            }
        }
        Ok(tokens)
    }
}

fn unexpected(offset: usize, expected: &str, found: &str) -> Error {
    Error::Parse {
        offset,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end_offset)
    }

    fn found(&self) -> String {
        self.peek()
            .map(|t| t.describe())
            .unwrap_or_else(|| "end of input".into())
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token) -> Result<()> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(unexpected(self.offset(), &token.describe(), &self.found()))
        }
    }

    fn parse_expr(&mut self) -> Result<FieldElem> {
        let negate = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.parse_term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.parse_term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.parse_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<FieldElem> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = &acc * &self.parse_factor()?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<FieldElem> {
        let mut base = self.parse_primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let negative = if self.peek() == Some(&Token::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let offset = self.offset();
            let found = self.found();
            let exponent = match self.advance() {
                Some(Token::Number(n)) => i64::try_from(n)
                    .map_err(|_| unexpected(offset, "exponent fitting in 64 bits", &found))?,
                _ => return Err(unexpected(offset, "integer exponent", &found)),
            };
            let exponent = if negative { -exponent } else { exponent };
            base = base.pow(exponent).map_err(|_| {
                unexpected(offset, "nonzero base for negative exponent", "zero")
            })?;
        }
        Ok(base)
    }

    fn parse_primary(&mut self) -> Result<FieldElem> {
        let offset = self.offset();
        let found = self.found();
        match self.advance() {
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::ImaginaryUnit) => Ok(FieldElem::i()),
            Some(Token::CubeRootTwo) => Ok(FieldElem::alpha()),
            Some(Token::Number(numer)) => {
                if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    let den_offset = self.offset();
                    let den_found = self.found();
                    match self.advance() {
                        Some(Token::Number(denom)) => {
                            if denom.bits() == 0 {
                                return Err(unexpected(den_offset, "positive denominator", "0"));
                            }
                            Ok(FieldElem::from_rational(Rational::new(numer, denom)))
                        }
                        _ => Err(unexpected(den_offset, "positive denominator", &den_found)),
                    }
                } else {
                    Ok(FieldElem::from_rational(Rational::from(numer)))
                }
            }
            Some(other) => Err(unexpected(
                offset,
                "number, 'i', 'c2' or '('",
                &other.describe(),
            )),
            None => Err(unexpected(offset, "number, 'i', 'c2' or '('", &found)),
        }
    }
}

/// Parse an exact field coefficient expression.
pub fn parse_coeff(expr: &str) -> Result<FieldElem> {
    let tokens = Lexer::new(expr).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset: expr.len(),
    };
    let value = parser.parse_expr()?;
    if parser.peek().is_some() {
        return Err(unexpected(
            parser.offset(),
            "'+', '-', '*', '^' or end of input",
            &parser.found(),
        ));
    }
    Ok(value)
}
