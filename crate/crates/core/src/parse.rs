//! Parser for the element grammar:
//!
//! ```text
//! element  := ["+"|"-"] term (("+"|"-") term)*
//! term     := rational | [rational "*"] factor ("*" factor)*
//! factor   := name ["^" posint]
//! rational := int ["/" posint]
//! ```
//!
//! Whitespace is insignificant. The result is always in normal form, so
//! `parse_element` inverts `Element::render`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Algebra, Element};
use crate::error::KernelError;
use crate::scalar::Rational;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Name(String),
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(usize, Token), KernelError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((start, Token::End));
        }
        let c = self.src[self.pos];
        self.pos += 1;
        let tok = match c {
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b'/' => Token::Slash,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Token::Int(text.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Token::Name(text.to_string())
            }
            other => {
                return Err(KernelError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    algebra: Arc<Algebra>,
    lookahead: Option<(usize, Token)>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<&(usize, Token), KernelError> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lexer.next()?);
        }
        Ok(self.lookahead.as_ref().unwrap())
    }

    fn bump(&mut self) -> Result<(usize, Token), KernelError> {
        match self.lookahead.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn parse_element(&mut self) -> Result<Element, KernelError> {
        let mut acc = Element::zero(&self.algebra);
        let mut sign = match self.peek()?.1 {
            Token::Plus => {
                self.bump()?;
                 1
            }
            Token::Minus => {
                self.bump()?;
                -1
            }
            _ => 1,
        };
        loop {
            let term = self.parse_term()?;
            acc = if sign < 0 {
                acc.sub(&term)?
            } else {
                acc.add(&term)?
            };
            match self.peek()?.1 {
                Token::Plus => {
                    self.bump()?;
                    sign = 1;
                }
                Token::Minus => {
                    self.bump()?;
                    sign = -1;
                }
                Token::End => break,
                _ => {
                    let (pos, tok) = self.bump()?;
                    return Err(KernelError::Parse {
                        pos,
                        msg: format!("expected `+`, `-` or end of input, found {tok:?}"),
                    });
                }
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Element, KernelError> {
        let mut coeff = Rational::one();
        let mut acc = Element::one(&self.algebra);

        if let Token::Int(_) = self.peek()?.1 {
            coeff = self.parse_rational()?;
            match self.peek()?.1 {
                Token::Star => {
                    self.bump()?;
                }
                // bare rational constant
                _ => return Ok(Element::scalar(&self.algebra, coeff)),
            }
        }
        loop {
            let factor = self.parse_factor()?;
            acc = acc.mul(&factor)?;
            if self.peek()?.1 == Token::Star {
                self.bump()?;
            } else {
                break;
            }
        }
        Ok(acc.scale(&coeff))
    }

    fn parse_rational(&mut self) -> Result<Rational, KernelError> {
        let (pos, tok) = self.bump()?;
        let numer = match tok {
            Token::Int(n) => n,
            other => {
                return Err(KernelError::Parse {
                    pos,
                    msg: format!("expected integer, found {other:?}"),
                })
            }
        };
        if self.peek()?.1 == Token::Slash {
            self.bump()?;
            let (dpos, dtok) = self.bump()?;
            let denom = match dtok {
                Token::Int(d) => d,
                other => {
                    return Err(KernelError::Parse {
                        pos: dpos,
                        msg: format!("expected positive integer denominator, found {other:?}"),
                    })
                }
            };
            if denom.is_zero() {
                return Err(KernelError::Parse {
                    pos: dpos,
                    msg: "denominator must be positive".into(),
                });
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn parse_factor(&mut self) -> Result<Element, KernelError> {
        let (pos, tok) = self.bump()?;
        let name = match tok {
            Token::Name(n) => n,
            other => {
                return Err(KernelError::Parse {
                    pos,
                    msg: format!("expected generator name, found {other:?}"),
                })
            }
        };
        let gen = Element::generator_named(&self.algebra, &name)?;
        if self.peek()?.1 == Token::Caret {
            self.bump()?;
            let (epos, etok) = self.bump()?;
            let exp = match etok {
                Token::Int(n) if n > BigInt::zero() => n,
                other => {
                    return Err(KernelError::Parse {
                        pos: epos,
                        msg: format!("expected positive integer exponent, found {other:?}"),
                    })
                }
            };
            let exp: u32 = exp.try_into().map_err(|_| KernelError::Parse {
                pos: epos,
                msg: "exponent too large".into(),
            })?;
            return gen.pow(exp);
        }
        Ok(gen)
    }
}

/// Parse `text` into a normal-form element of `algebra`.
pub fn parse_element(text: &str, algebra: &Arc<Algebra>) -> Result<Element, KernelError> {
    let mut parser = Parser {
        lexer: Lexer::new(text),
        algebra: Arc::clone(algebra),
        lookahead: None,
    };
    parser.parse_element()
}
