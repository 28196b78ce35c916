//! Parser for ideal expressions.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' int)?
//! atom   := 'm' | 'm[p^' int ']' | '0' | '1' | '(' expr ')'
//! ```

use super::GLIdeal;
use crate::combinatorics::PrimeContext;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: PrimeContext,
}

pub fn parse_ideal(src: &str, ctx: PrimeContext) -> Result<GLIdeal> {
    let mut parser = Parser { src: src.as_bytes(), pos: 0, ctx };
    let ideal = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(ideal)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })
    }

    fn expr(&mut self) -> Result<GLIdeal> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.sum(&rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GLIdeal> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.product(&rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GLIdeal> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.int()?;
            if e == 0 {
                return Err(Error::Parse { pos: at, msg: "exponent must be positive".into() });
            }
            return Ok(base.power(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GLIdeal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(GLIdeal::zero(self.ctx))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(GLIdeal::unit(self.ctx))
            }
            Some(b'm') => {
                self.pos += 1;
                if self.peek() != Some(b'[') {
                    return Ok(GLIdeal::frobenius_power(0, self.ctx));
                }
                self.pos += 1;
                self.expect(b'p')?;
                self.expect(b'^')?;
                let at = self.pos;
                let k = self.int()?;
                if k == 0 {
                    return Err(Error::Parse { pos: at, msg: "Frobenius exponent must be at least 1".into() });
                }
                self.expect(b']')?;
                Ok(GLIdeal::frobenius_power(k, self.ctx))
            }
            _ => Err(self.error("expected 'm', 'm[p^k]', '0', '1' or '('")),
        }
    }
}
