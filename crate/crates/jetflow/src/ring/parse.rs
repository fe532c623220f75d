//! Text grammar for expressions.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ['^' exponent]
//! atom     := rational | ident | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! rational := integer ['/' integer]
//! ident    := letter (letter | digit | '_')*
//! ```
//!
//! `u` followed by digits is a jet variable (`u` alone is `u0`), `a` is the
//! separant root, `ab` its base-level derivative, and any other identifier a
//! constant symbol. Whitespace is insignificant. `parse(print(e)) == e`.

use num::{BigInt, One, Zero};

use super::{DiffPoly, Indet, PowerProduct, Rat};
use crate::error::{Error, Result};

pub fn parse(input: &str) -> Result<DiffPoly> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = self.exponent()?;
        // A bare indeterminate accepts any integer exponent (subject to the
        // jet nonnegativity rule); anything else only a nonnegative one.
        if let Some((pow, coeff)) = base.as_monomial() {
            if coeff.is_one() {
                if let [(ind, 1)] = pow.pairs() {
                    if exp < 0 && ind.is_jet() {
                        return Err(self.err("jet variables cannot carry negative exponents"));
                    }
                    return Ok(DiffPoly::monomial(
                        PowerProduct::from_pairs([(ind.clone(), exp)])?,
                        Rat::one(),
                    ));
                }
            }
        }
        if exp < 0 {
            if let Some(c) = base.as_constant() {
                if !c.is_zero() {
                    let mut acc = Rat::one();
                    for _ in 0..(-exp) {
                        acc /= &c;
                    }
                    return Ok(DiffPoly::constant(acc));
                }
            }
            return Err(self.err("negative exponents are only allowed on single symbols"));
        }
        Ok(base.pow(exp as u32))
    }

    fn exponent(&mut self) -> Result<i32> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')' after exponent"));
            }
            Ok(if neg { -n } else { n })
        } else {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            Ok(if neg { -n } else { n })
        }
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i32>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.err("expected a number, symbol, or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<DiffPoly> {
        let numer = self.bigint()?;
        if self.eat(b'/') {
            let denom = self.bigint()?;
            if denom.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(DiffPoly::constant(Rat::new(numer, denom)))
        } else {
            Ok(DiffPoly::constant(Rat::from_integer(numer)))
        }
    }

    fn bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<BigInt>()
            .unwrap())
    }

    fn ident(&mut self) -> Result<DiffPoly> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let ind = classify_ident(name).ok_or_else(|| {
            let e = Error::Parse {
                pos: start,
                msg: format!("malformed jet variable '{name}'"),
            };
            e
        })?;
        Ok(DiffPoly::var(ind))
    }
}

/// Map an identifier to its indeterminate. Returns `None` for a malformed
/// jet name such as `u5x`.
fn classify_ident(name: &str) -> Option<Indet> {
    if name == "a" {
        return Some(Indet::A);
    }
    if name == "ab" {
        return Some(Indet::Ab);
    }
    if let Some(rest) = name.strip_prefix('u') {
        if rest.is_empty() {
            return Some(Indet::Jet(0));
        }
        if rest.bytes().all(|b| b.is_ascii_digit()) {
            return rest.parse::<u32>().ok().map(Indet::Jet);
        }
        // identifiers like "u5x" are rejected, but "up" or "used" would be
        // constants; only all-digit suffixes denote jets
        if rest.bytes().next().is_some_and(|b| b.is_ascii_digit()) {
            return None;
        }
    }
    Some(Indet::sym(name))
}
