//! Pretty printers: canonical text form and a LaTeX form, plus a reader for
//! the emitted LaTeX subset so output can be structurally verified.

use std::fmt;

use num::{One, Signed};

use super::{DiffPoly, Indet, PowerProduct, Rat};
use crate::error::{Error, Result};

/// Write the canonical text form. Terms appear in canonical order; factors
/// within a monomial print as constants (name order), then `a`, `ab`, then
/// jets from the highest order down, matching the usual hand-written layout.
pub(super) fn write_text(e: &DiffPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    for (i, (pow, coeff)) in e.terms().iter().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        write_term_text(f, pow, &coeff.abs())?;
    }
    Ok(())
}

fn factor_order(pow: &PowerProduct) -> Vec<(&Indet, i32)> {
    let mut syms: Vec<(&Indet, i32)> = Vec::new();
    let mut coeffs: Vec<(&Indet, i32)> = Vec::new();
    let mut jets: Vec<(&Indet, i32)> = Vec::new();
    for (ind, e) in pow.pairs() {
        match ind {
            Indet::Sym(_) => syms.push((ind, *e)),
            Indet::A | Indet::Ab => coeffs.push((ind, *e)),
            Indet::Jet(_) => jets.push((ind, *e)),
        }
    }
    jets.reverse();
    syms.into_iter().chain(coeffs).chain(jets).collect()
}

fn write_term_text(f: &mut fmt::Formatter<'_>, pow: &PowerProduct, coeff: &Rat) -> fmt::Result {
    let mut wrote = false;
    if !coeff.is_one() || pow.is_one() {
        write!(f, "{coeff}")?;
        wrote = true;
    }
    for (ind, e) in factor_order(pow) {
        if wrote {
            write!(f, "*")?;
        }
        write!(f, "{}", ind.name())?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
        wrote = true;
    }
    Ok(())
}

/// LaTeX form of an expression. `base` selects the subscript used for `ab`
/// (it prints as `a_b` for that base, e.g. `a_4`).
pub fn latex(e: &DiffPoly, base: u32) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (pow, coeff)) in e.terms().iter().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let c = coeff.abs();
        if !c.is_one() || pow.is_one() {
            if c.denom().is_one() {
                out.push_str(&format!("{}", c.numer()));
            } else {
                out.push_str(&format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()));
            }
            if !pow.is_one() {
                out.push(' ');
            }
        }
        let factors = factor_order(pow);
        for (j, (ind, e)) in factors.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            match ind {
                Indet::Jet(k) => out.push_str(&format!("u_{{{k}}}")),
                Indet::A => out.push('a'),
                Indet::Ab => out.push_str(&format!("a_{{{base}}}")),
                Indet::Sym(s) => out.push_str(s),
            }
            if *e != 1 {
                out.push_str(&format!("^{{{e}}}"));
            }
        }
    }
    out
}

/// Read back the LaTeX subset produced by [`latex`]. Adjacent factors
/// multiply; `\frac{p}{q}` is a rational; `u_{k}` a jet; `a_{base}` maps to
/// `ab`. Used to check that emitted LaTeX denotes the same polynomial.
pub fn latex_parse(input: &str, base: u32) -> Result<DiffPoly> {
    let mut p = LatexParser {
        src: input.as_bytes(),
        pos: 0,
        base,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse {
            pos: p.pos,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

struct LatexParser<'a> {
    src: &'a [u8],
    pos: usize,
    base: u32,
}

impl<'a> LatexParser<'a> {
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
            -self.product()?
        } else {
            self.product()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.product()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.product()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    /// A run of juxtaposed factors.
    fn product(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c == b'+' || c == b'-' || c == b')' {
                break;
            }
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.braced_int()?;
            if let Some((pow, coeff)) = base.as_monomial() {
                if coeff.is_one() {
                    if let [(ind, 1)] = pow.pairs() {
                        return Ok(DiffPoly::monomial(
                            PowerProduct::from_pairs([(ind.clone(), exp)])?,
                            Rat::one(),
                        ));
                    }
                }
            }
            if exp < 0 {
                return Err(self.err("negative exponent on a compound factor"));
            }
            return Ok(base.pow(exp as u32));
        }
        Ok(base)
    }

    fn braced_int(&mut self) -> Result<i32> {
        let braced = self.eat(b'{');
        let neg = self.eat(b'-');
        let n = self.integer()?;
        if braced && !self.eat(b'}') {
            return Err(self.err("expected '}'"));
        }
        Ok(if neg { -n } else { n })
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
            Some(b'\\') => {
                // \frac{p}{q}
                let kw = b"\\frac";
                if self.src[self.pos..].starts_with(kw) {
                    self.pos += kw.len();
                    if !self.eat(b'{') {
                        return Err(self.err("expected '{'"));
                    }
                    let p = self.integer()?;
                    if !self.eat(b'}') || !self.eat(b'{') {
                        return Err(self.err("expected '}{'"));
                    }
                    let q = self.integer()?;
                    if !self.eat(b'}') {
                        return Err(self.err("expected '}'"));
                    }
                    Ok(DiffPoly::constant(Rat::new(p.into(), q.into())))
                } else {
                    Err(self.err("unknown LaTeX command"))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(DiffPoly::constant(Rat::from_integer(n.into())))
            }
            Some(b'u') => {
                self.pos += 1;
                if !self.eat(b'_') {
                    return Err(self.err("expected '_' after 'u'"));
                }
                let k = self.braced_int()?;
                if k < 0 {
                    return Err(self.err("negative jet order"));
                }
                Ok(DiffPoly::jet(k as u32))
            }
            Some(b'a') => {
                self.pos += 1;
                if self.eat(b'_') {
                    let k = self.braced_int()?;
                    if k == self.base as i32 {
                        Ok(DiffPoly::var(Indet::Ab))
                    } else {
                        Err(self.err("subscripted 'a' does not match the base level"))
                    }
                } else {
                    Ok(DiffPoly::var(Indet::A))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(DiffPoly::var(Indet::sym(name)))
            }
            _ => Err(self.err("expected a LaTeX factor")),
        }
    }
}
