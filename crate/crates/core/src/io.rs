//! Text grammar for polynomials and the JSON surface document.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! poly        := ['+' | '-'] term (('+' | '-') term)*
//! term        := coefficient ['*' factors] | factors
//! factors     := factor ('*' factor)*
//! factor      := 'z' idx ['^' e] | 'zb' idx ['^' e] | 'u' ['^' e]
//! coefficient := rational | '(' ['-'] rational [('+' | '-') rational] 'i' ')'
//!              | '(' ['-'] rational ')'
//! rational    := digits ['/' digits]
//! ```
//!
//! Indices are 1-based. [`Poly::to_text`] produces the canonical form, which
//! this parser reads back unchanged.

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::normal_form::NormalFormSurface;
use crate::poly::{Coefficient, Monomial, Poly};
use crate::scalar::Scalar;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn err<R>(&self, msg: impl Into<String>) -> Result<R> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| Error::Parse { pos: start, msg: format!("{what} too large") })
    }

    fn rational<T: Scalar>(&mut self) -> Result<T> {
        let start = self.pos;
        let num = self.digits()?;
        let text = if self.eat(b'/') { format!("{num}/{}", self.digits()?) } else { num.to_string() };
        match T::parse_scalar(&text) {
            Some(v) => Ok(v),
            None => Err(Error::Parse { pos: start, msg: format!("invalid rational {text:?}") }),
        }
    }

    fn parenthesized<T: Scalar>(&mut self) -> Result<Gaussian<T>> {
        self.expect(b'(')?;
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let mut first: T = self.rational()?;
        if neg {
            first = -first;
        }
        let value = if self.eat(b'i') {
            Gaussian::new(T::zero(), first)
        } else if self.peek() == Some(b'+') || self.peek() == Some(b'-') {
            let neg_im = self.peek() == Some(b'-');
            self.pos += 1;
            let mut im: T = self.rational()?;
            if neg_im {
                im = -im;
            }
            self.expect(b'i')?;
            Gaussian::new(first, im)
        } else {
            Gaussian::real(first)
        };
        self.expect(b')')?;
        Ok(value)
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        let exponent = |p: &mut Self| -> Result<u32> { if p.eat(b'^') { p.small_int("exponent") } else { Ok(1) } };
        if self.src[self.pos..].starts_with(b"zb") {
            self.pos += 2;
            let idx = self.index(start)?;
            m.zb[idx] += exponent(self)?;
        } else if self.src[self.pos..].starts_with(b"z") {
            self.pos += 1;
            let idx = self.index(start)?;
            m.z[idx] += exponent(self)?;
        } else if self.src[self.pos..].starts_with(b"u") {
            self.pos += 1;
            m.u += exponent(self)?;
        } else {
            return self.err("expected a factor z<i>, zb<i> or u");
        }
        Ok(())
    }

    fn index(&mut self, start: usize) -> Result<usize> {
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err("expected a variable index");
        }
        let idx = self.small_int("index")? as usize;
        if idx == 0 {
            return Err(Error::Parse { pos: start, msg: "indices are 1-based".into() });
        }
        if idx > self.n {
            return Err(Error::IndexOutOfRange { index: idx, n: self.n });
        }
        Ok(idx - 1)
    }

    fn term<T: Scalar>(&mut self) -> Result<(Monomial, Gaussian<T>)> {
        let mut m = Monomial::one(self.n);
        let coeff = match self.peek() {
            Some(b'(') => Some(self.parenthesized()?),
            Some(c) if c.is_ascii_digit() => Some(Gaussian::real(self.rational()?)),
            _ => None,
        };
        let need_factor = match coeff {
            None => true,
            Some(_) => self.eat(b'*'),
        };
        if need_factor {
            self.factor(&mut m)?;
            while self.eat(b'*') {
                self.factor(&mut m)?;
            }
        }
        Ok((m, coeff.unwrap_or_else(Gaussian::one)))
    }

    fn poly<T: Scalar>(&mut self) -> Result<Poly<T>> {
        let mut out = Poly::zero(self.n);
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            let (m, mut c) = self.term::<T>()?;
            if negative {
                c = -c;
            }
            out.add_term(m, Coefficient::scalar(c));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
    }
}

/// Parses a polynomial in `n` variables.
pub fn parse_poly<T: Scalar>(text: &str, n: usize) -> Result<Poly<T>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    p.poly()
}

/// Parses a single coefficient: an optionally signed rational or a
/// parenthesized complex number.
pub fn parse_gaussian<T: Scalar>(text: &str) -> Result<Gaussian<T>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n: 0 };
    let negative = p.eat(b'-');
    let value = match p.peek() {
        Some(b'(') => p.parenthesized()?,
        Some(c) if c.is_ascii_digit() => Gaussian::real(p.rational()?),
        _ => return p.err("expected a rational or a parenthesized complex number"),
    };
    if p.peek().is_some() {
        return p.err("trailing input after coefficient");
    }
    Ok(if negative { -value } else { value })
}

/// Largest variable index mentioned in `text`, for callers that want to
/// infer `n`.
pub fn max_index(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'z' {
            let mut j = i + 1;
            if b.get(j) == Some(&b'b') {
                j += 1;
            }
            let start = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = text[start..j].parse::<usize>() {
                best = best.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

/// A Gaussian rational with both parts as rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntry {
    pub re: String,
    pub im: String,
}

impl ComplexEntry {
    pub fn from_gaussian<T: Scalar>(g: &Gaussian<T>) -> Self {
        ComplexEntry { re: g.re.to_string(), im: g.im.to_string() }
    }

    pub fn to_gaussian<T: Scalar>(&self) -> Result<Gaussian<T>> {
        let part = |s: &str| {
            if s.contains(['.', 'e', 'E']) {
                return Err(Error::Document(format!("{s:?} is not an exact rational")));
            }
            T::parse_scalar(s).ok_or_else(|| Error::Document(format!("invalid rational {s:?}")))
        };
        Ok(Gaussian::new(part(&self.re)?, part(&self.im)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Unknown { unknown: String, scale: ComplexEntry },
    Scalar(ComplexEntry),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub zexp: Vec<u32>,
    pub zbexp: Vec<u32>,
    pub uexp: u32,
    pub coeff: CoeffEntry,
}

/// On-disk form of a [`NormalFormSurface`]. Affine coefficients
/// `c + Σ sⱼ·Cⱼ` are stored as one entry per part; loading sums entries
/// that share a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDocument {
    pub n: usize,
    pub max_weight: u32,
    pub terms: Vec<TermEntry>,
}

impl SurfaceDocument {
    pub fn from_surface<T: Scalar>(s: &NormalFormSurface<T>) -> Self {
        let mut terms = Vec::new();
        for (m, c) in s.body.terms() {
            let entry = |coeff| TermEntry { zexp: m.z.clone(), zbexp: m.zb.clone(), uexp: m.u, coeff };
            if !c.constant.is_zero() || c.terms.is_empty() {
                terms.push(entry(CoeffEntry::Scalar(ComplexEntry::from_gaussian(&c.constant))));
            }
            for (name, scale) in &c.terms {
                terms.push(entry(CoeffEntry::Unknown {
                    unknown: name.clone(),
                    scale: ComplexEntry::from_gaussian(scale),
                }));
            }
        }
        SurfaceDocument { n: s.n, max_weight: s.max_weight, terms }
    }

    pub fn to_surface<T: Scalar>(&self) -> Result<NormalFormSurface<T>> {
        let mut body = Poly::zero(self.n);
        for t in &self.terms {
            if t.zexp.len() != self.n || t.zbexp.len() != self.n {
                return Err(Error::Document(format!(
                    "exponent vectors must have length {}, got {} and {}",
                    self.n,
                    t.zexp.len(),
                    t.zbexp.len()
                )));
            }
            let m = Monomial::new(t.zexp.clone(), t.zbexp.clone(), t.uexp);
            let c = match &t.coeff {
                CoeffEntry::Scalar(v) => Coefficient::scalar(v.to_gaussian()?),
                CoeffEntry::Unknown { unknown, scale } => Coefficient::unknown_scaled(unknown.clone(), scale.to_gaussian()?),
            };
            body.add_term(m, c);
        }
        NormalFormSurface::new(self.n, self.max_weight, body)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }
}

pub fn surface_to_json<T: Scalar>(s: &NormalFormSurface<T>) -> String {
    SurfaceDocument::from_surface(s).to_json()
}

pub fn surface_from_json<T: Scalar>(text: &str) -> Result<NormalFormSurface<T>> {
    SurfaceDocument::from_json(text)?.to_surface()
}

pub fn save_surface<T: Scalar>(path: &Path, s: &NormalFormSurface<T>) -> Result<()> {
    std::fs::write(path, surface_to_json(s)).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

pub fn load_surface<T: Scalar>(path: &Path) -> Result<NormalFormSurface<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    surface_from_json(&text)
}
