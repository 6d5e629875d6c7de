//! Text syntax for series, fields and maps, matching their `Display`:
//!
//! ```text
//! x*dx + (-1)*z1*dz1 + x*z1^2*dz1
//! x = x; z1 = 2*z1 + (1/2+i)*x^-1*z1^2
//! ```
//!
//! Terms are products of coefficients (`3`, `1/2`, `i`, or any
//! parenthesized Gaussian rational), `x^a` with `a` possibly negative,
//! `zk^m`, and for fields exactly one of `dx`, `dzk`. Whitespace, line
//! breaks included, is insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::{scan_gaussian, GaussianRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::lie::{Automorphism, VectorField};
use crate::series::{Shape, TransverseSeries, ZExp};

type G = GaussianRational;

/// Which derivation a term of a field multiplies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Direction {
    X,
    Z(usize),
}

struct Term {
    coeff: G,
    x_exp: i32,
    z: Vec<u16>,
    direction: Option<(Direction, usize)>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, n: usize) -> Self {
        Parser { src, pos: 0, n }
    }

    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn location(&self, at: usize) -> (usize, usize) {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |p| before[p + 1..].chars().count()) + 1;
        (line, column)
    }

    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(at);
        Error::parse(line, column, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", b as char)))
        }
    }

    fn unexpected(&mut self, wanted: &str) -> Error {
        let at = self.pos;
        match self.peek() {
            None => self.error(at.max(self.src.trim_end().len()), format!("expected {wanted}, found end of input")),
            Some(_) => {
                let found: String = self.src[self.pos..].chars().next().into_iter().collect();
                self.error(self.pos, format!("expected {wanted}, found `{found}`"))
            }
        }
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.bytes();
        if start >= bytes.len() || !bytes[start].is_ascii_alphabetic() {
            return None;
        }
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
            end += 1;
        }
        self.pos = end;
        Some((start, &self.src[start..end]))
    }

    fn unsigned(&mut self) -> Result<(usize, BigInt)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.bytes();
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return Err(self.unexpected("a number"));
        }
        self.pos = end;
        Ok((start, self.src[start..end].parse().expect("digit run")))
    }

    /// `^` followed by an optionally signed integer.
    fn exponent(&mut self) -> Result<Option<(usize, BigInt)>> {
        if self.peek() != Some(b'^') {
            return Ok(None);
        }
        self.pos += 1;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let (at, v) = self.unsigned()?;
        Ok(Some((at, if negative { -v } else { v })))
    }

    /// Index `k` of `zk`/`dzk`, checked against `n`.
    fn variable_index(&self, at: usize, name: &str, digits: &str) -> Result<usize> {
        match digits.parse::<usize>() {
            Ok(k) if k >= 1 && k <= self.n && !digits.starts_with('0') => Ok(k - 1),
            _ => Err(self.error(at, format!("unknown variable `{name}` (n = {})", self.n))),
        }
    }

    fn term(&mut self, allow_direction: bool) -> Result<Term> {
        let mut t = Term {
            coeff: G::one(),
            x_exp: 0,
            z: vec![0; self.n],
            direction: None,
        };
        loop {
            self.factor(&mut t, allow_direction)?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(t);
            }
        }
    }

    fn factor(&mut self, t: &mut Term, allow_direction: bool) -> Result<()> {
        match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = &self.src[self.pos..];
                let (value, used) = scan_gaussian(inner).map_err(|e| match e {
                    Error::Parse { column, message, .. } => self.error(self.pos + column - 1, message),
                    other => other,
                })?;
                self.pos += used;
                if self.peek() != Some(b')') {
                    let err = self.unexpected("`)`");
                    return Err(if self.at_end() { self.error(open, "unclosed `(`") } else { err });
                }
                self.pos += 1;
                t.coeff = &t.coeff * &value;
            }
            Some(b) if b.is_ascii_digit() => {
                let (_, num) = self.unsigned()?;
                let mut r = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let (at, den) = self.unsigned()?;
                    if den.is_zero() {
                        return Err(self.error(at, "zero denominator"));
                    }
                    r = BigRational::new(r.to_integer(), den);
                }
                t.coeff = &t.coeff * &G::real(r);
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let (at, name) = self.ident().expect("alphabetic start");
                if name == "i" {
                    t.coeff = &t.coeff * &G::i();
                } else if name == "x" {
                    let e = self.exponent()?.map_or(Ok(1), |(eat, v)| {
                        v.to_i32().ok_or_else(|| self.error(eat, "exponent overflow"))
                    })?;
                    t.x_exp = t.x_exp.checked_add(e).ok_or_else(|| self.error(at, "exponent overflow"))?;
                } else if let Some(digits) = name.strip_prefix('z') {
                    let k = self.variable_index(at, name, digits)?;
                    let e = match self.exponent()? {
                        None => 1,
                        Some((eat, v)) => {
                            if v < BigInt::zero() {
                                return Err(self.error(eat, format!("negative power of {name}")));
                            }
                            v.to_u16().ok_or_else(|| self.error(eat, "exponent overflow"))?
                        }
                    };
                    t.z[k] = t.z[k].checked_add(e).ok_or_else(|| self.error(at, "exponent overflow"))?;
                } else if name == "dx" || name.starts_with("dz") {
                    if !allow_direction {
                        return Err(self.error(at, format!("`{name}` is not allowed in a series")));
                    }
                    if t.direction.is_some() {
                        return Err(self.error(at, "a term has more than one of dx, dz1, ..."));
                    }
                    let dir = if name == "dx" {
                        Direction::X
                    } else {
                        Direction::Z(self.variable_index(at, name, &name[2..])?)
                    };
                    t.direction = Some((dir, at));
                } else {
                    return Err(self.error(at, format!("unknown variable `{name}`")));
                }
            }
            _ => return Err(self.unexpected("a coefficient or variable")),
        }
        Ok(())
    }

    /// A signed sum of terms, ending at end of input, `;`, or an
    /// assignment `name =`.
    fn sum(&mut self, allow_direction: bool) -> Result<Vec<(usize, Term)>> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let start = self.pos;
            let negative = match self.peek() {
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                _ => {
                    if first {
                        return Err(self.unexpected("a term"));
                    }
                    return Ok(out);
                }
            };
            self.skip_ws();
            let at = self.pos.max(start);
            let mut t = self.term(allow_direction)?;
            if negative {
                t.coeff = -t.coeff;
            }
            if allow_direction && t.direction.is_none() {
                return Err(self.error(at, "term has no dx or dz factor"));
            }
            out.push((at, t));
            first = false;
            match self.peek() {
                Some(b'+') | Some(b'-') => {}
                Some(b';') | None => return Ok(out),
                Some(_) if self.assignment_ahead() => return Ok(out),
                Some(_) => return Err(self.unexpected("`+`, `-` or `*`")),
            }
        }
    }

    fn assignment_ahead(&mut self) -> bool {
        let save = self.pos;
        let found = self.ident().is_some() && self.peek() == Some(b'=');
        self.pos = save;
        found
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

fn is_zero_literal(text: &str) -> bool {
    text.trim() == "0"
}

fn series_from_terms(shape: Shape, terms: impl IntoIterator<Item = Term>) -> TransverseSeries<G> {
    let mut out = TransverseSeries::zero(shape);
    for t in terms {
        let m = ZExp::new(t.z);
        let f = LaurentPoly::monomial(t.coeff, t.x_exp);
        out = &out + &TransverseSeries::monomial(shape, m, f);
    }
    out
}

/// Parses a series; terms beyond the degree cap are dropped.
pub fn parse_series(text: &str, shape: Shape) -> Result<TransverseSeries<G>> {
    if is_zero_literal(text) {
        return Ok(TransverseSeries::zero(shape));
    }
    let mut p = Parser::new(text, shape.n);
    let terms = p.sum(false)?;
    p.finish()?;
    Ok(series_from_terms(shape, terms.into_iter().map(|(_, t)| t)))
}

/// Parses a field in `n` transverse variables modulo `𝔪^{d+1}`.
pub fn parse_field(text: &str, n: usize, d: u32) -> Result<VectorField<G>> {
    parse_field_in(text, Shape::new(n, d))
}

pub fn parse_field_in(text: &str, shape: Shape) -> Result<VectorField<G>> {
    if is_zero_literal(text) {
        return Ok(VectorField::zero(shape));
    }
    let mut p = Parser::new(text, shape.n);
    let terms = p.sum(true)?;
    p.finish()?;
    let mut a = Vec::new();
    let mut b: Vec<Vec<Term>> = (0..shape.n).map(|_| Vec::new()).collect();
    for (_, t) in terms {
        match t.direction.expect("checked in sum").0 {
            Direction::X => a.push(t),
            Direction::Z(k) => b[k].push(t),
        }
    }
    VectorField::new(
        series_from_terms(shape, a),
        b.into_iter().map(|ts| series_from_terms(shape, ts)).collect(),
    )
}

/// Parses `x = …; z1 = …; …`. A missing `x` means `x = x`; every `zk`
/// must be given once.
pub fn parse_automorphism(text: &str, shape: Shape) -> Result<Automorphism<G>> {
    let mut p = Parser::new(text, shape.n);
    let mut img_x = None;
    let mut img_z: Vec<Option<TransverseSeries<G>>> = vec![None; shape.n];
    loop {
        while p.peek() == Some(b';') {
            p.pos += 1;
        }
        if p.at_end() {
            break;
        }
        let Some((at, name)) = p.ident() else {
            return Err(p.unexpected("`x =` or `zk =`"));
        };
        p.expect(b'=')?;
        let slot = if name == "x" {
            &mut img_x
        } else if let Some(digits) = name.strip_prefix('z') {
            let k = p.variable_index(at, name, digits)?;
            &mut img_z[k]
        } else {
            return Err(p.error(at, format!("unknown variable `{name}`")));
        };
        if slot.is_some() {
            return Err(p.error(at, format!("`{name}` assigned twice")));
        }
        let start = p.pos;
        let value = if p.peek() == Some(b'0') && {
            let rest = p.src[p.pos + 1..].trim_start();
            rest.is_empty() || rest.starts_with(';')
        } {
            p.pos += 1;
            TransverseSeries::zero(shape)
        } else {
            series_from_terms(shape, p.sum(false)?.into_iter().map(|(_, t)| t))
        };
        let _ = start;
        *slot = Some(value);
    }
    let img_z = img_z
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.ok_or_else(|| p.error(p.src.len(), format!("missing image of z{}", k + 1))))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::new(img_x.unwrap_or_else(|| TransverseSeries::x(shape)), img_z)
}
