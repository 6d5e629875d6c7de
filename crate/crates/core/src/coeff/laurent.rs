use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{inv_int, Coeff, GaussianRational};

/// A Laurent polynomial `Σ aᵢ xⁱ` with finitely many nonzero terms.
///
/// Exponents may be negative. No stored coefficient is zero, so the zero
/// polynomial has empty support.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<C = GaussianRational> {
    terms: BTreeMap<i32, C>,
}

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·xᵉ`.
    pub fn monomial(c: C, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// True iff no exponent is negative (the polynomial extends over `x = 0`).
    pub fn is_taylor(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub(crate) fn add_term(&mut self, exp: i32, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_capped(rhs, None)
    }

    /// Product with every exponent above `x_cap` dropped.
    pub(crate) fn mul_capped(&self, rhs: &Self, x_cap: Option<i32>) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut acc: BTreeMap<i32, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if x_cap.is_some_and(|cap| e > cap) {
                    continue;
                }
                let prod = ca.clone() * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += &prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v.clone() * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Multiply by `xᵏ`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Drop every term with exponent above `cap`.
    pub fn truncate_above(&self, cap: i32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .range(..=cap)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// `d/dx`.
    pub fn derivative(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c.clone() * &C::from_i64(*e as i64)))
                .collect(),
        }
    }

    /// The Euler operator `x·d/dx`.
    pub fn euler(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (*e, c.clone() * &C::from_i64(*e as i64)))
                .collect(),
        }
    }

    /// Apply `x·d/dx + s`.
    pub fn euler_shifted(&self, s: &C) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * &(C::from_i64(*e as i64) + s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Solve `(x·d/dx + s)·f = g − residual` term by term.
    ///
    /// A term `aᵢxⁱ` of `g` is divided by `i + s`; when `i + s = 0` it is
    /// moved to the residual instead. `f` never has a term at exponent `−s`.
    pub fn euler_solve(&self, s: &C) -> (Self, Self) {
        let mut f = Self::zero();
        let mut residual = Self::zero();
        for (e, a) in &self.terms {
            let divisor = C::from_i64(*e as i64) + s;
            match divisor.inv() {
                Some(inv) => f.add_term(*e, &(a.clone() * &inv)),
                None => residual.add_term(*e, a),
            }
        }
        (f, residual)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_complex() * x.powi(*e))
            .sum()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn to_complex(&self) -> LaurentPoly<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }

    /// `f(x + h)` given the powers `h⁰, h¹, …` of the shift in some ring,
    /// via the Taylor formula `Σ f⁽ᵐ⁾(x)·hᵐ/m!`. Returns the list of
    /// `f⁽ᵐ⁾/m!` for `m < count`, which callers combine with their powers.
    pub(crate) fn taylor_coefficients(&self, count: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for m in 0..count {
            if m > 0 {
                cur = cur.derivative().scale(&inv_int::<C>(m as i64));
            }
            if cur.is_zero() {
                break;
            }
            out.push(cur.clone());
        }
        out
    }
}

/// Text for a coefficient in product position: bare when it is a positive
/// rational, parenthesized otherwise.
pub(crate) fn coeff_text<C: Coeff>(c: &C) -> String {
    let s = c.to_string();
    if s.bytes().all(|b| b.is_ascii_digit() || b == b'/') {
        s
    } else {
        format!("({s})")
    }
}

/// Formats `c · x^x_exp · Π z_i^k_i [· tail]` canonically.
pub(crate) fn write_term<C: Coeff>(
    f: &mut impl fmt::Write,
    c: &C,
    x_exp: i32,
    z: &[u16],
    tail: Option<&str>,
) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    match x_exp {
        0 => {}
        1 => parts.push("x".into()),
        e => parts.push(format!("x^{e}")),
    }
    for (i, k) in z.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("z{}", i + 1)),
            k => parts.push(format!("z{}^{k}", i + 1)),
        }
    }
    if let Some(t) = tail {
        parts.push(t.to_string());
    }
    if parts.is_empty() {
        return write!(f, "{}", coeff_text(c));
    }
    if !c.is_one() {
        write!(f, "{}*", coeff_text(c))?;
    }
    write!(f, "{}", parts.join("*"))
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write_term(f, c, *e, &[], None)?;
        }
        Ok(())
    }
}
