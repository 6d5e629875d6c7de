//! Truncated transversely formal series `Σ f_K(x) z^K`, `|K| ≤ d`, with
//! Laurent polynomial coefficients.
//!
//! A series lives in `O[z]/𝔪^{d+1}` where `𝔪 = ⟨z₁,…,zₙ⟩`. Optionally the
//! `x`-support is also capped from above (`x_cap`); products then drop
//! every `xᵉ` with `e > x_cap`. That cap is only a ring quotient for Taylor
//! data and is used by the normalization loop, which never differentiates
//! in `x`.

mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::coeff::{laurent_write_term, Coeff, GaussianRational, LaurentPoly};
use crate::error::{Error, Result};

pub use monomial::{grlex_cmp, grlex_compare, VectorMonomialIndex, ZExp};

/// Arity and truncation data shared by every operand of an operation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Shape {
    pub n: usize,
    pub degree_cap: u32,
    pub x_cap: Option<i32>,
}

impl Shape {
    pub fn new(n: usize, degree_cap: u32) -> Self {
        Shape {
            n,
            degree_cap,
            x_cap: None,
        }
    }

    pub fn with_x_cap(self, x_cap: Option<i32>) -> Self {
        Shape { x_cap, ..self }
    }

    pub(crate) fn check(&self, other: &Shape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct TransverseSeries<C = GaussianRational> {
    shape: Shape,
    terms: BTreeMap<ZExp, LaurentPoly<C>>,
}

impl<C: Coeff> TransverseSeries<C> {
    pub fn zero(shape: Shape) -> Self {
        TransverseSeries {
            shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(shape: Shape) -> Self {
        Self::from_laurent(shape, LaurentPoly::one())
    }

    pub fn constant(shape: Shape, c: C) -> Self {
        Self::from_laurent(shape, LaurentPoly::constant(c))
    }

    /// A function of `x` alone.
    pub fn from_laurent(shape: Shape, f: LaurentPoly<C>) -> Self {
        Self::monomial(shape, ZExp::zero(shape.n), f)
    }

    /// The coordinate function `x`.
    pub fn x(shape: Shape) -> Self {
        Self::from_laurent(shape, LaurentPoly::x())
    }

    /// The coordinate function `zᵢ` (zero-based).
    pub fn var(shape: Shape, i: usize) -> Self {
        Self::monomial(shape, ZExp::unit(shape.n, i), LaurentPoly::one())
    }

    /// `f(x)·z^K`, reduced by the caps.
    pub fn monomial(shape: Shape, exp: ZExp, f: LaurentPoly<C>) -> Self {
        let mut s = Self::zero(shape);
        s.add_laurent(exp, &f);
        s
    }

    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (ZExp, LaurentPoly<C>)>) -> Self {
        let mut s = Self::zero(shape);
        for (e, f) in terms {
            s.add_laurent(e, &f);
        }
        s
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn degree_cap(&self) -> u32 {
        self.shape.degree_cap
    }

    pub fn x_cap(&self) -> Option<i32> {
        self.shape.x_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored `z`-monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order of `K`.
    pub fn terms(&self) -> impl Iterator<Item = (&ZExp, &LaurentPoly<C>)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &ZExp) -> LaurentPoly<C> {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    fn admits(&self, exp: &ZExp) -> bool {
        exp.degree() <= self.shape.degree_cap
    }

    /// Adds `f·z^exp` in place, honoring both caps.
    pub(crate) fn add_laurent(&mut self, exp: ZExp, f: &LaurentPoly<C>) {
        debug_assert_eq!(exp.n(), self.shape.n);
        if !self.admits(&exp) || f.is_zero() {
            return;
        }
        let f = match self.shape.x_cap {
            Some(cap) => f.truncate_above(cap),
            None => f.clone(),
        };
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v = v.add(&f);
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, f);
            }
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.shape.check(&rhs.shape)?;
        let mut out = self.clone();
        for (e, f) in &rhs.terms {
            out.add_laurent(e.clone(), f);
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.shape.check(&rhs.shape)?;
        let mut out = self.clone();
        for (e, f) in &rhs.terms {
            out.add_laurent(e.clone(), &f.neg());
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.shape.check(&rhs.shape)?;
        let cap = self.shape.degree_cap;
        let mut out = Self::zero(self.shape);
        for (ea, fa) in &self.terms {
            let da = ea.degree();
            for (eb, fb) in &rhs.terms {
                if da + eb.degree() > cap {
                    // Terms are sorted by degree.
                    break;
                }
                let prod = fa.mul_capped(fb, self.shape.x_cap);
                out.add_laurent(ea.add(eb), &prod);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.shape);
        for (e, f) in &self.terms {
            out.add_laurent(e.clone(), &f.scale(c));
        }
        out
    }

    /// Product with a function of `x`.
    pub fn mul_laurent(&self, g: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero(self.shape);
        for (e, f) in &self.terms {
            out.add_laurent(e.clone(), &f.mul_capped(g, self.shape.x_cap));
        }
        out
    }

    /// `∂/∂zᵢ`.
    pub fn d_dz(&self, i: usize) -> Self {
        let mut out = Self::zero(self.shape);
        for (e, f) in &self.terms {
            if let Some(lower) = e.lower(i) {
                out.add_laurent(lower, &f.scale(&C::from_i64(e.get(i) as i64)));
            }
        }
        out
    }

    /// `∂/∂x`.
    pub fn d_dx(&self) -> Self {
        let mut out = Self::zero(self.shape);
        for (e, f) in &self.terms {
            out.add_laurent(e.clone(), &f.derivative());
        }
        out
    }

    /// `x·∂/∂x`.
    pub fn euler_x(&self) -> Self {
        let mut out = Self::zero(self.shape);
        for (e, f) in &self.terms {
            out.add_laurent(e.clone(), &f.euler());
        }
        out
    }

    /// 𝔪-adic order: smallest `|K|` with a nonzero coefficient; `None` for
    /// the zero series (order infinity).
    pub fn madic_order(&self) -> Option<u32> {
        self.terms.keys().next().map(ZExp::degree)
    }

    /// True iff the series lies in `𝔪^k`.
    pub fn in_power(&self, k: u32) -> bool {
        self.madic_order().is_none_or(|o| o >= k)
    }

    /// True iff every coefficient is Taylor (no negative `x` exponent).
    pub fn is_taylor(&self) -> bool {
        self.terms.values().all(LaurentPoly::is_taylor)
    }

    /// Terms of total `z`-degree exactly `deg`.
    pub fn homogeneous(&self, deg: u32) -> Self {
        TransverseSeries {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == deg)
                .map(|(e, f)| (e.clone(), f.clone()))
                .collect(),
        }
    }

    /// Terms of total `z`-degree at least `deg`.
    pub fn tail_from(&self, deg: u32) -> Self {
        TransverseSeries {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() >= deg)
                .map(|(e, f)| (e.clone(), f.clone()))
                .collect(),
        }
    }

    /// Re-reduce under a new shape with the same `n` (the bonding map when
    /// lowering `degree_cap`).
    pub fn reshape(&self, shape: Shape) -> Result<Self> {
        if shape.n != self.shape.n {
            return Err(Error::ShapeMismatch(format!(
                "cannot reshape {} variables into {}",
                self.shape.n, shape.n
            )));
        }
        Ok(Self::from_terms(
            shape,
            self.terms.iter().map(|(e, f)| (e.clone(), f.clone())),
        ))
    }

    /// Lower the `z`-degree cap to `d` (the bonding map `J^(i) → J^(d)`).
    pub fn truncate(&self, d: u32) -> Self {
        self.reshape(Shape {
            degree_cap: d.min(self.shape.degree_cap),
            ..self.shape
        })
        .expect("same arity")
    }

    /// Coefficients as a map `K ↦ f_K(x₀)` after evaluating at `x = x₀`.
    pub fn eval_x(&self, x0: Complex64) -> Vec<(ZExp, Complex64)> {
        self.terms
            .iter()
            .map(|(e, f)| (e.clone(), f.eval(x0)))
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TransverseSeries<D> {
        TransverseSeries::from_terms(
            self.shape,
            self.terms.iter().map(|(e, p)| (e.clone(), p.map_coeffs(&f))),
        )
    }

    pub fn to_complex(&self) -> TransverseSeries<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Canonical text of every term, each followed by `tail` (used by the
    /// vector field printer).
    pub(crate) fn write_terms(
        &self,
        f: &mut impl fmt::Write,
        tail: Option<&str>,
        first: &mut bool,
    ) -> fmt::Result {
        for (e, p) in &self.terms {
            for (xe, c) in p.terms() {
                if !*first {
                    write!(f, " + ")?;
                }
                *first = false;
                laurent_write_term(f, c, xe, e.as_slice(), tail)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Display for TransverseSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        self.write_terms(f, None, &mut first)
    }
}

impl<'a, C: Coeff> Add<&'a TransverseSeries<C>> for &'a TransverseSeries<C> {
    type Output = TransverseSeries<C>;
    /// Panics on a shape mismatch; see [`TransverseSeries::try_add`].
    fn add(self, rhs: &'a TransverseSeries<C>) -> TransverseSeries<C> {
        self.try_add(rhs).expect("series shapes must match")
    }
}

impl<'a, C: Coeff> Sub<&'a TransverseSeries<C>> for &'a TransverseSeries<C> {
    type Output = TransverseSeries<C>;
    fn sub(self, rhs: &'a TransverseSeries<C>) -> TransverseSeries<C> {
        self.try_sub(rhs).expect("series shapes must match")
    }
}

impl<'a, C: Coeff> Mul<&'a TransverseSeries<C>> for &'a TransverseSeries<C> {
    type Output = TransverseSeries<C>;
    fn mul(self, rhs: &'a TransverseSeries<C>) -> TransverseSeries<C> {
        self.try_mul(rhs).expect("series shapes must match")
    }
}

impl<C: Coeff> Neg for &TransverseSeries<C> {
    type Output = TransverseSeries<C>;
    fn neg(self) -> TransverseSeries<C> {
        TransverseSeries {
            shape: self.shape,
            terms: self.terms.iter().map(|(e, f)| (e.clone(), f.neg())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    type G = GaussianRational;
    type Ts = TransverseSeries<G>;

    fn shape(n: usize, d: u32) -> Shape {
        Shape::new(n, d)
    }

    #[test]
    fn square_truncated_away() {
        let s = shape(1, 1);
        let z = Ts::var(s, 0);
        assert!((&z * &z).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let s = shape(1, 3);
        let one = Ts::one(s);
        let z = Ts::var(s, 0);
        let prod = &(&one + &z) * &(&one - &z);
        assert_eq!(prod, &one - &(&z * &z));
    }

    #[test]
    fn additive_identity() {
        let s = shape(2, 3);
        let f = &Ts::var(s, 0) + &Ts::x(s);
        assert_eq!(&f + &Ts::zero(s), f);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Ts::var(shape(2, 3), 0);
        let b = Ts::var(shape(2, 4), 0);
        assert!(matches!(a.try_mul(&b), Err(Error::ShapeMismatch(_))));
        let c = Ts::var(shape(3, 3), 0);
        assert!(matches!(a.try_add(&c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn madic_orders() {
        let s = shape(3, 4);
        let z = |i| Ts::var(s, i);
        let f = &(&z(0) * &z(1)) + &(&(&z(2) * &z(2)) * &z(2));
        assert_eq!(f.madic_order(), Some(2));
        assert_eq!(Ts::zero(s).madic_order(), None);
        let g = &Ts::constant(s, G::from_integer(3)) + &z(0);
        assert_eq!(g.madic_order(), Some(0));
    }

    #[test]
    fn taylor_predicate() {
        let s = shape(2, 3);
        let xinv = Ts::from_laurent(s, LaurentPoly::monomial(G::one(), -1));
        assert!(!(&xinv * &Ts::var(s, 0)).is_taylor());
        let z2 = Ts::var(s, 1);
        assert!((&(&Ts::x(s) * &Ts::var(s, 0)) + &(&z2 * &z2)).is_taylor());
        assert!(Ts::zero(s).is_taylor());
    }

    #[test]
    fn canonical_text() {
        let s = shape(2, 4);
        let coef: G = "1/2+1/3*i".parse().unwrap();
        let t = Ts::monomial(
            s,
            ZExp::new(vec![2, 1]),
            LaurentPoly::monomial(coef, -2),
        );
        assert_eq!(t.to_string(), "(1/2+1/3*i)*x^-2*z1^2*z2");
        let u = &t + &Ts::var(s, 1);
        assert_eq!(u.to_string(), "z2 + (1/2+1/3*i)*x^-2*z1^2*z2");
    }

    #[test]
    fn x_cap_truncates_products() {
        let s = shape(1, 2).with_x_cap(Some(2));
        let x = Ts::x(s);
        let x2 = &x * &x;
        assert!(!x2.is_zero());
        assert!((&x2 * &x).is_zero());
    }
}
