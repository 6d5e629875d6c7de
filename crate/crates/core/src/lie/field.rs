use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::matrix::{self, LaurentMatrix};
use crate::coeff::{Coeff, GaussianRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::series::{Shape, TransverseSeries, VectorMonomialIndex, ZExp};

/// A derivation `a ∂/∂x + Σ bᵢ ∂/∂zᵢ` of the truncated ring.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField<C = GaussianRational> {
    shape: Shape,
    a: TransverseSeries<C>,
    b: Vec<TransverseSeries<C>>,
}

impl<C: Coeff> VectorField<C> {
    pub fn new(a: TransverseSeries<C>, b: Vec<TransverseSeries<C>>) -> Result<Self> {
        let shape = a.shape();
        if b.len() != shape.n {
            return Err(Error::ShapeMismatch(format!(
                "{} z-components for n = {}",
                b.len(),
                shape.n
            )));
        }
        for bi in &b {
            shape.check(&bi.shape())?;
        }
        Ok(VectorField { shape, a, b })
    }

    pub fn zero(shape: Shape) -> Self {
        VectorField {
            shape,
            a: TransverseSeries::zero(shape),
            b: vec![TransverseSeries::zero(shape); shape.n],
        }
    }

    /// `x ∂/∂x`.
    pub fn euler(shape: Shape) -> Self {
        VectorField {
            a: TransverseSeries::x(shape),
            ..Self::zero(shape)
        }
    }

    /// `L(μ) = Σ μᵢ zᵢ ∂/∂zᵢ`.
    pub fn diagonal(shape: Shape, mu: &[C]) -> Result<Self> {
        if mu.len() != shape.n {
            return Err(Error::ShapeMismatch(format!(
                "{} eigenvalues for n = {}",
                mu.len(),
                shape.n
            )));
        }
        let mut out = Self::zero(shape);
        for (i, m) in mu.iter().enumerate() {
            out.b[i] = TransverseSeries::var(shape, i).scale(m);
        }
        Ok(out)
    }

    /// The semisimple part `x ∂/∂x + L(μ)`.
    pub fn semisimple(shape: Shape, mu: &[C]) -> Result<Self> {
        let mut out = Self::diagonal(shape, mu)?;
        out.a = TransverseSeries::x(shape);
        Ok(out)
    }

    /// `f(x)·z^K·L(e_j)`, i.e. `f·z^{K+e_j} ∂/∂z_j`.
    pub fn monomial(shape: Shape, f: LaurentPoly<C>, index: &VectorMonomialIndex) -> Self {
        Self::z_term(shape, index.j(), index.component_exp(), f)
    }

    /// `f(x)·z^M ∂/∂z_j`.
    pub fn z_term(shape: Shape, j: usize, m: ZExp, f: LaurentPoly<C>) -> Self {
        let mut out = Self::zero(shape);
        out.b[j] = TransverseSeries::monomial(shape, m, f);
        out
    }

    /// `f(x)·z^M ∂/∂x`.
    pub fn x_term(shape: Shape, m: ZExp, f: LaurentPoly<C>) -> Self {
        let mut out = Self::zero(shape);
        out.a = TransverseSeries::monomial(shape, m, f);
        out
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

    /// Coefficient of `∂/∂x`.
    pub fn a(&self) -> &TransverseSeries<C> {
        &self.a
    }

    /// Coefficient of `∂/∂zᵢ` (zero-based).
    pub fn b(&self, i: usize) -> &TransverseSeries<C> {
        &self.b[i]
    }

    pub fn b_all(&self) -> &[TransverseSeries<C>] {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.iter().all(TransverseSeries::is_zero)
    }

    /// `X(f) = a ∂f/∂x + Σ bᵢ ∂f/∂zᵢ`.
    pub fn apply(&self, f: &TransverseSeries<C>) -> Result<TransverseSeries<C>> {
        self.shape.check(&f.shape())?;
        let mut out = if self.a.is_zero() {
            TransverseSeries::zero(self.shape)
        } else if self.a == TransverseSeries::x(self.shape) {
            f.euler_x()
        } else {
            self.a.try_mul(&f.d_dx())?
        };
        for (i, bi) in self.b.iter().enumerate() {
            if bi.is_zero() {
                continue;
            }
            let df = f.d_dz(i);
            if !df.is_zero() {
                out = out.try_add(&bi.try_mul(&df)?)?;
            }
        }
        Ok(out)
    }

    /// Lie bracket `[X, Y] = X∘Y − Y∘X`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        let comp = |p: &TransverseSeries<C>, q: &TransverseSeries<C>| -> Result<TransverseSeries<C>> {
            self.apply(q)?.try_sub(&other.apply(p)?)
        };
        Ok(VectorField {
            shape: self.shape,
            a: comp(&self.a, &other.a)?,
            b: self
                .b
                .iter()
                .zip(&other.b)
                .map(|(p, q)| comp(p, q))
                .collect::<Result<_>>()?,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        Ok(VectorField {
            shape: self.shape,
            a: self.a.try_add(&other.a)?,
            b: self
                .b
                .iter()
                .zip(&other.b)
                .map(|(p, q)| p.try_add(q))
                .collect::<Result<_>>()?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_components(|s| s.scale(c))
    }

    /// `f·X` for a function `f`.
    pub fn mul_fn(&self, f: &TransverseSeries<C>) -> Result<Self> {
        self.shape.check(&f.shape())?;
        Ok(self.map_components(|s| f * s))
    }

    fn map_components(&self, g: impl Fn(&TransverseSeries<C>) -> TransverseSeries<C>) -> Self {
        VectorField {
            shape: self.shape,
            a: g(&self.a),
            b: self.b.iter().map(&g).collect(),
        }
    }

    /// `a ∈ 𝔪^k` and every `bᵢ ∈ 𝔪^{k+1}`.
    pub fn is_k_flat(&self, k: u32) -> bool {
        self.a.in_power(k) && self.b.iter().all(|bi| bi.in_power(k + 1))
    }

    /// The `z`-linear part: entry `[i][k]` is the coefficient of `z_k` in `bᵢ`.
    pub fn linear_part(&self) -> LaurentMatrix<C> {
        let n = self.shape.n;
        self.b
            .iter()
            .map(|bi| (0..n).map(|k| bi.coeff(&ZExp::unit(n, k))).collect())
            .collect()
    }

    /// Nilpotency at the truncation cap.
    ///
    /// `X` must preserve 𝔪 with `a ∈ 𝔪`; the action on each graded piece
    /// is then induced by the linear part `B(x)`, so it suffices that `B`
    /// is a nilpotent matrix (modulo the `x` cap, when one is set).
    pub fn is_nilpotent(&self) -> bool {
        if !self.a.in_power(1) || !self.b.iter().all(|bi| bi.in_power(1)) {
            return false;
        }
        let n = self.shape.n;
        let lin = self.linear_part();
        let x_cap = self.shape.x_cap;
        if x_cap.is_some() && lin.iter().all(|r| r.iter().all(LaurentPoly::is_taylor)) {
            // x is nilpotent in the capped ring, so only B(0) matters.
            let b0: LaurentMatrix<C> = lin
                .iter()
                .map(|r| r.iter().map(|p| LaurentPoly::constant(p.coeff(0))).collect())
                .collect();
            return nilpotent_power(&b0, n, None);
        }
        nilpotent_power(&lin, n, x_cap)
    }

    /// `a = x`, constant linear part, no `z`-constant terms.
    pub fn is_x_normalized(&self) -> bool {
        if self.a != TransverseSeries::x(self.shape) {
            return false;
        }
        let n = self.shape.n;
        self.b.iter().all(|bi| {
            bi.in_power(1)
                && (0..n).all(|k| bi.coeff(&ZExp::unit(n, k)).is_constant())
        })
    }

    /// Lower the `z`-degree cap.
    pub fn truncate(&self, d: u32) -> Self {
        let out = self.map_components(|s| s.truncate(d));
        VectorField {
            shape: out.a.shape(),
            ..out
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> VectorField<D> {
        VectorField {
            shape: self.shape,
            a: self.a.map_coeffs(&f),
            b: self.b.iter().map(|s| s.map_coeffs(&f)).collect(),
        }
    }

    pub fn to_complex(&self) -> VectorField<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }
}

fn nilpotent_power<C: Coeff>(m: &LaurentMatrix<C>, n: usize, x_cap: Option<i32>) -> bool {
    let mut p = m.clone();
    for _ in 1..n {
        p = matrix::mul(&p, m, x_cap);
    }
    matrix::is_zero(&p)
}

impl<C: Coeff> fmt::Display for VectorField<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        self.a.write_terms(f, Some("dx"), &mut first)?;
        for (i, bi) in self.b.iter().enumerate() {
            bi.write_terms(f, Some(&format!("dz{}", i + 1)), &mut first)?;
        }
        Ok(())
    }
}

impl<'a, C: Coeff> Add<&'a VectorField<C>> for &'a VectorField<C> {
    type Output = VectorField<C>;
    /// Panics on a shape mismatch; see [`VectorField::try_add`].
    fn add(self, rhs: &'a VectorField<C>) -> VectorField<C> {
        self.try_add(rhs).expect("field shapes must match")
    }
}

impl<'a, C: Coeff> Sub<&'a VectorField<C>> for &'a VectorField<C> {
    type Output = VectorField<C>;
    fn sub(self, rhs: &'a VectorField<C>) -> VectorField<C> {
        self.try_sub(rhs).expect("field shapes must match")
    }
}

impl<C: Coeff> Neg for &VectorField<C> {
    type Output = VectorField<C>;
    fn neg(self) -> VectorField<C> {
        self.map_components(|s| -s)
    }
}
