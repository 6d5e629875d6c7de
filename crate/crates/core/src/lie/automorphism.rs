use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use super::matrix::{self, LaurentMatrix};
use crate::coeff::{Coeff, GaussianRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::series::{Shape, TransverseSeries, ZExp};

/// A substitution endomorphism `f(x, z) ↦ f(img_x, img_z)` of the truncated
/// ring.
///
/// Composition is composition of algebra maps: `(Φ∘Ψ)(f) = Φ(Ψ(f))`.
#[derive(Clone, PartialEq, Debug)]
pub struct Automorphism<C = GaussianRational> {
    shape: Shape,
    img_x: TransverseSeries<C>,
    img_z: Vec<TransverseSeries<C>>,
}

impl<C: Coeff> Automorphism<C> {
    /// Requires `img_x − x ∈ 𝔪` and every `img_zᵢ ∈ 𝔪`, so that
    /// substitution is defined on truncations.
    pub fn new(img_x: TransverseSeries<C>, img_z: Vec<TransverseSeries<C>>) -> Result<Self> {
        let shape = img_x.shape();
        if img_z.len() != shape.n {
            return Err(Error::ShapeMismatch(format!(
                "{} z-images for n = {}",
                img_z.len(),
                shape.n
            )));
        }
        for z in &img_z {
            shape.check(&z.shape())?;
            if !z.in_power(1) {
                return Err(Error::Precondition(format!(
                    "z-image {z} has a term of degree 0"
                )));
            }
        }
        if !img_x.try_sub(&TransverseSeries::x(shape))?.in_power(1) {
            return Err(Error::Precondition(format!(
                "x-image {img_x} differs from x modulo the z-ideal"
            )));
        }
        Ok(Automorphism { shape, img_x, img_z })
    }

    pub fn identity(shape: Shape) -> Self {
        Automorphism {
            shape,
            img_x: TransverseSeries::x(shape),
            img_z: (0..shape.n).map(|i| TransverseSeries::var(shape, i)).collect(),
        }
    }

    /// `zᵢ ↦ Σ_k m[i][k] z_k`, `x ↦ x`.
    pub fn linear(shape: Shape, m: &[Vec<C>]) -> Result<Self> {
        let lm: LaurentMatrix<C> = m
            .iter()
            .map(|row| row.iter().cloned().map(LaurentPoly::constant).collect())
            .collect();
        Self::from_linear_part(shape, &lm)
    }

    pub(crate) fn from_linear_part(shape: Shape, m: &LaurentMatrix<C>) -> Result<Self> {
        if m.len() != shape.n || m.iter().any(|r| r.len() != shape.n) {
            return Err(Error::ShapeMismatch(format!("matrix is not {0}x{0}", shape.n)));
        }
        let img_z = m
            .iter()
            .map(|row| {
                TransverseSeries::from_terms(
                    shape,
                    row.iter()
                        .enumerate()
                        .map(|(k, p)| (ZExp::unit(shape.n, k), p.clone())),
                )
            })
            .collect();
        Ok(Automorphism {
            shape,
            img_x: TransverseSeries::x(shape),
            img_z,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn img_x(&self) -> &TransverseSeries<C> {
        &self.img_x
    }

    pub fn img_z(&self, i: usize) -> &TransverseSeries<C> {
        &self.img_z[i]
    }

    pub fn img_z_all(&self) -> &[TransverseSeries<C>] {
        &self.img_z
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.shape)
    }

    /// Entry `[i][k]` is the coefficient of `z_k` in `img_zᵢ`.
    pub fn linear_part(&self) -> LaurentMatrix<C> {
        let n = self.shape.n;
        self.img_z
            .iter()
            .map(|zi| (0..n).map(|k| zi.coeff(&ZExp::unit(n, k))).collect())
            .collect()
    }

    /// `img_x = x` and an invertible constant `z`-linear part.
    pub fn is_x_normalized(&self) -> bool {
        let lin = self.linear_part();
        self.img_x == TransverseSeries::x(self.shape)
            && matrix::is_constant(&lin)
            && matrix::inverse(&lin, None).is_some()
    }

    /// Largest `k` with `img_x − x ∈ 𝔪^k` and `img_z − z ∈ 𝔪^{k+1}`;
    /// `None` for the identity (tangent to every order). Returns `Some(0)`
    /// when the map is not tangent to the identity at all.
    pub fn tangent_order(&self) -> Option<u32> {
        let dx = &self.img_x - &TransverseSeries::x(self.shape);
        let mut order: Option<u32> = dx.madic_order();
        for (i, zi) in self.img_z.iter().enumerate() {
            let dz = zi - &TransverseSeries::var(self.shape, i);
            if let Some(o) = dz.madic_order() {
                let k = o.saturating_sub(1);
                order = Some(order.map_or(k, |cur| cur.min(k)));
            }
        }
        order
    }

    /// `Φ(f) = f(img_x, img_z)`.
    pub fn apply(&self, f: &TransverseSeries<C>) -> Result<TransverseSeries<C>> {
        self.shape.check(&f.shape())?;
        Substitution::new(self)?.eval(f)
    }

    /// `self ∘ other` as algebra maps.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        let mut sub = Substitution::new(self)?;
        Ok(Automorphism {
            shape: self.shape,
            img_x: sub.eval(&other.img_x)?,
            img_z: other
                .img_z
                .iter()
                .map(|z| sub.eval(z))
                .collect::<Result<_>>()?,
        })
    }

    /// Compositional inverse at the truncation cap.
    ///
    /// With `A` the linear part, `T = A⁻¹∘Φ` is tangent to the identity,
    /// so `Φ⁻¹ = exp(−log T)∘A⁻¹`.
    pub fn invert(&self) -> Result<Self> {
        let shape = self.shape;
        let b = matrix::inverse(&self.linear_part(), shape.x_cap)
            .ok_or_else(|| Error::NotInvertible(format!("z-linear part of {self}")))?;
        let a_inv = Self::from_linear_part(shape, &b)?;
        let t = a_inv.compose(self)?;
        if t.is_identity() {
            return Ok(a_inv);
        }
        let z = super::log(&t)?;
        super::exp(&-&z)?.compose(&a_inv)
    }

    /// Lower the `z`-degree cap.
    pub fn truncate(&self, d: u32) -> Self {
        let img_x = self.img_x.truncate(d);
        Automorphism {
            shape: img_x.shape(),
            img_x,
            img_z: self.img_z.iter().map(|z| z.truncate(d)).collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Automorphism<D> {
        Automorphism {
            shape: self.shape,
            img_x: self.img_x.map_coeffs(&f),
            img_z: self.img_z.iter().map(|z| z.map_coeffs(&f)).collect(),
        }
    }

    pub fn to_complex(&self) -> Automorphism<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }
}

/// Cached substitution: powers of the `z`-images and of `h = img_x − x`.
pub(crate) struct Substitution<'a, C: Coeff> {
    phi: &'a Automorphism<C>,
    z_powers: HashMap<ZExp, TransverseSeries<C>>,
    h_powers: Vec<TransverseSeries<C>>,
}

impl<'a, C: Coeff> Substitution<'a, C> {
    pub(crate) fn new(phi: &'a Automorphism<C>) -> Result<Self> {
        let shape = phi.shape;
        let h = &phi.img_x - &TransverseSeries::x(shape);
        let mut h_powers = vec![TransverseSeries::one(shape)];
        if !h.is_zero() {
            if shape.x_cap.is_some() {
                return Err(Error::Precondition(
                    "substituting x under an x cap is not a ring map".into(),
                ));
            }
            let mut p = h.clone();
            while !p.is_zero() {
                h_powers.push(p.clone());
                p = &p * &h;
            }
        }
        Ok(Substitution {
            phi,
            z_powers: HashMap::new(),
            h_powers,
        })
    }

    fn z_power(&mut self, k: &ZExp) -> TransverseSeries<C> {
        if let Some(p) = self.z_powers.get(k) {
            return p.clone();
        }
        let shape = self.phi.shape;
        let value = match (0..k.n()).find(|&i| k.get(i) > 0) {
            None => TransverseSeries::one(shape),
            Some(i) => {
                let lower = k.lower(i).expect("positive entry");
                let prev = self.z_power(&lower);
                &prev * &self.phi.img_z[i]
            }
        };
        self.z_powers.insert(k.clone(), value.clone());
        value
    }

    /// `Σ_K f_K(x + h)·Φ(z)^K`, grouped by Taylor order so that each power
    /// of `h` costs one series product.
    pub(crate) fn eval(&mut self, f: &TransverseSeries<C>) -> Result<TransverseSeries<C>> {
        let shape = self.phi.shape;
        shape.check(&f.shape())?;
        let orders = self.h_powers.len();
        let mut by_order = vec![TransverseSeries::zero(shape); orders];
        for (k, fk) in f.terms() {
            let zk = self.z_power(k);
            if zk.is_zero() {
                continue;
            }
            if orders == 1 {
                by_order[0] = &by_order[0] + &zk.mul_laurent(fk);
                continue;
            }
            for (m, g) in fk.taylor_coefficients(orders).iter().enumerate() {
                if !g.is_zero() {
                    by_order[m] = &by_order[m] + &zk.mul_laurent(g);
                }
            }
        }
        let mut out = TransverseSeries::zero(shape);
        for (m, s) in by_order.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            out = if m == 0 { &out + s } else { &out + &(&self.h_powers[m] * s) };
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for Automorphism<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}", self.img_x)?;
        for (i, z) in self.img_z.iter().enumerate() {
            write!(f, "; z{} = {}", i + 1, z)?;
        }
        Ok(())
    }
}
