//! Derivations and automorphisms of the truncated ring: bracket, exp/log,
//! pushforward and the exponential decomposition.

mod automorphism;
mod field;
pub mod matrix;

use crate::coeff::{inv_int, Coeff};
use crate::error::{Error, Result};
use crate::series::TransverseSeries;

pub use automorphism::Automorphism;
pub use field::VectorField;

/// Ceiling on the number of series terms summed by exp, log and Ad before
/// declaring the input non-nilpotent.
const MAX_SERIES_TERMS: usize = 4096;

/// Time-one exponential `exp X` of a nilpotent field.
pub fn exp<C: Coeff>(x: &VectorField<C>) -> Result<Automorphism<C>> {
    if !x.is_nilpotent() {
        return Err(Error::Precondition(format!("{x} is not nilpotent")));
    }
    let shape = x.shape();
    let img_x = exp_series(x, &TransverseSeries::x(shape))?;
    let img_z = (0..shape.n)
        .map(|i| exp_series(x, &TransverseSeries::var(shape, i)))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::new(img_x, img_z)
}

/// Time-`t` exponential `exp(tX)`.
pub fn exp_t<C: Coeff>(x: &VectorField<C>, t: &C) -> Result<Automorphism<C>> {
    exp(&x.scale(t))
}

/// `Σ_{k≥0} Xᵏ(f)/k!`, finite for nilpotent `X`.
fn exp_series<C: Coeff>(x: &VectorField<C>, f: &TransverseSeries<C>) -> Result<TransverseSeries<C>> {
    let mut sum = f.clone();
    let mut term = f.clone();
    for k in 1..MAX_SERIES_TERMS {
        term = x.apply(&term)?.scale(&inv_int::<C>(k as i64));
        if term.is_zero() {
            return Ok(sum);
        }
        sum = &sum + &term;
    }
    Err(Error::Precondition("exponential series did not terminate".into()))
}

/// `log Φ = Σ_{m≥1} (−1)^{m+1}/m · (Φ − id)^m`, read off on coordinates.
pub fn log<C: Coeff>(phi: &Automorphism<C>) -> Result<VectorField<C>> {
    if phi.tangent_order().is_some_and(|k| k < 1) {
        return Err(Error::Precondition(format!(
            "{phi} is not tangent to the identity"
        )));
    }
    let shape = phi.shape();
    let mut sub = automorphism::Substitution::new(phi)?;
    let mut component = |c: TransverseSeries<C>| -> Result<TransverseSeries<C>> {
        let mut sum = TransverseSeries::zero(shape);
        let mut u = c;
        for m in 1..MAX_SERIES_TERMS as i64 {
            u = sub.eval(&u)?.try_sub(&u)?;
            if u.is_zero() {
                return Ok(sum);
            }
            let w = inv_int::<C>(m);
            let w = if m % 2 == 0 { -w } else { w };
            sum = &sum + &u.scale(&w);
        }
        Err(Error::Precondition("logarithm series did not terminate".into()))
    };
    let a = component(TransverseSeries::x(shape))?;
    let b = (0..shape.n)
        .map(|i| component(TransverseSeries::var(shape, i)))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(a, b)
}

/// `Φ∘X∘Φ⁻¹` as a derivation.
pub fn pushforward<C: Coeff>(phi: &Automorphism<C>, x: &VectorField<C>) -> Result<VectorField<C>> {
    phi.shape().check(&x.shape())?;
    let psi = phi.invert()?;
    let mut sub = automorphism::Substitution::new(phi)?;
    let mut comp = |c: &TransverseSeries<C>| -> Result<TransverseSeries<C>> { sub.eval(&x.apply(c)?) };
    VectorField::new(
        comp(psi.img_x())?,
        psi.img_z_all().iter().map(&mut comp).collect::<Result<Vec<_>>>()?,
    )
}

/// `ad_Y X = [Y, X]`.
pub fn ad<C: Coeff>(y: &VectorField<C>, x: &VectorField<C>) -> Result<VectorField<C>> {
    y.bracket(x)
}

/// `Ad_Y X = Σ_k ad_Yᵏ X / k!`, which equals `pushforward(exp Y, X)`.
pub fn adjoint<C: Coeff>(y: &VectorField<C>, x: &VectorField<C>) -> Result<VectorField<C>> {
    let mut sum = x.clone();
    let mut term = x.clone();
    for k in 1..MAX_SERIES_TERMS {
        term = y.bracket(&term)?.scale(&inv_int::<C>(k as i64));
        if term.is_zero() {
            return Ok(sum);
        }
        sum = &sum + &term;
    }
    Err(Error::Precondition("adjoint series did not terminate".into()))
}

/// Splits an `x`-normalized `Φ` as `Φ = exp(Z) ∘ A` (algebra maps) with
/// `A` linear and `Z` 1-flat. As point maps this reads `A ∘ exp Z`.
pub fn exp_decomposition<C: Coeff>(phi: &Automorphism<C>) -> Result<(Automorphism<C>, VectorField<C>)> {
    if !phi.is_x_normalized() {
        return Err(Error::Precondition(format!("{phi} is not x-normalized")));
    }
    let a = Automorphism::from_linear_part(phi.shape(), &phi.linear_part())?;
    let z = log(&phi.compose(&a.invert()?)?)?;
    Ok((a, z))
}
