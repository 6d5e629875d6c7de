use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{decide_ntnr, EigenData};
use crate::coeff::GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Class2 {
    Linearizable,
    ClassifiedByHolonomy,
}

/// Surfaces: linearizable iff `λ ∉ ℝ_{≤0}`.
pub fn classify_dim2(lambda: &GaussianRational) -> Class2 {
    if !lambda.im().is_zero() || lambda.re().is_positive() {
        Class2::Linearizable
    } else {
        Class2::ClassifiedByHolonomy
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Case3 {
    Poincare,
    SiegelNonreal,
    SiegelRealClassified,
    SiegelReal3a,
    SiegelReal3b,
}

impl Case3 {
    pub fn tag(self) -> &'static str {
        match self {
            Case3::Poincare => "Poincare",
            Case3::SiegelNonreal => "SiegelNonreal",
            Case3::SiegelRealClassified => "SiegelRealClassified",
            Case3::SiegelReal3a => "SiegelReal3a",
            Case3::SiegelReal3b => "SiegelReal3b",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness3 {
    /// `p·λ = μ + q` with `p, q ≥ 1`.
    Resonance { p: i64, q: i64 },
    /// `p₁·λ + p₂·μ = q` with `p₁ ≥ 1`, `p₂ ≥ 0`, `q ≥ 1`, i.e.
    /// `λ ∈ ℚ_{>0} − μ·ℚ_{≥0}`.
    Cone { p1: i64, p2: i64, q: i64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification3 {
    pub case: Case3,
    pub witness: Option<Witness3>,
    /// The witness refers to the pair with `λ` and `μ` exchanged.
    pub swapped: bool,
}

type Point = (BigRational, BigRational);

fn cross(a: &Point, b: &Point) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn dot(a: &Point, b: &Point) -> BigRational {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// `0` lies on the closed segment `[a, b]`.
fn origin_on_segment(a: &Point, b: &Point) -> bool {
    cross(a, b).is_zero() && !dot(a, b).is_positive()
}

/// Exact test `0 ∈ hull{p₀, p₁, p₂}`, boundary included.
pub(crate) fn origin_in_hull(pts: &[Point; 3]) -> bool {
    let sub = |a: &Point, b: &Point| (&a.0 - &b.0, &a.1 - &b.1);
    let area = cross(&sub(&pts[1], &pts[0]), &sub(&pts[2], &pts[0]));
    if area.is_zero() {
        return (0..3).any(|i| origin_on_segment(&pts[i], &pts[(i + 1) % 3]));
    }
    let o: Vec<BigRational> = (0..3).map(|i| cross(&pts[i], &pts[(i + 1) % 3])).collect();
    o.iter().all(|v| !v.is_negative()) || o.iter().all(|v| !v.is_positive())
}

fn point(v: &GaussianRational) -> Point {
    (v.re().clone(), v.im().clone())
}

/// Smallest `p ≥ 1` (then `q`) with `p·l = m + q`, `q ∈ ℤ_{≥1}`.
fn shifted_multiple(l: &BigRational, m: &BigRational) -> Option<(i64, i64)> {
    let period = l.denom().to_i64()?;
    let value = |p: i64| l * BigRational::from_integer(BigInt::from(p)) - m;
    let p0 = (1..=period).find(|&p| value(p).is_integer())?;
    let mut p = p0;
    if l.is_positive() {
        let v = value(p0);
        if v < BigRational::one() {
            // Each period adds the numerator of l.
            let step = l.numer();
            let deficit = (BigRational::one() - v).to_integer();
            let periods = (&deficit + step - BigInt::one()) / step;
            p += periods.to_i64()? * period;
            if value(p) < BigRational::one() {
                p += period;
            }
        }
    }
    let v = value(p);
    (v >= BigRational::one()).then(|| Some((p, v.to_integer().to_i64()?))).flatten()
}

/// Poincaré, non-real Siegel, or real Siegel (classified, 3a, 3b) for
/// eigenvalues `1, λ, μ`.
pub fn classify_dim3(lambda: &GaussianRational, mu: &GaussianRational) -> Classification3 {
    let one = GaussianRational::one();
    let siegel = origin_in_hull(&[point(&one), point(lambda), point(mu)]);
    let plain = |case| Classification3 {
        case,
        witness: None,
        swapped: false,
    };
    if !siegel {
        return plain(Case3::Poincare);
    }
    if !lambda.is_real() || !mu.is_real() {
        return plain(Case3::SiegelNonreal);
    }
    let eigen = EigenData::new(vec![lambda.clone(), mu.clone()]).expect("two eigenvalues");
    if decide_ntnr(&eigen).holds {
        return plain(Case3::SiegelRealClassified);
    }
    let (l, m) = (lambda.re(), mu.re());
    if !l.is_positive() && !m.is_positive() {
        // Order as m' < l' ≤ 0.
        let swapped = l < m;
        let (big, small) = if swapped { (m, l) } else { (l, m) };
        let witness = shifted_multiple(big, small).map(|(p, q)| Witness3::Resonance { p, q });
        return Classification3 {
            case: Case3::SiegelReal3a,
            witness,
            swapped,
        };
    }
    // Exactly one is positive in the real Siegel case; order as m' ≤ 0 < l'.
    let swapped = !l.is_positive();
    let (pos, other) = if swapped { (m, l) } else { (l, m) };
    let witness = match shifted_multiple(pos, other) {
        Some((p, q)) => Witness3::Resonance { p, q },
        None => Witness3::Cone {
            p1: pos.denom().to_i64().unwrap_or(i64::MAX),
            p2: 0,
            q: pos.numer().to_i64().unwrap_or(i64::MAX),
        },
    };
    Classification3 {
        case: Case3::SiegelReal3b,
        witness: Some(witness),
        swapped,
    }
}
