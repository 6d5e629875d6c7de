//! Exact elements of ℚ[i].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A Gaussian rational `re + im·i` with exact rational parts.
///
/// Both parts are kept in lowest terms with positive denominators, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integer(v: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    /// `num/den`, real. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// `re_num/re_den + (im_num/im_den)·i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Integer value, if this is a real integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    /// Integer value as `i64`, if this is a real integer that fits.
    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| v.to_i64())
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianRational::from_integer(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        GaussianRational::real(v)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on a zero divisor; use [`GaussianRational::checked_div`] to
    /// get an error instead.
    fn div(self, rhs: &'a GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($imp:ident, $method:ident) => {
        impl $imp<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &'a GaussianRational) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if (-im).is_one() {
        write!(f, "-i")
    } else {
        fmt_rational(f, im)?;
        write!(f, "*i")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(f, &self.re),
            (true, false) => fmt_imag(f, &self.im),
            (false, false) => {
                fmt_rational(f, &self.re)?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                fmt_imag(f, &self.im)
            }
        }
    }
}

/// Scans the coefficient syntax `a`, `a/b`, `a/b*i`, `a/b+c/d*i` (signs
/// optional, `i` alone allowed, whitespace ignored).
///
/// Returns the value and the number of bytes consumed so callers can embed
/// it. Column numbers in errors are 1-based offsets into `text`.
pub(crate) fn scan_gaussian(text: &str) -> Result<(GaussianRational, usize)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut value = GaussianRational::zero();
    let mut terms = 0;

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    loop {
        skip_ws(&mut pos);
        let mut negative = false;
        let sign_at = pos;
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            negative = bytes[pos] == b'-';
            pos += 1;
            skip_ws(&mut pos);
        } else if terms > 0 {
            break;
        }
        if pos >= bytes.len() {
            if terms > 0 && sign_at < pos {
                return Err(Error::parse(1, pos + 1, "expected a number after sign"));
            }
            if terms == 0 {
                return Err(Error::parse(1, pos + 1, "expected a coefficient"));
            }
            break;
        }

        let mut magnitude: Option<BigRational> = None;
        if bytes[pos].is_ascii_digit() {
            let (num, used) = scan_digits(&bytes[pos..]);
            pos += used;
            let mut r = BigRational::from_integer(num);
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                skip_ws(&mut pos);
                if pos >= bytes.len() || !bytes[pos].is_ascii_digit() {
                    return Err(Error::parse(1, pos + 1, "expected a denominator"));
                }
                let (den, used) = scan_digits(&bytes[pos..]);
                if den.is_zero() {
                    return Err(Error::parse(1, pos + 1, "zero denominator"));
                }
                pos += used;
                r = BigRational::new(r.to_integer(), den);
            }
            magnitude = Some(r);
            skip_ws(&mut pos);
        }

        let mut imaginary = false;
        let mut look = pos;
        if magnitude.is_some() && look < bytes.len() && bytes[look] == b'*' {
            look += 1;
            while look < bytes.len() && bytes[look].is_ascii_whitespace() {
                look += 1;
            }
        }
        if look < bytes.len() && bytes[look] == b'i' && !is_ident_byte(bytes.get(look + 1)) {
            imaginary = true;
            pos = look + 1;
        }

        let magnitude = match magnitude {
            Some(m) => m,
            None if imaginary => BigRational::one(),
            None => return Err(Error::parse(1, pos + 1, "expected a number or `i`")),
        };
        let magnitude = if negative { -magnitude } else { magnitude };
        if imaginary {
            value.im += magnitude;
        } else {
            value.re += magnitude;
        }
        terms += 1;
    }
    Ok((value, pos))
}

fn is_ident_byte(b: Option<&u8>) -> bool {
    matches!(b, Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
}

fn scan_digits(bytes: &[u8]) -> (BigInt, usize) {
    let end = bytes
        .iter()
        .position(|b| !b.is_ascii_digit())
        .unwrap_or(bytes.len());
    let digits = std::str::from_utf8(&bytes[..end]).expect("ascii digits");
    (digits.parse().expect("digit run parses"), end)
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (value, used) = scan_gaussian(s)?;
        if s[used..].trim().is_empty() {
            Ok(value)
        } else {
            let column = used + (s[used..].len() - s[used..].trim_start().len()) + 1;
            Err(Error::parse(1, column, "unexpected trailing input"))
        }
    }
}
