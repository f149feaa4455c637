//! Gaussian rationals: exact scalars `a + b i` with `a, b` rational.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number with arbitrary precision.
pub type Rational = BigRational;

/// Builds a rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gauss { re, im: Rational::zero() }
    }

    pub fn imag(im: Rational) -> Self {
        Gauss { re: Rational::zero(), im }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss::real(int(n))
    }

    /// `(re_num/re_den) + (im_num/im_den) i`, handy in tests and fixtures.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Gauss::new(rat(re_num, re_den), rat(im_num, im_den))
    }

    pub fn i() -> Self {
        Gauss::imag(Rational::one())
    }

    pub fn zero() -> Self {
        Gauss::default()
    }

    pub fn one() -> Self {
        Gauss::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let n = self.norm_sqr();
        Gauss::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Gauss::new(&self.re * r, &self.im * r)
    }

    /// `i * self`
    pub fn mul_i(&self) -> Self {
        Gauss::new(-self.im.clone(), self.re.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Gauss::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for Gauss {
    fn from(n: i64) -> Self {
        Gauss::from_int(n)
    }
}

impl From<Rational> for Gauss {
    fn from(r: Rational) -> Self {
        Gauss::real(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Gauss> for &'a Gauss {
            type Output = Gauss;
            fn $method(self, rhs: &'b Gauss) -> Gauss {
                let f: fn(&Gauss, &Gauss) -> Gauss = $body;
                f(self, rhs)
            }
        }
        impl $tr<Gauss> for Gauss {
            type Output = Gauss;
            fn $method(self, rhs: Gauss) -> Gauss {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Gauss> for Gauss {
            type Output = Gauss;
            fn $method(self, rhs: &'b Gauss) -> Gauss {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Gauss> for &'a Gauss {
            type Output = Gauss;
            fn $method(self, rhs: Gauss) -> Gauss {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Gauss::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| Gauss::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return Gauss::real(&a.re * &b.re);
    }
    Gauss::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
});
forward_binop!(Div, div, |a, b| {
    if b.im.is_zero() {
        assert!(!b.re.is_zero(), "division by zero Gaussian rational");
        return Gauss::new(&a.re / &b.re, &a.im / &b.re);
    }
    a * &b.inv()
});

impl AddAssign<&Gauss> for Gauss {
    fn add_assign(&mut self, rhs: &Gauss) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<Gauss> for Gauss {
    fn add_assign(&mut self, rhs: Gauss) {
        *self += &rhs;
    }
}

impl SubAssign<&Gauss> for Gauss {
    fn sub_assign(&mut self, rhs: &Gauss) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Gauss> for Gauss {
    fn mul_assign(&mut self, rhs: &Gauss) {
        *self = &*self * rhs;
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-self.re, -self.im)
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gauss {
    /// `3/2`, `-1/2i`, `1+2i`; the imaginary unit suffixes its rational part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p` or `p/q` with `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
    let den = match den {
        Some(d) => {
            let d = d.trim();
            if d.starts_with(['-', '+']) {
                return Err(err());
            }
            BigInt::from_str(d).map_err(|_| err())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}
