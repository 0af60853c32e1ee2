//! Exact rational numbers over arbitrary-precision integers.
//!
//! [`Rational`] is always kept in canonical form: the denominator is
//! positive and shares no factor with the numerator. Every coefficient the
//! crate produces lives in this type; floating point only appears when a
//! value is explicitly converted with [`Rational::to_f64`] or
//! [`Rational::to_dd`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::Dd;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as an exact rational (expected \"p\" or \"p/q\")")]
    Parse(String),
    #[error("{0} is not a finite float")]
    NonFinite(f64),
}

/// An exact ratio of arbitrary-precision integers in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, RationalError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        // BigRational::new reduces and normalises the sign onto the numerator.
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// `p/q` for machine integers. Panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::new(p, q).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Exact value of a finite binary float.
    pub fn from_f64(x: f64) -> Result<Self, RationalError> {
        BigRational::from_float(x)
            .map(Rational)
            .ok_or(RationalError::NonFinite(x))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    /// True when numerator and denominator are coprime and the denominator
    /// is positive.
    pub fn is_canonical(&self) -> bool {
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }

    /// Nearest `f64`, ties to even. Computed by one exact big-integer
    /// division, so there is no double rounding. Results below the normal
    /// range are flushed through a second rounding step.
    pub fn to_f64(&self) -> f64 {
        let num = self.numer();
        if num.is_zero() {
            return 0.0;
        }
        let negative = num.sign() == Sign::Minus;
        let n = num.magnitude();
        let d = self.denom().magnitude();

        // Pick `shift` so that q = floor(n * 2^shift / d) has exactly 54 bits:
        // 53 mantissa bits plus one rounding bit.
        let mut shift = 54 - (n.bits() as i64 - d.bits() as i64);
        let (mut q, mut r) = shifted_divmod(n, d, shift);
        if q.bits() > 54 {
            shift -= 1;
            (q, r) = shifted_divmod(n, d, shift);
        } else if q.bits() < 54 {
            shift += 1;
            (q, r) = shifted_divmod(n, d, shift);
        }
        debug_assert_eq!(q.bits(), 54);

        let round_bit = q.bit(0);
        let mut mant: u64 = (&q >> 1u32).to_u64().expect("53-bit mantissa");
        let sticky = !r.is_zero();
        if round_bit && (sticky || mant & 1 == 1) {
            mant += 1;
        }
        let exp = 1 - shift;
        let v = ldexp(mant as f64, exp);
        if negative {
            -v
        } else {
            v
        }
    }

    /// Double-double approximation: `hi` is the correctly rounded value and
    /// `lo` the correctly rounded exact remainder.
    pub fn to_dd(&self) -> Dd {
        let hi = self.to_f64();
        if !hi.is_finite() || hi == 0.0 {
            return Dd::from(hi);
        }
        let rest = self - &Rational::from_f64(hi).expect("finite");
        Dd::new(hi, rest.to_f64())
    }
}

fn shifted_divmod(n: &BigUint, d: &BigUint, shift: i64) -> (BigUint, BigUint) {
    if shift >= 0 {
        (n << shift as u64).div_rem(d)
    } else {
        n.div_rem(&(d << (-shift) as u64))
    }
}

fn ldexp(x: f64, exp: i64) -> f64 {
    // Apply the scale in steps that stay inside the normal exponent range.
    let mut v = x;
    let mut e = exp;
    while e > 1000 {
        v *= f64::from_bits(((1023 + 1000) as u64) << 52);
        e -= 1000;
    }
    while e < -1000 {
        v *= f64::from_bits(((1023 - 1000) as u64) << 52);
        e += 1000;
    }
    v * f64::from_bits(((1023 + e) as u64) << 52)
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p`, `-p`, `+p`, `p/q` with integer `p`, `q`. Decimal points
    /// and exponents are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let t = s.trim();
        let int = |part: &str| -> Result<BigInt, RationalError> {
            let part = part.trim();
            let digits = part.strip_prefix(['+', '-']).unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            part.trim_start_matches('+').parse::<BigInt>().map_err(|_| bad())
        };
        match t.split_once('/') {
            Some((p, q)) => Rational::new(int(p)?, int(q)?),
            None => Ok(Rational::from_integer(int(t)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.denom().is_one() && *self.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

macro_rules! binop {
    ($Trait:ident, $method:ident, $op:tt) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
// Division by zero panics, as for the underlying integer type.
binop!(Div, div, /);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Rising factorial `a (a+1) ... (a+k-1)`; 1 when `k == 0`.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    (0..k).map(|i| a + &Rational::from(i as i64)).product()
}
