//! Double-double arithmetic.
//!
//! A [`Dd`] is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 106 bits of significand. Addition and multiplication are built on
//! the usual error-free transformations (`two_sum`, FMA-based `two_prod`);
//! the elementary functions below are accurate to a few units of 2^-104 on
//! the ranges this crate uses them on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::rational::Rational;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793116e+00,
        lo: 1.224646799147353207e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.570796326794896558e+00,
        lo: 6.123233995736766036e-17,
    };
    pub const LN_2: Dd = Dd {
        hi: 6.931471805599452862e-01,
        lo: 2.319046813846299558e-17,
    };
    /// 2^-104, the unit roundoff of the format.
    pub const EPSILON: f64 = 4.93038065763132e-32;

    /// Normalises `hi + lo`.
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        Dd::new(p, e)
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    /// Multiplication by `2^k`, exact barring overflow.
    pub fn ldexp(self, k: i32) -> Dd {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            Dd::new(hi, self.lo.floor())
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from(0.5)).floor()
    }

    pub fn powi(self, n: u64) -> Dd {
        let mut base = self;
        let mut e = n;
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::from(f64::NAN) };
        }
        // One Newton step from the double approximation.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let resid = (self - Dd::new(p, e)).to_f64();
        Dd::from(x) + Dd::from(resid / (2.0 * x))
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        // x = k ln2 + r, |r| <= ln2/2, then r / 2^10 into a Taylor series
        // for expm1 and undo the scaling by repeated squaring of 1 + s.
        let k = (self.hi / Dd::LN_2.hi).round();
        let r = (self - Dd::LN_2.mul_f64(k)).ldexp(-10);
        let inv = inv_factorials();
        let mut s = r;
        let mut pow = r;
        for f in &inv[2..] {
            pow *= r;
            let term = pow * *f;
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            s = s.ldexp(1) + s.sqr();
        }
        (s + Dd::ONE).ldexp(k as i32)
    }

    /// Natural logarithm; NaN for non-positive input.
    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        // Newton on exp(y) = x, each step doubles the number of correct bits.
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn powf(self, e: Dd) -> Dd {
        if self.hi == 0.0 {
            return if e.hi > 0.0 { Dd::ZERO } else { Dd::from(f64::INFINITY) };
        }
        (e * self.ln()).exp()
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.hi == 0.0 {
            return (self, Dd::ONE);
        }
        // Reduce by pi/2; the two-word constant is enough for |x| < 1e6.
        let j = (self / Dd::FRAC_PI_2).round();
        let r = self - Dd::FRAC_PI_2 * j;
        let r2 = r.sqr();
        let inv = inv_factorials();
        let (mut s, mut c) = (r, Dd::ONE);
        let mut ps = r;
        let mut pc = Dd::ONE;
        let mut k = 2;
        while k + 1 < inv.len() {
            ps = -(ps * r2);
            pc = -(pc * r2);
            let ts = ps * inv[k + 1];
            let tc = pc * inv[k];
            s += ts;
            c += tc;
            if ts.hi.abs() < 1e-36 && tc.hi.abs() < 1e-36 {
                break;
            }
            k += 2;
        }
        match (j.hi as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    pub fn max(self, other: Dd) -> Dd {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// `1/k!` for `k = 0..=32`, each rounded from the exact rational.
fn inv_factorials() -> &'static [Dd; 33] {
    static TABLE: OnceLock<[Dd; 33]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [Dd::ONE; 33];
        let mut inv = Rational::one();
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            inv = inv / Rational::from(k as i64);
            *slot = inv.to_dd();
        }
        out
    })
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
}

impl From<i64> for Dd {
    fn from(n: i64) -> Dd {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Dd::new(hi, lo)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Dd::new(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        // Long division: three partial quotients.
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from(q3)
    }
}

macro_rules! assign_op {
    ($Trait:ident, $method:ident, $op:tt) => {
        impl $Trait for Dd {
            fn $method(&mut self, rhs: Dd) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);

macro_rules! f64_ops {
    ($Trait:ident, $method:ident) => {
        impl $Trait<f64> for Dd {
            type Output = Dd;
            fn $method(self, rhs: f64) -> Dd {
                $Trait::$method(self, Dd::from(rhs))
            }
        }
        impl $Trait<Dd> for f64 {
            type Output = Dd;
            fn $method(self, rhs: Dd) -> Dd {
                $Trait::$method(Dd::from(self), rhs)
            }
        }
    };
}

f64_ops!(Add, add);
f64_ops!(Sub, sub);
f64_ops!(Mul, mul);
f64_ops!(Div, div);

impl std::iter::Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}
