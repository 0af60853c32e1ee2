//! Truncated formal power series with exact rational coefficients.
//!
//! A [`PowerSeries`] of order `N` knows the coefficients of `x^0 ..= x^N`;
//! everything above `N` is unknown, not zero. Binary operations truncate to
//! the smaller order, and composition, division with a cancelled leading
//! power, and differentiation shrink the order as the truncation rules
//! dictate. No operation ever pads with zeros it does not know to be zero.
//!
//! A series also carries a declared [`Parity`]. Constructors check it, and
//! every operation propagates it, so an even series is guaranteed to have
//! exact zeros in all odd slots.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    None,
    Even,
    Odd,
}

impl Parity {
    fn admits(self, degree: usize) -> bool {
        match self {
            Parity::None => true,
            Parity::Even => degree % 2 == 0,
            Parity::Odd => degree % 2 == 1,
        }
    }

    fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Parity::Even,
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => Parity::Odd,
            _ => Parity::None,
        }
    }

    fn sum(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::None
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient of x^{degree} is nonzero but the declared parity is {parity:?}")]
    ParityViolation { degree: usize, parity: Parity },
    #[error("degenerate divisor: {0}")]
    DegenerateDivisor(&'static str),
    #[error("constant term must be exactly 1, found {0}")]
    ConstantTermNotOne(Rational),
    #[error("inner series of a composition must have zero constant term, found {0}")]
    NonZeroConstant(Rational),
    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("series has no known coefficients")]
    Empty,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    parity: Parity,
}

impl PowerSeries {
    /// Series with the given coefficients `c_0 ..= c_N` (order `N = len - 1`).
    pub fn new(coeffs: Vec<Rational>, parity: Parity) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(degree) = coeffs
            .iter()
            .enumerate()
            .position(|(d, c)| !c.is_zero() && !parity.admits(d))
        {
            return Err(SeriesError::ParityViolation { degree, parity });
        }
        Ok(PowerSeries { coeffs, parity })
    }

    /// Builds the series from a coefficient function, writing exact zeros
    /// into the slots the parity excludes.
    pub fn from_fn(order: usize, parity: Parity, mut f: impl FnMut(usize) -> Rational) -> Self {
        let coeffs = (0..=order)
            .map(|d| if parity.admits(d) { f(d) } else { Rational::zero() })
            .collect();
        PowerSeries { coeffs, parity }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, Parity::Even, |_| Rational::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::from_fn(order, Parity::Even, |d| if d == 0 { c.clone() } else { Rational::zero() })
    }

    /// The identity series `x`, known through `x^order`.
    pub fn x(order: usize) -> Self {
        Self::from_fn(order, Parity::Odd, |d| if d == 1 { Rational::one() } else { Rational::zero() })
    }

    /// Builds from integer pairs `(p, q)`; handy in tests and examples.
    pub fn from_fracs(fracs: &[(i64, i64)], parity: Parity) -> Result<Self, SeriesError> {
        Self::new(fracs.iter().map(|&(p, q)| Rational::frac(p, q)).collect(), parity)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^degree`, or `None` beyond the truncation order.
    pub fn coeff(&self, degree: usize) -> Option<&Rational> {
        self.coeffs.get(degree)
    }

    /// Lowest degree with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops coefficients above `order` (no-op if already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        PowerSeries {
            coeffs: self.coeffs[..=n].to_vec(),
            parity: self.parity,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            parity: self.parity,
        }
    }

    /// `x^k f(x)`; the order grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        let parity = if k % 2 == 1 { self.parity.flip() } else { self.parity };
        PowerSeries { coeffs, parity }
    }

    /// `f(x) / x^k`, which needs the first `k` coefficients to vanish; the
    /// order drops by `k`.
    pub fn unshift(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::DegenerateDivisor("series does not vanish to the requested order"));
        }
        let parity = if k % 2 == 1 { self.parity.flip() } else { self.parity };
        Ok(PowerSeries {
            coeffs: self.coeffs[k..].to_vec(),
            parity,
        })
    }

    /// `f(c x)`.
    pub fn scale_arg(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &p;
                p *= c;
                v
            })
            .collect();
        PowerSeries {
            coeffs,
            parity: self.parity,
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        PowerSeries {
            coeffs: out,
            parity: self.parity.product(other.parity),
        }
    }

    /// `self / other`.
    ///
    /// If `other` has a zero constant term, its lowest nonzero power `x^d` is
    /// cancelled against `self` first, which requires the first `d`
    /// coefficients of `self` to vanish; the result then loses `d` orders.
    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        let d = other
            .valuation()
            .ok_or(SeriesError::DegenerateDivisor("divisor has no nonzero known coefficient"))?;
        if self.coeffs.iter().take(d).any(|c| !c.is_zero()) {
            return Err(SeriesError::DegenerateDivisor(
                "dividend does not vanish to the order of the divisor's leading power",
            ));
        }
        let n = self.order().min(other.order());
        if n < d {
            return Err(SeriesError::DegenerateDivisor("leading power exceeds the known order"));
        }
        let n = n - d;
        let f = &self.coeffs[d..];
        let g = &other.coeffs[d..];
        let g0_inv = g[0].recip().expect("valuation coefficient is nonzero");
        let mut h: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = f[k].clone();
            for j in 1..=k {
                if !g[j].is_zero() && !h[k - j].is_zero() {
                    acc -= &(&g[j] * &h[k - j]);
                }
            }
            h.push(acc * &g0_inv);
        }
        // Cancelling x^d from both sides leaves the quotient parity equal
        // to the parity of the product.
        Ok(PowerSeries {
            coeffs: h,
            parity: self.parity.product(other.parity),
        })
    }

    fn require_unit_constant(&self) -> Result<(), SeriesError> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(SeriesError::ConstantTermNotOne(self.coeffs[0].clone()))
        }
    }

    /// Formal derivative (order drops by one; an order-0 series gives the
    /// zero series of order 0).
    pub fn derivative(&self) -> PowerSeries {
        if self.order() == 0 {
            return PowerSeries::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c * &Rational::from(d as i64))
            .collect();
        PowerSeries {
            coeffs,
            parity: self.parity.flip(),
        }
    }

    /// Antiderivative with zero constant term (order grows by one).
    pub fn integral(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(d, c)| c / &Rational::from(d as i64 + 1)),
        );
        PowerSeries {
            coeffs,
            parity: self.parity.flip(),
        }
    }

    /// `log f = ∫ f'/f`, for `f(0) = 1`.
    pub fn log(&self) -> Result<PowerSeries, SeriesError> {
        self.require_unit_constant()?;
        if self.order() == 0 {
            return Ok(PowerSeries::zero(0));
        }
        let ratio = self.derivative().div(self)?;
        let parity = if self.parity == Parity::Even { Parity::Even } else { Parity::None };
        let mut out = ratio.integral();
        out.parity = parity;
        Ok(out)
    }

    /// `f^alpha` for rational `alpha` and `f(0) = 1`, by the J. C. P. Miller
    /// recurrence `k g_k = sum_{j=1..k} ((alpha+1) j - k) f_j g_{k-j}`.
    pub fn pow(&self, alpha: &Rational) -> Result<PowerSeries, SeriesError> {
        self.require_unit_constant()?;
        let n = self.order();
        let alpha1 = alpha + &Rational::one();
        let mut g: Vec<Rational> = Vec::with_capacity(n + 1);
        g.push(Rational::one());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let fj = &self.coeffs[j];
                if fj.is_zero() || g[k - j].is_zero() {
                    continue;
                }
                let w = &alpha1 * &Rational::from(j as i64) - Rational::from(k as i64);
                acc += &(w * fj * &g[k - j]);
            }
            g.push(acc / Rational::from(k as i64));
        }
        let parity = if self.parity == Parity::Even { Parity::Even } else { Parity::None };
        Ok(PowerSeries { coeffs: g, parity })
    }

    /// Square root with unit constant term, for `f(0) = 1`.
    pub fn sqrt(&self) -> Result<PowerSeries, SeriesError> {
        self.require_unit_constant()?;
        let n = self.order();
        let mut g: Vec<Rational> = Vec::with_capacity(n + 1);
        g.push(Rational::one());
        let half = Rational::frac(1, 2);
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                if !g[j].is_zero() && !g[k - j].is_zero() {
                    acc -= &(&g[j] * &g[k - j]);
                }
            }
            g.push(acc * &half);
        }
        let parity = if self.parity == Parity::Even { Parity::Even } else { Parity::None };
        Ok(PowerSeries { coeffs: g, parity })
    }

    /// `self(inner(x))`. `inner` must have zero constant term.
    ///
    /// With `v` the valuation of `inner`, the result is known through
    /// `min(order(inner), (order(self) + 1) v - 1)`.
    pub fn compose(&self, inner: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstant(inner.coeffs[0].clone()));
        }
        let v = inner.valuation().unwrap_or(inner.order() + 1);
        let n = inner.order().min((self.order() + 1) * v - 1);
        let g = inner.truncate(n);
        // Horner: f_N, then acc = acc * g + f_k.
        let mut acc = PowerSeries::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += c;
        }
        let parity = match (self.parity, inner.parity) {
            (_, Parity::Even) => Parity::Even,
            (p, Parity::Odd) => p,
            _ => Parity::None,
        };
        acc.parity = parity;
        debug_assert!(acc.parity_holds());
        Ok(acc)
    }

    fn check_invertible(&self) -> Result<(), SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotInvertible("nonzero constant term"));
        }
        if self.order() < 1 || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotInvertible("zero linear coefficient"));
        }
        Ok(())
    }

    fn reversion_parity(&self) -> Parity {
        if self.parity == Parity::Odd {
            Parity::Odd
        } else {
            Parity::None
        }
    }

    /// Compositional inverse by fixed-point substitution
    /// `g <- (x - (f(g) - f_1 g)) / f_1`; each pass fixes one more
    /// coefficient. Quartic in the order, so only used as a cross-check of
    /// [`PowerSeries::revert`].
    pub fn revert_iterative(&self) -> Result<PowerSeries, SeriesError> {
        self.check_invertible()?;
        let n = self.order();
        let f1_inv = self.coeffs[1].recip().expect("checked nonzero");
        let mut g = PowerSeries::x(n).scale(&f1_inv);
        g.parity = Parity::None;
        let x = PowerSeries::x(n);
        for m in 2..=n {
            // Only coefficients of degree >= m change from here on.
            let fg = self.compose(&g)?;
            let correction = (&fg - &x).scale(&f1_inv);
            g.coeffs[m] -= &correction.coeffs[m];
        }
        g.parity = self.reversion_parity();
        debug_assert!(g.parity_holds());
        Ok(g)
    }

    /// Compositional inverse `g` with `self(g(x)) = x` through the order of
    /// `self`, by Lagrange inversion:
    /// `[x^m] g = (1/m) [w^(m-1)] (w / f(w))^m`.
    pub fn revert(&self) -> Result<PowerSeries, SeriesError> {
        self.check_invertible()?;
        let n = self.order();
        // h = w / f(w), known through w^(n-1).
        let h = PowerSeries::x(n).div(self)?;
        let mut coeffs = vec![Rational::zero(); n + 1];
        let mut hp = PowerSeries::one(h.order());
        for m in 1..=n {
            hp = hp.mul(&h);
            coeffs[m] = &hp.coeffs[m - 1] / &Rational::from(m as i64);
        }
        Ok(PowerSeries {
            coeffs,
            parity: self.reversion_parity(),
        })
    }

    fn parity_holds(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(d, c)| c.is_zero() || self.parity.admits(d))
    }

    /// Exact rational evaluation of the truncated polynomial.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [{:?}]", self.parity)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|d| &self.coeffs[d] + &other.coeffs[d]).collect(),
            parity: self.parity.sum(other.parity),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|d| &self.coeffs[d] - &other.coeffs[d]).collect(),
            parity: self.parity.sum(other.parity),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, other: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, other)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            parity: self.parity,
        }
    }
}

/// Maclaurin series of `sin x` through `x^order`.
pub fn sin_series(order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut term = Rational::one();
    for d in (1..=order).step_by(2) {
        if d > 1 {
            term = -term / Rational::from((d * (d - 1)) as i64);
        }
        coeffs[d] = term.clone();
    }
    PowerSeries {
        coeffs,
        parity: Parity::Odd,
    }
}

/// Maclaurin series of `e^x - 1` through `x^order`.
pub fn expm1_series(order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut term = Rational::one();
    for (d, c) in coeffs.iter_mut().enumerate().skip(1) {
        term = term / Rational::from(d as i64);
        *c = term.clone();
    }
    PowerSeries {
        coeffs,
        parity: Parity::None,
    }
}
