//! The normalised Bessel ratio `σ(x) = Γ(1+ν) J_ν(x) / (x/2)^ν` and its zeros.
//!
//! `σ` is summed from its power series in double-double. The series
//! alternates, and near `|x| = 60` the largest term is around `e^x / x`, so
//! the absolute error grows like `largest term × 2^-104`. Every evaluation
//! reports that bound alongside the value.

use super::OracleError;
use crate::dd::Dd;
use crate::special::gamma_dd;

/// Largest `|x|` accepted by the series evaluator.
pub const SIGMA_CAP: f64 = 60.0;

const MAX_TERMS: usize = 200;

/// One evaluation of `σ` together with `σ'` and an absolute error bound.
#[derive(Clone, Copy, Debug)]
pub struct SigmaEval {
    pub value: Dd,
    pub deriv: Dd,
    pub abs_err: f64,
}

/// `σ(x)` for a fixed order `ν`, with the series ratios precomputed.
#[derive(Clone, Debug)]
pub struct BesselRatio {
    nu: Dd,
    /// `1 / (k (ν + k))` for `k = 1..MAX_TERMS`.
    ratios: Vec<Dd>,
}

impl BesselRatio {
    pub fn new(nu: Dd) -> Result<BesselRatio, OracleError> {
        if !(nu.hi >= 0.0) || !nu.is_finite() {
            return Err(OracleError::Domain(format!("Bessel order must be >= 0, got {}", nu.hi)));
        }
        let ratios = (1..MAX_TERMS)
            .map(|k| {
                let kf = Dd::from(k as f64);
                (kf * (nu + kf)).recip()
            })
            .collect();
        Ok(BesselRatio { nu, ratios })
    }

    pub fn nu(&self) -> Dd {
        self.nu
    }

    /// `σ`, `σ'` and the rounding bound at `x`; `|x|` must not exceed [`SIGMA_CAP`].
    pub fn eval(&self, x: Dd) -> Result<SigmaEval, OracleError> {
        if !(x.hi.abs() <= SIGMA_CAP) {
            return Err(OracleError::OutOfRange { x: x.hi, cap: SIGMA_CAP });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: Dd) -> SigmaEval {
        let q = -(x.sqr().ldexp(-2));
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        // Σ 2k t_k, divided by x at the end to give σ'.
        let mut dsum = Dd::ZERO;
        let mut largest = 1.0f64;
        for (k, r) in self.ratios.iter().enumerate() {
            let k = k + 1;
            term = term * q * *r;
            sum += term;
            dsum += term.mul_f64(2.0 * k as f64);
            let mag = term.hi.abs();
            largest = largest.max(mag);
            if mag < 1e-36 * largest && (k as f64) > x.hi.abs() {
                break;
            }
        }
        let deriv = if x.hi == 0.0 { Dd::ZERO } else { dsum / x };
        SigmaEval {
            value: sum,
            deriv,
            abs_err: 8.0 * Dd::EPSILON * largest,
        }
    }

    /// Sign-change bisection of `σ` on `[lo, hi]`, down to double-double resolution.
    fn refine(&self, mut lo: Dd, mut hi: Dd) -> Dd {
        let mut flo = self.eval_unchecked(lo).value;
        for _ in 0..200 {
            let mid = lo + (hi - lo).ldexp(-1);
            if (hi - lo).to_f64() <= 1e-30 * mid.hi.abs() {
                break;
            }
            let fm = self.eval_unchecked(mid).value;
            if fm.hi == 0.0 {
                return mid;
            }
            if (fm.hi < 0.0) == (flo.hi < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        lo + (hi - lo).ldexp(-1)
    }

    /// First zero after `start`, found by marching in `step` increments.
    pub fn next_zero(&self, start: Dd, step: f64) -> Result<Dd, OracleError> {
        let mut a = start;
        let mut fa = self.eval(a)?.value;
        loop {
            let b = a + Dd::from(step);
            if b.hi > SIGMA_CAP {
                return Err(OracleError::Bracket { nu: self.nu.hi, limit: SIGMA_CAP });
            }
            let fb = self.eval_unchecked(b).value;
            if fb.hi == 0.0 {
                return Ok(b);
            }
            if (fa.hi < 0.0) != (fb.hi < 0.0) {
                return Ok(self.refine(a, b));
            }
            a = b;
            fa = fb;
        }
    }

    /// `j_{ν,1}`, bracketed from the classical lower bound `j_{ν,1} > ν`.
    pub fn first_zero(&self) -> Result<Dd, OracleError> {
        self.next_zero(self.nu, 0.25)
    }
}

/// `σ(x)` for order `ν >= 0` and `|x| <= 60`.
pub fn bessel_sigma(nu: f64, x: f64) -> Result<f64, OracleError> {
    Ok(BesselRatio::new(Dd::from(nu))?.eval(Dd::from(x))?.value.to_f64())
}

/// First positive zero of `J_ν`.
pub fn first_bessel_zero(nu: f64) -> Result<f64, OracleError> {
    Ok(BesselRatio::new(Dd::from(nu))?.first_zero()?.to_f64())
}

/// `Γ(1+ν) 2^ν`, the constant linking `σ` to `J_ν(x) / x^ν`.
pub(crate) fn sigma_norm(nu: Dd) -> Dd {
    gamma_dd(nu + Dd::ONE) * (nu * Dd::LN_2).exp()
}
