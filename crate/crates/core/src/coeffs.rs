//! Exact coefficient pipelines for the three integral families.
//!
//! Each family has a phase function `psi(x)` that is even, vanishes at the
//! origin, and starts with `x^2 / s^2`. Substituting `psi(x) = tau^2` and
//! `x = s u` keeps everything rational:
//!
//! 1. `tau^2(u)` is `psi(s u)`, an even series with leading term `u^2`;
//! 2. `tau(u) = u * sqrt(tau^2(u) / u^2)` is odd with unit linear term;
//! 3. reverting gives `u(tau)`, also odd;
//! 4. the Watson-lemma weight is `W(tau) = (u/tau)^alpha * du/dtau`, where
//!    `alpha` is the power of `x` in the amplitude (`0` for the sine
//!    integral, `2 nu - 1` for the Bessel integral, `a - 1` in general);
//! 5. `b_k` is the coefficient of `tau^(2k)` in `W`, with the sign
//!    `(-1)^k` factored out for the Bessel families, and the asymptotic
//!    coefficient is `b_k` times a Pochhammer symbol.

use std::fmt::Write as _;

use serde::Serialize;

use crate::rational::{pochhammer, Rational};
use crate::series::{sin_series, Parity, PowerSeries, SeriesError};

/// Default table orders.
pub const DEFAULT_SINC_ORDER: usize = 12;
pub const DEFAULT_BALL_ORDER: usize = 6;

/// Version tag written into both serialised forms.
pub const TABLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `∫ (sin x / x)^n dx`.
    Sinc,
    /// `∫ |σ_ν(x)|^n x^(2ν-1) dx`.
    Ball,
    /// `∫ |σ_ν(x)|^n x^(a-1) dx`.
    BallGeneral,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sinc => "sinc",
            Family::Ball => "ball",
            Family::BallGeneral => "ball_general",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sinc" => Ok(Family::Sinc),
            "ball" => Ok(Family::Ball),
            "ball_general" => Ok(Family::BallGeneral),
            other => Err(CoeffError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoeffError {
    #[error("nu must be positive, got {0}")]
    NonPositiveNu(Rational),
    #[error("exponent a must be positive, got {0}")]
    NonPositiveExponent(Rational),
    #[error("phase series must be even with zero constant term")]
    BadPhase,
    #[error("leading phase coefficient {leading} times scale^2 {scale_sq} is not 1")]
    ScalingMismatch { leading: Rational, scale_sq: Rational },
    #[error("phase series of order {have} is too short for {need} coefficients")]
    InsufficientOrder { have: usize, need: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Exact coefficients of one asymptotic expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffTable {
    pub family: Family,
    pub nu: Option<Rational>,
    pub a_exp: Option<Rational>,
    /// `s^2` in the substitution `x = s u`.
    pub scale_sq: Rational,
    pub b: Vec<Rational>,
    /// `c_k` (or `d_k` for [`Family::BallGeneral`]).
    pub c: Vec<Rational>,
    pub order: usize,
    pub radius_note: String,
}

impl CoeffTable {
    /// Coefficient multiplying `n^-k` in the final sum, sign included:
    /// `c_k` for the sine family, `(-1)^k c_k` for the Bessel families.
    pub fn signed(&self, k: usize) -> Rational {
        let c = &self.c[k];
        if self.family != Family::Sinc && k % 2 == 1 {
            -c
        } else {
            c.clone()
        }
    }

    /// Versioned text form: `#` header lines, then `k: num/den` for each `c_k`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# coeff-table v{TABLE_FORMAT_VERSION}");
        let _ = writeln!(out, "# family: {}", self.family.name());
        if let Some(nu) = &self.nu {
            let _ = writeln!(out, "# nu: {nu}");
        }
        if let Some(a) = &self.a_exp {
            let _ = writeln!(out, "# a: {a}");
        }
        let _ = writeln!(out, "# scale_sq: {}", self.scale_sq);
        let _ = writeln!(out, "# order: {}", self.order);
        let _ = writeln!(out, "# radius: {}", self.radius_note);
        for (k, c) in self.c.iter().enumerate() {
            let _ = writeln!(out, "{k}: {c}");
        }
        out
    }

    /// Structured form with a schema version field.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": TABLE_FORMAT_VERSION,
            "kind": "coeff_table",
            "table": self,
        })
    }
}

/// `log(x / sin x)` through `x^(2K)`.
pub fn sinc_tau2_series(k: usize) -> PowerSeries {
    let order = 2 * k;
    let ratio = PowerSeries::x(order + 1)
        .div(&sin_series(order + 1))
        .expect("sin x has a nonzero linear term");
    ratio.log().expect("x / sin x starts at 1")
}

/// `sigma_nu(x) = sum_k (-x^2/4)^k / (k! (nu+1)_k)` through `x^(2K)`.
pub fn bessel_sigma_series(nu: &Rational, k: usize) -> PowerSeries {
    let order = 2 * k;
    let quarter = Rational::frac(-1, 4);
    let mut term = Rational::one();
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    for j in 1..=k {
        let denom = Rational::from(j as i64) * (nu + &Rational::from(j as i64));
        term = term * &quarter / denom;
        coeffs[2 * j] = term.clone();
    }
    PowerSeries::new(coeffs, Parity::Even).expect("even by construction")
}

/// `-log sigma_nu(x)` through `x^(2K)`.
pub fn ball_tau2_series(nu: &Rational, k: usize) -> Result<PowerSeries, CoeffError> {
    if !nu.is_positive() {
        return Err(CoeffError::NonPositiveNu(nu.clone()));
    }
    Ok(-&bessel_sigma_series(nu, k).log()?)
}

/// `u(tau)` from the substitution `tau^2 = psi(s u)`, known through
/// `tau^(order(tau2) - 1)`.
pub fn scaled_inverse(tau2: &PowerSeries, scale_sq: &Rational) -> Result<PowerSeries, CoeffError> {
    if tau2.parity() != Parity::Even || !tau2.coeffs()[0].is_zero() || tau2.order() < 2 {
        return Err(CoeffError::BadPhase);
    }
    let leading = &tau2.coeffs()[2];
    if !(leading * scale_sq).is_one() {
        return Err(CoeffError::ScalingMismatch {
            leading: leading.clone(),
            scale_sq: scale_sq.clone(),
        });
    }
    // psi(s u): the x^(2j) coefficient picks up s^(2j) = scale_sq^j.
    let mut pow = Rational::one();
    let scaled = PowerSeries::from_fn(tau2.order(), Parity::Even, |d| {
        let c = &tau2.coeffs()[d] * &pow;
        pow = &pow * scale_sq;
        c
    });
    let ratio = scaled.unshift(2)?;
    let tau_of_u = ratio.sqrt()?.shift(1);
    Ok(tau_of_u.revert()?)
}

/// `b_0 ..= b_K` with `dx/dtau = s * sum b_k tau^(2k)`.
pub fn revert_scaled(tau2: &PowerSeries, scale_sq: &Rational, k: usize) -> Result<Vec<Rational>, CoeffError> {
    let w = weight_series(tau2, scale_sq, &Rational::zero(), k)?;
    Ok((0..=k).map(|j| w.coeffs()[2 * j].clone()).collect())
}

/// `W(tau) = (u/tau)^alpha du/dtau` through `tau^(2K)`.
fn weight_series(
    tau2: &PowerSeries,
    scale_sq: &Rational,
    alpha: &Rational,
    k: usize,
) -> Result<PowerSeries, CoeffError> {
    let need = 2 * k + 2;
    if tau2.order() < need {
        return Err(CoeffError::InsufficientOrder { have: tau2.order(), need });
    }
    let u = scaled_inverse(&tau2.truncate(need), scale_sq)?;
    let du = u.derivative();
    if alpha.is_zero() {
        return Ok(du);
    }
    let u_over_tau = u.unshift(1)?;
    Ok(u_over_tau.pow(alpha)?.mul(&du))
}

fn build_table(
    family: Family,
    nu: Option<Rational>,
    a_exp: Option<Rational>,
    tau2: &PowerSeries,
    scale_sq: Rational,
    alpha: &Rational,
    poch_base: &Rational,
    k: usize,
    radius_note: String,
) -> Result<CoeffTable, CoeffError> {
    let w = weight_series(tau2, &scale_sq, alpha, k)?;
    let alternating = family != Family::Sinc;
    let b: Vec<Rational> = (0..=k)
        .map(|j| {
            let v = w.coeffs()[2 * j].clone();
            if alternating && j % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let c = b
        .iter()
        .enumerate()
        .map(|(j, bj)| bj * &pochhammer(poch_base, j))
        .collect();
    Ok(CoeffTable {
        family,
        nu,
        a_exp,
        scale_sq,
        b,
        c,
        order: k,
        radius_note,
    })
}

fn sinc_radius_note() -> String {
    // tau0 = |log(3 pi / 2) + i pi|^(1/2), the image of the nearest
    // singularity x = 3 pi / 2 of dx/dtau.
    let l = (1.5 * std::f64::consts::PI).ln();
    let tau0 = (l * l + std::f64::consts::PI.powi(2)).powf(0.25);
    format!("tau0 = |log(3pi/2) + i pi|^(1/2) = {tau0:.4}; the expansion in 1/n is divergent")
}

fn ball_radius_note() -> String {
    "tau0^2 = log(1/sigma(j'_{nu,2})), j'_{nu,2} the second zero of J_nu'; the expansion in 1/n is divergent"
        .to_string()
}

/// Coefficients of `I_n ~ sqrt(3 pi / 2n) sum c_k n^-k`.
pub fn coeffs_in(k: usize) -> CoeffTable {
    build_table(
        Family::Sinc,
        None,
        None,
        &sinc_tau2_series(k + 1),
        Rational::from(6),
        &Rational::zero(),
        &Rational::frac(1, 2),
        k,
        sinc_radius_note(),
    )
    .expect("sine phase satisfies every precondition")
}

/// Coefficients of `L(nu; n) ~ 2^(2nu-1) (1+nu)^nu Gamma(nu) sum (-1)^k c_k n^-(k+nu)`.
pub fn coeffs_ball(nu: &Rational, k: usize) -> Result<CoeffTable, CoeffError> {
    let alpha = nu + nu - Rational::one();
    build_table(
        Family::Ball,
        Some(nu.clone()),
        None,
        &ball_tau2_series(nu, k + 1)?,
        ball_scale_sq(nu),
        &alpha,
        nu,
        k,
        ball_radius_note(),
    )
}

/// Coefficients `d_k` of
/// `L(nu, a; n) ~ 2^(a-1) (1+nu)^(a/2) Gamma(a/2) sum (-1)^k d_k n^-(k+a/2)`.
pub fn coeffs_ball_general(nu: &Rational, a_exp: &Rational, k: usize) -> Result<CoeffTable, CoeffError> {
    if !a_exp.is_positive() {
        return Err(CoeffError::NonPositiveExponent(a_exp.clone()));
    }
    let alpha = a_exp - &Rational::one();
    build_table(
        Family::BallGeneral,
        Some(nu.clone()),
        Some(a_exp.clone()),
        &ball_tau2_series(nu, k + 1)?,
        ball_scale_sq(nu),
        &alpha,
        &(a_exp / &Rational::from(2)),
        k,
        ball_radius_note(),
    )
}

fn ball_scale_sq(nu: &Rational) -> Rational {
    Rational::from(4) * (Rational::one() + nu)
}
