//! Floating-point evaluation of the asymptotic expansions.
//!
//! The exact coefficients are rounded to double-double once per evaluation
//! and summed there, so [`AsymValue::value_dd`] can be compared against the
//! quadrature oracle well below `f64` resolution. [`AsymValue::value`] is the
//! correctly rounded double.

use serde::Serialize;
use thiserror::Error;

use crate::coeffs::{CoeffTable, Family};
use crate::dd::Dd;
use crate::oracle::{BesselRatio, OracleError};
use crate::rational::Rational;
use crate::special::gamma_dd;

#[derive(Debug, Clone, Error)]
pub enum AsymError {
    #[error("expected a {expected} coefficient table, got {got}")]
    WrongFamily { expected: &'static str, got: &'static str },
    #[error("coefficient table does not match the requested parameters: {0}")]
    ParameterMismatch(String),
    #[error("truncation index {k} exceeds the table order {order}")]
    OrderExceeded { k: usize, order: usize },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// How many terms of an asymptotic series to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Terms `0..=k`.
    Fixed(usize),
    /// Up to the smallest term, see [`optimal_truncation`].
    Optimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymValue {
    pub value: f64,
    #[serde(skip)]
    pub value_dd: Dd,
    pub k_used: usize,
    /// Size of the first omitted term, when the table has one.
    pub first_omitted: Option<f64>,
    pub prefactor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Contribution of one peak to a multi-peak estimate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeakEstimate {
    /// Peak index: the peak sits at `kπ` (or `(k+1/2)π` for `K̂_n`).
    pub k: usize,
    pub contribution: f64,
    /// Second-order correction coefficient; zero where only the leading
    /// term is known.
    pub c2: f64,
}

/// Which form of the `T_1` correction to use in [`eval_kn`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum T1Variant {
    /// `π²(1+a²)(2 + cosh πa) / sinh²(πa/2)`, from the closed form of `σ_3`.
    #[default]
    Derived,
    /// The same term with `cosh(πa/2)`.
    Printed,
}

impl std::str::FromStr for T1Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "derived" => Ok(T1Variant::Derived),
            "printed" => Ok(T1Variant::Printed),
            other => Err(format!("unknown T1 variant '{other}' (expected derived|printed)")),
        }
    }
}

fn require_positive(name: &str, v: f64) -> Result<(), AsymError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AsymError::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn require_family(table: &CoeffTable, family: Family) -> Result<(), AsymError> {
    if table.family == family {
        Ok(())
    } else {
        Err(AsymError::WrongFamily {
            expected: family.name(),
            got: table.family.name(),
        })
    }
}

/// Index of the smallest `|c_k| n^{-k}`; ties go to the smaller `k`.
pub fn optimal_index(coeffs: &[Rational], n: f64) -> usize {
    let ln_n = n.ln();
    let mut best = 0;
    let mut best_mag = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let mag = if c.is_zero() {
            f64::NEG_INFINITY
        } else {
            c.abs().to_f64().ln() - k as f64 * ln_n
        };
        if mag < best_mag {
            best = k;
            best_mag = mag;
        }
    }
    best
}

pub fn optimal_truncation(table: &CoeffTable, n: f64) -> usize {
    optimal_index(&table.c, n)
}

fn resolve(table: &CoeffTable, n: f64, k: Truncation) -> Result<usize, AsymError> {
    match k {
        Truncation::Fixed(k) if k <= table.order => Ok(k),
        Truncation::Fixed(k) => Err(AsymError::OrderExceeded { k, order: table.order }),
        Truncation::Optimal => Ok(optimal_truncation(table, n)),
    }
}

/// `prefactor × Σ_{j ≤ k} s_j n^{-j}` with `s_j = table.signed(j)`.
fn truncated_sum(table: &CoeffTable, prefactor: Dd, n: f64, k: usize) -> AsymValue {
    let ninv = Dd::ONE / Dd::from(n);
    let mut sum = Dd::ZERO;
    let mut p = Dd::ONE;
    for j in 0..=k {
        sum += table.signed(j).to_dd() * p;
        p *= ninv;
    }
    let first_omitted = (k < table.order).then(|| (prefactor * table.c[k + 1].abs().to_dd() * p).to_f64());
    let value_dd = prefactor * sum;
    AsymValue {
        value: value_dd.to_f64(),
        value_dd,
        k_used: k,
        first_omitted,
        prefactor: prefactor.to_f64(),
        warning: None,
    }
}

/// `I_n ~ √(3π/(2n)) Σ c_k n^{-k}`.
pub fn eval_in(n: f64, table: &CoeffTable, k: Truncation) -> Result<AsymValue, AsymError> {
    require_family(table, Family::Sinc)?;
    require_positive("n", n)?;
    let k = resolve(table, n, k)?;
    let prefactor = (Dd::PI.mul_f64(3.0) / Dd::from(2.0 * n)).sqrt();
    Ok(truncated_sum(table, prefactor, n, k))
}

/// `J_n`, computed as `2 I_{2n}`.
pub fn eval_jn(n: f64, table: &CoeffTable, k: Truncation) -> Result<AsymValue, AsymError> {
    require_positive("n", n)?;
    let mut v = eval_in(2.0 * n, table, k)?;
    v.value_dd = v.value_dd.mul_f64(2.0);
    v.value *= 2.0;
    v.prefactor *= 2.0;
    v.first_omitted = v.first_omitted.map(|t| 2.0 * t);
    Ok(v)
}

/// `L(ν; n) ~ 2^{2ν-1} (1+ν)^ν Γ(ν) Σ (-1)^k c_k n^{-k-ν}`.
pub fn eval_ball(nu: &Rational, n: f64, table: &CoeffTable, k: Truncation) -> Result<AsymValue, AsymError> {
    require_family(table, Family::Ball)?;
    require_positive("n", n)?;
    if table.nu.as_ref() != Some(nu) {
        return Err(AsymError::ParameterMismatch(format!(
            "table is for nu = {:?}, requested nu = {nu}",
            table.nu
        )));
    }
    if !nu.is_positive() {
        return Err(AsymError::Domain(format!("nu must be positive, got {nu}")));
    }
    let k = resolve(table, n, k)?;
    let v = nu.to_dd();
    let ln_pref = (v.ldexp(1) - Dd::ONE) * Dd::LN_2 + v * (Dd::ONE + v).ln() - v * Dd::from(n).ln();
    let prefactor = ln_pref.exp() * gamma_dd(v);
    Ok(truncated_sum(table, prefactor, n, k))
}

/// `𝓛(ν, a; n) ~ 2^{a-1} (1+ν)^{a/2} Γ(a/2) Σ (-1)^k d_k n^{-k-a/2}`.
pub fn eval_ball_general(
    nu: &Rational,
    a_exp: &Rational,
    n: f64,
    table: &CoeffTable,
    k: Truncation,
) -> Result<AsymValue, AsymError> {
    require_family(table, Family::BallGeneral)?;
    require_positive("n", n)?;
    if table.nu.as_ref() != Some(nu) || table.a_exp.as_ref() != Some(a_exp) {
        return Err(AsymError::ParameterMismatch(format!(
            "table is for nu = {:?}, a = {:?}; requested nu = {nu}, a = {a_exp}",
            table.nu, table.a_exp
        )));
    }
    let (v, a) = (nu.to_dd(), a_exp.to_dd());
    if !(Dd::from(n) * (v + Dd::from(0.5)) > a) {
        return Err(AsymError::Domain(format!(
            "the integral diverges unless n (nu + 1/2) > a; got n = {n}, nu = {nu}, a = {a_exp}"
        )));
    }
    let k = resolve(table, n, k)?;
    let half_a = a.ldexp(-1);
    let ln_pref = (a - Dd::ONE) * Dd::LN_2 + half_a * (Dd::ONE + v).ln() - half_a * Dd::from(n).ln();
    let prefactor = ln_pref.exp() * gamma_dd(half_a);
    Ok(truncated_sum(table, prefactor, n, k))
}

/// `Σ_{k≥1} k^m e^{-kπa}` in closed form, for `m ∈ {1, 2, 3}`.
pub fn sigma_closed(m: u32, a: f64) -> Result<f64, AsymError> {
    require_positive("a", a)?;
    let h = 0.5 * std::f64::consts::PI * a;
    let s = h.sinh();
    match m {
        1 => Ok(1.0 / (4.0 * s * s)),
        2 => Ok(h.cosh() / (4.0 * s.powi(3))),
        3 => Ok((2.0 + (2.0 * h).cosh()) / (8.0 * s.powi(4))),
        _ => Err(AsymError::Domain(format!("sigma_m is defined for m = 1, 2, 3; got {m}"))),
    }
}

/// `Σ_{k≥1} k^m e^{-kπa}` summed term by term until the terms are negligible.
pub fn sigma_direct(m: u32, a: f64) -> Result<f64, AsymError> {
    require_positive("a", a)?;
    let q = (-std::f64::consts::PI * a).exp();
    let mut sum = Dd::ZERO;
    let mut qk = Dd::ONE;
    for k in 1..100_000u32 {
        qk = qk.mul_f64(q);
        let term = qk.mul_f64((k as f64).powi(m as i32));
        sum += term;
        if term.hi < 1e-34 * sum.hi && (k as f64) * std::f64::consts::PI * a > m as f64 {
            break;
        }
    }
    Ok(sum.to_f64())
}

/// `ψ''`, `ψ'''`, `ψ''''` of `ψ(x) = -log(1 - sin²x/x²)` at `x = kπ`.
///
/// Expanding about `kπ` with `t = x - kπ`, `y = kπ` gives
/// `ψ = t²/y² - 2t³/y³ + (7/(2y⁴) - 1/(3y²)) t⁴ + O(t⁵)`.
pub fn psi_derivatives(k: u32) -> [f64; 3] {
    let y = k as f64 * std::f64::consts::PI;
    [2.0 / (y * y), -12.0 / y.powi(3), 84.0 / y.powi(4) - 8.0 / (y * y)]
}

/// The two-term coefficient `c_2` of the peak at `kπ`, in closed form.
pub fn peak_c2(k: u32, a: f64) -> f64 {
    let y = k as f64 * std::f64::consts::PI;
    0.25 * (2.0 * (1.0 + a * a) * y * y - 12.0 * a * y + 9.0)
}

/// The generic two-term saddle coefficient
/// `(1/2ψ'') {2f''/f - 2(ψ'''/ψ'')(f'/f) + 5ψ'''²/(6ψ''²) - ψ''''/(2ψ'')}`.
pub fn saddle_c2(psi: [f64; 3], f_ratio: [f64; 2]) -> f64 {
    let [p2, p3, p4] = psi;
    let [f1, f2] = f_ratio;
    (2.0 * f2 - 2.0 * (p3 / p2) * f1 + 5.0 * p3 * p3 / (6.0 * p2 * p2) - p4 / (2.0 * p2)) / (2.0 * p2)
}

/// [`saddle_c2`] for `f = e^{-ax}` at the peak `kπ`.
pub fn peak_c2_generic(k: u32, a: f64) -> f64 {
    saddle_c2(psi_derivatives(k), [-a, a * a])
}

/// Individual peak terms `kπ √(π/n) (1 + c_2/(2n)) e^{-kπa}` for `k = 1..=count`.
///
/// Summed over all peaks these reproduce [`eval_kn`] with [`T1Variant::Derived`].
pub fn kn_peaks(n: f64, a: f64, count: usize) -> Result<Vec<PeakEstimate>, AsymError> {
    require_positive("n", n)?;
    require_positive("a", a)?;
    let root = (std::f64::consts::PI / n).sqrt();
    Ok((1..=count)
        .map(|k| {
            let y = k as f64 * std::f64::consts::PI;
            let c2 = peak_c2(k as u32, a);
            PeakEstimate {
                k,
                contribution: y * root * (1.0 + 0.5 * c2 / n) * (-y * a).exp(),
                c2,
            }
        })
        .collect())
}

/// `T_1` in `K_n ~ (π^{3/2}/4√n) (1 + T_1/(8n)) cosech²(πa/2)`.
pub fn kn_t1(a: f64, variant: T1Variant) -> f64 {
    let pi = std::f64::consts::PI;
    let h = 0.5 * pi * a;
    let s2 = h.sinh().powi(2);
    let cosh_term = match variant {
        T1Variant::Derived => (2.0 * h).cosh(),
        T1Variant::Printed => h.cosh(),
    };
    9.0 - 12.0 * pi * a / h.tanh() + pi * pi * (1.0 + a * a) * (2.0 + cosh_term) / s2
}

/// The two-term multi-peak estimate of `K_n`.
pub fn eval_kn(n: f64, a: f64, variant: T1Variant) -> Result<AsymValue, AsymError> {
    require_positive("n", n)?;
    require_positive("a", a)?;
    let pi = std::f64::consts::PI;
    let s = (0.5 * pi * a).sinh();
    let prefactor = pi.powf(1.5) / (4.0 * n.sqrt() * s * s);
    let value = prefactor * (1.0 + kn_t1(a, variant) / (8.0 * n));
    let warning = (a <= (2.0 * n).powf(-0.5)).then(|| {
        format!(
            "a = {a} is not large compared with (2n)^(-1/2) = {:.4}; the peak-by-peak estimate is unreliable",
            (2.0 * n).powf(-0.5)
        )
    });
    Ok(AsymValue {
        value,
        value_dd: Dd::from(value),
        k_used: 1,
        first_omitted: None,
        prefactor,
        warning,
    })
}

/// Leading-order peak terms of `K̂_n`, at `(k + 1/2)π` for `k = 0..count`.
pub fn khat_peaks(n: f64, a: f64, count: usize) -> Result<Vec<PeakEstimate>, AsymError> {
    require_positive("n", n)?;
    require_positive("a", a)?;
    let pi = std::f64::consts::PI;
    let lead = pi * (-pi * a / 2.0).exp() * (pi / n).sqrt();
    Ok((0..count)
        .map(|k| PeakEstimate {
            k,
            contribution: lead * (k as f64 + 0.5) * (-(k as f64) * pi * a).exp(),
            c2: 0.0,
        })
        .collect())
}

/// `K̂_n ~ π^{3/2} cosh(πa/2) / (4 √n sinh²(πa/2))`.
pub fn eval_khat(n: f64, a: f64) -> Result<f64, AsymError> {
    require_positive("n", n)?;
    require_positive("a", a)?;
    let pi = std::f64::consts::PI;
    let h = 0.5 * pi * a;
    Ok(pi.powf(1.5) * h.cosh() / (4.0 * n.sqrt() * h.sinh().powi(2)))
}

/// `ξ(ν) = 2^ν Γ(1+ν) / j_{ν,1}^ν`.
pub fn xi(nu: f64) -> Result<f64, AsymError> {
    require_positive("nu", nu)?;
    let v = Dd::from(nu);
    let j = BesselRatio::new(v)?.first_zero()?;
    Ok((v * (Dd::LN_2 - j.ln())).exp().to_f64() * gamma_dd(v + Dd::ONE).to_f64())
}

/// Which tail estimate [`tail_bound`] should produce.
#[derive(Clone, Copy, Debug)]
pub enum TailFamily {
    /// `∫_π^∞ |sin x / x|^n dx < π^{1-n} / (n-1)`.
    Sinc,
    /// `∫_{j_{ν,1}}^∞ |σ|^n x^{2ν-1} dx < ξ(ν)^n j_{ν,1}² / ((n-2)ν)`.
    Ball { nu: f64 },
}

pub fn tail_bound(family: TailFamily, n: f64) -> Result<f64, AsymError> {
    match family {
        TailFamily::Sinc => {
            if !(n > 1.0) {
                return Err(AsymError::Domain(format!("sinc tail bound needs n > 1, got {n}")));
            }
            Ok(std::f64::consts::PI.powf(1.0 - n) / (n - 1.0))
        }
        TailFamily::Ball { nu } => {
            if !(n > 2.0) {
                return Err(AsymError::Domain(format!("ball tail bound needs n > 2, got {n}")));
            }
            require_positive("nu", nu)?;
            let j = BesselRatio::new(Dd::from(nu))?.first_zero()?.to_f64();
            Ok(xi(nu)?.powf(n) * j * j / ((n - 2.0) * nu))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{coeffs_ball, coeffs_in};

    #[test]
    fn leading_term_only() {
        let t = coeffs_in(12);
        let v = eval_in(50.0, &t, Truncation::Fixed(0)).unwrap();
        assert_eq!(v.value, (3.0 * std::f64::consts::PI / 100.0).sqrt());
        assert_eq!(v.k_used, 0);
        let j = eval_jn(50.0, &t, Truncation::Fixed(0)).unwrap();
        assert_eq!(j.value, (3.0 * std::f64::consts::PI / 50.0).sqrt());
    }

    #[test]
    fn order_exceeded_is_an_error() {
        let t = coeffs_in(4);
        assert!(matches!(
            eval_in(10.0, &t, Truncation::Fixed(5)),
            Err(AsymError::OrderExceeded { k: 5, order: 4 })
        ));
    }

    #[test]
    fn wrong_family_is_an_error() {
        let t = coeffs_ball(&Rational::frac(1, 2), 3).unwrap();
        assert!(matches!(eval_in(10.0, &t, Truncation::Fixed(1)), Err(AsymError::WrongFamily { .. })));
    }

    #[test]
    fn optimal_index_examples() {
        let c = [Rational::from(1), Rational::from(10), Rational::from(100)];
        assert_eq!(optimal_index(&c, 2.0), 0);
        let c = [Rational::from(1), Rational::frac(1, 2), Rational::frac(1, 4)];
        assert_eq!(optimal_index(&c, 2.0), 2);
        assert_eq!(optimal_truncation(&coeffs_in(12), 100.0), 12);
    }

    #[test]
    fn sigma_closed_first_case() {
        let s = (std::f64::consts::PI / 2.0).sinh();
        assert_eq!(sigma_closed(1, 1.0).unwrap(), 1.0 / (4.0 * s * s));
        assert!(sigma_closed(4, 1.0).is_err());
        assert!(sigma_closed(1, 0.0).is_err());
    }

    #[test]
    fn t1_variants_differ() {
        assert!((kn_t1(1.0, T1Variant::Derived) - kn_t1(1.0, T1Variant::Printed)).abs() > 1.0);
    }

    #[test]
    fn validity_warning() {
        assert!(eval_kn(100.0, 0.05, T1Variant::Derived).unwrap().warning.is_some());
        assert!(eval_kn(100.0, 1.0, T1Variant::Derived).unwrap().warning.is_none());
    }

    #[test]
    fn xi_at_half() {
        assert!((xi(0.5).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn sinc_tail_bound_values() {
        let pi = std::f64::consts::PI;
        assert!((tail_bound(TailFamily::Sinc, 2.0).unwrap() - 1.0 / pi).abs() < 1e-16);
        let b20 = tail_bound(TailFamily::Sinc, 20.0).unwrap();
        assert!((b20 / (pi.powi(-19) / 19.0) - 1.0).abs() < 1e-14);
        assert!(tail_bound(TailFamily::Sinc, 1.0).is_err());
        assert!(tail_bound(TailFamily::Ball { nu: 1.0 }, 2.0).is_err());
    }
}
