//! Gamma function in double-double precision.
//!
//! `ln Γ(z)` comes from the Stirling series at `z >= 30`, reached by the
//! shift `Γ(x) = Γ(x + N) / (x (x+1) ... (x+N-1))`. With twelve Bernoulli
//! terms the truncation error at `z = 30` is below `10^-33`, so rounding the
//! result to `f64` is correct except in rare near-tie cases.

use std::sync::OnceLock;

use crate::dd::Dd;
use crate::rational::Rational;

const STIRLING_TERMS: usize = 12;
const SHIFT_TARGET: f64 = 30.0;

/// Bernoulli numbers `B_0 ..= B_n` (with `B_1 = -1/2`) from the recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // binomial(m+1, j) for j = 0..m
        let mut binom = Rational::one();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += &(&binom * bj);
            binom = binom * Rational::from((m + 1 - j) as i64) / Rational::from(j as i64 + 1);
        }
        // binom is now C(m+1, m)
        b.push(-acc / binom);
    }
    b
}

fn stirling_coeffs() -> &'static [Dd] {
    static COEFFS: OnceLock<Vec<Dd>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let b = bernoulli_numbers(2 * STIRLING_TERMS);
        (1..=STIRLING_TERMS)
            .map(|k| {
                let denom = Rational::from((2 * k * (2 * k - 1)) as i64);
                (&b[2 * k] / &denom).to_dd()
            })
            .collect()
    })
}

fn half_ln_two_pi() -> Dd {
    static V: OnceLock<Dd> = OnceLock::new();
    *V.get_or_init(|| (Dd::PI.ldexp(1)).ln().ldexp(-1))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_dd(x: Dd) -> Dd {
    assert!(x.hi > 0.0, "ln_gamma_dd needs a positive argument");
    let mut z = x;
    let mut shift_prod = Dd::ONE;
    while z.hi < SHIFT_TARGET {
        shift_prod *= z;
        z += Dd::ONE;
    }
    let zinv = z.recip();
    let zinv2 = zinv.sqr();
    let mut series = Dd::ZERO;
    let mut p = zinv;
    for c in stirling_coeffs() {
        series += *c * p;
        p *= zinv2;
    }
    let stirling = (z - 0.5) * z.ln() - z + half_ln_two_pi() + series;
    stirling - shift_prod.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma_dd(x: Dd) -> Dd {
    ln_gamma_dd(x).exp()
}

pub fn gamma(x: f64) -> f64 {
    gamma_dd(Dd::from(x)).to_f64()
}
