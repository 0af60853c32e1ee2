use sinc_asym::oracle::{bessel_sigma, Oracle, OracleConfig, OracleError};
use sinc_asym::reference::TABLE2;
use sinc_asym::{Dd, Rational};

/// `I_n = π / (2^n (n-1)!) Σ_{k < n/2} (-1)^k C(n,k) (n-2k)^{n-1}` for integer `n`.
fn sinc_integral_exact(n: u32) -> Dd {
    let mut sum = Rational::zero();
    let mut binom = Rational::one();
    for k in 0..=n / 2 {
        let base = Rational::from((n - 2 * k) as i64);
        let term = &binom * &base.pow(n as i32 - 1);
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        binom = binom * Rational::from((n - k) as i64) / Rational::from(k as i64 + 1);
    }
    let mut denom = Rational::from(2).pow(n as i32);
    for j in 1..n {
        denom = denom * Rational::from(j as i64);
    }
    (sum / denom).to_dd() * Dd::PI
}

fn rel(a: Dd, b: Dd) -> f64 {
    ((a - b) / b).abs().to_f64()
}

#[test]
fn classical_closed_forms() {
    let oracle = Oracle::default();
    let i2 = oracle.integrate_in(2.0, 1e-14).unwrap();
    assert!(rel(i2.value_dd, Dd::PI.ldexp(-1)) < 1e-12);
    let i3 = oracle.integrate_in(3.0, 1e-14).unwrap();
    assert!(rel(i3.value_dd, Dd::PI.mul_f64(3.0).ldexp(-3)) < 1e-12);
}

#[test]
fn brute_force_riemann_sum_agrees_for_n_2() {
    // Midpoint sums on [0, 200π] plus the exact tail of the non-oscillating part.
    let x_max = 200.0 * std::f64::consts::PI;
    let steps = 2_000_000;
    let h = x_max / steps as f64;
    let mut s = 0.0;
    for i in 0..steps {
        let x = (i as f64 + 0.5) * h;
        s += (x.sin() / x).powi(2);
    }
    let approx = s * h + 0.5 / x_max;
    assert!((approx - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
}

#[test]
fn integer_n_matches_exact_finite_sum() {
    let oracle = Oracle::default();
    for n in [2u32, 3, 4, 5, 7, 10, 17, 33, 50, 64] {
        let q = oracle.integrate_in(n as f64, 1e-27).unwrap();
        let exact = sinc_integral_exact(n);
        assert!(rel(q.value_dd, exact) < 1e-27, "n = {n}: rel {:e}", rel(q.value_dd, exact));
        assert!((q.value_dd - exact).abs().to_f64() <= q.abs_err_est + q.tail_cert + 1e-30);
    }
}

#[test]
fn jn_is_twice_i_2n() {
    let oracle = Oracle::default();
    for n in [5.0, 50.0] {
        let j = oracle.integrate_jn(n, 1e-20).unwrap();
        let i = oracle.integrate_in(2.0 * n, 1e-20).unwrap();
        assert!(rel(j.value_dd, i.value_dd.mul_f64(2.0)) < 1e-19, "n = {n}");
    }
}

#[test]
fn kn_matches_published_column() {
    let oracle = Oracle::default();
    for row in TABLE2 {
        let q = oracle.integrate_kn(row.n as f64, row.a, 1e-12).unwrap();
        if row.n == 1000 && row.a == 0.5 {
            // Printed 0.05878333; independent multiprecision quadrature gives 0.0587834332...
            assert!((q.value - 0.05878343327).abs() < 1e-10);
        } else {
            assert!((q.value - row.k_n).abs() <= 5e-9, "n = {}, a = {}: {}", row.n, row.a, q.value);
        }
    }
}

#[test]
fn ball_integrals_match_multiprecision_reference() {
    let oracle = Oracle::default();
    let nu = Rational::frac(4, 3);
    let cases = [
        (Rational::frac(8, 3), 0.018814684445734506560),
        (Rational::frac(2, 3), 0.60718587876846890005),
        (Rational::frac(10, 3), 0.0086105208321728176988),
    ];
    for (a, want) in cases {
        let q = oracle.integrate_ball_exact(&nu, &a, 100.0, 1e-24).unwrap();
        assert!((q.value / want - 1.0).abs() < 1e-15, "a = {a}");
        assert!(q.rel_err() < 1e-24);
    }
}

#[test]
fn ball_at_half_reduces_to_sinc() {
    let oracle = Oracle::default();
    for n in [10.0, 20.0, 50.0] {
        let ball = oracle
            .integrate_ball_exact(&Rational::frac(1, 2), &Rational::one(), n, 1e-14)
            .unwrap();
        let sinc = oracle.integrate_in(n, 1e-20).unwrap();
        assert!(rel(ball.value_dd, sinc.value_dd) < 1e-13, "n = {n}");
    }
}

#[test]
fn halving_tolerance_stays_within_reported_error() {
    let oracle = Oracle::default();
    let runs: Vec<Box<dyn Fn(f64) -> sinc_asym::oracle::QuadResult>> = vec![
        Box::new(|t| oracle.integrate_in(100.0, t).unwrap()),
        Box::new(|t| oracle.integrate_kn(200.0, 1.5, t).unwrap()),
        Box::new(|t| oracle.integrate_khat(500.0, 1.0, t).unwrap()),
        Box::new(|t| oracle.integrate_ball(4.0 / 3.0, 2.0 / 3.0, 100.0, t).unwrap()),
    ];
    for run in &runs {
        for tol in [1e-8, 1e-12, 1e-16] {
            let coarse = run(tol);
            let fine = run(tol / 2.0);
            let diff = (coarse.value_dd - fine.value_dd).abs().to_f64();
            assert!(diff <= coarse.abs_err_est + coarse.tail_cert, "tol {tol:e}: {diff:e}");
        }
    }
}

#[test]
fn doubling_nodes_stays_within_reported_error() {
    let base = Oracle::default();
    let dense = Oracle::new(OracleConfig {
        gauss_order: 60,
        ..OracleConfig::default()
    });
    let a = base.integrate_kn(500.0, 0.5, 1e-14).unwrap();
    let b = dense.integrate_kn(500.0, 0.5, 1e-14).unwrap();
    assert!((a.value_dd - b.value_dd).abs().to_f64() <= a.abs_err_est + a.tail_cert);
    let a = base.integrate_in(7.0, 1e-20).unwrap();
    let b = dense.integrate_in(7.0, 1e-20).unwrap();
    assert!((a.value_dd - b.value_dd).abs().to_f64() <= a.abs_err_est + a.tail_cert);
}

#[test]
fn panels_are_additive() {
    let oracle = Oracle::default();
    let f = |x: Dd| (x.sin() / x).powi(3);
    let pi = std::f64::consts::PI;
    let left = oracle.integrate(f, 0.0, pi, 1e-20).unwrap();
    let right = oracle.integrate(f, pi, 2.0 * pi, 1e-20).unwrap();
    let whole = oracle.integrate(f, 0.0, 2.0 * pi, 1e-20).unwrap();
    assert!(rel(left.value_dd + right.value_dd, whole.value_dd) < 1e-14);
}

#[test]
fn sinc_tail_is_exponentially_small() {
    let oracle = Oracle::default();
    for n in [4u32, 8, 16, 20] {
        let tail = oracle.integrate_in_tail(n as f64, 1e-10).unwrap();
        let pi = std::f64::consts::PI;
        let bound = pi.powf(1.0 - n as f64) / (n as f64 - 1.0);
        assert!(tail.value.abs() <= bound, "n = {n}: {} vs {bound}", tail.value);
        let full = oracle.integrate_in(n as f64, 1e-20).unwrap();
        let head = oracle
            .integrate(|x: Dd| (x.sin() / x).powi(n as u64), 0.0, pi, 1e-20)
            .unwrap();
        assert!(rel(head.value_dd + tail.value_dd, full.value_dd) < 1e-9);
    }
}

#[test]
fn khat_is_monotone_in_a_and_n() {
    let oracle = Oracle::default();
    let values: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|&a| oracle.integrate_khat(500.0, a, 1e-12).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    let k1 = oracle.integrate_khat(500.0, 1.0, 1e-12).unwrap().value;
    let k2 = oracle.integrate_khat(1000.0, 1.0, 1e-12).unwrap().value;
    assert!(k2 < k1);
}

#[test]
fn khat_lower_limit_sensitivity() {
    let oracle = Oracle::default();
    let base = oracle.integrate_khat(2000.0, 1.0, 1e-12).unwrap().value;
    for lower in [0.8, 1.2] {
        let other = oracle.integrate_khat_from(2000.0, 1.0, lower, 1e-12).unwrap().value;
        assert!(((other - base) / base).abs() < 1e-12, "lower = {lower}");
    }
    // Below the root of cos x = x the base of the power is negative.
    assert!(matches!(
        oracle.integrate_khat_from(2000.0, 1.0, 0.5, 1e-12),
        Err(OracleError::Domain(_))
    ));
}

#[test]
fn non_integer_power_needs_modulus_flag() {
    let strict = Oracle::default();
    assert!(matches!(strict.integrate_in(10.5, 1e-12), Err(OracleError::Domain(_))));
    let modulus = Oracle::new(OracleConfig {
        modulus: true,
        ..OracleConfig::default()
    });
    let q = modulus.integrate_in(10.5, 1e-14).unwrap();
    assert!((q.value / 0.6602894381249162693989204 - 1.0).abs() < 1e-14);
}

#[test]
fn tolerance_outside_range_is_refused() {
    let oracle = Oracle::default();
    for tol in [0.0, 1e-31, 1.0, f64::NAN] {
        assert!(matches!(
            oracle.integrate_in(5.0, tol),
            Err(OracleError::BadTolerance { .. })
        ));
    }
}

#[test]
fn sigma_of_order_one_vanishes_at_first_zero() {
    let j11 = 3.8317059702075125;
    assert!(bessel_sigma(1.0, j11).unwrap().abs() < 1e-15);
}

#[test]
fn deep_tolerance_at_large_n_converges() {
    let q = Oracle::default().integrate_in(500.0, 1e-25).unwrap();
    assert!(q.rel_err() < 1e-25);
    assert!((q.value - 0.09705216673832456).abs() < 1e-16);
}
