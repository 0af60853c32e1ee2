//! Closed-form coefficient families checked against the generic pipeline.

use sinc_asym::coeffs::{coeffs_ball, coeffs_ball_general, coeffs_in};
use sinc_asym::reference::{ball_c_closed as c_closed, ball_wp as wp};
use sinc_asym::{pochhammer, Rational};

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

/// Horner evaluation with coefficients listed from the highest degree down.
fn poly(coeffs: &[i64], x: &Rational) -> Rational {
    coeffs
        .iter()
        .fold(Rational::zero(), |acc, &c| acc * x + Rational::from(c))
}

fn nu_grid() -> Vec<Rational> {
    vec![
        r(1, 2),
        r(2, 3),
        r(3, 4),
        r(1, 1),
        r(5, 4),
        r(4, 3),
        r(3, 2),
        r(2, 1),
        r(5, 2),
        r(3, 1),
        r(7, 2),
        r(4, 1),
        r(9, 2),
        r(6, 1),
        r(17, 5),
        r(1, 7),
    ]
}

fn shifted(nu: &Rational, s: i64) -> Rational {
    nu + &Rational::from(s)
}

#[test]
fn ball_coefficients_match_closed_forms() {
    for nu in nu_grid() {
        let table = coeffs_ball(&nu, 6).unwrap();
        for k in 0..=6 {
            assert_eq!(table.c[k], c_closed(k, &nu), "nu = {nu}, k = {k}");
        }
    }
}

#[test]
fn ball_b_coefficients_match_closed_forms() {
    for nu in nu_grid() {
        let table = coeffs_ball(&nu, 4).unwrap();
        let p = |s: i64, e: i32| shifted(&nu, s).pow(e);
        assert_eq!(table.b[1], shifted(&nu, 1) / (r(2, 1) * p(2, 1)));
        assert_eq!(table.b[2], wp(2, &nu) / (r(24, 1) * p(2, 1) * p(3, 1)));
        assert_eq!(table.b[3], wp(3, &nu) / (r(48, 1) * p(2, 3) * p(4, 1)));
        // Denominator carries (2+ν)^4 so that c_4 = b_4 (ν)_4.
        assert_eq!(
            table.b[4],
            wp(4, &nu) / (r(5760, 1) * p(2, 4) * p(3, 2) * p(5, 1))
        );
        for k in 0..=4 {
            assert_eq!(table.c[k], &table.b[k] * &pochhammer(&nu, k));
        }
    }
}

#[test]
fn ball_at_half_matches_sinc_magnitudes() {
    let ball = coeffs_ball(&r(1, 2), 6).unwrap();
    let sinc = coeffs_in(6);
    for k in 0..=6 {
        assert_eq!(ball.signed(k), sinc.c[k], "k = {k}");
        assert_eq!(ball.c[k].abs(), sinc.c[k].abs());
    }
}

fn d_closed(k: usize, nu: &Rational, a: &Rational) -> Rational {
    let half_a = a * &r(1, 2);
    let p = |s: i64, e: i32| shifted(nu, s).pow(e);
    let n = |c: i64| Rational::from(c);
    match k {
        0 => Rational::one(),
        1 => pochhammer(&half_a, 2) / (n(2) * p(2, 1)),
        2 => {
            let body = (a * &n(3) - n(14)) * nu + a * &n(9) - n(10);
            pochhammer(&half_a, 3) * body / (n(48) * p(2, 2) * p(3, 1))
        }
        3 => {
            let a2 = a * a;
            let body = (&a2 - &(a * &n(14)) + n(64)) * nu.pow(2)
                + (a2.clone() * n(7) - a * &n(66) + n(32)) * nu
                + n(4) * (a - &n(4)) * (a * &n(3) + n(2));
            pochhammer(&half_a, 4) * body / (n(192) * p(2, 3) * p(3, 1) * p(4, 1))
        }
        4 => {
            let cubic = |c3: i64, c2: i64, c1: i64, c0: i64| poly(&[c3, c2, c1, c0], a);
            let body = poly_rat(
                &[
                    cubic(15, -420, 4820, -23824),
                    cubic(225, -5340, 42860, -65776),
                    cubic(1245, -23340, 103740, 100560),
                    cubic(3015, -39300, 45940, 252784),
                    cubic(2700, -18000, -18800, 109504),
                ],
                nu,
            );
            pochhammer(&half_a, 5) * body
                / (n(46080) * p(2, 4) * p(3, 2) * p(4, 1) * p(5, 1))
        }
        _ => unreachable!(),
    }
}

fn poly_rat(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .fold(Rational::zero(), |acc, c| acc * x + c.clone())
}

#[test]
fn general_coefficients_match_closed_forms() {
    let exps = [r(2, 3), r(1, 1), r(8, 3), r(10, 3), r(5, 2)];
    for nu in nu_grid() {
        for a in &exps {
            let table = coeffs_ball_general(&nu, a, 4).unwrap();
            for k in 0..=4 {
                assert_eq!(table.c[k], d_closed(k, &nu, a), "nu = {nu}, a = {a}, k = {k}");
            }
        }
    }
}

#[test]
fn general_reduces_to_ball_when_exponent_is_two_nu() {
    for nu in nu_grid() {
        let a = &nu * &r(2, 1);
        let general = coeffs_ball_general(&nu, &a, 4).unwrap();
        let ball = coeffs_ball(&nu, 4).unwrap();
        assert_eq!(general.c, ball.c, "nu = {nu}");
        assert_eq!(general.scale_sq, ball.scale_sq);
    }
}
