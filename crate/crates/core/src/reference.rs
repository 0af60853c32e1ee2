//! Published values the library is checked against.
//!
//! These are transcriptions, kept exactly as printed, including the entries
//! that later turned out to be misprints. [`ERRATA`] lists those entries and
//! the corrected values that the library produces.

use crate::rational::Rational;

/// `c_0 ..= c_12` of the sinc expansion, as printed.
pub const TABLE1: [&str; 13] = [
    "1",
    "-3/20",
    "-13/1120",
    "27/3200",
    "52791/3942400",
    "482427/66560000",
    "-124996631/10035200000",
    "-5270328789/136478720000",
    "-7479063506161/268461670400000",
    "6921977624613/56518246400000",
    "10703530420192887741/23658537943040000000",
    "5097105795373974189/20572641689600000000",
    "-12397974207837236059539/3620784937369600000000",
];

/// Coefficients of `x^2, x^4, ..., x^10` in `log(x / sin x)`.
pub const PHASE_SERIES: [&str; 5] = ["1/6", "1/180", "1/2835", "1/37800", "1/467775"];

/// Bracketed coefficients of `τ, τ^3, ..., τ^11` in `x(τ) / √6`.
pub const X_OF_TAU: [&str; 6] = ["1", "-1/10", "-13/4200", "9/14000", "17597/77616000", "4873/218400000"];

/// `b_0 ..= b_7` of `dx/dτ / √6`, as printed.
pub const B_SERIES: [&str; 8] = [
    "1",
    "-3/10",
    "-13/840",
    "9/2000",
    "17597/862400",
    "53603/218400000",
    "-124996631/1629936000000",
    "-159706933/4366252800000",
];

/// One row of the `K_n` comparison table.
#[derive(Clone, Copy, Debug)]
pub struct KnRow {
    pub n: u32,
    pub a: f64,
    /// Quadrature value, 8 decimals.
    pub k_n: f64,
    /// Two-term asymptotic estimate, 8 decimals.
    pub asymptotic: f64,
}

const fn row(n: u32, a: f64, k_n: f64, asymptotic: f64) -> KnRow {
    KnRow { n, a, k_n, asymptotic }
}

pub const TABLE2: [KnRow; 24] = [
    row(100, 1.0, 0.02707847, 0.02689533),
    row(200, 1.0, 0.01884203, 0.01880232),
    row(500, 1.0, 0.01181371, 0.01180983),
    row(1000, 1.0, 0.00833214, 0.00833153),
    row(2000, 1.0, 0.00588457, 0.00588447),
    row(4000, 1.0, 0.00415855, 0.00415854),
    row(100, 1.5, 0.00523230, 0.00521489),
    row(200, 1.5, 0.00364706, 0.00364449),
    row(500, 1.5, 0.00228888, 0.00228866),
    row(1000, 1.5, 0.00161452, 0.00161448),
    row(2000, 1.5, 0.00114026, 0.00114025),
    row(4000, 1.5, 0.00080580, 0.00080580),
    row(100, 0.5, 0.19606514, 0.19692975),
    row(200, 0.5, 0.13567443, 0.13484945),
    row(500, 0.5, 0.08386120, 0.08361625),
    row(1000, 0.5, 0.05878333, 0.05873199),
    row(2000, 0.5, 0.04139902, 0.04139062),
    row(4000, 0.5, 0.02921970, 0.02921838),
    row(100, 2.0, 0.00108887, 0.00108697),
    row(200, 2.0, 0.00075359, 0.00075332),
    row(500, 2.0, 0.00047067, 0.00047064),
    row(1000, 2.0, 0.00033143, 0.00033143),
    row(2000, 2.0, 0.00023387, 0.00023387),
    row(4000, 2.0, 0.00016520, 0.00016520),
];

/// Order of the Bessel family used in the relative-error table.
pub const TABLE3_NU: (i64, i64) = (4, 3);
/// Value of `n` used in the relative-error table.
pub const TABLE3_N: u32 = 100;
/// Exponents `a` (as `p/q`) heading the three columns.
pub const TABLE3_EXPONENTS: [(i64, i64); 3] = [(8, 3), (2, 3), (10, 3)];

/// Relative errors indexed `[k][column]` for `k = 0..=4`.
pub const TABLE3: [[f64; 3]; 5] = [
    [4.664e-3, 6.676e-4, 6.565e-3],
    [2.738e-6, 8.987e-7, 1.047e-5],
    [3.307e-8, 6.661e-10, 6.041e-8],
    [4.006e-10, 2.405e-11, 5.961e-10],
    [2.914e-12, 3.655e-13, 2.743e-12],
];

/// A printed value that disagrees with an independent recomputation.
#[derive(Clone, Copy, Debug)]
pub struct Erratum {
    pub id: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

pub const ERRATA: [Erratum; 6] = [
    Erratum {
        id: "b4",
        printed: "17597/862400",
        corrected: "17597/8624000",
        note: "the x(τ) coefficient 17597/77616000 and c_4 = b_4 (1/2)_4 both give the corrected value",
    },
    Erratum {
        id: "table2-K1000-a0.5",
        printed: "0.05878333",
        corrected: "0.05878343",
        note: "quadrature at 1e-14 relative gives 0.0587834332...; the asymptotic column entry is consistent with it",
    },
    Erratum {
        id: "T1-cosh-argument",
        printed: "2 + cosh(πa/2)",
        corrected: "2 + cosh(πa)",
        note: "the closed form of Σ k^3 e^{-kπa} gives cosh(πa); only that variant reproduces the asymptotic column",
    },
    Erratum {
        id: "ball-b4-denominator",
        printed: "(2+ν)^3 (3+ν)^2 (5+ν)",
        corrected: "(2+ν)^4 (3+ν)^2 (5+ν)",
        note: "required by c_4 = b_4 (ν)_4 with the printed c_4, which the pipeline reproduces",
    },
    Erratum {
        id: "psi4-at-k-pi",
        printed: "82/(kπ)^4 - 8/(kπ)^2",
        corrected: "84/(kπ)^4 - 8/(kπ)^2",
        note: "Taylor expansion and finite differences agree on 84; with 82 the generic saddle formula would not give the constant 9 in c_2",
    },
    Erratum {
        id: "peak-correction-factor",
        printed: "kπ √(π/n) {1 + c_2/n} e^{-kπa}",
        corrected: "kπ √(π/n) {1 + c_2/(2n)} e^{-kπa}",
        note: "the printed c_2 is twice the Laplace two-term correction; only the halved term sums to the closed form with T_1",
    },
];

/// Horner evaluation with integer coefficients listed from the highest degree down.
fn poly(coeffs: &[i64], x: &Rational) -> Rational {
    coeffs.iter().fold(Rational::zero(), |acc, &c| acc * x + Rational::from(c))
}

fn shifted(nu: &Rational, s: i64) -> Rational {
    nu + &Rational::from(s)
}

/// The published polynomials `℘_k(ν)`, `1 ≤ k ≤ 6`, in the closed forms of
/// the Bessel-family coefficients.
///
/// # Panics
/// For `k` outside `1..=6`.
pub fn ball_wp(k: usize, nu: &Rational) -> Rational {
    match k {
        1 => Rational::one(),
        2 => poly(&[3, 2, -5], nu),
        3 => shifted(nu, 1) * poly(&[1, -1, -4, -8], nu),
        4 => poly(&[15, 15, -220, -918, 763, 15055, 26898, 13688], nu),
        5 => poly(&[3, -7, -66, -246, 2307, 6825, -43668, -118508, -89904, -19392], nu),
        6 => poly(
            &[
                63, 0, -3276, -16856, 131726, 781856, -4685840, -14835768, 104879595, 322760624, -328990364,
                -1748824256, -1801386304, -590749440,
            ],
            nu,
        ),
        _ => panic!("closed forms are published for 1 <= k <= 6 only"),
    }
}

/// The published closed form `c_k(ν) = ν (1+ν) ℘_k(ν) / D_k(ν)`, `0 ≤ k ≤ 6`.
///
/// # Panics
/// For `k > 6`.
pub fn ball_c_closed(k: usize, nu: &Rational) -> Rational {
    let p = |s: i64, e: i32| shifted(nu, s).pow(e);
    let int = |c: i64| Rational::from(c);
    let denom = match k {
        0 => return Rational::one(),
        1 => int(2) * p(2, 1),
        2 => int(24) * p(2, 1) * p(3, 1),
        3 => int(48) * p(2, 2) * p(4, 1),
        4 => int(5760) * p(2, 3) * p(3, 1) * p(5, 1),
        5 => int(11520) * p(2, 4) * p(3, 1) * p(6, 1),
        6 => int(2903040) * p(2, 5) * p(3, 2) * p(4, 1) * p(7, 1),
        _ => panic!("closed forms are published for k <= 6 only"),
    };
    nu * &shifted(nu, 1) * ball_wp(k, nu) / denom
}
