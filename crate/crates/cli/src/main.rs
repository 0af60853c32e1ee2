use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sinc_asym::asym::{self, AsymValue, T1Variant, Truncation};
use sinc_asym::coeffs::{Family, DEFAULT_BALL_ORDER, DEFAULT_SINC_ORDER};
use sinc_asym::oracle::{Oracle, OracleConfig, OracleError, QuadResult, DEFAULT_GAUSS_ORDER};
use sinc_asym::reference::ERRATA;
use sinc_asym::verify::{self, Status, VerifyConfig};
use sinc_asym::Rational;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "sinc-asym", version, about = "Asymptotic expansions of sine-power and Bessel-power integrals, with quadrature cross-checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact expansion coefficients.
    Coeffs(CoeffsArgs),
    /// Evaluate an asymptotic estimate.
    Eval(EvalArgs),
    /// Evaluate an integral by quadrature.
    Oracle(OracleArgs),
    /// Regenerate a published table or figure data.
    Table(TableArgs),
    /// Run every self-check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffFamily {
    Sinc,
    Ball,
    #[value(name = "ball_general")]
    BallGeneral,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    family: CoeffFamily,
    /// Bessel order as an exact `p/q`.
    #[arg(long)]
    nu: Option<String>,
    /// Power of x in the weight, as an exact `p/q`.
    #[arg(long)]
    a: Option<String>,
    /// Highest coefficient index.
    #[arg(long = "K")]
    k: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFamily {
    Sinc,
    Jn,
    Ball,
    #[value(name = "ball_general")]
    BallGeneral,
    Kn,
    Khat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Derived,
    Printed,
}

impl From<Variant> for T1Variant {
    fn from(v: Variant) -> T1Variant {
        match v {
            Variant::Derived => T1Variant::Derived,
            Variant::Printed => T1Variant::Printed,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    family: EvalFamily,
    #[arg(long)]
    n: f64,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    a: Option<String>,
    /// Truncation index, or `auto` for the smallest term.
    #[arg(long, default_value = "auto")]
    kmax: String,
    /// Order of the coefficient table to build.
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Variant::Derived)]
    variant: Variant,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleFamily {
    Sinc,
    Jn,
    Kn,
    Khat,
    Ball,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    family: OracleFamily,
    #[arg(long)]
    n: f64,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    /// Integrate |sin x / x|^n for non-integer n.
    #[arg(long)]
    modulus: bool,
    #[arg(long, default_value_t = DEFAULT_GAUSS_ORDER)]
    gauss_order: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableId {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Fig1,
    Fig2,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_enum)]
    id: TableId,
    /// Quadrature tolerance (default 1e-10 for table 2, 1e-24 for table 3).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Variant::Derived)]
    variant: Variant,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    /// Random cases per algebraic law.
    #[arg(long, default_value_t = VerifyConfig::default().cases)]
    cases: usize,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

struct Outcome {
    text: String,
    doc: Value,
    ok: bool,
}

fn exact(name: &str, s: &str) -> Result<Rational> {
    s.parse::<Rational>()
        .map_err(|_| usage(format!("--{name} must be an exact rational p/q, got {s:?}")))
}

fn lenient(name: &str, s: &str) -> Result<Rational> {
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    let x: f64 = s.parse().map_err(|_| usage(format!("--{name}: cannot parse {s:?}")))?;
    Rational::from_f64(x).map_err(|e| usage(format!("--{name}: {e}")))
}

fn real(name: &str, s: Option<&String>) -> Result<f64> {
    let s = s.ok_or_else(|| usage(format!("--{name} is required for this family")))?;
    Ok(lenient(name, s)?.to_f64())
}

fn required<'a>(name: &str, s: Option<&'a String>) -> Result<&'a String> {
    s.ok_or_else(|| usage(format!("--{name} is required for this family")))
}

fn cmd_coeffs(args: &CoeffsArgs) -> Result<Outcome> {
    let family = match args.family {
        CoeffFamily::Sinc => Family::Sinc,
        CoeffFamily::Ball => Family::Ball,
        CoeffFamily::BallGeneral => Family::BallGeneral,
    };
    let nu = args.nu.as_deref().map(|s| exact("nu", s)).transpose()?;
    let a = args.a.as_deref().map(|s| exact("a", s)).transpose()?;
    let k = args.k.unwrap_or(match family {
        Family::Sinc => DEFAULT_SINC_ORDER,
        _ => DEFAULT_BALL_ORDER,
    });
    let table = verify::table_for(family, nu.as_ref(), a.as_ref(), k).map_err(usage)?;
    Ok(Outcome {
        text: table.to_text(),
        doc: table.to_json(),
        ok: true,
    })
}

fn parse_kmax(s: &str) -> Result<Truncation> {
    if s == "auto" {
        return Ok(Truncation::Optimal);
    }
    s.parse()
        .map(Truncation::Fixed)
        .map_err(|_| usage(format!("--kmax must be an index or `auto`, got {s:?}")))
}

fn asym_text(label: &str, v: &AsymValue) -> String {
    let mut out = format!("{label} ≈ {:.17e}\nk_used: {}\nprefactor: {:.17e}\n", v.value, v.k_used, v.prefactor);
    if let Some(t) = v.first_omitted {
        let _ = writeln!(out, "first_omitted: {t:.3e}");
    }
    if let Some(w) = &v.warning {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

fn cmd_eval(args: &EvalArgs) -> Result<Outcome> {
    if !(args.n > 0.0) || !args.n.is_finite() {
        return Err(usage(format!("--n must be positive, got {}", args.n)));
    }
    let kmax = parse_kmax(&args.kmax)?;
    let order = |default: usize| match (args.k, kmax) {
        (Some(k), _) => k,
        (None, Truncation::Fixed(k)) => k.max(default),
        (None, Truncation::Optimal) => default,
    };
    let n = args.n;
    let (label, value) = match args.family {
        EvalFamily::Sinc | EvalFamily::Jn => {
            let t = sinc_asym::coeffs::coeffs_in(order(DEFAULT_SINC_ORDER));
            if matches!(args.family, EvalFamily::Sinc) {
                ("I_n", asym::eval_in(n, &t, kmax))
            } else {
                ("J_n", asym::eval_jn(n, &t, kmax))
            }
        }
        EvalFamily::Ball => {
            let nu = lenient("nu", required("nu", args.nu.as_ref())?)?;
            let t = sinc_asym::coeffs::coeffs_ball(&nu, order(DEFAULT_BALL_ORDER)).map_err(|e| usage(e.to_string()))?;
            ("L", asym::eval_ball(&nu, n, &t, kmax))
        }
        EvalFamily::BallGeneral => {
            let nu = lenient("nu", required("nu", args.nu.as_ref())?)?;
            let a = lenient("a", required("a", args.a.as_ref())?)?;
            let t = sinc_asym::coeffs::coeffs_ball_general(&nu, &a, order(DEFAULT_BALL_ORDER))
                .map_err(|e| usage(e.to_string()))?;
            ("L", asym::eval_ball_general(&nu, &a, n, &t, kmax))
        }
        EvalFamily::Kn => {
            let a = real("a", args.a.as_ref())?;
            ("K_n", asym::eval_kn(n, a, args.variant.into()))
        }
        EvalFamily::Khat => {
            let a = real("a", args.a.as_ref())?;
            let v = asym::eval_khat(n, a).map_err(|e| usage(e.to_string()))?;
            return Ok(Outcome {
                text: format!("K̂_n ≈ {v:.17e}\n"),
                doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "asym_value", "family": "khat", "n": n, "value": v }),
                ok: true,
            });
        }
    };
    let v = value.map_err(|e| usage(e.to_string()))?;
    Ok(Outcome {
        text: asym_text(label, &v),
        doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "asym_value", "n": n, "result": v }),
        ok: true,
    })
}

fn quad_text(q: &QuadResult) -> String {
    format!(
        "value: {:.17e}\nabs_err_est: {:.3e}\ntail_cert: {:.3e}\npanels: {}\n",
        q.value, q.abs_err_est, q.tail_cert, q.panels
    )
}

fn cmd_oracle(args: &OracleArgs) -> Result<Outcome> {
    if args.gauss_order < 20 {
        return Err(usage("--gauss-order must be at least 20"));
    }
    let oracle = Oracle::new(OracleConfig {
        gauss_order: args.gauss_order,
        modulus: args.modulus,
        ..OracleConfig::default()
    });
    let (n, tol) = (args.n, args.tol);
    let result = match args.family {
        OracleFamily::Sinc => oracle.integrate_in(n, tol),
        OracleFamily::Jn => oracle.integrate_jn(n, tol),
        OracleFamily::Kn => oracle.integrate_kn(n, real("a", args.a.as_ref())?, tol),
        OracleFamily::Khat => oracle.integrate_khat(n, real("a", args.a.as_ref())?, tol),
        OracleFamily::Ball => {
            let nu = lenient("nu", required("nu", args.nu.as_ref())?)?;
            let a = match &args.a {
                Some(s) => lenient("a", s)?,
                None => &nu * &Rational::from(2),
            };
            oracle.integrate_ball_exact(&nu, &a, n, tol)
        }
    };
    match result {
        Ok(q) => Ok(Outcome {
            text: quad_text(&q),
            doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "quad_result", "result": q }),
            ok: true,
        }),
        Err(OracleError::NotConverged { best, requested }) => Ok(Outcome {
            text: format!("not converged to {requested:e}; best estimate:\n{}", quad_text(&best)),
            doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "quad_result", "converged": false, "result": *best }),
            ok: false,
        }),
        Err(e @ (OracleError::BadTolerance { .. } | OracleError::Domain(_) | OracleError::OutOfRange { .. })) => {
            Err(usage(e.to_string()))
        }
        Err(e) => Err(anyhow!(e)),
    }
}

fn table_one() -> Outcome {
    let rows = verify::table1();
    let mut text = String::from("k  computed  printed  match\n");
    for r in &rows {
        let _ = writeln!(text, "{}  {}  {}  {}", r.k, r.computed, r.printed, if r.exact_match { "yes" } else { "NO" });
    }
    Outcome {
        ok: rows.iter().all(|r| r.exact_match),
        doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "table", "table": "1", "rows": rows }),
        text,
    }
}

fn table_two(oracle: &Oracle, tol: f64, variant: T1Variant) -> Result<Outcome> {
    let rows = verify::table2(oracle, tol, variant).map_err(|e| anyhow!(e))?;
    let mut text = String::from("n     a    K_n (quadrature)  printed     delta      estimate    printed     delta      status\n");
    let mut ok = true;
    let mut statuses = Vec::new();
    for r in &rows {
        let id = format!("table2-K{}-a{}", r.n, r.a);
        let corrected = ERRATA.iter().find(|e| e.id == id).and_then(|e| e.corrected.parse::<f64>().ok());
        let status = match (r.oracle_matches(), r.asymptotic_matches()) {
            (true, true) => "ok",
            (false, true) if corrected.is_some_and(|c| (r.oracle - c).abs() <= verify::EIGHT_DECIMALS) => "erratum",
            _ => {
                ok = false;
                "MISMATCH"
            }
        };
        statuses.push(status);
        let _ = writeln!(
            text,
            "{:<5} {:<4} {:.10}      {:.8}  {:+.1e}  {:.8}  {:.8}  {:+.1e}  {status}",
            r.n,
            r.a,
            r.oracle,
            r.printed_oracle,
            r.oracle - r.printed_oracle,
            r.asymptotic,
            r.printed_asymptotic,
            r.asymptotic - r.printed_asymptotic
        );
    }
    Ok(Outcome {
        ok,
        doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "table", "table": "2", "tol": tol, "rows": rows, "status": statuses }),
        text,
    })
}

fn table_three(oracle: &Oracle, tol: f64) -> Result<Outcome> {
    let cells = verify::table3(oracle, tol).map_err(|e| anyhow!(e))?;
    let mut text = String::from("a     k  computed    printed     ratio  status\n");
    for c in &cells {
        let _ = writeln!(
            text,
            "{:<5} {}  {:.3e}  {:.3e}  {:.3}  {}",
            c.a,
            c.k,
            c.computed,
            c.printed,
            c.computed / c.printed,
            if c.matches() { "ok" } else { "MISMATCH" }
        );
    }
    Ok(Outcome {
        ok: cells.iter().all(|c| c.matches()),
        doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "table", "table": "3", "tol": tol, "cells": cells }),
        text,
    })
}

fn cmd_table(args: &TableArgs) -> Result<Outcome> {
    let oracle = Oracle::default();
    match args.id {
        TableId::One => Ok(table_one()),
        TableId::Two => table_two(&oracle, args.tol.unwrap_or(1e-10), args.variant.into()),
        TableId::Three => table_three(&oracle, args.tol.unwrap_or(1e-24)),
        TableId::Fig1 => {
            let samples = verify::fig1(5000.0, 1.0 / 6.0, 6.0, 600);
            let mut text = String::from("x  integrand  envelope\n");
            for [x, v, e] in &samples {
                let _ = writeln!(text, "{x:.2}  {v:.10e}  {e:.10e}");
            }
            Ok(Outcome {
                ok: true,
                doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "figure", "figure": "1", "n": 5000, "a": 1.0 / 6.0, "columns": ["x", "integrand", "envelope"], "samples": samples }),
                text,
            })
        }
        TableId::Fig2 => {
            let grid = verify::fig2(10.0, 0.25);
            let mut text = String::from("nu  xi\n");
            for [nu, x] in &grid {
                let _ = writeln!(text, "{nu:.2}  {x:.15}");
            }
            Ok(Outcome {
                ok: true,
                doc: json!({ "schema_version": SCHEMA_VERSION, "kind": "figure", "figure": "2", "columns": ["nu", "xi"], "samples": grid }),
                text,
            })
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let mut config = VerifyConfig {
        seed: args.seed,
        cases: args.cases,
        ..VerifyConfig::default()
    };
    if let Some(tol) = args.tol {
        config.table2_tol = tol;
    }
    let report = verify::run(&config);
    let mut text = report.to_text();
    if report.count(Status::Erratum) > 0 {
        text.push_str("# recorded errata:\n");
        for e in &ERRATA {
            let _ = writeln!(text, "#   {}: printed {}, corrected {}", e.id, e.printed, e.corrected);
        }
    }
    let errata: Vec<Value> = ERRATA
        .iter()
        .map(|e| json!({ "id": e.id, "printed": e.printed, "corrected": e.corrected, "note": e.note }))
        .collect();
    Ok(Outcome {
        ok: report.ok(),
        doc: json!({ "kind": "verify_report", "report": report, "errata": errata }),
        text,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(o) => {
            match cli.format {
                Format::Text => print!("{}", o.text),
                Format::Structured => {
                    let mut doc = o.doc;
                    if let Some(map) = doc.as_object_mut() {
                        map.entry("schema_version").or_insert(json!(SCHEMA_VERSION));
                    }
                    println!("{}", serde_json::to_string_pretty(&doc).expect("values serialise"));
                }
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
