//! `fourisog` — exact census of elliptic curves over Q with Galois-stable
//! cyclic subgroups of order 4.
//!
//! Subcommands: `classify` a single curve, `count` N1/N2/full-scan tallies at
//! a height bound, `table` to reproduce the census tables with delta columns,
//! and `constants` to evaluate the asymptotic constants with error bounds.

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use fourisog::arithmetic::HeightBound;
use fourisog::census::{count_full_scan, count_n1_fast, count_n1_naive, count_n2, CensusResult};
use fourisog::constants::{assemble_constants, Estimate, DEFAULT_TOL};
use fourisog::curves::{classify_pairs, recover_triple, MinimalCurve};

#[derive(Parser)]
#[command(name = "fourisog", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify y^2 = x^3 + Ax + B: pair count, witnesses, and for two-pair
    /// curves the (r, v, w) parameter
    Classify {
        /// Coefficient A
        #[arg(long, allow_negative_numbers = true)]
        a: i128,
        /// Coefficient B
        #[arg(long, allow_negative_numbers = true)]
        b: i128,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// Count curves of height at most X
    Count {
        /// What to count: curves with >= 1 pair, >= 2 pairs, or a full
        /// classification scan
        kind: CountKind,
        /// Height bound: decimal ("4096"), power ("10^30"), or scientific
        /// with integer mantissa ("2e10")
        #[arg(long)]
        height: String,
        /// Counting algorithm (n1 only)
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
        /// Worker threads; 0 = auto-detect (or set FOURISOG_THREADS)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the census tables with their delta columns
    Table {
        /// Which table: n1 (X = 10^18..10^30) or n2 (X = 10^30..10^60)
        kind: TableKind,
        /// Skip rows above this height
        #[arg(long)]
        max_height: Option<String>,
        /// Worker threads; 0 = auto-detect (or set FOURISOG_THREADS)
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Evaluate every asymptotic constant with guaranteed error bounds
    Constants {
        /// Per-constant absolute error target
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountKind {
    N1,
    N2,
    Scan,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Naive,
    Fast,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    N1,
    N2,
}

fn main() {
    let cli = Cli::parse();
    let json = match &cli.command {
        Command::Classify { json, .. } | Command::Count { json, .. } | Command::Constants { json, .. } => *json,
        Command::Table { .. } => false,
    };
    if let Err(e) = run(cli) {
        if json {
            println!("{}", json!({ "error": format!("{e:#}") }));
        } else {
            eprintln!("error: {e:#}");
        }
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { a, b, json } => cmd_classify(a, b, json),
        Command::Count {
            kind,
            height,
            method,
            threads,
            json,
        } => {
            configure_threads(threads)?;
            cmd_count(kind, &height, method, json)
        }
        Command::Table {
            kind,
            max_height,
            threads,
        } => {
            configure_threads(threads)?;
            cmd_table(kind, max_height.as_deref())
        }
        Command::Constants { tol, json } => cmd_constants(tol, json),
    }
}

/// Thread count: the flag wins, then FOURISOG_THREADS, then auto.
fn configure_threads(flag: usize) -> Result<()> {
    let n = if flag > 0 {
        flag
    } else {
        std::env::var("FOURISOG_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

/// Accepts "123456", "10^30", and "25e9" (integer mantissa); anything
/// non-integral is rejected.
fn parse_height(s: &str) -> Result<HeightBound> {
    fourisog::arithmetic::parse_height_spec(s).map_err(|e| anyhow!("{e}"))
}

fn cmd_classify(a: i128, b: i128, json: bool) -> Result<()> {
    let curve = MinimalCurve::new(a, b).map_err(|e| anyhow!("{e}"))?;
    let class = classify_pairs(&curve).map_err(|e| anyhow!("{e}"))?;
    let triple = recover_triple(&curve);
    let height = curve.height();

    if json {
        let witnesses: Vec<_> = class
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "b0": w.b0.to_string(),
                    "a": w.a.to_string(),
                    "gamma": w.gamma.to_string(),
                    "delta": w.delta.to_string(),
                })
            })
            .collect();
        let mut out = json!({
            "a": a.to_string(),
            "b": b.to_string(),
            "height": height.to_string(),
            "count": class.count(),
            "witnesses": witnesses,
        });
        if let Some(t) = triple {
            out["triple"] = json!({
                "r": t.r(),
                "v": t.v(),
                "w": t.w(),
                "case": t.case_tag().to_string(),
            });
        }
        println!("{out}");
    } else {
        println!("curve:  y^2 = x^3 + ({a})x + ({b})");
        println!("height: {height}");
        println!("pairs of Galois-stable cyclic order-4 subgroups: {}", class.count());
        for w in &class.witnesses {
            println!(
                "  witness: b0 = {}, a = {}  (shift x -> x + b0 gives y^2 = x(x^2 + ({})x + {}^2))",
                w.b0, w.a, w.gamma, w.delta
            );
        }
        if let Some(t) = triple {
            println!(
                "two-pair parameter: (r, v, w) = ({}, {}, {}), case {}",
                t.r(),
                t.v(),
                t.w(),
                t.case_tag()
            );
        }
    }
    Ok(())
}

fn census_json(kind: CountKind, r: &CensusResult) -> serde_json::Value {
    let mut out = json!({
        "X": r.x.to_string(),
        "method": r.method.to_string(),
        "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
    });
    match kind {
        CountKind::N1 => {
            out["n1"] = json!(r.n1.expect("n1 present").to_string());
            out["n2"] = json!(r.n2.expect("n2 present").to_string());
            out["lattice_count"] = json!(r.lattice_count.expect("lattice present").to_string());
        }
        CountKind::N2 => {
            out["n2"] = json!(r.n2.expect("n2 present").to_string());
        }
        CountKind::Scan => unreachable!("scan uses its own schema"),
    }
    out
}

fn cmd_count(kind: CountKind, height: &str, method: Method, json: bool) -> Result<()> {
    let x = parse_height(height)?;
    match kind {
        CountKind::N1 => {
            let r = match method {
                Method::Naive => count_n1_naive(&x),
                Method::Fast => count_n1_fast(&x),
            }
            .map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", census_json(kind, &r));
            } else {
                println!(
                    "N1({x}) = {}  [lattice points {}, n2 {}, method {}, {:.2?}]",
                    r.n1.unwrap(),
                    r.lattice_count.unwrap(),
                    r.n2.unwrap(),
                    r.method,
                    r.elapsed
                );
            }
        }
        CountKind::N2 => {
            if method == Method::Naive {
                bail!("n2 has no naive method; `count scan` is the independent oracle");
            }
            let r = count_n2(&x).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", census_json(kind, &r));
            } else {
                println!("N2({x}) = {}  [method {}, {:.2?}]", r.n2.unwrap(), r.method, r.elapsed);
            }
        }
        CountKind::Scan => {
            let t = count_full_scan(&x).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!(
                    "{}",
                    json!({
                        "X": t.x.to_string(),
                        "method": "full_scan",
                        "zero_pairs": t.zero_pairs.to_string(),
                        "one_pair": t.one_pair.to_string(),
                        "two_pairs": t.two_pairs.to_string(),
                        "n1": t.at_least_one_pair().to_string(),
                        "n2": t.two_pairs.to_string(),
                        "elapsed_ms": t.elapsed.as_secs_f64() * 1e3,
                    })
                );
            } else {
                println!(
                    "scan({x}): {} curves — {} with no pair, {} with one pair, {} with two pairs  [{:.2?}]",
                    t.total_curves(),
                    t.zero_pairs,
                    t.one_pair,
                    t.two_pairs,
                    t.elapsed
                );
                println!("N1-compatible tally (>= 1 pair): {}", t.at_least_one_pair());
            }
        }
    }
    Ok(())
}

/// Round half away from zero to one decimal, as the tables print.
fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn cmd_table(kind: TableKind, max_height: Option<&str>) -> Result<()> {
    let max = max_height.map(parse_height).transpose()?;
    let within = |exp: u32| -> bool {
        max.as_ref()
            .map(|m| BigUint::from(10u32).pow(exp) <= *m.value())
            .unwrap_or(true)
    };
    let constants = assemble_constants(DEFAULT_TOL).map_err(|e| anyhow!("{e}"))?;
    match kind {
        TableKind::N1 => {
            println!("{:>8}  {:>14}  {:>34}", "X", "N1(X)", "N1 - c11 X^(1/3) - c12 X^(1/6)");
            for exp in [18u32, 21, 24, 27, 30] {
                if !within(exp) {
                    continue;
                }
                let x = HeightBound::pow10(exp);
                let n1 = count_n1_fast(&x).map_err(|e| anyhow!("{e}"))?.n1.unwrap();
                let xf = 10f64.powi(exp as i32);
                let delta = round1(
                    n1 as f64
                        - constants.c11.value * xf.powf(1.0 / 3.0)
                        - constants.c12.value * xf.powf(1.0 / 6.0),
                );
                println!("{:>8}  {:>14}  {:>34.1}", format!("10^{exp}"), n1, delta);
            }
        }
        TableKind::N2 => {
            println!("{:>8}  {:>14}  {:>34}", "X", "N2(X)", "N2 - c21 X^(1/6)");
            for exp in [30u32, 36, 42, 48, 54, 60] {
                if !within(exp) {
                    continue;
                }
                let x = HeightBound::pow10(exp);
                let n2 = count_n2(&x).map_err(|e| anyhow!("{e}"))?.n2.unwrap();
                let xf = 10f64.powi(exp as i32);
                let delta = round1(n2 as f64 - constants.c21.value * xf.powf(1.0 / 6.0));
                println!("{:>8}  {:>14}  {:>34.1}", format!("10^{exp}"), n2, delta);
            }
        }
    }
    Ok(())
}

/// Direct, gcd-filtered evaluation of s0 (coprime sum), used as the
/// independent check of the s0 = 16 s0' / (15 zeta(4)) relation.
fn s0_direct(tol: f64) -> f64 {
    let mut cutoff = (1.0 / (4.0 * tol)).sqrt().ceil() as u64;
    while 1.0 / (4.0 * (cutoff as f64).powi(2)) + 1.0 / (3.0 * (cutoff as f64).powi(3)) >= tol {
        cutoff += cutoff / 10 + 1;
    }
    let mut sum = 0.0;
    for w in 2..=cutoff {
        for v in (1 + w % 2..w).step_by(2) {
            if gcd(v, w) == 1 {
                let v4 = (v as f64).powi(4);
                let w4 = (w as f64).powi(4);
                sum += 1.0 / (v4 * v4 + 14.0 * v4 * w4 + w4 * w4).sqrt();
            }
        }
    }
    sum
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cmd_constants(tol: f64, json: bool) -> Result<()> {
    let start = Instant::now();
    let r = assemble_constants(tol).map_err(|e| anyhow!("{e}"))?;
    let elapsed = start.elapsed();

    let identity_residual = r.two_beta_identity_residual();
    let identity_budget = 2.0 * r.beta.error_bound + r.alpha3.error_bound + r.alpha4.error_bound;
    let s0_check_tol = 1e-8;
    let s0_ref = s0_direct(s0_check_tol);
    let s0_diff = (s0_ref - r.s0.value).abs();
    let s0_budget = s0_check_tol + r.s0.error_bound;

    if json {
        let est = |e: &Estimate| json!({ "value": e.value, "error_bound": e.error_bound });
        println!(
            "{}",
            json!({
                "tol": r.requested_tol,
                "elapsed_ms": elapsed.as_secs_f64() * 1e3,
                "zeta2": est(&r.zeta2), "zeta4": est(&r.zeta4),
                "alpha1": est(&r.alpha1), "alpha2": est(&r.alpha2),
                "alpha3": est(&r.alpha3), "alpha4": est(&r.alpha4),
                "beta": est(&r.beta),
                "i1": est(&r.i1), "i2": est(&r.i2), "i3": est(&r.i3), "i4": est(&r.i4),
                "s0_prime": est(&r.s0_prime), "s1_prime": est(&r.s1_prime), "s0": est(&r.s0),
                "c11": est(&r.c11), "c12": est(&r.c12), "c21": est(&r.c21),
                "checks": {
                    "two_beta_identity": {
                        "residual": identity_residual,
                        "budget": identity_budget,
                        "pass": identity_residual.abs() <= identity_budget,
                    },
                    "s0_direct_sum": {
                        "difference": s0_diff,
                        "budget": s0_budget,
                        "pass": s0_diff <= s0_budget,
                    },
                },
            })
        );
        return Ok(());
    }

    let row = |name: &str, e: &Estimate| println!("{name:<9}= {e}");
    row("zeta2", &r.zeta2);
    row("zeta4", &r.zeta4);
    row("alpha1", &r.alpha1);
    row("alpha2", &r.alpha2);
    row("alpha3", &r.alpha3);
    row("alpha4", &r.alpha4);
    row("beta", &r.beta);
    row("i1", &r.i1);
    row("i2", &r.i2);
    row("i3", &r.i3);
    row("i4", &r.i4);
    row("s0'", &r.s0_prime);
    row("s1'", &r.s1_prime);
    row("s0", &r.s0);
    row("c11", &r.c11);
    row("c12", &r.c12);
    row("c21", &r.c21);
    println!(
        "check: 2*beta - (alpha3 + alpha4) = {identity_residual:.2e} (budget {identity_budget:.1e}) {}",
        if identity_residual.abs() <= identity_budget { "OK" } else { "VIOLATED" }
    );
    println!(
        "check: s0 vs direct coprime sum   = {s0_diff:.2e} (budget {s0_budget:.1e}) {}",
        if s0_diff <= s0_budget { "OK" } else { "VIOLATED" }
    );
    println!("elapsed: {elapsed:.2?}");
    Ok(())
}
