mod envelope;
mod selftest;
mod table;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qsimplex::arith::{set_factor_budget, Rational};
use qsimplex::classify::{classify_engine, classify_table, explain, place_label, Query, Verdict};
use qsimplex::error::Error;
use qsimplex::witness::{
    canonical_simplex, four_simplex_in_q5, search_lattice_witness, SearchConfig, Witness,
};
use serde_json::{json, Value};

use envelope::{
    render, ErrorBody, Report, EXIT_DISAGREEMENT, EXIT_FAILURE, EXIT_MEMBER, EXIT_NOT_MEMBER,
    EXIT_USAGE,
};
use selftest::SelftestConfig;

const BUDGET_VAR: &str = "QSIMPLEX_FACTOR_BUDGET";

#[derive(Parser)]
#[command(name = "qsimplex", version, about = "Which squared edge lengths do regular simplices with rational vertices have?")]
struct Cli {
    /// Print a single JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether m is the squared edge of a regular d-simplex in Q^n.
    Classify(ClassifyArgs),
    /// Search for explicit rational vertices.
    Witness(WitnessArgs),
    /// Print the symbolic classification table.
    Table(TableArgs),
    /// Run the built-in consistency sweeps.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    n: u64,
    /// Integer or fraction p/q.
    #[arg(long, allow_hyphen_values = true)]
    m: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Table,
    Engine,
    Both,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// List every consulted condition, not only failures.
    #[arg(long)]
    explain: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Table)]
    method: MethodArg,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// Largest absolute value of a coordinate.
    #[arg(long, default_value_t = 3)]
    bound: u32,
    /// Largest denominator q tried.
    #[arg(long, default_value_t = 2)]
    scale_max: u32,
    /// Search effort in nodes.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Use a fixed construction instead of searching.
    #[arg(long)]
    builtin: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("dims").required(true).args(["d", "dmax"])))]
struct TableArgs {
    #[arg(long)]
    d: Option<u64>,
    /// Render every d from 1 to this value.
    #[arg(long)]
    dmax: Option<u64>,
    #[arg(long, default_value_t = 3)]
    codim_max: u64,
    /// Comma-separated m values to evaluate in every cell.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sample_m: Vec<String>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 12)]
    grid_dmax: u64,
    #[arg(long, default_value_t = 4)]
    grid_codim: u64,
    #[arg(long, default_value_t = 50)]
    m_bound: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_symbol_flip: bool,
}

fn query_input(q: &QueryArgs) -> Value {
    json!({ "d": q.d, "n": q.n, "m": q.m })
}

fn parse_query(q: &QueryArgs) -> Result<Query, Error> {
    Query::new(q.d, q.n, q.m.parse::<Rational>()?)
}

fn verdict_text(v: &Verdict, out: &mut String) {
    let method = serde_json::to_value(v.method).unwrap();
    let _ = writeln!(
        out,
        "{}: member = {} (codimension row {}, d mod 4 = {})",
        method.as_str().unwrap_or_default(),
        v.member,
        v.row,
        v.column
    );
    for c in &v.checks {
        let place = c.place.as_ref().map(place_label).unwrap_or_else(|| "global".into());
        let mark = if c.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {place}: {}", c.detail);
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Report {
    let method = match args.method {
        MethodArg::Table => "table",
        MethodArg::Engine => "engine",
        MethodArg::Both => "both",
    };
    let mut input = query_input(&args.query);
    input["explain"] = json!(args.explain);
    input["method"] = json!(method);

    let run = || -> Result<Vec<Verdict>, Error> {
        let q = parse_query(&args.query)?;
        let table = || if args.explain { explain(&q) } else { classify_table(&q) };
        let engine = || {
            let mut v = classify_engine(&q)?;
            if !args.explain {
                v.checks.retain(|c| !c.passed);
            }
            Ok::<_, Error>(v)
        };
        Ok(match args.method {
            MethodArg::Table => vec![table()?],
            MethodArg::Engine => vec![engine()?],
            MethodArg::Both => vec![table()?, engine()?],
        })
    };
    let verdicts = match run() {
        Ok(v) => v,
        Err(e) => return Report::from_error("classify", input, &e),
    };
    if verdicts.iter().any(|v| v.member != verdicts[0].member) {
        let body = ErrorBody {
            code: "disagreement".into(),
            message: format!(
                "table says {}, engine says {}",
                verdicts[0].member, verdicts[1].member
            ),
        };
        return Report::error("classify", input, body, EXIT_DISAGREEMENT);
    }
    let member = verdicts[0].member;
    let mut text = String::new();
    for v in &verdicts {
        verdict_text(v, &mut text);
    }
    let result = json!({ "member": member, "verdicts": verdicts });
    let exit = if member { EXIT_MEMBER } else { EXIT_NOT_MEMBER };
    Report::ok("classify", input, result, text.trim_end().to_string(), exit)
}

/// Pads every vertex with zeros up to dimension `n`.
fn embed(w: &Witness, n: usize) -> Witness {
    let vertices = w
        .vertices()
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.resize(n, Rational::zero());
            v
        })
        .collect();
    Witness::new(n, vertices, w.edge_sq().clone())
}

fn builtin_witness(q: &Query) -> Option<Witness> {
    let (d, n) = (q.d() as usize, q.n() as usize);
    if d == 4 && n >= 5 && *q.m() == Rational::from(10) {
        return Some(embed(&four_simplex_in_q5(), n));
    }
    if n > d && *q.m() == Rational::from(2) {
        return canonical_simplex(d).ok().map(|w| embed(&w, n));
    }
    None
}

fn witness_text(w: &Witness) -> String {
    let mut out = format!("{} vertices in Q^{}, squared edge {}", w.vertices().len(), w.ambient_dim(), w.edge_sq());
    for v in w.vertices() {
        let coords: Vec<String> = v.iter().map(ToString::to_string).collect();
        let _ = write!(out, "\n  ({})", coords.join(", "));
    }
    out
}

fn cmd_witness(args: &WitnessArgs) -> Report {
    let mut input = query_input(&args.query);
    input["bound"] = json!(args.bound);
    input["scale_max"] = json!(args.scale_max);
    input["budget"] = json!(args.budget);
    input["builtin"] = json!(args.builtin);

    let fail = |e: &Error| Report::from_error("witness", input.clone(), e);
    let q = match parse_query(&args.query) {
        Ok(q) => q,
        Err(e) => return fail(&e),
    };
    let verdict = match classify_table(&q) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    if !verdict.member {
        let reason = verdict
            .failed_checks()
            .next()
            .map(|c| c.detail.clone())
            .unwrap_or_else(|| "not in the classified set".into());
        let text = format!("not a member, no search performed: {reason}");
        let result = json!({ "member": false, "reason": reason, "witness": null });
        return Report::ok("witness", input, result, text, EXIT_NOT_MEMBER);
    }

    let (witness, source) = if args.builtin {
        match builtin_witness(&q) {
            Some(w) => (w, "builtin"),
            None => {
                let body = ErrorBody {
                    code: "no_builtin".into(),
                    message: format!(
                        "no built-in construction for (d, n, m) = ({}, {}, {})",
                        q.d(),
                        q.n(),
                        q.m()
                    ),
                };
                return Report::error("witness", input, body, EXIT_USAGE);
            }
        }
    } else {
        let found = SearchConfig::new(args.bound, args.scale_max, args.budget)
            .and_then(|cfg| search_lattice_witness(&q, &cfg));
        match found {
            Ok(w) => (w, "search"),
            Err(e) => return fail(&e),
        }
    };
    let text = witness_text(&witness);
    let result = json!({ "member": true, "source": source, "witness": witness });
    Report::ok("witness", input, result, text, EXIT_MEMBER)
}

fn cmd_table(args: &TableArgs) -> Report {
    let ds: Vec<u64> = match (args.d, args.dmax) {
        (Some(d), _) => vec![d],
        (None, Some(dmax)) => (1..=dmax).collect(),
        (None, None) => unreachable!("clap requires one of --d and --dmax"),
    };
    let input = json!({ "d": args.d, "dmax": args.dmax, "codim_max": args.codim_max, "sample_m": args.sample_m });

    let run = || -> Result<(Vec<Value>, String), Error> {
        let samples: Vec<Rational> = args.sample_m.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        let mut cells = Vec::new();
        let mut text = String::new();
        for &d in &ds {
            let _ = writeln!(text, "d = {d} (d mod 4 = {})", d % 4);
            for c in 0..=args.codim_max {
                let label = table::cell_label(d, c)?;
                let mut evaluated = Vec::new();
                let mut line = format!("  n - d = {c}: {label}");
                for m in &samples {
                    let member = classify_table(&Query::new(d, d + c, m.clone())?)?.member;
                    let _ = write!(line, "  [m={m}: {}]", if member { "yes" } else { "no" });
                    evaluated.push(json!({ "m": m, "member": member }));
                }
                let _ = writeln!(text, "{line}");
                cells.push(json!({ "d": d, "codim": c, "label": label, "samples": evaluated }));
            }
        }
        Ok((cells, text))
    };
    match run() {
        Ok((cells, text)) => Report::ok(
            "table",
            input,
            json!({ "cells": cells }),
            text.trim_end().to_string(),
            EXIT_MEMBER,
        ),
        Err(e) => Report::from_error("table", input, &e),
    }
}

fn cmd_selftest(args: &SelftestArgs) -> Report {
    let cfg = SelftestConfig {
        grid_dmax: args.grid_dmax,
        grid_codim: args.grid_codim,
        m_bound: args.m_bound,
        seed: args.seed,
        inject_symbol_flip: args.inject_symbol_flip,
    };
    let input = serde_json::to_value(&cfg).expect("config serializes");
    if cfg.grid_dmax < 1 || cfg.m_bound < 1 {
        let e = Error::InvalidQuery("--grid-dmax and --m-bound must be at least 1".into());
        return Report::from_error("selftest", input, &e);
    }
    let out = match selftest::run(&cfg) {
        Ok(out) => out,
        Err(e) => return Report::from_error("selftest", input, &e),
    };
    let counts: String = out
        .tallies
        .iter()
        .map(|t| format!("{}: {}/{}", t.name, t.passed, t.total))
        .collect::<Vec<_>>()
        .join("\n");
    match out.counterexample {
        None => Report::ok(
            "selftest",
            input,
            json!({ "passed": true, "suites": out.tallies }),
            counts,
            EXIT_MEMBER,
        ),
        Some(msg) => {
            let mut r = Report::error(
                "selftest",
                input,
                ErrorBody { code: "selftest_failed".into(), message: msg },
                EXIT_FAILURE,
            );
            // the counterexample is always printed as an envelope
            r.text = format!("{counts}\n{}", render(&r.envelope()));
            r
        }
    }
}

fn configure_budget() -> Result<(), Box<Report>> {
    let Ok(raw) = std::env::var(BUDGET_VAR) else {
        return Ok(());
    };
    match raw.trim().parse::<u64>() {
        Ok(b) if b > 0 => {
            set_factor_budget(b);
            Ok(())
        }
        _ => Err(Box::new(Report::error(
            "env",
            json!({ BUDGET_VAR: raw }),
            ErrorBody {
                code: "bad_environment".into(),
                message: format!("{BUDGET_VAR} must be a positive integer, got {raw:?}"),
            },
            EXIT_USAGE,
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = configure_budget().err().map(|r| *r).unwrap_or_else(|| match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Table(a) => cmd_table(a),
        Command::Selftest(a) => cmd_selftest(a),
    });
    if !cli.quiet {
        if cli.json {
            println!("{}", render(&report.envelope()));
        } else if report.outcome.is_ok() || report.command == "selftest" {
            println!("{}", report.text);
        } else {
            eprintln!("{}", report.text);
        }
    }
    ExitCode::from(report.exit)
}
