mod routes;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use palinlen::oracle::{Oracle, DEFAULT_ORACLE_MAX};
use palinlen::recursion::pq_tables;
use palinlen::verify::{run_suite, Suite, VerifyConfig, DEFAULT_HORIZON, DEFAULT_ORACLE_HORIZON, MAX_HORIZON};
use palinlen::{to_ternary, DifferenceValue, Error, Exec};
use serde_json::{json, Map, Value};

use routes::{compare, Comparison, Function, Query, Route};

const DEFAULT_DUMP_HORIZON: u64 = 59_049;

const EXIT_FAILURE: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "palinlen", version, about = "Prefix palindromic length of the Sierpinski word")]
struct Cli {
    /// Run sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one n.
    Eval {
        function: Function,
        n: u64,
        /// Length of the b-run prepended for `qj`.
        #[arg(long, default_value_t = 0)]
        j: u64,
        #[arg(long, value_enum, default_value_t = Route::Recursion)]
        route: Route,
        #[arg(long, value_enum, default_value_t = EvalFormat::Text)]
        format: EvalFormat,
        /// Longest word the brute-force route may build.
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX)]
        oracle_max: usize,
    },
    /// Print a function over the inclusive range `from..=to`.
    Dump {
        function: Function,
        from: u64,
        to: u64,
        #[arg(long, default_value_t = 0)]
        j: u64,
        #[arg(long, value_enum, default_value_t = Route::Recursion)]
        route: Route,
        #[arg(long, value_enum, default_value_t = DumpFormat::Text)]
        format: DumpFormat,
        /// Largest `to` accepted.
        #[arg(long, default_value_t = DEFAULT_DUMP_HORIZON)]
        horizon: u64,
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX)]
        oracle_max: usize,
    },
    /// Run a verification suite and report each property.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Sweep bound; for the oracle suite, the bound of the brute-force sweep.
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX)]
        oracle_max: usize,
    },
    /// Write `n,ternary,p,q,t,dp,dq,dt` rows for `from..=to` as CSV.
    Export {
        from: u64,
        to: u64,
        #[arg(long, default_value_t = DEFAULT_DUMP_HORIZON)]
        horizon: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFormat {
    Text,
    Csv,
    Json,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
        .map_err(|_| format!("expected one of: {}", Suite::NAMES.join(", ")))
}

/// Failure carrying the process exit code.
struct Exit {
    code: u8,
    message: Option<String>,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit {
            code: EXIT_LIMIT,
            message: Some(e.to_string()),
        }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit {
            code: EXIT_FAILURE,
            message: Some(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match run(cli.command, exec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit { code, message }) => {
            if let Some(m) = message {
                eprintln!("palinlen: {m}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(command: Command, exec: Exec) -> Result<(), Exit> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match command {
        Command::Eval { function, n, j, route, format, oracle_max } => {
            check_limit("n", n, MAX_HORIZON)?;
            let oracle = Oracle { max_len: oracle_max, exec };
            let query = Query { function, j, from: n, to: n };
            let cmp = compare(query, route, &oracle)?;
            write_eval(&mut out, query, route, &cmp, format)?;
            disagreement(&cmp, query)
        }
        Command::Dump { function, from, to, j, route, format, horizon, oracle_max } => {
            check_limit("horizon", horizon, MAX_HORIZON)?;
            check_range(from, to, horizon)?;
            let oracle = Oracle { max_len: oracle_max, exec };
            let query = Query { function, j, from, to };
            let cmp = compare(query, route, &oracle)?;
            write_dump(&mut out, query, &cmp, format)?;
            disagreement(&cmp, query)
        }
        Command::Verify { suite, horizon, oracle_max } => {
            let mut cfg = VerifyConfig { oracle_max, exec, ..VerifyConfig::default() };
            match (suite, horizon) {
                (Suite::Oracle, Some(h)) => cfg.oracle_horizon = h,
                (Suite::All, Some(h)) => {
                    cfg.horizon = h;
                    cfg.oracle_horizon = h.min(DEFAULT_ORACLE_HORIZON);
                }
                (_, Some(h)) => cfg.horizon = h,
                (_, None) => cfg.horizon = DEFAULT_HORIZON,
            }
            let props = run_suite(suite, &cfg)?;
            for p in &props {
                writeln!(out, "{p}")?;
            }
            let failed = props.iter().filter(|p| !p.passed()).count();
            writeln!(out, "{} passed, {failed} failed", props.len() - failed)?;
            if failed > 0 {
                Err(Exit { code: EXIT_FAILURE, message: None })
            } else {
                Ok(())
            }
        }
        Command::Export { from, to, horizon } => {
            check_limit("horizon", horizon, MAX_HORIZON)?;
            check_range(from, to, horizon)?;
            write_export(&mut out, from, to)?;
            Ok(())
        }
    };
    out.flush()?;
    result
}

fn check_limit(what: &'static str, value: u64, max: u64) -> Result<(), Exit> {
    if value > max {
        return Err(Error::LimitExceeded { what, value, max }.into());
    }
    Ok(())
}

fn check_range(from: u64, to: u64, horizon: u64) -> Result<(), Exit> {
    if from > to {
        return Err(Error::Precondition(format!("empty range {from}..={to}")).into());
    }
    check_limit("range end", to, horizon)
}

fn disagreement(cmp: &Comparison, query: Query) -> Result<(), Exit> {
    match cmp.first_disagreement() {
        None => Ok(()),
        Some(i) => {
            let n = query.from + i as u64;
            let detail: Vec<String> = cmp
                .values
                .iter()
                .map(|(r, v)| format!("{r}={}", v[i]))
                .collect();
            Err(Exit {
                code: EXIT_DISAGREE,
                message: Some(format!(
                    "routes disagree on {} at n = {n}: {}",
                    query.function.name(),
                    detail.join(" ")
                )),
            })
        }
    }
}

fn glyph(v: i64) -> Option<char> {
    DifferenceValue::try_from(v).ok().map(DifferenceValue::glyph)
}

fn label(query: Query) -> String {
    match query.function {
        Function::Qj => format!("q_{}({})", query.j, query.from),
        f => format!("{}({})", f.name(), query.from),
    }
}

fn write_eval(
    out: &mut impl Write,
    query: Query,
    route: Route,
    cmp: &Comparison,
    format: EvalFormat,
) -> io::Result<()> {
    match format {
        EvalFormat::Text if route != Route::All => writeln!(out, "{}", cmp.values[0].1[0]),
        EvalFormat::Text => {
            writeln!(out, "{}", label(query))?;
            for (r, v) in &cmp.values {
                writeln!(out, "  {:<12}{}", r.name(), v[0])?;
            }
            for (r, e) in &cmp.skipped {
                writeln!(out, "  {:<12}skipped ({e})", r.name())?;
            }
            writeln!(out, "{}", if cmp.agree() { "AGREE" } else { "DISAGREE" })
        }
        EvalFormat::Json => {
            let routes: Map<String, Value> = cmp
                .values
                .iter()
                .map(|(r, v)| (r.name().to_owned(), json!(v[0])))
                .collect();
            let mut doc = json!({
                "fn": query.function.name(),
                "n": query.from,
                "routes": routes,
                "agree": cmp.agree(),
            });
            if query.function == Function::Qj {
                doc["j"] = json!(query.j);
            }
            if !cmp.skipped.is_empty() {
                let skipped: Map<String, Value> = cmp
                    .skipped
                    .iter()
                    .map(|(r, e)| (r.name().to_owned(), json!(e.to_string())))
                    .collect();
                doc["skipped"] = Value::Object(skipped);
            }
            writeln!(out, "{doc}")
        }
    }
}

fn write_dump(out: &mut impl Write, query: Query, cmp: &Comparison, format: DumpFormat) -> io::Result<()> {
    let Some((_, values)) = cmp.values.first() else {
        return Ok(());
    };
    let name = query.function.name();
    let with_glyph = query.function.is_difference();
    let rows = (query.from..=query.to).zip(values.iter().copied());
    match format {
        DumpFormat::Text => {
            for (n, v) in rows {
                match glyph(v).filter(|_| with_glyph) {
                    Some(g) => writeln!(out, "{n} {v} {g}")?,
                    None => writeln!(out, "{n} {v}")?,
                }
            }
        }
        DumpFormat::Csv => {
            if with_glyph {
                writeln!(out, "n,{name},glyph")?;
            } else {
                writeln!(out, "n,{name}")?;
            }
            for (n, v) in rows {
                match glyph(v).filter(|_| with_glyph) {
                    Some(g) => writeln!(out, "{n},{v},{g}")?,
                    None => writeln!(out, "{n},{v}")?,
                }
            }
        }
        DumpFormat::Json => {
            let items: Vec<Value> = rows
                .map(|(n, v)| {
                    let mut row = json!({ "n": n, "value": v });
                    if let Some(g) = glyph(v).filter(|_| with_glyph) {
                        row["glyph"] = json!(g.to_string());
                    }
                    row
                })
                .collect();
            writeln!(out, "{}", json!({ "fn": name, "values": items }))?;
        }
    }
    Ok(())
}

fn write_export(out: &mut impl Write, from: u64, to: u64) -> io::Result<()> {
    let (p, q) = pq_tables(to + 1);
    let t = |n: usize| p[n] as i64 - q[n] as i64;
    writeln!(out, "n,ternary,p,q,t,dp,dq,dt")?;
    for n in from..=to {
        let i = n as usize;
        writeln!(
            out,
            "{n},{},{},{},{},{},{},{}",
            to_ternary(n),
            p[i],
            q[i],
            t(i),
            p[i + 1] as i64 - p[i] as i64,
            q[i + 1] as i64 - q[i] as i64,
            t(i + 1) - t(i),
        )?;
    }
    Ok(())
}
