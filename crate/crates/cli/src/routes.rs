//! Evaluation of each function over a range of `n` by a chosen route.

use std::fmt;

use clap::ValueEnum;
use palinlen::automata::builtin_systems;
use palinlen::oracle::{j_bound, Oracle};
use palinlen::recursion::{pq_tables, Recursion};
use palinlen::{cf_dp, cf_dq, cf_dt, cf_q, cf_t, to_ternary, Error, MorphicSystem, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    P,
    Q,
    Qj,
    T,
    Dp,
    Dq,
    Dt,
}

impl Function {
    pub fn is_difference(self) -> bool {
        matches!(self, Function::Dp | Function::Dq | Function::Dt)
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::P => "p",
            Function::Q => "q",
            Function::Qj => "qj",
            Function::T => "t",
            Function::Dp => "dp",
            Function::Dq => "dq",
            Function::Dt => "dt",
        }
    }

    /// Base function whose first difference this is.
    fn integrand(self) -> Option<Function> {
        match self {
            Function::Dp => Some(Function::P),
            Function::Dq => Some(Function::Q),
            Function::Dt => Some(Function::T),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Oracle,
    Recursion,
    #[value(alias = "closed_form")]
    ClosedForm,
    Automaton,
    Morphic,
    All,
}

impl Route {
    pub const CONCRETE: [Route; 5] = [
        Route::Oracle,
        Route::Recursion,
        Route::ClosedForm,
        Route::Automaton,
        Route::Morphic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Oracle => "oracle",
            Route::Recursion => "recursion",
            Route::ClosedForm => "closed_form",
            Route::Automaton => "automaton",
            Route::Morphic => "morphic",
            Route::All => "all",
        }
    }

    pub fn supports(self, f: Function) -> bool {
        match self {
            Route::Oracle | Route::Recursion | Route::All => true,
            Route::ClosedForm | Route::Automaton | Route::Morphic => f != Function::Qj,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Query {
    pub function: Function,
    pub j: u64,
    pub from: u64,
    pub to: u64,
}

/// Values of `query.function` on `from..=to` computed by `route`.
pub fn evaluate(query: Query, route: Route, oracle: &Oracle) -> Result<Vec<i64>> {
    let Query { function, j, from, to } = query;
    if !route.supports(function) {
        return Err(Error::Precondition(format!(
            "route {route} does not compute {}",
            function.name()
        )));
    }
    let range = from..=to;
    let values = match route {
        Route::All => unreachable!("expanded by the caller"),
        Route::Recursion => {
            if function == Function::Qj {
                let r = Recursion::new();
                range.map(|n| r.qj(j, n) as i64).collect()
            } else {
                let (p, q) = pq_tables(to + 1);
                let value = |f: Function, n: u64| -> i64 {
                    let n = n as usize;
                    match f {
                        Function::P => p[n] as i64,
                        Function::Q => q[n] as i64,
                        _ => p[n] as i64 - q[n] as i64,
                    }
                };
                range.map(|n| at(function, n, value)).collect()
            }
        }
        Route::Oracle => {
            let top = to as usize + usize::from(function.is_difference());
            let rows = OracleRows::new(function, j, top, oracle)?;
            range.map(|n| at(function, n, |f, n| rows.value(f, n))).collect()
        }
        Route::ClosedForm => range
            .map(|n| {
                Ok(match function {
                    Function::P => (cf_q(&to_ternary(n)) + cf_t(&to_ternary(n))) as i64,
                    Function::Q => cf_q(&to_ternary(n)) as i64,
                    Function::T => cf_t(&to_ternary(n)) as i64,
                    Function::Dp => cf_dp(n)?.into(),
                    Function::Dq => cf_dq(n).into(),
                    Function::Dt => cf_dt(n).into(),
                    Function::Qj => unreachable!(),
                })
            })
            .collect::<Result<_>>()?,
        Route::Automaton => {
            let sys = builtin_systems();
            let dfao = match function {
                Function::P | Function::Dp => &sys.dp,
                Function::Q | Function::Dq => &sys.dq,
                _ => &sys.dt,
            };
            from_differences(function, from, to, |n| Ok(dfao.eval(n).value() as i64))?
        }
        Route::Morphic => {
            let sys = builtin_systems();
            let system: &MorphicSystem = match function {
                Function::P | Function::Dp => &sys.dp_morphic,
                Function::Q | Function::Dq => &sys.dq_morphic,
                _ => &sys.dt_morphic,
            };
            from_differences(function, from, to, |n| system.morphic_letter(n).map(i64::from))?
        }
    };
    Ok(values)
}

/// Value of `f` at `n`, taking a difference of the integrand when needed.
fn at(f: Function, n: u64, value: impl Fn(Function, u64) -> i64) -> i64 {
    match f.integrand() {
        Some(base) => value(base, n + 1) - value(base, n),
        None => value(f, n),
    }
}

/// Differences directly, or their running sum from `n = 0` for the base
/// functions (which all vanish at 0).
fn from_differences(
    f: Function,
    from: u64,
    to: u64,
    difference: impl Fn(u64) -> Result<i64>,
) -> Result<Vec<i64>> {
    if f.is_difference() {
        return (from..=to).map(difference).collect();
    }
    let mut sum = 0i64;
    let mut out = Vec::with_capacity((to - from + 1) as usize);
    for n in 0..=to {
        if n >= from {
            out.push(sum);
        }
        if n < to {
            sum += difference(n)?;
        }
    }
    Ok(out)
}

struct OracleRows {
    p: Vec<u32>,
    q: Vec<u32>,
    qj: Vec<u32>,
}

impl OracleRows {
    fn new(f: Function, j: u64, top: usize, oracle: &Oracle) -> Result<Self> {
        let needs_p = matches!(f, Function::P | Function::Dp | Function::T | Function::Dt);
        let needs_q = matches!(f, Function::Q | Function::Dq | Function::T | Function::Dt);
        if needs_q {
            // surface the limit in terms of the widest word the minimum needs
            let widest = top as u64 + j_bound(top as u64);
            if widest > oracle.max_len as u64 {
                return Err(Error::LimitExceeded {
                    what: "oracle word length",
                    value: widest,
                    max: oracle.max_len as u64,
                });
            }
        }
        Ok(OracleRows {
            p: if needs_p { oracle.p_row(top)? } else { Vec::new() },
            q: if needs_q { oracle.q_row(top)? } else { Vec::new() },
            qj: if f == Function::Qj { oracle.qj_row(j as usize, top)? } else { Vec::new() },
        })
    }

    fn value(&self, f: Function, n: u64) -> i64 {
        let n = n as usize;
        match f {
            Function::P => self.p[n] as i64,
            Function::Q => self.q[n] as i64,
            Function::T => self.p[n] as i64 - self.q[n] as i64,
            Function::Qj => self.qj[n] as i64,
            _ => unreachable!("differences are taken by the caller"),
        }
    }
}

/// Results of every requested route, with routes that could not run.
pub struct Comparison {
    pub values: Vec<(Route, Vec<i64>)>,
    pub skipped: Vec<(Route, Error)>,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.values.windows(2).all(|w| w[0].1 == w[1].1)
    }

    /// First index where two routes differ.
    pub fn first_disagreement(&self) -> Option<usize> {
        let (_, first) = self.values.first()?;
        (0..first.len()).find(|&i| self.values.iter().any(|(_, v)| v[i] != first[i]))
    }
}

/// Runs `route`, or every applicable route for [`Route::All`]. Under `All`, a
/// route that hits a resource limit is skipped rather than failing the query.
pub fn compare(query: Query, route: Route, oracle: &Oracle) -> Result<Comparison> {
    if route != Route::All {
        return Ok(Comparison {
            values: vec![(route, evaluate(query, route, oracle)?)],
            skipped: Vec::new(),
        });
    }
    let mut values = Vec::new();
    let mut skipped = Vec::new();
    for r in Route::CONCRETE.into_iter().filter(|r| r.supports(query.function)) {
        match evaluate(query, r, oracle) {
            Ok(v) => values.push((r, v)),
            Err(e @ Error::LimitExceeded { .. }) => skipped.push((r, e)),
            Err(e) => return Err(e),
        }
    }
    Ok(Comparison { values, skipped })
}
