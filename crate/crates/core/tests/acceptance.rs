//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use palinlen::closed_form::fibonacci;
use palinlen::recursion::q_table;
use palinlen::ternary::pow3;
use palinlen::verify::{product_properties, q_vs_overline_property, sequence_failure, Property, Tables};
use palinlen::{
    cf_dp, cf_q, count_s, in_s, oracle_p, oracle_q, oracle_qj, overline, builtin_systems, pl_table, rec_p, rec_q,
    rec_qj, to_ternary, Exec, FiniteWord, Oracle, TernaryExpansion,
};

type Outcome = Result<(), String>;

const SWEEP: u64 = 59_049;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn first_bad(range: impl Iterator<Item = u64>, check: impl Fn(u64) -> Outcome) -> Outcome {
    for n in range {
        check(n)?;
    }
    Ok(())
}

fn properties(props: Vec<Property>) -> Outcome {
    match props.into_iter().find(|p| !p.passed()) {
        None => Ok(()),
        Some(p) => Err(p.to_string()),
    }
}

fn tern(s: &str) -> TernaryExpansion {
    s.parse().expect("ternary literal")
}

fn worked_example() -> Outcome {
    let x = tern("22202000022000202002");
    let bar = tern("20222200222020221");
    ensure(cf_q(&x) == 8, || format!("cf_q(x) = {}", cf_q(&x)))?;
    ensure(cf_q(&bar) == 7, || format!("cf_q(overline x) = {}", cf_q(&bar)))?;
    let got = overline(&x).map_err(|e| e.to_string())?;
    ensure(got == bar, || format!("overline(x) = {got}"))
}

fn motivating_example() -> Outcome {
    let w: FiniteWord = "ababbaabbbaaa".parse().map_err(|e: palinlen::Error| e.to_string())?;
    let table = pl_table(&w).map_err(|e| e.to_string())?;
    ensure(table.total() == 4, || format!("PL = {}", table.total()))
}

fn p_routes(tables: &Tables) -> Outcome {
    let oracle = Oracle::default();
    let row = oracle.p_row(2000).map_err(|e| e.to_string())?;
    first_bad(0..=2000, |n| {
        let r = rec_p(n);
        ensure(row[n as usize] == r, || format!("n = {n}: oracle {} recursion {r}", row[n as usize]))
    })?;
    for n in [0usize, 1, 7, 8, 1000, 2000] {
        ensure(oracle_p(n) == Ok(row[n]), || format!("oracle_p({n}) differs from its row"))?;
    }
    let sys = builtin_systems();
    let diff = |n: u64| tables.p[n as usize + 1] as i64 - tables.p[n as usize] as i64;
    if let Some(e) = sequence_failure(Exec::default(), SWEEP, &sys.dp, &sys.dp_morphic, diff) {
        return Err(e);
    }
    first_bad(0..SWEEP, |n| {
        let cf = cf_dp(n).map_err(|e| e.to_string())?;
        ensure(i64::from(cf) == diff(n), || format!("n = {n}: cf_dp {cf} difference {}", diff(n)))
    })?;
    first_bad(0..SWEEP, |n| {
        ensure(rec_p(n) == tables.p[n as usize], || format!("n = {n}: memoised rec_p differs from table"))
    })
}

fn q_routes(tables: &Tables) -> Outcome {
    let row = Oracle::default().q_row(1000).map_err(|e| e.to_string())?;
    first_bad(0..=1000, |n| {
        let r = rec_q(n);
        ensure(row[n as usize] == r, || format!("n = {n}: oracle {} recursion {r}", row[n as usize]))
    })?;
    for n in [0usize, 7, 100, 300] {
        ensure(oracle_q(n) == Ok(row[n]), || format!("oracle_q({n}) differs from its row"))?;
    }
    first_bad(0..SWEEP, |n| {
        let (r, cf) = (rec_q(n), cf_q(&to_ternary(n)));
        ensure(r == cf && r == tables.q[n as usize], || format!("n = {n}: recursion {r} closed form {cf}"))
    })?;
    let sys = builtin_systems();
    let diff = |n: u64| tables.q[n as usize + 1] as i64 - tables.q[n as usize] as i64;
    match sequence_failure(Exec::default(), SWEEP, &sys.dq, &sys.dq_morphic, diff) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn qj_conformance() -> Outcome {
    let oracle = Oracle::default();
    for j in 0..=27u64 {
        let row = oracle.qj_row(j as usize, 729).map_err(|e| e.to_string())?;
        first_bad(0..=729, |n| {
            let r = rec_qj(j, n);
            ensure(row[n as usize] == r, || format!("j = {j}, n = {n}: oracle {} recursion {r}", row[n as usize]))
        })?;
        for k in 0..=6u32 {
            let third = pow3(k);
            first_bad(third.max(2)..=(2 * third).min(729), |n| {
                let expected = if n == third + j { 1 } else { 2 };
                ensure(row[n as usize] == expected, || {
                    format!("band j = {j}, n = {n}: {} != {expected}", row[n as usize])
                })
            })?;
        }
    }
    ensure(oracle_qj(3, 12) == Ok(1), || "oracle_qj(3, 12) != 1".into())
}

fn symmetry(tables: &Tables) -> Outcome {
    for j in 0..=27u64 {
        for k in 0..=6u32 {
            first_bad(0..=pow3(k), |n| {
                let (a, b) = (rec_qj(j, n), rec_qj(j, pow3(k) - n));
                ensure(a.abs_diff(b) <= 1, || format!("q_{j}({n}) = {a}, q_{j}(3^{k} - {n}) = {b}"))
            })?;
        }
    }
    let q = q_table(pow3(10));
    for k in 0..=10u32 {
        first_bad(0..=pow3(k), |n| {
            let (a, b) = (q[n as usize], q[(pow3(k) - n) as usize]);
            ensure(a.abs_diff(b) <= 1, || format!("q({n}) = {a}, q(3^{k} - {n}) = {b}"))
        })?;
    }
    first_bad(0..SWEEP, |n| {
        let (a, b) = (tables.p[n as usize], tables.p[n as usize + 1]);
        ensure(a.abs_diff(b) <= 1, || format!("p({n}) = {a}, p({}) = {b}", n + 1))
    })
}

fn first_group_theorem() -> Outcome {
    properties(vec![q_vs_overline_property(12)])
}

fn set_s(tables: &Tables) -> Outcome {
    first_bad(0..SWEEP, |n| {
        let member = in_s(&to_ternary(n)).value;
        let equal = tables.p[n as usize] == tables.q[n as usize];
        ensure(member == equal, || format!("n = {n}: in S {member}, p = q {equal}"))
    })?;
    for k in 0..=16u32 {
        let c = count_s(k).map_err(|e| e.to_string())?;
        ensure(c == fibonacci(k + 3), || format!("count_S({k}) = {c}, F_{} = {}", k + 3, fibonacci(k + 3)))?;
    }
    ensure(count_s(0) == Ok(2) && count_s(2) == Ok(5), || "count_S(0), count_S(2) != 2, 5".into())
}

fn product() -> Outcome {
    properties(product_properties(Exec::default()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    outcome: Outcome,
    seconds: f64,
}

fn run(id: u32, name: &'static str, f: impl FnOnce() -> Outcome) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    let c = Criterion { id, name, outcome, seconds: start.elapsed().as_secs_f64() };
    match &c.outcome {
        Ok(()) => println!("criterion {:>2}: PASS {} ({:.3} s)", c.id, c.name, c.seconds),
        Err(e) => println!("criterion {:>2}: FAIL {}: {e}", c.id, c.name),
    }
    c
}

fn main() -> ExitCode {
    let tables = Tables::new(SWEEP + 1);
    let mut results = vec![
        run(1, "worked example: cf_q values and overline", worked_example),
        run(2, "PL(ababbaabbbaaa) = 4", motivating_example),
        run(3, "p: oracle = recursion on [0, 2000]; differences = cf_dp = dp DFAO = dp morphism on [0, 3^10)", || {
            p_routes(&tables)
        }),
        run(4, "q: oracle = recursion on [0, 1000]; = cf_q, dq DFAO = dq morphism on [0, 3^10)", || {
            q_routes(&tables)
        }),
        run(5, "q_j: oracle = recursion for j <= 27, n <= 729, with the band values", qj_conformance),
        run(6, "symmetry and unit-step bounds", || symmetry(&tables)),
        run(7, "q(x) - q(overline x) and the first large group, |x| <= 12", first_group_theorem),
        run(8, "S membership iff p = q on [0, 3^10); |S_k| = F_(k+3) for k <= 16", || set_s(&tables)),
        run(9, "product of the dt and dq morphisms reproduces the dp morphism", product),
    ];
    let suites_pass = results.iter().filter(|c| (3..=9).contains(&c.id)).all(|c| c.outcome.is_ok());
    results.push(run(10, "property suites 3 to 9 all pass", || {
        ensure(suites_pass, || "a property suite failed".into())
    }));

    let failed = results.iter().filter(|c| c.outcome.is_err()).count();
    let total: f64 = results.iter().map(|c| c.seconds).sum();
    println!("acceptance: {} passed, {failed} failed ({total:.2} s)", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
