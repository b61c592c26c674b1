//! Cross-checking harness. Each suite sweeps a range of `n` and reports one
//! [`Property`] per invariant, with the first counterexample on failure.

use std::fmt;
use std::str::FromStr;

use crate::automata::{build_product, builtin_systems, Dfao, MorphicSystem};
use crate::closed_form::{
    cf_dp, cf_dq, cf_dt, cf_q, cf_q_vs_overline, cf_t, count_s, count_s_by_length,
    count_s_enumerated, fibonacci, in_s, DifferenceValue, COUNT_S_ENUMERATION_MAX,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::Oracle;
use crate::recursion::{pq_tables, q_table, rec_q_ternary, Recursion};
use crate::ternary::{decompose_groups, floor_log3, from_ternary, overline, pow3, to_ternary, TernaryExpansion};

pub const DEFAULT_HORIZON: u64 = 59_049;
pub const DEFAULT_ORACLE_HORIZON: u64 = 2_000;
pub const MAX_HORIZON: u64 = 1_594_323;

/// One checked invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    /// First failing input, described; `None` when the property holds.
    pub counterexample: Option<String>,
}

impl Property {
    fn new(name: impl Into<String>, counterexample: Option<String>) -> Self {
        Property {
            name: name.into(),
            counterexample,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS {}", self.name),
            Some(c) => write!(f, "FAIL {}: {c}", self.name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Symmetry,
    ClosedForm,
    Automata,
    Product,
    Fibonacci,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "oracle",
        "symmetry",
        "closed-form",
        "automata",
        "product",
        "fibonacci",
        "all",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "oracle" => Suite::Oracle,
            "symmetry" => Suite::Symmetry,
            "closed-form" => Suite::ClosedForm,
            "automata" => Suite::Automata,
            "product" => Suite::Product,
            "fibonacci" => Suite::Fibonacci,
            "all" => Suite::All,
            other => return Err(Error::Precondition(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Sweeps cover `0 <= n < horizon`.
    pub horizon: u64,
    /// Oracle sweeps cover `0 <= n <= oracle_horizon`.
    pub oracle_horizon: u64,
    pub oracle_max: usize,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            horizon: DEFAULT_HORIZON,
            oracle_horizon: DEFAULT_ORACLE_HORIZON,
            oracle_max: crate::oracle::DEFAULT_ORACLE_MAX,
            exec: Exec::default(),
        }
    }
}

impl VerifyConfig {
    fn oracle(&self) -> Oracle {
        Oracle {
            max_len: self.oracle_max,
            exec: self.exec,
        }
    }
}

/// Runs `suite`. Errors only for configuration problems (limits); failed
/// properties are reported in the result.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Property>> {
    if cfg.horizon > MAX_HORIZON {
        return Err(Error::LimitExceeded {
            what: "horizon",
            value: cfg.horizon,
            max: MAX_HORIZON,
        });
    }
    Ok(match suite {
        Suite::Oracle => oracle_suite(cfg)?,
        Suite::Symmetry => symmetry_suite(cfg),
        Suite::ClosedForm => closed_form_suite(cfg),
        Suite::Automata => automata_suite(cfg),
        Suite::Product => product_suite(cfg),
        Suite::Fibonacci => fibonacci_suite(cfg),
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Oracle,
                Suite::Symmetry,
                Suite::ClosedForm,
                Suite::Automata,
                Suite::Product,
                Suite::Fibonacci,
            ] {
                all.extend(run_suite(s, cfg)?);
            }
            all
        }
    })
}

fn first_failure<F>(exec: Exec, range: std::ops::Range<u64>, check: F) -> Option<String>
where
    F: Fn(u64) -> Option<String> + Sync + Send,
{
    exec.find_first(range, |n| check(n).is_some())
        .and_then(&check)
}

fn mismatch<T: PartialEq + fmt::Debug>(what: &str, n: u64, left: T, right: T) -> Option<String> {
    (left != right).then(|| format!("{what} at n = {n}: {left:?} != {right:?}"))
}

fn diff(table: &[u32], n: u64) -> i64 {
    table[n as usize + 1] as i64 - table[n as usize] as i64
}

/// `(p, q, t)` tables on `0..=n_max`.
pub struct Tables {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl Tables {
    pub fn new(n_max: u64) -> Self {
        let (p, q) = pq_tables(n_max);
        Tables { p, q }
    }

    pub fn t(&self, n: u64) -> u32 {
        self.p[n as usize] - self.q[n as usize]
    }

    pub fn dt(&self, n: u64) -> i64 {
        self.t(n + 1) as i64 - self.t(n) as i64
    }
}

fn oracle_suite(cfg: &VerifyConfig) -> Result<Vec<Property>> {
    let oracle = cfg.oracle();
    let top = cfg.oracle_horizon;
    let tables = Tables::new(top + 1);
    let mut out = Vec::new();

    let oracle_p = oracle.p_row(top as usize + 1)?;
    out.push(Property::new(
        format!("rec_p = oracle_p on [0, {top}]"),
        first_failure(cfg.exec, 0..top + 1, |n| {
            mismatch("p", n, tables.p[n as usize], oracle_p[n as usize])
        }),
    ));
    let dp = &builtin_systems().dp;
    out.push(Property::new(
        format!("dp automaton = oracle_p differences on [0, {top})"),
        first_failure(cfg.exec, 0..top, |n| {
            mismatch("dp", n, dp.eval(n).value() as i64, diff(&oracle_p, n))
        }),
    ));

    let q_top = top.min(1000);
    let oracle_q = oracle.q_row(q_top as usize)?;
    out.push(Property::new(
        format!("rec_q = oracle_q on [0, {q_top}]"),
        first_failure(cfg.exec, 0..q_top + 1, |n| {
            mismatch("q", n, tables.q[n as usize], oracle_q[n as usize])
        }),
    ));

    let (j_top, n_top) = (27u64, 729u64.min(top));
    let r = Recursion::new();
    let rows: Vec<Vec<u32>> = (0..=j_top)
        .map(|j| oracle.qj_row(j as usize, n_top as usize))
        .collect::<Result<_>>()?;
    out.push(Property::new(
        format!("rec_qj = oracle_qj for j <= {j_top}, n <= {n_top}"),
        qj_failure(&rows, n_top, |j, n| r.qj(j, n)),
    ));
    out.push(Property::new(
        format!("q_j band on [3^k, 2*3^k]: value 1 iff n = 3^k + j, for j <= {j_top}, n <= {n_top}"),
        band_failure(&rows, n_top),
    ));
    Ok(out)
}

fn qj_failure(rows: &[Vec<u32>], n_top: u64, rec: impl Fn(u64, u64) -> u32) -> Option<String> {
    for (j, row) in rows.iter().enumerate() {
        for n in 0..=n_top {
            if let Some(m) = mismatch("q_j", n, rec(j as u64, n), row[n as usize]) {
                return Some(format!("j = {j}: {m}"));
            }
        }
    }
    None
}

fn band_failure(rows: &[Vec<u32>], n_top: u64) -> Option<String> {
    for (j, row) in rows.iter().enumerate() {
        let j = j as u64;
        for k in 0..=floor_log3(n_top.max(1)) {
            let low = pow3(k);
            for n in low..=(2 * low).min(n_top) {
                let expected = if n == low + j { 1 } else { 2 };
                if row[n as usize] != expected {
                    return Some(format!("q_{j}({n}) = {} != {expected}", row[n as usize]));
                }
            }
        }
    }
    None
}

fn symmetry_suite(cfg: &VerifyConfig) -> Vec<Property> {
    let h = cfg.horizon;
    let k_max = floor_log3(h.max(1));
    let tables = Tables::new(h + 1);
    let r = Recursion::new();
    let mut out = Vec::new();

    let mut qj_bad = None;
    'outer: for j in 0..=27u64 {
        for k in 0..=6u32 {
            let top = pow3(k);
            for n in 0..=top {
                let (a, b) = (r.qj(j, n), r.qj(j, top - n));
                if a.abs_diff(b) > 1 {
                    qj_bad = Some(format!("j = {j}, k = {k}, n = {n}: {a} vs {b}"));
                    break 'outer;
                }
            }
        }
    }
    out.push(Property::new("|q_j(n) - q_j(3^k - n)| <= 1 for j <= 27, k <= 6", qj_bad));

    let q_bad = (0..=k_max).find_map(|k| {
        let top = pow3(k);
        first_failure(cfg.exec, 0..top + 1, |n| {
            let (a, b) = (tables.q[n as usize], tables.q[(top - n) as usize]);
            (a.abs_diff(b) > 1).then(|| format!("k = {k}, n = {n}: {a} vs {b}"))
        })
    });
    out.push(Property::new(
        format!("|q(n) - q(3^k - n)| <= 1 for k <= {k_max}"),
        q_bad,
    ));

    for (name, table) in [("p", &tables.p), ("q", &tables.q)] {
        out.push(Property::new(
            format!("|{name}(n+1) - {name}(n)| <= 1 for n < {h}"),
            first_failure(cfg.exec, 0..h, |n| {
                (diff(table, n).abs() > 1).then(|| format!("n = {n}: step {}", diff(table, n)))
            }),
        ));
    }

    let band_bad = (0..k_max).find_map(|k| {
        let top = pow3(k + 1);
        first_failure(cfg.exec, 2 * pow3(k)..top + 1, |n| {
            let m = (top - n) as usize;
            let (p, q) = (tables.p[n as usize], tables.q[n as usize]);
            let condition = tables.p[m] == tables.q[m] && tables.q[m] < q;
            let ok = if condition { p == q } else { p == q + 1 };
            (!ok).then(|| format!("n = {n}: p = {p}, q = {q}, condition = {condition}"))
        })
    });
    out.push(Property::new(
        format!("on [2*3^k, 3^(k+1)], k < {k_max}: p = q iff p(3^(k+1)-n) = q(3^(k+1)-n) < q(n), else p = q + 1"),
        band_bad,
    ));

    out.push(Property::new(
        format!("q on ternary strings = q(n) for n < {h}"),
        first_failure(cfg.exec, 0..h, |n| {
            mismatch("q", n, rec_q_ternary(&to_ternary(n)), tables.q[n as usize])
        }),
    ));

    let n_top = 729u64.min(h);
    out.push(Property::new(
        format!("q(n) = min_j q_j(n) for n <= {n_top}"),
        (0..=n_top).find_map(|n| {
            let min = (0..=crate::oracle::j_bound(n)).map(|j| r.qj(j, n)).min().expect("j = 0");
            mismatch("q", n, tables.q[n as usize], min)
        }),
    ));
    out
}

/// Every string of `{0,2}* 2` with a leading 2 and length `1..=max_len`.
pub fn zero_two_strings(max_len: usize) -> impl Iterator<Item = TernaryExpansion> {
    (1..=max_len).flat_map(|len| {
        let inner = len.saturating_sub(2);
        let count = if len == 1 { 1u64 } else { 1u64 << inner };
        (0..count).map(move |mask| {
            let mut digits = vec![2u8];
            if len > 1 {
                digits.extend((0..inner).rev().map(|b| if mask >> b & 1 == 1 { 2 } else { 0 }));
                digits.push(2);
            }
            TernaryExpansion::from_digits(digits).expect("digits in range")
        })
    })
}

/// The length-`k` alternating string `2020...`.
fn alternating(k: usize) -> u64 {
    (0..k).fold(0, |acc, i| acc * 3 + if i % 2 == 0 { 2 } else { 0 })
}

fn closed_form_suite(cfg: &VerifyConfig) -> Vec<Property> {
    let h = cfg.horizon;
    let tables = Tables::new(h + 1);
    let mut out = Vec::new();

    out.push(Property::new(
        format!("cf_q = rec_q on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| mismatch("q", n, cf_q(&to_ternary(n)), tables.q[n as usize])),
    ));
    out.push(Property::new(
        format!("cf_t = rec_p - rec_q on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| mismatch("t", n, cf_t(&to_ternary(n)), tables.t(n))),
    ));
    out.push(Property::new(
        format!("in_S(n) iff p(n) = q(n) on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| {
            mismatch("S", n, in_s(&to_ternary(n)).value, tables.t(n) == 0)
        }),
    ));
    out.push(Property::new(
        format!("cf_dq = q differences on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| mismatch("dq", n, i64::from(cf_dq(n)), diff(&tables.q, n))),
    ));
    out.push(Property::new(
        format!("cf_dt = t differences on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| mismatch("dt", n, i64::from(cf_dt(n)), tables.dt(n))),
    ));
    out.push(Property::new(
        format!("cf_dp = p differences on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| match cf_dp(n) {
            Ok(d) => mismatch("dp", n, i64::from(d), diff(&tables.p, n)),
            Err(e) => Some(format!("n = {n}: {e}")),
        }),
    ));
    out.push(q_vs_overline_property(12));
    out
}

/// `cf_q_vs_overline` against the recursion on both sides, and against the
/// numeric range form of the first-group condition, for `|x| <= max_len`.
pub fn q_vs_overline_property(max_len: usize) -> Property {
    let q = q_table(pow3(max_len as u32));
    let bad = zero_two_strings(max_len).find_map(|x| {
        let v = match cf_q_vs_overline(&x) {
            Ok(v) => v,
            Err(e) => return Some(format!("{x}: {e}")),
        };
        let bar = overline(&x).expect("leading 2");
        let expected = q[from_ternary(&x) as usize] as i64 - q[from_ternary(&bar) as usize] as i64;
        if v as i64 != expected {
            return Some(format!("{x}: {v} != q(x) - q(overline x) = {expected}"));
        }
        let sparse = !decompose_groups(&x).expect("no 1").large_groups[0].dense;
        let in_range = from_ternary(&x) <= alternating(x.len());
        if (v == 0) != sparse || sparse != in_range {
            return Some(format!("{x}: value {v}, first group sparse = {sparse}, in range = {in_range}"));
        }
        None
    });
    Property::new(
        format!("q(x) - q(overline x) in {{0,1}}, 0 iff first large group sparse, |x| <= {max_len}"),
        bad,
    )
}

/// First `n < horizon` where the automaton, the morphic system and the
/// reference disagree.
pub fn sequence_failure(
    exec: Exec,
    horizon: u64,
    dfao: &Dfao,
    system: &MorphicSystem,
    reference: impl Fn(u64) -> i64 + Sync + Send,
) -> Option<String> {
    first_failure(exec, 0..horizon, |n| {
        let a = dfao.eval(n).value() as i64;
        let m = match system.morphic_letter(n) {
            Ok(v) => v as i64,
            Err(e) => return Some(format!("n = {n}: {e}")),
        };
        (a != m || m != reference(n))
            .then(|| format!("n = {n}: automaton {a}, morphic {m}, reference {}", reference(n)))
    })
}

fn automata_suite(cfg: &VerifyConfig) -> Vec<Property> {
    let h = cfg.horizon;
    let sys = builtin_systems();
    let tables = Tables::new(h + 1);
    let mut out = vec![
        Property::new(
            format!("dq automaton = dq morphism = q differences on [0, {h})"),
            sequence_failure(cfg.exec, h, &sys.dq, &sys.dq_morphic, |n| diff(&tables.q, n)),
        ),
        Property::new(
            format!("dt automaton = dt morphism = t differences on [0, {h})"),
            sequence_failure(cfg.exec, h, &sys.dt, &sys.dt_morphic, |n| tables.dt(n)),
        ),
        Property::new(
            format!("dp automaton = dp morphism = p differences on [0, {h})"),
            sequence_failure(cfg.exec, h, &sys.dp, &sys.dp_morphic, |n| diff(&tables.p, n)),
        ),
    ];
    for (name, a, closed) in [
        ("dq", &sys.dq, cf_dq as fn(u64) -> DifferenceValue),
        ("dt", &sys.dt, cf_dt),
    ] {
        out.push(Property::new(
            format!("{name} automaton = closed form on [0, {h})"),
            first_failure(cfg.exec, 0..h, |n| mismatch(name, n, a.eval(n), closed(n))),
        ));
    }
    out.push(Property::new(
        format!("dp automaton = closed form on [0, {h})"),
        first_failure(cfg.exec, 0..h, |n| mismatch("dp", n, Ok(sys.dp.eval(n)), cf_dp(n))),
    ));
    for (name, m) in [("dq morphism", &sys.dq_morphic), ("dt morphism", &sys.dt_morphic), ("dp morphism", &sys.dp_morphic)] {
        let bad = match m.coded_prefix(h) {
            Ok(buffered) => first_failure(cfg.exec, 0..h, |n| {
                mismatch(name, n, m.morphic_letter(n).ok(), Some(buffered[n as usize]))
            }),
            Err(e) => Some(e.to_string()),
        };
        out.push(Property::new(
            format!("{name}: digit descent = buffered fixed point on [0, {h})"),
            bad,
        ));
    }
    out.push(Property::new(
        "leading zeros do not change automaton output",
        [&sys.dq, &sys.dt, &sys.dp].iter().find_map(|a| {
            if !a.initial_loops_on_zero() {
                return Some(format!("initial state {} has no 0-loop", a.initial_name()));
            }
            first_failure(cfg.exec, 0..h.min(pow3(8)), |n| {
                let mut digits = vec![0, 0, 0];
                digits.extend_from_slice(to_ternary(n).digits());
                mismatch("padded", n, a.eval_digits(&digits), a.eval(n))
            })
        }),
    ));
    out
}

/// Checks the product of the `d_t` and `d_q` morphisms against the `d_p` one.
pub fn product_properties(exec: Exec) -> Vec<Property> {
    let sys = builtin_systems();
    let product = build_product(&sys.dt_morphic, &sys.dq_morphic);
    let mut out = vec![Property::new(
        "product of the dt and dq morphisms has 10 reachable pairs",
        (product.pair_count() != 10).then(|| format!("{} pairs", product.pair_count())),
    )];

    let table = match product.to_system_named() {
        Err(e) => Some(e.to_string()),
        Ok(named) => {
            let mut bad = None;
            if named.letters().len() != sys.dp_morphic.letters().len() {
                bad = Some(format!("{} letters after renaming", named.letters().len()));
            }
            for (letter, image) in sys.dp_morphic.rules() {
                if bad.is_some() {
                    break;
                }
                if named.image(letter) != Some(image) {
                    bad = Some(format!("rule for {letter}: {:?} != {image:?}", named.image(letter)));
                } else if named.coding_of(letter) != sys.dp_morphic.coding_of(letter) {
                    bad = Some(format!("coding of {letter} differs"));
                } else if named.seed_name() != sys.dp_morphic.seed_name() {
                    bad = Some(format!("seed {}", named.seed_name()));
                }
            }
            bad
        }
    };
    out.push(Property::new("renamed product reproduces the dp morphism rule for rule", table));

    let raw = product.to_system_raw();
    let top = pow3(8);
    out.push(Property::new(
        format!("product output = cf_dp on [0, {top})"),
        first_failure(exec, 0..top, |n| {
            let got = raw.morphic_letter(n).map(i64::from);
            let want = cf_dp(n).map(i64::from);
            mismatch("dp", n, got.ok(), want.ok())
        }),
    ));

    let diagonal = build_product(&sys.dq_morphic, &sys.dq_morphic);
    out.push(Property::new(
        "product of the dq morphism with itself is the 4-letter diagonal",
        (diagonal.pair_count() != 4 || diagonal.pairs().any(|(l, r)| l != r))
            .then(|| format!("{} pairs", diagonal.pair_count())),
    ));
    out
}

fn product_suite(cfg: &VerifyConfig) -> Vec<Property> {
    product_properties(cfg.exec)
}

fn fibonacci_suite(cfg: &VerifyConfig) -> Vec<Property> {
    let mut out = vec![Property::new(
        "|S_k| = F_(k+3) for k <= 16",
        (0..=16).find_map(|k| match count_s(k) {
            Ok(c) if c == fibonacci(k + 3) => None,
            Ok(c) => Some(format!("k = {k}: {c} != {}", fibonacci(k + 3))),
            Err(e) => Some(e.to_string()),
        }),
    )];
    out.push(Property::new(
        "|S_k| - |S_(k-1)| = |S_(k-2)| for 2 <= k <= 16",
        (2..=16).find_map(|k| {
            let c = |k| count_s(k).expect("k <= 16");
            (c(k) - c(k - 1) != c(k - 2)).then(|| format!("k = {k}"))
        }),
    ));
    out.push(Property::new(
        format!("enumerated |S_k| = length-counted |S_k| for k <= {COUNT_S_ENUMERATION_MAX}"),
        (0..=COUNT_S_ENUMERATION_MAX).find_map(|k| {
            let (a, b) = (count_s_enumerated(k, cfg.exec), count_s_by_length(k));
            (a != b).then(|| format!("k = {k}: {a} != {b}"))
        }),
    ));
    out
}
