//! Digit-level closed forms for `q`, `t = p - q` and the first differences
//! `d_q`, `d_t`, `d_p`.
//!
//! `q` of a `{0,2}` string is the number of small groups plus the number of
//! dense large groups. `p = q` exactly on the regular set
//!
//! ```text
//! S = ε ∪ 10* ∪ (22+ 00+)* 22+ (0* ∪ 0+ 1 0*)
//! ```
//!
//! and `t = 1` elsewhere.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ternary::{decompose_groups, pow3, to_ternary, TernaryExpansion};

/// A first difference, always one of -1, 0, +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum DifferenceValue {
    Minus = -1,
    Zero = 0,
    Plus = 1,
}

impl DifferenceValue {
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn glyph(self) -> char {
        match self {
            DifferenceValue::Minus => '-',
            DifferenceValue::Zero => '0',
            DifferenceValue::Plus => '+',
        }
    }

    pub fn from_glyph(c: char) -> Option<Self> {
        match c {
            '-' => Some(DifferenceValue::Minus),
            '0' => Some(DifferenceValue::Zero),
            '+' => Some(DifferenceValue::Plus),
            _ => None,
        }
    }
}

impl TryFrom<i64> for DifferenceValue {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(DifferenceValue::Minus),
            0 => Ok(DifferenceValue::Zero),
            1 => Ok(DifferenceValue::Plus),
            other => Err(Error::Inconsistent(format!("difference {other} outside {{-1, 0, 1}}"))),
        }
    }
}

impl From<DifferenceValue> for i64 {
    fn from(d: DifferenceValue) -> i64 {
        d.value() as i64
    }
}

impl fmt::Display for DifferenceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// Why a string is or is not in `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SReason {
    Empty,
    PowerOfThree,
    BlockPattern,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SMembership {
    pub value: bool,
    pub reason: SReason,
}

impl From<SReason> for SMembership {
    fn from(reason: SReason) -> Self {
        SMembership {
            value: reason != SReason::Rejected,
            reason,
        }
    }
}

/// Recogniser for `S`, read most significant digit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum SState {
    Start,
    /// inside `10*`
    Power,
    /// one 2 of a block
    OneTwo,
    /// at least two 2s
    Twos,
    /// one 0 after a block
    OneZero,
    /// at least two 0s after a block
    Zeros,
    /// inside the `10*` tail
    Tail,
    Reject,
}

impl SState {
    const ALL: [SState; 8] = [
        SState::Start,
        SState::Power,
        SState::OneTwo,
        SState::Twos,
        SState::OneZero,
        SState::Zeros,
        SState::Tail,
        SState::Reject,
    ];

    fn step(self, digit: u8) -> SState {
        use SState::*;
        match (self, digit) {
            (Start, 1) => Power,
            (Start, 2) => OneTwo,
            (Power, 0) => Power,
            (OneTwo, 2) => Twos,
            (Twos, 2) => Twos,
            (Twos, 0) => OneZero,
            (OneZero, 0) => Zeros,
            (OneZero, 1) | (Zeros, 1) => Tail,
            (Zeros, 0) => Zeros,
            (Zeros, 2) => OneTwo,
            (Tail, 0) => Tail,
            _ => Reject,
        }
    }

    fn reason(self) -> SReason {
        match self {
            SState::Start => SReason::Empty,
            SState::Power => SReason::PowerOfThree,
            SState::Twos | SState::OneZero | SState::Zeros | SState::Tail => SReason::BlockPattern,
            SState::OneTwo | SState::Reject => SReason::Rejected,
        }
    }
}

/// Recogniser for `(22+ 00+)* (2 ∪ 2+ 1 2*)`, where `d_t = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DropState {
    Start,
    OneTwo,
    Twos,
    OneZero,
    Zeros,
    Tail,
    Reject,
}

impl DropState {
    fn step(self, digit: u8) -> DropState {
        use DropState::*;
        match (self, digit) {
            (Start, 2) => OneTwo,
            (OneTwo, 2) | (Twos, 2) => Twos,
            (OneTwo, 1) | (Twos, 1) => Tail,
            (Twos, 0) => OneZero,
            (OneZero, 0) | (Zeros, 0) => Zeros,
            (Zeros, 2) => OneTwo,
            (Tail, 2) => Tail,
            _ => Reject,
        }
    }

    fn accepts(self) -> bool {
        matches!(self, DropState::OneTwo | DropState::Tail)
    }
}

fn matches_drop_pattern(x: &TernaryExpansion) -> bool {
    x.digits()
        .iter()
        .fold(DropState::Start, |s, &d| s.step(d))
        .accepts()
}

pub fn in_s(x: &TernaryExpansion) -> SMembership {
    x.digits()
        .iter()
        .fold(SState::Start, |s, &d| s.step(d))
        .reason()
        .into()
}

/// `q(x)`: small groups plus dense large groups of the `{0,2}` normal form.
pub fn cf_q(x: &TernaryExpansion) -> u32 {
    let x = x.canonical();
    let mut digits = match x.digits().iter().position(|&d| d == 1) {
        // q(y1z) = q(y2)
        Some(i) => {
            let mut head = x.digits()[..i].to_vec();
            head.push(2);
            head
        }
        None => x.into_digits(),
    };
    // q(x0) = q(x)
    while digits.last() == Some(&0) {
        digits.pop();
    }
    let groups = decompose_groups(&TernaryExpansion::from_digits(digits).expect("digits in range"))
        .expect("no digit 1 left");
    (groups.small_groups.len() + groups.dense_count()) as u32
}

/// `q(x) - q(overline(x))` for `x` in `{0,2}* 2`: 0 when the first large
/// group of `x` is sparse, 1 when it is dense.
pub fn cf_q_vs_overline(x: &TernaryExpansion) -> Result<u32> {
    let d = x.digits();
    if d.is_empty() || d[0] != 2 || d[d.len() - 1] != 2 || x.contains_one() {
        return Err(Error::Precondition(format!(
            "{x:?} is not a canonical string of {{0,2}}* ending in 2"
        )));
    }
    let groups = decompose_groups(x)?;
    Ok(u32::from(groups.large_groups[0].dense))
}

/// `t(x) = p(x) - q(x)`.
pub fn cf_t(x: &TernaryExpansion) -> u32 {
    u32::from(!in_s(&x.canonical()).value)
}

/// `q(n+1) - q(n)`.
pub fn cf_dq(n: u64) -> DifferenceValue {
    use DifferenceValue::*;
    if n == 0 {
        return Plus;
    }
    let x = to_ternary(n);
    if x.contains_one() {
        return Zero;
    }
    let d = x.digits();
    let groups = decompose_groups(&x).expect("no digit 1");
    let last = groups.large_groups.last().expect("n > 0 has a 2");
    match d[d.len() - 1] {
        0 if d[d.len() - 2] == 0 => Plus,
        // the final 0 directly follows the last large group
        0 if last.dense => Zero,
        0 => Plus,
        _ if last.dense => Minus,
        _ => Zero,
    }
}

/// `t(n+1) - t(n)`.
pub fn cf_dt(n: u64) -> DifferenceValue {
    use DifferenceValue::*;
    let x = to_ternary(n);
    let d = x.digits();
    let ends = |suffix: &[u8]| d.ends_with(suffix);
    if in_s(&x).value {
        if !x.contains_one() && (ends(&[0, 0]) || ends(&[2, 2])) {
            return Zero;
        }
        if x.contains_one() || ends(&[2, 2, 0]) {
            return Plus;
        }
    }
    if matches_drop_pattern(&x) {
        return Minus;
    }
    Zero
}

/// `p(n+1) - p(n) = d_q(n) + d_t(n)`.
pub fn cf_dp(n: u64) -> Result<DifferenceValue> {
    let sum = i64::from(cf_dq(n)) + i64::from(cf_dt(n));
    DifferenceValue::try_from(sum)
        .map_err(|_| Error::Inconsistent(format!("d_q({n}) + d_t({n}) = {sum}")))
}

pub const DEFAULT_COUNT_S_MAX: u32 = 16;

/// Largest `k` for which [`count_s`] enumerates values directly.
pub const COUNT_S_ENUMERATION_MAX: u32 = 10;

/// `|S_k|`: elements of `S` with value at most `3^k`.
pub fn count_s(k: u32) -> Result<u64> {
    count_s_with_max(k, DEFAULT_COUNT_S_MAX)
}

pub fn count_s_with_max(k: u32, max: u32) -> Result<u64> {
    if k > max {
        return Err(Error::LimitExceeded {
            what: "count_S exponent",
            value: k as u64,
            max: max as u64,
        });
    }
    Ok(if k <= COUNT_S_ENUMERATION_MAX {
        count_s_enumerated(k, Exec::default())
    } else {
        count_s_by_length(k)
    })
}

/// Counts `n <= 3^k` with `(n)_3` in `S`.
pub fn count_s_enumerated(k: u32, exec: Exec) -> u64 {
    exec.count(0..pow3(k) + 1, |n| in_s(&to_ternary(n)).value)
}

/// Counts accepted strings of each length by running the recogniser on
/// state multiplicities. Strings of length `<= k` are below `3^k`; of length
/// `k + 1` only `10^k` qualifies.
pub fn count_s_by_length(k: u32) -> u64 {
    let index = |s: SState| SState::ALL.iter().position(|&t| t == s).expect("listed");
    let mut counts = [0u64; SState::ALL.len()];
    counts[index(SState::Start)] = 1;
    let accepted = |counts: &[u64; 8]| -> u64 {
        SState::ALL
            .iter()
            .zip(counts)
            .filter(|(s, _)| s.reason() != SReason::Rejected)
            .map(|(_, c)| c)
            .sum()
    };
    let mut total = accepted(&counts);
    for _ in 0..k {
        let mut next = [0u64; 8];
        for (s, &c) in SState::ALL.iter().zip(&counts) {
            for digit in 0..=2 {
                next[index(s.step(digit))] += c;
            }
        }
        counts = next;
        total += accepted(&counts);
    }
    total + 1
}

/// `F_i` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(i: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..i {
        (a, b) = (b, a + b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::{pq_tables, rec_p, rec_q};
    use crate::ternary::{from_ternary, overline};
    use DifferenceValue::*;

    fn t(s: &str) -> TernaryExpansion {
        s.parse().unwrap()
    }

    #[test]
    fn q_examples() {
        assert_eq!(cf_q(&t("22202000022000202002")), 8);
        assert_eq!(cf_q(&t("20222200222020221")), 7);
        assert_eq!(cf_q(&t("20222200222020222")), 7);
        assert_eq!(cf_q(&t("")), 0);
        assert_eq!(cf_q(&t("1")), 1);
        assert_eq!(cf_q(&t("12012")), 1);
    }

    #[test]
    fn q_vs_overline_examples() {
        assert_eq!(cf_q_vs_overline(&t("22202000022000202002")).unwrap(), 1);
        assert_eq!(cf_q_vs_overline(&t("2")).unwrap(), 0);
        assert_eq!(cf_q_vs_overline(&t("202")).unwrap(), 0);
        let x = t("202");
        let bar = overline(&x).unwrap();
        assert_eq!(bar, t("21"));
        assert_eq!(rec_q(from_ternary(&x)), rec_q(from_ternary(&bar)));
        for bad in ["", "20", "212", "022", "1"] {
            assert!(matches!(cf_q_vs_overline(&t(bad)), Err(Error::Precondition(_))), "{bad}");
        }
    }

    #[test]
    fn s_examples() {
        assert_eq!(in_s(&t("22")), SReason::BlockPattern.into());
        assert_eq!(in_s(&t("100")), SReason::PowerOfThree.into());
        assert_eq!(in_s(&t("")), SReason::Empty.into());
        assert_eq!(in_s(&t("2")), SReason::Rejected.into());
        assert!(!in_s(&t("2")).value);
        assert_eq!((rec_p(2), rec_q(2)), (2, 1));
        for yes in ["1", "10", "220", "2200", "22001", "220000100", "2200222", "222002200"] {
            assert!(in_s(&t(yes)).value, "{yes}");
        }
        for no in ["20", "221", "22220221", "2021", "22022", "2202", "11", "101", "2200221"] {
            assert!(!in_s(&t(no)).value, "{no}");
        }
    }

    #[test]
    fn t_examples() {
        assert_eq!(cf_t(&t("")), 0);
        assert_eq!(cf_t(&t("10")), 0);
        assert_eq!(cf_t(&t("21")), 1);
        assert_eq!((rec_p(7), rec_q(7)), (3, 2));
    }

    #[test]
    fn difference_examples() {
        assert_eq!(cf_dq(0), Plus);
        assert_eq!(cf_dq(6), Plus);
        assert_eq!(cf_dq(4), Zero);
        assert_eq!(cf_dq(8), Minus);
        assert_eq!(cf_dt(2), Minus);
        assert_eq!(cf_dt(8), Zero);
        // (21)_3 = 7: t(7) = 1 and t(8) = 0 since 22 is in S
        assert_eq!(cf_dt(7), Minus);
        assert_eq!(rec_p(8) - rec_q(8), 0);
        assert_eq!(cf_dp(0).unwrap(), Plus);
        assert_eq!(cf_dp(2).unwrap(), Minus);
        assert_eq!(cf_dp(6).unwrap(), Plus);
    }

    #[test]
    fn counts() {
        assert_eq!(count_s(0).unwrap(), 2);
        assert_eq!(count_s(2).unwrap(), 5);
        for k in 0..=16 {
            assert_eq!(count_s(k).unwrap(), fibonacci(k + 3), "k = {k}");
        }
        assert!(matches!(count_s(17), Err(Error::LimitExceeded { .. })));
        assert_eq!(count_s_with_max(20, 20).unwrap(), fibonacci(23));
    }

    #[test]
    fn count_routes_agree() {
        for k in 0..=COUNT_S_ENUMERATION_MAX {
            assert_eq!(count_s_enumerated(k, Exec::Sequential), count_s_by_length(k), "k = {k}");
        }
    }

    #[test]
    fn layer_sizes_follow_fibonacci_recurrence() {
        for k in 2..=16 {
            let layer = count_s(k).unwrap() - count_s(k - 1).unwrap();
            assert_eq!(layer, count_s(k - 2).unwrap());
        }
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(
            (0..10).map(fibonacci).collect::<Vec<_>>(),
            vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
        );
    }

    #[test]
    fn glyphs_round_trip() {
        for d in [Minus, Zero, Plus] {
            assert_eq!(DifferenceValue::from_glyph(d.glyph()), Some(d));
            assert_eq!(DifferenceValue::try_from(i64::from(d)).unwrap(), d);
        }
        assert!(DifferenceValue::try_from(2).is_err());
    }

    #[test]
    fn closed_forms_match_recursion_small_range() {
        let n_max = pow3(7);
        let (p, q) = pq_tables(n_max + 1);
        for n in 0..n_max {
            let x = to_ternary(n);
            let i = n as usize;
            assert_eq!(cf_q(&x), q[i], "q({x})");
            assert_eq!(cf_t(&x), p[i] - q[i], "t({x})");
            assert_eq!(i64::from(cf_dq(n)), q[i + 1] as i64 - q[i] as i64, "dq({x})");
            let t_next = p[i + 1] as i64 - q[i + 1] as i64;
            assert_eq!(i64::from(cf_dt(n)), t_next - (p[i] - q[i]) as i64, "dt({x})");
            assert_eq!(i64::from(cf_dp(n).unwrap()), p[i + 1] as i64 - p[i] as i64, "dp({x})");
        }
    }
}
