//! Ternary expansions, the overline map and the decomposition of `{0,2}`
//! strings into small and large groups.
//!
//! Expansions are stored most-significant digit first. The canonical
//! expansion of 0 is the empty string.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `3^k`. Panics on overflow, which needs `k > 40`.
pub fn pow3(k: u32) -> u64 {
    3u64.checked_pow(k).expect("3^k overflows u64")
}

/// The exponent `k` with `3^k <= n < 3^(k+1)`, for `n >= 1`.
pub fn floor_log3(n: u64) -> u32 {
    debug_assert!(n > 0);
    let mut k = 0;
    let mut p = 1u64;
    while p <= n / 3 {
        p *= 3;
        k += 1;
    }
    k
}

/// A digit string over `{0, 1, 2}`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TernaryExpansion(Vec<u8>);

impl TernaryExpansion {
    /// Wraps raw digits. Leading zeros are kept; see [`Self::canonical`].
    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidDigit(char::from_digit(d as u32, 36).unwrap_or('?')));
        }
        Ok(TernaryExpansion(digits))
    }

    pub fn empty() -> Self {
        TernaryExpansion(Vec::new())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.first() != Some(&0)
    }

    /// Same value without leading zeros.
    pub fn canonical(&self) -> TernaryExpansion {
        let start = self.0.iter().position(|&d| d != 0).unwrap_or(self.0.len());
        TernaryExpansion(self.0[start..].to_vec())
    }

    pub fn contains_one(&self) -> bool {
        self.0.contains(&1)
    }

    pub fn value(&self) -> u64 {
        from_ternary(self)
    }

    /// Appends one digit.
    pub fn push(&mut self, digit: u8) {
        assert!(digit <= 2);
        self.0.push(digit);
    }

    pub(crate) fn into_digits(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for TernaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

impl FromStr for TernaryExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(Error::InvalidDigit(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(TernaryExpansion)
    }
}

/// Canonical expansion of `n`; empty for 0.
pub fn to_ternary(mut n: u64) -> TernaryExpansion {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % 3) as u8);
        n /= 3;
    }
    digits.reverse();
    TernaryExpansion(digits)
}

/// Positional value; leading zeros are allowed.
pub fn from_ternary(x: &TernaryExpansion) -> u64 {
    x.0.iter().fold(0u64, |acc, &d| acc * 3 + d as u64)
}

/// The expansion of `3^k - n` for the `k` with `2*3^(k-1) <= n <= 3^k`.
///
/// Defined on `10^m` (giving the empty string) and on canonical strings that
/// begin with 2.
pub fn overline(x: &TernaryExpansion) -> Result<TernaryExpansion> {
    match x.0.split_first() {
        Some((1, rest)) if rest.iter().all(|&d| d == 0) => Ok(TernaryExpansion::empty()),
        Some((2, _)) => {
            let k = u32::try_from(x.len()).expect("expansion length fits u32");
            Ok(to_ternary(pow3(k) - from_ternary(x)))
        }
        _ => Err(Error::OverlineUndefined(x.to_string())),
    }
}

/// A maximal run of 2s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallGroup {
    /// 0-based index of the first digit.
    pub start: usize,
    pub len: usize,
}

/// A maximal block that begins and ends with 2 and has no `00` inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LargeGroup {
    pub start: usize,
    pub len: usize,
    /// Contains `22`.
    pub dense: bool,
}

impl LargeGroup {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupDecomposition {
    pub len: usize,
    pub small_groups: Vec<SmallGroup>,
    pub large_groups: Vec<LargeGroup>,
}

impl GroupDecomposition {
    pub fn dense_count(&self) -> usize {
        self.large_groups.iter().filter(|g| g.dense).count()
    }

    /// Rebuilds the digit string: 2 inside small groups, 0 elsewhere.
    pub fn reconstruct(&self) -> TernaryExpansion {
        let mut digits = vec![0u8; self.len];
        for g in &self.small_groups {
            digits[g.start..g.start + g.len].fill(2);
        }
        TernaryExpansion(digits)
    }
}

/// Splits a `{0,2}` string into small and large groups, left to right.
pub fn decompose_groups(x: &TernaryExpansion) -> Result<GroupDecomposition> {
    if x.contains_one() {
        return Err(Error::InvalidDigit('1'));
    }
    let d = x.digits();
    let mut out = GroupDecomposition {
        len: d.len(),
        ..Default::default()
    };

    let mut i = 0;
    while i < d.len() {
        if d[i] == 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < d.len() && d[i] == 2 {
            i += 1;
        }
        out.small_groups.push(SmallGroup {
            start,
            len: i - start,
        });
    }

    let mut current: Option<LargeGroup> = None;
    for g in &out.small_groups {
        match current.as_mut() {
            // a single 0 between small groups keeps them in one large group
            Some(large) if g.start == large.end() + 1 => {
                large.len = g.start + g.len - large.start;
                large.dense |= g.len >= 2;
            }
            _ => {
                out.large_groups.extend(current.take());
                current = Some(LargeGroup {
                    start: g.start,
                    len: g.len,
                    dense: g.len >= 2,
                });
            }
        }
    }
    out.large_groups.extend(current);
    Ok(out)
}
