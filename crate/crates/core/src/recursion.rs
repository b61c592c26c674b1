//! Recursive evaluation of `q_j(n)`, `q(n)` and `p(n)`.
//!
//! Every recursive case reduces `n` in `(2*3^k, 3^(k+1))` to arguments below
//! `3^k`. At the shared endpoint `n = 2*3^k` the non-recursive case is used.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{OnceLock, RwLock};

use crate::ternary::{floor_log3, overline, pow3, TernaryExpansion};

#[derive(Debug, Default)]
struct Cache<K>(RwLock<HashMap<K, u32>>);

impl<K: Eq + Hash + Copy> Cache<K> {
    fn get_or(&self, key: K, compute: impl FnOnce() -> u32) -> u32 {
        if let Some(&v) = self.0.read().expect("poisoned").get(&key) {
            return v;
        }
        let v = compute();
        let mut map = self.0.write().expect("poisoned");
        *map.entry(key).or_insert(v)
    }

    fn len(&self) -> usize {
        self.0.read().expect("poisoned").len()
    }
}

/// Memoised evaluator. Caches are shared behind locks, so one instance may be
/// used from several threads.
#[derive(Debug, Default)]
pub struct Recursion {
    q_cache: Cache<u64>,
    p_cache: Cache<u64>,
    qj_cache: Cache<(u64, u64)>,
}

/// Position of `n >= 2` relative to the powers of three.
enum Band {
    /// `3^k <= n <= 2*3^k`.
    Low { k: u32 },
    /// `2*3^k < n < 3^(k+1)`.
    High { k: u32 },
}

fn band(n: u64) -> Band {
    let k = floor_log3(n);
    if n <= 2 * pow3(k) {
        Band::Low { k }
    } else {
        Band::High { k }
    }
}

impl Recursion {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached `(q, p, q_j)` entries.
    pub fn cache_sizes(&self) -> (usize, usize, usize) {
        (self.q_cache.len(), self.p_cache.len(), self.qj_cache.len())
    }

    /// `q_j(n) = PL(b^j s[1..n])`.
    pub fn qj(&self, j: u64, n: u64) -> u32 {
        match n {
            0 => return u32::from(j > 0),
            1 => return if j == 0 { 1 } else { 2 },
            _ => {}
        }
        self.qj_cache.get_or((j, n), || match band(n) {
            Band::Low { k } => {
                if n == pow3(k) + j {
                    1
                } else {
                    2
                }
            }
            Band::High { k } => {
                let third = pow3(k);
                if j <= third {
                    let glued = self.qj(third - j, n - 2 * third);
                    let wrapped = self.qj(j, 3 * third - n);
                    1 + glued.min(wrapped)
                } else {
                    // b^j is longer than any run of b in s[1..n]; peel b^(j-m)
                    1 + (0..=third).map(|m| self.qj(m, n)).min().expect("m = 0")
                }
            }
        })
    }

    /// `q(n) = min_j q_j(n)`.
    pub fn q(&self, n: u64) -> u32 {
        if n <= 1 {
            return n as u32;
        }
        self.q_cache.get_or(n, || match band(n) {
            Band::Low { .. } => 1,
            Band::High { k } => {
                let third = pow3(k);
                1 + self.q(n - 2 * third).min(self.q(3 * third - n))
            }
        })
    }

    /// `p(n) = PL(s[1..n])`.
    pub fn p(&self, n: u64) -> u32 {
        if n <= 1 {
            return n as u32;
        }
        self.p_cache.get_or(n, || match band(n) {
            Band::Low { k } => {
                if n == pow3(k) {
                    1
                } else {
                    2
                }
            }
            Band::High { k } => {
                let third = pow3(k);
                (2 + self.q(n - 2 * third)).min(1 + self.p(3 * third - n))
            }
        })
    }

    /// `t(n) = p(n) - q(n)`.
    pub fn t(&self, n: u64) -> u32 {
        self.p(n) - self.q(n)
    }
}

/// `q` evaluated on digit strings: `q(ε) = 0`, `q(1y) = 1`,
/// `q(2y) = 1 + min(q(y), q(overline(2y)))`.
pub fn rec_q_ternary(x: &TernaryExpansion) -> u32 {
    fn go(x: &TernaryExpansion, memo: &mut HashMap<TernaryExpansion, u32>) -> u32 {
        let x = x.canonical();
        match x.digits().first() {
            None => 0,
            Some(1) => 1,
            Some(_) => {
                if let Some(&v) = memo.get(&x) {
                    return v;
                }
                let tail = TernaryExpansion::from_digits(x.digits()[1..].to_vec())
                    .expect("digits already validated");
                let bar = overline(&x).expect("leading 2 is in the domain");
                let v = 1 + go(&tail, memo).min(go(&bar, memo));
                memo.insert(x, v);
                v
            }
        }
    }
    go(x, &mut HashMap::new())
}

fn shared() -> &'static Recursion {
    static SHARED: OnceLock<Recursion> = OnceLock::new();
    SHARED.get_or_init(Recursion::new)
}

pub fn rec_qj(j: u64, n: u64) -> u32 {
    shared().qj(j, n)
}

pub fn rec_q(n: u64) -> u32 {
    shared().q(n)
}

pub fn rec_p(n: u64) -> u32 {
    shared().p(n)
}

pub fn rec_t(n: u64) -> u32 {
    shared().t(n)
}

/// `q(n)` for `n <= n_max`, filled bottom-up with the same recurrence.
pub fn q_table(n_max: u64) -> Vec<u32> {
    let mut q: Vec<u32> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let v = match n {
            0 | 1 => n as u32,
            _ => match band(n) {
                Band::Low { .. } => 1,
                Band::High { k } => {
                    let third = pow3(k);
                    1 + q[(n - 2 * third) as usize].min(q[(3 * third - n) as usize])
                }
            },
        };
        q.push(v);
    }
    q
}

/// `(p, q)` tables for `n <= n_max`.
pub fn pq_tables(n_max: u64) -> (Vec<u32>, Vec<u32>) {
    let q = q_table(n_max);
    let mut p: Vec<u32> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let v = match n {
            0 | 1 => n as u32,
            _ => match band(n) {
                Band::Low { k } if n == pow3(k) => 1,
                Band::Low { .. } => 2,
                Band::High { k } => {
                    let third = pow3(k);
                    (2 + q[(n - 2 * third) as usize]).min(1 + p[(3 * third - n) as usize])
                }
            },
        };
        p.push(v);
    }
    (p, q)
}
