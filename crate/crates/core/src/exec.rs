//! Execution strategy for range sweeps.
//!
//! With the `parallel` feature, [`Exec::Parallel`] fans work out over the
//! rayon pool; without it, both variants run on the calling thread.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `f` applied to every element of `range`, in order.
    pub fn map<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Smallest element of `range` satisfying `pred`.
    pub fn find_first<F>(self, range: Range<u64>, pred: F) -> Option<u64>
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().find_first(|&n| pred(n));
        }
        range.into_iter().find(|&n| pred(n))
    }

    /// Number of elements of `range` satisfying `pred`.
    pub fn count<F>(self, range: Range<u64>, pred: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().filter(|&n| pred(n)).count() as u64;
        }
        range.filter(|&n| pred(n)).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.map(0..10, |n| n * n)[9], 81);
            assert_eq!(exec.find_first(0..1000, |n| n % 37 == 36), Some(36));
            assert_eq!(exec.find_first(0..10, |_| false), None);
            assert_eq!(exec.count(0..100, |n| n % 3 == 0), 34);
        }
    }
}
