//! Palindromic length by dynamic programming, straight from the definition.
//!
//! This is the ground truth every other route is checked against. It is
//! quadratic in the worst case and guarded by a configurable length limit.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ternary::pow3;
use crate::words::{sierpinski_prefix, FiniteWord, Letter};

pub const DEFAULT_ORACLE_MAX: usize = 20_000;

/// `pl[i]` is the palindromic length of the first `i` letters of `word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlTable {
    pub word: FiniteWord,
    pub pl: Vec<u32>,
}

impl PlTable {
    /// Palindromic length of the whole word.
    pub fn total(&self) -> u32 {
        *self.pl.last().expect("pl[0] always exists")
    }
}

/// Prefix palindromic lengths of `letters`, length `letters.len() + 1`.
///
/// Keeps the start positions of all palindromic suffixes of the current
/// prefix: `w[s-1..=i]` is a palindrome iff `w[s..i]` is one and
/// `w[s-1] == w[i]`.
pub fn prefix_pl(letters: &[Letter]) -> Vec<u32> {
    let mut pl = vec![0u32; letters.len() + 1];
    let mut starts: Vec<usize> = Vec::new();
    let mut next: Vec<usize> = Vec::new();
    for (i, &letter) in letters.iter().enumerate() {
        next.clear();
        next.extend(
            starts
                .iter()
                .filter(|&&s| s > 0 && letters[s - 1] == letter)
                .map(|&s| s - 1),
        );
        if i > 0 && letters[i - 1] == letter {
            next.push(i - 1);
        }
        next.push(i);
        pl[i + 1] = 1 + next.iter().map(|&s| pl[s]).min().expect("single letter");
        std::mem::swap(&mut starts, &mut next);
    }
    pl
}

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub max_len: usize,
    pub exec: Exec,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_len: DEFAULT_ORACLE_MAX,
            exec: Exec::default(),
        }
    }
}

impl Oracle {
    pub fn with_max_len(max_len: usize) -> Self {
        Oracle {
            max_len,
            ..Default::default()
        }
    }

    fn check(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            return Err(Error::LimitExceeded {
                what: "oracle word length",
                value: len as u64,
                max: self.max_len as u64,
            });
        }
        Ok(())
    }

    pub fn pl_table(&self, w: &FiniteWord) -> Result<PlTable> {
        self.check(w.len())?;
        Ok(PlTable {
            pl: prefix_pl(w.letters()),
            word: w.clone(),
        })
    }

    /// `PL(w)`.
    pub fn pl(&self, w: &FiniteWord) -> Result<u32> {
        self.pl_table(w).map(|t| t.total())
    }

    /// `q_j(n)` for every `n <= n_max`: the table of `b^j s[1..n_max]`, shifted.
    pub fn qj_row(&self, j: usize, n_max: usize) -> Result<Vec<u32>> {
        self.check(j + n_max)?;
        let word = FiniteWord::b_power(j).concat(&sierpinski_prefix(n_max)?);
        Ok(prefix_pl(word.letters()).split_off(j))
    }

    /// `p(n)` for every `n <= n_max`.
    pub fn p_row(&self, n_max: usize) -> Result<Vec<u32>> {
        self.qj_row(0, n_max)
    }

    pub fn p(&self, n: usize) -> Result<u32> {
        Ok(self.p_row(n)?[n])
    }

    /// `PL(b^j s[1..n])`.
    pub fn qj(&self, j: usize, n: usize) -> Result<u32> {
        Ok(self.qj_row(j, n)?[n])
    }

    /// `min_j q_j(n)` over `0 <= j <= 3^K`, where `3^K` is the least power of
    /// three that is at least `n`.
    pub fn q(&self, n: usize) -> Result<u32> {
        Ok(self.q_row(n)?[n])
    }

    /// `q(n)` for every `n <= n_max`, each `n` minimised over its own range
    /// of `j`.
    pub fn q_row(&self, n_max: usize) -> Result<Vec<u32>> {
        let j_max = j_bound(n_max as u64) as usize;
        self.q_row_with_j(n_max, |n| j_bound(n as u64) as usize, j_max)
    }

    /// Like [`Self::q_row`] but every `n` uses `j <= j_max`.
    pub fn q_row_extended(&self, n_max: usize, j_max: usize) -> Result<Vec<u32>> {
        self.q_row_with_j(n_max, |_| j_max, j_max)
    }

    fn q_row_with_j(
        &self,
        n_max: usize,
        bound: impl Fn(usize) -> usize + Sync,
        j_max: usize,
    ) -> Result<Vec<u32>> {
        self.check(j_max + n_max)?;
        let rows = self.exec.map(0..j_max as u64 + 1, |j| {
            self.qj_row(j as usize, n_max).expect("length checked above")
        });
        Ok((0..=n_max)
            .map(|n| {
                rows[..=bound(n)]
                    .iter()
                    .map(|row| row[n])
                    .min()
                    .expect("j = 0 always present")
            })
            .collect())
    }
}

/// Least power of three that is `>= n` (1 for `n <= 1`).
pub fn j_bound(n: u64) -> u64 {
    let mut p = 1;
    let mut k = 0;
    while p < n {
        k += 1;
        p = pow3(k);
    }
    p
}

pub fn pl_table(w: &FiniteWord) -> Result<PlTable> {
    Oracle::default().pl_table(w)
}

pub fn oracle_p(n: usize) -> Result<u32> {
    Oracle::default().p(n)
}

pub fn oracle_qj(j: usize, n: usize) -> Result<u32> {
    Oracle::default().qj(j, n)
}

pub fn oracle_q(n: usize) -> Result<u32> {
    Oracle::default().q(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{is_palindrome, mirror};
    use proptest::prelude::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    /// Exponential reference: tries every palindromic first factor.
    fn naive_pl(letters: &[Letter]) -> u32 {
        if letters.is_empty() {
            return 0;
        }
        (1..=letters.len())
            .filter(|&l| is_palindrome(&FiniteWord::new(letters[..l].to_vec())))
            .map(|l| 1 + naive_pl(&letters[l..]))
            .min()
            .unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(pl_table(&w("ababbaabbbaaa")).unwrap().pl[13], 4);
        assert_eq!(pl_table(&FiniteWord::empty()).unwrap().pl, vec![0]);
        assert_eq!(pl_table(&w("ababbba")).unwrap().pl[7], 3);
        assert_eq!(oracle_p(0).unwrap(), 0);
        assert_eq!(oracle_p(3).unwrap(), 1);
        assert_eq!(oracle_p(8).unwrap(), 2);
        assert_eq!(oracle_qj(2, 0).unwrap(), 1);
        assert_eq!(oracle_qj(1, 4).unwrap(), 1);
        assert_eq!(oracle_q(0).unwrap(), 0);
        assert_eq!(oracle_q(4).unwrap(), 1);
        assert_eq!(oracle_q(7).unwrap(), 2);
    }

    #[test]
    fn qj_zero_is_p() {
        let p = Oracle::default().p_row(300).unwrap();
        for (n, &v) in p.iter().enumerate() {
            assert_eq!(Oracle::default().qj(0, n).unwrap(), v);
        }
    }

    #[test]
    fn limits() {
        let o = Oracle::with_max_len(50);
        assert!(o.pl_table(&FiniteWord::b_power(50)).is_ok());
        assert!(matches!(
            o.pl_table(&FiniteWord::b_power(51)),
            Err(Error::LimitExceeded { .. })
        ));
        assert!(o.qj(30, 21).is_err());
        assert!(o.qj(30, 20).is_ok());
    }

    #[test]
    fn j_bounds() {
        assert_eq!(j_bound(0), 1);
        assert_eq!(j_bound(1), 1);
        assert_eq!(j_bound(2), 3);
        assert_eq!(j_bound(3), 3);
        assert_eq!(j_bound(4), 9);
        assert_eq!(j_bound(1000), 2187);
    }

    #[test]
    fn q_minimum_is_attained_within_range() {
        let o = Oracle::default();
        let bounded = o.q_row(243).unwrap();
        let wide = o.q_row_extended(243, 729).unwrap();
        assert_eq!(bounded, wide);
    }

    #[test]
    fn qj_symmetry() {
        let o = Oracle::default();
        for j in 0..=27 {
            let row = o.qj_row(j, 2187).unwrap();
            for k in 0..=7u32 {
                let top = pow3(k) as usize;
                for n in 0..=top {
                    let d = row[n].abs_diff(row[top - n]);
                    assert!(d <= 1, "j={j} k={k} n={n}");
                }
            }
        }
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec(prop_oneof![Just(Letter::A), Just(Letter::B)], 0..max)
    }

    proptest! {
        #[test]
        fn dp_matches_exhaustive_search(letters in word_strategy(12)) {
            prop_assert_eq!(*prefix_pl(&letters).last().unwrap(), naive_pl(&letters));
        }

        #[test]
        fn table_invariants(letters in word_strategy(200)) {
            let word = FiniteWord::new(letters);
            let table = pl_table(&word).unwrap();
            prop_assert_eq!(table.pl[0], 0);
            for i in 0..word.len() {
                prop_assert!(table.pl[i].abs_diff(table.pl[i + 1]) <= 1);
                let prefix = word.factor(1, i + 1);
                prop_assert_eq!(table.pl[i + 1] == 1, prefix.is_palindrome());
            }
        }

        #[test]
        fn mirror_invariance(letters in word_strategy(200)) {
            let word = FiniteWord::new(letters);
            prop_assert_eq!(pl_table(&word).unwrap().total(), pl_table(&mirror(&word)).unwrap().total());
        }

        #[test]
        fn saarela_on_sierpinski_factors(start in 0usize..4000, len in 0usize..2000, cut in 0usize..2000) {
            let s = sierpinski_prefix(6000).unwrap();
            let uv = s.factor(start + 1, start + len);
            let cut = cut.min(uv.len());
            let u = uv.factor(1, cut);
            let v = uv.factor(cut + 1, uv.len());
            let o = Oracle::default();
            let (pu, pv, puv) = (o.pl(&u).unwrap(), o.pl(&v).unwrap(), o.pl(&uv).unwrap());
            prop_assert!(pu.abs_diff(pv) <= puv);
        }
    }
}
