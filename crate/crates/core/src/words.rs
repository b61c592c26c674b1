//! Finite words over `{a, b}` and the Sierpinski word, the fixed point of
//! `a -> aba, b -> bbb` starting with `a`.
//!
//! Positions in the public contracts are 1-based: `s[1..n]` is the prefix of
//! length `n`. Storage is an ordinary 0-based vector.

use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Default cap on the length of a generated Sierpinski prefix (3^13).
pub const DEFAULT_MAX_PREFIX: usize = 1_594_323;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    fn image(self) -> [Letter; 3] {
        match self {
            Letter::A => [Letter::A, Letter::B, Letter::A],
            Letter::B => [Letter::B; 3],
        }
    }
}

/// An immutable finite word over `{a, b}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    /// `b^j`.
    pub fn b_power(j: usize) -> Self {
        FiniteWord(vec![Letter::B; j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> Option<Letter> {
        i.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    /// The factor `w[i..j]`, 1-based and inclusive; empty when `j < i`.
    pub fn factor(&self, i: usize, j: usize) -> FiniteWord {
        if j < i || i == 0 {
            return FiniteWord::empty();
        }
        FiniteWord(self.0[i - 1..j.min(self.len())].to_vec())
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        FiniteWord(letters)
    }

    pub fn mirror(&self) -> FiniteWord {
        mirror(self)
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(self)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(FiniteWord)
    }
}

/// The mirror image: letter `i` of the output is letter `len - i + 1` of the input.
pub fn mirror(w: &FiniteWord) -> FiniteWord {
    FiniteWord(w.0.iter().rev().copied().collect())
}

pub fn is_palindrome(w: &FiniteWord) -> bool {
    let letters = w.letters();
    letters.iter().eq(letters.iter().rev())
}

/// Lazily extended prefix of the Sierpinski word.
///
/// Readers share the buffer; extension takes the write lock and applies the
/// morphism to the current buffer until it is long enough, so the buffer is
/// always exactly `phi^generation(a)`.
#[derive(Debug)]
pub struct SierpinskiWord {
    max_len: usize,
    inner: RwLock<Generated>,
}

#[derive(Debug)]
struct Generated {
    buffer: Vec<Letter>,
    generation: u32,
}

impl Default for SierpinskiWord {
    fn default() -> Self {
        Self::with_max_len(DEFAULT_MAX_PREFIX)
    }
}

impl SierpinskiWord {
    pub fn with_max_len(max_len: usize) -> Self {
        SierpinskiWord {
            max_len,
            inner: RwLock::new(Generated {
                buffer: vec![Letter::A],
                generation: 0,
            }),
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of morphism applications performed so far.
    pub fn generation(&self) -> u32 {
        self.inner.read().expect("poisoned").generation
    }

    /// `s[1..n]`.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        self.with_prefix(n, |letters| FiniteWord(letters.to_vec()))
    }

    /// Runs `f` on the borrowed letters of `s[1..n]` without copying them.
    pub fn with_prefix<T>(&self, n: usize, f: impl FnOnce(&[Letter]) -> T) -> Result<T> {
        if n > self.max_len {
            return Err(Error::LimitExceeded {
                what: "Sierpinski prefix length",
                value: n as u64,
                max: self.max_len as u64,
            });
        }
        {
            let guard = self.inner.read().expect("poisoned");
            if guard.buffer.len() >= n {
                return Ok(f(&guard.buffer[..n]));
            }
        }
        let mut guard = self.inner.write().expect("poisoned");
        while guard.buffer.len() < n {
            let next: Vec<Letter> = guard.buffer.iter().flat_map(|l| l.image()).collect();
            guard.buffer = next;
            guard.generation += 1;
        }
        Ok(f(&guard.buffer[..n]))
    }
}

fn shared() -> &'static SierpinskiWord {
    static WORD: OnceLock<SierpinskiWord> = OnceLock::new();
    WORD.get_or_init(SierpinskiWord::default)
}

/// `s[1..n]` from a process-wide buffer capped at [`DEFAULT_MAX_PREFIX`].
pub fn sierpinski_prefix(n: usize) -> Result<FiniteWord> {
    shared().prefix(n)
}

/// Letter `s[i]` (1-based) computed positionally: `s[i] = a` iff the ternary
/// expansion of `i - 1` has no digit 1.
pub fn sierpinski_letter(i: u64) -> Option<Letter> {
    let mut m = i.checked_sub(1)?;
    while m > 0 {
        if m % 3 == 1 {
            return Some(Letter::B);
        }
        m /= 3;
    }
    Some(Letter::A)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn prefixes_match_listing() {
        assert_eq!(sierpinski_prefix(0).unwrap(), FiniteWord::empty());
        assert_eq!(sierpinski_prefix(9).unwrap().to_string(), "ababbbaba");
        assert_eq!(
            sierpinski_prefix(27).unwrap().to_string(),
            "ababbbababbbbbbbbbababbbaba"
        );
    }

    #[test]
    fn palindromes_and_mirrors() {
        assert!(is_palindrome(&FiniteWord::empty()));
        assert!(is_palindrome(&w("abbaaaabba")));
        assert!(!is_palindrome(&w("ab")));
        assert_eq!(mirror(&FiniteWord::empty()), FiniteWord::empty());
        assert_eq!(mirror(&w("aab")), w("baa"));
        assert_eq!(mirror(&w("ababbba")), w("abbbaba"));
    }

    #[test]
    fn rejects_foreign_letters() {
        assert!(matches!("abc".parse::<FiniteWord>(), Err(Error::InvalidLetter('c'))));
    }

    #[test]
    fn prefix_limit() {
        let word = SierpinskiWord::with_max_len(10);
        assert!(word.prefix(10).is_ok());
        assert!(matches!(word.prefix(11), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn generation_tracks_buffer() {
        let word = SierpinskiWord::default();
        word.prefix(10).unwrap();
        assert_eq!(word.generation(), 3);
        word.prefix(5).unwrap();
        assert_eq!(word.generation(), 3);
    }

    #[test]
    fn powers_of_three_structure() {
        for k in 1..=10u32 {
            let third = 3usize.pow(k - 1);
            let whole = sierpinski_prefix(3 * third).unwrap();
            let head = sierpinski_prefix(third).unwrap();
            let expected = head.concat(&FiniteWord::b_power(third)).concat(&head);
            assert_eq!(whole, expected, "k = {k}");
            assert!(whole.is_palindrome());
        }
    }

    #[test]
    fn self_similarity() {
        for k in 0..=8u32 {
            let p = 3usize.pow(k);
            let s = sierpinski_prefix(3 * p).unwrap();
            for t in 1..=p {
                assert_eq!(s.at(2 * p + t), s.at(t));
            }
        }
    }

    #[test]
    fn positional_letters_agree() {
        let s = sierpinski_prefix(3usize.pow(9)).unwrap();
        for (i, l) in s.letters().iter().enumerate() {
            assert_eq!(sierpinski_letter(i as u64 + 1), Some(*l));
        }
        assert_eq!(sierpinski_letter(0), None);
    }

    #[test]
    fn concurrent_readers_see_consistent_prefixes() {
        let word = SierpinskiWord::default();
        std::thread::scope(|scope| {
            for t in 0..8usize {
                let word = &word;
                scope.spawn(move || {
                    let n = 100 + t * 997;
                    let got = word.prefix(n).unwrap();
                    for (i, l) in got.letters().iter().enumerate() {
                        assert_eq!(sierpinski_letter(i as u64 + 1), Some(*l));
                    }
                });
            }
        });
    }
}
