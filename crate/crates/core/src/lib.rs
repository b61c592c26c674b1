//! Prefix palindromic length of the Sierpinski word.
//!
//! The Sierpinski word `s = ababbbaba b^9 ababbbaba ...` is the fixed point of
//! `a -> aba, b -> bbb`. This crate computes `p(n)`, the least number of
//! palindromes whose concatenation is `s[1..n]`, along with the auxiliary
//! functions `q_j(n) = PL(b^j s[1..n])`, `q = min_j q_j` and `t = p - q`, by
//! four independent routes:
//!
//! * [`oracle`]: dynamic programming on the actual word;
//! * [`recursion`]: recurrences on `n` relative to powers of three;
//! * [`closed_form`]: counting digit patterns in the ternary expansion of `n`;
//! * [`automata`]: 3-state-machine (DFAO) and 3-uniform morphic descriptions
//!   of the first differences.
//!
//! [`verify`] sweeps ranges of `n` and checks that all routes agree.

pub mod automata;
pub mod closed_form;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod recursion;
pub mod ternary;
pub mod verify;
pub mod words;

pub use automata::{build_product, dfao_eval, morphic_letter, builtin_systems, Dfao, MorphicSystem, ProductSystem};
pub use closed_form::{
    cf_dp, cf_dq, cf_dt, cf_q, cf_q_vs_overline, cf_t, count_s, in_s, DifferenceValue, SMembership, SReason,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use oracle::{oracle_p, oracle_q, oracle_qj, pl_table, Oracle, PlTable};
pub use recursion::{rec_p, rec_q, rec_q_ternary, rec_qj, rec_t, Recursion};
pub use ternary::{decompose_groups, from_ternary, overline, to_ternary, GroupDecomposition, TernaryExpansion};
pub use words::{is_palindrome, mirror, sierpinski_prefix, FiniteWord, Letter, SierpinskiWord};
