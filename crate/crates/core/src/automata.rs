//! Deterministic finite automata with output (DFAOs) over base-3 digits and
//! 3-uniform morphic sequences.
//!
//! Both kinds of definition are loaded from a small line-oriented text
//! format. DFAOs:
//!
//! ```text
//! state <name> output <-1|0|1>
//! init <name>
//! edge <from> <digit> <to>
//! ```
//!
//! Morphic systems:
//!
//! ```text
//! letter <name> output <int>
//! seed <name>
//! rule <name> -> <l1> <l2> <l3>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::closed_form::DifferenceValue;
use crate::error::{Error, Result};
use crate::ternary::to_ternary;

/// Default number of fixed-point letters that may be generated (3^13).
pub const DEFAULT_HORIZON: u64 = 1_594_323;

const BASE: usize = 3;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Meaningful lines with 1-based line numbers, split into tokens.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        (!line.is_empty() && !line.starts_with('#'))
            .then(|| (i + 1, line.split_whitespace().collect()))
    })
}

#[derive(Debug, Default)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn add(&mut self, line: usize, name: &str) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(parse_err(line, format!("duplicate name {name:?}")));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    fn get(&self, line: usize, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| parse_err(line, format!("unknown name {name:?}")))
    }
}

fn parse_digit(line: usize, token: &str) -> Result<usize> {
    match token {
        "0" => Ok(0),
        "1" => Ok(1),
        "2" => Ok(2),
        other => Err(parse_err(line, format!("invalid digit {other:?}"))),
    }
}

/// A DFAO reading base-3 digits, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    names: Vec<String>,
    outputs: Vec<DifferenceValue>,
    transitions: Vec<[usize; BASE]>,
    initial: usize,
}

impl Dfao {
    /// Parses the text format and drops states unreachable from `init`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names = Names::default();
        let mut outputs = Vec::new();
        let mut edges: Vec<(usize, &str, usize, &str)> = Vec::new();
        let mut init: Option<(usize, &str)> = None;

        for (line, tokens) in directives(text) {
            match tokens.as_slice() {
                ["state", name, "output", out] => {
                    let value: i64 = out
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid output {out:?}")))?;
                    let value = DifferenceValue::try_from(value)
                        .map_err(|_| parse_err(line, format!("output {value} not in -1, 0, 1")))?;
                    names.add(line, name)?;
                    outputs.push(value);
                }
                ["init", name] => {
                    if init.replace((line, name)).is_some() {
                        return Err(parse_err(line, "duplicate init"));
                    }
                }
                ["edge", from, digit, to] => {
                    edges.push((line, from, parse_digit(line, digit)?, to));
                }
                _ => return Err(parse_err(line, format!("unrecognised directive {tokens:?}"))),
            }
        }

        let mut table: Vec<[Option<usize>; BASE]> = vec![[None; BASE]; names.names.len()];
        for (line, from, digit, to) in edges {
            let (from, to) = (names.get(line, from)?, names.get(line, to)?);
            if table[from][digit].replace(to).is_some() {
                return Err(parse_err(line, "duplicate edge"));
            }
        }
        let transitions = table
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let mut out = [0; BASE];
                for (digit, slot) in row.iter().enumerate() {
                    out[digit] = slot.ok_or_else(|| {
                        parse_err(0, format!("state {:?} has no edge on {digit}", names.names[s]))
                    })?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let (line, init) = init.ok_or_else(|| parse_err(0, "missing init"))?;
        let initial = names.get(line, init)?;

        Ok(Dfao {
            names: names.names,
            outputs,
            transitions,
            initial,
        }
        .pruned())
    }

    fn pruned(self) -> Self {
        let order = reachable(self.initial, |s| self.transitions[s]);
        let mut renumber = vec![usize::MAX; self.names.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        Dfao {
            names: order.iter().map(|&s| self.names[s].clone()).collect(),
            outputs: order.iter().map(|&s| self.outputs[s]).collect(),
            transitions: order
                .iter()
                .map(|&s| self.transitions[s].map(|t| renumber[t]))
                .collect(),
            initial: 0,
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn initial_name(&self) -> &str {
        &self.names[self.initial]
    }

    /// Target of the edge labelled `digit` from the state called `from`.
    pub fn successor(&self, from: &str, digit: u8) -> Option<&str> {
        let s = self.names.iter().position(|n| n == from)?;
        let t = *self.transitions[s].get(digit as usize)?;
        Some(&self.names[t])
    }

    pub fn output_of(&self, state: &str) -> Option<DifferenceValue> {
        let s = self.names.iter().position(|n| n == state)?;
        Some(self.outputs[s])
    }

    /// Output after reading `digits` from the initial state.
    pub fn eval_digits(&self, digits: &[u8]) -> DifferenceValue {
        let end = digits
            .iter()
            .fold(self.initial, |s, &d| self.transitions[s][d as usize]);
        self.outputs[end]
    }

    /// Output on `(n)_3`; the empty input for `n = 0`.
    pub fn eval(&self, n: u64) -> DifferenceValue {
        self.eval_digits(to_ternary(n).digits())
    }

    /// Whether reading 0 from the initial state stays there, so leading zeros
    /// never change the output.
    pub fn initial_loops_on_zero(&self) -> bool {
        self.transitions[self.initial][0] == self.initial
    }
}

/// Breadth-first order of the states reachable from `start`.
fn reachable(start: usize, next: impl Fn(usize) -> [usize; BASE]) -> Vec<usize> {
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for t in next(s) {
            if !seen.contains(&t) {
                seen.push(t);
                queue.push_back(t);
            }
        }
    }
    seen
}

pub fn dfao_eval(a: &Dfao, n: u64) -> DifferenceValue {
    a.eval(n)
}

/// A 3-uniform morphism with a coding and a prolongable seed letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphicSystem {
    names: Vec<String>,
    coding: Vec<i32>,
    rules: Vec<[usize; BASE]>,
    seed: usize,
    horizon: u64,
}

impl MorphicSystem {
    pub fn parse(text: &str) -> Result<Self> {
        let mut names = Names::default();
        let mut coding = Vec::new();
        let mut rules: Vec<(usize, &str, [&str; BASE])> = Vec::new();
        let mut seed: Option<(usize, &str)> = None;

        for (line, tokens) in directives(text) {
            match tokens.as_slice() {
                ["letter", name, "output", out] => {
                    let value: i32 = out
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid output {out:?}")))?;
                    names.add(line, name)?;
                    coding.push(value);
                }
                ["seed", name] => {
                    if seed.replace((line, name)).is_some() {
                        return Err(parse_err(line, "duplicate seed"));
                    }
                }
                ["rule", name, "->", image @ ..] => {
                    let image: [&str; BASE] = image.try_into().map_err(|_| {
                        parse_err(line, format!("image of {name:?} must have {BASE} letters"))
                    })?;
                    rules.push((line, name, image));
                }
                _ => return Err(parse_err(line, format!("unrecognised directive {tokens:?}"))),
            }
        }

        let mut table: Vec<Option<[usize; BASE]>> = vec![None; names.names.len()];
        for (line, name, image) in rules {
            let from = names.get(line, name)?;
            let mut to = [0; BASE];
            for (slot, letter) in to.iter_mut().zip(image) {
                *slot = names.get(line, letter)?;
            }
            if table[from].replace(to).is_some() {
                return Err(parse_err(line, format!("duplicate rule for {name:?}")));
            }
        }
        let rules = table
            .iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| parse_err(0, format!("no rule for {:?}", names.names[i]))))
            .collect::<Result<Vec<_>>>()?;
        let (line, seed) = seed.ok_or_else(|| parse_err(0, "missing seed"))?;
        let seed = names.get(line, seed)?;

        Self::from_parts(names.names, coding, rules, seed)
    }

    fn from_parts(
        names: Vec<String>,
        coding: Vec<i32>,
        rules: Vec<[usize; BASE]>,
        seed: usize,
    ) -> Result<Self> {
        if rules[seed][0] != seed {
            return Err(Error::Precondition(format!(
                "seed {:?} is not prolongable",
                names[seed]
            )));
        }
        Ok(MorphicSystem {
            names,
            coding,
            rules,
            seed,
            horizon: DEFAULT_HORIZON,
        })
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn letters(&self) -> &[String] {
        &self.names
    }

    pub fn seed_name(&self) -> &str {
        &self.names[self.seed]
    }

    pub fn coding_of(&self, letter: &str) -> Option<i32> {
        let i = self.names.iter().position(|n| n == letter)?;
        Some(self.coding[i])
    }

    /// Image of `letter` under the morphism, as letter names.
    pub fn image(&self, letter: &str) -> Option<[&str; BASE]> {
        let i = self.names.iter().position(|n| n == letter)?;
        Some(self.rules[i].map(|t| self.names[t].as_str()))
    }

    /// Rules as `(letter, image)` in declaration order.
    pub fn rules(&self) -> impl Iterator<Item = (&str, [&str; BASE])> + '_ {
        self.names
            .iter()
            .zip(&self.rules)
            .map(|(n, r)| (n.as_str(), r.map(|t| self.names[t].as_str())))
    }

    /// Index of letter `n` (0-based) of the fixed point, read off the base-3
    /// digits of `n`.
    fn letter_index_at(&self, n: u64) -> usize {
        to_ternary(n)
            .digits()
            .iter()
            .fold(self.seed, |s, &d| self.rules[s][d as usize])
    }

    pub fn letter_at(&self, n: u64) -> &str {
        &self.names[self.letter_index_at(n)]
    }

    /// Coded letter `n` of the fixed point, by digit descent.
    pub fn morphic_letter(&self, n: u64) -> Result<i32> {
        if n >= self.horizon {
            return Err(Error::LimitExceeded {
                what: "fixed-point index",
                value: n,
                max: self.horizon - 1,
            });
        }
        Ok(self.coding[self.letter_index_at(n)])
    }

    /// The first `len` coded letters, by iterating the morphism on a buffer.
    pub fn coded_prefix(&self, len: u64) -> Result<Vec<i32>> {
        if len > self.horizon {
            return Err(Error::LimitExceeded {
                what: "fixed-point prefix length",
                value: len,
                max: self.horizon,
            });
        }
        let mut buffer = vec![self.seed];
        while (buffer.len() as u64) < len {
            buffer = buffer.iter().flat_map(|&l| self.rules[l]).collect();
        }
        buffer.truncate(len as usize);
        Ok(buffer.into_iter().map(|l| self.coding[l]).collect())
    }
}

impl fmt::Display for MorphicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, &out) in self.names.iter().zip(&self.coding) {
            writeln!(f, "letter {name} output {out}")?;
        }
        writeln!(f, "seed {}", self.seed_name())?;
        for (name, image) in self.rules() {
            writeln!(f, "rule {name} -> {}", image.join(" "))?;
        }
        Ok(())
    }
}

pub fn morphic_letter(m: &MorphicSystem, n: u64) -> Result<i32> {
    m.morphic_letter(n)
}

/// Direct product of two 3-uniform morphic systems, restricted to the letter
/// pairs reachable from the pair of seeds.
#[derive(Debug, Clone)]
pub struct ProductSystem {
    pub left: MorphicSystem,
    pub right: MorphicSystem,
    /// `(left letter, right letter)` indices, in discovery order.
    pairs: Vec<(usize, usize)>,
    pair_rules: Vec<[usize; BASE]>,
    pair_coding: Vec<i32>,
}

impl ProductSystem {
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs as `(left name, right name)`.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.pairs.iter().map(|&(l, r)| {
            (self.left.names[l].as_str(), self.right.names[r].as_str())
        })
    }

    /// The product as an ordinary morphic system, each pair named by
    /// `name(left, right)`. Fails if two pairs receive the same name.
    pub fn to_system(&self, name: impl Fn(&str, &str) -> String) -> Result<MorphicSystem> {
        let names: Vec<String> = self.pairs().map(|(l, r)| name(l, r)).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Inconsistent(format!("pair name {n:?} is not unique")));
            }
        }
        MorphicSystem::from_parts(names, self.pair_coding.clone(), self.pair_rules.clone(), 0)
    }

    /// Names of the form `left/right`.
    pub fn to_system_raw(&self) -> MorphicSystem {
        self.to_system(|l, r| format!("{l}/{r}"))
            .expect("pairs are distinct")
    }

    /// Pairs take the left name unless the left letter is `S`, in which case
    /// they take the right name.
    pub fn to_system_named(&self) -> Result<MorphicSystem> {
        self.to_system(|l, r| if l == "S" { r.to_string() } else { l.to_string() })
    }
}

/// Builds the product morphism by breadth-first discovery of pairs from the
/// seed pair; a pair is coded by the sum of its components' codings.
pub fn build_product(left: &MorphicSystem, right: &MorphicSystem) -> ProductSystem {
    let mut pairs = vec![(left.seed, right.seed)];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(pairs[0], 0)]);
    let mut pair_rules = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (l, r) = pairs[next];
        let mut image = [0; BASE];
        for (i, slot) in image.iter_mut().enumerate() {
            let pair = (left.rules[l][i], right.rules[r][i]);
            *slot = *index.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                pairs.len() - 1
            });
        }
        pair_rules.push(image);
        next += 1;
    }
    let pair_coding = pairs
        .iter()
        .map(|&(l, r)| left.coding[l] + right.coding[r])
        .collect();
    ProductSystem {
        left: left.clone(),
        right: right.clone(),
        pairs,
        pair_rules,
        pair_coding,
    }
}

/// The three DFAOs and three morphic systems describing `d_q`, `d_t`, `d_p`.
#[derive(Debug, Clone)]
pub struct BuiltinSystems {
    pub dq: Dfao,
    pub dt: Dfao,
    pub dp: Dfao,
    /// Coded fixed point of a 3-uniform morphism equal to `d_q`.
    pub dq_morphic: MorphicSystem,
    pub dt_morphic: MorphicSystem,
    pub dp_morphic: MorphicSystem,
}

pub const DQ_FIXTURE: &str = include_str!("../data/dq.dfao");
pub const DT_FIXTURE: &str = include_str!("../data/dt.dfao");
pub const DP_FIXTURE: &str = include_str!("../data/dp.dfao");
pub const DQ_MORPHIC_FIXTURE: &str = include_str!("../data/dq.morph");
pub const DT_MORPHIC_FIXTURE: &str = include_str!("../data/dt.morph");
pub const DP_MORPHIC_FIXTURE: &str = include_str!("../data/dp.morph");

pub fn builtin_systems() -> &'static BuiltinSystems {
    static SYSTEMS: OnceLock<BuiltinSystems> = OnceLock::new();
    SYSTEMS.get_or_init(|| BuiltinSystems {
        dq: Dfao::parse(DQ_FIXTURE).expect("dq fixture"),
        dt: Dfao::parse(DT_FIXTURE).expect("dt fixture"),
        dp: Dfao::parse(DP_FIXTURE).expect("dp fixture"),
        dq_morphic: MorphicSystem::parse(DQ_MORPHIC_FIXTURE).expect("dq morphism fixture"),
        dt_morphic: MorphicSystem::parse(DT_MORPHIC_FIXTURE).expect("dt morphism fixture"),
        dp_morphic: MorphicSystem::parse(DP_MORPHIC_FIXTURE).expect("dp morphism fixture"),
    })
}
