use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::word::check_letters;
use crate::group::{parse_word, Letter};
use crate::nucleus::Nucleus;

/// The left-infinite sequence `…ppp·w` with period `p` and preperiod `w`;
/// the rightmost letter of `w` is `x₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    preperiod: Vec<Letter>,
    period: Vec<Letter>,
}

impl SequenceSpec {
    pub fn new(preperiod: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Syntax {
                line: 0,
                message: "the period of a sequence must be non-empty".into(),
            });
        }
        Ok(SequenceSpec { preperiod, period })
    }

    /// Parses `"<preperiod>:<period>"`, e.g. `10:1` for `…11110`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let (pre, per) = text.split_once(':').ok_or_else(|| Error::Syntax {
            line: 0,
            message: format!("expected `<preperiod>:<period>`, got `{text}`"),
        })?;
        Self::new(parse_word(pre, d)?, parse_word(per, d)?)
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// The letter `x_i`, `i ≥ 1`.
    pub fn letter(&self, i: usize) -> Letter {
        let w = self.preperiod.len();
        if i <= w {
            self.preperiod[w - i]
        } else {
            let p = self.period.len();
            self.period[p - 1 - (i - w - 1) % p]
        }
    }

    /// Drops `x₁`.
    pub fn shift(&self) -> SequenceSpec {
        if let Some((_, rest)) = self.preperiod.split_last() {
            SequenceSpec {
                preperiod: rest.to_vec(),
                period: self.period.clone(),
            }
        } else {
            let mut period = self.period.clone();
            period.rotate_right(1);
            SequenceSpec {
                preperiod: Vec::new(),
                period,
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decides whether two eventually periodic sequences are asymptotically
/// equivalent: whether the Moore diagram of the nucleus has a left-infinite
/// path `…e₂e₁` with `e_i` labelled `(x_i, y_i)`.
///
/// Beyond the longer preperiod `L` the labels repeat with period
/// `P = lcm`. On the graph of pairs (state, phase) the states admitting an
/// infinite chain of predecessors are found by repeatedly discarding pairs
/// without one; the preperiod labels are then read from each surviving
/// state at position `L`.
pub fn asymptotic_equivalent(n: &Nucleus, s1: &SequenceSpec, s2: &SequenceSpec) -> Result<bool> {
    let d = n.presentation().degree();
    for s in [s1, s2] {
        check_letters(&s.preperiod, d)
            .and_then(|_| check_letters(&s.period, d))
            .map_err(|_| Error::AlphabetMismatch(format!("sequence letters must be below {d}")))?;
    }
    let l = s1.preperiod.len().max(s2.preperiod.len());
    let (p1, p2) = (s1.period.len(), s2.period.len());
    let period = p1 / gcd(p1, p2) * p2;
    // Labels at the position with phase φ, i.e. i = L + 1 + φ.
    let label = |phase: usize| {
        let i = l + 1 + phase;
        (s1.letter(i), s2.letter(i))
    };
    let states = n.len();
    let node = |q: usize, phase: usize| q * period + phase;
    // Predecessor of (q, φ) is (q', φ+1) with q'|x = q and x^q' = y for the
    // labels of phase φ+1 (position i+1).
    let mut indeg = vec![0usize; states * period];
    let mut succ = vec![None; states * period];
    for q in 0..states {
        for phase in 0..period {
            let (x, y) = label(phase);
            if n.output(q, x) == y {
                let target = node(n.restriction(q, x), (phase + period - 1) % period);
                succ[node(q, phase)] = Some(target);
                indeg[target] += 1;
            }
        }
    }
    let mut alive = vec![true; states * period];
    let mut stack: Vec<usize> = (0..states * period).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = stack.pop() {
        alive[v] = false;
        if let Some(t) = succ[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    // Position L has phase P-1.
    let starts: HashSet<usize> = (0..states).filter(|&q| alive[node(q, period - 1)]).collect();
    Ok(starts.into_iter().any(|mut q| {
        for i in (1..=l).rev() {
            let (x, y) = (s1.letter(i), s2.letter(i));
            if n.output(q, x) != y {
                return false;
            }
            q = n.restriction(q, x);
        }
        true
    }))
}
