use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::word::Letter;

/// A Moore diagram: states with a transition `π(q, x)` and an output
/// `λ(q, x)`, both total on states × letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreAutomaton {
    pub degree: usize,
    pub labels: Vec<String>,
    pub transition: Vec<Vec<usize>>,
    pub output: Vec<Vec<Letter>>,
}

impl MooreAutomaton {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// Runs the transducer from `state` on `v`.
    pub fn simulate(&self, mut state: usize, v: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(v.len());
        for &x in v {
            out.push(self.output[state][x]);
            state = self.transition[state][x];
        }
        out
    }

    /// DOT rendering: one node per state, edges labelled `x|y`. Parallel
    /// edges between the same states are merged into one comma-separated label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        writeln!(s, "digraph {name} {{").unwrap();
        for (i, label) in self.labels.iter().enumerate() {
            writeln!(s, "  s{i} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
        }
        for q in 0..self.num_states() {
            let mut edges: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for x in 0..self.degree {
                edges
                    .entry(self.transition[q][x])
                    .or_default()
                    .push(format!("{}|{}", x, self.output[q][x]));
            }
            for (target, labels) in edges {
                writeln!(s, "  s{q} -> s{target} [label=\"{}\"];", labels.join(",")).unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}
