use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::Result;
use crate::group::word::level_size;
use crate::group::{format_word, from_lex_index, level_permutation, Presentation, Sym};

/// Schreier graph of the action on level `n`: vertices are the words of
/// length `n` in lexicographic order, with one edge `v → v^g` per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph {
    pub level: usize,
    pub degree: usize,
    pub names: Vec<String>,
    /// `(src, dst, generator)`.
    pub edges: Vec<(usize, usize, usize)>,
}

pub fn schreier_graph(p: &Presentation, n: usize, limit: usize) -> Result<LevelGraph> {
    let size = level_size(p.degree(), n, limit)?;
    let mut edges = Vec::with_capacity(size * p.num_generators());
    for g in 0..p.num_generators() {
        let perm = level_permutation(p, &[Sym::new(g, false)], n, limit)?;
        edges.extend(perm.iter().enumerate().map(|(v, &w)| (v, w, g)));
    }
    Ok(LevelGraph {
        level: n,
        degree: p.degree(),
        names: p.names().to_vec(),
        edges,
    })
}

impl LevelGraph {
    pub fn num_vertices(&self) -> usize {
        self.degree.pow(self.level as u32)
    }

    /// Edges of the underlying simple undirected graph, without loops.
    pub fn simple_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter(|(a, b, _)| a != b)
            .map(|&(a, b, _)| (a.min(b), a.max(b)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in self.simple_edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Whether the underlying simple graph is a path through all vertices.
    pub fn is_path(&self) -> bool {
        let n = self.num_vertices();
        let edges = self.simple_edges();
        if edges.len() + 1 != n || !self.is_connected() {
            return false;
        }
        let mut deg = vec![0; n];
        for (a, b) in edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        n == 1 || (deg.iter().all(|&k| k <= 2) && deg.iter().filter(|&&k| k == 1).count() == 2)
    }

    /// `src,dst,gen`, one row per generator edge.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("src,dst,gen\n");
        for &(a, b, g) in &self.edges {
            writeln!(s, "{a},{b},{}", self.names[g]).expect("write to string");
        }
        s
    }

    /// DOT rendering with parallel edges merged into one labelled edge.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph level{} {{\n", self.level);
        for v in 0..self.num_vertices() {
            let word = format_word(&from_lex_index(v, self.degree, self.level));
            let label = if word.is_empty() { "∅".to_string() } else { word };
            writeln!(s, "  v{v} [label=\"{label}\"];").expect("write to string");
        }
        let mut merged: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
        for &(a, b, g) in &self.edges {
            merged.entry((a, b)).or_default().push(&self.names[g]);
        }
        for ((a, b), labels) in merged {
            writeln!(s, "  v{a} -> v{b} [label=\"{}\"];", labels.join(",")).expect("write to string");
        }
        s.push_str("}\n");
        s
    }
}
