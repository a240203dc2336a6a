use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;

use super::geometry::Geometry;
use super::lambda::{PreimageTree, RATIO_TEST};
use super::lift::{lift_chain, lift_chain_path, LiftOptions};
use super::path::Polyline;
use super::poly::PolynomialMap;
use crate::error::{Error, Result};
use crate::group::{
    format_word, free_reduce, from_lex_index, level_permutation, Letter, Permutation, Presentation, Sym,
};
use crate::par;

/// Numeric level permutations of the generator loops:
/// `perms[g][n - 1][lex(v)] = lex(v^γ_g)` for `|v| = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyAction {
    degree: usize,
    names: Vec<String>,
    perms: Vec<Vec<Vec<usize>>>,
}

impl MonodromyAction {
    pub fn new(degree: usize, names: Vec<String>, perms: Vec<Vec<Vec<usize>>>) -> Self {
        MonodromyAction { degree, names, perms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_generators(&self) -> usize {
        self.perms.len()
    }

    pub fn depth(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    pub fn permutation(&self, g: usize, n: usize) -> &[usize] {
        &self.perms[g][n - 1]
    }
}

/// Index of the node nearest to `z`, subject to the ratio test.
fn match_node(nodes: &[Complex64], z: Complex64) -> Result<usize> {
    let mut best = (f64::INFINITY, usize::MAX);
    let mut second = f64::INFINITY;
    for (i, p) in nodes.iter().enumerate() {
        let d = (p - z).norm();
        if d < best.0 {
            second = best.0;
            best = (d, i);
        } else if d < second {
            second = d;
        }
    }
    if nodes.len() > 1 && best.0 * RATIO_TEST > second {
        return Err(Error::AmbiguousMatch(format!(
            "endpoint {z} is {:e} from the nearest node and {second:e} from the next; use a smaller step or a shallower depth",
            best.0
        )));
    }
    Ok(best.1)
}

/// Level permutations `1..=depth` of a loop based at the basepoint. Each
/// level is computed independently from its own lifts.
pub fn loop_permutations(
    f: &PolynomialMap,
    gamma: &Polyline,
    tree: &PreimageTree,
    depth: usize,
    opts: &LiftOptions,
) -> Result<Vec<Vec<usize>>> {
    if depth > tree.depth() {
        return Err(Error::Geometry(format!(
            "preimage tree has depth {} but {depth} levels were requested",
            tree.depth()
        )));
    }
    if (gamma.start() - tree.basepoint()).norm() > 1e-12 || !gamma.is_closed() {
        return Err(Error::Geometry("loop must start and end at the basepoint".into()));
    }
    let d = tree.degree();
    (1..=depth)
        .map(|n| {
            let nodes = tree.level(n);
            let perm = par::try_map_range(nodes.len(), |i| {
                let v = from_lex_index(i, d, n);
                let end = lift_chain(f, gamma, &tree.chain(&v), opts)?;
                match_node(nodes, end)
            })?;
            let distinct: HashSet<usize> = perm.iter().copied().collect();
            if distinct.len() != perm.len() {
                return Err(Error::AmbiguousMatch(format!(
                    "lifted endpoints collide at level {n}"
                )));
            }
            Ok(perm)
        })
        .collect()
}

/// Numeric permutations of all generator loops up to `depth`.
pub fn monodromy_permutations(
    f: &PolynomialMap,
    geometry: &Geometry,
    tree: &PreimageTree,
    depth: usize,
    opts: &LiftOptions,
) -> Result<MonodromyAction> {
    let perms = geometry
        .loops
        .iter()
        .map(|l| loop_permutations(f, l, tree, depth, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyAction {
        degree: tree.degree(),
        names: geometry.generator_names(),
        perms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyReport {
    Match {
        relabeling: Permutation,
    },
    /// First disagreement under the identity labelling; no relabeling matched.
    Mismatch {
        generator: String,
        level: usize,
        word: Vec<Letter>,
    },
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyReport::Match { relabeling } if relabeling.is_identity() => {
                write!(f, "MATCH (relabeling: identity)")
            }
            VerifyReport::Match { relabeling } => write!(f, "MATCH (relabeling: {relabeling})"),
            VerifyReport::Mismatch {
                generator,
                level,
                word,
            } => write!(
                f,
                "MISMATCH (generator {generator}, level {level}, word {})",
                format_word(word)
            ),
        }
    }
}

fn first_mismatch(p: &Presentation, m: &MonodromyAction, depth: usize) -> Result<Option<(usize, usize, usize)>> {
    for g in 0..p.num_generators() {
        for n in 1..=depth {
            let alg = level_permutation(p, &[Sym::new(g, false)], n, usize::MAX)?;
            let num = m.permutation(g, n);
            if let Some(i) = (0..alg.len()).find(|&i| alg[i] != num[i]) {
                return Ok(Some((g, n, i)));
            }
        }
    }
    Ok(None)
}

/// Compares a presentation with numeric permutations, generator `i` against
/// loop `i`, trying every relabeling of the alphabet (identity first).
pub fn verify_recursion(p: &Presentation, m: &MonodromyAction, depth: usize) -> Result<VerifyReport> {
    if p.degree() != m.degree() || p.num_generators() != m.num_generators() {
        return Err(Error::AlphabetMismatch(format!(
            "presentation has {} generators on {} letters, numeric action {} on {}",
            p.num_generators(),
            p.degree(),
            m.num_generators(),
            m.degree()
        )));
    }
    if depth > m.depth() {
        return Err(Error::Geometry(format!(
            "numeric action has depth {} but {depth} levels were requested",
            m.depth()
        )));
    }
    let first = first_mismatch(p, m, depth)?;
    if first.is_none() {
        return Ok(VerifyReport::Match {
            relabeling: Permutation::identity(p.degree()),
        });
    }
    for pi in Permutation::all(p.degree()).into_iter().filter(|pi| !pi.is_identity()) {
        if first_mismatch(&p.relabel(&pi)?, m, depth)?.is_none() {
            return Ok(VerifyReport::Match { relabeling: pi });
        }
    }
    let (g, n, i) = first.expect("checked above");
    Ok(VerifyReport::Mismatch {
        generator: p.names()[g].clone(),
        level: n,
        word: from_lex_index(i, p.degree(), n),
    })
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Fewest inverse letters first, then lexicographic on symbols.
fn canonical_key(w: &[Sym]) -> (usize, Vec<(usize, bool)>) {
    (
        w.iter().filter(|s| s.is_inverse()).count(),
        w.iter().map(|s| (s.generator(), s.is_inverse())).collect(),
    )
}

/// Freely reduced words of length exactly `len` over `m` generators.
fn words_of_length(m: usize, len: usize) -> Vec<Vec<Sym>> {
    let syms: Vec<Sym> = (0..m).flat_map(|g| [Sym::new(g, false), Sym::new(g, true)]).collect();
    let mut out: Vec<Vec<Sym>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| {
                syms.iter()
                    .filter(|s| w.last() != Some(&s.inverse()))
                    .map(move |&s| {
                        let mut v = w.clone();
                        v.push(s);
                        v
                    })
            })
            .collect();
    }
    out
}

/// Level permutations of a generator word from the numeric generator data.
fn word_perms(m: &MonodromyAction, inverses: &[Vec<Vec<usize>>], w: &[Sym], depth: usize) -> Vec<Vec<usize>> {
    (1..=depth)
        .map(|n| {
            let size = m.degree().pow(n as u32);
            w.iter().fold((0..size).collect::<Vec<_>>(), |acc, s| {
                let p = if s.is_inverse() {
                    &inverses[s.generator()][n - 1]
                } else {
                    &m.perms[s.generator()][n - 1]
                };
                compose(&acc, p)
            })
        })
        .collect()
}

/// Recovers a wreath recursion from the numeric action. For a generator `γ`
/// and letter `x` with `x^γ = y`, the loop `ℓ_x · γ_x · ℓ_y⁻¹` (with `γ_x`
/// the lift of `γ` from `Λ(x)`) represents the restriction `γ|x`; it is
/// identified with the shortest generator word of length `≤ max_len` whose
/// permutations agree on levels `1..=depth`. Ties are re-examined two levels
/// deeper while the tree allows it; words that still agree are taken to be
/// equal and the one with the fewest inverses (then lexicographically first)
/// is used.
pub fn infer_recursion(
    f: &PolynomialMap,
    geometry: &Geometry,
    tree: &PreimageTree,
    max_len: usize,
    depth: usize,
    opts: &LiftOptions,
) -> Result<Presentation> {
    let full_depth = tree.depth();
    if depth == 0 || depth > full_depth {
        return Err(Error::Geometry(format!(
            "inference depth must be in 1..={full_depth}"
        )));
    }
    let action = monodromy_permutations(f, geometry, tree, full_depth, opts)?;
    let inverses: Vec<Vec<Vec<usize>>> = action
        .perms
        .iter()
        .map(|levels| levels.iter().map(|p| invert(p)).collect())
        .collect();
    let d = tree.degree();
    let m = action.num_generators();
    let mut by_length: Vec<Vec<(Vec<Sym>, Vec<Vec<usize>>)>> = Vec::new();
    for len in 0..=max_len {
        by_length.push(
            words_of_length(m, len)
                .into_iter()
                .map(|w| {
                    let p = word_perms(&action, &inverses, &w, full_depth);
                    (w, p)
                })
                .collect(),
        );
    }

    let mut perms = Vec::with_capacity(m);
    let mut restrictions = Vec::with_capacity(m);
    for (g, gamma) in geometry.loops.iter().enumerate() {
        let images = action.perms[g][0].clone();
        let mut row = Vec::with_capacity(d);
        for x in 0..d {
            let y = images[x];
            let lifted = lift_chain_path(f, gamma, &[tree.point(&[x])], opts)?;
            let restriction_loop = geometry.connecting[x]
                .then(&lifted)
                .then(&geometry.connecting[y].reversed());
            let target = loop_permutations(f, &restriction_loop, tree, full_depth, opts)?;
            row.push(identify(&by_length, &target, depth, full_depth).ok_or_else(|| {
                Error::NoMatch(format!(
                    "restriction of {} at {x} matches no word of length <= {max_len} to depth {depth}; try a longer word bound or another geometry",
                    action.names[g]
                ))
            })?);
        }
        perms.push(Permutation::from_images(images)?);
        restrictions.push(row);
    }
    Presentation::new(d, action.names.clone(), perms, restrictions)
}

fn identify(
    by_length: &[Vec<(Vec<Sym>, Vec<Vec<usize>>)>],
    target: &[Vec<usize>],
    depth: usize,
    full_depth: usize,
) -> Option<Vec<Sym>> {
    let agrees = |p: &[Vec<usize>], k: usize| (0..k).all(|n| p[n] == target[n]);
    for words in by_length {
        let mut candidates: Vec<&(Vec<Sym>, Vec<Vec<usize>>)> =
            words.iter().filter(|(_, p)| agrees(p, depth)).collect();
        if candidates.is_empty() {
            continue;
        }
        let mut k = depth;
        while candidates.len() > 1 && k < full_depth {
            k = (k + 2).min(full_depth);
            let deeper: Vec<_> = candidates.iter().copied().filter(|(_, p)| agrees(p, k)).collect();
            if deeper.is_empty() {
                break;
            }
            candidates = deeper;
        }
        let best = candidates
            .into_iter()
            .min_by_key(|(w, _)| canonical_key(w))
            .expect("non-empty");
        return Some(free_reduce(&best.0));
    }
    None
}
