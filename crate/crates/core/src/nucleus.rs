//! Contraction analysis: nucleus, Moore diagram, contraction-coefficient
//! estimate and a nucleus-accelerated word problem.
//!
//! The nucleus is found by a semi-algorithm on a growing, restriction-closed
//! set `N` of canonical elements:
//!
//! 1. `N` starts as the restriction closure of the generators, their
//!    inverses and the identity.
//! 2. The products `N·N` are explored through the *pair graph* on `N × N`,
//!    `(g, h) → (g|x, h|(x^g))`, whose nodes represent the elements `gh`.
//!    Pairs lying on a cycle or reachable from one are the recurrent pairs;
//!    their products are restrictions of some element at arbitrarily deep
//!    levels.
//! 3. If every recurrent product is already in `N`, the process is stable:
//!    every deep restriction of every word lies in `N`, and the nucleus is the
//!    recurrent part of the restriction graph of `N`. Otherwise the missing
//!    products are added (with their closure) and the round repeats.
//!
//! Non-contraction is never claimed; exhausting a budget yields a
//! [`ContractionStatus::BudgetExceeded`] report carrying the partial set.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::element::fingerprint_level;
use crate::group::{
    free_reduce, invert_word, is_identity, level_permutation, GroupWord, Letter, MooreAutomaton,
    Presentation, Sym, DEFAULT_STATE_BUDGET,
};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NucleusBudgets {
    pub max_set_size: usize,
    pub max_rounds: usize,
    /// Longest transient (non-recurrent) path tolerated in a round's pair
    /// graph before giving up.
    pub depth_per_round: usize,
    /// Budget for each bisimulation equality test.
    pub word_problem_states: usize,
}

impl Default for NucleusBudgets {
    fn default() -> Self {
        NucleusBudgets {
            max_set_size: 5000,
            max_rounds: 50,
            depth_per_round: 16,
            word_problem_states: DEFAULT_STATE_BUDGET,
        }
    }
}

/// A certified nucleus. Only [`compute_nucleus`] constructs one.
#[derive(Debug, Clone)]
pub struct Nucleus {
    pres: Arc<Presentation>,
    elements: Vec<GroupWord>,
    restriction: Vec<Vec<usize>>,
    output: Vec<Vec<Letter>>,
    inverse: Vec<usize>,
    product: Vec<Vec<Option<usize>>>,
    sym_index: Vec<Option<usize>>,
    identity: usize,
}

#[derive(Debug, Clone)]
pub enum ContractionStatus {
    Contracting(Nucleus),
    BudgetExceeded { partial: Vec<GroupWord>, reason: String },
}

#[derive(Debug, Clone)]
pub struct ContractionReport {
    pub status: ContractionStatus,
    pub rounds: usize,
    pub peak_set_size: usize,
    /// Restrictions of any product of two elements of the stabilized set at
    /// this depth or deeper lie in the nucleus.
    pub stabilization_depth: Option<usize>,
    pub rho_estimate: Option<f64>,
}

impl ContractionReport {
    pub fn nucleus(&self) -> Option<&Nucleus> {
        match &self.status {
            ContractionStatus::Contracting(n) => Some(n),
            ContractionStatus::BudgetExceeded { .. } => None,
        }
    }
}

/// Canonical element store: one freely reduced word per class of `equal`
/// elements, bucketed by the action on a fixed level.
struct Store {
    pres: Arc<Presentation>,
    level: usize,
    words: Vec<Vec<Sym>>,
    prints: Vec<Arc<Vec<usize>>>,
    buckets: HashMap<Vec<usize>, Vec<usize>>,
    restriction: Vec<Vec<usize>>,
    output: Vec<Vec<Letter>>,
    budget: usize,
    max_size: usize,
}

impl Store {
    fn new(pres: Arc<Presentation>, budget: usize, max_size: usize) -> Self {
        let level = fingerprint_level(pres.degree());
        Store {
            pres,
            level,
            words: Vec::new(),
            prints: Vec::new(),
            buckets: HashMap::new(),
            restriction: Vec::new(),
            output: Vec::new(),
            budget,
            max_size,
        }
    }

    fn len(&self) -> usize {
        self.words.len()
    }

    fn fingerprint(&self, word: &[Sym]) -> Result<Vec<usize>> {
        level_permutation(&self.pres, word, self.level, usize::MAX)
    }

    fn find_with(&self, word: &[Sym], print: &[usize]) -> Result<Option<usize>> {
        let Some(bucket) = self.buckets.get(print) else {
            return Ok(None);
        };
        for &i in bucket {
            if self.words[i] == word {
                return Ok(Some(i));
            }
        }
        for &i in bucket {
            let mut q = word.to_vec();
            q.extend(invert_word(&self.words[i]));
            if is_identity(&self.pres, &q, self.budget)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn insert_new(&mut self, word: Vec<Sym>, print: Vec<usize>) -> Result<usize> {
        if self.words.len() >= self.max_size {
            return Err(Error::Budget {
                what: "nucleus candidate set",
                limit: self.max_size,
            });
        }
        let idx = self.words.len();
        let print = Arc::new(print);
        self.buckets.entry(print.to_vec()).or_default().push(idx);
        self.words.push(word);
        self.prints.push(print);
        Ok(idx)
    }

    fn find_or_insert(&mut self, word: Vec<Sym>) -> Result<(usize, bool)> {
        let word = free_reduce(&word);
        let print = self.fingerprint(&word)?;
        if let Some(i) = self.find_with(&word, &print)? {
            return Ok((i, false));
        }
        Ok((self.insert_new(word, print)?, true))
    }

    /// Fills restriction/output tables for all elements, adding restrictions
    /// until the store is closed.
    fn close(&mut self) -> Result<()> {
        let d = self.pres.degree();
        let mut i = self.restriction.len();
        while i < self.words.len() {
            let mut restr = Vec::with_capacity(d);
            let mut out = Vec::with_capacity(d);
            for x in 0..d {
                let (y, r) = self.pres.act_letter(&self.words[i], x);
                out.push(y);
                restr.push(self.find_or_insert(r)?.0);
            }
            self.restriction.push(restr);
            self.output.push(out);
            i += 1;
        }
        Ok(())
    }

    fn product_print(&self, i: usize, j: usize) -> Vec<usize> {
        let (pi, pj) = (&self.prints[i], &self.prints[j]);
        pi.iter().map(|&k| pj[k]).collect()
    }

    fn product_word(&self, i: usize, j: usize) -> Vec<Sym> {
        let mut w = self.words[i].clone();
        w.extend_from_slice(&self.words[j]);
        free_reduce(&w)
    }
}

/// Nodes of a finite graph having an infinite backward path, i.e. lying on
/// or reachable from a directed cycle. Also returns, for the other nodes,
/// the length of the longest path leading into the recurrent part.
fn recurrent_nodes<F>(n: usize, degree: usize, succ: F) -> (Vec<bool>, Vec<usize>)
where
    F: Fn(usize, usize) -> usize,
{
    let mut indeg = vec![0u32; n];
    for u in 0..n {
        for x in 0..degree {
            indeg[succ(u, x)] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    let mut removed = Vec::new();
    let mut alive = vec![true; n];
    while let Some(u) = queue.pop_front() {
        alive[u] = false;
        removed.push(u);
        for x in 0..degree {
            let v = succ(u, x);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    let mut height = vec![0usize; n];
    for &u in removed.iter().rev() {
        height[u] = (0..degree)
            .map(|x| {
                let v = succ(u, x);
                if alive[v] {
                    1
                } else {
                    height[v] + 1
                }
            })
            .max()
            .unwrap_or(0);
    }
    (alive, height)
}

const MAX_PAIR_NODES: usize = 1 << 24;

/// Runs the nucleus semi-algorithm.
pub fn compute_nucleus(
    pres: Arc<Presentation>,
    budgets: NucleusBudgets,
) -> Result<ContractionReport> {
    let mut store = Store::new(pres.clone(), budgets.word_problem_states, budgets.max_set_size);
    let mut rounds = 0;
    let mut peak = 0;
    let outcome = run_rounds(&mut store, &budgets, &mut rounds, &mut peak);
    peak = peak.max(store.len());
    match outcome {
        Ok(stabilization_depth) => {
            let nucleus = extract_nucleus(&mut store)?;
            let rho = estimate_contraction_coefficient(&pres, 8, 4, 0);
            Ok(ContractionReport {
                status: ContractionStatus::Contracting(nucleus),
                rounds,
                peak_set_size: peak.max(store.len()),
                stabilization_depth: Some(stabilization_depth),
                rho_estimate: Some(rho),
            })
        }
        Err(e) if e.is_budget() => Ok(ContractionReport {
            status: ContractionStatus::BudgetExceeded {
                partial: store
                    .words
                    .iter()
                    .map(|w| GroupWord::new(pres.clone(), w))
                    .collect(),
                reason: e.to_string(),
            },
            rounds,
            peak_set_size: peak,
            stabilization_depth: None,
            rho_estimate: None,
        }),
        Err(e) => Err(e),
    }
}

fn run_rounds(
    store: &mut Store,
    budgets: &NucleusBudgets,
    rounds: &mut usize,
    peak: &mut usize,
) -> Result<usize> {
    let pres = store.pres.clone();
    store.find_or_insert(Vec::new())?;
    for g in 0..pres.num_generators() {
        store.find_or_insert(vec![Sym::new(g, false)])?;
        store.find_or_insert(vec![Sym::new(g, true)])?;
    }
    store.close()?;
    let d = pres.degree();

    loop {
        if *rounds >= budgets.max_rounds {
            return Err(Error::Budget {
                what: "nucleus round",
                limit: budgets.max_rounds,
            });
        }
        *rounds += 1;
        let n = store.len();
        *peak = (*peak).max(n);
        let pairs = n.checked_mul(n).filter(|&p| p <= MAX_PAIR_NODES).ok_or(Error::Budget {
            what: "nucleus pair graph",
            limit: MAX_PAIR_NODES,
        })?;
        let (restr, out) = (&store.restriction, &store.output);
        let succ = |u: usize, x: usize| {
            let (i, j) = (u / n, u % n);
            restr[i][x] * n + restr[j][out[i][x]]
        };
        let (recurrent, height) = recurrent_nodes(pairs, d, succ);
        let transient = height.iter().copied().max().unwrap_or(0);
        if transient > budgets.depth_per_round.max(1) * n.max(1) {
            // Pathologically long transients; the product graph is too deep for this round.
            return Err(Error::Budget {
                what: "nucleus depth per round",
                limit: budgets.depth_per_round,
            });
        }

        let candidates: Vec<usize> = (0..pairs).filter(|&u| recurrent[u]).collect();
        let found = {
            let s = &*store;
            par::map(&candidates, |&u| {
                let (i, j) = (u / n, u % n);
                let word = s.product_word(i, j);
                let print = s.product_print(i, j);
                s.find_with(&word, &print).map(|f| (f.is_some(), word, print))
            })
        };
        let mut missing: Vec<(Vec<Sym>, Vec<usize>)> = Vec::new();
        for r in found {
            let (present, word, print) = r?;
            if !present {
                missing.push((word, print));
            }
        }
        if missing.is_empty() {
            return Ok(transient);
        }
        missing.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        for (word, print) in missing {
            if store.find_with(&word, &print)?.is_none() {
                store.insert_new(word, print)?;
            }
        }
        store.close()?;
    }
}

fn extract_nucleus(store: &mut Store) -> Result<Nucleus> {
    let d = store.pres.degree();
    let (recurrent, _) = {
        let restr = &store.restriction;
        recurrent_nodes(store.len(), d, |u, x| restr[u][x])
    };
    let mut members: BTreeSet<usize> = (0..store.len()).filter(|&i| recurrent[i]).collect();

    // Close under inversion (and restriction of anything inversion adds).
    let mut queue: Vec<usize> = members.iter().copied().collect();
    while let Some(i) = queue.pop() {
        let (inv, _) = store.find_or_insert(invert_word(&store.words[i]))?;
        store.close()?;
        let mut stack = vec![inv];
        while let Some(k) = stack.pop() {
            if members.insert(k) {
                queue.push(k);
                stack.extend(store.restriction[k].iter().copied());
            }
        }
    }

    let order: Vec<usize> = members.into_iter().collect();
    let index: HashMap<usize, usize> = order.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let pres = store.pres.clone();
    let elements: Vec<GroupWord> = order
        .iter()
        .map(|&i| GroupWord::new(pres.clone(), &store.words[i]))
        .collect();
    let restriction: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| store.restriction[i].iter().map(|r| index[r]).collect())
        .collect();
    let output: Vec<Vec<Letter>> = order.iter().map(|&i| store.output[i].clone()).collect();
    let identity = index[&0];

    let mut inverse = Vec::with_capacity(order.len());
    for &i in &order {
        let w = invert_word(&store.words[i]);
        let p = store.fingerprint(&w)?;
        let k = store
            .find_with(&w, &p)?
            .ok_or_else(|| Error::Geometry("nucleus not closed under inversion".into()))?;
        inverse.push(index[&k]);
    }

    let product = par::map_range(order.len(), |a| {
        (0..order.len())
            .map(|b| {
                let (i, j) = (order[a], order[b]);
                let w = store.product_word(i, j);
                let p = store.product_print(i, j);
                store
                    .find_with(&w, &p)
                    .map(|f| f.and_then(|k| index.get(&k).copied()))
            })
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut sym_index = vec![None; 2 * pres.num_generators()];
    for g in 0..pres.num_generators() {
        for inv in [false, true] {
            let s = Sym::new(g, inv);
            let w = vec![s];
            let p = store.fingerprint(&w)?;
            sym_index[s.code()] = store.find_with(&w, &p)?.and_then(|k| index.get(&k).copied());
        }
    }

    Ok(Nucleus {
        pres,
        elements,
        restriction,
        output,
        inverse,
        product,
        sym_index,
        identity,
    })
}

impl Nucleus {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupWord] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    /// Index of `h|x`.
    pub fn restriction(&self, h: usize, x: Letter) -> usize {
        self.restriction[h][x]
    }

    /// `x^h`.
    pub fn output(&self, h: usize, x: Letter) -> Letter {
        self.output[h][x]
    }

    pub fn inverse(&self, h: usize) -> usize {
        self.inverse[h]
    }

    /// Index of the nucleus element equal to `g`, if any.
    pub fn find(&self, g: &GroupWord, budget: usize) -> Result<Option<usize>> {
        for (i, h) in self.elements.iter().enumerate() {
            if h.equal(g, budget)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Moore diagram with `λ(h, x) = x^h` and `π(h, x) = h|x`.
    pub fn moore_diagram(&self) -> MooreAutomaton {
        MooreAutomaton {
            degree: self.pres.degree(),
            labels: self.elements.iter().map(|e| e.to_string()).collect(),
            transition: self.restriction.clone(),
            output: self.output.clone(),
        }
    }

    fn reduce_sequence(&self, seq: &mut Vec<usize>) {
        seq.retain(|&i| i != self.identity);
        let mut changed = true;
        while changed && seq.len() > 1 {
            changed = false;
            let mut out: Vec<usize> = Vec::with_capacity(seq.len());
            for &i in seq.iter() {
                match out.last().and_then(|&last| self.product[last][i]) {
                    Some(k) => {
                        out.pop();
                        changed = true;
                        if k != self.identity {
                            out.push(k);
                        }
                    }
                    None => out.push(i),
                }
            }
            *seq = out;
        }
    }

    /// Identity test for `g` using the nucleus: words in nucleus elements are
    /// multiplied down through the product table, then restricted level by
    /// level. Falls back to plain bisimulation if the sequence search
    /// exceeds `budget` states.
    pub fn wordproblem_contracting(&self, g: &GroupWord, budget: usize) -> Result<bool> {
        if !Arc::ptr_eq(g.presentation(), &self.pres) && **g.presentation() != *self.pres {
            return Err(Error::MixedPresentations);
        }
        match self.sequence_identity(g.syms(), budget) {
            Err(e) if e.is_budget() => g.is_identity(budget),
            other => other,
        }
    }

    fn sequence_identity(&self, word: &[Sym], budget: usize) -> Result<bool> {
        let d = self.pres.degree();
        // Words whose symbols are not all in the nucleus are expanded one level.
        let mut word_seen: HashSet<Vec<Sym>> = HashSet::new();
        let mut word_queue: VecDeque<Vec<Sym>> = VecDeque::new();
        let mut seq_seen: HashSet<Vec<usize>> = HashSet::new();
        let mut seq_queue: VecDeque<Vec<usize>> = VecDeque::new();

        let push_word = |w: Vec<Sym>,
                             word_seen: &mut HashSet<Vec<Sym>>,
                             word_queue: &mut VecDeque<Vec<Sym>>,
                             seq_seen: &mut HashSet<Vec<usize>>,
                             seq_queue: &mut VecDeque<Vec<usize>>| {
            if w.is_empty() {
                return;
            }
            let mapped: Option<Vec<usize>> =
                w.iter().map(|s| self.sym_index[s.code()]).collect();
            match mapped {
                Some(mut seq) => {
                    self.reduce_sequence(&mut seq);
                    if !seq.is_empty() && seq_seen.insert(seq.clone()) {
                        seq_queue.push_back(seq);
                    }
                }
                None => {
                    if word_seen.insert(w.clone()) {
                        word_queue.push_back(w);
                    }
                }
            }
        };

        push_word(
            free_reduce(word),
            &mut word_seen,
            &mut word_queue,
            &mut seq_seen,
            &mut seq_queue,
        );
        while let Some(w) = word_queue.pop_front() {
            for x in 0..d {
                let (y, r) = self.pres.act_letter(&w, x);
                if y != x {
                    return Ok(false);
                }
                push_word(r, &mut word_seen, &mut word_queue, &mut seq_seen, &mut seq_queue);
            }
            if word_seen.len() > budget {
                return Err(Error::Budget {
                    what: "contracting word-problem state",
                    limit: budget,
                });
            }
        }
        while let Some(seq) = seq_queue.pop_front() {
            for x in 0..d {
                let mut letter = x;
                let mut next = Vec::with_capacity(seq.len());
                for &h in &seq {
                    next.push(self.restriction[h][letter]);
                    letter = self.output[h][letter];
                }
                if letter != x {
                    return Ok(false);
                }
                self.reduce_sequence(&mut next);
                if !next.is_empty() && seq_seen.insert(next.clone()) {
                    if seq_seen.len() > budget {
                        return Err(Error::Budget {
                            what: "contracting word-problem state",
                            limit: budget,
                        });
                    }
                    seq_queue.push_back(next);
                }
            }
        }
        Ok(true)
    }
}

/// Length of the random words used by [`estimate_contraction_coefficient`].
pub const ESTIMATOR_WORD_LEN: usize = 256;

/// Empirical, upper-biased estimate of the contraction coefficient.
///
/// For `samples` random freely reduced words `g` of length
/// [`ESTIMATOR_WORD_LEN`], takes the worst-case ratio
/// `r_n = max_{|v|=n} |g|v| / |g|` (maximized over samples too) for
/// `n = 0..=depth`, then fits `ln r_n ≈ a + n ln ρ` by least squares.
/// Returns 0 when restrictions become trivial.
pub fn estimate_contraction_coefficient(
    pres: &Presentation,
    samples: usize,
    depth: usize,
    seed: u64,
) -> f64 {
    let m = pres.num_generators();
    if m == 0 || samples == 0 || depth == 0 {
        return 0.0;
    }
    let len = ESTIMATOR_WORD_LEN;
    let per_sample: Vec<Vec<f64>> = par::map_range(samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let word = random_reduced_word(&mut rng, m, len);
        let norm = word.len().max(1) as f64;
        let mut ratios = vec![1.0];
        let mut states: BTreeSet<Vec<Sym>> = BTreeSet::new();
        states.insert(word);
        for _ in 0..depth {
            let mut next = BTreeSet::new();
            for s in &states {
                for x in 0..pres.degree() {
                    next.insert(pres.act_letter(s, x).1);
                }
            }
            let longest = next.iter().map(|w| w.len()).max().unwrap_or(0);
            ratios.push(longest as f64 / norm);
            states = next;
        }
        ratios
    });
    let ratios: Vec<f64> = (0..=depth)
        .map(|n| per_sample.iter().map(|r| r[n]).fold(0.0, f64::max))
        .collect();
    if ratios[1..].iter().any(|&r| r == 0.0) {
        return 0.0;
    }
    let points: Vec<(f64, f64)> = ratios
        .iter()
        .enumerate()
        .map(|(n, &r)| (n as f64, r.ln()))
        .collect();
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}

pub(crate) fn random_reduced_word<R: Rng>(rng: &mut R, generators: usize, len: usize) -> Vec<Sym> {
    let mut word: Vec<Sym> = Vec::with_capacity(len);
    while word.len() < len {
        let s = Sym::new(rng.gen_range(0..generators), rng.gen_bool(0.5));
        if word.last() == Some(&s.inverse()) {
            continue;
        }
        word.push(s);
    }
    word
}
