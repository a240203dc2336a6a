use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::presentation::{free_reduce, invert_word, push_reduced, Presentation, Sym};
use super::word::{check_letters, level_size, Letter};
use crate::error::{Error, Result};

/// Default cap on the number of states explored by the word problem.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// Default cap on the size of a level array, `d^n`.
pub const DEFAULT_LEVEL_BUDGET: usize = 1 << 24;

/// An element of a self-similar group: a freely reduced word in the
/// generators of a presentation, evaluated lazily through the recursion.
#[derive(Clone)]
pub struct GroupWord {
    pres: Arc<Presentation>,
    syms: Vec<Sym>,
}

impl GroupWord {
    pub fn new(pres: Arc<Presentation>, syms: &[Sym]) -> Self {
        GroupWord {
            syms: free_reduce(syms),
            pres,
        }
    }

    pub fn identity(pres: Arc<Presentation>) -> Self {
        GroupWord {
            pres,
            syms: Vec::new(),
        }
    }

    pub fn generator(pres: Arc<Presentation>, g: usize) -> Self {
        GroupWord {
            pres,
            syms: vec![Sym::new(g, false)],
        }
    }

    pub fn parse(pres: Arc<Presentation>, text: &str) -> Result<Self> {
        let syms = pres.parse_element(text)?;
        Ok(GroupWord { pres, syms })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn syms(&self) -> &[Sym] {
        &self.syms
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    /// True for the empty word. Use [`GroupWord::is_identity`] for the
    /// group-theoretic test.
    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn act_letter(&self, x: Letter) -> Result<(Letter, GroupWord)> {
        check_letters(&[x], self.pres.degree())?;
        let (y, r) = self.pres.act_letter(&self.syms, x);
        Ok((
            y,
            GroupWord {
                pres: self.pres.clone(),
                syms: r,
            },
        ))
    }

    pub fn act_word(&self, v: &[Letter]) -> Result<Vec<Letter>> {
        check_letters(v, self.pres.degree())?;
        Ok(self.pres.act_word(&self.syms, v))
    }

    pub fn restrict(&self, v: &[Letter]) -> Result<GroupWord> {
        check_letters(v, self.pres.degree())?;
        Ok(GroupWord {
            pres: self.pres.clone(),
            syms: self.pres.restrict(&self.syms, v),
        })
    }

    pub fn multiply(&self, other: &GroupWord) -> Result<GroupWord> {
        if !Arc::ptr_eq(&self.pres, &other.pres) && *self.pres != *other.pres {
            return Err(Error::MixedPresentations);
        }
        let mut syms = self.syms.clone();
        for &s in &other.syms {
            push_reduced(&mut syms, s);
        }
        Ok(GroupWord {
            pres: self.pres.clone(),
            syms,
        })
    }

    pub fn invert(&self) -> GroupWord {
        GroupWord {
            pres: self.pres.clone(),
            syms: invert_word(&self.syms),
        }
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut syms = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &s in &base.syms {
                push_reduced(&mut syms, s);
            }
        }
        GroupWord {
            pres: self.pres.clone(),
            syms,
        }
    }

    /// Whether `self` and `other` act identically on all of `X*`.
    pub fn equal(&self, other: &GroupWord, budget: usize) -> Result<bool> {
        let quotient = self.multiply(&other.invert())?;
        is_identity(&self.pres, &quotient.syms, budget)
    }

    pub fn is_identity(&self, budget: usize) -> Result<bool> {
        is_identity(&self.pres, &self.syms, budget)
    }

    /// `p[lex(v)] = lex(v^g)` over `X^n`.
    pub fn permutation_on_level(&self, n: usize) -> Result<Vec<usize>> {
        level_permutation(&self.pres, &self.syms, n, DEFAULT_LEVEL_BUDGET)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pres.format_element(&self.syms))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({self})")
    }
}

/// Bisimulation word problem: explores the restriction states of `word`,
/// failing on the first moved letter. The reachable states are freely
/// reduced words, memoized in a visited set capped by `budget`.
pub fn is_identity(pres: &Presentation, word: &[Sym], budget: usize) -> Result<bool> {
    let start = free_reduce(word);
    if start.is_empty() {
        return Ok(true);
    }
    let mut seen: HashSet<Vec<Sym>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        for x in 0..pres.degree() {
            let (y, r) = pres.act_letter(&state, x);
            if y != x {
                return Ok(false);
            }
            if !r.is_empty() && !seen.contains(&r) {
                if seen.len() >= budget {
                    return Err(Error::Budget {
                        what: "word-problem state",
                        limit: budget,
                    });
                }
                seen.insert(r.clone());
                queue.push_back(r);
            }
        }
    }
    Ok(true)
}

/// Level permutation of a word, memoized over (restriction, depth) pairs.
pub fn level_permutation(
    pres: &Presentation,
    word: &[Sym],
    n: usize,
    limit: usize,
) -> Result<Vec<usize>> {
    let size = level_size(pres.degree(), n, limit)?;
    let mut memo: HashMap<(Vec<Sym>, usize), Arc<Vec<usize>>> = HashMap::new();
    let perm = level_perm_rec(pres, &free_reduce(word), n, &mut memo);
    debug_assert_eq!(perm.len(), size);
    Ok(Arc::try_unwrap(perm).unwrap_or_else(|a| (*a).clone()))
}

fn level_perm_rec(
    pres: &Presentation,
    word: &[Sym],
    n: usize,
    memo: &mut HashMap<(Vec<Sym>, usize), Arc<Vec<usize>>>,
) -> Arc<Vec<usize>> {
    let d = pres.degree();
    let size = d.pow(n as u32);
    if word.is_empty() || n == 0 {
        return Arc::new((0..size).collect());
    }
    let key = (word.to_vec(), n);
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let block = size / d;
    let mut out = vec![0; size];
    for x in 0..d {
        let (y, r) = pres.act_letter(word, x);
        let sub = level_perm_rec(pres, &r, n - 1, memo);
        let src = &mut out[x * block..(x + 1) * block];
        for (slot, &i) in src.iter_mut().zip(sub.iter()) {
            *slot = y * block + i;
        }
    }
    let out = Arc::new(out);
    memo.insert(key, out.clone());
    out
}

/// Level used for fingerprints: the largest `n` with `d^n <= 256`.
pub(crate) fn fingerprint_level(d: usize) -> usize {
    let mut n = 1;
    while d.pow(n as u32 + 1) <= 256 {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn adding() -> Arc<Presentation> {
        Arc::new(presets::presentation("adding-machine").unwrap())
    }

    fn odometer(v: &[usize]) -> Vec<usize> {
        // LSB-first binary +1
        let n = v.len();
        let value: u64 = v.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum();
        let next = (value + 1) % (1u64 << n);
        (0..n).map(|i| ((next >> i) & 1) as usize).collect()
    }

    #[test]
    fn act_letter_examples() {
        let p = adding();
        let tau = GroupWord::generator(p.clone(), 0);
        let (y, r) = tau.act_letter(0).unwrap();
        assert_eq!((y, r.len()), (1, 0));
        let (y, r) = tau.act_letter(1).unwrap();
        assert_eq!((y, r.to_string()), (0, "tau".to_string()));
        let tau2 = tau.multiply(&tau).unwrap();
        let (y, r) = tau2.act_letter(0).unwrap();
        assert_eq!((y, r.to_string()), (0, "tau".to_string()));
    }

    #[test]
    fn act_word_examples() {
        let p = adding();
        let tau = GroupWord::generator(p.clone(), 0);
        assert_eq!(tau.act_word(&[0, 0, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(tau.act_word(&[1, 1, 0]).unwrap(), vec![0, 0, 1]);
        let id = GroupWord::identity(p.clone());
        assert_eq!(id.act_word(&[0, 1, 1, 0]).unwrap(), vec![0, 1, 1, 0]);
        let tau2 = tau.multiply(&tau).unwrap();
        // 1 + 2 = 3: the square of the odometer adds two.
        assert_eq!(tau2.act_word(&[1, 0]).unwrap(), vec![1, 1]);
        assert_eq!(tau.act_word(&[1, 0]).unwrap(), vec![0, 1]);
        for v in crate::group::word::all_words(2, 6) {
            assert_eq!(tau.act_word(&v).unwrap(), odometer(&v));
        }
    }

    #[test]
    fn restrict_examples() {
        let p = adding();
        let tau = GroupWord::generator(p.clone(), 0);
        assert_eq!(tau.restrict(&[1]).unwrap().to_string(), "tau");
        assert!(tau.restrict(&[0]).unwrap().is_empty());
        assert_eq!(tau.restrict(&[]).unwrap().to_string(), "tau");
        let z = Arc::new(presets::presentation("z2m2").unwrap());
        let b = GroupWord::parse(z, "b").unwrap();
        assert_eq!(b.restrict(&[1]).unwrap().to_string(), "a");
    }

    #[test]
    fn free_arithmetic() {
        let z = Arc::new(presets::presentation("z2m2").unwrap());
        let a = GroupWord::parse(z.clone(), "a").unwrap();
        let b = GroupWord::parse(z.clone(), "b").unwrap();
        assert!(a.multiply(&a.invert()).unwrap().is_empty());
        assert_eq!(
            a.multiply(&b).unwrap().invert().to_string(),
            "b^-1 a^-1"
        );
        let other = adding();
        assert_eq!(
            a.multiply(&GroupWord::generator(other, 0)).unwrap_err(),
            Error::MixedPresentations
        );
    }

    #[test]
    fn equality_examples() {
        let z = Arc::new(presets::presentation("z2m2").unwrap());
        let aa = GroupWord::parse(z.clone(), "a a").unwrap();
        let bb = GroupWord::parse(z.clone(), "b b").unwrap();
        assert!(aa.is_identity(DEFAULT_STATE_BUDGET).unwrap());
        assert!(bb.is_identity(DEFAULT_STATE_BUDGET).unwrap());
        let m = Arc::new(presets::presentation("z2m1").unwrap());
        let ab = GroupWord::parse(m.clone(), "a b").unwrap();
        let ba = GroupWord::parse(m.clone(), "b a").unwrap();
        assert!(!ab.equal(&ba, DEFAULT_STATE_BUDGET).unwrap());
        // brute-force witness on levels <= 2
        let witness = (1..=2).any(|n| {
            crate::group::word::all_words(2, n)
                .iter()
                .any(|v| ab.act_word(v).unwrap() != ba.act_word(v).unwrap())
        });
        assert!(witness);
    }

    #[test]
    fn budget_is_an_error_not_an_answer() {
        let comm = GroupWord::parse(
            Arc::new(presets::presentation("z2m1").unwrap()),
            "a^-2 b^-2 a^2 b^2 b^-2 b^-2 a^-2 b^2 a^2 b^2",
        )
        .unwrap();
        assert!(comm.is_identity(DEFAULT_STATE_BUDGET).unwrap());
        assert!(comm.is_identity(1).unwrap_err().is_budget());
    }

    #[test]
    fn level_permutation_examples() {
        let p = adding();
        let tau = GroupWord::generator(p.clone(), 0);
        assert_eq!(tau.permutation_on_level(1).unwrap(), vec![1, 0]);
        // lex indices: 00=0, 01=1, 10=2, 11=3; 00->10->01->11->00
        assert_eq!(tau.permutation_on_level(2).unwrap(), vec![2, 3, 1, 0]);
        let id = GroupWord::identity(p);
        assert_eq!(id.permutation_on_level(3).unwrap(), (0..8).collect::<Vec<_>>());
    }
}
