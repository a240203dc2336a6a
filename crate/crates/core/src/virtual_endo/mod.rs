//! Self-similar actions defined by a virtual endomorphism `φ`, a right coset
//! transversal `{r_x}` of its domain and conjugators `{h_x}`:
//!
//! `(x w)^g = y w^(h_x^-1 φ(r_x g r_y^-1) h_y)` where `y` is the unique
//! letter with `r_x g r_y^-1 ∈ Dom φ`.

mod heisenberg;
mod intmat;
mod lattes;
mod lattice;

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

pub use heisenberg::{Heisenberg, HeisenbergElem};
pub use intmat::IntMatrix;
pub use lattes::{parse_complex, Lattes, LattesElem};
pub use lattice::{parse_digits, Faithfulness, Lattice};

use crate::error::{Error, Result};
use crate::group::word::level_size;
use crate::group::{Letter, Permutation, Presentation, Sym};

/// A group with exact multiplication and a virtual endomorphism.
///
/// Elements must be in normal form, so that `==` is group equality.
pub trait ConcreteGroup: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn dom_contains(&self, a: &Self::Elem) -> bool;
    /// `φ(a)`, or `None` when `a ∉ Dom φ`.
    fn phi_apply(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn transversal(&self) -> &[Self::Elem];
    /// The letter `y` with `a·r_y⁻¹ ∈ Dom φ`, when it can be read off
    /// directly; `None` falls back to trying every transversal element.
    fn coset_index(&self, _a: &Self::Elem) -> Option<Letter> {
        None
    }
    /// The conjugator `h_x`; `None` stands for the identity.
    fn conjugator(&self, _x: Letter) -> Option<Self::Elem> {
        None
    }
    fn format_elem(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
    fn degree(&self) -> usize {
        self.transversal().len()
    }
}

/// Checks that the transversal elements lie in pairwise distinct cosets and,
/// when the index of `Dom φ` is known, that there are exactly that many.
pub fn validate_transversal<G: ConcreteGroup>(g: &G, index: Option<usize>) -> Result<()> {
    let t = g.transversal();
    if t.len() < 2 {
        return Err(Error::InvalidTransversal(format!(
            "need at least 2 cosets, got {}",
            t.len()
        )));
    }
    if let Some(i) = index {
        if t.len() != i {
            return Err(Error::InvalidTransversal(format!(
                "{} representatives for a subgroup of index {i}",
                t.len()
            )));
        }
    }
    for x in 0..t.len() {
        for y in 0..x {
            let q = g.multiply(&t[x], &g.invert(&t[y]));
            if g.dom_contains(&q) {
                return Err(Error::InvalidTransversal(format!(
                    "{} and {} lie in the same coset",
                    g.format_elem(&t[x]),
                    g.format_elem(&t[y])
                )));
            }
        }
    }
    Ok(())
}

/// One step of the action: `(x^g, g|x)`.
pub fn act_letter<G: ConcreteGroup>(g: &G, elem: &G::Elem, x: Letter) -> Result<(Letter, G::Elem)> {
    let t = g.transversal();
    if x >= t.len() {
        return Err(Error::LetterOutOfRange {
            letter: x,
            size: t.len(),
        });
    }
    let rg = g.multiply(&t[x], elem);
    let (y, image) = match g.coset_index(&rg) {
        Some(y) => {
            let image = g.phi_apply(&g.multiply(&rg, &g.invert(&t[y])));
            (y, image.ok_or_else(|| Error::InvalidTransversal(format!("coset index {y} is wrong for x = {x}")))?)
        }
        None => scan_cosets(g, &rg, x, elem)?,
    };
    let restriction = match (g.conjugator(x), g.conjugator(y)) {
        (None, None) => image,
        (hx, hy) => {
            let left = hx.map_or(image.clone(), |h| g.multiply(&g.invert(&h), &image));
            hy.map_or(left.clone(), |h| g.multiply(&left, &h))
        }
    };
    Ok((y, restriction))
}

fn scan_cosets<G: ConcreteGroup>(g: &G, rg: &G::Elem, x: Letter, elem: &G::Elem) -> Result<(Letter, G::Elem)> {
    let mut found = None;
    for (y, ry) in g.transversal().iter().enumerate() {
        let q = g.multiply(rg, &g.invert(ry));
        if let Some(image) = g.phi_apply(&q) {
            if found.is_some() {
                return Err(Error::InvalidTransversal(format!(
                    "several letters y for x = {x} and g = {}",
                    g.format_elem(elem)
                )));
            }
            found = Some((y, image));
        }
    }
    found.ok_or_else(|| {
        Error::InvalidTransversal(format!(
            "no letter y for x = {x} and g = {}",
            g.format_elem(elem)
        ))
    })
}

/// Image of the word `v` under `elem`.
pub fn act_word<G: ConcreteGroup>(g: &G, elem: &G::Elem, v: &[Letter]) -> Result<Vec<Letter>> {
    let mut state = elem.clone();
    let mut out = Vec::with_capacity(v.len());
    for &x in v {
        let (y, next) = act_letter(g, &state, x)?;
        out.push(y);
        state = next;
    }
    Ok(out)
}

/// Restriction of `elem` at the word `v`.
pub fn restrict<G: ConcreteGroup>(g: &G, elem: &G::Elem, v: &[Letter]) -> Result<G::Elem> {
    let mut state = elem.clone();
    for &x in v {
        state = act_letter(g, &state, x)?.1;
    }
    Ok(state)
}

/// Permutations of levels `0..=n` induced by `elem`, indexed
/// lexicographically.
pub fn level_permutations<G: ConcreteGroup>(g: &G, elem: &G::Elem, n: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    let d = g.degree();
    level_size(d, n, limit)?;
    let mut level: Vec<(usize, G::Elem)> = vec![(0, elem.clone())];
    let mut perms = vec![vec![0]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * d);
        for (image, state) in &level {
            for x in 0..d {
                let (y, r) = act_letter(g, state, x)?;
                next.push((image * d + y, r));
            }
        }
        perms.push(next.iter().map(|(image, _)| *image).collect());
        level = next;
    }
    Ok(perms)
}

/// Permutation of level `n` induced by `elem`.
pub fn level_permutation<G: ConcreteGroup>(g: &G, elem: &G::Elem, n: usize, limit: usize) -> Result<Vec<usize>> {
    Ok(level_permutations(g, elem, n, limit)?.pop().expect("level 0 is always present"))
}

/// Closure of a generating set under restrictions, as a presentation whose
/// generators are the states `s0, s1, …` (the given generators first).
/// Restrictions equal to the identity are written `1`; the identity is a
/// generator only if it was passed in `gens`.
pub fn closure_presentation<G: ConcreteGroup>(
    g: &G,
    gens: &[G::Elem],
    budget: usize,
) -> Result<(Presentation, Vec<G::Elem>)> {
    let d = g.degree();
    let id = g.identity();
    let mut states: Vec<G::Elem> = Vec::new();
    let mut index: HashMap<G::Elem, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut push = |e: G::Elem, states: &mut Vec<G::Elem>, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&e) {
            return Ok(i);
        }
        if states.len() >= budget {
            return Err(Error::Budget {
                what: "closure state",
                limit: budget,
            });
        }
        let i = states.len();
        index.insert(e.clone(), i);
        states.push(e);
        queue.push_back(i);
        Ok(i)
    };
    for e in gens {
        push(e.clone(), &mut states, &mut queue)?;
    }
    let mut perms: HashMap<usize, Vec<Letter>> = HashMap::new();
    let mut restr: HashMap<usize, Vec<usize>> = HashMap::new();
    while let Some(i) = queue.pop_front() {
        let mut images = Vec::with_capacity(d);
        let mut rs = Vec::with_capacity(d);
        for x in 0..d {
            let (y, r) = act_letter(g, &states[i], x)?;
            images.push(y);
            rs.push(push(r, &mut states, &mut queue)?);
        }
        perms.insert(i, images);
        restr.insert(i, rs);
    }

    let keep_identity = gens.contains(&id);
    let kept: Vec<usize> = (0..states.len())
        .filter(|&i| keep_identity || states[i] != id)
        .collect();
    let gen_of: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let names = (0..kept.len()).map(|k| format!("s{k}")).collect();
    let permutations = kept
        .iter()
        .map(|i| Permutation::from_images(perms[i].clone()))
        .collect::<Result<Vec<_>>>()?;
    let restrictions = kept
        .iter()
        .map(|i| {
            restr[i]
                .iter()
                .map(|r| {
                    if states[*r] == id {
                        Vec::new()
                    } else {
                        vec![Sym::new(gen_of[r], false)]
                    }
                })
                .collect()
        })
        .collect();
    let pres = Presentation::new(d, names, permutations, restrictions)?;
    let elems = kept.iter().map(|&i| states[i].clone()).collect();
    Ok((pres, elems))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDepth {
    /// Smallest `n` with `g ∉ Dom φ^n`.
    Leaves(usize),
    /// `g ∈ Dom φ^n_max`.
    Survives,
}

/// Applies `φ` repeatedly while the element stays in the domain. This only
/// probes `g` itself; conjugates are not swept.
pub fn kernel_intersection_depth<G: ConcreteGroup>(g: &G, elem: &G::Elem, n_max: usize) -> KernelDepth {
    let mut e = elem.clone();
    for n in 1..=n_max {
        match g.phi_apply(&e) {
            Some(next) => e = next,
            None => return KernelDepth::Leaves(n),
        }
    }
    KernelDepth::Survives
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_words, GroupWord};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn binary() -> Lattice {
        Lattice::new(IntMatrix::parse("2").unwrap(), vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn adding_machine_from_integers() {
        let g = binary();
        assert_eq!(act_word(&g, &vec![1], &[0, 0]).unwrap(), vec![1, 0]);
        assert_eq!(act_letter(&g, &vec![1], 1).unwrap(), (0, vec![1]));
        for v in all_words(2, 4) {
            assert_eq!(act_word(&g, &vec![0], &v).unwrap(), v);
        }
    }

    #[test]
    fn closure_gives_adding_machine() {
        let g = binary();
        let (p, elems) = closure_presentation(&g, &[vec![1]], 100).unwrap();
        assert_eq!(elems, vec![vec![1]]);
        let expected = Presentation::parse("alphabet = 2\ngens = s0\ns0 : perm = (0 1) ; 0 -> 1 ; 1 -> s0\n").unwrap();
        assert_eq!(p, expected);

        let (p, elems) = closure_presentation(&g, &[vec![0]], 100).unwrap();
        assert_eq!(elems, vec![vec![0]]);
        assert_eq!(p.num_generators(), 1);
        assert!(p.perm(0).is_identity());
        assert!(p.restriction(0, 0).is_empty() && p.restriction(0, 1).is_empty());
    }

    #[test]
    fn closure_budget() {
        let g = binary();
        let err = closure_presentation(&g, &[vec![5]], 2).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn kernel_depths() {
        let g = binary();
        assert_eq!(kernel_intersection_depth(&g, &vec![1], 10), KernelDepth::Leaves(1));
        assert_eq!(kernel_intersection_depth(&g, &vec![8], 10), KernelDepth::Leaves(4));
        assert_eq!(kernel_intersection_depth(&g, &vec![0], 10), KernelDepth::Survives);
        let h = Heisenberg::new(2, 2).unwrap();
        assert_eq!(kernel_intersection_depth(&h, &[0, 0, 4], 10), KernelDepth::Leaves(2));
    }

    #[test]
    fn heisenberg_letter_example() {
        let h = Heisenberg::new(2, 2).unwrap();
        assert_eq!(h.degree(), 16);
        let (y, r) = act_letter(&h, &[1, 0, 0], 0).unwrap();
        assert_eq!(h.transversal()[y], [1, 0, 0]);
        assert_eq!(y, 8);
        assert_eq!(r, h.identity());
    }

    #[test]
    fn duplicate_coset_rejected() {
        let err = Lattice::new(IntMatrix::parse("2").unwrap(), vec![vec![0], vec![2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidTransversal(_)));
    }

    fn check_closure_reproduces<G: ConcreteGroup>(g: &G, gens: &[G::Elem], depth: usize) {
        let (p, elems) = closure_presentation(g, gens, 10_000).unwrap();
        let p = Arc::new(p);
        for (k, e) in elems.iter().enumerate().take(gens.len()) {
            let w = GroupWord::generator(p.clone(), k);
            for v in all_words(g.degree(), depth) {
                assert_eq!(w.act_word(&v).unwrap(), act_word(g, e, &v).unwrap());
            }
        }
    }

    #[test]
    fn closures_reproduce_triple_actions() {
        check_closure_reproduces(&binary(), &[vec![1], vec![3]], 6);
        check_closure_reproduces(&Lattice::dragon(), &[vec![1, 0], vec![0, 1]], 6);
        let h = Heisenberg::new(2, 2).unwrap();
        check_closure_reproduces(&h, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]], 2);
        let l = Lattes::preset_degree2();
        let gens = l.default_generators();
        check_closure_reproduces(&l, &gens, 6);
    }

    fn homomorphism<G: ConcreteGroup>(g: &G, a: &G::Elem, b: &G::Elem, depth: usize) {
        let ab = g.multiply(a, b);
        for v in all_words(g.degree(), depth) {
            let lhs = act_word(g, b, &act_word(g, a, &v).unwrap()).unwrap();
            assert_eq!(lhs, act_word(g, &ab, &v).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn lattice_action_is_an_action(a in -40i64..40, b in -40i64..40, c in -9i64..9, d in -9i64..9) {
            homomorphism(&binary(), &vec![a], &vec![b], 5);
            homomorphism(&Lattice::dragon(), &vec![a, c], &vec![b, d], 5);
        }

        #[test]
        fn heisenberg_action_is_an_action(a in prop::array::uniform3(-6i64..6), b in prop::array::uniform3(-6i64..6)) {
            homomorphism(&Heisenberg::new(2, 2).unwrap(), &a, &b, 2);
        }

        #[test]
        fn lattes_action_is_an_action(k in 0u8..2, l in 0u8..2, w in prop::array::uniform2(-8i64..8), u in prop::array::uniform2(-8i64..8)) {
            let g = Lattes::preset_degree2();
            homomorphism(&g, &(k, w), &(l, u), 5);
        }

        #[test]
        fn level_actions_are_bijective(a in -30i64..30, c in -9i64..9) {
            let g = Lattice::dragon();
            for n in 1..=4 {
                let mut images: Vec<Vec<Letter>> = all_words(2, n)
                    .iter()
                    .map(|v| act_word(&g, &vec![a, c], v).unwrap())
                    .collect();
                images.sort();
                images.dedup();
                prop_assert_eq!(images.len(), 1 << n);
            }
        }

        #[test]
        fn binary_lattice_is_an_odometer(m in -1000i64..1000, v in prop::collection::vec(0usize..2, 0..12)) {
            let n = v.len();
            let value: i64 = v.iter().enumerate().map(|(i, &x)| (x as i64) << i).sum();
            let sum = (value + m).rem_euclid(1 << n.max(1));
            let expected: Vec<usize> = (0..n).map(|i| ((sum >> i) & 1) as usize).collect();
            prop_assert_eq!(act_word(&binary(), &vec![m], &v).unwrap(), expected);
        }

        #[test]
        fn coset_lookup_agrees_with_scan(a in prop::array::uniform3(-50i64..50), v in prop::array::uniform2(-50i64..50)) {
            let h = Heisenberg::new(2, 3).unwrap();
            let expected = scan_cosets(&h, &a, 0, &a).unwrap();
            prop_assert_eq!(Some(expected.0), h.coset_index(&a));
            let l = Lattice::dragon();
            let expected = scan_cosets(&l, &v.to_vec(), 0, &v.to_vec()).unwrap();
            prop_assert_eq!(Some(expected.0), l.coset_index(&v.to_vec()));
        }

        #[test]
        fn level_permutation_matches_words(a in -30i64..30, c in -9i64..9, n in 0usize..6) {
            let g = Lattice::dragon();
            let perm = level_permutation(&g, &vec![a, c], n, 1 << 20).unwrap();
            for (i, v) in all_words(2, n).iter().enumerate() {
                prop_assert_eq!(perm[i], crate::group::lex_index(&act_word(&g, &vec![a, c], v).unwrap(), 2));
            }
        }
    }
}
