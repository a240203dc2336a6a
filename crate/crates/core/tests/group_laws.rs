use std::sync::Arc;

use proptest::prelude::*;
use selfsim::group::{DEFAULT_STATE_BUDGET, Letter};
use selfsim::{presets, GroupWord, Presentation, Sym};

const PRESETS: &[&str] = &["adding-machine", "z2m1", "z2m2", "dragon", "heisenberg22"];

fn pres(i: usize) -> Arc<Presentation> {
    Arc::new(presets::presentation(PRESETS[i]).unwrap())
}

fn element(p: &Arc<Presentation>, raw: &[(usize, bool)]) -> GroupWord {
    let m = p.num_generators();
    let syms: Vec<Sym> = raw.iter().map(|&(g, inv)| Sym::new(g % m, inv)).collect();
    GroupWord::new(p.clone(), &syms)
}

fn letters(p: &Presentation, raw: &[usize]) -> Vec<Letter> {
    raw.iter().map(|&x| x % p.degree()).collect()
}

fn raw_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..32, any::<bool>()), 0..8)
}

fn raw_letters(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn action_splits_over_concatenation(i in 0..PRESETS.len(), g in raw_word(), v in raw_letters(5), u in raw_letters(5)) {
        let p = pres(i);
        let g = element(&p, &g);
        let (v, u) = (letters(&p, &v), letters(&p, &u));
        let vu: Vec<Letter> = v.iter().chain(&u).copied().collect();
        let mut expected = g.act_word(&v).unwrap();
        expected.extend(g.restrict(&v).unwrap().act_word(&u).unwrap());
        prop_assert_eq!(g.act_word(&vu).unwrap(), expected);
    }

    #[test]
    fn restriction_is_iterated(i in 0..PRESETS.len(), g in raw_word(), v in raw_letters(5), u in raw_letters(5)) {
        let p = pres(i);
        let g = element(&p, &g);
        let (v, u) = (letters(&p, &v), letters(&p, &u));
        let vu: Vec<Letter> = v.iter().chain(&u).copied().collect();
        let (whole, stepwise) = (g.restrict(&vu).unwrap(), g.restrict(&v).unwrap().restrict(&u).unwrap());
        prop_assert_eq!(whole.syms(), stepwise.syms());
    }

    #[test]
    fn restriction_of_product(i in 0..PRESETS.len(), g in raw_word(), h in raw_word(), v in raw_letters(6)) {
        let p = pres(i);
        let (g, h) = (element(&p, &g), element(&p, &h));
        let v = letters(&p, &v);
        let lhs = g.multiply(&h).unwrap().restrict(&v).unwrap();
        let rhs = g.restrict(&v).unwrap().multiply(&h.restrict(&g.act_word(&v).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.equal(&rhs, DEFAULT_STATE_BUDGET).unwrap());
    }

    #[test]
    fn restriction_of_inverse(i in 0..PRESETS.len(), g in raw_word(), v in raw_letters(6)) {
        let p = pres(i);
        let g = element(&p, &g);
        let v = letters(&p, &v);
        let gi = g.invert();
        let lhs = gi.restrict(&v).unwrap();
        let rhs = g.restrict(&gi.act_word(&v).unwrap()).unwrap().invert();
        prop_assert!(lhs.equal(&rhs, DEFAULT_STATE_BUDGET).unwrap());
    }

    #[test]
    fn action_preserves_length_and_parents(i in 0..PRESETS.len(), g in raw_word(), v in raw_letters(8)) {
        let p = pres(i);
        let g = element(&p, &g);
        let v = letters(&p, &v);
        let image = g.act_word(&v).unwrap();
        prop_assert_eq!(image.len(), v.len());
        if !v.is_empty() {
            prop_assert_eq!(g.act_word(&v[..v.len() - 1]).unwrap(), &image[..v.len() - 1]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn level_permutations_compose_on_the_right(i in 0..PRESETS.len(), g in raw_word(), h in raw_word(), n in 0usize..5) {
        let p = pres(i);
        let (g, h) = (element(&p, &g), element(&p, &h));
        let pg = g.permutation_on_level(n).unwrap();
        let ph = h.permutation_on_level(n).unwrap();
        let pgh = g.multiply(&h).unwrap().permutation_on_level(n).unwrap();
        let composed: Vec<usize> = pg.iter().map(|&j| ph[j]).collect();
        prop_assert_eq!(pgh, composed);
    }

    #[test]
    fn equality_is_an_equivalence(i in 0..PRESETS.len(), g in raw_word(), h in raw_word(), k in raw_word()) {
        let p = pres(i);
        let (g, h, k) = (element(&p, &g), element(&p, &h), element(&p, &k));
        let eq = |a: &GroupWord, b: &GroupWord| a.equal(b, DEFAULT_STATE_BUDGET).unwrap();
        prop_assert!(eq(&g, &g));
        prop_assert_eq!(eq(&g, &h), eq(&h, &g));
        if eq(&g, &h) && eq(&h, &k) {
            prop_assert!(eq(&g, &k));
        }
        // g·h·h⁻¹ is always equal to g, so the transitive branch is exercised
        let ghh = g.multiply(&h).unwrap().multiply(&h.invert()).unwrap();
        prop_assert!(eq(&g, &ghh));
        if eq(&g, &h) {
            for n in 0..=6 {
                prop_assert_eq!(g.permutation_on_level(n).unwrap(), h.permutation_on_level(n).unwrap());
            }
        }
    }
}
