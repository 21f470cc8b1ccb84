mod common;

use std::collections::{BTreeSet, HashMap, HashSet};

use common::{odd_counter, random_free, syntactic_monoid, Glushkov};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regvar::automata::{coalgebra_to_dalgebra, generate_subcoalgebra, DAlgebra};
use regvar::dmonoid::{
    eval_word, free_mult, free_plus, monoid_iso, pseudovariety_member, quotient_leq, subdirect_product,
    transition_monoid, validate_monoid, validate_monoid_exhaustive, FreeElement, SigmaMonoid,
};
use regvar::duality::DualityTag;
use regvar::sample::random_language;
use regvar::{Alphabet, Error, LanguageId, VarietyTag};

const D_TAGS: [VarietyTag; 4] = [VarietyTag::Set, VarietyTag::Pos, VarietyTag::Jsl0, VarietyTag::Z2Vect];

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn set_monoid(re: &str, sigma: &str) -> SigmaMonoid {
    let l = LanguageId::parse(re, &Alphabet::parse(sigma).unwrap()).unwrap();
    transition_monoid(&DAlgebra::from_dfa(l.dfa()).unwrap()).unwrap()
}

/// The reachable dual of a random left-closed piece.
fn random_dalgebra(rng: &mut ChaCha8Rng, d: DualityTag) -> Option<DAlgebra> {
    let s = ab();
    let k = rng.gen_range(1..=2);
    let gens: Vec<LanguageId> = (0..k).map(|_| random_language(rng, &s, 5, 3).1).collect();
    let q = generate_subcoalgebra(d.c_side(), &gens).ok()?;
    let a = coalgebra_to_dalgebra(d, &q).ok()?;
    Some(a.reachable_part().ok()?.0)
}

fn random_monoid(rng: &mut ChaCha8Rng, d: DualityTag) -> SigmaMonoid {
    loop {
        if let Some(m) = random_dalgebra(rng, d).and_then(|a| transition_monoid(&a).ok()) {
            if m.size() <= 64 {
                return m;
            }
        }
    }
}

fn plus(m: &SigmaMonoid, x: usize, y: usize) -> usize {
    match m.tag() {
        VarietyTag::Jsl0 => m.carrier().join(x, y).unwrap(),
        _ => m.carrier().add(x, y).unwrap(),
    }
}

#[test]
fn free_examples() {
    let s = ab();
    let set = |w: &[&str]| FreeElement::parse(VarietyTag::Jsl0, &s, w).unwrap();
    assert_eq!(free_mult(VarietyTag::Jsl0, &set(&["a"]), &set(&["b"])).unwrap(), set(&["ab"]));
    let z = |w: &[&str]| FreeElement::parse(VarietyTag::Z2Vect, &s, w).unwrap();
    let x = z(&["", "a"]);
    assert_eq!(free_mult(VarietyTag::Z2Vect, &x, &x).unwrap(), z(&["", "aa"]));
    assert_eq!(free_plus(VarietyTag::Z2Vect, &x, &x).unwrap(), z(&[]));
    assert_eq!(free_plus(VarietyTag::Jsl0, &set(&["a"]), &set(&["b"])).unwrap(), set(&["a", "b"]));
    let w = FreeElement::parse(VarietyTag::Set, &s, &["ab"]).unwrap();
    let unit = FreeElement::unit(VarietyTag::Set).unwrap();
    assert_eq!(free_mult(VarietyTag::Set, &unit, &w).unwrap(), w);
    assert!(free_mult(VarietyTag::Set, &w, &x).is_err());
    assert!(free_plus(VarietyTag::Set, &w, &w).is_err());
    assert!(FreeElement::parse(VarietyTag::Pos, &s, &["a", "b"]).is_err());
}

#[test]
fn quotient_order_of_cycles() {
    let (m2, m3, m6) = (set_monoid("(aa)*", "a"), set_monoid("(aaa)*", "a"), set_monoid("(aaaaaa)*", "a"));
    assert!(quotient_leq(&m2, &m6).unwrap());
    assert!(!quotient_leq(&m6, &m2).unwrap());
    assert!(!quotient_leq(&m2, &m3).unwrap());
    assert!(monoid_iso(&subdirect_product(&m2, &m3).unwrap(), &m6).unwrap().is_some());
    assert!(pseudovariety_member(&m6, &[m2.clone(), m3.clone()]).unwrap());
    assert!(!pseudovariety_member(&m3, std::slice::from_ref(&m2)).unwrap());
    assert!(pseudovariety_member(&SigmaMonoid::trivial(VarietyTag::Set, m2.alphabet().clone()).unwrap(), &[]).unwrap());
}

#[test]
fn json_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in DualityTag::ALL {
        let m = random_monoid(&mut rng, d);
        let text = serde_json::to_string(&m).unwrap();
        let back: SigmaMonoid = serde_json::from_str(&text).unwrap();
        assert_eq!(back.table(), m.table());
        assert_eq!(back.gens(), m.gens());
        assert_eq!(back.unit(), m.unit());
    }
}

#[test]
fn malformed_json_is_rejected() {
    let bad_unit = r#"{"tag":"SET","carrier":{"tag":"SET","size":2},"unit":5,"mult":[[0,1],[1,0]],"gen":{"a":1}}"#;
    assert!(serde_json::from_str::<SigmaMonoid>(bad_unit).is_err());
    let wrong_tag = r#"{"tag":"POS","carrier":{"tag":"SET","size":2},"unit":0,"mult":[[0,1],[1,0]],"gen":{"a":1}}"#;
    assert!(serde_json::from_str::<SigmaMonoid>(wrong_tag).is_err());
}

/// Rejects the case when a product goes over the carrier cap.
fn within_cap(r: regvar::Result<SigmaMonoid>) -> Result<SigmaMonoid, TestCaseError> {
    match r {
        Err(Error::ResourceExceeded { .. }) => Err(TestCaseError::reject("over the carrier cap")),
        r => Ok(r.unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_monoid_laws(seed in any::<u64>(), t in 0usize..4) {
        let tag = D_TAGS[t];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_free(&mut rng, tag, 2, 4), random_free(&mut rng, tag, 2, 4), random_free(&mut rng, tag, 2, 4));
        let m = |a: &FreeElement, b: &FreeElement| free_mult(tag, a, b).unwrap();
        let unit = FreeElement::unit(tag).unwrap();
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(m(&unit, &x), x.clone());
        prop_assert_eq!(m(&x, &unit), x.clone());
        match tag {
            VarietyTag::Z2Vect => prop_assert_eq!(m(&x, &y).support().clone(), odd_counter(x.support(), y.support())),
            VarietyTag::Jsl0 => {
                let all: BTreeSet<Vec<usize>> =
                    x.support().iter().flat_map(|u| y.support().iter().map(move |v| [u.as_slice(), v].concat())).collect();
                prop_assert_eq!(m(&x, &y).support().clone(), all);
                let xy = free_plus(tag, &x, &y).unwrap();
                prop_assert_eq!(m(&xy, &z), free_plus(tag, &m(&x, &z), &m(&y, &z)).unwrap());
            }
            _ => {}
        }
    }

    #[test]
    fn evaluation_is_a_morphism(seed in any::<u64>(), t in 0usize..4) {
        let d = DualityTag::ALL[t];
        let tag = d.d_side();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, d);
        for _ in 0..8 {
            let (x, y) = (random_free(&mut rng, tag, 2, 3), random_free(&mut rng, tag, 2, 3));
            let (ex, ey) = (eval_word(&m, &x).unwrap(), eval_word(&m, &y).unwrap());
            prop_assert_eq!(eval_word(&m, &free_mult(tag, &x, &y).unwrap()).unwrap(), m.mult(ex, ey));
            if matches!(tag, VarietyTag::Jsl0 | VarietyTag::Z2Vect) {
                prop_assert_eq!(eval_word(&m, &free_plus(tag, &x, &y).unwrap()).unwrap(), plus(&m, ex, ey));
            }
        }
        prop_assert_eq!(eval_word(&m, &FreeElement::unit(tag).unwrap()).unwrap(), m.unit());
        prop_assert!(validate_monoid(&m) && validate_monoid_exhaustive(&m));
    }

    #[test]
    fn transition_monoid_matches_a_naive_closure(seed in any::<u64>(), t in 0usize..4) {
        let d = DualityTag::ALL[t];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(a) = random_dalgebra(&mut rng, d) else { return Ok(()) };
        let Ok(m) = transition_monoid(&a) else { return Ok(()) };
        prop_assume!(m.size() <= 64);
        // full maps of words, then closed under pointwise sums
        let n = a.size();
        let identity: Vec<usize> = (0..n).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), m.unit())]);
        let mut queue = vec![(identity, Vec::<usize>::new())];
        let mut i = 0;
        while i < queue.len() {
            let (f, w) = queue[i].clone();
            for l in 0..2 {
                let g: Vec<usize> = f.iter().map(|&x| a.alpha(l).apply(x)).collect();
                let mut wl = w.clone();
                wl.push(l);
                match index.get(&g) {
                    Some(&e) => prop_assert_eq!(e, m.eval_indices(&wl)),
                    None => {
                        index.insert(g.clone(), m.eval_indices(&wl));
                        queue.push((g, wl));
                    }
                }
            }
            i += 1;
        }
        let mut all: HashSet<Vec<usize>> = index.keys().cloned().collect();
        if matches!(a.tag(), VarietyTag::Jsl0 | VarietyTag::Z2Vect) {
            let c = a.carrier();
            let sum = |x: usize, y: usize| if a.tag() == VarietyTag::Jsl0 { c.join(x, y).unwrap() } else { c.add(x, y).unwrap() };
            all.insert(vec![c.zero().unwrap(); n]);
            loop {
                let current: Vec<Vec<usize>> = all.iter().cloned().collect();
                let before = all.len();
                for f in &current {
                    for g in &current {
                        all.insert(f.iter().zip(g).map(|(&x, &y)| sum(x, y)).collect());
                    }
                }
                if all.len() == before {
                    break;
                }
            }
        }
        prop_assert_eq!(all.len(), m.size());
        let values: HashSet<usize> = index.values().copied().collect();
        prop_assert_eq!(values.len(), index.len());
    }

    #[test]
    fn quotient_order_and_joins(seed in any::<u64>(), t in 0usize..4) {
        let d = DualityTag::ALL[t];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m1, m2, m3) = (random_monoid(&mut rng, d), random_monoid(&mut rng, d), random_monoid(&mut rng, d));
        prop_assert!(quotient_leq(&m1, &m1).unwrap());
        let s = within_cap(subdirect_product(&m1, &m2))?;
        prop_assert!(validate_monoid(&s));
        prop_assert!(quotient_leq(&m1, &s).unwrap() && quotient_leq(&m2, &s).unwrap());
        let u = within_cap(subdirect_product(&s, &m3))?;
        prop_assert!(quotient_leq(&s, &u).unwrap());
        // transitivity through the upper bound
        prop_assert!(quotient_leq(&m1, &u).unwrap());
        // least: s is below any common upper bound, here the product taken the other way round
        let v = subdirect_product(&m2, &m1).unwrap();
        prop_assert!(quotient_leq(&s, &v).unwrap() && quotient_leq(&v, &s).unwrap());
        prop_assert!(monoid_iso(&s, &v).unwrap().is_some());
        if quotient_leq(&m1, &m2).unwrap() && quotient_leq(&m2, &m1).unwrap() {
            prop_assert!(monoid_iso(&m1, &m2).unwrap().is_some());
        }
    }

    #[test]
    fn set_transition_monoid_is_syntactic(seed in any::<u64>()) {
        let s = ab();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (re, l) = random_language(&mut rng, &s, 8, 6);
        let m = transition_monoid(&DAlgebra::from_dfa(l.dfa()).unwrap()).unwrap();
        let brute = syntactic_monoid(&Glushkov::new(&re, &s), 2);
        prop_assert_eq!(brute.reps.len(), m.size());
        let f: Vec<usize> = brute.reps.iter().map(|w| m.eval_indices(w)).collect();
        prop_assert_eq!(f.iter().collect::<HashSet<_>>().len(), m.size());
        for i in 0..f.len() {
            for j in 0..f.len() {
                prop_assert_eq!(f[brute.mult[i][j]], m.mult(f[i], f[j]));
            }
        }
    }
}
