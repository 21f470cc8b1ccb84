//! Random regular expressions, finite algebras and homomorphisms.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::duality::{dual_morphism, DualityTag};
use crate::lang::{Alphabet, LanguageId, Regex};
use crate::variety::{FinAlgebra, FinMorphism, Poset, VarietyTag};
use crate::Result;

/// A random expression with `leaves` leaves, mostly letters.
pub fn random_regex<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, leaves: usize) -> Regex {
    if leaves <= 1 {
        return match rng.gen_range(0..20) {
            0 => Regex::Epsilon,
            1 => Regex::Empty,
            _ => Regex::Literal(*alphabet.symbols().choose(rng).unwrap()),
        };
    }
    let r = match rng.gen_range(0..5) {
        0 | 1 => {
            let k = rng.gen_range(1..leaves);
            Regex::union(random_regex(rng, alphabet, k), random_regex(rng, alphabet, leaves - k))
        }
        2 | 3 => {
            let k = rng.gen_range(1..leaves);
            Regex::concat(random_regex(rng, alphabet, k), random_regex(rng, alphabet, leaves - k))
        }
        _ => Regex::star(random_regex(rng, alphabet, leaves)),
    };
    if rng.gen_range(0..6) == 0 {
        Regex::star(r)
    } else {
        r
    }
}

/// A random language whose minimal automaton has at most `max_states`
/// states, drawn by rejection from expressions with up to `leaves` leaves.
pub fn random_language<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, leaves: usize, max_states: usize) -> (Regex, LanguageId) {
    loop {
        let n = rng.gen_range(1..=leaves);
        let re = random_regex(rng, alphabet, n);
        if let Ok(l) = LanguageId::compile(&re, alphabet) {
            if l.state_count() <= max_states {
                return (re, l);
            }
        }
    }
}

/// A random poset on `n` points.
fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Poset {
    let p = rng.gen_range(0.1..0.6);
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            lt[i][j] = rng.gen_bool(p);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Poset::from_fn(n, |a, b| a == b || lt[perm[a]][perm[b]])
}

/// A random algebra of `tag` with at most `max_size` elements (at least 1).
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, tag: VarietyTag, max_size: usize) -> Result<FinAlgebra> {
    let log = (usize::BITS - max_size.max(1).leading_zeros() - 1) as usize;
    match tag {
        VarietyTag::Ba => FinAlgebra::boolean(rng.gen_range(0..=log)),
        VarietyTag::Z2Vect => FinAlgebra::vector_space(rng.gen_range(0..=log)),
        VarietyTag::Set => FinAlgebra::set(rng.gen_range(1..=max_size.max(1))),
        VarietyTag::Pos => {
            let n = rng.gen_range(1..=max_size.max(1));
            Ok(FinAlgebra::poset_unchecked(random_poset(rng, n)))
        }
        VarietyTag::Dl01 => loop {
            let n = rng.gen_range(0..=log);
            let p = random_poset(rng, n);
            let alg = FinAlgebra::distributive_from(p)?;
            if alg.size() <= max_size {
                return Ok(alg);
            }
        },
        VarietyTag::Jsl0 => {
            let bits = rng.gen_range(0..=log.min(6));
            let mut family: Vec<u64> = vec![0];
            for _ in 0..rng.gen_range(0..=bits + 2) {
                let s: u64 = rng.gen_range(0..1u64 << bits);
                let joins: Vec<u64> = family.iter().map(|&f| f | s).collect();
                let mut next = family.clone();
                for j in joins {
                    if !next.contains(&j) {
                        next.push(j);
                    }
                }
                if next.len() <= max_size {
                    family = next;
                }
            }
            let pos = |x: u64| family.iter().position(|&f| f == x).unwrap();
            Ok(FinAlgebra::semilattice_unchecked(family.len(), |a, b| pos(family[a] | family[b]), 0))
        }
    }
}

fn random_monotone<R: Rng + ?Sized>(rng: &mut R, a: &FinAlgebra, b: &FinAlgebra) -> Option<Vec<usize>> {
    if b.size() == 0 {
        return (a.size() == 0).then(Vec::new);
    }
    let mut order: Vec<usize> = a.elements().collect();
    order.sort_by_key(|&x| a.elements().filter(|&y| a.leq(y, x)).count());
    'attempt: for _ in 0..20 {
        let mut h = vec![usize::MAX; a.size()];
        for &x in &order {
            let cands: Vec<usize> = b
                .elements()
                .filter(|&y| a.elements().all(|p| p == x || !a.leq(p, x) || h[p] == usize::MAX || b.leq(h[p], y)))
                .collect();
            match cands.choose(rng) {
                Some(&y) => h[x] = y,
                None => continue 'attempt,
            }
        }
        return Some(h);
    }
    Some(vec![rng.gen_range(0..b.size()); a.size()])
}

/// A random homomorphism `a → b`, or `None` when there is none.
pub fn random_morphism<R: Rng + ?Sized>(rng: &mut R, a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> Result<Option<FinMorphism>> {
    if a.tag() != b.tag() {
        return Err(crate::Error::tag_mismatch(a.tag(), b.tag()));
    }
    let map = match a.tag() {
        VarietyTag::Set | VarietyTag::Pos => random_monotone(rng, a, b),
        VarietyTag::Ba => {
            let (m, n) = (a.rank().unwrap(), b.rank().unwrap());
            if m == 0 && n > 0 {
                return Ok(None);
            }
            let points: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let f = FinMorphism::new(FinAlgebra::set(n)?.into_arc(), FinAlgebra::set(m)?.into_arc(), points)?;
            Some(dual_morphism(DualityTag::BaSet, &f)?.map().to_vec())
        }
        VarietyTag::Dl01 => {
            let (ja, jb) = (a.ji_poset().unwrap().clone(), b.ji_poset().unwrap().clone());
            let (pa, pb) = (FinAlgebra::poset_unchecked(ja), FinAlgebra::poset_unchecked(jb));
            match random_monotone(rng, &pb, &pa) {
                None => return Ok(None),
                Some(points) => {
                    let f = FinMorphism::new(pb.into_arc(), pa.into_arc(), points)?;
                    Some(dual_morphism(DualityTag::Dl01Pos, &f)?.map().to_vec())
                }
            }
        }
        VarietyTag::Jsl0 => {
            let zero = b.zero().unwrap();
            let mut h = vec![zero; a.size()];
            for _ in 0..rng.gen_range(0..=3) {
                let (cut, value) = (rng.gen_range(0..a.size()), rng.gen_range(0..b.size()));
                for x in a.elements() {
                    if !a.leq(x, cut) {
                        h[x] = b.join(h[x], value).unwrap();
                    }
                }
            }
            Some(h)
        }
        VarietyTag::Z2Vect => {
            let images: Vec<usize> = (0..a.rank().unwrap()).map(|_| rng.gen_range(0..b.size())).collect();
            Some(a.elements().map(|x| (0..images.len()).filter(|&i| x >> i & 1 == 1).fold(0, |acc, i| acc ^ images[i])).collect())
        }
    };
    map.map(|m| FinMorphism::new(a.clone(), b.clone(), m)).transpose()
}
