#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use regvar::dmonoid::{FreeElement, Word};
use regvar::{Alphabet, LanguageId, Regex, VarietyTag};

/// Position automaton of an expression, used as a membership oracle that
/// shares no code with the derivative construction.
pub struct Glushkov {
    letter: Vec<usize>,
    first: u64,
    last: u64,
    follow: Vec<u64>,
    nullable: bool,
}

struct Info {
    nullable: bool,
    first: u64,
    last: u64,
}

impl Glushkov {
    pub fn new(re: &Regex, alphabet: &Alphabet) -> Glushkov {
        let mut g = Glushkov { letter: Vec::new(), first: 0, last: 0, follow: Vec::new(), nullable: false };
        let i = g.walk(re, alphabet);
        g.first = i.first;
        g.last = i.last;
        g.nullable = i.nullable;
        g
    }

    fn walk(&mut self, re: &Regex, alphabet: &Alphabet) -> Info {
        match re {
            Regex::Empty => Info { nullable: false, first: 0, last: 0 },
            Regex::Epsilon => Info { nullable: true, first: 0, last: 0 },
            Regex::Literal(c) => {
                let p = self.letter.len();
                assert!(p < 64, "expression too large for the oracle");
                self.letter.push(alphabet.index_of(*c).unwrap());
                self.follow.push(0);
                Info { nullable: false, first: 1 << p, last: 1 << p }
            }
            Regex::Union(l, r) => {
                let (l, r) = (self.walk(l, alphabet), self.walk(r, alphabet));
                Info { nullable: l.nullable || r.nullable, first: l.first | r.first, last: l.last | r.last }
            }
            Regex::Concat(l, r) => {
                let (l, r) = (self.walk(l, alphabet), self.walk(r, alphabet));
                self.link(l.last, r.first);
                Info {
                    nullable: l.nullable && r.nullable,
                    first: if l.nullable { l.first | r.first } else { l.first },
                    last: if r.nullable { l.last | r.last } else { r.last },
                }
            }
            Regex::Star(e) => {
                let e = self.walk(e, alphabet);
                self.link(e.last, e.first);
                Info { nullable: true, ..e }
            }
        }
    }

    fn link(&mut self, from: u64, to: u64) {
        for p in 0..self.letter.len() {
            if from >> p & 1 == 1 {
                self.follow[p] |= to;
            }
        }
    }

    /// `None` is the start state; otherwise the set of positions just read.
    pub fn step(&self, s: Option<u64>, a: usize) -> Option<u64> {
        let next = match s {
            None => self.first,
            Some(set) => (0..self.letter.len()).filter(|&p| set >> p & 1 == 1).fold(0, |acc, p| acc | self.follow[p]),
        };
        let mask = (0..self.letter.len()).filter(|&p| self.letter[p] == a).fold(0, |acc, p| acc | 1 << p);
        Some(next & mask)
    }

    pub fn accepting(&self, s: Option<u64>) -> bool {
        match s {
            None => self.nullable,
            Some(set) => set & self.last != 0,
        }
    }

    pub fn run(&self, w: &[usize]) -> Option<u64> {
        w.iter().fold(None, |s, &a| self.step(s, a))
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        self.accepting(self.run(w))
    }

    /// Reachable subset states with a shortest word reaching each.
    pub fn access_words(&self, k: usize) -> Vec<Vec<usize>> {
        let mut seen: HashMap<Option<u64>, ()> = HashMap::from([(None, ())]);
        let mut words = vec![Vec::new()];
        let mut states = vec![None];
        let mut i = 0;
        while i < words.len() {
            for a in 0..k {
                let t = self.step(states[i], a);
                if seen.insert(t, ()).is_none() {
                    let mut w = words[i].clone();
                    w.push(a);
                    words.push(w);
                    states.push(t);
                }
            }
            i += 1;
        }
        words
    }
}

/// All words of length at most `n` over `k` letters, shortlex.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..n {
        let end = out.len();
        for i in start..end {
            for a in 0..k {
                let mut w = out[i].clone();
                w.push(a);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

/// Number of classes of words of length ≤ `n` under `u ~ v` iff `uz ∈ L ⟺
/// vz ∈ L` for all `|z| ≤ n`.
pub fn nerode_classes(g: &Glushkov, k: usize, n: usize) -> usize {
    let suffixes = words(k, n);
    let sigs: BTreeSet<Vec<bool>> = words(k, n)
        .iter()
        .map(|u| {
            let s = g.run(u);
            suffixes.iter().map(|z| g.accepting(z.iter().fold(s, |s, &a| g.step(s, a)))).collect()
        })
        .collect();
    sigs.len()
}

/// Least `n` such that suffixes of length ≤ `n` separate the reachable
/// states of the position automaton as well as suffixes of length ≤ `n + 1`.
pub fn suffix_bound(g: &Glushkov, k: usize) -> usize {
    let states: Vec<Option<u64>> = g.access_words(k).iter().map(|w| g.run(w)).collect();
    let classes = |n: usize| -> usize {
        let suffixes = words(k, n);
        let sigs: BTreeSet<Vec<bool>> = states
            .iter()
            .map(|&s| suffixes.iter().map(|z| g.accepting(z.iter().fold(s, |s, &a| g.step(s, a)))).collect())
            .collect();
        sigs.len()
    };
    let mut n = 0;
    while classes(n) != classes(n + 1) {
        n += 1;
    }
    n
}

/// The syntactic monoid by brute force: a representative word per class and
/// the multiplication table. Two words are equivalent when no context
/// `(x, y)` separates them, with `x` ranging over access words of the
/// position automaton and `y` over all words up to [`suffix_bound`].
pub struct BruteMonoid {
    pub reps: Vec<Vec<usize>>,
    pub mult: Vec<Vec<usize>>,
}

pub fn syntactic_monoid(g: &Glushkov, k: usize) -> BruteMonoid {
    let left = g.access_words(k);
    let right = words(k, suffix_bound(g, k));
    let sig = |u: &[usize]| -> Vec<bool> {
        left.iter()
            .flat_map(|x| {
                let s = u.iter().fold(g.run(x), |s, &a| g.step(s, a));
                right.iter().map(move |y| g.accepting(y.iter().fold(s, |s, &a| g.step(s, a))))
            })
            .collect()
    };
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    index.insert(sig(&[]), 0);
    reps.push(Vec::new());
    let mut i = 0;
    while i < reps.len() {
        for a in 0..k {
            let mut w = reps[i].clone();
            w.push(a);
            let s = sig(&w);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(s) {
                e.insert(reps.len());
                reps.push(w);
            }
        }
        i += 1;
    }
    let mult = reps.iter().map(|u| reps.iter().map(|v| index[&sig(&[u.as_slice(), v].concat())]).collect()).collect();
    BruteMonoid { reps, mult }
}

/// Direct count: `w` survives iff it has an odd number of splittings `w = uv`
/// with `u ∈ x` and `v ∈ y`.
pub fn odd_counter(x: &BTreeSet<Word>, y: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut candidates = BTreeSet::new();
    for u in x {
        for v in y {
            let mut w = u.clone();
            w.extend(v);
            candidates.insert(w);
        }
    }
    candidates
        .into_iter()
        .filter(|w| {
            let mut count = 0;
            for i in 0..=w.len() {
                if x.contains(&w[..i]) && y.contains(&w[i..]) {
                    count += 1;
                }
            }
            count % 2 == 1
        })
        .collect()
}

/// A random free element with words of length at most `max_len`.
pub fn random_free<R: Rng>(rng: &mut R, tag: VarietyTag, k: usize, max_len: usize) -> FreeElement {
    let word = |rng: &mut R| -> Word { (0..rng.gen_range(0..=max_len)).map(|_| rng.gen_range(0..k)).collect() };
    match tag {
        VarietyTag::Set | VarietyTag::Pos => FreeElement::word(tag, word(rng)).unwrap(),
        _ => {
            let n = rng.gen_range(0..=4);
            FreeElement::words(tag, (0..n).map(|_| word(rng)).collect::<Vec<_>>()).unwrap()
        }
    }
}

/// The least set containing `gens` closed under the operations of `tag`,
/// left derivatives and, when `rqc`, right derivatives, computed as a plain
/// fixpoint over language values.
pub fn naive_closure(tag: VarietyTag, gens: &[LanguageId], rqc: bool) -> BTreeSet<String> {
    let alphabet = gens[0].alphabet().clone();
    let mut set: Vec<LanguageId> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut add = |l: LanguageId, set: &mut Vec<LanguageId>| {
        if seen.insert(l.clone()) {
            set.push(l);
        }
    };
    for g in gens {
        add(g.clone(), &mut set);
    }
    match tag {
        VarietyTag::Ba | VarietyTag::Dl01 => {
            add(LanguageId::empty(&alphabet), &mut set);
            add(LanguageId::full(&alphabet), &mut set);
        }
        _ => add(LanguageId::empty(&alphabet), &mut set),
    }
    let mut i = 0;
    while i < set.len() {
        let l = set[i].clone();
        for a in 0..alphabet.len() {
            add(l.left_quotient(&[a]), &mut set);
            if rqc {
                add(l.right_quotient(&[a]), &mut set);
            }
        }
        if tag == VarietyTag::Ba {
            add(l.complement(), &mut set);
        }
        for j in 0..=i {
            let m = set[j].clone();
            match tag {
                VarietyTag::Ba | VarietyTag::Dl01 => {
                    add(l.union(&m).unwrap(), &mut set);
                    add(l.intersection(&m).unwrap(), &mut set);
                }
                VarietyTag::Jsl0 => add(l.union(&m).unwrap(), &mut set),
                VarietyTag::Z2Vect => add(l.symmetric_difference(&m).unwrap(), &mut set),
                _ => unreachable!(),
            }
        }
        i += 1;
    }
    set.iter().map(key).collect()
}

/// A canonical string for a language.
pub fn key(l: &LanguageId) -> String {
    serde_json::to_string(l).unwrap()
}
