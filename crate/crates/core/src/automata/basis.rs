//! Finite subcoalgebras of the automaton of regular languages.
//!
//! A finite set `S` of languages closed under left derivatives determines a
//! finite partition of `Σ*`: two words are in the same atom when they lie in
//! exactly the same members of `S`. Every language obtained from `S` by the
//! set operations of a C-variety is a union of atoms, so subcoalgebras are
//! represented by bit masks over the atoms, and left derivatives act on masks
//! through a representative word of each atom.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{CCoalgebra, Labels};
use crate::lang::{Alphabet, Dfa, LanguageId};
use crate::variety::{build, FinAlgebra, FinMorphism, Structure, VarietyTag};
use crate::{limits, Error, Result};

#[derive(Debug)]
pub struct AtomBasis {
    alphabet: Alphabet,
    /// product automaton of the members of `S`
    delta: Vec<usize>,
    atom_of: Vec<usize>,
    atoms: usize,
    reps: Vec<Vec<usize>>,
    /// `left[a][b]` is the atom of `a · reps[b]`
    left: Vec<Vec<usize>>,
    /// `types[b]` is the set of members of `S` containing atom `b`
    types: Vec<FixedBitSet>,
}

#[derive(Debug)]
pub struct MaskIndex {
    pub masks: Vec<FixedBitSet>,
    pub index: HashMap<FixedBitSet, usize>,
}

impl AtomBasis {
    fn new(alphabet: &Alphabet, s: &[LanguageId]) -> Result<AtomBasis> {
        let k = alphabet.len();
        let start: Vec<u32> = vec![0; s.len()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut tuples = vec![start];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < tuples.len() {
            for a in 0..k {
                let next: Vec<u32> = tuples[i].iter().zip(s).map(|(&q, l)| l.dfa().step(q as usize, a) as u32).collect();
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        let j = tuples.len();
                        limits::check_states(j + 1)?;
                        index.insert(next.clone(), j);
                        tuples.push(next);
                        parent.push(Some((i, a)));
                        j
                    }
                };
                delta.push(j);
            }
            i += 1;
        }
        let mut type_index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut types = Vec::new();
        let mut reps = Vec::new();
        let mut atom_of = Vec::with_capacity(tuples.len());
        for (t, tuple) in tuples.iter().enumerate() {
            let mut ty = FixedBitSet::with_capacity(s.len());
            ty.extend((0..s.len()).filter(|&m| s[m].dfa().is_final(tuple[m] as usize)));
            let atom = *type_index.entry(ty.clone()).or_insert_with(|| {
                let mut w = Vec::new();
                let mut cur = t;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                reps.push(w);
                types.push(ty);
                types.len() - 1
            });
            atom_of.push(atom);
        }
        let atoms = types.len();
        let left = (0..k)
            .map(|a| (0..atoms).map(|b| atom_of[run_from(&delta, k, delta[a], &reps[b])]).collect())
            .collect();
        Ok(AtomBasis { alphabet: alphabet.clone(), delta, atom_of, atoms, reps, left, types })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// A shortest word in atom `b`.
    pub fn representative(&self, b: usize) -> &[usize] {
        &self.reps[b]
    }

    fn empty(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.atoms)
    }

    fn full(&self) -> FixedBitSet {
        let mut m = self.empty();
        m.insert_range(..);
        m
    }

    /// The mask of the `i`-th member of `S`.
    fn member_mask(&self, i: usize) -> FixedBitSet {
        let mut m = self.empty();
        m.extend((0..self.atoms).filter(|&b| self.types[b].contains(i)));
        m
    }

    fn epsilon_atom(&self) -> usize {
        self.atom_of[0]
    }

    /// `a⁻¹` of the union of the atoms in `mask`.
    fn left_derivative(&self, a: usize, mask: &FixedBitSet) -> FixedBitSet {
        let mut m = self.empty();
        m.extend((0..self.atoms).filter(|&b| mask.contains(self.left[a][b])));
        m
    }

    /// The union of the atoms in `mask`.
    pub fn language(&self, mask: &FixedBitSet) -> LanguageId {
        let finals = self.atom_of.iter().map(|&b| mask.contains(b)).collect();
        Dfa::from_flat(self.alphabet.clone(), 0, finals, self.delta.clone()).minimize()
    }

    /// The mask whose union is `l`, if `l` is a union of atoms.
    pub fn mask_of(&self, l: &LanguageId) -> Option<FixedBitSet> {
        if l.alphabet() != &self.alphabet {
            return None;
        }
        let mut mask = self.empty();
        mask.extend((0..self.atoms).filter(|&b| l.accepts_indices(&self.reps[b])));
        // check that every word's atom membership agrees with l
        let k = self.alphabet.len();
        let mut seen = HashMap::from([((0usize, 0usize), ())]);
        let mut todo = vec![(0usize, 0usize)];
        while let Some((t, q)) = todo.pop() {
            if mask.contains(self.atom_of[t]) != l.dfa().is_final(q) {
                return None;
            }
            for a in 0..k {
                let next = (self.delta[t * k + a], l.dfa().step(q, a));
                if seen.insert(next, ()).is_none() {
                    todo.push(next);
                }
            }
        }
        Some(mask)
    }
}

fn run_from(delta: &[usize], k: usize, q: usize, w: &[usize]) -> usize {
    w.iter().fold(q, |q, &a| delta[q * k + a])
}

fn close(start: Vec<FixedBitSet>, gens: &[FixedBitSet], op: impl Fn(&FixedBitSet, &FixedBitSet) -> FixedBitSet) -> Result<Vec<FixedBitSet>> {
    let mut index: HashMap<FixedBitSet, ()> = HashMap::new();
    let mut list = Vec::new();
    for m in start {
        if index.insert(m.clone(), ()).is_none() {
            list.push(m);
        }
    }
    let mut i = 0;
    while i < list.len() {
        for g in gens {
            let y = op(&list[i], g);
            if !index.contains_key(&y) {
                limits::check_carrier(list.len() + 1)?;
                index.insert(y.clone(), ());
                list.push(y);
            }
        }
        i += 1;
    }
    Ok(list)
}

struct Masks<'a> {
    masks: &'a [FixedBitSet],
    index: &'a HashMap<FixedBitSet, usize>,
}

impl Structure for Masks<'_> {
    fn len(&self) -> usize {
        self.masks.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.masks[a].is_subset(&self.masks[b])
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.index[&(&self.masks[a] | &self.masks[b])]
    }
    fn add(&self, a: usize, b: usize) -> usize {
        self.index[&(&self.masks[a] ^ &self.masks[b])]
    }
    fn zero(&self) -> usize {
        self.index[&FixedBitSet::with_capacity(self.masks[0].len())]
    }
}

fn index_of(masks: &[FixedBitSet]) -> HashMap<FixedBitSet, usize> {
    masks.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// The least set of languages containing the members of `s` (assumed closed
/// under left derivatives) and closed under the operations of `tag`, as a
/// labelled coalgebra.
fn piece(tag: VarietyTag, alphabet: &Alphabet, s: &[LanguageId]) -> Result<CCoalgebra> {
    if !tag.is_c_side() {
        return Err(Error::tag_mismatch("a C-side variety", tag));
    }
    let basis = AtomBasis::new(alphabet, s)?;
    let gens: Vec<FixedBitSet> = (0..s.len()).map(|i| basis.member_mask(i)).collect();
    let m = basis.atoms();
    let (carrier, masks) = match tag {
        VarietyTag::Ba => {
            if m >= usize::BITS as usize - 1 {
                return Err(Error::ResourceExceeded { what: "carrier size", limit: limits::max_carrier() });
            }
            let alg = FinAlgebra::boolean(m)?;
            let masks = alg
                .elements()
                .map(|x| {
                    let mut mask = basis.empty();
                    mask.extend((0..m).filter(|&b| x >> b & 1 == 1));
                    mask
                })
                .collect();
            (alg, masks)
        }
        _ => {
            let masks = match tag {
                VarietyTag::Dl01 => {
                    let meets = close([vec![basis.full()], gens.clone()].concat(), &gens, |x, y| x & y)?;
                    close([vec![basis.empty()], meets.clone()].concat(), &meets, |x, y| x | y)?
                }
                VarietyTag::Jsl0 => close([vec![basis.empty()], gens.clone()].concat(), &gens, |x, y| x | y)?,
                _ => close([vec![basis.empty()], gens.clone()].concat(), &gens, |x, y| x ^ y)?,
            };
            let index = index_of(&masks);
            let (alg, encode) = build(tag, &Masks { masks: &masks, index: &index })?;
            let mut ordered = vec![FixedBitSet::new(); masks.len()];
            for (i, mask) in masks.into_iter().enumerate() {
                ordered[encode[i]] = mask;
            }
            (alg, ordered)
        }
    };
    let index = index_of(&masks);
    let carrier = Arc::new(carrier);
    let gamma = (0..alphabet.len())
        .map(|a| {
            let map = masks.iter().map(|x| index[&basis.left_derivative(a, x)]).collect();
            FinMorphism::new(carrier.clone(), carrier.clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let two = Arc::new(FinAlgebra::two_object(tag)?);
    let (no, yes) = (0, 1);
    let eps = basis.epsilon_atom();
    let out = FinMorphism::new(carrier.clone(), two, masks.iter().map(|x| if x.contains(eps) { yes } else { no }).collect())?;
    let labels = Labels::Atoms(Arc::new(basis), Arc::new(MaskIndex { masks, index }));
    Ok(CCoalgebra::from_parts(carrier, alphabet.clone(), gamma, out, Some(labels)))
}

fn common_alphabet(gens: &[LanguageId]) -> Result<Alphabet> {
    let first = gens.first().ok_or_else(|| Error::invalid("at least one generator is required"))?;
    if gens.iter().any(|g| g.alphabet() != first.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(first.alphabet().clone())
}

fn dedup(ls: impl IntoIterator<Item = LanguageId>) -> Vec<LanguageId> {
    let mut seen = std::collections::HashSet::new();
    ls.into_iter().filter(|l| seen.insert(l.clone())).collect()
}

/// The least subcoalgebra of the automaton of regular languages containing
/// `gens` whose state set is closed under the operations of `tag`.
pub fn generate_subcoalgebra(tag: VarietyTag, gens: &[LanguageId]) -> Result<CCoalgebra> {
    let alphabet = common_alphabet(gens)?;
    piece(tag, &alphabet, &dedup(gens.iter().flat_map(LanguageId::residuals)))
}

/// As [`generate_subcoalgebra`], additionally closed under right derivatives.
pub fn rqc_closure(tag: VarietyTag, gens: &[LanguageId]) -> Result<CCoalgebra> {
    let alphabet = common_alphabet(gens)?;
    piece(tag, &alphabet, &dedup(gens.iter().flat_map(LanguageId::two_sided_residuals)))
}

/// Whether the languages of `q` are closed under right derivatives. Since
/// `L(wa)⁻¹ = (La⁻¹)w⁻¹` and each `−a⁻¹` preserves the operations of every
/// C-variety, it suffices to check single letters on a generating set.
pub fn is_rqc_closed(q: &CCoalgebra) -> Result<bool> {
    let labels = q.labels_or_compute();
    for g in q.carrier().generators() {
        let l = labels.label(g);
        for a in 0..q.alphabet().len() {
            if labels.lookup(&l.right_quotient(&[a])).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn lang(t: &str) -> LanguageId {
        LanguageId::parse(t, &ab()).unwrap()
    }

    fn sorted(q: &CCoalgebra) -> Vec<LanguageId> {
        let mut v = q.languages();
        v.sort();
        v
    }

    fn sorted_of(texts: &[&str]) -> Vec<LanguageId> {
        let mut v: Vec<LanguageId> = texts.iter().map(|t| lang(t)).collect();
        v.sort();
        v
    }

    #[test]
    fn semilattice_closure_of_ab_star() {
        let q = generate_subcoalgebra(VarietyTag::Jsl0, &[lang("(ab)*")]).unwrap();
        assert_eq!(sorted(&q), sorted_of(&["#", "(ab)*", "b(ab)*", "(ab)*|b(ab)*"]));
    }

    #[test]
    fn boolean_closure_of_ab_star() {
        let q = generate_subcoalgebra(VarietyTag::Ba, &[lang("(ab)*")]).unwrap();
        assert_eq!(q.size(), 8);
        assert!(!is_rqc_closed(&q).unwrap());
        let e = generate_subcoalgebra(VarietyTag::Ba, &[lang("#")]).unwrap();
        assert_eq!(sorted(&e), sorted_of(&["#", "(a|b)*"]));
    }

    #[test]
    fn rqc_examples() {
        let q = rqc_closure(VarietyTag::Ba, &[lang("(ab)*")]).unwrap();
        assert!(is_rqc_closed(&q).unwrap());
        let ls = q.languages();
        for t in ["(ab)*", "b(ab)*", "(ab)*a", "#", "(a|b)*"] {
            assert!(ls.contains(&lang(t)), "{t}");
        }
        assert_eq!(sorted(&rqc_closure(VarietyTag::Jsl0, &[lang("#")]).unwrap()), sorted_of(&["#"]));
        assert_eq!(sorted(&rqc_closure(VarietyTag::Z2Vect, &[lang("(a|b)*")]).unwrap()), sorted_of(&["#", "(a|b)*"]));
        assert!(is_rqc_closed(&generate_subcoalgebra(VarietyTag::Ba, &[lang("(a|b)*")]).unwrap()).unwrap());
    }

    #[test]
    fn labels_follow_transitions() {
        for tag in [VarietyTag::Ba, VarietyTag::Dl01, VarietyTag::Jsl0, VarietyTag::Z2Vect] {
            let q = rqc_closure(tag, &[lang("a*b"), lang("(ab)*")]).unwrap();
            assert!(q.validate().unwrap(), "{tag}");
            let labels = q.languages();
            assert_eq!(labels, q.state_languages(), "{tag}");
            for x in q.carrier().elements() {
                assert_eq!(q.accepting(x), labels[x].contains_epsilon());
                for a in 0..2 {
                    assert_eq!(labels[q.gamma(a).apply(x)], labels[x].left_quotient(&[a]));
                }
            }
        }
    }

    #[test]
    fn lookup_rejects_non_members() {
        let q = generate_subcoalgebra(VarietyTag::Jsl0, &[lang("(ab)*")]).unwrap();
        let l = q.labels().unwrap();
        assert!(l.lookup(&lang("(ab)*|b(ab)*")).is_some());
        assert!(l.lookup(&lang("(a|b)*")).is_none());
        assert!(l.lookup(&lang("a")).is_none());
    }
}
