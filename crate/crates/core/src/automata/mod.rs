//! Automata over finite algebras: coalgebras `(Q, γ_a, out)` on the C-side
//! and algebras `(A, α_a, init)` on the D-side, their shifts, and the finite
//! duality between them. Finite subcoalgebras of the automaton of all regular
//! languages are built in [`generate_subcoalgebra`] and [`rqc_closure`].

mod basis;
mod json;

use std::collections::HashMap;
use std::sync::Arc;

use crate::duality::{dual_morphism_between, dual_object, DualityTag};
use crate::lang::{Alphabet, Dfa, LanguageId};
use crate::variety::{generate_subalgebra, validate_morphism, FinAlgebra, FinMorphism, VarietyTag};
use crate::{Error, Result};

pub use basis::{generate_subcoalgebra, is_rqc_closed, rqc_closure};
pub(crate) use basis::AtomBasis;

/// The language of every state of a subcoalgebra of the automaton of
/// regular languages.
#[derive(Clone, Debug)]
pub enum Labels {
    /// One language per state.
    Explicit { languages: Vec<LanguageId>, index: HashMap<LanguageId, usize> },
    /// State `q` denotes the union of the atoms in `masks[q]`.
    Atoms(Arc<AtomBasis>, Arc<basis::MaskIndex>),
}

impl Labels {
    pub fn explicit(languages: Vec<LanguageId>) -> Labels {
        let index = languages.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Labels::Explicit { languages, index }
    }

    pub fn len(&self) -> usize {
        match self {
            Labels::Explicit { languages, .. } => languages.len(),
            Labels::Atoms(_, m) => m.masks.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, q: usize) -> LanguageId {
        match self {
            Labels::Explicit { languages, .. } => languages[q].clone(),
            Labels::Atoms(b, m) => b.language(&m.masks[q]),
        }
    }

    pub fn all(&self) -> Vec<LanguageId> {
        (0..self.len()).map(|q| self.label(q)).collect()
    }

    /// The state labelled `l`, if any.
    pub fn lookup(&self, l: &LanguageId) -> Option<usize> {
        match self {
            Labels::Explicit { index, .. } => index.get(l).copied(),
            Labels::Atoms(b, m) => {
                let mask = b.mask_of(l)?;
                m.index.get(&mask).copied()
            }
        }
    }
}

/// A deterministic automaton whose state set is a finite C-algebra and whose
/// transitions and output are homomorphisms.
#[derive(Clone, Debug)]
pub struct CCoalgebra {
    carrier: Arc<FinAlgebra>,
    alphabet: Alphabet,
    gamma: Vec<FinMorphism>,
    out: FinMorphism,
    labels: Option<Labels>,
}

fn run(gamma: &[FinMorphism], q: usize, w: &[usize]) -> usize {
    w.iter().fold(q, |q, &a| gamma[a].apply(q))
}

impl CCoalgebra {
    /// Checks that the maps are homomorphisms of the carrier's variety and,
    /// when labels are given, that they are consistent with the transitions
    /// and output.
    pub fn new(
        carrier: Arc<FinAlgebra>,
        alphabet: Alphabet,
        gamma: Vec<Vec<usize>>,
        out: Vec<usize>,
        labels: Option<Vec<LanguageId>>,
    ) -> Result<CCoalgebra> {
        let tag = carrier.tag();
        if !tag.is_c_side() {
            return Err(Error::tag_mismatch("a C-side variety", tag));
        }
        if gamma.len() != alphabet.len() {
            return Err(Error::invalid("one transition map per letter is required"));
        }
        let two = Arc::new(FinAlgebra::two_object(tag)?);
        let gamma = gamma
            .into_iter()
            .map(|g| FinMorphism::new(carrier.clone(), carrier.clone(), g))
            .collect::<Result<Vec<_>>>()?;
        let out = FinMorphism::new(carrier.clone(), two, out)?;
        for m in gamma.iter().chain([&out]) {
            if !validate_morphism(m)? {
                return Err(Error::invalid("transition or output map is not a homomorphism"));
            }
        }
        let q = CCoalgebra { carrier, alphabet, gamma, out, labels: None };
        match labels {
            None => Ok(q),
            Some(ls) => q.with_labels(ls),
        }
    }

    pub(crate) fn from_parts(
        carrier: Arc<FinAlgebra>,
        alphabet: Alphabet,
        gamma: Vec<FinMorphism>,
        out: FinMorphism,
        labels: Option<Labels>,
    ) -> CCoalgebra {
        CCoalgebra { carrier, alphabet, gamma, out, labels }
    }

    /// Attaches labels after checking them against the automaton.
    pub fn with_labels(mut self, labels: Vec<LanguageId>) -> Result<CCoalgebra> {
        if labels.len() != self.carrier.size() {
            return Err(Error::invalid("one label per state is required"));
        }
        if labels.iter().any(|l| l.alphabet() != &self.alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        let actual = self.state_languages();
        if let Some(q) = (0..labels.len()).find(|&q| labels[q] != actual[q]) {
            return Err(Error::invalid(format!("state {q} is labelled with a language it does not accept")));
        }
        self.labels = Some(Labels::explicit(labels));
        Ok(self)
    }

    pub fn tag(&self) -> VarietyTag {
        self.carrier.tag()
    }

    pub fn carrier(&self) -> &Arc<FinAlgebra> {
        &self.carrier
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn gamma(&self, a: usize) -> &FinMorphism {
        &self.gamma[a]
    }

    pub fn out(&self) -> &FinMorphism {
        &self.out
    }

    pub fn accepting(&self, q: usize) -> bool {
        self.out.apply(q) != 0
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// `γ_w(q)`, reading `w` from left to right.
    pub fn run(&self, q: usize, w: &[usize]) -> usize {
        run(&self.gamma, q, w)
    }

    /// `Q_w`: the same automaton with output `out ∘ γ_w`. Labels are dropped.
    pub fn shift(&self, w: &[usize]) -> CCoalgebra {
        let out = FinMorphism::from_fn(self.carrier.clone(), self.out.codomain().clone(), |q| self.out.apply(self.run(q, w)))
            .expect("shifted output stays in range");
        CCoalgebra { out, labels: None, ..self.clone() }
    }

    /// The same coalgebra with its state languages attached as labels.
    pub fn labelled(mut self) -> CCoalgebra {
        if self.labels.is_none() {
            self.labels = Some(Labels::explicit(self.state_languages()));
        }
        self
    }

    /// The automaton on the carrier as a plain DFA started in `q`.
    pub fn dfa_from(&self, q: usize) -> Dfa {
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(self.size() * k);
        for s in self.carrier.elements() {
            delta.extend(self.gamma.iter().map(|g| g.apply(s)));
        }
        let finals = self.carrier.elements().map(|s| self.accepting(s)).collect();
        Dfa::from_flat(self.alphabet.clone(), q, finals, delta)
    }

    /// `{w : out(γ_w(q)) = 1}`.
    pub fn state_language(&self, q: usize) -> LanguageId {
        self.dfa_from(q).minimize()
    }

    pub fn state_languages(&self) -> Vec<LanguageId> {
        self.dfa_from(0).state_languages()
    }

    /// The labels of every state, computing them when absent.
    pub fn languages(&self) -> Vec<LanguageId> {
        match &self.labels {
            Some(l) => l.all(),
            None => self.state_languages(),
        }
    }

    /// Labels, computed from the state languages if none are attached.
    pub fn labels_or_compute(&self) -> Labels {
        self.labels.clone().unwrap_or_else(|| Labels::explicit(self.state_languages()))
    }

    pub fn validate(&self) -> Result<bool> {
        for m in self.gamma.iter().chain([&self.out]) {
            if !validate_morphism(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a bijection `f` from this carrier to `other`'s is an
    /// isomorphism of coalgebras: a homomorphism in both directions
    /// commuting with transitions and output.
    pub fn is_isomorphism(&self, other: &CCoalgebra, f: &FinMorphism) -> bool {
        let Some(inv) = f.inverse() else { return false };
        validate_morphism(f).unwrap_or(false)
            && validate_morphism(&inv).unwrap_or(false)
            && self.alphabet == other.alphabet
            && self.carrier.elements().all(|q| {
                self.out.apply(q) == other.out.apply(f.apply(q))
                    && (0..self.alphabet.len()).all(|a| f.apply(self.gamma[a].apply(q)) == other.gamma[a].apply(f.apply(q)))
            })
    }
}

/// A deterministic automaton with initial element whose state set is a finite
/// D-algebra and whose transitions are homomorphisms.
#[derive(Clone, Debug)]
pub struct DAlgebra {
    carrier: Arc<FinAlgebra>,
    alphabet: Alphabet,
    alpha: Vec<FinMorphism>,
    init: usize,
}

impl DAlgebra {
    pub fn new(carrier: Arc<FinAlgebra>, alphabet: Alphabet, alpha: Vec<Vec<usize>>, init: usize) -> Result<DAlgebra> {
        if !carrier.tag().is_d_side() {
            return Err(Error::tag_mismatch("a D-side variety", carrier.tag()));
        }
        if alpha.len() != alphabet.len() {
            return Err(Error::invalid("one transition map per letter is required"));
        }
        if init >= carrier.size() {
            return Err(Error::invalid("initial element out of range"));
        }
        let alpha = alpha
            .into_iter()
            .map(|m| FinMorphism::new(carrier.clone(), carrier.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        for m in &alpha {
            if !validate_morphism(m)? {
                return Err(Error::invalid("transition map is not a homomorphism"));
            }
        }
        Ok(DAlgebra { carrier, alphabet, alpha, init })
    }

    pub fn tag(&self) -> VarietyTag {
        self.carrier.tag()
    }

    pub fn carrier(&self) -> &Arc<FinAlgebra> {
        &self.carrier
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alpha(&self, a: usize) -> &FinMorphism {
        &self.alpha[a]
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// `α_w(x)`, reading `w` from left to right.
    pub fn run(&self, x: usize, w: &[usize]) -> usize {
        run(&self.alpha, x, w)
    }

    /// `A_w`: the same automaton with initial element `α_w(init)`.
    pub fn shift(&self, w: &[usize]) -> DAlgebra {
        DAlgebra { init: self.run(self.init, w), ..self.clone() }
    }

    pub fn validate(&self) -> Result<bool> {
        for m in &self.alpha {
            if !validate_morphism(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The least subalgebra containing `init` and closed under every `α_a`,
    /// as a D-algebra together with its inclusion.
    pub fn reachable_part(&self) -> Result<(DAlgebra, FinMorphism)> {
        let mut gens = vec![self.init];
        loop {
            let (sub, incl) = generate_subalgebra(&self.carrier, &gens)?;
            let members = incl.map();
            let mut inside = vec![false; self.size()];
            for &x in members {
                inside[x] = true;
            }
            let escaped: Vec<usize> = members
                .iter()
                .flat_map(|&x| self.alpha.iter().map(move |m| m.apply(x)))
                .filter(|&y| !inside[y])
                .collect();
            if escaped.is_empty() {
                let mut pos = vec![usize::MAX; self.size()];
                for (i, &x) in members.iter().enumerate() {
                    pos[x] = i;
                }
                let alpha = self
                    .alpha
                    .iter()
                    .map(|m| FinMorphism::from_fn(sub.clone(), sub.clone(), |i| pos[m.apply(members[i])]))
                    .collect::<Result<Vec<_>>>()?;
                let init = pos[self.init];
                return Ok((DAlgebra { carrier: sub, alphabet: self.alphabet.clone(), alpha, init }, incl));
            }
            gens.extend(members.iter().copied());
            gens.extend(escaped);
            gens.sort_unstable();
            gens.dedup();
        }
    }

    pub fn is_reachable(&self) -> Result<bool> {
        Ok(self.reachable_part()?.0.size() == self.size())
    }

    /// The SET automaton of a DFA, with its final states forgotten.
    pub fn from_dfa(dfa: &Dfa) -> Result<DAlgebra> {
        let carrier = Arc::new(FinAlgebra::set(dfa.states())?);
        let alpha = (0..dfa.alphabet().len()).map(|a| (0..dfa.states()).map(|q| dfa.step(q, a)).collect()).collect();
        DAlgebra::new(carrier, dfa.alphabet().clone(), alpha, dfa.initial())
    }
}

pub fn coalg_shift(q: &CCoalgebra, w: &str) -> Result<CCoalgebra> {
    Ok(q.shift(&q.alphabet.encode(w)?))
}

pub fn alg_shift(a: &DAlgebra, w: &str) -> Result<DAlgebra> {
    Ok(a.shift(&a.alphabet.encode(w)?))
}

pub fn state_language(q: &CCoalgebra, state: usize) -> Result<LanguageId> {
    if state >= q.size() {
        return Err(Error::invalid(format!("state {state} out of range")));
    }
    Ok(q.state_language(state))
}

/// The unique non-zero element of the dual of the two-element algebra (the
/// only element for SET and POS).
fn dual_two_generator(dual_two: &FinAlgebra) -> usize {
    dual_two.elements().find(|&x| Some(x) != dual_two.zero()).unwrap_or(0)
}

fn check_duality(d: DualityTag, tag: VarietyTag, want: VarietyTag) -> Result<()> {
    if tag != want {
        return Err(Error::tag_mismatch(format!("{want} for {d}"), tag));
    }
    Ok(())
}

/// The dual D-algebra: carrier and transitions dualized, and the initial
/// element dual to the output map.
pub fn coalgebra_to_dalgebra(d: DualityTag, q: &CCoalgebra) -> Result<DAlgebra> {
    check_duality(d, q.tag(), d.c_side())?;
    let carrier = Arc::new(dual_object(d, &q.carrier)?);
    let alpha = q
        .gamma
        .iter()
        .map(|g| dual_morphism_between(g, carrier.clone(), carrier.clone()))
        .collect::<Result<Vec<_>>>()?;
    let out_dual = dual_morphism_between(&q.out, carrier.clone(), Arc::new(dual_object(d, q.out.codomain())?))?;
    let init = out_dual.apply(dual_two_generator(out_dual.domain()));
    Ok(DAlgebra { carrier, alphabet: q.alphabet.clone(), alpha, init })
}

/// The dual C-coalgebra, with output dual to the initial element. Labels are
/// not computed; see [`CCoalgebra::state_languages`].
pub fn dalgebra_to_coalgebra(d: DualityTag, a: &DAlgebra) -> Result<CCoalgebra> {
    check_duality(d, a.tag(), d.d_side())?;
    let carrier = Arc::new(dual_object(d, &a.carrier)?);
    let gamma = a
        .alpha
        .iter()
        .map(|m| dual_morphism_between(m, carrier.clone(), carrier.clone()))
        .collect::<Result<Vec<_>>>()?;
    let one = Arc::new(FinAlgebra::free_on_one(a.tag())?);
    let generator = FinAlgebra::free_generator(a.tag())?;
    let init_map = FinMorphism::from_fn(one, a.carrier.clone(), |x| if x == generator { a.init } else { a.carrier.zero().unwrap() })?;
    let dual_init = dual_morphism_between(&init_map, Arc::new(dual_object(d, init_map.domain())?), carrier.clone())?;
    // identify dual(free_on_one) with the two-element algebra: the element
    // dual to the generator is the one mapped to 1
    let g = dual_two_generator(dual_init.codomain());
    let two = Arc::new(FinAlgebra::two_object(d.c_side())?);
    let out = FinMorphism::from_fn(carrier.clone(), two, |x| usize::from(dual_init.apply(x) == g))?;
    Ok(CCoalgebra { carrier, alphabet: a.alphabet.clone(), gamma, out, labels: None })
}
