//! The correspondence between finite sets of regular languages closed under
//! the operations of a C-variety and under left and right derivatives, and
//! finite Σ-generated D-monoids.

use serde::{Deserialize, Serialize};

use crate::automata::{coalgebra_to_dalgebra, dalgebra_to_coalgebra, rqc_closure, CCoalgebra, DAlgebra, Labels};
use crate::dmonoid::{monoid_iso, quotient_leq, transition_monoid_with_orbit, SigmaMonoid};
use crate::duality::{DualityTag, IsoWitness};
use crate::lang::{Alphabet, LanguageId};
use crate::variety::{FinMorphism, VarietyTag};
use crate::{Error, Result};

/// A labelled subcoalgebra of the automaton of regular languages whose
/// languages are closed under right derivatives.
#[derive(Clone, Debug)]
pub struct LocalVarietyPiece {
    coalgebra: CCoalgebra,
}

impl LocalVarietyPiece {
    /// Attaches labels if needed and checks that they are distinct and
    /// closed under right derivatives.
    pub fn new(q: CCoalgebra) -> Result<LocalVarietyPiece> {
        let q = q.labelled();
        let labels = q.labels().unwrap();
        if let Labels::Explicit { languages, index } = labels {
            if index.len() != languages.len() {
                return Err(Error::invalid("two states accept the same language"));
            }
        }
        for g in q.carrier().generators() {
            let l = labels.label(g);
            for a in 0..q.alphabet().len() {
                let r = l.right_quotient(&[a]);
                if labels.lookup(&r).is_none() {
                    let sym = q.alphabet().symbol(a);
                    return Err(Error::NotRqcClosed(format!("the right derivative of {l} by {sym} is {r}")));
                }
            }
        }
        Ok(LocalVarietyPiece { coalgebra: q })
    }

    /// The least piece of variety `tag` containing `gens`.
    pub fn generated(tag: VarietyTag, gens: &[LanguageId]) -> Result<LocalVarietyPiece> {
        LocalVarietyPiece::new(rqc_closure(tag, gens)?)
    }

    pub fn coalgebra(&self) -> &CCoalgebra {
        &self.coalgebra
    }

    pub fn tag(&self) -> VarietyTag {
        self.coalgebra.tag()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.coalgebra.alphabet()
    }

    pub fn size(&self) -> usize {
        self.coalgebra.size()
    }

    pub fn labels(&self) -> &Labels {
        self.coalgebra.labels().unwrap()
    }

    pub fn languages(&self) -> Vec<LanguageId> {
        self.labels().all()
    }

    pub fn contains(&self, l: &LanguageId) -> bool {
        self.labels().lookup(l).is_some()
    }

    /// Whether every language of `self` belongs to `other`. Checked on a
    /// generating set, since `other` is closed under the operations.
    pub fn is_subset(&self, other: &LocalVarietyPiece) -> bool {
        self.generator_languages().iter().all(|l| other.contains(l))
    }

    fn generator_languages(&self) -> Vec<LanguageId> {
        self.coalgebra.carrier().generators().into_iter().map(|g| self.labels().label(g)).collect()
    }
}

fn check(d: DualityTag, tag: VarietyTag, want: VarietyTag) -> Result<()> {
    if tag != want {
        return Err(Error::tag_mismatch(format!("{want} for {d}"), tag));
    }
    Ok(())
}

/// A piece, its monoid, the reachable dual D-algebra of the piece, and the
/// identification of the monoid's carrier with that algebra.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub piece: LocalVarietyPiece,
    pub monoid: SigmaMonoid,
    pub dual: DAlgebra,
    /// `m ↦ m(init)`, from the monoid's carrier to the dual's.
    pub witness: FinMorphism,
}

impl Correspondence {
    /// Whether the witness is a bijective homomorphism taking the unit to
    /// the initial element and `gen(a)∘x` to `α_a(x)`.
    pub fn verify(&self) -> bool {
        let (m, a, w) = (&self.monoid, &self.dual, &self.witness);
        let Ok(iso) = IsoWitness::from_bijection(w.clone()) else { return false };
        iso.verify()
            && w.apply(m.unit()) == a.init()
            && (0..m.alphabet().len())
                .all(|l| m.carrier().elements().all(|x| w.apply(m.mult(m.gen(l), x)) == a.alpha(l).apply(w.apply(x))))
    }
}

/// Builds the monoid of a piece: the transition monoid of its dual,
/// reversed so that words evaluate in reading order.
pub fn correspondence(d: DualityTag, p: &LocalVarietyPiece) -> Result<Correspondence> {
    check(d, p.tag(), d.c_side())?;
    let (dual, _) = coalgebra_to_dalgebra(d, p.coalgebra())?.reachable_part()?;
    let (t, orbit) = transition_monoid_with_orbit(&dual)?;
    let monoid = t.opposite();
    let witness = FinMorphism::new(monoid.carrier().clone(), dual.carrier().clone(), orbit)?;
    Ok(Correspondence { piece: p.clone(), monoid, dual, witness })
}

pub fn piece_to_monoid(d: DualityTag, p: &LocalVarietyPiece) -> Result<SigmaMonoid> {
    correspondence(d, p).map(|c| c.monoid)
}

/// The piece dual to a monoid acting on itself from the left with the unit
/// as initial element.
pub fn monoid_to_piece(d: DualityTag, m: &SigmaMonoid) -> Result<LocalVarietyPiece> {
    check(d, m.tag(), d.d_side())?;
    let q = dalgebra_to_coalgebra(d, &m.left_action()?)?;
    LocalVarietyPiece::new(q)
}

/// The label-preserving isomorphism between `p` and the piece of its monoid.
pub fn roundtrip_check(d: DualityTag, p: &LocalVarietyPiece) -> Result<IsoWitness> {
    let back = monoid_to_piece(d, &piece_to_monoid(d, p)?)?;
    let missing = |from: &LocalVarietyPiece, to: &LocalVarietyPiece, only_in: &str| {
        from.languages().into_iter().find(|l| !to.contains(l)).map(|l| Error::Counterexample {
            language: l.to_string(),
            only_in: only_in.to_string(),
        })
    };
    if let Some(e) = missing(p, &back, "original piece") {
        return Err(e);
    }
    if back.size() != p.size() {
        return Err(missing(&back, p, "round-tripped piece").unwrap_or_else(|| Error::invalid("round trip changed the size")));
    }
    let map = (0..p.size()).map(|q| back.labels().lookup(&p.labels().label(q)).unwrap()).collect();
    let f = FinMorphism::new(p.coalgebra().carrier().clone(), back.coalgebra().carrier().clone(), map)?;
    if !p.coalgebra().is_isomorphism(back.coalgebra(), &f) {
        return Err(Error::invalid("label bijection is not a coalgebra isomorphism"));
    }
    IsoWitness::from_bijection(f)
}

/// The generator-preserving isomorphism between `m` and the monoid of its piece.
pub fn monoid_roundtrip(d: DualityTag, m: &SigmaMonoid) -> Result<Option<FinMorphism>> {
    monoid_iso(m, &piece_to_monoid(d, &monoid_to_piece(d, m)?)?)
}

/// Whether inclusion of pieces agrees with the quotient order of their monoids.
pub fn order_check(d: DualityTag, p1: &LocalVarietyPiece, p2: &LocalVarietyPiece) -> Result<bool> {
    let included = p1.is_subset(p2);
    let leq = quotient_leq(&piece_to_monoid(d, p1)?, &piece_to_monoid(d, p2)?)?;
    Ok(included == leq)
}

/// The least piece containing both.
pub fn piece_join(d: DualityTag, p1: &LocalVarietyPiece, p2: &LocalVarietyPiece) -> Result<LocalVarietyPiece> {
    check(d, p1.tag(), d.c_side())?;
    check(d, p2.tag(), d.c_side())?;
    if p1.alphabet() != p2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut gens = vec![LanguageId::empty(p1.alphabet())];
    gens.extend(p1.generator_languages());
    gens.extend(p2.generator_languages());
    LocalVarietyPiece::generated(p1.tag(), &gens)
}

/// The trivial piece of a C-variety: `{∅, Σ*}` for BA and DL01, `{∅}` for
/// JSL0 and Z2VECT.
pub fn trivial_piece(tag: VarietyTag, alphabet: &Alphabet) -> Result<LocalVarietyPiece> {
    LocalVarietyPiece::generated(tag, &[LanguageId::empty(alphabet)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Roundtrip {
    Ok,
    Counterexample(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceReport {
    pub languages: Vec<String>,
}

/// The JSON summary of one instance of the correspondence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub duality: DualityTag,
    pub piece: PieceReport,
    pub monoid: SigmaMonoid,
    pub roundtrip: Roundtrip,
}

pub fn report(d: DualityTag, p: &LocalVarietyPiece) -> Result<CorrespondenceReport> {
    let c = correspondence(d, p)?;
    let roundtrip = match roundtrip_check(d, p) {
        Ok(w) if w.verify() && c.verify() => Roundtrip::Ok,
        Ok(_) => Roundtrip::Counterexample("witness does not commute".to_string()),
        Err(Error::Counterexample { language, .. }) => Roundtrip::Counterexample(language),
        Err(e) => return Err(e),
    };
    let languages = p.languages().iter().map(ToString::to_string).collect();
    Ok(CorrespondenceReport { duality: d, piece: PieceReport { languages }, monoid: c.monoid, roundtrip })
}
