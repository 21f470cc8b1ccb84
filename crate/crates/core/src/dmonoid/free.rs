use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::lang::Alphabet;
use crate::variety::VarietyTag;
use crate::{Error, Result};

pub type Word = Vec<usize>;

/// An element of the free D-monoid on the alphabet, in normal form: a single
/// word for SET and POS, a finite language for JSL0, and a finite language
/// read as a Z2-linear combination of words for Z2VECT.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeElement {
    tag: VarietyTag,
    words: BTreeSet<Word>,
}

impl FreeElement {
    pub fn word(tag: VarietyTag, w: Word) -> Result<FreeElement> {
        check_d_side(tag)?;
        Ok(FreeElement { tag, words: BTreeSet::from([w]) })
    }

    /// A finite set of words; only JSL0 and Z2VECT have such elements.
    pub fn words(tag: VarietyTag, words: impl IntoIterator<Item = Word>) -> Result<FreeElement> {
        check_d_side(tag)?;
        let words: BTreeSet<Word> = match tag {
            VarietyTag::Z2Vect => {
                let mut odd = BTreeSet::new();
                for w in words {
                    if !odd.remove(&w) {
                        odd.insert(w);
                    }
                }
                odd
            }
            _ => words.into_iter().collect(),
        };
        if matches!(tag, VarietyTag::Set | VarietyTag::Pos) && words.len() != 1 {
            return Err(Error::invalid(format!("an element of the free {tag} monoid is a single word")));
        }
        Ok(FreeElement { tag, words })
    }

    pub fn parse(tag: VarietyTag, alphabet: &Alphabet, words: &[&str]) -> Result<FreeElement> {
        FreeElement::words(tag, words.iter().map(|w| alphabet.encode(w)).collect::<Result<Vec<_>>>()?)
    }

    pub fn unit(tag: VarietyTag) -> Result<FreeElement> {
        FreeElement::word(tag, Vec::new())
    }

    pub fn tag(&self) -> VarietyTag {
        self.tag
    }

    pub fn support(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn render(&self, alphabet: &Alphabet) -> Vec<String> {
        self.words.iter().map(|w| alphabet.decode(w)).collect()
    }
}

fn check_d_side(tag: VarietyTag) -> Result<()> {
    if tag.is_d_side() {
        Ok(())
    } else {
        Err(Error::tag_mismatch("a D-side variety", tag))
    }
}

fn check(tag: VarietyTag, x: &FreeElement) -> Result<()> {
    if x.tag != tag {
        return Err(Error::tag_mismatch(tag, x.tag));
    }
    Ok(())
}

/// Multiplication in the free D-monoid: concatenation of words, extended
/// bilinearly to finite languages (with Z2 coefficients for Z2VECT).
pub fn free_mult(tag: VarietyTag, x: &FreeElement, y: &FreeElement) -> Result<FreeElement> {
    check(tag, x)?;
    check(tag, y)?;
    let products = x.words.iter().flat_map(|u| y.words.iter().map(move |v| [u.as_slice(), v].concat()));
    FreeElement::words(tag, products)
}

/// Join (JSL0) or sum (Z2VECT) of two free elements.
pub fn free_plus(tag: VarietyTag, x: &FreeElement, y: &FreeElement) -> Result<FreeElement> {
    check(tag, x)?;
    check(tag, y)?;
    if !matches!(tag, VarietyTag::Jsl0 | VarietyTag::Z2Vect) {
        return Err(Error::tag_mismatch("JSL0 or Z2VECT", tag));
    }
    FreeElement::words(tag, x.words.iter().chain(&y.words).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn examples() {
        let s = ab();
        let j = |ws: &[&str]| FreeElement::parse(VarietyTag::Jsl0, &s, ws).unwrap();
        assert_eq!(free_mult(VarietyTag::Jsl0, &j(&["a"]), &j(&["b"])).unwrap(), j(&["ab"]));
        let z = |ws: &[&str]| FreeElement::parse(VarietyTag::Z2Vect, &s, ws).unwrap();
        assert_eq!(free_mult(VarietyTag::Z2Vect, &z(&["", "a"]), &z(&["", "a"])).unwrap(), z(&["", "aa"]));
        let w = FreeElement::parse(VarietyTag::Set, &s, &["abba"]).unwrap();
        assert_eq!(free_mult(VarietyTag::Set, &FreeElement::unit(VarietyTag::Set).unwrap(), &w).unwrap(), w);
    }

    #[test]
    fn tags_are_checked() {
        let x = FreeElement::unit(VarietyTag::Set).unwrap();
        let y = FreeElement::unit(VarietyTag::Pos).unwrap();
        assert!(matches!(free_mult(VarietyTag::Set, &x, &y), Err(Error::TagMismatch { .. })));
        assert!(FreeElement::unit(VarietyTag::Ba).is_err());
        assert!(FreeElement::words(VarietyTag::Set, vec![vec![0], vec![1]]).is_err());
    }
}
