use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SigmaMonoid;
use crate::lang::Alphabet;
use crate::variety::{FinAlgebra, VarietyTag};

struct Gens<'a>(&'a SigmaMonoid);

impl Serialize for Gens<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.gen.len()))?;
        for (a, g) in self.0.alphabet.symbols().iter().zip(&self.0.gen) {
            map.serialize_entry(&a.to_string(), g)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Out<'a> {
    tag: VarietyTag,
    alphabet: &'a Alphabet,
    carrier: &'a FinAlgebra,
    unit: usize,
    mult: Vec<Vec<usize>>,
    gen: Gens<'a>,
}

#[derive(Deserialize)]
struct In {
    tag: VarietyTag,
    alphabet: Option<Alphabet>,
    carrier: FinAlgebra,
    unit: usize,
    mult: Vec<Vec<usize>>,
    gen: BTreeMap<String, usize>,
}

impl Serialize for SigmaMonoid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Out {
            tag: self.tag(),
            alphabet: &self.alphabet,
            carrier: &self.carrier,
            unit: self.unit,
            mult: self.table(),
            gen: Gens(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SigmaMonoid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = In::deserialize(d)?;
        if j.tag != j.carrier.tag() {
            return Err(D::Error::custom(format!("tag {} does not match the carrier {}", j.tag, j.carrier.tag())));
        }
        let alphabet = match j.alphabet {
            Some(a) => a,
            None => Alphabet::new(j.gen.keys().flat_map(|k| k.chars())).map_err(D::Error::custom)?,
        };
        let gen = alphabet
            .symbols()
            .iter()
            .map(|a| j.gen.get(&a.to_string()).copied().ok_or_else(|| D::Error::custom(format!("no generator for {a:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if j.gen.len() != gen.len() {
            return Err(D::Error::custom("generator for a symbol outside the alphabet"));
        }
        SigmaMonoid::new(j.carrier.into_arc(), alphabet, j.unit, j.mult, gen).map_err(D::Error::custom)
    }
}
