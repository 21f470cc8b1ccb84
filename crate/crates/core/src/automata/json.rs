use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CCoalgebra, DAlgebra};
use crate::lang::{Alphabet, LanguageId};
use crate::variety::FinAlgebra;

#[derive(Serialize)]
struct CoalgebraOut<'a> {
    #[serde(flatten)]
    carrier: &'a FinAlgebra,
    alphabet: &'a Alphabet,
    gamma: Vec<&'a [usize]>,
    out: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct CoalgebraIn {
    #[serde(flatten)]
    carrier: FinAlgebra,
    alphabet: Alphabet,
    gamma: Vec<Vec<usize>>,
    out: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Serialize for CCoalgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CoalgebraOut {
            carrier: &self.carrier,
            alphabet: &self.alphabet,
            gamma: self.gamma.iter().map(|g| g.map()).collect(),
            out: self.out.map(),
            labels: self.labels.as_ref().map(|l| l.all().iter().map(ToString::to_string).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CCoalgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = CoalgebraIn::deserialize(d)?;
        let labels = j
            .labels
            .map(|ls| ls.iter().map(|t| LanguageId::parse(t, &j.alphabet)).collect::<crate::Result<Vec<_>>>())
            .transpose()
            .map_err(D::Error::custom)?;
        CCoalgebra::new(j.carrier.into_arc(), j.alphabet, j.gamma, j.out, labels).map_err(D::Error::custom)
    }
}

#[derive(Serialize)]
struct AlgebraOut<'a> {
    #[serde(flatten)]
    carrier: &'a FinAlgebra,
    alphabet: &'a Alphabet,
    alpha: Vec<&'a [usize]>,
    init: usize,
}

#[derive(Deserialize)]
struct AlgebraIn {
    #[serde(flatten)]
    carrier: FinAlgebra,
    alphabet: Alphabet,
    alpha: Vec<Vec<usize>>,
    init: usize,
}

impl Serialize for DAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraOut {
            carrier: &self.carrier,
            alphabet: &self.alphabet,
            alpha: self.alpha.iter().map(|m| m.map()).collect(),
            init: self.init,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = AlgebraIn::deserialize(d)?;
        DAlgebra::new(j.carrier.into_arc(), j.alphabet, j.alpha, j.init).map_err(D::Error::custom)
    }
}
