use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FinAlgebra, Kind};

#[derive(Serialize, Deserialize)]
#[serde(tag = "tag")]
enum AlgebraJson {
    #[serde(rename = "BA")]
    Ba { atoms: usize },
    #[serde(rename = "DL01")]
    Dl01 { ji_order: Vec<Vec<bool>> },
    #[serde(rename = "JSL0")]
    Jsl0 { size: usize, join: Vec<Vec<usize>>, zero: usize },
    #[serde(rename = "Z2VECT")]
    Z2Vect { dim: usize },
    #[serde(rename = "SET")]
    Set { size: usize },
    #[serde(rename = "POS")]
    Pos { order: Vec<Vec<bool>> },
}

impl Serialize for FinAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let j = match &self.kind {
            Kind::Boolean { atoms } => AlgebraJson::Ba { atoms: *atoms },
            Kind::Distributive(d) => AlgebraJson::Dl01 { ji_order: d.ji.matrix() },
            Kind::Semilattice(sl) => {
                AlgebraJson::Jsl0 { size: sl.n, join: self.join_table().unwrap(), zero: sl.zero }
            }
            Kind::Vector { dim } => AlgebraJson::Z2Vect { dim: *dim },
            Kind::Set { size } => AlgebraJson::Set { size: *size },
            Kind::Poset(p) => AlgebraJson::Pos { order: p.matrix() },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = match AlgebraJson::deserialize(d)? {
            AlgebraJson::Ba { atoms } => FinAlgebra::boolean(atoms),
            AlgebraJson::Dl01 { ji_order } => FinAlgebra::distributive(&ji_order),
            AlgebraJson::Jsl0 { size, join, zero } => {
                if size != join.len() {
                    return Err(D::Error::custom("size does not match the join table"));
                }
                FinAlgebra::semilattice(&join, zero)
            }
            AlgebraJson::Z2Vect { dim } => FinAlgebra::vector_space(dim),
            AlgebraJson::Set { size } => FinAlgebra::set(size),
            AlgebraJson::Pos { order } => FinAlgebra::poset(&order),
        };
        r.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let cases = [
            (FinAlgebra::boolean(2).unwrap(), r#"{"tag":"BA","atoms":2}"#),
            (FinAlgebra::chain(2), r#"{"tag":"JSL0","size":2,"join":[[0,1],[1,1]],"zero":0}"#),
            (FinAlgebra::distributive(&[vec![true]]).unwrap(), r#"{"tag":"DL01","ji_order":[[true]]}"#),
            (FinAlgebra::vector_space(3).unwrap(), r#"{"tag":"Z2VECT","dim":3}"#),
            (FinAlgebra::set(4).unwrap(), r#"{"tag":"SET","size":4}"#),
            (FinAlgebra::poset(&[vec![true, true], vec![false, true]]).unwrap(), r#"{"tag":"POS","order":[[true,true],[false,true]]}"#),
        ];
        for (alg, text) in cases {
            assert_eq!(serde_json::to_string(&alg).unwrap(), text);
            assert_eq!(serde_json::from_str::<FinAlgebra>(text).unwrap(), alg);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(serde_json::from_str::<FinAlgebra>(r#"{"tag":"JSL0","size":2,"join":[[0,1],[0,1]],"zero":0}"#).is_err());
        assert!(serde_json::from_str::<FinAlgebra>(r#"{"tag":"XX","size":2}"#).is_err());
    }
}
