//! The four finite dualities between C-side and D-side varieties:
//! BA/SET (atoms), DL01/POS (join-irreducibles), JSL0 with itself (opposite
//! order) and Z2VECT with itself (dual space).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::variety::{validate_morphism, FinAlgebra, FinMorphism, VarietyTag};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DualityTag {
    #[serde(rename = "BA_SET")]
    BaSet,
    #[serde(rename = "DL01_POS")]
    Dl01Pos,
    #[serde(rename = "JSL_SELF")]
    JslSelf,
    #[serde(rename = "Z2_SELF")]
    Z2Self,
}

impl DualityTag {
    pub const ALL: [DualityTag; 4] = [DualityTag::BaSet, DualityTag::Dl01Pos, DualityTag::JslSelf, DualityTag::Z2Self];

    pub fn c_side(self) -> VarietyTag {
        match self {
            DualityTag::BaSet => VarietyTag::Ba,
            DualityTag::Dl01Pos => VarietyTag::Dl01,
            DualityTag::JslSelf => VarietyTag::Jsl0,
            DualityTag::Z2Self => VarietyTag::Z2Vect,
        }
    }

    pub fn d_side(self) -> VarietyTag {
        match self {
            DualityTag::BaSet => VarietyTag::Set,
            DualityTag::Dl01Pos => VarietyTag::Pos,
            DualityTag::JslSelf => VarietyTag::Jsl0,
            DualityTag::Z2Self => VarietyTag::Z2Vect,
        }
    }

    /// The duality in which `tag` takes part.
    pub fn of(tag: VarietyTag) -> DualityTag {
        match tag {
            VarietyTag::Ba | VarietyTag::Set => DualityTag::BaSet,
            VarietyTag::Dl01 | VarietyTag::Pos => DualityTag::Dl01Pos,
            VarietyTag::Jsl0 => DualityTag::JslSelf,
            VarietyTag::Z2Vect => DualityTag::Z2Self,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DualityTag::BaSet => "BA_SET",
            DualityTag::Dl01Pos => "DL01_POS",
            DualityTag::JslSelf => "JSL_SELF",
            DualityTag::Z2Self => "Z2_SELF",
        }
    }

    fn check(self, tag: VarietyTag) -> Result<()> {
        if tag == self.c_side() || tag == self.d_side() {
            Ok(())
        } else {
            Err(Error::tag_mismatch(self.name(), tag))
        }
    }
}

impl fmt::Display for DualityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts `ba`, `dl`, `jsl`, `z2` and the D-side aliases `set`, `pos`.
impl FromStr for DualityTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<DualityTag> {
        match s.to_ascii_lowercase().as_str() {
            "ba" | "set" | "ba_set" => Ok(DualityTag::BaSet),
            "dl" | "dl01" | "pos" | "dl01_pos" => Ok(DualityTag::Dl01Pos),
            "jsl" | "jsl0" | "jsl_self" => Ok(DualityTag::JslSelf),
            "z2" | "z2vect" | "z2_self" => Ok(DualityTag::Z2Self),
            _ => Err(Error::invalid(format!("unknown variety {s:?}"))),
        }
    }
}

/// A pair of mutually inverse morphisms.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub forward: FinMorphism,
    pub backward: FinMorphism,
}

impl IsoWitness {
    pub fn from_bijection(forward: FinMorphism) -> Result<IsoWitness> {
        let backward = forward.inverse().ok_or_else(|| Error::invalid("map is not a bijection"))?;
        Ok(IsoWitness { forward, backward })
    }

    /// Both maps are valid morphisms and both composites are identities.
    pub fn verify(&self) -> bool {
        let ok = |m: &FinMorphism| validate_morphism(m).unwrap_or(false);
        ok(&self.forward)
            && ok(&self.backward)
            && self.backward.after(&self.forward).is_ok_and(|c| c.is_identity())
            && self.forward.after(&self.backward).is_ok_and(|c| c.is_identity())
    }
}

/// The dual of a finite algebra: atoms of a BA, powerset of a set,
/// join-irreducibles of a DL01, downsets of a poset, the opposite of a
/// JSL0, the dual space of a Z2VECT.
///
/// The element correspondences are:
/// * BA ↔ SET: point `i` is the atom `1 << i`;
/// * DL01 → POS: point `t` is the `t`-th join-irreducible, i.e. `X.generators()[t]`;
/// * POS → DL01: element `x` is the downset `downset(x)` of points;
/// * JSL0: the same indices with the order reversed;
/// * Z2VECT: covector `v` sends `x` to the parity of `v & x`.
pub fn dual_object(d: DualityTag, x: &FinAlgebra) -> Result<FinAlgebra> {
    d.check(x.tag())?;
    match x.tag() {
        VarietyTag::Ba => FinAlgebra::set(x.rank().unwrap()),
        VarietyTag::Set => FinAlgebra::boolean(x.size()),
        VarietyTag::Dl01 => Ok(FinAlgebra::poset_unchecked(x.ji_poset().unwrap().clone())),
        VarietyTag::Pos => {
            FinAlgebra::distributive_from(crate::variety::Poset::from_fn(x.size(), |a, b| x.leq(a, b)))
        }
        VarietyTag::Jsl0 => {
            let meet = x.lattice_meet_table().unwrap();
            Ok(FinAlgebra::semilattice_unchecked(x.size(), |a, b| meet[a][b], x.top().unwrap()))
        }
        VarietyTag::Z2Vect => FinAlgebra::vector_space(x.rank().unwrap()),
    }
}

fn parity(x: usize) -> usize {
    (x.count_ones() & 1) as usize
}

/// The dual of a morphism `h : X → Y`, a morphism `dual(Y) → dual(X)`.
pub fn dual_morphism(d: DualityTag, h: &FinMorphism) -> Result<FinMorphism> {
    let (x, y) = (h.domain(), h.codomain());
    if x.tag() != y.tag() {
        return Err(Error::tag_mismatch(x.tag(), y.tag()));
    }
    d.check(x.tag())?;
    let dx = Arc::new(dual_object(d, x)?);
    let dy = Arc::new(dual_object(d, y)?);
    dual_morphism_between(h, dx, dy)
}

/// [`dual_morphism`] with the dual objects already computed.
pub(crate) fn dual_morphism_between(h: &FinMorphism, dx: Arc<FinAlgebra>, dy: Arc<FinAlgebra>) -> Result<FinMorphism> {
    let (x, y) = (h.domain(), h.codomain());
    let map: Vec<usize> = match x.tag() {
        VarietyTag::Ba => (0..y.rank().unwrap())
            .map(|q| {
                let mut hits = (0..x.rank().unwrap()).filter(|&p| h.apply(1 << p) >> q & 1 == 1);
                match (hits.next(), hits.next()) {
                    (Some(p), None) => Ok(p),
                    _ => Err(Error::NonFunctional(format!("atom {q} lies below no unique image of an atom"))),
                }
            })
            .collect::<Result<_>>()?,
        VarietyTag::Set => {
            dy.elements().map(|s| (0..x.size()).filter(|&p| s >> h.apply(p) & 1 == 1).map(|p| 1 << p).sum()).collect()
        }
        VarietyTag::Dl01 => {
            let (gx, gy) = (x.generators(), y.generators());
            let order = x.ji_poset().unwrap();
            (0..gy.len())
                .map(|q| {
                    let cands: Vec<usize> = (0..gx.len()).filter(|&t| y.leq(gy[q], h.apply(gx[t]))).collect();
                    cands.iter().copied().find(|&c| cands.iter().all(|&o| order.leq(c, o))).ok_or_else(|| {
                        Error::NonFunctional(format!("no least join-irreducible above join-irreducible {q}"))
                    })
                })
                .collect::<Result<_>>()?
        }
        VarietyTag::Pos => dy
            .elements()
            .map(|e| {
                let down = dy.downset(e).unwrap();
                let mut pre = FixedBitSet::with_capacity(x.size());
                pre.extend(x.elements().filter(|&p| down.contains(h.apply(p))));
                dx.downset_index(&pre).ok_or_else(|| Error::NonFunctional("preimage is not a downset".into()))
            })
            .collect::<Result<_>>()?,
        VarietyTag::Jsl0 => {
            // the upper adjoint; h(a) ≤ b iff h(j) ≤ b for every join-irreducible j ≤ a
            let zero = x.zero().unwrap();
            let jis = x.join_irreducibles();
            y.elements()
                .map(|b| jis.iter().filter(|&&j| y.leq(h.apply(j), b)).fold(zero, |acc, &j| x.join(acc, j).unwrap()))
                .collect()
        }
        VarietyTag::Z2Vect => {
            let dim = x.rank().unwrap();
            dy.elements().map(|v| (0..dim).map(|j| parity(v & h.apply(1 << j)) << j).sum()).collect()
        }
    };
    FinMorphism::new(dy, dx, map)
}

/// The isomorphism `X ≅ dual(dual(X))`.
pub fn double_dual(d: DualityTag, x: &FinAlgebra) -> Result<IsoWitness> {
    let dx = dual_object(d, x)?;
    let ddx = Arc::new(dual_object(d, &dx)?);
    let xa = Arc::new(x.clone());
    let map: Vec<usize> = match x.tag() {
        VarietyTag::Dl01 => {
            // x ↦ the set of join-irreducibles below x, read as a downset of dual(X)
            let g = x.generators();
            x.elements()
                .map(|e| {
                    let mut down = FixedBitSet::with_capacity(g.len());
                    down.extend((0..g.len()).filter(|&t| x.leq(g[t], e)));
                    ddx.downset_index(&down).ok_or_else(|| Error::invalid("downset lookup failed"))
                })
                .collect::<Result<_>>()?
        }
        VarietyTag::Pos => {
            // p ↦ the join-irreducible ↓p of the downset lattice
            let dl = &dx;
            let g = dl.generators();
            let points = dl.ji_poset().unwrap();
            x.elements()
                .map(|p| {
                    let e = dl.downset_index(&points.principal_downset(p)).unwrap();
                    g.iter().position(|&t| t == e).ok_or_else(|| Error::invalid("principal downset is not irreducible"))
                })
                .collect::<Result<_>>()?
        }
        _ => x.elements().collect(),
    };
    IsoWitness::from_bijection(FinMorphism::new(xa, ddx, map)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: FinAlgebra) -> Arc<FinAlgebra> {
        Arc::new(a)
    }

    #[test]
    fn object_examples() {
        let s = dual_object(DualityTag::BaSet, &FinAlgebra::boolean(2).unwrap()).unwrap();
        assert_eq!((s.tag(), s.size()), (VarietyTag::Set, 2));
        let chain3 = FinAlgebra::distributive(&[vec![true, true], vec![false, true]]).unwrap();
        let p = dual_object(DualityTag::Dl01Pos, &chain3).unwrap();
        assert_eq!(p.size(), 2);
        assert!(p.leq(0, 1) && !p.leq(1, 0));
        let two = FinAlgebra::chain(2);
        let op = dual_object(DualityTag::JslSelf, &two).unwrap();
        assert_eq!(op.size(), 2);
        assert_eq!(op.zero(), Some(1));
        assert!(dual_object(DualityTag::BaSet, &two).is_err());
    }

    #[test]
    fn join_irreducibles_have_one_lower_cover() {
        let chain3 = FinAlgebra::distributive(&[vec![true, true], vec![false, true]]).unwrap();
        let covers = |x: usize| {
            chain3
                .elements()
                .filter(|&y| y != x && chain3.leq(y, x))
                .filter(|&y| !chain3.elements().any(|z| z != x && z != y && chain3.leq(y, z) && chain3.leq(z, x)))
                .count()
        };
        let by_covers: Vec<usize> = chain3.elements().filter(|&x| x != 0 && covers(x) == 1).collect();
        assert_eq!(by_covers, chain3.generators());
        assert_eq!(by_covers, chain3.join_irreducibles());
    }

    #[test]
    fn morphism_examples() {
        let b = arc(FinAlgebra::boolean(2).unwrap());
        let id = dual_morphism(DualityTag::BaSet, &FinMorphism::identity(b)).unwrap();
        assert!(id.is_identity());

        let v = arc(FinAlgebra::vector_space(2).unwrap());
        // columns: e0 ↦ (1,0), e1 ↦ (1,1) i.e. matrix [[1,1],[0,1]]
        let m = FinMorphism::from_fn(v.clone(), v, |x| (if x & 1 != 0 { 0b01 } else { 0 }) ^ (if x & 2 != 0 { 0b11 } else { 0 })).unwrap();
        let t = dual_morphism(DualityTag::Z2Self, &m).unwrap();
        // transpose [[1,0],[1,1]]: e0 ↦ (1,1), e1 ↦ (0,1)
        assert_eq!(t.apply(0b01), 0b11);
        assert_eq!(t.apply(0b10), 0b10);
    }

    #[test]
    fn preimage_maps_dualize_back() {
        // every g : Y → X with |X|, |Y| ≤ 3
        for nx in 1..=3usize {
            for ny in 1..=3usize {
                let (sx, sy) = (arc(FinAlgebra::set(nx).unwrap()), arc(FinAlgebra::set(ny).unwrap()));
                for code in 0..nx.pow(ny as u32) {
                    let g: Vec<usize> = (0..ny).map(|y| code / nx.pow(y as u32) % nx).collect();
                    let gm = FinMorphism::new(sy.clone(), sx.clone(), g.clone()).unwrap();
                    let pre = dual_morphism(DualityTag::BaSet, &gm).unwrap();
                    assert!(validate_morphism(&pre).unwrap());
                    // atom characterization: q ≤ pre(p) iff g(q) = p
                    for p in 0..nx {
                        for q in 0..ny {
                            assert_eq!(pre.apply(1 << p) >> q & 1 == 1, g[q] == p);
                        }
                    }
                    let back = dual_morphism(DualityTag::BaSet, &pre).unwrap();
                    assert_eq!(back.map(), &g[..]);
                }
            }
        }
    }

    #[test]
    fn double_dual_examples() {
        let w = double_dual(DualityTag::BaSet, &FinAlgebra::boolean(1).unwrap()).unwrap();
        assert!(w.verify());
        assert_eq!(w.forward.codomain().size(), 2);
        let vee = FinAlgebra::poset(&[vec![true, false, true], vec![false, true, true], vec![false, false, true]]).unwrap();
        let w = double_dual(DualityTag::Dl01Pos, &vee).unwrap();
        assert!(w.verify());
        assert!(w.forward.is_order_embedding());
        let w = double_dual(DualityTag::Z2Self, &FinAlgebra::vector_space(3).unwrap()).unwrap();
        assert!(w.verify() && w.forward.is_identity());
    }

    #[test]
    fn semilattice_adjoint() {
        // inclusion of the 2-chain into the 3-chain, 0 ↦ 0, 1 ↦ 2
        let (c2, c3) = (arc(FinAlgebra::chain(2)), arc(FinAlgebra::chain(3)));
        let f = FinMorphism::new(c2, c3, vec![0, 2]).unwrap();
        let g = dual_morphism(DualityTag::JslSelf, &f).unwrap();
        assert_eq!(g.map(), &[0, 0, 1]);
        assert!(validate_morphism(&g).unwrap());
    }

    #[test]
    fn parse_tags() {
        assert_eq!("set".parse::<DualityTag>().unwrap(), DualityTag::BaSet);
        assert_eq!("pos".parse::<DualityTag>().unwrap(), DualityTag::Dl01Pos);
        assert!("xyz".parse::<DualityTag>().is_err());
    }
}
