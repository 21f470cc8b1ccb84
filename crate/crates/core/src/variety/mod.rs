//! Finite algebras of the six locally finite varieties and their morphisms.
//!
//! Every algebra enumerates its carrier as `0..size`, so elements are plain
//! indices and morphisms are index arrays.
//!
//! | tag    | element `i` is                                   |
//! |--------|--------------------------------------------------|
//! | BA     | the set of atoms whose bits are set in `i`       |
//! | DL01   | the `i`-th downset of the join-irreducible poset |
//! | JSL0   | row/column `i` of the join table                 |
//! | Z2VECT | the bit vector `i`                               |
//! | SET    | point `i`                                        |
//! | POS    | point `i`                                        |

mod build;
mod json;
mod morphism;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::{limits, Error, Result};

pub(crate) use build::{build, Structure};
pub use morphism::{generate_subalgebra, image_factorize, product, validate_morphism, FinMorphism, Product};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarietyTag {
    #[serde(rename = "BA")]
    Ba,
    #[serde(rename = "DL01")]
    Dl01,
    #[serde(rename = "JSL0")]
    Jsl0,
    #[serde(rename = "Z2VECT")]
    Z2Vect,
    #[serde(rename = "SET")]
    Set,
    #[serde(rename = "POS")]
    Pos,
}

impl VarietyTag {
    pub const ALL: [VarietyTag; 6] =
        [VarietyTag::Ba, VarietyTag::Dl01, VarietyTag::Jsl0, VarietyTag::Z2Vect, VarietyTag::Set, VarietyTag::Pos];

    pub fn name(self) -> &'static str {
        match self {
            VarietyTag::Ba => "BA",
            VarietyTag::Dl01 => "DL01",
            VarietyTag::Jsl0 => "JSL0",
            VarietyTag::Z2Vect => "Z2VECT",
            VarietyTag::Set => "SET",
            VarietyTag::Pos => "POS",
        }
    }

    /// Varieties whose algebras carry automata with outputs (coalgebras).
    pub fn is_c_side(self) -> bool {
        !matches!(self, VarietyTag::Set | VarietyTag::Pos)
    }

    /// Varieties whose algebras carry automata with an initial state and monoids.
    pub fn is_d_side(self) -> bool {
        !matches!(self, VarietyTag::Ba | VarietyTag::Dl01)
    }
}

impl fmt::Display for VarietyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite partial order on `0..n`; `above[i]` holds every `j` with `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poset {
    above: Vec<FixedBitSet>,
}

impl Poset {
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Poset {
        let above = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.extend((0..n).filter(|&j| leq(i, j)));
                row
            })
            .collect();
        Poset { above }
    }

    pub fn from_matrix(order: &[Vec<bool>]) -> Result<Poset> {
        let n = order.len();
        if order.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("order matrix must be square"));
        }
        let p = Poset::from_fn(n, |i, j| order[i][j]);
        for i in 0..n {
            if !p.leq(i, i) {
                return Err(Error::invalid(format!("order is not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && p.leq(i, j) && p.leq(j, i) {
                    return Err(Error::invalid(format!("order is not antisymmetric at ({i}, {j})")));
                }
                if p.leq(i, j) && !p.above[j].is_subset(&p.above[i]) {
                    return Err(Error::invalid(format!("order is not transitive through {j}")));
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.leq(i, j)).collect()).collect()
    }

    /// `{i : i ≤ j}`.
    pub fn principal_downset(&self, j: usize) -> FixedBitSet {
        let mut d = FixedBitSet::with_capacity(self.len());
        d.extend((0..self.len()).filter(|&i| self.leq(i, j)));
        d
    }
}

/// The lattice of downsets of a finite poset of join-irreducibles.
#[derive(Clone, Debug)]
pub(crate) struct Distributive {
    ji: Poset,
    elems: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, usize>,
}

impl PartialEq for Distributive {
    fn eq(&self, other: &Self) -> bool {
        self.ji == other.ji
    }
}

impl Eq for Distributive {}

impl Distributive {
    fn new(ji: Poset) -> Result<Distributive> {
        let m = ji.len();
        let below: Vec<FixedBitSet> = (0..m)
            .map(|j| {
                let mut d = ji.principal_downset(j);
                d.set(j, false);
                d
            })
            .collect();
        let start = FixedBitSet::with_capacity(m);
        let mut index = HashMap::from([(start.clone(), 0)]);
        let mut elems = vec![start];
        let mut i = 0;
        while i < elems.len() {
            for j in 0..m {
                if !elems[i].contains(j) && below[j].is_subset(&elems[i]) {
                    let mut d = elems[i].clone();
                    d.insert(j);
                    if !index.contains_key(&d) {
                        limits::check_carrier(elems.len() + 1)?;
                        index.insert(d.clone(), elems.len());
                        elems.push(d);
                    }
                }
            }
            i += 1;
        }
        elems.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones())));
        for (i, d) in elems.iter().enumerate() {
            index.insert(d.clone(), i);
        }
        Ok(Distributive { ji, elems, index })
    }

    fn lookup(&self, d: &FixedBitSet) -> usize {
        self.index[d]
    }
}

/// A join table with a neutral element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Semilattice {
    n: usize,
    join: Vec<u32>,
    zero: usize,
}

impl Semilattice {
    fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Boolean { atoms: usize },
    Distributive(Distributive),
    Semilattice(Semilattice),
    Vector { dim: usize },
    Set { size: usize },
    Poset(Poset),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    kind: Kind,
}

fn pow2(k: usize) -> Result<usize> {
    if k >= usize::BITS as usize - 1 {
        return Err(Error::ResourceExceeded { what: "carrier size", limit: limits::max_carrier() });
    }
    let n = 1usize << k;
    limits::check_carrier(n)?;
    Ok(n)
}

impl FinAlgebra {
    /// The powerset of `atoms` atoms.
    pub fn boolean(atoms: usize) -> Result<FinAlgebra> {
        pow2(atoms)?;
        Ok(FinAlgebra { kind: Kind::Boolean { atoms } })
    }

    /// The downset lattice of the poset given by `ji_order[i][j] = (i ≤ j)`.
    pub fn distributive(ji_order: &[Vec<bool>]) -> Result<FinAlgebra> {
        Ok(FinAlgebra { kind: Kind::Distributive(Distributive::new(Poset::from_matrix(ji_order)?)?) })
    }

    /// A join-semilattice with zero given by its full join table.
    pub fn semilattice(join: &[Vec<usize>], zero: usize) -> Result<FinAlgebra> {
        let n = join.len();
        limits::check_carrier(n)?;
        if zero >= n {
            return Err(Error::invalid("zero out of range"));
        }
        if join.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::invalid("join table must be square with entries in range"));
        }
        for a in 0..n {
            if join[a][a] != a {
                return Err(Error::invalid(format!("join is not idempotent at {a}")));
            }
            if join[zero][a] != a {
                return Err(Error::invalid(format!("zero is not neutral for {a}")));
            }
            for b in 0..n {
                if join[a][b] != join[b][a] {
                    return Err(Error::invalid(format!("join is not commutative at ({a}, {b})")));
                }
                for c in 0..n {
                    if join[join[a][b]][c] != join[a][join[b][c]] {
                        return Err(Error::invalid(format!("join is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self::semilattice_unchecked(n, |a, b| join[a][b], zero))
    }

    pub(crate) fn semilattice_unchecked(n: usize, join: impl Fn(usize, usize) -> usize, zero: usize) -> FinAlgebra {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            table.extend((0..n).map(|b| join(a, b) as u32));
        }
        FinAlgebra { kind: Kind::Semilattice(Semilattice { n, join: table, zero }) }
    }

    pub fn vector_space(dim: usize) -> Result<FinAlgebra> {
        pow2(dim)?;
        Ok(FinAlgebra { kind: Kind::Vector { dim } })
    }

    pub fn set(size: usize) -> Result<FinAlgebra> {
        limits::check_carrier(size)?;
        Ok(FinAlgebra { kind: Kind::Set { size } })
    }

    /// A poset given by `order[i][j] = (i ≤ j)`.
    pub fn poset(order: &[Vec<bool>]) -> Result<FinAlgebra> {
        limits::check_carrier(order.len())?;
        Ok(FinAlgebra { kind: Kind::Poset(Poset::from_matrix(order)?) })
    }

    pub(crate) fn poset_unchecked(p: Poset) -> FinAlgebra {
        FinAlgebra { kind: Kind::Poset(p) }
    }

    pub(crate) fn distributive_from(ji: Poset) -> Result<FinAlgebra> {
        Ok(FinAlgebra { kind: Kind::Distributive(Distributive::new(ji)?) })
    }

    /// The two-element algebra used as output object of coalgebras.
    pub fn two_object(tag: VarietyTag) -> Result<FinAlgebra> {
        match tag {
            VarietyTag::Ba => FinAlgebra::boolean(1),
            VarietyTag::Dl01 => FinAlgebra::distributive(&[vec![true]]),
            VarietyTag::Jsl0 => Ok(FinAlgebra::chain(2)),
            VarietyTag::Z2Vect => FinAlgebra::vector_space(1),
            t => Err(Error::tag_mismatch("a C-side variety", t)),
        }
    }

    /// The free algebra on one generator, used as input object of automata.
    pub fn free_on_one(tag: VarietyTag) -> Result<FinAlgebra> {
        match tag {
            VarietyTag::Set => FinAlgebra::set(1),
            VarietyTag::Pos => FinAlgebra::poset(&[vec![true]]),
            VarietyTag::Jsl0 => Ok(FinAlgebra::chain(2)),
            VarietyTag::Z2Vect => FinAlgebra::vector_space(1),
            t => Err(Error::tag_mismatch("a D-side variety", t)),
        }
    }

    /// The generator of [`FinAlgebra::free_on_one`].
    pub fn free_generator(tag: VarietyTag) -> Result<usize> {
        match tag {
            VarietyTag::Set | VarietyTag::Pos => Ok(0),
            VarietyTag::Jsl0 | VarietyTag::Z2Vect => Ok(1),
            t => Err(Error::tag_mismatch("a D-side variety", t)),
        }
    }

    /// The semilattice chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FinAlgebra {
        FinAlgebra::semilattice_unchecked(n, usize::max, 0)
    }

    pub fn tag(&self) -> VarietyTag {
        match &self.kind {
            Kind::Boolean { .. } => VarietyTag::Ba,
            Kind::Distributive(_) => VarietyTag::Dl01,
            Kind::Semilattice(_) => VarietyTag::Jsl0,
            Kind::Vector { .. } => VarietyTag::Z2Vect,
            Kind::Set { .. } => VarietyTag::Set,
            Kind::Poset(_) => VarietyTag::Pos,
        }
    }

    pub fn size(&self) -> usize {
        match &self.kind {
            Kind::Boolean { atoms } => 1 << atoms,
            Kind::Distributive(d) => d.elems.len(),
            Kind::Semilattice(s) => s.n,
            Kind::Vector { dim } => 1 << dim,
            Kind::Set { size } => *size,
            Kind::Poset(p) => p.len(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    /// Number of atoms (BA), join-irreducibles (DL01) or dimension (Z2VECT).
    pub fn rank(&self) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { atoms } => Some(*atoms),
            Kind::Distributive(d) => Some(d.ji.len()),
            Kind::Vector { dim } => Some(*dim),
            _ => None,
        }
    }

    /// The order of the algebra: lattice order for BA, DL01 and JSL0, the
    /// given order for POS, equality for SET and Z2VECT.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.kind {
            Kind::Boolean { .. } => a & !b == 0,
            Kind::Distributive(d) => d.elems[a].is_subset(&d.elems[b]),
            Kind::Semilattice(s) => s.join(a, b) == b,
            Kind::Vector { .. } | Kind::Set { .. } => a == b,
            Kind::Poset(p) => p.leq(a, b),
        }
    }

    pub fn has_order(&self) -> bool {
        !matches!(self.kind, Kind::Vector { .. } | Kind::Set { .. })
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { .. } => Some(a | b),
            Kind::Distributive(d) => Some(d.lookup(&(&d.elems[a] | &d.elems[b]))),
            Kind::Semilattice(s) => Some(s.join(a, b)),
            _ => None,
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { .. } => Some(a & b),
            Kind::Distributive(d) => Some(d.lookup(&(&d.elems[a] & &d.elems[b]))),
            _ => None,
        }
    }

    pub fn complement(&self, a: usize) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { atoms } => Some(!a & ((1 << atoms) - 1)),
            _ => None,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        match &self.kind {
            Kind::Vector { .. } => Some(a ^ b),
            _ => None,
        }
    }

    pub fn zero(&self) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { .. } | Kind::Distributive(_) | Kind::Vector { .. } => Some(0),
            Kind::Semilattice(s) => Some(s.zero),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match &self.kind {
            Kind::Boolean { atoms } => Some((1 << atoms) - 1),
            Kind::Distributive(d) => Some(d.elems.len() - 1),
            Kind::Semilattice(s) => Some((0..s.n).fold(s.zero, |x, y| s.join(x, y))),
            _ => None,
        }
    }

    /// A generating set: atoms, join-irreducibles, the coordinate basis, or
    /// every element for SET and POS.
    pub fn generators(&self) -> Vec<usize> {
        match &self.kind {
            Kind::Boolean { atoms } | Kind::Vector { dim: atoms } => (0..*atoms).map(|i| 1 << i).collect(),
            Kind::Distributive(d) => (0..d.ji.len()).map(|j| d.lookup(&d.ji.principal_downset(j))).collect(),
            Kind::Semilattice(_) => self.join_irreducibles(),
            Kind::Set { size } => (0..*size).collect(),
            Kind::Poset(p) => (0..p.len()).collect(),
        }
    }

    /// Elements `x ≠ 0` that are not the join of the elements strictly below
    /// them, in index order. Only meaningful for BA, DL01 and JSL0.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let Some(zero) = self.zero() else { return Vec::new() };
        if self.tag() == VarietyTag::Z2Vect {
            return Vec::new();
        }
        self.elements()
            .filter(|&x| {
                x != zero && {
                    let below = self.elements().filter(|&y| y != x && self.leq(y, x));
                    below.fold(zero, |acc, y| self.join(acc, y).unwrap()) != x
                }
            })
            .collect()
    }

    /// For DL01: the downset of join-irreducibles (as positions in the
    /// join-irreducible poset) representing element `x`.
    pub(crate) fn downset(&self, x: usize) -> Option<&FixedBitSet> {
        match &self.kind {
            Kind::Distributive(d) => Some(&d.elems[x]),
            _ => None,
        }
    }

    pub(crate) fn downset_index(&self, d: &FixedBitSet) -> Option<usize> {
        match &self.kind {
            Kind::Distributive(dl) => dl.index.get(d).copied(),
            _ => None,
        }
    }

    pub(crate) fn ji_poset(&self) -> Option<&Poset> {
        match &self.kind {
            Kind::Distributive(d) => Some(&d.ji),
            _ => None,
        }
    }

    /// For JSL0: the meet in the lattice order, which exists because the
    /// carrier is finite and has a zero.
    /// The meet of every pair: the join of the common join-irreducibles.
    pub(crate) fn lattice_meet_table(&self) -> Option<Vec<Vec<usize>>> {
        let Kind::Semilattice(s) = &self.kind else { return None };
        let n = s.n;
        let jis = self.join_irreducibles();
        let below: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut d = FixedBitSet::with_capacity(jis.len());
                d.extend((0..jis.len()).filter(|&t| s.join(jis[t], a) == a));
                d
            })
            .collect();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let m = below[a].intersection(&below[b]).fold(s.zero, |acc, t| s.join(acc, jis[t]));
                table[a][b] = m;
                table[b][a] = m;
            }
        }
        Some(table)
    }

    pub(crate) fn join_table(&self) -> Option<Vec<Vec<usize>>> {
        let Kind::Semilattice(s) = &self.kind else { return None };
        Some((0..s.n).map(|a| (0..s.n).map(|b| s.join(a, b)).collect()).collect())
    }

    /// Short human-readable name of element `x`.
    pub fn element_label(&self, x: usize) -> String {
        match &self.kind {
            Kind::Boolean { atoms } | Kind::Vector { dim: atoms } => {
                if *atoms == 0 {
                    "0".into()
                } else {
                    (0..*atoms).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
                }
            }
            Kind::Distributive(d) => {
                format!("{{{}}}", d.elems[x].ones().map(|j| j.to_string()).collect::<Vec<_>>().join(","))
            }
            _ => x.to_string(),
        }
    }

    pub fn into_arc(self) -> Arc<FinAlgebra> {
        Arc::new(self)
    }
}
