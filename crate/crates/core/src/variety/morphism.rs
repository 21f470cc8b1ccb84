use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{build, FinAlgebra, Structure, VarietyTag};
use crate::{limits, Error, Result};

/// A map between the carriers of two finite algebras. Construction only
/// checks that the map is total and in range; [`validate_morphism`] checks
/// that it preserves the operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMorphism {
    domain: Arc<FinAlgebra>,
    codomain: Arc<FinAlgebra>,
    map: Vec<usize>,
}

fn same(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl FinMorphism {
    pub fn new(domain: Arc<FinAlgebra>, codomain: Arc<FinAlgebra>, map: Vec<usize>) -> Result<FinMorphism> {
        if map.len() != domain.size() {
            return Err(Error::invalid(format!("map has {} entries for a carrier of {}", map.len(), domain.size())));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= codomain.size()) {
            return Err(Error::invalid(format!("image {y} outside the codomain")));
        }
        Ok(FinMorphism { domain, codomain, map })
    }

    pub fn from_fn(domain: Arc<FinAlgebra>, codomain: Arc<FinAlgebra>, f: impl Fn(usize) -> usize) -> Result<FinMorphism> {
        let map = domain.elements().map(f).collect();
        FinMorphism::new(domain, codomain, map)
    }

    pub fn identity(a: Arc<FinAlgebra>) -> FinMorphism {
        FinMorphism { map: a.elements().collect(), codomain: a.clone(), domain: a }
    }

    pub fn domain(&self) -> &Arc<FinAlgebra> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinAlgebra> {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinMorphism) -> Result<FinMorphism> {
        if !same(&first.codomain, &self.domain) {
            return Err(Error::invalid("morphisms are not composable"));
        }
        Ok(FinMorphism {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        same(&self.domain, &self.codomain) && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.codomain.size());
        self.map.iter().all(|&y| !seen.put(y))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.codomain.size());
        seen.extend(self.map.iter().copied());
        seen.count_ones(..) == self.codomain.size()
    }

    /// `x ≤ y ⟺ f(x) ≤ f(y)` for all `x, y`.
    pub fn is_order_embedding(&self) -> bool {
        let d = &self.domain;
        d.elements().all(|x| d.elements().all(|y| d.leq(x, y) == self.codomain.leq(self.map[x], self.map[y])))
    }

    /// The inverse of a bijective morphism.
    pub fn inverse(&self) -> Option<FinMorphism> {
        if self.domain.size() != self.codomain.size() || !self.is_injective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(FinMorphism { domain: self.codomain.clone(), codomain: self.domain.clone(), map: inv })
    }
}

/// Exhaustively checks that `m` preserves the operations and constants of
/// its variety (monotonicity for POS).
pub fn validate_morphism(m: &FinMorphism) -> Result<bool> {
    let (d, c, f) = (&*m.domain, &*m.codomain, &m.map);
    if d.tag() != c.tag() {
        return Err(Error::tag_mismatch(d.tag(), c.tag()));
    }
    let pairs = || d.elements().flat_map(move |a| d.elements().map(move |b| (a, b)));
    let preserves = |op: &dyn Fn(&FinAlgebra, usize, usize) -> Option<usize>| {
        pairs().all(|(a, b)| op(c, f[a], f[b]) == op(d, a, b).map(|x| f[x]))
    };
    let constants = |top: bool| {
        d.zero().map(|z| f[z]) == c.zero() && (!top || d.top().map(|t| f[t]) == c.top())
    };
    Ok(match d.tag() {
        VarietyTag::Ba => {
            constants(true)
                && d.elements().all(|a| c.complement(f[a]) == d.complement(a).map(|x| f[x]))
                && preserves(&FinAlgebra::join)
                && preserves(&FinAlgebra::meet)
        }
        VarietyTag::Dl01 => constants(true) && preserves(&FinAlgebra::join) && preserves(&FinAlgebra::meet),
        VarietyTag::Jsl0 => constants(false) && preserves(&FinAlgebra::join),
        VarietyTag::Z2Vect => constants(false) && preserves(&FinAlgebra::add),
        VarietyTag::Set => true,
        VarietyTag::Pos => pairs().all(|(a, b)| !d.leq(a, b) || c.leq(f[a], f[b])),
    })
}

/// A subset of an ambient algebra, closed under its operations.
struct Sub<'a> {
    amb: &'a FinAlgebra,
    elems: &'a [usize],
    pos: Vec<usize>,
}

impl Structure for Sub<'_> {
    fn len(&self) -> usize {
        self.elems.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.amb.leq(self.elems[a], self.elems[b])
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.pos[self.amb.join(self.elems[a], self.elems[b]).unwrap()]
    }
    fn add(&self, a: usize, b: usize) -> usize {
        self.pos[self.amb.add(self.elems[a], self.elems[b]).unwrap()]
    }
    fn zero(&self) -> usize {
        self.pos[self.amb.zero().unwrap()]
    }
}

/// The least subset of `amb` containing `gens` and closed under the
/// operations and constants of its variety, with its inclusion map.
pub fn generate_subalgebra(amb: &Arc<FinAlgebra>, gens: &[usize]) -> Result<(Arc<FinAlgebra>, FinMorphism)> {
    let n = amb.size();
    if let Some(&g) = gens.iter().find(|&&g| g >= n) {
        return Err(Error::invalid(format!("generator {g} outside the carrier")));
    }
    let mut member = FixedBitSet::with_capacity(n);
    let mut list = Vec::new();
    let mut push = |x: usize, list: &mut Vec<usize>| {
        if !member.put(x) {
            list.push(x);
        }
    };
    for c in [amb.zero(), amb.top()].into_iter().flatten() {
        if amb.tag() != VarietyTag::Jsl0 || Some(c) == amb.zero() {
            push(c, &mut list);
        }
    }
    for &g in gens {
        push(g, &mut list);
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        if let Some(y) = amb.complement(x) {
            push(y, &mut list);
        }
        for j in 0..=i {
            let y = list[j];
            for z in [amb.join(x, y), amb.meet(x, y), amb.add(x, y)].into_iter().flatten() {
                push(z, &mut list);
            }
        }
        i += 1;
    }
    list.sort_unstable();
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in list.iter().enumerate() {
        pos[x] = i;
    }
    let (alg, encode) = build(amb.tag(), &Sub { amb, elems: &list, pos })?;
    let mut incl = vec![0; list.len()];
    for (i, &e) in encode.iter().enumerate() {
        incl[e] = list[i];
    }
    let alg = Arc::new(alg);
    Ok((alg.clone(), FinMorphism { domain: alg, codomain: amb.clone(), map: incl }))
}

/// The product `A × B` with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: Arc<FinAlgebra>,
    pub left: FinMorphism,
    pub right: FinMorphism,
    pair: Vec<usize>,
    right_size: usize,
}

impl Product {
    /// The element `(x, y)`.
    pub fn pair(&self, x: usize, y: usize) -> usize {
        self.pair[x * self.right_size + y]
    }

    /// `⟨f, g⟩ : C → A × B`.
    pub fn pairing(&self, f: &FinMorphism, g: &FinMorphism) -> Result<FinMorphism> {
        if !same(&f.domain, &g.domain) || !same(&f.codomain, self.left.codomain()) || !same(&g.codomain, self.right.codomain()) {
            return Err(Error::invalid("pairing of incompatible morphisms"));
        }
        FinMorphism::from_fn(f.domain.clone(), self.algebra.clone(), |x| self.pair(f.map[x], g.map[x]))
    }
}

struct Pairs<'a>(&'a FinAlgebra, &'a FinAlgebra);

impl Pairs<'_> {
    fn split(&self, p: usize) -> (usize, usize) {
        (p / self.1.size(), p % self.1.size())
    }
    fn lift(&self, op: impl Fn(&FinAlgebra, usize, usize) -> Option<usize>, a: usize, b: usize) -> usize {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        op(self.0, a0, b0).unwrap() * self.1.size() + op(self.1, a1, b1).unwrap()
    }
}

impl Structure for Pairs<'_> {
    fn len(&self) -> usize {
        self.0.size() * self.1.size()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        self.0.leq(a0, b0) && self.1.leq(a1, b1)
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.lift(FinAlgebra::join, a, b)
    }
    fn add(&self, a: usize, b: usize) -> usize {
        self.lift(FinAlgebra::add, a, b)
    }
    fn zero(&self) -> usize {
        self.0.zero().unwrap() * self.1.size() + self.1.zero().unwrap()
    }
}

pub fn product(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> Result<Product> {
    if a.tag() != b.tag() {
        return Err(Error::tag_mismatch(a.tag(), b.tag()));
    }
    limits::check_carrier(a.size().saturating_mul(b.size()))?;
    let (alg, pair) = build(a.tag(), &Pairs(a, b))?;
    let alg = Arc::new(alg);
    let mut left = vec![0; alg.size()];
    let mut right = vec![0; alg.size()];
    for x in a.elements() {
        for y in b.elements() {
            let p = pair[x * b.size() + y];
            left[p] = x;
            right[p] = y;
        }
    }
    Ok(Product {
        left: FinMorphism { domain: alg.clone(), codomain: a.clone(), map: left },
        right: FinMorphism { domain: alg.clone(), codomain: b.clone(), map: right },
        algebra: alg,
        pair,
        right_size: b.size(),
    })
}

/// Factors `m` as `mono ∘ epi` through the subalgebra generated by its image.
pub fn image_factorize(m: &FinMorphism) -> Result<(FinMorphism, FinMorphism)> {
    if m.domain.tag() != m.codomain.tag() {
        return Err(Error::tag_mismatch(m.domain.tag(), m.codomain.tag()));
    }
    let (mid, mono) = generate_subalgebra(&m.codomain, &m.map)?;
    let mut pos = vec![usize::MAX; m.codomain.size()];
    for (i, &y) in mono.map.iter().enumerate() {
        pos[y] = i;
    }
    let epi = FinMorphism::from_fn(m.domain.clone(), mid, |x| pos[m.map[x]])?;
    Ok((epi, mono))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: Result<FinAlgebra>) -> Arc<FinAlgebra> {
        Arc::new(a.unwrap())
    }

    #[test]
    fn validation_examples() {
        let b = arc(FinAlgebra::two_object(VarietyTag::Ba));
        assert!(validate_morphism(&FinMorphism::identity(b.clone())).unwrap());
        let swap = FinMorphism::new(b.clone(), b.clone(), vec![1, 0]).unwrap();
        assert!(!validate_morphism(&swap).unwrap());
        let j = Arc::new(FinAlgebra::chain(3));
        let zero = FinMorphism::new(j.clone(), j.clone(), vec![0, 0, 0]).unwrap();
        assert!(validate_morphism(&zero).unwrap());
        let s = arc(FinAlgebra::set(2));
        let cross = FinMorphism::new(b, s, vec![0, 1]).unwrap();
        assert!(matches!(validate_morphism(&cross), Err(Error::TagMismatch { .. })));
    }

    #[test]
    fn subalgebra_examples() {
        let b = arc(FinAlgebra::boolean(3));
        let (sub, incl) = generate_subalgebra(&b, &[0b001]).unwrap();
        assert_eq!(sub.size(), 4);
        let mut img = incl.map().to_vec();
        img.sort();
        assert_eq!(img, vec![0b000, 0b001, 0b110, 0b111]);
        assert!(validate_morphism(&incl).unwrap());

        let c = Arc::new(FinAlgebra::chain(3));
        let (sub, incl) = generate_subalgebra(&c, &[1]).unwrap();
        assert_eq!((sub.size(), incl.map()), (2, &[0, 1][..]));

        let v = arc(FinAlgebra::vector_space(2));
        let (sub, _) = generate_subalgebra(&v, &[0b11]).unwrap();
        assert_eq!(sub.size(), 2);
    }

    #[test]
    fn product_examples() {
        let two = Arc::new(FinAlgebra::chain(2));
        let p = product(&two, &two).unwrap();
        assert_eq!(p.algebra.size(), 4);
        assert_eq!(p.algebra.join(p.pair(1, 0), p.pair(0, 1)), Some(p.pair(1, 1)));
        assert!(validate_morphism(&p.left).unwrap() && validate_morphism(&p.right).unwrap());
        let s = product(&arc(FinAlgebra::set(2)), &arc(FinAlgebra::set(3))).unwrap();
        assert_eq!(s.algebra.size(), 6);
        let v1 = arc(FinAlgebra::vector_space(1));
        assert_eq!(product(&v1, &v1).unwrap().algebra.rank(), Some(2));
    }

    #[test]
    fn factorization_examples() {
        let b = arc(FinAlgebra::boolean(2));
        let (e, m) = image_factorize(&FinMorphism::identity(b.clone())).unwrap();
        assert!(e.map().iter().enumerate().all(|(i, &x)| m.apply(x) == i));
        let j = Arc::new(FinAlgebra::chain(3));
        let zero = FinMorphism::new(j.clone(), j.clone(), vec![0, 0, 0]).unwrap();
        assert_eq!(image_factorize(&zero).unwrap().0.codomain().size(), 1);
        let v = arc(FinAlgebra::vector_space(3));
        // rank 2: e0 -> e0, e1 -> e1, e2 -> e0 + e1
        let f = FinMorphism::from_fn(v.clone(), v, |x| (x & 3) ^ if x & 4 != 0 { 3 } else { 0 }).unwrap();
        assert!(validate_morphism(&f).unwrap());
        assert_eq!(image_factorize(&f).unwrap().0.codomain().rank(), Some(2));
    }
}
