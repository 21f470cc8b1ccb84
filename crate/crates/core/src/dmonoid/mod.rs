//! Finite Σ-generated monoids whose carrier lives in one of the D-side
//! varieties and whose multiplication is bilinear.

mod free;
mod json;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

pub use free::{free_mult, free_plus, FreeElement, Word};

use crate::automata::DAlgebra;
use crate::lang::Alphabet;
use crate::variety::{build, FinAlgebra, FinMorphism, Structure, VarietyTag};
use crate::{limits, Error, Result};

/// A finite monoid generated by the images of the letters, with carrier a
/// D-algebra. Construction checks shapes and ranges only; the laws are
/// checked by [`validate_monoid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaMonoid {
    carrier: Arc<FinAlgebra>,
    alphabet: Alphabet,
    unit: usize,
    mult: Vec<u32>,
    gen: Vec<usize>,
}

impl SigmaMonoid {
    pub fn new(
        carrier: Arc<FinAlgebra>,
        alphabet: Alphabet,
        unit: usize,
        mult: Vec<Vec<usize>>,
        gen: Vec<usize>,
    ) -> Result<SigmaMonoid> {
        if !carrier.tag().is_d_side() {
            return Err(Error::tag_mismatch("a D-side variety", carrier.tag()));
        }
        let n = carrier.size();
        if unit >= n || gen.iter().any(|&g| g >= n) {
            return Err(Error::invalid("monoid element out of range"));
        }
        if gen.len() != alphabet.len() {
            return Err(Error::invalid("one generator per letter is required"));
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::invalid("multiplication table does not match the carrier"));
        }
        let mult = mult.into_iter().flatten().map(|x| x as u32).collect();
        Ok(SigmaMonoid { carrier, alphabet, unit, mult, gen })
    }

    /// The one-element monoid.
    pub fn trivial(tag: VarietyTag, alphabet: Alphabet) -> Result<SigmaMonoid> {
        let carrier = match tag {
            VarietyTag::Set => FinAlgebra::set(1)?,
            VarietyTag::Pos => FinAlgebra::poset(&[vec![true]])?,
            VarietyTag::Jsl0 => FinAlgebra::chain(1),
            VarietyTag::Z2Vect => FinAlgebra::vector_space(0)?,
            t => return Err(Error::tag_mismatch("a D-side variety", t)),
        };
        let gen = vec![0; alphabet.len()];
        Ok(SigmaMonoid { carrier: Arc::new(carrier), alphabet, unit: 0, mult: vec![0], gen })
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

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn gen(&self, a: usize) -> usize {
        self.gen[a]
    }

    pub fn gens(&self) -> &[usize] {
        &self.gen
    }

    pub fn mult(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.size() + y] as usize
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n).map(|x| (0..n).map(|y| self.mult(x, y)).collect()).collect()
    }

    /// The value of a word given as letter indices.
    pub fn eval_indices(&self, w: &[usize]) -> usize {
        w.iter().fold(self.unit, |x, &a| self.mult(x, self.gen[a]))
    }

    /// The same carrier with `x∘y` replaced by `y∘x`.
    pub fn opposite(&self) -> SigmaMonoid {
        let n = self.size();
        let mult = (0..n * n).map(|i| self.mult[(i % n) * n + i / n]).collect();
        SigmaMonoid { mult, ..self.clone() }
    }

    /// The D-algebra on the carrier with `α_a(x) = gen(a)∘x` and initial
    /// element the unit.
    pub fn left_action(&self) -> Result<DAlgebra> {
        let alpha = self.gen.iter().map(|&g| (0..self.size()).map(|x| self.mult(g, x)).collect()).collect();
        DAlgebra::new(self.carrier.clone(), self.alphabet.clone(), alpha, self.unit)
    }

    fn plus(&self, x: usize, y: usize) -> Option<usize> {
        match self.tag() {
            VarietyTag::Jsl0 => self.carrier.join(x, y),
            VarietyTag::Z2Vect => self.carrier.add(x, y),
            _ => None,
        }
    }
}

/// The image of a free element: words via the generators and the
/// multiplication, sets of words via joins (JSL0) or sums (Z2VECT).
pub fn eval_word(m: &SigmaMonoid, x: &FreeElement) -> Result<usize> {
    if x.tag() != m.tag() {
        return Err(Error::tag_mismatch(m.tag(), x.tag()));
    }
    if let Some(&a) = x.support().iter().flatten().find(|&&a| a >= m.alphabet.len()) {
        return Err(Error::invalid(format!("letter index {a} outside the alphabet")));
    }
    let mut images = x.support().iter().map(|w| m.eval_indices(w));
    Ok(match m.tag() {
        VarietyTag::Jsl0 | VarietyTag::Z2Vect => {
            images.fold(m.carrier.zero().unwrap(), |acc, y| m.plus(acc, y).unwrap())
        }
        _ => images.next().unwrap(),
    })
}

/// The elements of a monoid-like structure being closed up.
trait Ops {
    type E: Clone + Eq + Hash;
    fn mult(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn plus(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn zero(&self) -> Self::E;
    fn leq(&self, x: &Self::E, y: &Self::E) -> bool;
}

/// How an element of a closure was first obtained.
#[derive(Clone, Copy)]
enum Step {
    Unit,
    Zero,
    /// `list[p]∘gen(a)`
    Times(usize, usize),
    /// `list[i] + list[w]` with `w` the value of a word
    Plus(usize, usize),
}

struct Closure<E> {
    list: Vec<E>,
    index: HashMap<E, usize>,
    steps: Vec<Step>,
    /// elements that are values of words
    words: usize,
}

impl<E: Clone + Eq + Hash> Closure<E> {
    fn push(&mut self, e: E, step: Step) -> Result<usize> {
        if let Some(&i) = self.index.get(&e) {
            return Ok(i);
        }
        limits::check_carrier(self.list.len() + 1)?;
        self.index.insert(e.clone(), self.list.len());
        self.list.push(e);
        self.steps.push(step);
        Ok(self.list.len() - 1)
    }
}

/// The closure of `{unit}` under right multiplication by the generators,
/// then under the D-operations of `tag`. Elements that are values of words
/// come first.
fn closure<O: Ops>(tag: VarietyTag, ops: &O, unit: O::E, gens: &[O::E]) -> Result<Closure<O::E>> {
    let mut c = Closure { list: Vec::new(), index: HashMap::new(), steps: Vec::new(), words: 0 };
    c.push(unit, Step::Unit)?;
    let mut i = 0;
    while i < c.list.len() {
        for (a, g) in gens.iter().enumerate() {
            let e = ops.mult(&c.list[i], g);
            c.push(e, Step::Times(i, a))?;
        }
        i += 1;
    }
    c.words = c.list.len();
    if matches!(tag, VarietyTag::Jsl0 | VarietyTag::Z2Vect) {
        c.push(ops.zero(), Step::Zero)?;
        let mut i = 0;
        while i < c.list.len() {
            for w in 0..c.words {
                let e = ops.plus(&c.list[i], &c.list[w]);
                c.push(e, Step::Plus(i, w))?;
            }
            i += 1;
        }
    }
    Ok(c)
}

/// Addition table of a closure, from sums with word values.
fn plus_table<O: Ops>(ops: &O, c: &Closure<O::E>) -> Result<Vec<Vec<usize>>> {
    let n = c.list.len();
    let mut with_word = vec![vec![0; c.words]; n];
    for (x, row) in with_word.iter_mut().enumerate() {
        for (w, slot) in row.iter_mut().enumerate() {
            *slot = *c.index.get(&ops.plus(&c.list[x], &c.list[w])).ok_or_else(not_closed)?;
        }
    }
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            table[x][y] = match c.steps[y] {
                _ if y < c.words => with_word[x][y],
                Step::Zero => x,
                Step::Plus(i, w) => with_word[table[x][i]][w],
                _ => unreachable!(),
            };
        }
    }
    Ok(table)
}

fn not_closed() -> Error {
    Error::invalid("generated set is not closed under the operations")
}

struct Closed<'a, O: Ops> {
    ops: &'a O,
    list: &'a [O::E],
    plus: &'a [Vec<usize>],
    zero: usize,
}

impl<O: Ops> Structure for Closed<'_, O> {
    fn len(&self) -> usize {
        self.list.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.ops.leq(&self.list[a], &self.list[b])
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.plus[a][b]
    }
    fn add(&self, a: usize, b: usize) -> usize {
        self.plus[a][b]
    }
    fn zero(&self) -> usize {
        self.zero
    }
}

/// Builds the monoid generated by `gens`; returns it with its elements in
/// carrier order. Products are computed from the steps, using that
/// `x∘(w∘a) = (x∘w)∘a` and `x∘(u + w) = x∘u + x∘w`.
fn generate<O: Ops>(tag: VarietyTag, alphabet: &Alphabet, ops: &O, unit: O::E, gens: &[O::E]) -> Result<(SigmaMonoid, Vec<O::E>)> {
    let c = closure(tag, ops, unit, gens)?;
    let n = c.list.len();
    let additive = matches!(tag, VarietyTag::Jsl0 | VarietyTag::Z2Vect);
    let plus = if additive { plus_table(ops, &c)? } else { Vec::new() };
    let zero = if additive { c.index[&ops.zero()] } else { 0 };
    let k = gens.len();
    // right[e][a] = list[e]∘gen(a)
    let mut right = vec![vec![0; k]; n];
    for e in 0..n {
        for a in 0..k {
            right[e][a] = match c.steps[e] {
                _ if e < c.words => c.index[&ops.mult(&c.list[e], &gens[a])],
                Step::Zero => zero,
                Step::Plus(i, w) => plus[right[i][a]][right[w][a]],
                _ => unreachable!(),
            };
        }
    }
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            table[x][y] = match c.steps[y] {
                Step::Unit => x,
                Step::Zero => zero,
                Step::Times(p, a) => right[table[x][p]][a],
                Step::Plus(i, w) => plus[table[x][i]][table[x][w]],
            };
        }
    }
    let (carrier, encode) = build(tag, &Closed { ops, list: &c.list, plus: &plus, zero })?;
    let mut mult = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            mult[encode[x] * n + encode[y]] = encode[table[x][y]] as u32;
        }
    }
    let gen = (0..k).map(|a| encode[right[0][a]]).collect();
    let mut ordered = c.list.clone();
    for (i, e) in c.list.into_iter().enumerate() {
        ordered[encode[i]] = e;
    }
    let m = SigmaMonoid { carrier: Arc::new(carrier), alphabet: alphabet.clone(), unit: encode[0], mult, gen };
    Ok((m, ordered))
}

/// Homomorphisms of a D-algebra, stored by their values on a generating set.
struct Maps<'a> {
    alg: &'a FinAlgebra,
    gens: Vec<usize>,
    /// for each element, the generators whose join or sum it is
    dec: Vec<Vec<usize>>,
}

impl<'a> Maps<'a> {
    fn new(alg: &'a FinAlgebra) -> Maps<'a> {
        let gens = alg.generators();
        let dec = match alg.tag() {
            VarietyTag::Jsl0 => alg.elements().map(|z| (0..gens.len()).filter(|&t| alg.leq(gens[t], z)).collect()).collect(),
            VarietyTag::Z2Vect => alg.elements().map(|z| (0..gens.len()).filter(|&t| z >> t & 1 == 1).collect()).collect(),
            _ => alg.elements().map(|z| vec![z]).collect(),
        };
        Maps { alg, gens, dec }
    }

    fn restrict(&self, f: &FinMorphism) -> Vec<usize> {
        self.gens.iter().map(|&g| f.apply(g)).collect()
    }

    fn eval(&self, m: &[usize], z: usize) -> usize {
        match self.alg.tag() {
            VarietyTag::Jsl0 | VarietyTag::Z2Vect => {
                self.dec[z].iter().fold(self.alg.zero().unwrap(), |acc, &t| self.sum(acc, m[t]))
            }
            _ => m[z],
        }
    }

    fn sum(&self, a: usize, b: usize) -> usize {
        match self.alg.tag() {
            VarietyTag::Jsl0 => self.alg.join(a, b).unwrap(),
            _ => self.alg.add(a, b).unwrap(),
        }
    }
}

impl Ops for Maps<'_> {
    type E = Vec<usize>;
    fn mult(&self, x: &Vec<usize>, y: &Vec<usize>) -> Vec<usize> {
        x.iter().map(|&z| self.eval(y, z)).collect()
    }
    fn plus(&self, x: &Vec<usize>, y: &Vec<usize>) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.sum(a, b)).collect()
    }
    fn zero(&self) -> Vec<usize> {
        vec![self.alg.zero().unwrap(); self.gens.len()]
    }
    fn leq(&self, x: &Vec<usize>, y: &Vec<usize>) -> bool {
        x.iter().zip(y).all(|(&a, &b)| self.alg.leq(a, b))
    }
}

/// The monoid of maps on the carrier of a reachable D-algebra generated by
/// the letter actions. `x∘y` applies `x` first, so evaluation of words is
/// compatible with concatenation.
pub fn transition_monoid(a: &DAlgebra) -> Result<SigmaMonoid> {
    transition_monoid_with_orbit(a).map(|(m, _)| m)
}

/// [`transition_monoid`] together with the image of the initial element
/// under each element's map.
pub fn transition_monoid_with_orbit(a: &DAlgebra) -> Result<(SigmaMonoid, Vec<usize>)> {
    if !a.is_reachable()? {
        return Err(Error::NotReachable);
    }
    let maps = Maps::new(a.carrier());
    let gens: Vec<Vec<usize>> = (0..a.alphabet().len()).map(|l| maps.restrict(a.alpha(l))).collect();
    let identity = maps.gens.clone();
    let (m, elements) = generate(a.tag(), a.alphabet(), &maps, identity, &gens)?;
    let orbit = elements.iter().map(|e| maps.eval(e, a.init())).collect();
    Ok((m, orbit))
}

struct PairOps<'a>(&'a SigmaMonoid, &'a SigmaMonoid);

impl Ops for PairOps<'_> {
    type E = (usize, usize);
    fn mult(&self, x: &(usize, usize), y: &(usize, usize)) -> (usize, usize) {
        (self.0.mult(x.0, y.0), self.1.mult(x.1, y.1))
    }
    fn plus(&self, x: &(usize, usize), y: &(usize, usize)) -> (usize, usize) {
        (self.0.plus(x.0, y.0).unwrap(), self.1.plus(x.1, y.1).unwrap())
    }
    fn zero(&self) -> (usize, usize) {
        (self.0.carrier.zero().unwrap(), self.1.carrier.zero().unwrap())
    }
    fn leq(&self, x: &(usize, usize), y: &(usize, usize)) -> bool {
        self.0.carrier.leq(x.0, y.0) && self.1.carrier.leq(x.1, y.1)
    }
}

fn compatible(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<()> {
    if m1.tag() != m2.tag() {
        return Err(Error::tag_mismatch(m1.tag(), m2.tag()));
    }
    if m1.alphabet != m2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

fn pairs(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<Vec<(usize, usize)>> {
    compatible(m1, m2)?;
    let ops = PairOps(m1, m2);
    let gens: Vec<_> = m1.gen.iter().zip(&m2.gen).map(|(&x, &y)| (x, y)).collect();
    Ok(closure(m1.tag(), &ops, (m1.unit, m2.unit), &gens)?.list)
}

/// The submonoid of `M1 × M2` generated by the paired generator images.
pub fn subdirect_product(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<SigmaMonoid> {
    subdirect_with_projections(m1, m2).map(|(m, _)| m)
}

/// [`subdirect_product`] together with the pair represented by each element.
pub fn subdirect_with_projections(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<(SigmaMonoid, Vec<(usize, usize)>)> {
    compatible(m1, m2)?;
    let gens: Vec<_> = m1.gen.iter().zip(&m2.gen).map(|(&x, &y)| (x, y)).collect();
    generate(m1.tag(), &m1.alphabet, &PairOps(m1, m2), (m1.unit, m2.unit), &gens)
}

/// The generator-preserving morphism `from → to`, if one exists.
pub fn forced_morphism(from: &SigmaMonoid, to: &SigmaMonoid) -> Result<Option<FinMorphism>> {
    let mut f = vec![usize::MAX; from.size()];
    for (x, y) in pairs(from, to)? {
        if f[x] != usize::MAX && f[x] != y {
            return Ok(None);
        }
        f[x] = y;
    }
    if f.contains(&usize::MAX) {
        return Ok(None);
    }
    if from.tag() == VarietyTag::Pos {
        let n = from.size();
        if (0..n).any(|x| (0..n).any(|y| from.carrier.leq(x, y) && !to.carrier.leq(f[x], f[y]))) {
            return Ok(None);
        }
    }
    FinMorphism::new(from.carrier.clone(), to.carrier.clone(), f).map(Some)
}

/// Whether `M1` is a quotient of `M2` as Σ-generated monoids.
pub fn quotient_leq(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<bool> {
    Ok(forced_morphism(m2, m1)?.is_some())
}

/// The generator-preserving isomorphism `M1 → M2`, if one exists.
pub fn monoid_iso(m1: &SigmaMonoid, m2: &SigmaMonoid) -> Result<Option<FinMorphism>> {
    if m1.size() != m2.size() {
        compatible(m1, m2)?;
        return Ok(None);
    }
    match (forced_morphism(m1, m2)?, forced_morphism(m2, m1)?) {
        (Some(f), Some(_)) => Ok(Some(f)),
        _ => Ok(None),
    }
}

/// Membership in the least class containing `gens` and closed under
/// quotients and subdirect products.
pub fn pseudovariety_member(m: &SigmaMonoid, gens: &[SigmaMonoid]) -> Result<bool> {
    let mut top = SigmaMonoid::trivial(m.tag(), m.alphabet.clone())?;
    for g in gens {
        top = subdirect_product(&top, g)?;
    }
    quotient_leq(m, &top)
}

/// Checks the monoid laws, bilinearity of the multiplication and
/// Σ-generation. Joins and sums are checked against a generating set of the
/// carrier, and associativity against the generators of the monoid; given
/// the other laws this covers every triple.
pub fn validate_monoid(m: &SigmaMonoid) -> bool {
    let n = m.size();
    let unit_laws = (0..n).all(|x| m.mult(m.unit, x) == x && m.mult(x, m.unit) == x);
    unit_laws && bilinear(m, &m.carrier.generators()) && sigma_generated(m) && {
        m.gen.iter().all(|&g| (0..n).all(|x| (0..n).all(|y| m.mult(m.mult(x, g), y) == m.mult(x, m.mult(g, y)))))
    }
}

/// The same checks as [`validate_monoid`] over every pair and triple.
pub fn validate_monoid_exhaustive(m: &SigmaMonoid) -> bool {
    let n = m.size();
    let all: Vec<usize> = (0..n).collect();
    (0..n).all(|x| m.mult(m.unit, x) == x && m.mult(x, m.unit) == x)
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m.mult(m.mult(x, y), z) == m.mult(x, m.mult(y, z)))))
        && bilinear(m, &all)
        && sigma_generated(m)
}

fn bilinear(m: &SigmaMonoid, probes: &[usize]) -> bool {
    let n = m.size();
    let c = &*m.carrier;
    (0..n).all(|x| {
        let sides: [&dyn Fn(usize) -> usize; 2] = [&|y| m.mult(x, y), &|y| m.mult(y, x)];
        sides.iter().all(|f| match m.tag() {
            VarietyTag::Set => true,
            VarietyTag::Pos => (0..n).all(|a| (0..n).all(|b| !c.leq(a, b) || c.leq(f(a), f(b)))),
            _ => {
                let zero = c.zero().unwrap();
                f(zero) == zero
                    && (0..n).all(|a| probes.iter().all(|&g| f(m.plus(a, g).unwrap()) == m.plus(f(a), f(g)).unwrap()))
            }
        })
    })
}

fn sigma_generated(m: &SigmaMonoid) -> bool {
    let n = m.size();
    let mut seen = vec![false; n];
    let mut list = Vec::new();
    let starts = std::iter::once(m.unit).chain(m.gen.iter().copied()).chain(match m.tag() {
        VarietyTag::Jsl0 | VarietyTag::Z2Vect => m.carrier.zero(),
        _ => None,
    });
    for x in starts {
        if !seen[x] {
            seen[x] = true;
            list.push(x);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            let mut found = vec![m.mult(x, y), m.mult(y, x)];
            found.extend(m.plus(x, y));
            for z in found {
                if !seen[z] {
                    seen[z] = true;
                    list.push(z);
                }
            }
        }
        i += 1;
    }
    list.len() == n
}

#[cfg(test)]
mod tests;
