use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{FinAlgebra, Poset, VarietyTag};
use crate::{limits, Error, Result};

/// An abstract finite algebra on `0..len()` described by its operations.
/// Only the operations of the variety being built are called.
pub(crate) trait Structure {
    fn len(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn join(&self, _a: usize, _b: usize) -> usize {
        unreachable!("variety has no join")
    }
    fn add(&self, _a: usize, _b: usize) -> usize {
        unreachable!("variety has no addition")
    }
    fn zero(&self) -> usize {
        unreachable!("variety has no zero")
    }
}

/// Turns an abstract algebra into a presented [`FinAlgebra`]. Returns the
/// algebra and the bijection from abstract elements to its element indices.
pub(crate) fn build(tag: VarietyTag, s: &impl Structure) -> Result<(FinAlgebra, Vec<usize>)> {
    let n = s.len();
    limits::check_carrier(n)?;
    match tag {
        VarietyTag::Ba => {
            let z = s.zero();
            let atoms: Vec<usize> =
                (0..n).filter(|&x| x != z && (0..n).all(|y| y == z || y == x || !s.leq(y, x))).collect();
            if atoms.len() >= usize::BITS as usize - 1 || n != 1 << atoms.len() {
                return Err(Error::invalid("carrier is not a boolean algebra"));
            }
            let encode: Vec<usize> = (0..n)
                .map(|x| atoms.iter().enumerate().filter(|(_, &p)| s.leq(p, x)).map(|(i, _)| 1 << i).sum())
                .collect();
            check_bijective(&encode, n)?;
            Ok((FinAlgebra::boolean(atoms.len())?, encode))
        }
        VarietyTag::Dl01 => {
            let z = s.zero();
            let jis: Vec<usize> = (0..n)
                .filter(|&x| x != z && (0..n).filter(|&y| y != x && s.leq(y, x)).fold(z, |a, y| s.join(a, y)) != x)
                .collect();
            let ji = Poset::from_fn(jis.len(), |i, j| s.leq(jis[i], jis[j]));
            let alg = FinAlgebra::distributive_from(ji)?;
            let encode: Vec<usize> = (0..n)
                .map(|x| {
                    let mut d = FixedBitSet::with_capacity(jis.len());
                    d.extend((0..jis.len()).filter(|&t| s.leq(jis[t], x)));
                    alg.downset_index(&d).ok_or_else(|| Error::invalid("carrier is not a distributive lattice"))
                })
                .collect::<Result<_>>()?;
            check_bijective(&encode, n)?;
            if alg.size() != n {
                return Err(Error::invalid("carrier is not a distributive lattice"));
            }
            Ok((alg, encode))
        }
        VarietyTag::Jsl0 => Ok((FinAlgebra::semilattice_unchecked(n, |a, b| s.join(a, b), s.zero()), (0..n).collect())),
        VarietyTag::Z2Vect => {
            let mut coords: HashMap<usize, usize> = HashMap::from([(s.zero(), 0)]);
            let mut dim = 0;
            for x in 0..n {
                if coords.contains_key(&x) {
                    continue;
                }
                if dim >= usize::BITS as usize - 1 {
                    return Err(Error::invalid("carrier is not a vector space"));
                }
                let span: Vec<(usize, usize)> = coords.iter().map(|(&y, &c)| (y, c)).collect();
                for (y, c) in span {
                    coords.insert(s.add(y, x), c | 1 << dim);
                }
                dim += 1;
            }
            if coords.len() != n || n != 1 << dim {
                return Err(Error::invalid("carrier is not a vector space"));
            }
            let encode: Vec<usize> = (0..n).map(|x| coords[&x]).collect();
            check_bijective(&encode, n)?;
            Ok((FinAlgebra::vector_space(dim)?, encode))
        }
        VarietyTag::Set => Ok((FinAlgebra::set(n)?, (0..n).collect())),
        VarietyTag::Pos => Ok((FinAlgebra::poset_unchecked(Poset::from_fn(n, |a, b| s.leq(a, b))), (0..n).collect())),
    }
}

fn check_bijective(encode: &[usize], n: usize) -> Result<()> {
    let mut seen = FixedBitSet::with_capacity(n);
    for &e in encode {
        if e >= n || seen.put(e) {
            return Err(Error::invalid("presentation does not match the carrier"));
        }
    }
    Ok(())
}
