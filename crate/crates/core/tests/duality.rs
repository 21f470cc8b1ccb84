use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regvar::duality::{double_dual, dual_morphism, dual_object, DualityTag};
use regvar::sample::{random_algebra, random_morphism};
use regvar::variety::validate_morphism;
use regvar::{FinAlgebra, FinMorphism, VarietyTag};

fn algebra(rng: &mut ChaCha8Rng, d: DualityTag, tag: VarietyTag) -> Arc<FinAlgebra> {
    let bound = match tag {
        VarietyTag::Set => 4,
        VarietyTag::Pos => 6,
        _ => 16,
    };
    loop {
        let x = random_algebra(rng, tag, bound).unwrap();
        if dual_object(d, &x).is_ok_and(|dx| dx.size() <= 16) {
            return x.into_arc();
        }
    }
}

/// A random morphism out of `x` into a fresh random algebra.
fn morphism(rng: &mut ChaCha8Rng, d: DualityTag, tag: VarietyTag, x: &Arc<FinAlgebra>) -> (Arc<FinAlgebra>, FinMorphism) {
    loop {
        let y = algebra(rng, d, tag);
        if let Some(h) = random_morphism(rng, x, &y).unwrap() {
            return (y, h);
        }
    }
}

fn sides(i: usize) -> (DualityTag, VarietyTag) {
    let d = DualityTag::ALL[i / 2];
    (d, if i.is_multiple_of(2) { d.c_side() } else { d.d_side() })
}

#[test]
fn dual_objects_of_examples() {
    let ba = FinAlgebra::boolean(3).unwrap();
    assert_eq!(dual_object(DualityTag::BaSet, &ba).unwrap(), FinAlgebra::set(3).unwrap());
    assert_eq!(dual_object(DualityTag::BaSet, &FinAlgebra::set(2).unwrap()).unwrap(), FinAlgebra::boolean(2).unwrap());
    // a, b below c
    let vee = FinAlgebra::poset(&[vec![true, false, true], vec![false, true, true], vec![false, false, true]]).unwrap();
    let lattice = dual_object(DualityTag::Dl01Pos, &vee).unwrap();
    assert_eq!(lattice.size(), 5);
    assert!(double_dual(DualityTag::Dl01Pos, &vee).unwrap().verify());
    let z = FinAlgebra::vector_space(3).unwrap();
    assert_eq!(dual_object(DualityTag::Z2Self, &z).unwrap(), z);
    assert!(double_dual(DualityTag::Z2Self, &z).unwrap().verify());
    let chain = FinAlgebra::chain(4);
    assert_eq!(dual_object(DualityTag::JslSelf, &chain).unwrap().size(), 4);
}

#[test]
fn wrong_side_is_rejected() {
    assert!(dual_object(DualityTag::BaSet, &FinAlgebra::chain(2)).is_err());
    assert!(dual_object(DualityTag::Z2Self, &FinAlgebra::boolean(1).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contravariant_functor(seed in any::<u64>(), i in 0usize..8) {
        let (d, tag) = sides(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = algebra(&mut rng, d, tag);
        let (y, h) = morphism(&mut rng, d, tag, &x);
        let (_, g) = morphism(&mut rng, d, tag, &y);
        let dh = dual_morphism(d, &h).unwrap();
        let dg = dual_morphism(d, &g).unwrap();
        prop_assert!(validate_morphism(&dh).unwrap() && validate_morphism(&dg).unwrap());
        let dgh = dual_morphism(d, &g.after(&h).unwrap()).unwrap();
        prop_assert_eq!(dgh.map().to_vec(), dh.after(&dg).unwrap().map().to_vec());
        prop_assert!(dual_morphism(d, &FinMorphism::identity(x)).unwrap().is_identity());
    }

    #[test]
    fn double_dual_is_natural(seed in any::<u64>(), i in 0usize..8) {
        let (d, tag) = sides(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = algebra(&mut rng, d, tag);
        let (y, h) = morphism(&mut rng, d, tag, &x);
        let ex = double_dual(d, &x).unwrap();
        let ey = double_dual(d, &y).unwrap();
        prop_assert!(ex.verify() && ey.verify());
        let ddh = dual_morphism(d, &dual_morphism(d, &h).unwrap()).unwrap();
        for e in x.elements() {
            prop_assert_eq!(ey.backward.apply(ddh.apply(ex.forward.apply(e))), h.apply(e));
        }
    }

    #[test]
    fn epis_and_monos_are_exchanged(seed in any::<u64>(), i in 0usize..8) {
        let (d, tag) = sides(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = algebra(&mut rng, d, tag);
        let (_, h) = morphism(&mut rng, d, tag, &x);
        let (epi, mono) = regvar::variety::image_factorize(&h).unwrap();
        for f in [h, epi, mono] {
            let df = dual_morphism(d, &f).unwrap();
            prop_assert_eq!(f.is_surjective(), df.is_order_embedding());
            prop_assert_eq!(f.is_order_embedding(), df.is_surjective());
        }
    }
}
