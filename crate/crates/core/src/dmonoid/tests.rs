use super::*;
use crate::automata::{coalgebra_to_dalgebra, rqc_closure};
use crate::duality::DualityTag;
use crate::LanguageId;

fn alphabet(s: &str) -> Alphabet {
    Alphabet::parse(s).unwrap()
}

fn set_monoid(re: &str, sigma: &str) -> SigmaMonoid {
    let l = LanguageId::parse(re, &alphabet(sigma)).unwrap();
    transition_monoid(&DAlgebra::from_dfa(l.dfa()).unwrap()).unwrap()
}

fn word(m: &SigmaMonoid, w: &str) -> usize {
    m.eval_indices(&m.alphabet().encode(w).unwrap())
}

#[test]
fn syntactic_monoid_of_ab_star() {
    let m = set_monoid("(ab)*", "ab");
    assert_eq!(m.size(), 6);
    assert!(validate_monoid(&m) && validate_monoid_exhaustive(&m));
    let e = word(&m, "ab");
    assert_eq!(m.mult(e, e), e);
    assert_ne!(e, m.unit());
    assert_eq!(word(&m, "aba"), word(&m, "a"));
    assert_eq!(word(&m, "bab"), word(&m, "b"));
    let zero = word(&m, "aa");
    assert_eq!(word(&m, "bb"), zero);
    assert!((0..6).all(|x| m.mult(x, zero) == zero && m.mult(zero, x) == zero));
    let fe = FreeElement::parse(VarietyTag::Set, m.alphabet(), &["ab"]).unwrap();
    assert_eq!(eval_word(&m, &fe).unwrap(), e);
    assert_eq!(eval_word(&m, &FreeElement::unit(VarietyTag::Set).unwrap()).unwrap(), m.unit());
}

#[test]
fn small_examples() {
    assert_eq!(set_monoid("(a|b)*", "ab").size(), 1);
    let m = set_monoid("(aa)*", "a");
    assert_eq!(m.size(), 2);
    let g = m.gen(0);
    assert_eq!(m.mult(g, g), m.unit());
}

#[test]
fn unreachable_algebra_is_rejected() {
    let carrier = Arc::new(FinAlgebra::set(2).unwrap());
    let a = DAlgebra::new(carrier, alphabet("a"), vec![vec![0, 1]], 0).unwrap();
    assert!(matches!(transition_monoid(&a), Err(Error::NotReachable)));
}

#[test]
fn subdirect_of_cycles() {
    let m2 = set_monoid("(aa)*", "a");
    let m3 = set_monoid("(aaa)*", "a");
    let s = subdirect_product(&m2, &m3).unwrap();
    assert_eq!(s.size(), 6);
    assert!(validate_monoid(&s));
    let six = set_monoid("(aaaaaa)*", "a");
    assert!(monoid_iso(&s, &six).unwrap().is_some());
    assert!(quotient_leq(&m2, &s).unwrap() && quotient_leq(&m3, &s).unwrap());
    assert!(!quotient_leq(&s, &m2).unwrap());
}

#[test]
fn quotient_order_examples() {
    let m = set_monoid("(ab)*", "ab");
    let t = SigmaMonoid::trivial(VarietyTag::Set, alphabet("ab")).unwrap();
    assert!(quotient_leq(&m, &m).unwrap());
    assert!(quotient_leq(&t, &m).unwrap());
    assert!(!quotient_leq(&m, &t).unwrap());
    assert!(monoid_iso(&subdirect_product(&m, &m).unwrap(), &m).unwrap().is_some());
    assert!(monoid_iso(&subdirect_product(&m, &t).unwrap(), &m).unwrap().is_some());
    assert!(pseudovariety_member(&t, std::slice::from_ref(&m)).unwrap());
    assert!(pseudovariety_member(&m, std::slice::from_ref(&m)).unwrap());
    assert!(!pseudovariety_member(&m, std::slice::from_ref(&t)).unwrap());
    let other = set_monoid("(aa)*", "a");
    assert!(matches!(quotient_leq(&m, &other), Err(Error::AlphabetMismatch)));
}

#[test]
fn broken_tables_fail_validation() {
    let carrier = Arc::new(FinAlgebra::set(3).unwrap());
    let mult = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 1, 2]];
    let m = SigmaMonoid::new(carrier, alphabet("a"), 0, mult, vec![1]).unwrap();
    assert!(!validate_monoid(&m) && !validate_monoid_exhaustive(&m));

    let carrier = Arc::new(FinAlgebra::chain(3));
    let mult = vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 1, 2]];
    let m = SigmaMonoid::new(carrier, alphabet("a"), 2, mult, vec![1]).unwrap();
    assert!(!validate_monoid(&m) && !validate_monoid_exhaustive(&m));
}

#[test]
fn semilattice_monoid_evaluates_joins() {
    let s = alphabet("ab");
    let piece = rqc_closure(VarietyTag::Jsl0, &[LanguageId::parse("(ab)*", &s).unwrap()]).unwrap();
    let a = coalgebra_to_dalgebra(DualityTag::JslSelf, &piece).unwrap();
    let (a, _) = a.reachable_part().unwrap();
    let m = transition_monoid(&a).unwrap();
    assert!(validate_monoid(&m) && validate_monoid_exhaustive(&m));
    let x = FreeElement::parse(VarietyTag::Jsl0, &s, &["", "a"]).unwrap();
    let want = m.carrier().join(m.unit(), word(&m, "a")).unwrap();
    assert_eq!(eval_word(&m, &x).unwrap(), want);
}

#[test]
fn json_roundtrip() {
    let m = set_monoid("(aa)*", "a");
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(
        text,
        r#"{"tag":"SET","alphabet":["a"],"carrier":{"tag":"SET","size":2},"unit":0,"mult":[[0,1],[1,0]],"gen":{"a":1}}"#
    );
    assert_eq!(serde_json::from_str::<SigmaMonoid>(&text).unwrap(), m);
    let bare = r#"{"tag":"SET","carrier":{"tag":"SET","size":2},"unit":0,"mult":[[0,1],[1,0]],"gen":{"a":1}}"#;
    assert_eq!(serde_json::from_str::<SigmaMonoid>(bare).unwrap(), m);
    assert!(serde_json::from_str::<SigmaMonoid>(&text.replace("[1,0]]", "[1,2]]")).is_err());
}

#[test]
fn opposite_reverses_words() {
    let m = set_monoid("a(a|b)*", "ab");
    let op = m.opposite();
    assert_eq!(op.eval_indices(&[0, 1]), m.eval_indices(&[1, 0]));
    assert!(validate_monoid(&op));
}
