//! Regular expressions over symbol indices, kept in a normal form modulo
//! associativity, commutativity and idempotence of union plus the unit and
//! zero laws. Derivatives of a normalized term have finitely many normal forms.

use std::collections::HashMap;
use std::rc::Rc;

use super::{Alphabet, Dfa, Regex};
use crate::{limits, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Term {
    Empty,
    Eps,
    Sym(usize),
    Cat(Rc<Term>, Rc<Term>),
    Star(Rc<Term>),
    Alt(Rc<[Term]>),
}

impl Term {
    pub fn from_regex(r: &Regex, alphabet: &Alphabet) -> Result<Term> {
        Ok(match r {
            Regex::Empty => Term::Empty,
            Regex::Epsilon => Term::Eps,
            Regex::Literal(c) => Term::Sym(alphabet.index_of(*c).ok_or(Error::UnknownSymbol(*c))?),
            Regex::Union(l, r) => alt(Term::from_regex(l, alphabet)?, Term::from_regex(r, alphabet)?),
            Regex::Concat(l, r) => cat(Term::from_regex(l, alphabet)?, Term::from_regex(r, alphabet)?),
            Regex::Star(i) => star(Term::from_regex(i, alphabet)?),
        })
    }

    pub fn to_regex(&self, alphabet: &Alphabet) -> Regex {
        match self {
            Term::Empty => Regex::Empty,
            Term::Eps => Regex::Epsilon,
            Term::Sym(a) => Regex::Literal(alphabet.symbol(*a)),
            Term::Cat(l, r) => Regex::concat(l.to_regex(alphabet), r.to_regex(alphabet)),
            Term::Star(i) => Regex::star(i.to_regex(alphabet)),
            Term::Alt(xs) => {
                // ε first reads better: "@|a(ba)*b" rather than "a(ba)*b|@"
                let mut parts: Vec<&Term> = xs.iter().collect();
                parts.sort_by_key(|t| **t != Term::Eps);
                let mut it = parts.into_iter().map(|t| t.to_regex(alphabet));
                let first = it.next().unwrap_or(Regex::Empty);
                it.fold(first, Regex::union)
            }
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Term::Empty | Term::Sym(_) => false,
            Term::Eps | Term::Star(_) => true,
            Term::Cat(l, r) => l.nullable() && r.nullable(),
            Term::Alt(xs) => xs.iter().any(Term::nullable),
        }
    }

    pub fn derive(&self, a: usize) -> Term {
        match self {
            Term::Empty | Term::Eps => Term::Empty,
            Term::Sym(b) => {
                if *b == a {
                    Term::Eps
                } else {
                    Term::Empty
                }
            }
            Term::Cat(l, r) => {
                let head = cat(l.derive(a), (**r).clone());
                if l.nullable() {
                    alt(head, r.derive(a))
                } else {
                    head
                }
            }
            Term::Star(i) => cat(i.derive(a), self.clone()),
            Term::Alt(xs) => xs.iter().map(|x| x.derive(a)).fold(Term::Empty, alt),
        }
    }
}

pub(crate) fn alt(l: Term, r: Term) -> Term {
    let mut parts = Vec::new();
    for t in [l, r] {
        match t {
            Term::Empty => {}
            Term::Alt(xs) => parts.extend(xs.iter().cloned()),
            t => parts.push(t),
        }
    }
    parts.sort();
    parts.dedup();
    match parts.len() {
        0 => Term::Empty,
        1 => parts.pop().unwrap(),
        _ => Term::Alt(parts.into()),
    }
}

pub(crate) fn cat(l: Term, r: Term) -> Term {
    match (l, r) {
        (Term::Empty, _) | (_, Term::Empty) => Term::Empty,
        (Term::Eps, t) | (t, Term::Eps) => t,
        (Term::Cat(a, b), r) => cat((*a).clone(), cat((*b).clone(), r)),
        (l, r) => Term::Cat(Rc::new(l), Rc::new(r)),
    }
}

pub(crate) fn star(t: Term) -> Term {
    match t {
        Term::Empty | Term::Eps => Term::Eps,
        s @ Term::Star(_) => s,
        t => Term::Star(Rc::new(t)),
    }
}

/// Builds the derivative automaton of `t`: states are the distinct normalized
/// derivatives reachable from `t`, explored breadth first.
pub(crate) fn derivative_automaton(t: Term, alphabet: &Alphabet) -> Result<Dfa> {
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut states = vec![t.clone()];
    index.insert(t, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for a in 0..alphabet.len() {
            let d = states[i].derive(a);
            let next = match index.get(&d) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    limits::check_states(j + 1)?;
                    index.insert(d.clone(), j);
                    states.push(d);
                    j
                }
            };
            row.push(next);
        }
        delta.push(row);
        i += 1;
    }
    let finals = states.iter().map(Term::nullable).collect();
    Dfa::new(alphabet.clone(), 0, finals, delta)
}
