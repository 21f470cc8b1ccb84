use std::collections::BTreeSet;
use std::fmt;

use super::Alphabet;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(char),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(l: Regex, r: Regex) -> Regex {
        Regex::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Regex, r: Regex) -> Regex {
        Regex::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Box::new(r))
    }

    /// Every literal occurring in the tree, in first-occurrence order.
    pub fn symbols(&self) -> Vec<char> {
        fn walk(r: &Regex, out: &mut Vec<char>) {
            match r {
                Regex::Empty | Regex::Epsilon => {}
                Regex::Literal(c) => {
                    if !out.contains(c) {
                        out.push(*c)
                    }
                }
                Regex::Union(l, r) | Regex::Concat(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Regex::Star(i) => walk(i, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match self.symbols().into_iter().find(|&c| alphabet.index_of(c).is_none()) {
            Some(c) => Err(Error::UnknownSymbol(c)),
            None => Ok(()),
        }
    }

    /// Direct backtracking-free membership test on the syntax tree. Independent
    /// of any automaton construction, so it serves as a reference oracle.
    pub fn matches(&self, word: &str) -> bool {
        let w: Vec<char> = word.chars().collect();
        self.ends(&w, 0).contains(&w.len())
    }

    fn ends(&self, w: &[char], start: usize) -> BTreeSet<usize> {
        match self {
            Regex::Empty => BTreeSet::new(),
            Regex::Epsilon => BTreeSet::from([start]),
            Regex::Literal(c) => {
                if w.get(start) == Some(c) {
                    BTreeSet::from([start + 1])
                } else {
                    BTreeSet::new()
                }
            }
            Regex::Union(l, r) => {
                let mut s = l.ends(w, start);
                s.extend(r.ends(w, start));
                s
            }
            Regex::Concat(l, r) => l.ends(w, start).into_iter().flat_map(|m| r.ends(w, m)).collect(),
            Regex::Star(inner) => {
                let mut seen = BTreeSet::from([start]);
                let mut todo = vec![start];
                while let Some(p) = todo.pop() {
                    for q in inner.ends(w, p) {
                        if seen.insert(q) {
                            todo.push(q);
                        }
                    }
                }
                seen
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, r: &Regex, min: u8) -> fmt::Result {
            if r.precedence() < min {
                write!(f, "({r})")
            } else {
                write!(f, "{r}")
            }
        }
        match self {
            Regex::Empty => f.write_str("#"),
            Regex::Epsilon => f.write_str("@"),
            Regex::Literal(c) => write!(f, "{c}"),
            Regex::Union(l, r) => {
                child(f, l, 0)?;
                f.write_str("|")?;
                child(f, r, 0)
            }
            Regex::Concat(l, r) => {
                child(f, l, 1)?;
                child(f, r, 1)
            }
            Regex::Star(i) => {
                child(f, i, 2)?;
                f.write_str("*")
            }
        }
    }
}

/// Parses `text` against `alphabet`. Whitespace between tokens is ignored.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex> {
    let tokens: Vec<(usize, char)> = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { tokens, pos: 0, end: text.chars().count(), alphabet };
    let r = p.union()?;
    if let Some(&(at, c)) = p.tokens.get(p.pos) {
        return Err(Error::Syntax { position: at, message: format!("unexpected {c:?}") });
    }
    Ok(r)
}

struct Parser<'a> {
    tokens: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn union(&mut self) -> Result<Regex> {
        let mut r = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            r = Regex::union(r, self.concat()?);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut r: Option<Regex> = None;
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let next = self.starred()?;
            r = Some(match r {
                None => next,
                Some(l) => Regex::concat(l, next),
            });
        }
        r.ok_or_else(|| Error::Syntax { position: self.position(), message: "expected an expression".into() })
    }

    fn starred(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let position = self.position();
        let c = self.peek().ok_or(Error::Syntax { position, message: "unexpected end of input".into() })?;
        self.pos += 1;
        match c {
            '#' => Ok(Regex::Empty),
            '@' => Ok(Regex::Epsilon),
            '(' => {
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::Syntax { position: self.position(), message: "expected ')'".into() });
                }
                self.pos += 1;
                Ok(r)
            }
            '*' | ')' | '|' => Err(Error::Syntax { position, message: format!("unexpected {c:?}") }),
            c if self.alphabet.index_of(c).is_some() => Ok(Regex::Literal(c)),
            c => Err(Error::UnknownSymbol(c)),
        }
    }
}
