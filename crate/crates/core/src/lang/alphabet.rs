use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub const RESERVED: &[char] = &['#', '@', '|', '*', '(', ')'];

/// An ordered, nonempty list of distinct single-character symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Arc<[char]>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if RESERVED.contains(&c) || c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidAlphabet(format!("{c:?} is reserved")));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("{c:?} occurs twice")));
            }
        }
        Ok(Alphabet(symbols.into()))
    }

    /// Parses an alphabet written as a run of characters, e.g. `"ab"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.chars())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn symbol(&self, i: usize) -> char {
        self.0[i]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.0.iter().position(|&s| s == c)
    }

    pub fn encode(&self, word: &str) -> Result<Vec<usize>> {
        word.chars().map(|c| self.index_of(c).ok_or(Error::UnknownSymbol(c))).collect()
    }

    pub fn decode(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.0[i]).collect()
    }

    /// All words of length at most `max_len`, shortlex ordered.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut start = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in start..end {
                for a in 0..self.len() {
                    let mut w = out[i].clone();
                    w.push(a);
                    out.push(w);
                }
            }
            start = end;
        }
        out
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.0.iter().collect::<String>())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.iter().collect::<String>())
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let mut symbols = Vec::with_capacity(raw.len());
        for s in raw {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => symbols.push(c),
                _ => return Err(serde::de::Error::custom(format!("symbol {s:?} is not one character"))),
            }
        }
        Alphabet::new(symbols).map_err(serde::de::Error::custom)
    }
}
