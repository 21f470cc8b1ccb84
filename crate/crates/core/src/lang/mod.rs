//! Regular-language engine: regex syntax, derivative automata, minimization,
//! and left and right derivatives.

mod alphabet;
mod dfa;
mod regex;
mod term;

pub use alphabet::Alphabet;
pub use dfa::{Dfa, LanguageId};
pub use regex::{parse_regex, Regex};

pub fn compile(re: &Regex, alphabet: &Alphabet) -> crate::Result<LanguageId> {
    LanguageId::compile(re, alphabet)
}
