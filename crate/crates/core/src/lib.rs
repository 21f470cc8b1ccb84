//! Regular languages, finite algebras of six locally finite varieties, their
//! finite dualities, and the correspondence between finite right-quotient
//! closed sets of languages and finite Σ-generated monoids over those varieties.

pub mod automata;
pub mod dmonoid;
pub mod dot;
pub mod duality;
pub mod eilenberg;
mod error;
pub mod lang;
pub mod limits;
pub mod sample;
pub mod variety;

pub use error::{Error, Result};
pub use lang::{Alphabet, Dfa, LanguageId, Regex};

pub use variety::{FinAlgebra, FinMorphism, VarietyTag};
