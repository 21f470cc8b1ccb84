use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use regvar::automata::{coalgebra_to_dalgebra, generate_subcoalgebra, rqc_closure, CCoalgebra};
use regvar::dmonoid::{quotient_leq, subdirect_product, SigmaMonoid};
use regvar::duality::{dual_object, DualityTag};
use regvar::eilenberg::{monoid_roundtrip, piece_to_monoid, roundtrip_check, LocalVarietyPiece};
use regvar::lang::parse_regex;
use regvar::{dot, limits, Alphabet, Error, FinAlgebra, LanguageId};

/// Regular languages, their finite local varieties and the dual monoids.
#[derive(Parser)]
#[command(name = "regvar", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse an expression and print it back with its alphabet
    Parse(Common),
    /// Minimal DFA of an expression
    MinDfa(Common),
    /// Left or right derivative of a language by a word
    Derive(Common),
    /// Residuals of a language: left, right or two-sided (--side both)
    Residuals(Common),
    /// Least subcoalgebra containing the languages (right-derivative closed with --rqc)
    Closure(Common),
    /// Dual of a closure as an automaton with initial element, or of an algebra given with --input
    Dualize(Common),
    /// Monoid of the right-derivative closed piece generated by the languages
    Monoid(Common),
    /// Subdirect product of the monoids of each expression and each --input monoid
    Subdirect(Common),
    /// Quotient order between two monoids
    Leq(Common),
    /// Round trip between a piece and its monoid, in both directions
    VerifyEilenberg(Common),
    /// DOT export of a DFA, closure, dual automaton or monoid
    ExportDot(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Expression; repeat to give several generators
    #[arg(long = "regex", visible_alias = "gens")]
    regex: Vec<String>,
    /// Alphabet letters; defaults to the letters used in the expressions
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_enum, default_value_t = Side::Left)]
    side: Side,
    /// ba, dl, jsl or z2 (set and pos name the same pairs)
    #[arg(long, default_value = "ba")]
    variety: String,
    /// Close under right derivatives too
    #[arg(long)]
    rqc: bool,
    /// JSON file holding an algebra (dualize) or a monoid (subdirect, leq)
    #[arg(long)]
    input: Vec<PathBuf>,
    /// File with one instance per line, generators separated by whitespace
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Number of random instances to verify
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// For export-dot: dfa, closure, dual or cayley
    #[arg(long, default_value = "dfa")]
    what: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long)]
    max_carrier: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Side {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    /// exit code 1
    Verification(Value),
    /// exit code 2
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Counterexample { .. } | Error::NotRqcClosed(_) => Failure::Verification(json!({ "error": e.to_string() })),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

impl Common {
    fn alphabet(&self) -> Result<Alphabet, Failure> {
        if let Some(a) = &self.alphabet {
            return Ok(Alphabet::parse(a)?);
        }
        let letters: BTreeSet<char> =
            self.regex.iter().flat_map(|r| r.chars()).filter(|c| !"#@|*() ".contains(*c)).collect();
        if letters.is_empty() {
            return Err(usage("no letters in the expressions; pass --alphabet"));
        }
        Ok(Alphabet::new(letters)?)
    }

    fn languages(&self) -> Result<Vec<LanguageId>, Failure> {
        if self.regex.is_empty() {
            return Err(usage("at least one --regex is required"));
        }
        let s = self.alphabet()?;
        Ok(self.regex.iter().map(|r| LanguageId::parse(r, &s)).collect::<regvar::Result<_>>()?)
    }

    fn language(&self) -> Result<LanguageId, Failure> {
        match self.languages()?.as_slice() {
            [l] => Ok(l.clone()),
            _ => Err(usage("exactly one --regex is required")),
        }
    }

    fn duality(&self) -> Result<DualityTag, Failure> {
        Ok(DualityTag::from_str(&self.variety)?)
    }

    fn closure(&self) -> Result<CCoalgebra, Failure> {
        let tag = self.duality()?.c_side();
        let gens = self.languages()?;
        Ok(if self.rqc { rqc_closure(tag, &gens)? } else { generate_subcoalgebra(tag, &gens)? })
    }

    fn piece(&self, gens: &[LanguageId]) -> Result<LocalVarietyPiece, Failure> {
        Ok(LocalVarietyPiece::generated(self.duality()?.c_side(), gens)?)
    }

    /// Monoids from --input files, then one per expression.
    fn monoids(&self) -> Result<Vec<SigmaMonoid>, Failure> {
        let d = self.duality()?;
        let mut out = Vec::new();
        for path in &self.input {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            out.push(serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?);
        }
        if !self.regex.is_empty() {
            for l in self.languages()? {
                out.push(piece_to_monoid(d, &self.piece(&[l])?)?);
            }
        }
        Ok(out)
    }
}

fn parse(c: &Common) -> Outcome {
    let s = c.alphabet()?;
    let parsed: Vec<String> = c.regex.iter().map(|r| parse_regex(r, &s).map(|re| re.to_string())).collect::<regvar::Result<_>>()?;
    Ok(to_json(&json!({ "alphabet": s, "regex": parsed })))
}

fn min_dfa(c: &Common) -> Outcome {
    let l = c.language()?;
    Ok(match c.format {
        Format::Json => to_json(l.dfa()),
        Format::Dot => dot::dfa_dot(l.dfa()),
    })
}

fn derive(c: &Common) -> Outcome {
    let l = c.language()?;
    let w = c.word.as_deref().ok_or_else(|| usage("--word is required"))?;
    let r = match c.side {
        Side::Left => l.left_derivative(w)?,
        Side::Right => l.right_derivative(w)?,
        Side::Both => return Err(usage("--side must be left or right")),
    };
    Ok(to_json(&json!({ "result": r.to_string() })))
}

fn residuals(c: &Common) -> Outcome {
    let l = c.language()?;
    let all = match c.side {
        Side::Left => l.residuals(),
        Side::Right => l.reversal().residuals().iter().map(LanguageId::reversal).collect(),
        Side::Both => l.two_sided_residuals(),
    };
    let names: Vec<String> = all.iter().map(ToString::to_string).collect();
    Ok(to_json(&json!({ "count": names.len(), "residuals": names })))
}

fn closure(c: &Common) -> Outcome {
    let q = c.closure()?;
    Ok(match c.format {
        Format::Json => to_json(&q),
        Format::Dot => dot::coalgebra_dot(&q),
    })
}

fn dualize(c: &Common) -> Outcome {
    let d = c.duality()?;
    if let [path] = c.input.as_slice() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let x: FinAlgebra = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return Ok(to_json(&dual_object(d, &x)?));
    }
    let a = coalgebra_to_dalgebra(d, &c.closure()?)?;
    Ok(match c.format {
        Format::Json => to_json(&a),
        Format::Dot => dot::dalgebra_dot(&a),
    })
}

#[derive(Serialize)]
struct MonoidReport<'a> {
    size: usize,
    #[serde(flatten)]
    monoid: &'a SigmaMonoid,
}

fn monoid_output(c: &Common, m: &SigmaMonoid) -> String {
    match c.format {
        Format::Json => to_json(&MonoidReport { size: m.size(), monoid: m }),
        Format::Dot => dot::cayley_dot(m),
    }
}

fn monoid(c: &Common) -> Outcome {
    let m = piece_to_monoid(c.duality()?, &c.piece(&c.languages()?)?)?;
    Ok(monoid_output(c, &m))
}

fn subdirect(c: &Common) -> Outcome {
    let ms = c.monoids()?;
    let (first, rest) = ms.split_first().ok_or_else(|| usage("give monoids with --input or --regex"))?;
    let m = rest.iter().try_fold(first.clone(), |acc, m| subdirect_product(&acc, m))?;
    Ok(monoid_output(c, &m))
}

fn leq(c: &Common) -> Outcome {
    let ms = c.monoids()?;
    let [m1, m2] = ms.as_slice() else {
        return Err(usage("leq needs exactly two monoids"));
    };
    let (le, ge) = (quotient_leq(m1, m2)?, quotient_leq(m2, m1)?);
    Ok(to_json(&json!({ "leq": le, "geq": ge, "isomorphic": le && ge })))
}

#[derive(Serialize)]
struct Verification {
    generators: Vec<String>,
    #[serde(flatten)]
    result: Value,
}

fn verify_one(c: &Common, gens: &[LanguageId]) -> Result<(bool, Value), Failure> {
    let d = c.duality()?;
    let p = c.piece(gens)?;
    let m = piece_to_monoid(d, &p)?;
    match roundtrip_check(d, &p) {
        Ok(w) if w.verify() => {}
        Ok(_) => return Ok((false, json!({ "roundtrip": { "counterexample": "witness is not an isomorphism" } }))),
        Err(Error::Counterexample { language, .. }) => return Ok((false, json!({ "roundtrip": { "counterexample": language } }))),
        Err(e) => return Err(e.into()),
    }
    if monoid_roundtrip(d, &m)?.is_none() {
        return Ok((false, json!({ "roundtrip": { "counterexample": "monoid round trip is not an isomorphism" } })));
    }
    Ok((true, json!({ "roundtrip": "ok", "piece_size": p.size(), "monoid_size": m.size() })))
}

fn verify_eilenberg(c: &Common) -> Result<String, Failure> {
    let batch: Option<Vec<Vec<String>>> = if let Some(path) = &c.batch {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        Some(text.lines().map(|l| l.split_whitespace().map(String::from).collect::<Vec<_>>()).filter(|g| !g.is_empty()).collect())
    } else if let Some(n) = c.random {
        let s = match &c.alphabet {
            Some(a) => Alphabet::parse(a)?,
            None => Alphabet::parse("ab")?,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        Some(
            (0..n)
                .map(|_| {
                    let k = rng.gen_range(1..=2);
                    (0..k).map(|_| regvar::sample::random_language(&mut rng, &s, 8, 5).1.to_string()).collect()
                })
                .collect(),
        )
    } else {
        None
    };
    let Some(instances) = batch else {
        let (ok, v) = verify_one(c, &c.languages()?)?;
        let out = to_json(&v);
        return if ok { Ok(out) } else { Err(Failure::Verification(v)) };
    };
    let fixed = c.alphabet.clone().or_else(|| c.random.map(|_| "ab".to_string()));
    let results: Vec<Result<(bool, Value), Failure>> = instances
        .par_iter()
        .map(|gens| {
            let sub = Common { regex: gens.clone(), alphabet: fixed.clone(), ..c.clone() };
            limits::with_max_carrier(limits::max_carrier(), || verify_one(&sub, &sub.languages()?))
        })
        .collect();
    let mut all_ok = true;
    let mut reports = Vec::new();
    for (gens, r) in instances.into_iter().zip(results) {
        let (ok, v) = match r {
            Ok(x) => x,
            Err(Failure::Usage(e)) => (false, json!({ "error": e })),
            Err(Failure::Verification(v)) => (false, v),
        };
        all_ok &= ok;
        reports.push(Verification { generators: gens, result: v });
    }
    let out = to_json(&reports);
    if all_ok {
        Ok(out)
    } else {
        Err(Failure::Verification(serde_json::from_str(&out).expect("valid json")))
    }
}

fn export_dot(c: &Common) -> Outcome {
    let c = &Common { format: Format::Dot, ..c.clone() };
    match c.what.as_str() {
        "dfa" => min_dfa(c),
        "closure" => closure(c),
        "dual" => dualize(c),
        "cayley" | "monoid" => monoid(c),
        other => Err(usage(format!("unknown --what {other:?}; expected dfa, closure, dual or cayley"))),
    }
}

fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    match &c.out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(verb: &Verb) -> Result<(), Failure> {
    let (c, f): (&Common, fn(&Common) -> Outcome) = match verb {
        Verb::Parse(c) => (c, parse),
        Verb::MinDfa(c) => (c, min_dfa),
        Verb::Derive(c) => (c, derive),
        Verb::Residuals(c) => (c, residuals),
        Verb::Closure(c) => (c, closure),
        Verb::Dualize(c) => (c, dualize),
        Verb::Monoid(c) => (c, monoid),
        Verb::Subdirect(c) => (c, subdirect),
        Verb::Leq(c) => (c, leq),
        Verb::VerifyEilenberg(c) => (c, verify_eilenberg),
        Verb::ExportDot(c) => (c, export_dot),
    };
    if let Some(n) = c.max_states {
        limits::set_max_states(n);
    }
    if let Some(n) = c.max_carrier {
        limits::set_max_carrier(n);
    }
    match f(c) {
        Ok(text) => emit(c, &text),
        Err(Failure::Verification(v)) => {
            emit(c, &to_json(&v))?;
            Err(Failure::Verification(v))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(_)) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", to_json(&json!({ "error": msg })));
            ExitCode::from(2)
        }
    }
}
