//! Graphviz renderings of automata and Cayley graphs.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automata::{CCoalgebra, DAlgebra};
use crate::dmonoid::SigmaMonoid;
use crate::lang::{Alphabet, Dfa};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Edges grouped by endpoints, letters joined by commas.
fn graph(
    name: &str,
    alphabet: &Alphabet,
    nodes: impl Iterator<Item = (usize, String, bool)>,
    initial: Option<usize>,
    step: impl Fn(usize, usize) -> usize,
) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
    let mut ids = Vec::new();
    for (q, label, accepting) in nodes {
        let shape = if accepting { "doublecircle" } else { "circle" };
        writeln!(out, "  q{q} [label=\"{}\", shape={shape}];", escape(&label)).unwrap();
        ids.push(q);
    }
    if let Some(i) = initial {
        writeln!(out, "  start [shape=point];\n  start -> q{i};").unwrap();
    }
    for &q in &ids {
        let mut edges: BTreeMap<usize, Vec<char>> = BTreeMap::new();
        for a in 0..alphabet.len() {
            edges.entry(step(q, a)).or_default().push(alphabet.symbol(a));
        }
        for (t, letters) in edges {
            let label: Vec<String> = letters.iter().map(char::to_string).collect();
            writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", escape(&label.join(","))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn dfa_dot(d: &Dfa) -> String {
    let nodes = (0..d.states()).map(|q| (q, q.to_string(), d.is_final(q)));
    graph("dfa", d.alphabet(), nodes, Some(d.initial()), |q, a| d.step(q, a))
}

/// States are named by their labels when present, otherwise by element.
pub fn coalgebra_dot(c: &CCoalgebra) -> String {
    let labels = c.labels();
    let nodes = c.carrier().elements().map(|q| {
        let name = labels.map_or_else(|| c.carrier().element_label(q), |l| l.label(q).to_string());
        (q, name, c.accepting(q))
    });
    graph("coalgebra", c.alphabet(), nodes, None, |q, a| c.gamma(a).apply(q))
}

pub fn dalgebra_dot(a: &DAlgebra) -> String {
    let nodes = a.carrier().elements().map(|x| (x, a.carrier().element_label(x), false));
    graph("algebra", a.alphabet(), nodes, Some(a.init()), |x, l| a.alpha(l).apply(x))
}

/// The right Cayley graph: `x → x∘gen(a)`.
pub fn cayley_dot(m: &SigmaMonoid) -> String {
    let nodes = m.carrier().elements().map(|x| (x, m.carrier().element_label(x), false));
    graph("cayley", m.alphabet(), nodes, Some(m.unit()), |x, a| m.mult(x, m.gen(a)))
}
