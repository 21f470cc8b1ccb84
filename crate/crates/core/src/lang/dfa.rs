use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::term::{self, Term};
use super::{parse_regex, Alphabet, Regex};
use crate::{limits, Error, Result};

/// A complete deterministic automaton. `delta` is stored row-major:
/// the successor of state `q` under symbol index `a` is `delta[q * k + a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DfaJson", into = "DfaJson")]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    finals: Vec<usize>,
    delta: Vec<Vec<usize>>,
}

impl TryFrom<DfaJson> for Dfa {
    type Error = Error;

    fn try_from(j: DfaJson) -> Result<Dfa> {
        if j.delta.len() != j.states {
            return Err(Error::invalid("delta must have one row per state"));
        }
        let mut finals = vec![false; j.states];
        for f in j.finals {
            *finals.get_mut(f).ok_or_else(|| Error::invalid(format!("final state {f} out of range")))? = true;
        }
        Dfa::new(j.alphabet, j.initial, finals, j.delta)
    }
}

impl From<Dfa> for DfaJson {
    fn from(d: Dfa) -> DfaJson {
        DfaJson {
            states: d.states(),
            initial: d.initial,
            finals: (0..d.states()).filter(|&q| d.finals[q]).collect(),
            delta: (0..d.states()).map(|q| d.row(q).to_vec()).collect(),
            alphabet: d.alphabet,
        }
    }
}

impl Dfa {
    pub fn new(alphabet: Alphabet, initial: usize, finals: Vec<bool>, delta: Vec<Vec<usize>>) -> Result<Dfa> {
        let n = finals.len();
        let k = alphabet.len();
        limits::check_states(n)?;
        if initial >= n {
            return Err(Error::invalid(format!("initial state {initial} out of range")));
        }
        if delta.len() != n {
            return Err(Error::invalid("delta must have one row per state"));
        }
        let mut flat = Vec::with_capacity(n * k);
        for (q, row) in delta.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::invalid(format!("delta row {q} has {} entries, expected {k}", row.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::invalid(format!("transition target {t} out of range")));
            }
            flat.extend(row);
        }
        Ok(Dfa { alphabet, initial, finals, delta: flat })
    }

    pub(crate) fn from_flat(alphabet: Alphabet, initial: usize, finals: Vec<bool>, delta: Vec<usize>) -> Dfa {
        debug_assert_eq!(delta.len(), finals.len() * alphabet.len());
        Dfa { alphabet, initial, finals, delta }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn row(&self, q: usize) -> &[usize] {
        let k = self.alphabet.len();
        &self.delta[q * k..(q + 1) * k]
    }

    pub fn run(&self, from: usize, word: &[usize]) -> usize {
        word.iter().fold(from, |q, &a| self.step(q, a))
    }

    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        self.finals[self.run(self.initial, word)]
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        Ok(self.accepts_indices(&self.alphabet.encode(word)?))
    }

    pub fn with_initial(&self, initial: usize) -> Dfa {
        Dfa { initial, ..self.clone() }
    }

    pub fn with_finals(&self, finals: Vec<bool>) -> Dfa {
        assert_eq!(finals.len(), self.states());
        Dfa { finals, ..self.clone() }
    }

    /// Language equivalence of the initial states by union-find over pairs,
    /// without minimizing either automaton.
    pub fn bisimilar(&self, other: &Dfa) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let off = self.states();
        let mut parent: Vec<usize> = (0..off + other.states()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let fin = |x: usize| if x < off { self.finals[x] } else { other.finals[x - off] };
        let step = |x: usize, a: usize| if x < off { self.step(x, a) } else { off + other.step(x - off, a) };
        let mut todo = vec![(self.initial, off + other.initial)];
        let (r1, r2) = (find(&mut parent, self.initial), find(&mut parent, off + other.initial));
        parent[r1] = r2;
        while let Some((x, y)) = todo.pop() {
            if fin(x) != fin(y) {
                return false;
            }
            for a in 0..self.alphabet.len() {
                let (x2, y2) = (step(x, a), step(y, a));
                let (rx, ry) = (find(&mut parent, x2), find(&mut parent, y2));
                if rx != ry {
                    parent[rx] = ry;
                    todo.push((x2, y2));
                }
            }
        }
        true
    }

    fn reachable_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in self.row(order[i]) {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal automaton in canonical form: unreachable states dropped,
    /// equivalent states merged by partition refinement, then states renumbered
    /// in breadth-first order from the initial state following alphabet order.
    pub fn minimize(&self) -> LanguageId {
        let k = self.alphabet.len();
        let order = self.reachable_order();
        let mut local = vec![usize::MAX; self.states()];
        for (i, &q) in order.iter().enumerate() {
            local[q] = i;
        }
        let n = order.len();
        let mut delta = Vec::with_capacity(n * k);
        for &q in &order {
            delta.extend(self.row(q).iter().map(|&t| local[t]));
        }
        let finals: Vec<bool> = order.iter().map(|&q| self.finals[q]).collect();
        let block_of = hopcroft(n, k, &delta, &finals);
        Quotient::new(n, k, &delta, &finals, &block_of).canonical(&self.alphabet, block_of[0])
    }

    /// The canonical language of every state, computed with a single
    /// partition refinement.
    pub fn state_languages(&self) -> Vec<LanguageId> {
        let (n, k) = (self.states(), self.alphabet.len());
        let block_of = hopcroft(n, k, &self.delta, &self.finals);
        let q = Quotient::new(n, k, &self.delta, &self.finals, &block_of);
        let mut memo: HashMap<usize, LanguageId> = HashMap::new();
        (0..n).map(|s| memo.entry(block_of[s]).or_insert_with(|| q.canonical(&self.alphabet, block_of[s])).clone()).collect()
    }
}

/// The automaton on the blocks of a congruence partition.
struct Quotient {
    k: usize,
    delta: Vec<usize>,
    finals: Vec<bool>,
}

impl Quotient {
    fn new(n: usize, k: usize, delta: &[usize], finals: &[bool], block_of: &[usize]) -> Quotient {
        let blocks = block_of.iter().max().map_or(0, |&b| b + 1);
        let mut qd = vec![0; blocks * k];
        let mut qf = vec![false; blocks];
        for s in 0..n {
            let b = block_of[s];
            qf[b] = finals[s];
            for a in 0..k {
                qd[b * k + a] = block_of[delta[s * k + a]];
            }
        }
        Quotient { k, delta: qd, finals: qf }
    }

    /// Breadth-first renumbering of the part reachable from `start`.
    fn canonical(&self, alphabet: &Alphabet, start: usize) -> LanguageId {
        let k = self.k;
        let mut canon: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut order = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < order.len() {
            for a in 0..k {
                let t = self.delta[order[i] * k + a];
                let next = canon.len();
                let id = *canon.entry(t).or_insert_with(|| {
                    order.push(t);
                    next
                });
                delta.push(id);
            }
            i += 1;
        }
        let finals = order.iter().map(|&b| self.finals[b]).collect();
        LanguageId(Dfa::from_flat(alphabet.clone(), 0, finals, delta))
    }
}

/// Coarsest partition of `0..n` compatible with `finals` and `delta`.
fn hopcroft(n: usize, k: usize, delta: &[usize], finals: &[bool]) -> Vec<usize> {
    let mut inv_start = vec![0usize; n * k + 1];
    for p in 0..n {
        for a in 0..k {
            inv_start[delta[p * k + a] * k + a + 1] += 1;
        }
    }
    for i in 0..n * k {
        inv_start[i + 1] += inv_start[i];
    }
    let mut inv = vec![0usize; n * k];
    let mut fill = inv_start.clone();
    for p in 0..n {
        for a in 0..k {
            let slot = delta[p * k + a] * k + a;
            inv[fill[slot]] = p;
            fill[slot] += 1;
        }
    }

    let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| finals[q]);
    let mut blocks: Vec<Vec<usize>> = [acc, rej].into_iter().filter(|b| !b.is_empty()).collect();
    let mut block_of = vec![0usize; n];
    for (b, qs) in blocks.iter().enumerate() {
        for &q in qs {
            block_of[q] = b;
        }
    }
    let mut in_work: Vec<Vec<bool>> = vec![vec![false; k]; blocks.len()];
    let mut work = Vec::new();
    if blocks.len() == 2 {
        let smaller = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
        for a in 0..k {
            work.push((smaller, a));
            in_work[smaller][a] = true;
        }
    }

    let mut marked = vec![false; n];
    let mut count = vec![0usize; n];
    let mut pre = Vec::new();
    let mut touched = Vec::new();
    while let Some((b, a)) = work.pop() {
        in_work[b][a] = false;
        pre.clear();
        for &q in &blocks[b] {
            for &p in &inv[inv_start[q * k + a]..inv_start[q * k + a + 1]] {
                if !marked[p] {
                    marked[p] = true;
                    pre.push(p);
                }
            }
        }
        touched.clear();
        for &p in &pre {
            let y = block_of[p];
            if count[y] == 0 {
                touched.push(y);
            }
            count[y] += 1;
        }
        for &y in &touched {
            if count[y] < blocks[y].len() {
                let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[y].iter().partition(|&&p| marked[p]);
                let z = blocks.len();
                for &p in &inside {
                    block_of[p] = z;
                }
                blocks[y] = outside;
                blocks.push(inside);
                in_work.push(vec![false; k]);
                for c in 0..k {
                    let target = if in_work[y][c] || blocks[z].len() < blocks[y].len() { z } else { y };
                    if !in_work[target][c] {
                        in_work[target][c] = true;
                        work.push((target, c));
                    }
                }
            }
            count[y] = 0;
        }
        for &p in &pre {
            marked[p] = false;
        }
    }
    block_of
}

/// A regular language, represented by its canonical minimal automaton.
/// Two values are equal exactly when they denote the same language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Dfa", into = "Dfa")]
pub struct LanguageId(Dfa);

impl TryFrom<Dfa> for LanguageId {
    type Error = Error;

    fn try_from(d: Dfa) -> Result<LanguageId> {
        Ok(d.minimize())
    }
}

impl From<LanguageId> for Dfa {
    fn from(l: LanguageId) -> Dfa {
        l.0
    }
}

impl LanguageId {
    pub fn compile(re: &Regex, alphabet: &Alphabet) -> Result<LanguageId> {
        let t = Term::from_regex(re, alphabet)?;
        Ok(term::derivative_automaton(t, alphabet)?.minimize())
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<LanguageId> {
        Self::compile(&parse_regex(text, alphabet)?, alphabet)
    }

    pub fn empty(alphabet: &Alphabet) -> LanguageId {
        LanguageId(Dfa::from_flat(alphabet.clone(), 0, vec![false], vec![0; alphabet.len()]))
    }

    pub fn full(alphabet: &Alphabet) -> LanguageId {
        LanguageId(Dfa::from_flat(alphabet.clone(), 0, vec![true], vec![0; alphabet.len()]))
    }

    pub fn dfa(&self) -> &Dfa {
        &self.0
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.0.states()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.finals.iter().any(|&f| f)
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        self.0.accepts(word)
    }

    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        self.0.accepts_indices(word)
    }

    pub fn contains_epsilon(&self) -> bool {
        self.0.finals[0]
    }

    /// `w⁻¹L = {u : wu ∈ L}` for a word given as symbol indices.
    pub fn left_quotient(&self, w: &[usize]) -> LanguageId {
        self.0.with_initial(self.0.run(0, w)).minimize()
    }

    /// `Lw⁻¹ = {u : uw ∈ L}` for a word given as symbol indices.
    pub fn right_quotient(&self, w: &[usize]) -> LanguageId {
        let finals = (0..self.0.states()).map(|q| self.0.finals[self.0.run(q, w)]).collect();
        self.0.with_finals(finals).minimize()
    }

    pub fn left_derivative(&self, w: &str) -> Result<LanguageId> {
        Ok(self.left_quotient(&self.alphabet().encode(w)?))
    }

    pub fn right_derivative(&self, w: &str) -> Result<LanguageId> {
        Ok(self.right_quotient(&self.alphabet().encode(w)?))
    }

    /// All left residuals `w⁻¹L`, one per state of the minimal automaton,
    /// in state order.
    pub fn residuals(&self) -> Vec<LanguageId> {
        (0..self.0.states()).map(|q| self.0.with_initial(q).minimize()).collect()
    }

    /// All languages `v⁻¹(Lw⁻¹)`, in a deterministic order without repeats.
    pub fn two_sided_residuals(&self) -> Vec<LanguageId> {
        let n = self.0.states();
        let mut seen: HashMap<Vec<bool>, ()> = HashMap::new();
        let mut queue = VecDeque::from([self.0.finals.clone()]);
        seen.insert(self.0.finals.clone(), ());
        let mut shifts = Vec::new();
        while let Some(f) = queue.pop_front() {
            for a in 0..self.alphabet().len() {
                let g: Vec<bool> = (0..n).map(|q| f[self.0.step(q, a)]).collect();
                if !seen.contains_key(&g) {
                    seen.insert(g.clone(), ());
                    queue.push_back(g);
                }
            }
            shifts.push(f);
        }
        let mut out = Vec::new();
        let mut have = std::collections::HashSet::new();
        for f in shifts {
            let shifted = self.0.with_finals(f);
            for q in 0..n {
                let l = shifted.with_initial(q).minimize();
                if have.insert(l.clone()) {
                    out.push(l);
                }
            }
        }
        out
    }

    pub fn equivalent(&self, other: &LanguageId) -> bool {
        self == other
    }

    fn combine(&self, other: &LanguageId, op: impl Fn(bool, bool) -> bool) -> Result<LanguageId> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet().len();
        let m = other.0.states();
        limits::check_states(self.0.states() * m)?;
        let mut index = HashMap::from([((0usize, 0usize), 0usize)]);
        let mut pairs = vec![(0usize, 0usize)];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let next = (self.0.step(p, a), other.0.step(q, a));
                let j = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                delta.push(j);
            }
            i += 1;
        }
        let finals = pairs.iter().map(|&(p, q)| op(self.0.finals[p], other.0.finals[q])).collect();
        Ok(Dfa::from_flat(self.alphabet().clone(), 0, finals, delta).minimize())
    }

    pub fn union(&self, other: &LanguageId) -> Result<LanguageId> {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &LanguageId) -> Result<LanguageId> {
        self.combine(other, |x, y| x && y)
    }

    pub fn symmetric_difference(&self, other: &LanguageId) -> Result<LanguageId> {
        self.combine(other, |x, y| x != y)
    }

    pub fn complement(&self) -> LanguageId {
        let finals = self.0.finals.iter().map(|f| !f).collect();
        LanguageId(Dfa { finals, ..self.0.clone() })
    }

    pub fn is_subset(&self, other: &LanguageId) -> Result<bool> {
        Ok(self.combine(other, |x, y| x && !y)?.is_empty())
    }

    /// A shortest word in exactly one of the two languages.
    pub fn shortest_difference(&self, other: &LanguageId) -> Result<Option<String>> {
        self.combine(other, |x, y| x != y).map(|d| d.shortest_word())
    }

    /// `{wʳ : w ∈ L}`, by the subset construction on the reversed automaton.
    pub fn reversal(&self) -> LanguageId {
        let (n, k) = (self.0.states(), self.alphabet().len());
        let start: Vec<bool> = self.0.finals.clone();
        let mut index = HashMap::from([(start.clone(), 0usize)]);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for a in 0..k {
                let next: Vec<bool> = (0..n).map(|q| sets[i][self.0.step(q, a)]).collect();
                let fresh = sets.len();
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    fresh
                });
                delta.push(j);
            }
            i += 1;
        }
        let finals = sets.iter().map(|s| s[0]).collect();
        Dfa::from_flat(self.alphabet().clone(), 0, finals, delta).minimize()
    }

    pub fn shortest_word(&self) -> Option<String> {
        let k = self.alphabet().len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.0.states()];
        let mut seen = FixedBitSet::with_capacity(self.0.states());
        seen.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            if self.0.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = prev[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(self.alphabet().decode(&w));
            }
            for a in 0..k {
                let t = self.0.step(q, a);
                if !seen.put(t) {
                    prev[t] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A regular expression for the language, obtained by solving the
    /// automaton's language equations; the shorter of two elimination orders
    /// is returned, preferring the forward one on ties.
    pub fn to_regex(&self) -> Regex {
        let s = self.alphabet();
        let a = solve_backward(&self.0).to_regex(s);
        let b = solve_forward(&self.0).to_regex(s);
        let (sa, sb) = (a.to_string(), b.to_string());
        if sb.len() <= sa.len() {
            b
        } else {
            a
        }
    }
}

impl std::fmt::Display for LanguageId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_regex())
    }
}

struct Equations {
    vars: Vec<usize>,
    coef: Vec<Vec<Term>>,
    konst: Vec<Term>,
}

/// `X_q = Σ_a a·X_{δ(q,a)} + [q final]` restricted to states from which a
/// final state is reachable. Variable 0 is the initial state.
fn equations(d: &Dfa) -> Option<Equations> {
    let n = d.states();
    let k = d.alphabet().len();
    let mut live = vec![false; n];
    let mut changed = true;
    for q in 0..n {
        live[q] = d.finals[q];
    }
    while changed {
        changed = false;
        for q in 0..n {
            if !live[q] && d.row(q).iter().any(|&t| live[t]) {
                live[q] = true;
                changed = true;
            }
        }
    }
    if !live[d.initial] {
        return None;
    }
    let mut vars = vec![d.initial];
    vars.extend((0..n).filter(|&q| live[q] && q != d.initial));
    let mut pos = vec![usize::MAX; n];
    for (i, &q) in vars.iter().enumerate() {
        pos[q] = i;
    }
    let m = vars.len();
    let mut coef = vec![vec![Term::Empty; m]; m];
    let mut konst = vec![Term::Empty; m];
    for (i, &q) in vars.iter().enumerate() {
        if d.finals[q] {
            konst[i] = Term::Eps;
        }
        for a in 0..k {
            let t = d.step(q, a);
            if live[t] {
                let j = pos[t];
                coef[i][j] = term::alt(std::mem::replace(&mut coef[i][j], Term::Empty), Term::Sym(a));
            }
        }
    }
    Some(Equations { vars, coef, konst })
}

/// Applies Arden's rule to row `k`, making it free of `X_k`.
fn arden(eq: &mut Equations, k: usize) {
    let s = term::star(std::mem::replace(&mut eq.coef[k][k], Term::Empty));
    for j in 0..eq.vars.len() {
        if eq.coef[k][j] != Term::Empty {
            eq.coef[k][j] = term::cat(s.clone(), eq.coef[k][j].clone());
        }
    }
    eq.konst[k] = term::cat(s, eq.konst[k].clone());
}

/// Substitutes row `k` into row `i`.
fn substitute(eq: &mut Equations, i: usize, k: usize) {
    let c = std::mem::replace(&mut eq.coef[i][k], Term::Empty);
    if c == Term::Empty {
        return;
    }
    for j in 0..eq.vars.len() {
        if j != k && eq.coef[k][j] != Term::Empty {
            let add = term::cat(c.clone(), eq.coef[k][j].clone());
            eq.coef[i][j] = term::alt(std::mem::replace(&mut eq.coef[i][j], Term::Empty), add);
        }
    }
    let add = term::cat(c, eq.konst[k].clone());
    eq.konst[i] = term::alt(std::mem::replace(&mut eq.konst[i], Term::Empty), add);
}

fn solve_backward(d: &Dfa) -> Term {
    let Some(mut eq) = equations(d) else { return Term::Empty };
    for k in (1..eq.vars.len()).rev() {
        arden(&mut eq, k);
        for i in 0..k {
            substitute(&mut eq, i, k);
        }
    }
    arden(&mut eq, 0);
    eq.konst[0].clone()
}

fn solve_forward(d: &Dfa) -> Term {
    let Some(mut eq) = equations(d) else { return Term::Empty };
    let m = eq.vars.len();
    for k in 0..m {
        arden(&mut eq, k);
        for i in k + 1..m {
            substitute(&mut eq, i, k);
        }
    }
    let mut solved: Vec<Term> = vec![Term::Empty; m];
    for k in (0..m).rev() {
        let mut x = eq.konst[k].clone();
        for j in k + 1..m {
            if eq.coef[k][j] != Term::Empty {
                x = term::alt(x, term::cat(eq.coef[k][j].clone(), solved[j].clone()));
            }
        }
        solved[k] = x;
    }
    solved.swap_remove(0)
}
