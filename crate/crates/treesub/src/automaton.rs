//! Prefix-suffix automaton, finite and eventually periodic paths, the
//! successor (Vershik) map and its inverse, and the extreme paths with all
//! prefixes (resp. suffixes) empty.
//!
//! The automaton has the alphabet as states and an edge `a ←(p,s)− b` for
//! every decomposition `σ(b) = p·a·s`. Paths are stored with the edge at the
//! word origin first; the *end* of a path is the target of its first edge,
//! the *beginning* is the source of its last edge. For a path
//! `γ = a₀ ←(p₀,s₀)− a₁ ⋯ ←(p_{n−1},s_{n−1})− a_n` the prefix word is
//! `p(γ) = σ^{n−1}(p_{n−1}) ⋯ σ(p₁) p₀` and the suffix word is
//! `s(γ) = s₀ σ(s₁) ⋯ σ^{n−1}(s_{n−1})`.

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution, Word};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct EdgeId(pub u16);

/// One edge `target ←(prefix,suffix)− source` with `σ(source) = prefix·target·suffix`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsEdge {
    pub target: Letter,
    pub source: Letter,
    pub prefix: Word,
    pub suffix: Word,
    /// Position of `target` inside `σ(source)`, equals `|prefix|`.
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct PsAutomaton {
    pub edges: Vec<PsEdge>,
    /// Edge ids grouped by target letter, then by source letter.
    pub by_target: Vec<Vec<EdgeId>>,
    pub n_letters: usize,
}

impl PsAutomaton {
    /// One edge per `(source letter, position)`; `Σ_b |σ(b)|` edges total.
    pub fn build(sub: &Substitution) -> PsAutomaton {
        let n = sub.letter_count();
        let mut edges = Vec::new();
        for b in sub.alphabet.letters() {
            let img = sub.image(b);
            for (pos, &a) in img.0.iter().enumerate() {
                edges.push(PsEdge {
                    target: a,
                    source: b,
                    prefix: Word(img.0[..pos].to_vec()),
                    suffix: Word(img.0[pos + 1..].to_vec()),
                    position: pos,
                });
            }
        }
        let mut by_target = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            by_target[e.target.0 as usize].push(EdgeId(i as u16));
        }
        PsAutomaton { edges, by_target, n_letters: n }
    }

    pub fn edge(&self, id: EdgeId) -> &PsEdge {
        &self.edges[id.0 as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Finds the edge with the given source letter and position.
    pub fn find_edge(&self, source: Letter, position: usize) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.source == source && e.position == position)
            .map(|i| EdgeId(i as u16))
    }

    /// All finite paths of the given length, by depth-first extension at the
    /// deep end. Paths of length 0 are one empty path per letter and are
    /// represented by (end_letter, []).
    pub fn paths_of_length(&self, n: usize) -> Vec<FinitePath> {
        let mut acc: Vec<FinitePath> = (0..self.n_letters)
            .map(|l| FinitePath { edges: Vec::new(), end: Letter(l as u8) })
            .collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &acc {
                let begin = p.begin(self);
                for (i, e) in self.edges.iter().enumerate() {
                    if e.target == begin {
                        let mut edges = p.edges.clone();
                        edges.push(EdgeId(i as u16));
                        next.push(FinitePath { edges, end: p.end });
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

/// Finite path. `edges[0]` is the edge at the word origin (shallowest).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FinitePath {
    pub edges: Vec<EdgeId>,
    /// End letter (target of the first edge); kept explicitly so the empty
    /// path still knows the letter it sits at.
    pub end: Letter,
}

impl FinitePath {
    pub fn empty(at: Letter) -> Self {
        FinitePath { edges: Vec::new(), end: at }
    }

    pub fn from_edges(aut: &PsAutomaton, edges: Vec<EdgeId>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Invariant("from_edges needs at least one edge".into()));
        }
        let end = aut.edge(edges[0]).target;
        let p = FinitePath { edges, end };
        p.check_chaining(aut)?;
        Ok(p)
    }

    pub fn check_chaining(&self, aut: &PsAutomaton) -> Result<()> {
        if let Some(&first) = self.edges.first() {
            if aut.edge(first).target != self.end {
                return Err(Error::Invariant("path end letter mismatch".into()));
            }
        }
        for w in self.edges.windows(2) {
            if aut.edge(w[0]).source != aut.edge(w[1]).target {
                return Err(Error::Invariant("path edges do not chain".into()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Letter at the shallow end (`a₀`).
    pub fn end_letter(&self, _aut: &PsAutomaton) -> Letter {
        self.end
    }

    /// Letter at the deep end (`a_n`).
    pub fn begin(&self, aut: &PsAutomaton) -> Letter {
        match self.edges.last() {
            Some(&e) => aut.edge(e).source,
            None => self.end,
        }
    }

    /// `p(γ) = σ^{n−1}(p_{n−1}) ⋯ σ(p₁) p₀`, via `p(e·γ') = σ(p(γ'))·p_e`.
    pub fn prefix_word(&self, sub: &Substitution, aut: &PsAutomaton) -> Word {
        let mut acc = Word::empty();
        for &e in self.edges.iter().rev() {
            acc = sub.apply(&acc).concat(&aut.edge(e).prefix);
        }
        acc
    }

    /// `s(γ) = s₀ σ(s₁) ⋯ σ^{n−1}(s_{n−1})`.
    pub fn suffix_word(&self, sub: &Substitution, aut: &PsAutomaton) -> Word {
        let mut acc = Word::empty();
        for &e in self.edges.iter().rev() {
            acc = aut.edge(e).suffix.concat(&sub.apply(&acc));
        }
        acc
    }

    pub fn concat(&self, tail: &FinitePath, aut: &PsAutomaton) -> Result<FinitePath> {
        if self.begin(aut) != tail.end_letter(aut) {
            return Err(Error::Invariant("concat: begin/end letters differ".into()));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&tail.edges);
        Ok(FinitePath { edges, end: self.end })
    }
}

/// Eventually periodic path `α·β^∞`, kept normalized: the cycle is a
/// primitive period and no trailing head edge equals the last cycle edge
/// (such edges are absorbed by rotating the cycle).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EvPeriodicPath {
    pub head: Vec<EdgeId>,
    pub cycle: Vec<EdgeId>,
    pub end: Letter,
}

impl EvPeriodicPath {
    pub fn new(aut: &PsAutomaton, head: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Invariant("cycle must be nonempty".into()));
        }
        let all: Vec<EdgeId> = head.iter().chain(cycle.iter()).copied().collect();
        let end = aut.edge(all[0]).target;
        // chaining including the wrap of the cycle
        let full = FinitePath { edges: all.clone(), end };
        full.check_chaining(aut)?;
        let cyc_begin = aut.edge(*cycle.last().unwrap()).source;
        let cyc_end = aut.edge(cycle[0]).target;
        if cyc_begin != cyc_end {
            return Err(Error::Invariant("cycle does not close".into()));
        }
        let mut p = EvPeriodicPath { head, cycle, end };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        // primitive period
        let n = self.cycle.len();
        'outer: for d in 1..n {
            if n % d == 0 {
                for i in 0..n {
                    if self.cycle[i] != self.cycle[i % d] {
                        continue 'outer;
                    }
                }
                self.cycle.truncate(d);
                break;
            }
        }
        // absorb head tail into the cycle
        while let Some(&last) = self.head.last() {
            if last == *self.cycle.last().unwrap() {
                self.head.pop();
                let rot = self.cycle.pop().unwrap();
                self.cycle.insert(0, rot);
            } else {
                break;
            }
        }
    }

    /// The edge at the word origin.
    pub fn first_edge(&self) -> EdgeId {
        *self.head.first().unwrap_or(&self.cycle[0])
    }

    pub fn end_letter(&self) -> Letter {
        self.end
    }

    /// Edge at index i of the infinite expansion.
    pub fn edge_at(&self, i: usize) -> EdgeId {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.cycle[(i - self.head.len()) % self.cycle.len()]
        }
    }

    /// First `n` edges as a finite path.
    pub fn head_path(&self, aut: &PsAutomaton, n: usize) -> FinitePath {
        let edges: Vec<EdgeId> = (0..n).map(|i| self.edge_at(i)).collect();
        if edges.is_empty() {
            FinitePath::empty(self.end)
        } else {
            let end = aut.edge(edges[0]).target;
            FinitePath { edges, end }
        }
    }

    /// `Bⁿ(γ)`: drops the first `n` edges.
    pub fn behead(&self, aut: &PsAutomaton, n: usize) -> EvPeriodicPath {
        let mut head = Vec::new();
        let k = self.head.len();
        if n < k {
            head.extend_from_slice(&self.head[n..]);
            EvPeriodicPath::new(aut, head, self.cycle.clone()).expect("behead keeps validity")
        } else {
            let shift = (n - k) % self.cycle.len();
            let mut cyc = self.cycle.clone();
            cyc.rotate_left(shift);
            EvPeriodicPath::new(aut, Vec::new(), cyc).expect("behead keeps validity")
        }
    }

    /// All distinct beheadings `Bⁿ(γ)` for `n ≥ from`. These are finitely
    /// many: `B^{|head|+|cycle|}` equals `B^{|head|}`.
    pub fn tails(&self, aut: &PsAutomaton, from: usize) -> Vec<EvPeriodicPath> {
        let mut out = Vec::new();
        let total = self.head.len() + self.cycle.len();
        for n in from..total.max(from + 1) {
            let t = self.behead(aut, n);
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    /// Prepends one edge at the word origin.
    pub fn push_front(&self, aut: &PsAutomaton, e: EdgeId) -> Result<EvPeriodicPath> {
        if aut.edge(e).source != self.end {
            return Err(Error::Invariant("push_front edge does not chain".into()));
        }
        let mut head = vec![e];
        head.extend_from_slice(&self.head);
        EvPeriodicPath::new(aut, head, self.cycle.clone())
    }

    /// `p(α)` and `p(β)` of the normalized decomposition.
    pub fn head_prefix_word(&self, sub: &Substitution, aut: &PsAutomaton) -> Word {
        self.head_path(aut, self.head.len()).prefix_word(sub, aut)
    }

    pub fn cycle_path(&self, aut: &PsAutomaton) -> FinitePath {
        let end = aut.edge(self.cycle[0]).target;
        FinitePath { edges: self.cycle.clone(), end }
    }

    /// True when every suffix along head and cycle is empty.
    pub fn all_suffixes_empty(&self, aut: &PsAutomaton) -> bool {
        self.head.iter().chain(self.cycle.iter()).all(|&e| aut.edge(e).suffix.is_empty())
    }

    pub fn all_prefixes_empty(&self, aut: &PsAutomaton) -> bool {
        self.head.iter().chain(self.cycle.iter()).all(|&e| aut.edge(e).prefix.is_empty())
    }
}

/// Successor rewriting of the head of a path. Works on the first `r+1`
/// edges where `r` is the smallest index with a nonempty suffix.
///
/// `γ = a₀ ←(p₀,ε)− ⋯ a_r ←(p_r, b_r t_r)− a_{r+1} ⋯` becomes
/// `b₀ ←(ε,t₀)− ⋯ b_r ←(p_r a_r, t_r)− a_{r+1} ⋯` with
/// `σ(b_{i+1}) = b_i t_i` for `i < r`.
fn vershik_rewrite(
    sub: &Substitution,
    aut: &PsAutomaton,
    edges: &[EdgeId],
) -> Result<(usize, Vec<EdgeId>)> {
    let r = edges
        .iter()
        .position(|&e| !aut.edge(e).suffix.is_empty())
        .ok_or_else(|| Error::Gate("successor undefined: all suffixes empty".into()))?;
    let er = aut.edge(edges[r]);
    let b_r = er.suffix.0[0];
    // new edge at r: b_r at position |p_r| + 1 inside σ(a_{r+1})
    let new_r = aut
        .find_edge(er.source, er.position + 1)
        .ok_or_else(|| Error::Invariant("successor: edge after target missing".into()))?;
    debug_assert_eq!(aut.edge(new_r).target, b_r);
    let mut new_edges = vec![new_r];
    // walk down: σ(b_{i+1}) = b_i t_i, so the new edge at i has source b_{i+1}
    // and position 0
    let mut b_next = b_r;
    for _i in (0..r).rev() {
        let e = aut
            .find_edge(b_next, 0)
            .ok_or_else(|| Error::Invariant("successor: position-0 edge missing".into()))?;
        new_edges.insert(0, e);
        b_next = aut.edge(e).target;
    }
    let _ = sub;
    Ok((r, new_edges))
}

/// Predecessor rewriting: mirror of `vershik_rewrite` on prefixes.
fn covershik_rewrite(
    sub: &Substitution,
    aut: &PsAutomaton,
    edges: &[EdgeId],
) -> Result<(usize, Vec<EdgeId>)> {
    let r = edges
        .iter()
        .position(|&e| !aut.edge(e).prefix.is_empty())
        .ok_or_else(|| Error::Gate("predecessor undefined: all prefixes empty".into()))?;
    let er = aut.edge(edges[r]);
    // new edge at r: the letter before a_r inside σ(a_{r+1})
    let new_r = aut
        .find_edge(er.source, er.position - 1)
        .ok_or_else(|| Error::Invariant("predecessor: edge before target missing".into()))?;
    let mut new_edges = vec![new_r];
    let mut c_next = aut.edge(new_r).target;
    for _i in (0..r).rev() {
        // new edge at i: last position of σ(c_next)
        let img_len = sub.image(c_next).len();
        let e = aut
            .find_edge(c_next, img_len - 1)
            .ok_or_else(|| Error::Invariant("predecessor: last-position edge missing".into()))?;
        new_edges.insert(0, e);
        c_next = aut.edge(e).target;
    }
    Ok((r, new_edges))
}

/// Vershik successor on a finite path (length preserved). Errors when every
/// suffix in the path is empty.
pub fn vershik_finite(
    sub: &Substitution,
    aut: &PsAutomaton,
    path: &FinitePath,
) -> Result<FinitePath> {
    let (r, new_head) = vershik_rewrite(sub, aut, &path.edges)?;
    let mut edges = new_head;
    edges.extend_from_slice(&path.edges[r + 1..]);
    FinitePath::from_edges(aut, edges)
}

pub fn covershik_finite(
    sub: &Substitution,
    aut: &PsAutomaton,
    path: &FinitePath,
) -> Result<FinitePath> {
    let (r, new_head) = covershik_rewrite(sub, aut, &path.edges)?;
    let mut edges = new_head;
    edges.extend_from_slice(&path.edges[r + 1..]);
    FinitePath::from_edges(aut, edges)
}

/// Vershik successor on an eventually periodic path.
pub fn vershik(
    sub: &Substitution,
    aut: &PsAutomaton,
    path: &EvPeriodicPath,
) -> Result<EvPeriodicPath> {
    if path.all_suffixes_empty(aut) {
        return Err(Error::Gate("successor undefined on an all-empty-suffix path".into()));
    }
    // materialize enough of the head to cover the rewrite
    let need = path.head.len() + path.cycle.len() + 1;
    let edges: Vec<EdgeId> = (0..need).map(|i| path.edge_at(i)).collect();
    let (r, new_head) = vershik_rewrite(sub, aut, &edges)?;
    let mut head: Vec<EdgeId> = new_head;
    head.extend((r + 1..need).map(|i| path.edge_at(i)));
    // the tail beyond `need` is still the original cycle, rotated
    let shift = (need - path.head.len()) % path.cycle.len();
    let mut cyc = path.cycle.clone();
    cyc.rotate_left(shift);
    EvPeriodicPath::new(aut, head, cyc)
}

pub fn covershik(
    sub: &Substitution,
    aut: &PsAutomaton,
    path: &EvPeriodicPath,
) -> Result<EvPeriodicPath> {
    if path.all_prefixes_empty(aut) {
        return Err(Error::Gate("predecessor undefined on an all-empty-prefix path".into()));
    }
    let need = path.head.len() + path.cycle.len() + 1;
    let edges: Vec<EdgeId> = (0..need).map(|i| path.edge_at(i)).collect();
    let (r, new_head) = covershik_rewrite(sub, aut, &edges)?;
    let mut head: Vec<EdgeId> = new_head;
    head.extend((r + 1..need).map(|i| path.edge_at(i)));
    let shift = (need - path.head.len()) % path.cycle.len();
    let mut cyc = path.cycle.clone();
    cyc.rotate_left(shift);
    EvPeriodicPath::new(aut, head, cyc)
}

/// All infinite paths inside the empty-prefix (for `P_min`) or empty-suffix
/// (for `P_max`) subgraph. These are finitely many eventually periodic
/// paths: each must eventually run along a cycle of the subgraph.
pub fn p_extreme(sub: &Substitution, aut: &PsAutomaton) -> Result<(Vec<EvPeriodicPath>, Vec<EvPeriodicPath>)> {
    if !sub.is_primitive() {
        return Err(Error::Gate("p_extreme requires a primitive substitution".into()));
    }
    let min = extreme_paths(aut, |e| e.prefix.is_empty())?;
    let max = extreme_paths(aut, |e| e.suffix.is_empty())?;
    Ok((min, max))
}

/// The empty-prefix (resp. empty-suffix) edges form a functional graph:
/// each source letter `b` has exactly one such edge, the one hitting the
/// first (resp. last) letter of `σ(b)`. An infinite path must stay on the
/// cycles of that graph — any letter off a cycle has no infinitely deep
/// continuation — so the extreme paths are exactly the cycle rotations.
fn extreme_paths(
    aut: &PsAutomaton,
    keep: impl Fn(&PsEdge) -> bool,
) -> Result<Vec<EvPeriodicPath>> {
    let n = aut.n_letters;
    // per source letter, the unique kept edge
    let mut step = vec![None; n];
    for i in 0..aut.edge_count() {
        let e = aut.edge(EdgeId(i as u16));
        if keep(e) {
            if step[e.source.0 as usize].is_some() {
                return Err(Error::Invariant("extreme subgraph is not functional".into()));
            }
            step[e.source.0 as usize] = Some(EdgeId(i as u16));
        }
    }
    let mut out = Vec::new();
    let mut on_cycle = vec![false; n];
    for start in 0..n {
        // follow source -> target of the unique edge until a repeat
        let mut seen = vec![start];
        let mut cur = start;
        loop {
            let Some(e) = step[cur] else { break };
            let next = aut.edge(e).target.0 as usize;
            if let Some(pos) = seen.iter().position(|&x| x == next) {
                if !on_cycle[next] {
                    // letters seen[pos..] form a cycle; build its edge list.
                    // Path edges run shallow-to-deep, and the edge with
                    // source x has target f(x), so the cycle path is the
                    // edges of seen[pos..] in reverse orbit order.
                    let cyc_letters: Vec<usize> = seen[pos..].to_vec();
                    for &l in &cyc_letters {
                        on_cycle[l] = true;
                    }
                    for k in 0..cyc_letters.len() {
                        // rotation ending at target of edge from cyc_letters[k]
                        let mut edges = Vec::new();
                        let mut src = cyc_letters[k];
                        for _ in 0..cyc_letters.len() {
                            let e = step[src].unwrap();
                            edges.push(e);
                            // previous letter in the orbit: the one whose
                            // image edge has target = src... walk forward
                            src = aut.edge(e).target.0 as usize;
                        }
                        // edges currently run deep-to-shallow; reverse them
                        edges.reverse();
                        let p = EvPeriodicPath::new(aut, Vec::new(), edges)?;
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
                break;
            }
            seen.push(next);
            cur = next;
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tribonacci_automaton_edges() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        assert_eq!(aut.edge_count(), 5);
        let names: Vec<String> = aut
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}<-({},{})-{}",
                    s.alphabet.name(e.target),
                    s.alphabet.word_string(&e.prefix),
                    s.alphabet.word_string(&e.suffix),
                    s.alphabet.name(e.source),
                )
            })
            .collect();
        assert_eq!(
            names,
            vec!["a<-(,b)-a", "b<-(a,)-a", "a<-(,c)-b", "c<-(a,)-b", "a<-(,)-c"]
        );
    }

    #[test]
    fn example1_automaton_edges() {
        let s = fixtures::example1();
        let aut = PsAutomaton::build(&s);
        assert_eq!(aut.edge_count(), 5);
        assert!(aut
            .edges
            .iter()
            .any(|e| s.alphabet.name(e.target) == "c"
                && s.alphabet.name(e.source) == "a"
                && s.alphabet.word_string(&e.prefix) == "a"));
        assert!(aut
            .edges
            .iter()
            .any(|e| s.alphabet.name(e.target) == "b"
                && s.alphabet.name(e.source) == "c"
                && e.prefix.is_empty()
                && e.suffix.is_empty()));
    }

    #[test]
    fn prefix_words() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        // γ = b←(a,ε)−a←(ε,b)−a : p(γ) = σ(ε)·a = "a"
        let e_ba = aut.find_edge(Letter(0), 1).unwrap(); // b at position 1 of σ(a)
        let e_aa = aut.find_edge(Letter(0), 0).unwrap(); // a at position 0 of σ(a)
        let p = FinitePath::from_edges(&aut, vec![e_ba, e_aa]).unwrap();
        assert_eq!(s.alphabet.word_string(&p.prefix_word(&s, &aut)), "a");
        assert_eq!(
            s.alphabet.word_string(&FinitePath::empty(Letter(0)).prefix_word(&s, &aut)),
            ""
        );
        // β cycle: a←(ε,b)−a, a←(ε,c)−b, b←(a,ε)−a : p(β) = σ²(a) = abac
        let beta = fixtures::tribo_beta_cycle(&aut);
        let bp = FinitePath::from_edges(&aut, beta).unwrap();
        assert_eq!(s.alphabet.word_string(&bp.prefix_word(&s, &aut)), "abac");
    }

    #[test]
    fn path_counts_match_matrix_powers() {
        for s in [fixtures::tribonacci(), fixtures::example1()] {
            let aut = PsAutomaton::build(&s);
            let m = s.incidence();
            for n in 0..=4usize {
                let total: num_bigint::BigInt = {
                    let p = crate::linalg::mat_pow(&crate::linalg::int_to_q_mat(&m.0), n);
                    let mut acc = num_rational::BigRational::from_integer(0.into());
                    for row in &p {
                        for e in row {
                            acc += e;
                        }
                    }
                    acc.to_integer()
                };
                let count = aut.paths_of_length(n).len();
                assert_eq!(num_bigint::BigInt::from(count), total, "n={n}");
            }
        }
    }

    #[test]
    fn behead_and_normalization() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        let gamma_a = fixtures::tribo_gamma_a(&aut);
        // B³(γ_a) ends at b
        let b3 = gamma_a.behead(&aut, 3);
        assert_eq!(s.alphabet.name(b3.end_letter()), "b");
        // B⁰ is the identity
        assert_eq!(gamma_a.behead(&aut, 0), gamma_a);
        // periodicity: B^{|α|+|β|} = B^{|α|}
        let m = gamma_a.head.len();
        let n = gamma_a.cycle.len();
        assert_eq!(gamma_a.behead(&aut, m + n), gamma_a.behead(&aut, m));
        // normalization absorbs head edges equal to the cycle tail
        let e1 = aut.find_edge(Letter(0), 0).unwrap();
        let raw = EvPeriodicPath::new(&aut, vec![e1], vec![e1]).unwrap();
        assert!(raw.head.is_empty());
        assert_eq!(raw.cycle, vec![e1]);
    }

    #[test]
    fn pmin_pmax_fixtures() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        let (pmin, pmax) = p_extreme(&s, &aut).unwrap();
        assert_eq!(pmin.len(), 1);
        assert!(pmin[0].head.is_empty() && pmin[0].cycle.len() == 1);
        assert_eq!(pmax.len(), 3);
        assert!(pmax.iter().all(|p| p.head.is_empty() && p.cycle.len() == 3));

        let s1 = fixtures::example1();
        let aut1 = PsAutomaton::build(&s1);
        let (_, pmax1) = p_extreme(&s1, &aut1).unwrap();
        assert_eq!(pmax1.len(), 1);
        let p = &pmax1[0];
        assert_eq!(p.cycle.len(), 1);
        let e = aut1.edge(p.cycle[0]);
        assert_eq!(s1.alphabet.name(e.target), "b");
        assert_eq!(s1.alphabet.name(e.source), "b");
        assert_eq!(s1.alphabet.word_string(&e.prefix), "a");
    }

    #[test]
    fn vershik_on_tribonacci_paths() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        let gamma_a = fixtures::tribo_gamma_a(&aut);
        // V(γ_a) is the pure cycle (E2 E1 E3)^∞, i.e. B³(γ_a)
        let v = vershik(&s, &aut, &gamma_a).unwrap();
        assert_eq!(v, gamma_a.behead(&aut, 3));
        // predecessor inverts it
        let back = covershik(&s, &aut, &v).unwrap();
        assert_eq!(back, gamma_a);
        // γ₀ successor: end letter b (second letter of the fixed word)
        let e1 = aut.find_edge(Letter(0), 0).unwrap();
        let gamma0 = EvPeriodicPath::new(&aut, vec![], vec![e1]).unwrap();
        let v0 = vershik(&s, &aut, &gamma0).unwrap();
        assert_eq!(s.alphabet.name(v0.end_letter()), "b");
        let v00 = vershik(&s, &aut, &v0).unwrap();
        assert_eq!(s.alphabet.name(v00.end_letter()), "a");
    }

    #[test]
    fn vershik_finite_r0_case() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        // single-edge path a←(ε,b)−a: suffix starts with b, so the head
        // becomes b←(a,ε)−a
        let e1 = aut.find_edge(Letter(0), 0).unwrap();
        let p = FinitePath::from_edges(&aut, vec![e1]).unwrap();
        let v = vershik_finite(&s, &aut, &p).unwrap();
        let e = aut.edge(v.edges[0]);
        assert_eq!(s.alphabet.name(e.target), "b");
        assert_eq!(s.alphabet.word_string(&e.prefix), "a");
        // co-Vershik brings it back
        let back = covershik_finite(&s, &aut, &v).unwrap();
        assert_eq!(back, p);
    }
}
