//! Ready-made substitutions used by the examples and the test suite.

use crate::automaton::{EdgeId, EvPeriodicPath, PsAutomaton};
use crate::substitution::{parse_substitution, Letter, Substitution};

/// Tribonacci: a↦ab, b↦ac, c↦a.
pub fn tribonacci() -> Substitution {
    parse_substitution("a -> ab\nb -> ac\nc -> a\n").unwrap()
}

/// a↦ac, b↦ab, c↦b.
pub fn example1() -> Substitution {
    parse_substitution("a -> ac\nb -> ab\nc -> b\n").unwrap()
}

/// a↦abc, b↦bcabc, c↦cbcabc.
pub fn example2() -> Substitution {
    parse_substitution("a -> abc\nb -> bcabc\nc -> cbcabc\n").unwrap()
}

/// Fibonacci: a↦ab, b↦a.
pub fn fibonacci() -> Substitution {
    parse_substitution("a -> ab\nb -> a\n").unwrap()
}

/// The β cycle of the Tribonacci singular expansions:
/// `a←(ε,b)−a, a←(ε,c)−b, b←(a,ε)−a`.
pub fn tribo_beta_cycle(aut: &PsAutomaton) -> Vec<EdgeId> {
    let e1 = aut.find_edge(Letter(0), 0).unwrap(); // a←(ε,b)−a
    let e3 = aut.find_edge(Letter(1), 0).unwrap(); // a←(ε,c)−b
    let e2 = aut.find_edge(Letter(0), 1).unwrap(); // b←(a,ε)−a
    vec![e1, e3, e2]
}

/// `γ_a = (a←(ε,b)−a)·β^∞`, the expansion of the left-shifted limit word
/// sharing its left half with its two siblings.
pub fn tribo_gamma_a(aut: &PsAutomaton) -> EvPeriodicPath {
    let e1 = aut.find_edge(Letter(0), 0).unwrap();
    EvPeriodicPath::new(aut, vec![e1], tribo_beta_cycle(aut)).unwrap()
}

/// `γ_b = (b←(a,ε)−a)(a←(ε,b)−a)·β^∞`.
pub fn tribo_gamma_b(aut: &PsAutomaton) -> EvPeriodicPath {
    let e2 = aut.find_edge(Letter(0), 1).unwrap();
    let e1 = aut.find_edge(Letter(0), 0).unwrap();
    EvPeriodicPath::new(aut, vec![e2, e1], tribo_beta_cycle(aut)).unwrap()
}

/// `γ_c = (c←(a,ε)−b)(b←(a,ε)−a)(a←(ε,b)−a)·β^∞`.
pub fn tribo_gamma_c(aut: &PsAutomaton) -> EvPeriodicPath {
    let e4 = aut.find_edge(Letter(1), 1).unwrap();
    let e2 = aut.find_edge(Letter(0), 1).unwrap();
    let e1 = aut.find_edge(Letter(0), 0).unwrap();
    EvPeriodicPath::new(aut, vec![e4, e2, e1], tribo_beta_cycle(aut)).unwrap()
}
