//! Alphabets, words and substitutions.
//!
//! A substitution is a free monoid endomorphism `σ: A* → A*` given by the
//! images of the letters. Letters are interned as small indices; display
//! names are kept for parsing and printing. The incidence matrix follows the
//! column convention `M[a][b] = |σ(b)|_a`, so that `ℓ(σ(w)) = M·ℓ(w)` where
//! `ℓ` is the abelianization map.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt;

/// Interned letter: an index into the owning [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Letter(pub u8);

/// Finite word over an alphabet (possibly empty).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[")?;
        for l in &self.0 {
            write!(f, "{}", l.0)?;
        }
        write!(f, "]")
    }
}

/// Ordered list of letters with display names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Self {
        Alphabet { names }
    }
    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| Letter(i as u8))
    }
    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.0 as usize]
    }
    pub fn find(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| Letter(i as u8))
    }
    /// Renders a word using display names. Multi-character names are
    /// bracketed so the output re-parses unambiguously.
    pub fn word_string(&self, w: &Word) -> String {
        let mut s = String::new();
        for &l in &w.0 {
            let n = self.name(l);
            if n.chars().count() == 1 {
                s.push_str(n);
            } else {
                s.push('[');
                s.push_str(n);
                s.push(']');
            }
        }
        s
    }
}

/// Substitution `σ` determined by its restriction to letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    pub alphabet: Alphabet,
    images: Vec<Word>,
}

/// Abelianization vector: letter counts of a word, or differences thereof.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianVector(pub Vec<BigInt>);

/// Incidence matrix with `M[a][b] = |σ(b)|_a` (column = image of a letter).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceMatrix(pub Vec<Vec<BigInt>>);

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Invariant("one image per letter required".into()));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Invariant(format!(
                    "image of '{}' is empty",
                    alphabet.name(Letter(i as u8))
                )));
            }
            for &l in &img.0 {
                if l.0 as usize >= alphabet.len() {
                    return Err(Error::Invariant("image letter outside alphabet".into()));
                }
            }
        }
        Ok(Substitution { alphabet, images })
    }

    pub fn image(&self, l: Letter) -> &Word {
        &self.images[l.0 as usize]
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    /// Applies σ to a word (concatenation of the letter images).
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &l in &w.0 {
            out.extend_from_slice(&self.image(l).0);
        }
        Word(out)
    }

    /// Applies σ^n.
    pub fn apply_power(&self, w: &Word, n: usize) -> Word {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        cur
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Incidence (abelianization) matrix.
    pub fn incidence(&self) -> IncidenceMatrix {
        let n = self.letter_count();
        let mut m = vec![vec![BigInt::from(0); n]; n];
        for b in 0..n {
            for &Letter(a) in &self.images[b].0 {
                m[a as usize][b] += 1;
            }
        }
        IncidenceMatrix(m)
    }

    /// Primitivity: `M^k > 0` entrywise for some `k ≤ (n−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let n = self.letter_count();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return self.images[0].len() >= 1;
        }
        // boolean reachability powers
        let m = self.incidence();
        let mut reach: Vec<Vec<bool>> = m
            .0
            .iter()
            .map(|row| row.iter().map(|e| *e > BigInt::from(0)).collect())
            .collect();
        let bound = (n - 1) * (n - 1) + 1;
        for _ in 0..bound {
            if reach.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if reach[i][k] {
                        for (j, cell) in next[i].iter_mut().enumerate() {
                            if m.0[k][j] > BigInt::from(0) {
                                *cell = true;
                            }
                        }
                    }
                }
            }
            reach = next;
        }
        reach.iter().all(|row| row.iter().all(|&b| b))
    }

    /// Substitution with every image reversed: its language is the mirror
    /// language, which turns right-special analysis into left-special.
    pub fn reversed(&self) -> Substitution {
        Substitution {
            alphabet: self.alphabet.clone(),
            images: self.images.iter().map(|w| w.reversed()).collect(),
        }
    }

    /// All factors of length ≤ `lmax` of the language of σ.
    ///
    /// Iterates σ on every letter until the factor sets stay unchanged under
    /// one more application. Primitivity guarantees termination.
    pub fn language(&self, lmax: usize) -> Result<FactorSet> {
        if !self.is_primitive() {
            return Err(Error::Gate("language requires a primitive substitution".into()));
        }
        let mut by_len: Vec<std::collections::BTreeSet<Word>> = vec![Default::default(); lmax + 1];
        let mut words: Vec<Word> = self.alphabet.letters().map(Word::single).collect();
        loop {
            let mut changed = false;
            for w in &words {
                for len in 1..=lmax.min(w.len()) {
                    for win in w.0.windows(len) {
                        if by_len[len].insert(Word(win.to_vec())) {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
            words = words.iter().map(|w| self.apply(w)).collect();
            // Guard against pathological growth: image lengths are capped by
            // the longest word needed to expose all factors of length lmax.
            for w in words.iter_mut() {
                if w.len() > 4 * lmax.max(4) * self.max_image_len().max(2) + 64 {
                    w.0.truncate(4 * lmax.max(4) * self.max_image_len().max(2) + 64);
                }
            }
        }
        Ok(FactorSet { by_len })
    }
}

/// Abelianization `ℓ(w)`.
pub fn abelianize(n_letters: usize, w: &Word) -> AbelianVector {
    let mut v = vec![BigInt::from(0); n_letters];
    for &Letter(l) in &w.0 {
        v[l as usize] += 1;
    }
    AbelianVector(v)
}

/// Factors of a substitution language, grouped by length.
#[derive(Clone, Debug)]
pub struct FactorSet {
    by_len: Vec<std::collections::BTreeSet<Word>>,
}

impl FactorSet {
    pub fn max_len(&self) -> usize {
        self.by_len.len().saturating_sub(1)
    }
    pub fn contains(&self, w: &Word) -> bool {
        w.len() < self.by_len.len() && (w.is_empty() || self.by_len[w.len()].contains(w))
    }
    pub fn of_len(&self, len: usize) -> impl Iterator<Item = &Word> {
        self.by_len[len].iter()
    }
    pub fn count(&self, len: usize) -> usize {
        self.by_len[len].len()
    }
}

/// Parses the one-rule-per-line text format, e.g. `a -> ab`.
///
/// Letters are single visible-ASCII tokens or bracketed names like `[a12]`.
/// Whitespace is ignored everywhere except inside brackets.
pub fn parse_substitution(text: &str) -> Result<Substitution> {
    let mut names: Vec<String> = Vec::new();
    let mut raw_rules: Vec<(usize, String, Vec<String>)> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = trimmed.split_once("->").ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "expected `letter -> image`".into(),
        })?;
        let lhs_tokens = tokenize_letters(lhs, line_no)?;
        if lhs_tokens.len() != 1 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("left side must be a single letter, got {} tokens", lhs_tokens.len()),
            });
        }
        let rhs_tokens = tokenize_letters(rhs, line_no)?;
        if rhs_tokens.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                msg: "image must be nonempty".into(),
            });
        }
        let name = lhs_tokens.into_iter().next().unwrap();
        if names.contains(&name) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate rule for letter '{name}'"),
            });
        }
        names.push(name.clone());
        raw_rules.push((line_no, name, rhs_tokens));
    }
    if raw_rules.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no rules found".into() });
    }
    let alphabet = Alphabet::new(names);
    let mut images = Vec::new();
    for (line_no, _, tokens) in &raw_rules {
        let mut w = Vec::new();
        for t in tokens {
            let l = alphabet.find(t).ok_or_else(|| Error::Parse {
                line: *line_no,
                msg: format!("letter '{t}' has no rule"),
            })?;
            w.push(l);
        }
        images.push(Word(w));
    }
    Substitution::new(alphabet, images)
}

fn tokenize_letters(s: &str, line: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c == '[' {
            let mut name = String::new();
            loop {
                match chars.next() {
                    Some(']') => break,
                    Some(x) => name.push(x),
                    None => {
                        return Err(Error::Parse { line, msg: "unterminated '['".into() });
                    }
                }
            }
            if name.is_empty() {
                return Err(Error::Parse { line, msg: "empty bracketed letter".into() });
            }
            out.push(name);
        } else if c.is_ascii_graphic() {
            out.push(c.to_string());
        } else {
            return Err(Error::Parse { line, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// Renders a substitution in the same text format `parse_substitution` reads.
pub fn format_substitution(s: &Substitution) -> String {
    let mut out = String::new();
    for l in s.alphabet.letters() {
        let name = s.alphabet.name(l);
        let lhs = if name.chars().count() == 1 { name.to_string() } else { format!("[{name}]") };
        out.push_str(&format!("{lhs} -> {}\n", s.alphabet.word_string(s.image(l))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn apply_unfolds_images() {
        let s = fixtures::tribonacci();
        let ab = Word(vec![Letter(0), Letter(1)]);
        assert_eq!(s.alphabet.word_string(&s.apply(&ab)), "abac");
        assert_eq!(s.apply(&Word::empty()), Word::empty());
        let a = Word::single(Letter(0));
        assert_eq!(s.alphabet.word_string(&s.apply_power(&a, 3)), "abacaba");
    }

    #[test]
    fn incidence_columns_are_image_abelianizations() {
        let s = fixtures::tribonacci();
        let m = s.incidence();
        // columns ℓ(ab), ℓ(ac), ℓ(a)
        let expect = [[1, 1, 1], [1, 0, 0], [0, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.0[i][j], BigInt::from(expect[i][j]));
            }
        }
        let id = parse_substitution("a -> a\nb -> b\n").unwrap();
        let mid = id.incidence();
        assert_eq!(mid.0[0][0], BigInt::from(1));
        assert_eq!(mid.0[0][1], BigInt::from(0));

        let ex1 = fixtures::example1();
        let m1 = ex1.incidence();
        let expect1 = [[1, 1, 0], [0, 1, 1], [1, 0, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m1.0[i][j], BigInt::from(expect1[i][j]));
            }
        }
    }

    #[test]
    fn incidence_commutes_with_apply_on_short_words() {
        for s in [fixtures::tribonacci(), fixtures::example1(), fixtures::example2()] {
            let m = s.incidence();
            let n = s.letter_count();
            let mut words = vec![Word::empty()];
            for _ in 0..3 {
                let mut next = Vec::new();
                for w in &words {
                    for l in s.alphabet.letters() {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
                words.extend(next);
            }
            for w in &words {
                let lhs = abelianize(n, &s.apply(w));
                let lw = abelianize(n, w);
                for i in 0..n {
                    let mut acc = BigInt::from(0);
                    for j in 0..n {
                        acc += &m.0[i][j] * &lw.0[j];
                    }
                    assert_eq!(lhs.0[i], acc);
                }
            }
        }
    }

    #[test]
    fn primitivity() {
        assert!(fixtures::tribonacci().is_primitive());
        assert!(fixtures::example1().is_primitive());
        assert!(fixtures::example2().is_primitive());
        let not = parse_substitution("a -> a\nb -> b\n").unwrap();
        assert!(!not.is_primitive());
    }

    #[test]
    fn language_small_lengths() {
        let s = fixtures::tribonacci();
        let lang = s.language(2).unwrap();
        let words: Vec<String> =
            lang.of_len(2).map(|w| s.alphabet.word_string(w)).collect();
        assert_eq!(words, vec!["aa", "ab", "ac", "ba", "ca"]);
        assert_eq!(lang.count(1), 3);
        assert!(!lang.contains(&Word(vec![Letter(1), Letter(1)])));
    }

    #[test]
    fn abelianize_counts() {
        let s = fixtures::tribonacci();
        let w = Word(vec![Letter(0), Letter(1), Letter(0), Letter(2)]);
        assert_eq!(
            abelianize(3, &w).0,
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(1)]
        );
        assert_eq!(abelianize(3, &Word::empty()).0, vec![BigInt::from(0); 3]);
        let _ = s;
    }

    #[test]
    fn parser_round_trip_and_errors() {
        let s = fixtures::tribonacci();
        let text = format_substitution(&s);
        let back = parse_substitution(&text).unwrap();
        assert_eq!(s, back);

        let err = parse_substitution("a -> ab\nb =>\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            _ => panic!("expected parse error"),
        }

        let bracketed = parse_substitution("[a12] -> [a12][b3]\n[b3] -> [a12]\n").unwrap();
        assert_eq!(bracketed.alphabet.name(Letter(0)), "a12");
        let rt = parse_substitution(&format_substitution(&bracketed)).unwrap();
        assert_eq!(bracketed, rt);
    }

    #[test]
    fn language_extension_closed() {
        let s = fixtures::example1();
        let lang = s.language(4).unwrap();
        for len in 1..4 {
            for w in lang.of_len(len) {
                let mut extended_left = false;
                let mut extended_right = false;
                for l in s.alphabet.letters() {
                    let mut left = vec![l];
                    left.extend_from_slice(&w.0);
                    if lang.contains(&Word(left)) {
                        extended_left = true;
                    }
                    let mut right = w.0.clone();
                    right.push(l);
                    if lang.contains(&Word(right)) {
                        extended_right = true;
                    }
                }
                assert!(extended_left && extended_right);
            }
        }
    }
}
