//! Free group words over `A^{±1}` with free reduction, the action of a
//! substitution as a (positive) automorphism, and inverse-automorphism
//! computation by bounded search.

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution, Word};
use std::fmt;

/// Reduced word; `true` marks the inverse of a letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FWord(pub Vec<(Letter, bool)>);

impl fmt::Debug for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FWord(len {})", self.0.len())
    }
}

impl FWord {
    pub fn identity() -> Self {
        FWord(Vec::new())
    }

    pub fn from_word(w: &Word) -> Self {
        FWord(w.0.iter().map(|&l| (l, false)).collect())
    }

    pub fn gen(l: Letter) -> Self {
        FWord(vec![(l, false)])
    }

    pub fn gen_inv(l: Letter) -> Self {
        FWord(vec![(l, true)])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FWord) -> FWord {
        let mut v = self.0.clone();
        for &(l, inv) in &other.0 {
            if let Some(&(tl, tinv)) = v.last() {
                if tl == l && tinv != inv {
                    v.pop();
                    continue;
                }
            }
            v.push((l, inv));
        }
        FWord(v)
    }

    pub fn inverse(&self) -> FWord {
        FWord(self.0.iter().rev().map(|&(l, inv)| (l, !inv)).collect())
    }

    pub fn display(&self, sub: &Substitution) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        for &(l, inv) in &self.0 {
            let name = sub.alphabet.name(l);
            if inv {
                out.push_str(&format!("{name}⁻¹"));
            } else {
                out.push_str(name);
            }
        }
        out
    }
}

/// σ extended to the free group: `σ(x⁻¹) = σ(x)⁻¹`, images reduced.
pub fn apply_automorphism(sub: &Substitution, w: &FWord) -> FWord {
    let mut acc = FWord::identity();
    for &(l, inv) in &w.0 {
        let img = FWord::from_word(sub.image(l));
        let img = if inv { img.inverse() } else { img };
        acc = acc.mul(&img);
    }
    acc
}

/// The inverse automorphism as the list of images of the generators, found
/// by iterative elimination: each generator is expressed from the images.
/// Bounded search; errors when no expression of length ≤ cap exists.
pub fn inverse_automorphism(sub: &Substitution, cap: usize) -> Result<Vec<FWord>> {
    let n = sub.letter_count();
    // Breadth-first search in the free group for words u with σ(u) = x.
    // The search explores products of generators; pruning keeps only the
    // shortest representative per achieved image prefix length.
    let gens: Vec<FWord> = (0..n)
        .flat_map(|i| {
            [FWord::gen(Letter(i as u8)), FWord::gen_inv(Letter(i as u8))].into_iter()
        })
        .collect();
    let mut images: Vec<Option<FWord>> = vec![None; n];
    let mut frontier: Vec<FWord> = vec![FWord::identity()];
    let mut seen: std::collections::BTreeSet<FWord> = frontier.iter().cloned().collect();
    'outer: for _depth in 0..cap {
        let mut next = Vec::new();
        for u in &frontier {
            for g in &gens {
                let cand = u.mul(g);
                if cand.0.len() < u.0.len() {
                    continue; // cancelled: already seen shorter
                }
                if !seen.insert(cand.clone()) {
                    continue;
                }
                let img = apply_automorphism(sub, &cand);
                if img.0.len() == 1 && !img.0[0].1 {
                    let t = img.0[0].0 .0 as usize;
                    if images[t].is_none() {
                        images[t] = Some(cand.clone());
                        if images.iter().all(|i| i.is_some()) {
                            break 'outer;
                        }
                    }
                }
                next.push(cand);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| {
                Error::CapExceeded(format!(
                    "no inverse image of '{}' within length {cap}",
                    sub.alphabet.name(Letter(i as u8))
                ))
            })
        })
        .collect()
}

/// Applies the inverse automorphism (given by generator images) to a word.
pub fn apply_inverse(inv_images: &[FWord], w: &FWord) -> FWord {
    let mut acc = FWord::identity();
    for &(l, inv) in &w.0 {
        let img = &inv_images[l.0 as usize];
        let img = if inv { img.inverse() } else { img.clone() };
        acc = acc.mul(&img);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reduction_and_inverse() {
        let a = FWord::gen(Letter(0));
        let ai = FWord::gen_inv(Letter(0));
        assert!(a.mul(&ai).is_identity());
        let b = FWord::gen(Letter(1));
        let w = a.mul(&b).mul(&b.inverse()).mul(&a);
        assert_eq!(w.0.len(), 2);
    }

    #[test]
    fn tribonacci_inverse_automorphism() {
        let s = fixtures::tribonacci();
        let inv = inverse_automorphism(&s, 6).unwrap();
        // σ⁻¹: a↦c, b↦c⁻¹a, c↦c⁻¹b
        assert_eq!(inv[0], FWord::gen(Letter(2)));
        assert_eq!(inv[1], FWord::gen_inv(Letter(2)).mul(&FWord::gen(Letter(0))));
        assert_eq!(inv[2], FWord::gen_inv(Letter(2)).mul(&FWord::gen(Letter(1))));
        // round trip σ(σ⁻¹(x)) = x
        for l in s.alphabet.letters() {
            let img = apply_automorphism(&s, &inv[l.0 as usize]);
            assert_eq!(img, FWord::gen(l));
        }
    }

    #[test]
    fn example1_inverse_automorphism() {
        let s = fixtures::example1();
        let inv = inverse_automorphism(&s, 6).unwrap();
        for l in s.alphabet.letters() {
            let img = apply_automorphism(&s, &inv[l.0 as usize]);
            assert_eq!(img, FWord::gen(l));
        }
    }
}
