//! Singular data of the attracting shift: special rays, singular
//! bi-infinite words and their classes under the share-a-half relation, the
//! index, singular expansion pairs, and the finite sets of singular points
//! per letter tile with free-group labels.
//!
//! Discovery is language based: special factors of growing length expose
//! the finitely many special infinite rays, each certified afterwards as a
//! fixed ray of `x ↦ drop_d(σ^k(x))`. Expansion pairs are produced by
//! shifting each sharing pair in its sharing-preserving direction with the
//! successor (Vershik) map, while the final edges differ. Shifting in the
//! other direction would keep final edges distinct without keeping the
//! words identified, so it is not performed.

use crate::automaton::{covershik, vershik, EvPeriodicPath, PsAutomaton};
use crate::biword::{BiInfiniteWord, RaySpec, Side};
use crate::error::{Error, Result};
use crate::freegroup::{apply_inverse, inverse_automorphism, FWord};
use crate::recognize::{expansion, RecognitionCaps};
use crate::substitution::{FactorSet, Letter, Substitution, Word};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct SingularCaps {
    /// Base stabilization length L; special factors are tracked to 2L.
    pub special_len: usize,
    /// Doublings of L allowed before giving up.
    pub len_doublings: u32,
    /// Period cap for ray certification.
    pub ray_period_cap: usize,
    /// Cap on branch events per one-sided completion.
    pub branch_events: usize,
    /// Shift bound for expansion pairs.
    pub shift_bound: usize,
    /// Consecutive coinciding final edges required to stop shifting.
    pub verify_window: usize,
    /// Window length for share-a-half checks.
    pub share_window: usize,
    /// Length cap for the inverse automorphism search.
    pub inverse_cap: usize,
    pub recognition: RecognitionCaps,
}

impl Default for SingularCaps {
    fn default() -> Self {
        SingularCaps {
            special_len: 64,
            len_doublings: 3,
            ray_period_cap: 12,
            branch_events: 8,
            shift_bound: 64,
            verify_window: 4,
            share_window: 200,
            inverse_cap: 8,
            recognition: RecognitionCaps::default(),
        }
    }
}

/// Which side branches: a `LeftSpecial` ray is right-infinite with several
/// left extensions; a `RightSpecial` ray is left-infinite.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecialSide {
    LeftSpecial,
    RightSpecial,
}

#[derive(Clone, Debug)]
pub struct SpecialRay {
    pub side: SpecialSide,
    pub ray: RaySpec,
    pub extensions: Vec<Letter>,
}

/// One singular bi-infinite word, with its expansion.
#[derive(Clone, Debug)]
pub struct Member {
    pub word: BiInfiniteWord,
    pub path: EvPeriodicPath,
    pub class: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SingularClass {
    pub members: Vec<usize>,
    /// Direct sharing relations between members: (i, j, side shared).
    pub sharings: Vec<(usize, usize, Side)>,
    pub index: i64,
}

/// A singular point of a tile `Ω_a`: the Q-identified set of tails ending
/// at `a`, plus a free-group label `g·H^k(P_c)` relative to a class base.
#[derive(Clone, Debug)]
pub struct SingPoint {
    pub rep: EvPeriodicPath,
    pub tails: Vec<EvPeriodicPath>,
    pub label: Option<PointLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLabel {
    pub class: usize,
    pub word: FWord,
    pub h_power: i64,
}

#[derive(Clone, Debug)]
pub struct SingularAnalysis {
    pub rays: Vec<SpecialRay>,
    pub members: Vec<Member>,
    pub classes: Vec<SingularClass>,
    pub index_total: i64,
    pub parageometric: bool,
    /// All singular expansion pairs, transitively closed, stored with the
    /// smaller path first.
    pub pairs: BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
    /// Labels of pair-member expansions and their tails.
    pub labels: BTreeMap<EvPeriodicPath, PointLabel>,
    /// Per letter: the singular points of Ω_a.
    pub sing: Vec<Vec<SingPoint>>,
    /// Images of the generators under σ⁻¹.
    pub inverse_images: Vec<FWord>,
    /// True when a search cap influenced a stop decision.
    pub cap_hit: bool,
}

/// Left-special (or right-special) factors of the given length with their
/// extension letter sets.
fn special_factors(
    sub: &Substitution,
    lang: &FactorSet,
    len: usize,
    side: SpecialSide,
) -> Vec<(Word, Vec<Letter>)> {
    let mut out = Vec::new();
    for w in lang.of_len(len) {
        let mut exts = Vec::new();
        for l in sub.alphabet.letters() {
            let cand = match side {
                SpecialSide::LeftSpecial => Word::single(l).concat(w),
                SpecialSide::RightSpecial => w.concat(&Word::single(l)),
            };
            if lang.contains(&cand) {
                exts.push(l);
            }
        }
        if exts.len() >= 2 {
            out.push((w.clone(), exts));
        }
    }
    out
}

/// Grows special factors until the branch structure is identical at lengths
/// L and 2L, then certifies each branch as a quasi-fixed ray.
pub fn special_rays(sub: &Substitution, caps: &SingularCaps) -> Result<Vec<SpecialRay>> {
    if !sub.is_primitive() {
        return Err(Error::Gate("special rays require a primitive substitution".into()));
    }
    let mut l = caps.special_len;
    for _ in 0..=caps.len_doublings {
        match special_rays_at(sub, caps, l) {
            Ok(r) => return Ok(r),
            Err(Error::CapExceeded(_)) => l *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::CapExceeded("special ray structure did not stabilize".into()))
}

fn special_rays_at(sub: &Substitution, caps: &SingularCaps, l: usize) -> Result<Vec<SpecialRay>> {
    let lang = sub.language(2 * l + 1)?;
    let mut rays = Vec::new();
    for side in [SpecialSide::LeftSpecial, SpecialSide::RightSpecial] {
        let long = special_factors(sub, &lang, 2 * l, side);
        let short = special_factors(sub, &lang, l, side);
        // stability: each long branch restricts to a distinct short branch
        // with the same extension set, and the counts agree
        if long.len() != short.len() {
            return Err(Error::CapExceeded(format!(
                "special branch count {} at {l} vs {} at {}",
                short.len(),
                long.len(),
                2 * l
            )));
        }
        for (w, exts) in &long {
            let restricted = match side {
                SpecialSide::LeftSpecial => Word(w.0[..l].to_vec()),
                SpecialSide::RightSpecial => Word(w.0[w.len() - l..].to_vec()),
            };
            let hit = short.iter().find(|(sw, _)| *sw == restricted);
            match hit {
                Some((_, sexts)) if sexts == exts => {}
                _ => return Err(Error::CapExceeded("branch extension sets unstable".into())),
            }
        }
        for (w, exts) in long {
            let ray_side = match side {
                SpecialSide::LeftSpecial => Side::Right,
                SpecialSide::RightSpecial => Side::Left,
            };
            let ray = certify_window_ray(sub, &w, ray_side, caps)?;
            rays.push(SpecialRay { side, ray, extensions: exts });
        }
    }
    Ok(rays)
}

/// Finds `(k, d)` with `ray = drop_d(σ^k(ray))` on the available window and
/// returns the exact quasi-fixed machine reproducing the window.
pub fn certify_window_ray(
    sub: &Substitution,
    window: &Word,
    ray_side: Side,
    caps: &SingularCaps,
) -> Result<RaySpec> {
    let n = window.len();
    for k in 1..=caps.ray_period_cap {
        let img = sub.apply_power(window, k);
        // A ray produced by k desubstitution-cycling steps has its origin
        // within the σ^k-image of a prefix of at most k·max|σ| letters;
        // larger offsets are spurious window coincidences.
        let m = (k * sub.max_image_len() + 1).min(n);
        let origin_slice = match ray_side {
            Side::Right => Word(window.0[..m].to_vec()),
            Side::Left => Word(window.0[n - m..].to_vec()),
        };
        let d_bound = sub.apply_power(&origin_slice, k).len().saturating_sub(1);
        // σ^k overshoots the origin end by d: ray = drop_d(σ^k(ray))
        let dmax = img.len().saturating_sub(n + 1).min(d_bound);
        for d in 0..=dmax {
            let ok = match ray_side {
                Side::Right => img.0[d..d + n] == window.0[..],
                Side::Left => img.0[img.len() - d - n..img.len() - d] == window.0[..],
            };
            if !ok {
                continue;
            }
            let mut seed_len = 1;
            while seed_len <= n {
                let seed = match ray_side {
                    Side::Right => Word(window.0[..seed_len].to_vec()),
                    Side::Left => Word(window.0[n - seed_len..].to_vec()),
                };
                let spec =
                    RaySpec::QuasiFixed { transient: Word::empty(), seed, period: k, drop: d };
                if spec.validate(sub, ray_side).is_ok()
                    && spec.window(sub, ray_side, n) == *window
                {
                    return Ok(spec);
                }
                seed_len *= 2;
            }
        }
        // σ^k undershoots by d: ray = σ^k(ray)·t with t the d origin-side
        // letters, which telescopes to ⋯σ^{2k}(t)·σ^k(t)·t
        for d in 1..=d_bound.min(n - 1) {
            let keep = n - d;
            let ok = match ray_side {
                Side::Right => img.len() >= keep && img.0[..keep] == window.0[d..],
                Side::Left => {
                    img.len() >= keep && img.0[img.len() - keep..] == window.0[..keep]
                }
            };
            if !ok {
                continue;
            }
            let t = match ray_side {
                Side::Right => Word(window.0[..d].to_vec()),
                Side::Left => Word(window.0[n - d..].to_vec()),
            };
            let spec = RaySpec::Telescope {
                transient: t.clone(),
                block: t,
                start: k,
                step: k,
            };
            if spec.window(sub, ray_side, n) == *window {
                return Ok(spec);
            }
        }
    }
    Err(Error::CapExceeded("ray is not quasi-fixed within the period cap".into()))
}

/// Completes the free side of a special-ray extension letter by letter.
/// Extension queries scan a long iterated-image corpus; an answer is
/// accepted once it is stable under one more substitution application of
/// the corpus. Persistent multi-letter answers branch the completion (a
/// genuinely shared half). A candidate ray machine is accepted only when
/// the word it defines desubstitutes into a certified eventually periodic
/// expansion whose canonical rebuild reproduces the word.
fn complete_member(
    sub: &Substitution,
    aut: &PsAutomaton,
    corpus: &mut Corpus,
    fixed: &RaySpec,
    fixed_side: Side,
    first: Letter,
    caps: &SingularCaps,
) -> Result<Vec<(BiInfiniteWord, EvPeriodicPath)>> {
    let target = caps.special_len.max(32);
    let mut done = Vec::new();
    let mut queue: Vec<Vec<Letter>> = vec![vec![first]];
    let mut events = 0usize;
    // expansion attempts during completion run with a tighter radius ladder
    let mut quick = caps.recognition.clone();
    quick.max_doublings = quick.max_doublings.min(7);
    while let Some(start) = queue.pop() {
        let mut acc = start;
        let mut next_try = target;
        loop {
            if acc.len() >= next_try {
                next_try = acc.len() * 3 / 2;
                let other = if fixed_side == Side::Right { Side::Left } else { Side::Right };
                let acc_word = match fixed_side {
                    Side::Right => Word(acc.iter().rev().copied().collect()),
                    Side::Left => Word(acc.clone()),
                };
                if let Ok(spec) = certify_window_ray(sub, &acc_word, other, caps) {
                    let word = match fixed_side {
                        Side::Right => BiInfiniteWord::new(sub, spec, fixed.clone())?,
                        Side::Left => BiInfiniteWord::new(sub, fixed.clone(), spec)?,
                    };
                    if let Ok(path) = expansion(sub, aut, &word, &quick) {
                        let r = caps.recognition.cert_radius;
                        let (hint, o) = word.window(sub, r);
                        let lh = Word(hint.0[..o].to_vec());
                        let rh = Word(hint.0[o..].to_vec());
                        if let Ok(rebuilt) =
                            crate::recognize::word_from_path(sub, aut, &path, Some(&lh), Some(&rh))
                        {
                            if rebuilt.eq_window(sub, &word, r) {
                                done.push((rebuilt, path));
                                break;
                            }
                        }
                    }
                }
                if acc.len() >= 16 * target {
                    return Err(Error::CapExceeded(
                        "one-sided completion failed to certify".into(),
                    ));
                }
            }
            let cands = extension_candidates(sub, corpus, fixed, fixed_side, &acc)?;
            match cands.len() {
                0 => {
                    return Err(Error::Invariant(
                        "one-sided completion died; corpus too small".into(),
                    ))
                }
                1 => acc.push(cands[0]),
                _ => {
                    events += 1;
                    if events > caps.branch_events {
                        return Err(Error::CapExceeded(
                            "too many completion branch events".into(),
                        ));
                    }
                    for &alt in &cands[1..] {
                        let mut nacc = acc.clone();
                        nacc.push(alt);
                        queue.push(nacc);
                    }
                    acc.push(cands[0]);
                }
            }
        }
    }
    Ok(done)
}

/// Letters extending the completion by one, read off corpus occurrences of
/// the context word nearest the new letter. The fixed-ray probe grows with
/// the completion so that spurious branchings resolve.
fn extension_candidates(
    sub: &Substitution,
    corpus: &mut Corpus,
    fixed: &RaySpec,
    fixed_side: Side,
    acc: &[Letter],
) -> Result<Vec<Letter>> {
    let probe = acc.len() + 64;
    let fixed_win = fixed.window(sub, fixed_side, probe);
    let ctx = match fixed_side {
        Side::Right => {
            let mut w: Vec<Letter> = acc.iter().rev().copied().collect();
            w.extend(fixed_win.0.iter().copied());
            Word(w)
        }
        Side::Left => {
            let mut w = fixed_win.0.clone();
            w.extend(acc.iter().copied());
            Word(w)
        }
    };
    let before = fixed_side == Side::Right;
    corpus.extensions(sub, &ctx, before)
}

/// A long iterated image used for occurrence queries. An answer is accepted
/// once it is nonempty and unchanged under one more application of σ to
/// the corpus.
pub struct Corpus {
    text: Word,
    next: Word,
}

impl Corpus {
    pub fn new(sub: &Substitution) -> Result<Self> {
        if !sub.is_primitive() {
            return Err(Error::Gate("corpus requires a primitive substitution".into()));
        }
        let mut text = Word::single(Letter(0));
        while text.len() < 4096 {
            text = sub.apply(&text);
        }
        let next = sub.apply(&text);
        Ok(Corpus { text, next })
    }

    /// Letters preceding (or following) occurrences of `w`.
    pub fn extensions(
        &mut self,
        sub: &Substitution,
        w: &Word,
        before: bool,
    ) -> Result<Vec<Letter>> {
        loop {
            let cur = scan_extensions(&self.text, w, before);
            let nxt = scan_extensions(&self.next, w, before);
            if !cur.is_empty() && cur == nxt {
                return Ok(cur);
            }
            if self.next.len() > 64_000_000 {
                return Err(Error::CapExceeded("corpus growth exhausted".into()));
            }
            self.text = std::mem::take(&mut self.next);
            self.next = sub.apply(&self.text);
        }
    }
}

/// Occurrence scan using a short anchor prefix, then full verification.
fn scan_extensions(text: &Word, w: &Word, before: bool) -> Vec<Letter> {
    let n = w.len();
    let mut out: Vec<Letter> = Vec::new();
    if text.len() < n + 1 {
        return out;
    }
    let alen = n.min(48);
    let anchor = &w.0[..alen];
    for i in 0..=text.len() - n {
        if text.0[i..i + alen] == anchor[..] && text.0[i..i + n] == w.0[..] {
            let l = if before {
                if i == 0 {
                    continue;
                }
                text.0[i - 1]
            } else {
                if i + n >= text.len() {
                    continue;
                }
                text.0[i + n]
            };
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    out.sort();
    out
}

pub fn analyze(sub: &Substitution, caps: &SingularCaps) -> Result<SingularAnalysis> {
    let aut = PsAutomaton::build(sub);
    let rays = special_rays(sub, caps)?;
    let mut corpus = Corpus::new(sub)?;

    // members per ray
    let mut members: Vec<Member> = Vec::new();
    let mut classes: Vec<SingularClass> = Vec::new();
    for ray in &rays {
        let class_id = classes.len();
        let mut class = SingularClass::default();
        let fixed_side = match ray.side {
            SpecialSide::LeftSpecial => Side::Right,
            SpecialSide::RightSpecial => Side::Left,
        };
        for &x in &ray.extensions {
            for (word, path) in
                complete_member(sub, &aut, &mut corpus, &ray.ray, fixed_side, x, caps)?
            {
                members.push(Member { word, path, class: class_id });
                class.members.push(members.len() - 1);
            }
        }
        for i in 0..class.members.len() {
            for j in i + 1..class.members.len() {
                class.sharings.push((class.members[i], class.members[j], fixed_side));
            }
        }
        classes.push(class);
    }

    // deduplicate identical members (a word singular on both sides shows up
    // once per side) and merge classes connected by a shared half
    let mut canon: Vec<usize> = (0..members.len()).collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if canon[j] != j {
                continue;
            }
            if members[i].path == members[j].path
                && members[i].word.eq_window(sub, &members[j].word, caps.share_window)
            {
                canon[j] = canon[i];
            }
        }
    }
    let mut class_union: Vec<usize> = (0..classes.len()).collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (ci, cj) = (members[i].class, members[j].class);
            if uf_find(&mut class_union, ci) == uf_find(&mut class_union, cj) {
                continue;
            }
            if canon[j] == canon[i]
                || shares_half(sub, &members[i].word, &members[j].word, caps).is_some()
            {
                let (ri, rj) = (uf_find(&mut class_union, ci), uf_find(&mut class_union, cj));
                class_union[rj] = ri;
            }
        }
    }
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut merged: Vec<SingularClass> = Vec::new();
    for c in 0..classes.len() {
        let root = uf_find(&mut class_union, c);
        let nid = *remap.entry(root).or_insert_with(|| {
            merged.push(SingularClass::default());
            merged.len() - 1
        });
        for &m in &classes[c].members {
            if canon[m] == m && !merged[nid].members.contains(&m) {
                merged[nid].members.push(m);
            }
        }
        for &(a, b, s) in &classes[c].sharings {
            let (a, b) = (canon[a], canon[b]);
            if a != b && !merged[nid].sharings.contains(&(a, b, s)) {
                merged[nid].sharings.push((a, b, s));
            }
        }
    }
    for m in members.iter_mut() {
        let root = uf_find(&mut class_union, m.class);
        m.class = remap[&root];
    }
    // cross-ray sharings inside merged classes
    for class in merged.iter_mut() {
        let mems = class.members.clone();
        for (ai, &a) in mems.iter().enumerate() {
            for &b in mems.iter().skip(ai + 1) {
                if class
                    .sharings
                    .iter()
                    .any(|&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
                {
                    continue;
                }
                if let Some(side) = shares_half(sub, &members[a].word, &members[b].word, caps) {
                    class.sharings.push((a, b, side));
                }
            }
        }
    }
    let mut classes = merged;

    // index
    let mut index_total = 0i64;
    for class in classes.iter_mut() {
        let mut lefts = BTreeSet::new();
        let mut rights = BTreeSet::new();
        for &m in &class.members {
            lefts.insert(members[m].word.letter_at(sub, -1));
            rights.insert(members[m].word.letter_at(sub, 0));
        }
        class.index = lefts.len() as i64 + rights.len() as i64 - 2;
        index_total += class.index;
    }
    let parageometric = index_total == 2 * sub.letter_count() as i64 - 2;

    // singular expansion pairs
    let mut pairs: BTreeSet<(EvPeriodicPath, EvPeriodicPath)> = BTreeSet::new();
    let mut vershik_edges: Vec<(EvPeriodicPath, EvPeriodicPath, Letter)> = Vec::new();
    let mut cap_hit = false;
    for class in &classes {
        for (ai, &a) in class.members.iter().enumerate() {
            for &b in class.members.iter().skip(ai + 1) {
                record_pair(&mut pairs, &members[a].path, &members[b].path);
            }
        }
        for &(a, b, side) in &class.sharings {
            shift_pair_orbit(
                sub,
                &aut,
                &members[a],
                &members[b],
                side,
                caps,
                &mut pairs,
                &mut vershik_edges,
                &mut cap_hit,
            )?;
        }
    }
    let pairs = close_pairs(pairs);

    let inverse_images = inverse_automorphism(sub, caps.inverse_cap)?;

    // tails of pair members (beheaded at least once) are the singular points
    let mut pair_paths: BTreeSet<EvPeriodicPath> = BTreeSet::new();
    for (a, b) in &pairs {
        pair_paths.insert(a.clone());
        pair_paths.insert(b.clone());
    }
    let mut tails: BTreeSet<EvPeriodicPath> = BTreeSet::new();
    for p in &pair_paths {
        for t in p.tails(&aut, 1) {
            tails.insert(t);
        }
    }
    let mut nodes: BTreeSet<EvPeriodicPath> = pair_paths.clone();
    nodes.extend(tails.iter().cloned());
    let mut behead_edges: Vec<(EvPeriodicPath, EvPeriodicPath)> = Vec::new();
    for n in &nodes {
        let b = n.behead(&aut, 1);
        if nodes.contains(&b) {
            behead_edges.push((n.clone(), b));
        }
    }

    let labels = propagate_labels(
        sub,
        &aut,
        &classes,
        &members,
        &pairs,
        &nodes,
        &behead_edges,
        &vershik_edges,
        &inverse_images,
    )?;

    let mut sing: Vec<Vec<SingPoint>> = vec![Vec::new(); sub.letter_count()];
    let mut assigned: BTreeSet<EvPeriodicPath> = BTreeSet::new();
    let tails_sorted: Vec<EvPeriodicPath> = tails.iter().cloned().collect();
    for t in &tails_sorted {
        if assigned.contains(t) {
            continue;
        }
        let letter = t.end_letter();
        let mut group = vec![t.clone()];
        assigned.insert(t.clone());
        for u in &tails_sorted {
            if assigned.contains(u) || u.end_letter() != letter {
                continue;
            }
            if q_equal(&aut, &pairs, t, u) {
                group.push(u.clone());
                assigned.insert(u.clone());
            }
        }
        let label = labels.get(&group[0]).cloned();
        sing[letter.0 as usize].push(SingPoint { rep: group[0].clone(), tails: group, label });
    }

    Ok(SingularAnalysis {
        rays,
        members,
        classes,
        index_total,
        parageometric,
        pairs,
        labels,
        sing,
        inverse_images,
        cap_hit,
    })
}

fn uf_find(u: &mut Vec<usize>, x: usize) -> usize {
    if u[x] != x {
        let r = uf_find(u, u[x]);
        u[x] = r;
        r
    } else {
        x
    }
}

/// Which half two distinct words share, if any (window-checked).
fn shares_half(
    sub: &Substitution,
    a: &BiInfiniteWord,
    b: &BiInfiniteWord,
    caps: &SingularCaps,
) -> Option<Side> {
    let w = caps.share_window;
    let (wa, oa) = a.window(sub, w);
    let (wb, ob) = b.window(sub, w);
    if wa.0[oa..] == wb.0[ob..] && wa.0[..oa] != wb.0[..ob] {
        return Some(Side::Right);
    }
    if wa.0[..oa] == wb.0[..ob] && wa.0[oa..] != wb.0[ob..] {
        return Some(Side::Left);
    }
    None
}

fn record_pair(
    pairs: &mut BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
    a: &EvPeriodicPath,
    b: &EvPeriodicPath,
) -> bool {
    if a == b || a.first_edge() == b.first_edge() {
        return false;
    }
    let (x, y) = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    pairs.insert((x, y))
}

#[allow(clippy::too_many_arguments)]
fn shift_pair_orbit(
    sub: &Substitution,
    aut: &PsAutomaton,
    a: &Member,
    b: &Member,
    side: Side,
    caps: &SingularCaps,
    pairs: &mut BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
    vershik_edges: &mut Vec<(EvPeriodicPath, EvPeriodicPath, Letter)>,
    cap_hit: &mut bool,
) -> Result<()> {
    // sharing the right half survives positive shifts, the left negative
    let positive = side == Side::Right;
    let (pmin, pmax) = crate::automaton::p_extreme(sub, aut)?;
    let mut ga = a.path.clone();
    let mut gb = b.path.clone();
    let mut equal_run = 0usize;
    for step in 1..=caps.shift_bound {
        let i = if positive { step as i64 } else { -(step as i64) };
        let na = step_expansion(sub, aut, &ga, &a.word, i, positive, &pmin, &pmax)?;
        let nb = step_expansion(sub, aut, &gb, &b.word, i, positive, &pmin, &pmax)?;
        if positive {
            vershik_edges.push((ga.clone(), na.clone(), ga.end_letter()));
            vershik_edges.push((gb.clone(), nb.clone(), gb.end_letter()));
        } else {
            vershik_edges.push((na.clone(), ga.clone(), na.end_letter()));
            vershik_edges.push((nb.clone(), gb.clone(), nb.end_letter()));
        }
        ga = na;
        gb = nb;
        if ga.first_edge() == gb.first_edge() {
            equal_run += 1;
            if equal_run >= caps.verify_window {
                return Ok(());
            }
        } else {
            equal_run = 0;
            record_pair(pairs, &ga, &gb);
        }
    }
    *cap_hit = true;
    Err(Error::CapExceeded("pair shifting exceeded the shift bound".into()))
}

/// Expansion of the shift of a word whose current expansion is `path`. At
/// the extreme paths the successor jumps between `P_max` and `P_min`; the
/// landing path is the one ending at the letter the origin crosses.
fn step_expansion(
    sub: &Substitution,
    aut: &PsAutomaton,
    path: &EvPeriodicPath,
    word: &BiInfiniteWord,
    new_shift: i64,
    positive: bool,
    pmin: &[EvPeriodicPath],
    pmax: &[EvPeriodicPath],
) -> Result<EvPeriodicPath> {
    if positive {
        if path.all_suffixes_empty(aut) {
            let l = word.letter_at(sub, new_shift);
            pmin.iter()
                .find(|p| p.end_letter() == l)
                .cloned()
                .ok_or_else(|| Error::Invariant("no min path at successor letter".into()))
        } else {
            vershik(sub, aut, path)
        }
    } else if path.all_prefixes_empty(aut) {
        let l = word.letter_at(sub, new_shift);
        pmax.iter()
            .find(|p| p.end_letter() == l)
            .cloned()
            .ok_or_else(|| Error::Invariant("no max path at predecessor letter".into()))
    } else {
        covershik(sub, aut, path)
    }
}

fn close_pairs(
    pairs: BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
) -> BTreeSet<(EvPeriodicPath, EvPeriodicPath)> {
    let mut ids: BTreeMap<EvPeriodicPath, usize> = BTreeMap::new();
    let mut paths: Vec<EvPeriodicPath> = Vec::new();
    for (a, b) in &pairs {
        for p in [a, b] {
            if !ids.contains_key(p) {
                ids.insert(p.clone(), paths.len());
                paths.push(p.clone());
            }
        }
    }
    let mut parent: Vec<usize> = (0..paths.len()).collect();
    for (a, b) in &pairs {
        let (ra, rb) = (uf_find(&mut parent, ids[a]), uf_find(&mut parent, ids[b]));
        if ra != rb {
            parent[rb] = ra;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..paths.len() {
        let r = uf_find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out = BTreeSet::new();
    for group in groups.values() {
        for (ii, &i) in group.iter().enumerate() {
            for &j in group.iter().skip(ii + 1) {
                record_pair(&mut out, &paths[i], &paths[j]);
            }
        }
    }
    out
}

/// Q-equality of two eventually periodic paths, decided from the closed
/// pair set: equal paths, a recorded pair, or (same final edge) recursion
/// on the beheadings.
pub fn q_equal(
    aut: &PsAutomaton,
    pairs: &BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
    a: &EvPeriodicPath,
    b: &EvPeriodicPath,
) -> bool {
    let mut x = a.clone();
    let mut y = b.clone();
    let mut guard = 0usize;
    let bound = 4 * (a.head.len() + a.cycle.len()) * (b.head.len() + b.cycle.len()) + 16;
    loop {
        if x == y {
            return true;
        }
        let key = if x < y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        if pairs.contains(&key) {
            return true;
        }
        if x.first_edge() != y.first_edge() {
            return false;
        }
        x = x.behead(aut, 1);
        y = y.behead(aut, 1);
        guard += 1;
        if guard > bound {
            // cycled in lockstep without diverging: the paths are equal
            return true;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn propagate_labels(
    sub: &Substitution,
    aut: &PsAutomaton,
    classes: &[SingularClass],
    members: &[Member],
    pairs: &BTreeSet<(EvPeriodicPath, EvPeriodicPath)>,
    nodes: &BTreeSet<EvPeriodicPath>,
    behead_edges: &[(EvPeriodicPath, EvPeriodicPath)],
    vershik_edges: &[(EvPeriodicPath, EvPeriodicPath, Letter)],
    inverse_images: &[FWord],
) -> Result<BTreeMap<EvPeriodicPath, PointLabel>> {
    #[derive(Clone)]
    enum Rel {
        Equal,
        /// to = H⁻¹(p · from)
        Behead(Word),
        /// to = a₀⁻¹ · from (successor step; a₀ = end letter of `from`)
        Shift(Letter),
        /// reverse of `Shift`: to = a₀ · from
        UnShift(Letter),
    }
    let mut adj: BTreeMap<EvPeriodicPath, Vec<(EvPeriodicPath, Rel)>> = BTreeMap::new();
    {
        let mut add = |from: &EvPeriodicPath, to: &EvPeriodicPath, rel: Rel| {
            adj.entry(from.clone()).or_default().push((to.clone(), rel));
        };
        for (a, b) in pairs {
            add(a, b, Rel::Equal);
            add(b, a, Rel::Equal);
        }
        for (n, bn) in behead_edges {
            let p = aut.edge(n.first_edge()).prefix.clone();
            add(n, bn, Rel::Behead(p));
        }
        for (g, vg, l) in vershik_edges {
            if nodes.contains(g) && nodes.contains(vg) {
                add(g, vg, Rel::Shift(*l));
                add(vg, g, Rel::UnShift(*l));
            }
        }
    }
    let mut labels: BTreeMap<EvPeriodicPath, PointLabel> = BTreeMap::new();
    let mut h_relations: BTreeMap<usize, (i64, FWord)> = BTreeMap::new();
    for (cid, class) in classes.iter().enumerate() {
        let mut base: Option<EvPeriodicPath> = None;
        for &m in &class.members {
            let p = &members[m].path;
            if nodes.contains(p) && (base.is_none() || p < base.as_ref().unwrap()) {
                base = Some(p.clone());
            }
        }
        let Some(base) = base else { continue };
        if labels.contains_key(&base) {
            continue;
        }
        labels.insert(base.clone(), PointLabel { class: cid, word: FWord::identity(), h_power: 0 });
        let mut queue = vec![base];
        while let Some(cur) = queue.pop() {
            let cur_label = labels[&cur].clone();
            let Some(nexts) = adj.get(&cur).cloned() else { continue };
            for (to, rel) in nexts {
                let new_label = match rel {
                    Rel::Equal => cur_label.clone(),
                    Rel::Behead(ref p) => PointLabel {
                        class: cur_label.class,
                        word: apply_inverse(
                            inverse_images,
                            &FWord::from_word(p).mul(&cur_label.word),
                        ),
                        h_power: cur_label.h_power - 1,
                    },
                    Rel::Shift(l) => PointLabel {
                        class: cur_label.class,
                        word: FWord::gen_inv(l).mul(&cur_label.word),
                        h_power: cur_label.h_power,
                    },
                    Rel::UnShift(l) => PointLabel {
                        class: cur_label.class,
                        word: FWord::gen(l).mul(&cur_label.word),
                        h_power: cur_label.h_power,
                    },
                };
                match labels.get(&to) {
                    None => {
                        labels.insert(to.clone(), new_label);
                        queue.push(to);
                    }
                    Some(old) => {
                        if old.h_power != new_label.h_power && old.class == new_label.class {
                            let (hi, lo) = if old.h_power > new_label.h_power {
                                (old.clone(), new_label.clone())
                            } else {
                                (new_label.clone(), old.clone())
                            };
                            let d = hi.h_power - lo.h_power;
                            // u·H^hi(P) = u'·H^lo(P) ⟹ H^d(P) = σ^{-lo}(u⁻¹u')·P
                            let mut v = hi.word.inverse().mul(&lo.word);
                            if lo.h_power >= 0 {
                                for _ in 0..lo.h_power {
                                    v = apply_inverse(inverse_images, &v);
                                }
                            } else {
                                for _ in 0..(-lo.h_power) {
                                    v = crate::freegroup::apply_automorphism(sub, &v);
                                }
                            }
                            let e = h_relations.entry(cur_label.class).or_insert((d, v.clone()));
                            if e.0 > d {
                                *e = (d, v);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (path, label) in labels {
        out.insert(path, reduce_label(sub, inverse_images, &h_relations, label));
    }
    Ok(out)
}

/// Rewrites `u·H^k(P)` with the class relation `H^d(P) = v·P` until
/// `0 ≤ k < d`.
fn reduce_label(
    sub: &Substitution,
    inverse_images: &[FWord],
    h_relations: &BTreeMap<usize, (i64, FWord)>,
    label: PointLabel,
) -> PointLabel {
    let Some((d, v)) = h_relations.get(&label.class) else { return label };
    let d = *d;
    let mut k = label.h_power;
    let mut u = label.word;
    while k >= d {
        // H^k(P) = H^{k−d}(v·P) = σ^{k−d}(v)·H^{k−d}(P)
        let mut w = v.clone();
        for _ in 0..(k - d) {
            w = crate::freegroup::apply_automorphism(sub, &w);
        }
        u = u.mul(&w);
        k -= d;
    }
    while k < 0 {
        // H^k(P) = H^{k+d}(H^{−d}P) and H^{−d}(P) = σ^{−d}(v⁻¹)·P
        let mut w = v.inverse();
        for _ in 0..d {
            w = apply_inverse(inverse_images, &w);
        }
        // conjugate down to level k+d
        let lvl = k + d;
        if lvl >= 0 {
            for _ in 0..lvl {
                w = crate::freegroup::apply_automorphism(sub, &w);
            }
        } else {
            for _ in 0..(-lvl) {
                w = apply_inverse(inverse_images, &w);
            }
        }
        u = u.mul(&w);
        k += d;
    }
    PointLabel { class: label.class, word: u, h_power: k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn caps() -> SingularCaps {
        SingularCaps { special_len: 32, ..Default::default() }
    }

    #[test]
    fn tribonacci_rays_and_classes() {
        let s = fixtures::tribonacci();
        let a = analyze(&s, &caps()).unwrap();
        assert_eq!(a.rays.len(), 2);
        assert_eq!(a.classes.len(), 2);
        for c in &a.classes {
            assert_eq!(c.members.len(), 3);
            assert_eq!(c.index, 2);
        }
        assert_eq!(a.index_total, 4);
        assert!(a.parageometric);
    }

    #[test]
    fn tribonacci_sing_sets_and_labels() {
        let s = fixtures::tribonacci();
        let a = analyze(&s, &caps()).unwrap();
        let sizes: Vec<usize> = a.sing.iter().map(|v| v.len()).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
        let label_strings = |i: usize| -> Vec<String> {
            let mut v: Vec<String> = a.sing[i]
                .iter()
                .map(|p| {
                    let l = p.label.as_ref().expect("label");
                    assert_eq!(l.h_power, 0, "unreduced H power");
                    l.word.display(&s)
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(label_strings(0), vec!["1", "b⁻¹", "c⁻¹"]);
        assert_eq!(label_strings(1), vec!["1", "a⁻¹"]);
        assert_eq!(label_strings(2), vec!["1"]);
    }

    #[test]
    fn tribonacci_pairs_contain_the_gamma_triples() {
        let s = fixtures::tribonacci();
        let aut = PsAutomaton::build(&s);
        let a = analyze(&s, &caps()).unwrap();
        let ga = fixtures::tribo_gamma_a(&aut);
        let gb = fixtures::tribo_gamma_b(&aut);
        let gc = fixtures::tribo_gamma_c(&aut);
        for (x, y) in [(&ga, &gb), (&ga, &gc), (&gb, &gc)] {
            let key =
                if x < y { ((*x).clone(), (*y).clone()) } else { ((*y).clone(), (*x).clone()) };
            assert!(a.pairs.contains(&key), "missing pair");
        }
        assert!(a.pairs.len() >= 6);
    }

    #[test]
    fn example1_structure() {
        let s = fixtures::example1();
        let a = analyze(&s, &caps()).unwrap();
        // four classes of two members each, index 1 apiece
        assert_eq!(a.classes.len(), 4);
        for c in &a.classes {
            assert_eq!(c.members.len(), 2);
            assert_eq!(c.index, 1);
        }
        assert_eq!(a.index_total, 4);
        assert!(a.parageometric);
        let sizes: Vec<usize> = a.sing.iter().map(|v| v.len()).collect();
        assert_eq!(sizes, vec![3, 3, 3]);
    }

    #[test]
    fn non_primitive_is_rejected() {
        let s = crate::substitution::parse_substitution("a -> a\nb -> b\n").unwrap();
        assert!(matches!(special_rays(&s, &SingularCaps::default()), Err(Error::Gate(_))));
    }
}

/// Test-support wrapper around the one-sided completion.
pub fn debug_complete(
    sub: &Substitution,
    fixed: &RaySpec,
    fixed_side: Side,
    first: Letter,
    caps: &SingularCaps,
) -> Result<Vec<(BiInfiniteWord, EvPeriodicPath)>> {
    let aut = PsAutomaton::build(sub);
    let mut corpus = Corpus::new(sub)?;
    complete_member(sub, &aut, &mut corpus, fixed, fixed_side, first, caps)
}
