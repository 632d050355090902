use treesub::fixtures;
use treesub::biword::Side;
use treesub::singular::*;
use treesub::substitution::Word;

fn main() {
    let s = fixtures::example1();
    let caps = SingularCaps { special_len: 32, ..Default::default() };
    let rays = special_rays(&s, &caps).unwrap();
    let lang = s.language(513).unwrap();
    let mut truth: Vec<Word> = Vec::new();
    for w in lang.of_len(512) {
        let mut exts = 0;
        for l in s.alphabet.letters() {
            if lang.contains(&w.concat(&Word::single(l))) { exts += 1; }
        }
        if exts >= 2 { truth.push(w.clone()); }
    }
    println!("{} right-special factors of length 512", truth.len());
    for (i, r) in rays.iter().enumerate() {
        if r.side != SpecialSide::RightSpecial { continue; }
        let win = r.ray.window(&s, Side::Left, 512);
        let hit = truth.iter().any(|t| *t == win);
        println!("ray{i} matches at 512: {hit}  spec {:?}", r.ray);
    }
}
