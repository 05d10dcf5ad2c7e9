#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use sadic::DirectiveSequence;

/// Admissible Brun pairs on three letters: each step repeats the previous
/// pair or starts from its second letter.
pub fn random_brun_pairs(rng: &mut impl Rng, len: usize) -> Vec<(u8, u8)> {
    let mut pairs = vec![(0u8, 1u8)];
    while pairs.len() < len {
        let (a, b) = *pairs.last().unwrap();
        if rng.gen_bool(0.4) {
            pairs.push((a, b));
        } else {
            let c = loop {
                let c = rng.gen_range(0..3u8);
                if c != b {
                    break c;
                }
            };
            pairs.push((b, c));
        }
    }
    pairs
}

/// `τ_1 ∘ ⋯ ∘ τ_{N−1}(a)` by repeated substitution, innermost first.
pub fn image(ds: &DirectiveSequence, a: u8, big_n: usize) -> Vec<u8> {
    let mut w = vec![a];
    for n in (1..big_n).rev() {
        let m = ds.morphism(n).unwrap();
        w = w
            .iter()
            .flat_map(|&c| m.image(c).as_slice().to_vec())
            .collect();
    }
    w
}

pub fn texts(ds: &DirectiveSequence, big_n: usize) -> Vec<Vec<u8>> {
    (0..ds.d() as u8).map(|a| image(ds, a, big_n)).collect()
}

pub fn factors(texts: &[Vec<u8>], n: usize) -> BTreeSet<Vec<u8>> {
    if n == 0 {
        return BTreeSet::from([Vec::new()]);
    }
    texts
        .iter()
        .flat_map(|t| t.windows(n).map(<[u8]>::to_vec))
        .collect()
}

pub fn count(w: &[u8], v: &[u8]) -> u64 {
    w.windows(v.len()).filter(|x| *x == v).count() as u64
}

/// Running maximum over lengths `m ≤ n` of the spread of `|u|_v` over
/// length-`m` factors `u`.
pub fn discrepancy(texts: &[Vec<u8>], v: &[u8], up_to: usize) -> Vec<u64> {
    let mut running = 0;
    (1..=up_to)
        .map(|m| {
            let counts: Vec<u64> = factors(texts, m).iter().map(|u| count(u, v)).collect();
            let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
            running = running.max(spread);
            running
        })
        .collect()
}

/// Return words read off consecutive occurrences of `w`.
pub fn returns(texts: &[Vec<u8>], w: &[u8]) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    for t in texts {
        let occ: Vec<usize> = (0..t.len().saturating_sub(w.len() - 1))
            .filter(|&i| t[i..].starts_with(w))
            .collect();
        for p in occ.windows(2) {
            out.insert(t[p[0]..p[1]].to_vec());
        }
    }
    out
}
