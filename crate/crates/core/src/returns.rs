//! Return words and the derived-sequence step.

use std::collections::BTreeSet;

use memchr::memmem;

use crate::directive::{certify, DirectiveSequence};
use crate::error::{invalid, precondition, Error, Result};
use crate::language::{build_language, DEFAULT_TEXT_CAP};
use crate::words::{Morphism, Word};

/// Starting positions of every (possibly overlapping) occurrence of `w`.
pub fn occurrences(text: &[u8], w: &[u8]) -> Vec<usize> {
    let finder = memmem::Finder::new(w);
    let mut out = Vec::new();
    let mut start = 0;
    while let Some(p) = finder.find(&text[start..]) {
        out.push(start + p);
        start += p + 1;
        if start >= text.len() {
            break;
        }
    }
    out
}

/// Gaps between consecutive occurrences of `w` in each text, as words, in
/// order of first appearance; also the number of occurrences seen.
pub fn scan_returns<'a>(
    texts: impl IntoIterator<Item = &'a [u8]>,
    w: &[u8],
) -> (Vec<Vec<u8>>, usize) {
    let mut seen = BTreeSet::new();
    let mut ordered = Vec::new();
    let mut count = 0;
    for t in texts {
        let occ = occurrences(t, w);
        count += occ.len();
        for pair in occ.windows(2) {
            let v = &t[pair[0]..pair[1]];
            if seen.insert(v) {
                ordered.push(v.to_vec());
            }
        }
    }
    (ordered, count)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnWords {
    pub word: Word,
    /// Sorted lexicographically.
    pub returns: Vec<Word>,
    /// Depth `N` of the images `τ_[1,N)(a)` the set was read from.
    pub depth: usize,
    pub occurrences: usize,
}

/// The return words to `w`, read from `τ_[1,N)(a)` for increasing `N` until
/// the set has not changed for `stability_rounds` depths and at least
/// `2·|set|·|w|` occurrences of `w` have been seen.
pub fn return_words(
    ds: &DirectiveSequence,
    w: &[u8],
    stability_rounds: usize,
) -> Result<ReturnWords> {
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() {
        return Err(precondition("return words need a primitive sequence"));
    }
    if w.is_empty() {
        // Every letter is a return word to the empty word.
        return Ok(ReturnWords {
            word: Word::empty(),
            returns: (0..ds.d() as u8)
                .map(|a| Word::from_indices(vec![a]))
                .collect(),
            depth: 1,
            occurrences: 0,
        });
    }
    let lang = build_language(ds, w.len())?;
    if !lang.contains(w) {
        return Err(invalid(format!(
            "{} is not in the language",
            ds.alphabet().render_slice(w)
        )));
    }
    let mut tower = ds.image_tower(DEFAULT_TEXT_CAP);
    let mut last: Option<BTreeSet<Vec<u8>>> = None;
    let mut stable = 0;
    while let Some((depth, images)) = tower.advance()? {
        let (found, count) = scan_returns(images.iter().map(Word::as_slice), w);
        let set: BTreeSet<Vec<u8>> = found.into_iter().collect();
        if set.is_empty() {
            continue;
        }
        if last.as_ref() == Some(&set) {
            stable += 1;
        } else {
            stable = 0;
        }
        let enough = count >= 2 * set.len() * w.len();
        if stable >= stability_rounds && enough {
            return Ok(ReturnWords {
                word: Word::from_indices(w.to_vec()),
                returns: set.into_iter().map(Word::from_indices).collect(),
                depth,
                occurrences: count,
            });
        }
        last = Some(set);
    }
    Err(Error::Inconclusive(format!(
        "return words to {} did not stabilise before the text cap",
        ds.alphabet().render_slice(w)
    )))
}

/// Longest common prefix of the images `τ_[1,N)(a)`, grown until it has at
/// least `len` letters. For left proper (blockwise) sequences this is a
/// prefix of the one-sided limit point `x`.
pub fn reference_prefix(ds: &DirectiveSequence, len: usize) -> Result<Word> {
    let mut tower = ds.image_tower(DEFAULT_TEXT_CAP);
    while let Some((_, images)) = tower.advance()? {
        let first = images[0].as_slice();
        let common = images[1..].iter().fold(first.len(), |acc, w| {
            acc.min(
                first
                    .iter()
                    .zip(w.as_slice())
                    .take_while(|(x, y)| x == y)
                    .count(),
            )
        });
        if common >= len {
            return Ok(Word::from_indices(first[..common].to_vec()));
        }
    }
    Err(Error::Inconclusive(format!(
        "the images do not share a common prefix of length {len} within the text cap"
    )))
}

/// Return words to `u` in `x`, ordered by first appearance, read from
/// growing prefixes of `x` until stable.
fn ordered_returns(ds: &DirectiveSequence, u_len: usize) -> Result<(Vec<u8>, Vec<Vec<u8>>)> {
    let mut len = 64 * (u_len + 1);
    let mut last: Option<Vec<Vec<u8>>> = None;
    let mut stable = 0;
    loop {
        let x = reference_prefix(ds, len)?;
        let x = x.as_slice();
        let u = &x[..u_len];
        let (found, count) = scan_returns([x], u);
        if last.as_ref() == Some(&found) && count >= 2 * found.len() * u_len.max(1) {
            stable += 1;
            if stable >= 2 {
                return Ok((u.to_vec(), found));
            }
        } else {
            stable = 0;
        }
        last = Some(found);
        len *= 2;
    }
}

/// One step of the derived-sequence construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedStep {
    /// `x[0, n_i)` and `x[0, n_{i+1})`.
    pub u: Word,
    pub u_next: Word,
    /// Return words to `u` (resp. `u_next`) in order of first appearance in
    /// `x`: the images of `θ_i` (resp. `θ_{i+1}`).
    pub theta: Vec<Word>,
    pub theta_next: Vec<Word>,
    /// `λ_i` with `θ_{i+1} = θ_i ∘ λ_i`, over the sequence's alphabet.
    pub lambda: Morphism,
}

/// `λ_i` for the prefixes of lengths `(n_i, n_{i+1})` of the reference point.
pub fn derived_step(ds: &DirectiveSequence, lens: (usize, usize)) -> Result<DerivedStep> {
    let (n_i, n_next) = lens;
    if n_i == 0 || n_i > n_next {
        return Err(invalid("derived step needs 1 ≤ n_i ≤ n_{i+1}"));
    }
    let d = ds.d();
    let (u, theta) = ordered_returns(ds, n_i)?;
    let (u_next, theta_next) = ordered_returns(ds, n_next)?;
    for (set, n) in [(&theta, n_i), (&theta_next, n_next)] {
        if set.len() != d {
            return Err(precondition(format!(
                "not dendric at this scale: {} return words to the prefix of length {n}, expected {d}",
                set.len()
            )));
        }
    }
    let mut images = Vec::with_capacity(d);
    for v in &theta_next {
        // v·u_next starts with u_next, hence with u; cut v at the
        // occurrences of u inside v·u.
        let mut ext = v.clone();
        ext.extend_from_slice(&u);
        let cuts: Vec<usize> = occurrences(&ext, &u)
            .into_iter()
            .filter(|&p| p < v.len())
            .collect();
        let mut image = Vec::with_capacity(cuts.len());
        for (k, &c) in cuts.iter().enumerate() {
            let end = cuts.get(k + 1).copied().unwrap_or(v.len());
            let piece = &v[c..end];
            let idx = theta
                .iter()
                .position(|t| t.as_slice() == piece)
                .ok_or_else(|| {
                    Error::Inconclusive(
                        "a return word does not split over the shorter return words".into(),
                    )
                })?;
            image.push(idx as u8);
        }
        images.push(Word::from_indices(image));
    }
    let lambda = Morphism::new(ds.alphabet().clone(), ds.alphabet().clone(), images)?;
    let wrap = |v: Vec<Vec<u8>>| v.into_iter().map(Word::from_indices).collect();
    Ok(DerivedStep {
        u: Word::from_indices(u),
        u_next: Word::from_indices(u_next),
        theta: wrap(theta),
        theta_next: wrap(theta_next),
        lambda,
    })
}
