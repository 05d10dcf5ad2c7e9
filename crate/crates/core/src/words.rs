//! Alphabets, finite words and non-erasing morphisms.
//!
//! Letters are stored as their index in an [`Alphabet`], so a [`Word`] is a
//! plain byte string and all vectors and matrices use the alphabet order as
//! their coordinate order.

use std::collections::HashMap;
use std::fmt;

use crate::error::{invalid, precondition, Result};
use crate::matrix::IntegerMatrix;

/// Largest alphabet supported; letters are stored in a `u8`.
pub const MAX_LETTERS: usize = 250;

/// Ordered list of distinct symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.len() < 2 {
            return Err(invalid("an alphabet needs at least two letters"));
        }
        if letters.len() > MAX_LETTERS {
            return Err(invalid(format!(
                "at most {MAX_LETTERS} letters are supported"
            )));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(invalid(format!("duplicate letter {c:?}")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Alphabet whose letters are the characters of `s`, in order.
    pub fn from_str_letters(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, index: u8) -> char {
        self.letters[index as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.letters.iter().position(|&x| x == c).map(|i| i as u8)
    }

    /// Parses a string of single-codepoint letters into a word.
    pub fn parse(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| invalid(format!("symbol {c:?} is not in the alphabet {self}")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }

    pub fn render(&self, w: &Word) -> String {
        self.render_slice(w.as_slice())
    }

    pub fn render_slice(&self, w: &[u8]) -> String {
        w.iter().map(|&i| self.letters[i as usize]).collect()
    }

    /// Checks that every symbol of `w` is a letter of this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&i| i as usize >= self.len()) {
            Some(i) => Err(invalid(format!(
                "letter index {i} is outside the alphabet {self}"
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{self}")
    }
}

/// Finite word, stored as letter indices.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(indices: Vec<u8>) -> Self {
        Word(indices)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Letter-count vector over an alphabet of size `d`.
    pub fn abelianize(&self, d: usize) -> Vec<u64> {
        let mut v = vec![0u64; d];
        for &c in &self.0 {
            v[c as usize] += 1;
        }
        v
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

/// Number of (possibly overlapping) occurrences of `u` in `w`.
pub fn count_occurrences(w: &[u8], u: &[u8]) -> Result<usize> {
    if u.is_empty() {
        return Err(invalid("cannot count occurrences of the empty word"));
    }
    if u.len() > w.len() {
        return Ok(0);
    }
    Ok(w.windows(u.len()).filter(|win| *win == u).count())
}

/// Common first and last letters of all images, when they exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Properness {
    pub left: Option<u8>,
    pub right: Option<u8>,
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }
}

/// Non-erasing morphism from `source*` to `target*`.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(invalid(format!(
                "expected {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(invalid(format!(
                    "image of {:?} is empty (erasing morphisms are not supported)",
                    source.letter(i as u8)
                )));
            }
            target.check(img)?;
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Endomorphism given by the images of the letters, in alphabet order.
    pub fn endo(alphabet: &Alphabet, images: &[&str]) -> Result<Self> {
        let images = images
            .iter()
            .map(|s| alphabet.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet.clone(), alphabet.clone(), images)
    }

    /// Endomorphism from a letter → image map; every letter needs an entry.
    pub fn from_map(alphabet: &Alphabet, map: &HashMap<char, String>) -> Result<Self> {
        if let Some(c) = map.keys().find(|c| alphabet.index_of(**c).is_none()) {
            return Err(invalid(format!("image given for unknown letter {c:?}")));
        }
        let images = alphabet
            .letters()
            .iter()
            .map(|c| {
                let s = map
                    .get(c)
                    .ok_or_else(|| invalid(format!("missing image for letter {c:?}")))?;
                alphabet.parse(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet.clone(), alphabet.clone(), images)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = (0..alphabet.len() as u8).map(|i| Word(vec![i])).collect();
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.images.iter().map(Word::len).collect()
    }

    /// Image of a word, preallocated from the length law.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.source.check(w)?;
        Ok(self.apply_unchecked(w.as_slice()))
    }

    pub(crate) fn apply_unchecked(&self, w: &[u8]) -> Word {
        let len = w.iter().map(|&c| self.images[c as usize].len()).sum();
        let mut out = Vec::with_capacity(len);
        for &c in w {
            out.extend_from_slice(self.images[c as usize].as_slice());
        }
        Word(out)
    }

    /// `outer ∘ inner`, i.e. `a ↦ outer(inner(a))`.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        if inner.target != outer.source {
            return Err(invalid(format!(
                "cannot compose: inner target {} differs from outer source {}",
                inner.target, outer.source
            )));
        }
        let images = inner
            .images
            .iter()
            .map(|w| outer.apply_unchecked(w.as_slice()))
            .collect();
        Ok(Morphism {
            source: inner.source.clone(),
            target: outer.target.clone(),
            images,
        })
    }

    /// Entry `(b, a)` is the number of occurrences of `b` in the image of `a`.
    pub fn incidence_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.target.len(), self.source.len());
        for (a, img) in self.images.iter().enumerate() {
            for (b, count) in img.abelianize(self.target.len()).into_iter().enumerate() {
                m.set(b, a, count.into());
            }
        }
        m
    }

    pub fn properness(&self) -> Properness {
        let common = |pick: fn(&Word) -> Option<u8>| {
            let first = pick(&self.images[0]);
            if self.images.iter().all(|w| pick(w) == first) {
                first
            } else {
                None
            }
        };
        Properness {
            left: common(Word::first),
            right: common(Word::last),
        }
    }

    /// First letters of the images, as a letter-to-letter map.
    pub fn first_letter_map(&self) -> Vec<u8> {
        self.images.iter().map(|w| w.as_slice()[0]).collect()
    }

    pub fn last_letter_map(&self) -> Vec<u8> {
        self.images
            .iter()
            .map(|w| *w.as_slice().last().unwrap())
            .collect()
    }

    /// `|det M| = 1`, computed exactly.
    pub fn is_unimodular(&self) -> Result<bool> {
        if !self.is_endomorphism() {
            return Err(invalid("unimodularity is only defined for endomorphisms"));
        }
        Ok(self.incidence_matrix().is_unimodular())
    }

    /// The right proper morphism `σ̄` with `b·σ̄(a) = σ(a)·b`, where `b` is the
    /// common first letter of the images of `σ`.
    pub fn right_proper_conjugate(&self) -> Result<Morphism> {
        let b = self
            .properness()
            .left
            .ok_or_else(|| precondition("morphism is not left proper"))?;
        let images = self
            .images
            .iter()
            .map(|w| {
                let mut v = Vec::with_capacity(w.len());
                v.extend_from_slice(&w.as_slice()[1..]);
                v.push(b);
                Word(v)
            })
            .collect();
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images,
        })
    }

    /// Renders images as strings, in source-alphabet order.
    pub fn image_strings(&self) -> Vec<String> {
        self.images.iter().map(|w| self.target.render(w)).collect()
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism(")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}↦{}",
                self.source.letter(i as u8),
                self.target.render(img)
            )?;
        }
        write!(f, ")")
    }
}
