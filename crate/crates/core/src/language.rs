//! Factor languages, complexity, extension graphs and the dendric test.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::directive::{certify, DirectiveSequence};
use crate::error::{invalid, precondition, Error, Result};
use crate::suffix::SuffixIndex;
use crate::words::{Alphabet, Word};

/// Default cap on the total length of generating text.
pub const DEFAULT_TEXT_CAP: usize = 1 << 25;

/// Factors of length `≤ max_len` of a subshift, with the text they were read from.
pub struct LanguageTable {
    alphabet: Alphabet,
    max_len: usize,
    generation_depth: Option<usize>,
    index: SuffixIndex,
    /// `reps[n]` holds one occurrence per distinct length-`n` factor,
    /// sorted; filled on first use.
    reps: Vec<OnceLock<Vec<u32>>>,
    /// `p(n)` for `n ≤ max_len`, when known without materializing `reps`.
    counts: Option<Vec<usize>>,
    texts: Vec<Word>,
}

impl std::fmt::Debug for LanguageTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LanguageTable")
            .field("alphabet", &self.alphabet)
            .field("max_len", &self.max_len)
            .field("generation_depth", &self.generation_depth)
            .finish_non_exhaustive()
    }
}

/// Builds the language of a primitive sequence from the images
/// `τ_[1,N)(a)`, growing `N` until every length `≤ max_len` has the same
/// number of factors at two successive depths and the shortest image is
/// longer than `2·max_len`.
pub fn build_language(ds: &DirectiveSequence, max_len: usize) -> Result<LanguageTable> {
    build_language_capped(ds, max_len, DEFAULT_TEXT_CAP)
}

pub fn build_language_capped(
    ds: &DirectiveSequence,
    max_len: usize,
    cap: usize,
) -> Result<LanguageTable> {
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() {
        return Err(precondition(format!(
            "language generation needs a primitive sequence ({:?})",
            cert.primitive
        )));
    }
    let mut tower = ds.image_tower(cap);
    let mut previous: Option<Vec<usize>> = None;
    while let Some((depth, images)) = tower.advance()? {
        let shortest = images.iter().map(Word::len).min().unwrap_or(0);
        if shortest <= 2 * max_len {
            continue;
        }
        let index = SuffixIndex::new(images.iter().map(Word::as_slice));
        let counts = index.complexities(max_len);
        if previous.as_ref() == Some(&counts) {
            return Ok(LanguageTable::from_index(
                ds.alphabet().clone(),
                max_len,
                Some(depth),
                index,
                images.to_vec(),
                Some(counts),
            ));
        }
        previous = Some(counts);
    }
    Err(Error::Inconclusive(format!(
        "factor sets up to length {max_len} did not stabilise within the text cap ({cap} symbols)"
    )))
}

impl LanguageTable {
    fn from_index(
        alphabet: Alphabet,
        max_len: usize,
        generation_depth: Option<usize>,
        index: SuffixIndex,
        texts: Vec<Word>,
        counts: Option<Vec<usize>>,
    ) -> Self {
        let reps = (0..=max_len).map(|_| OnceLock::new()).collect();
        LanguageTable {
            alphabet,
            max_len,
            generation_depth,
            index,
            reps,
            counts,
            texts,
        }
    }

    /// Factors of a single finite text (for instance the coding of an orbit).
    /// The caller is responsible for the text being long enough to contain
    /// the whole language up to `max_len`.
    pub fn from_text(alphabet: Alphabet, text: &Word, max_len: usize) -> Result<Self> {
        alphabet.check(text)?;
        if text.len() < max_len {
            return Err(invalid("text shorter than the requested factor length"));
        }
        let index = SuffixIndex::new([text.as_slice()]);
        Ok(Self::from_index(
            alphabet,
            max_len,
            None,
            index,
            vec![text.clone()],
            None,
        ))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn generation_depth(&self) -> Option<usize> {
        self.generation_depth
    }

    /// The texts the factors were read from.
    pub fn texts(&self) -> &[Word] {
        &self.texts
    }

    fn reps(&self, n: usize) -> &[u32] {
        self.reps[n].get_or_init(|| {
            if n == 0 {
                Vec::new()
            } else {
                self.index.distinct(n)
            }
        })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.max_len {
            return Err(Error::Range(format!(
                "length {n} exceeds the table bound {}",
                self.max_len
            )));
        }
        Ok(())
    }

    /// `p(n)`.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        self.check_len(n)?;
        Ok(match (&self.counts, n) {
            (_, 0) => 1,
            (Some(c), _) => c[n - 1],
            (None, _) => self.reps(n).len(),
        })
    }

    /// Sorted length-`n` factors as slices into the generating text.
    pub fn factor_slices(&self, n: usize) -> Result<Vec<&[u8]>> {
        self.check_len(n)?;
        if n == 0 {
            return Ok(vec![&[]]);
        }
        Ok(self
            .reps(n)
            .iter()
            .map(|&p| self.index.factor(p, n))
            .collect())
    }

    pub fn factors(&self, n: usize) -> Result<Vec<Word>> {
        Ok(self
            .factor_slices(n)?
            .into_iter()
            .map(|s| Word::from_indices(s.to_vec()))
            .collect())
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        let n = w.len();
        if n == 0 {
            return true;
        }
        if n > self.max_len {
            return false;
        }
        self.reps(n)
            .binary_search_by(|&p| self.index.factor(p, n).cmp(w))
            .is_ok()
    }

    /// Extension graph `ℰ(w)`.
    pub fn extension_graph(&self, w: &[u8]) -> Result<ExtensionGraph> {
        if w.len() + 2 > self.max_len {
            return Err(Error::Range(format!(
                "extension graphs of length-{} words need factors of length {}",
                w.len(),
                w.len() + 2
            )));
        }
        if !self.contains(w) {
            return Err(invalid(format!(
                "{} is not in the language",
                self.alphabet.render_slice(w)
            )));
        }
        let d = self.alphabet.len() as u8;
        let mut buf = Vec::with_capacity(w.len() + 2);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for a in 0..d {
            buf.clear();
            buf.push(a);
            buf.extend_from_slice(w);
            if self.contains(&buf) {
                left.push(a);
            }
            buf.clear();
            buf.extend_from_slice(w);
            buf.push(a);
            if self.contains(&buf) {
                right.push(a);
            }
        }
        let mut edges = Vec::new();
        for &a in &left {
            for &b in &right {
                buf.clear();
                buf.push(a);
                buf.extend_from_slice(w);
                buf.push(b);
                if self.contains(&buf) {
                    edges.push((a, b));
                }
            }
        }
        Ok(ExtensionGraph {
            word: Word::from_indices(w.to_vec()),
            left,
            right,
            edges,
        })
    }

    /// Checks every bispecial factor of length `≤ up_to`; other factors
    /// have trees for extension graphs automatically.
    pub fn is_dendric(&self, up_to: usize) -> Result<DendricVerdict> {
        if up_to + 2 > self.max_len {
            return Err(Error::Range(format!(
                "dendric test up to {up_to} needs a table of length {}",
                up_to + 2
            )));
        }
        let mut checked = 0;
        for n in 0..=up_to {
            // Group the length-(n+2) factors a·w·b by their middle w.
            let mut by_middle: HashMap<&[u8], Vec<(u8, u8)>> = HashMap::new();
            for f in self.factor_slices(n + 2)? {
                by_middle
                    .entry(&f[1..=n])
                    .or_default()
                    .push((f[0], f[n + 1]));
            }
            let mut words: Vec<_> = by_middle.into_iter().collect();
            words.sort();
            for (w, edges) in words {
                let mut left: Vec<u8> = edges.iter().map(|e| e.0).collect();
                let mut right: Vec<u8> = edges.iter().map(|e| e.1).collect();
                left.sort_unstable();
                left.dedup();
                right.sort_unstable();
                right.dedup();
                if left.len() < 2 || right.len() < 2 {
                    continue;
                }
                checked += 1;
                let g = ExtensionGraph {
                    word: Word::from_indices(w.to_vec()),
                    left,
                    right,
                    edges,
                };
                if !g.is_tree() {
                    return Ok(DendricVerdict {
                        dendric: false,
                        up_to,
                        bispecials_checked: checked,
                        witness: Some(g),
                    });
                }
            }
        }
        Ok(DendricVerdict {
            dendric: true,
            up_to,
            bispecials_checked: checked,
            witness: None,
        })
    }
}

/// Bipartite graph of left and right extensions of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionGraph {
    pub word: Word,
    pub left: Vec<u8>,
    pub right: Vec<u8>,
    pub edges: Vec<(u8, u8)>,
}

impl ExtensionGraph {
    pub fn is_connected(&self) -> bool {
        // Union-find over left vertices 0..l and right vertices l..l+r.
        let l = self.left.len();
        let mut parent: Vec<usize> = (0..l + self.right.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let i = self.left.iter().position(|&x| x == a).unwrap();
            let j = l + self.right.iter().position(|&x| x == b).unwrap();
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
        let root = find(&mut parent, 0);
        (0..parent.len()).all(|x| find(&mut parent, x) == root)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.left.len() + self.right.len() && self.is_connected()
    }

    pub fn is_bispecial(&self) -> bool {
        self.left.len() >= 2 && self.right.len() >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DendricVerdict {
    pub dendric: bool,
    pub up_to: usize,
    pub bispecials_checked: usize,
    /// First bispecial factor whose extension graph is not a tree.
    pub witness: Option<ExtensionGraph>,
}
