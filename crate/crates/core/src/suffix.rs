//! Suffix array + LCP over several texts, used to enumerate distinct factors.

/// Separator placed after every text; never a letter index.
pub(crate) const SEP: u8 = u8::MAX;

pub(crate) struct SuffixIndex {
    text: Vec<u8>,
    sa: Vec<u32>,
    /// `lcp[i]` = longest common prefix of suffixes `sa[i-1]` and `sa[i]`.
    lcp: Vec<u32>,
    /// Distance from each position to the next separator.
    limit: Vec<u32>,
}

impl SuffixIndex {
    pub(crate) fn new<'a>(texts: impl IntoIterator<Item = &'a [u8]>) -> Self {
        let mut text = Vec::new();
        for t in texts {
            text.extend_from_slice(t);
            text.push(SEP);
        }
        let n = text.len();
        assert!(
            n < i32::MAX as usize,
            "text too long for a 32-bit suffix array"
        );
        let mut sa_i = vec![0i32; n];
        cdivsufsort::sort_in_place(&text, &mut sa_i);
        let sa: Vec<u32> = sa_i.into_iter().map(|x| x as u32).collect();

        let mut limit = vec![0u32; n];
        let mut run = 0u32;
        for i in (0..n).rev() {
            run = if text[i] == SEP { 0 } else { run + 1 };
            limit[i] = run;
        }

        // Kasai et al.
        let mut rank = vec![0u32; n];
        for (i, &s) in sa.iter().enumerate() {
            rank[s as usize] = i as u32;
        }
        let mut lcp = vec![0u32; n];
        let mut h = 0usize;
        for i in 0..n {
            let r = rank[i] as usize;
            if r > 0 {
                let j = sa[r - 1] as usize;
                while i + h < n && j + h < n && text[i + h] == text[j + h] && text[i + h] != SEP {
                    h += 1;
                }
                lcp[r] = h as u32;
                h = h.saturating_sub(1);
            } else {
                h = 0;
            }
        }
        SuffixIndex {
            text,
            sa,
            lcp,
            limit,
        }
    }

    /// Starting positions of one occurrence of every distinct factor of
    /// length `len` (not crossing a separator), in lexicographic order.
    pub(crate) fn distinct(&self, len: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut run_min = u32::MAX;
        for (i, &s) in self.sa.iter().enumerate() {
            run_min = run_min.min(self.lcp[i]);
            if (self.limit[s as usize] as usize) < len {
                continue;
            }
            if out.is_empty() || (run_min as usize) < len {
                out.push(s);
            }
            run_min = u32::MAX;
        }
        out
    }

    /// Counts of distinct factors for every length `1..=max_len` in one pass.
    pub(crate) fn complexities(&self, max_len: usize) -> Vec<usize> {
        (1..=max_len).map(|l| self.distinct(l).len()).collect()
    }

    pub(crate) fn factor(&self, pos: u32, len: usize) -> &[u8] {
        &self.text[pos as usize..pos as usize + len]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute(texts: &[&[u8]], len: usize) -> BTreeSet<Vec<u8>> {
        texts
            .iter()
            .flat_map(|t| t.windows(len).map(<[u8]>::to_vec))
            .collect()
    }

    #[test]
    fn matches_brute_force() {
        let texts: [&[u8]; 3] = [&[0, 1, 0, 0, 1, 0, 1, 0], &[1, 1, 0, 2], &[2]];
        let idx = SuffixIndex::new(texts.iter().copied());
        for len in 1..=9 {
            let got: Vec<Vec<u8>> = idx
                .distinct(len)
                .iter()
                .map(|&p| idx.factor(p, len).to_vec())
                .collect();
            let want: Vec<Vec<u8>> = brute(&texts, len).into_iter().collect();
            assert_eq!(got, want, "length {len}");
        }
    }
}
