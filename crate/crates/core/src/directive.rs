//! Directive sequences, telescoping and the primitivity / properness /
//! unimodularity certificates.
//!
//! Levels are numbered from 1. A sequence is either eventually periodic
//! (finite prefix followed by a repeating period), a finite truncation, or
//! the three-letter two-measure family driven by an integer sequence
//! `(a_n)` up to a declared horizon.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, precondition, Error, Result};
use crate::matrix::IntegerMatrix;
use crate::words::{Alphabet, Morphism, Word};

/// Images longer than this are never materialized as words.
pub const MAX_MATERIALIZED_IMAGE: usize = 1 << 22;

/// Integer sequence `(a_n)_{n ≥ 1}` driving the two-measure family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntSequence {
    /// `a_n = base^(n + shift)`.
    Geometric { base: u64, shift: i64 },
    /// Explicit values `a_1, a_2, …`.
    List(Vec<BigInt>),
}

impl IntSequence {
    pub fn term(&self, n: usize) -> Result<BigInt> {
        match self {
            IntSequence::Geometric { base, shift } => {
                let e = n as i64 + shift;
                if e < 0 {
                    return Err(invalid(format!("a_{n} = {base}^{e} is not an integer")));
                }
                Ok(num_traits::pow(BigInt::from(*base), e as usize))
            }
            IntSequence::List(v) => v
                .get(n.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::Range(format!("a_{n} is beyond the listed values"))),
        }
    }

    /// Checks that the sequence is positive, increasing and has
    /// `Σ 1/a_n < 1` (over the first `horizon` terms for explicit lists).
    pub fn validate(&self, horizon: usize) -> Result<()> {
        match self {
            IntSequence::Geometric { base, shift } => {
                if *base < 2 {
                    return Err(invalid("geometric base must be at least 2"));
                }
                if 1 + shift < 0 {
                    return Err(invalid("a_1 must be a positive integer"));
                }
                // Σ_{n≥1} base^-(n+shift) = base^-shift / (base − 1)
                let b = BigInt::from(*base);
                let sum = if *shift >= 0 {
                    BigRational::new(
                        BigInt::one(),
                        num_traits::pow(b.clone(), *shift as usize) * (&b - 1),
                    )
                } else {
                    BigRational::new(num_traits::pow(b.clone(), (-shift) as usize), &b - 1)
                };
                if sum >= BigRational::one() {
                    return Err(invalid("the reciprocal sum of (a_n) must be < 1"));
                }
                Ok(())
            }
            IntSequence::List(v) => {
                if v.len() < horizon {
                    return Err(invalid(format!(
                        "only {} values given for horizon {horizon}",
                        v.len()
                    )));
                }
                if v.iter().any(|x| !x.is_positive()) {
                    return Err(invalid("a_n must be positive"));
                }
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("a_n must be increasing"));
                }
                let sum: BigRational = v
                    .iter()
                    .map(|x| BigRational::new(BigInt::one(), x.clone()))
                    .sum();
                if sum >= BigRational::one() {
                    return Err(invalid("the reciprocal sum of (a_n) must be < 1"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Levels {
    Periodic {
        prefix: Vec<Morphism>,
        period: Vec<Morphism>,
    },
    Truncated {
        levels: Vec<Morphism>,
    },
    /// Levels `τ_n`: `1 ↦ 2^{a_n}3` (n even) or `1 ↦ 32^{a_n}` (n odd),
    /// `2 ↦ 1`, `3 ↦ 2`.
    TwoMeasure {
        a: IntSequence,
        horizon: usize,
    },
}

/// Sequence of endomorphisms `(τ_n)_{n ≥ 1}` of a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveSequence {
    alphabet: Alphabet,
    levels: Levels,
}

fn check_endo(alphabet: &Alphabet, m: &Morphism) -> Result<()> {
    if m.source() != alphabet || m.target() != alphabet {
        return Err(invalid(format!(
            "morphism {m:?} is not an endomorphism of {alphabet}"
        )));
    }
    Ok(())
}

impl DirectiveSequence {
    pub fn periodic(
        alphabet: Alphabet,
        prefix: Vec<Morphism>,
        period: Vec<Morphism>,
    ) -> Result<Self> {
        if period.is_empty() {
            return Err(invalid(
                "the period of a directive sequence must be non-empty",
            ));
        }
        for m in prefix.iter().chain(&period) {
            check_endo(&alphabet, m)?;
        }
        Ok(DirectiveSequence {
            alphabet,
            levels: Levels::Periodic { prefix, period },
        })
    }

    /// The constant sequence `(σ, σ, …)`.
    pub fn constant(m: Morphism) -> Result<Self> {
        Self::periodic(m.source().clone(), vec![], vec![m])
    }

    /// A finite sequence; every certificate is valid only up to its length.
    pub fn truncated(alphabet: Alphabet, levels: Vec<Morphism>) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid("a truncated sequence needs at least one level"));
        }
        for m in &levels {
            check_endo(&alphabet, m)?;
        }
        Ok(DirectiveSequence {
            alphabet,
            levels: Levels::Truncated { levels },
        })
    }

    /// The three-letter family with incidence matrices
    /// `A_n = [[0,1,0],[a_n,0,1],[1,0,0]]`, defined up to `horizon`.
    pub fn two_measure(a: IntSequence, horizon: usize) -> Result<Self> {
        if horizon < 1 {
            return Err(invalid("horizon must be at least 1"));
        }
        a.validate(horizon)?;
        Ok(DirectiveSequence {
            alphabet: Alphabet::from_str_letters("123")?,
            levels: Levels::TwoMeasure { a, horizon },
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d(&self) -> usize {
        self.alphabet.len()
    }

    /// Last defined level, or `None` for infinite (periodic) sequences.
    pub fn horizon(&self) -> Option<usize> {
        match &self.levels {
            Levels::Periodic { .. } => None,
            Levels::Truncated { levels } => Some(levels.len()),
            Levels::TwoMeasure { horizon, .. } => Some(*horizon),
        }
    }

    pub fn is_eventually_periodic(&self) -> bool {
        matches!(self.levels, Levels::Periodic { .. })
    }

    /// `(prefix, period)` for eventually periodic sequences.
    pub fn periodic_parts(&self) -> Option<(&[Morphism], &[Morphism])> {
        match &self.levels {
            Levels::Periodic { prefix, period } => Some((prefix, period)),
            _ => None,
        }
    }

    /// Generator of the two-measure family, if that is what this is.
    pub fn two_measure_parts(&self) -> Option<(&IntSequence, usize)> {
        match &self.levels {
            Levels::TwoMeasure { a, horizon } => Some((a, *horizon)),
            _ => None,
        }
    }

    pub fn truncated_levels(&self) -> Option<&[Morphism]> {
        match &self.levels {
            Levels::Truncated { levels } => Some(levels),
            _ => None,
        }
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(invalid("levels are numbered from 1"));
        }
        if let Some(h) = self.horizon() {
            if n > h {
                return Err(Error::Range(format!("level {n} is beyond the horizon {h}")));
            }
        }
        Ok(())
    }

    /// Number of levels after which the sequence repeats (prefix length +
    /// period length), or the horizon.
    pub fn distinct_levels(&self) -> usize {
        match &self.levels {
            Levels::Periodic { prefix, period } => prefix.len() + period.len(),
            Levels::Truncated { levels } => levels.len(),
            Levels::TwoMeasure { horizon, .. } => *horizon,
        }
    }

    fn a_n(&self, n: usize) -> Result<BigInt> {
        match &self.levels {
            Levels::TwoMeasure { a, .. } => a.term(n),
            _ => unreachable!(),
        }
    }

    /// `τ_n`.
    pub fn morphism(&self, n: usize) -> Result<Morphism> {
        self.check_level(n)?;
        match &self.levels {
            Levels::Periodic { prefix, period } => Ok(if n <= prefix.len() {
                prefix[n - 1].clone()
            } else {
                period[(n - 1 - prefix.len()) % period.len()].clone()
            }),
            Levels::Truncated { levels } => Ok(levels[n - 1].clone()),
            Levels::TwoMeasure { .. } => {
                let a = self.a_n(n)?;
                let a: usize = usize::try_from(&a)
                    .ok()
                    .filter(|&a| a < MAX_MATERIALIZED_IMAGE)
                    .ok_or_else(|| {
                        Error::Range(format!(
                            "image of level {n} (a_n = {a}) is too long to materialize"
                        ))
                    })?;
                let mut one = vec![1u8; a];
                if n % 2 == 0 {
                    one.push(2);
                } else {
                    one.insert(0, 2);
                }
                Morphism::new(
                    self.alphabet.clone(),
                    self.alphabet.clone(),
                    vec![
                        Word::from_indices(one),
                        Word::from_indices(vec![0]),
                        Word::from_indices(vec![1]),
                    ],
                )
            }
        }
    }

    /// `M_{τ_n}`.
    pub fn incidence(&self, n: usize) -> Result<IntegerMatrix> {
        self.check_level(n)?;
        match &self.levels {
            Levels::TwoMeasure { .. } => {
                let a = self.a_n(n)?;
                let z = BigInt::zero;
                let o = BigInt::one;
                Ok(IntegerMatrix::from_big_rows(vec![
                    vec![z(), o(), z()],
                    vec![a, z(), o()],
                    vec![o(), z(), z()],
                ]))
            }
            _ => Ok(self.morphism(n)?.incidence_matrix()),
        }
    }

    /// First letters of the images of `τ_n`.
    pub fn first_letters(&self, n: usize) -> Result<Vec<u8>> {
        self.check_level(n)?;
        match &self.levels {
            Levels::TwoMeasure { .. } => Ok(if n % 2 == 0 {
                vec![1, 0, 1]
            } else {
                vec![2, 0, 1]
            }),
            _ => Ok(self.morphism(n)?.first_letter_map()),
        }
    }

    pub fn last_letters(&self, n: usize) -> Result<Vec<u8>> {
        self.check_level(n)?;
        match &self.levels {
            Levels::TwoMeasure { .. } => Ok(if n % 2 == 0 {
                vec![2, 0, 1]
            } else {
                vec![1, 0, 1]
            }),
            _ => Ok(self.morphism(n)?.last_letter_map()),
        }
    }

    /// `τ_{[n,N)} = τ_n ∘ ⋯ ∘ τ_{N−1}`.
    pub fn telescope(&self, n: usize, big_n: usize) -> Result<Morphism> {
        if n == 0 || n >= big_n {
            return Err(invalid(format!(
                "telescope needs 1 ≤ n < N, got n={n}, N={big_n}"
            )));
        }
        let mut acc = self.morphism(big_n - 1)?;
        for k in (n..big_n - 1).rev() {
            let next = Morphism::compose(&self.morphism(k)?, &acc)?;
            if next.images().iter().map(Word::len).sum::<usize>() > MAX_MATERIALIZED_IMAGE {
                return Err(Error::Range(format!(
                    "telescoped images τ_[{n},{big_n}) are too long to materialize"
                )));
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `M_{τ_n} ⋯ M_{τ_{N−1}}`, without materializing words.
    pub fn telescope_matrix(&self, n: usize, big_n: usize) -> Result<IntegerMatrix> {
        if n == 0 || n > big_n {
            return Err(invalid(format!(
                "telescope needs 1 ≤ n ≤ N, got n={n}, N={big_n}"
            )));
        }
        let mut acc = IntegerMatrix::identity(self.d());
        for k in n..big_n {
            acc = acc.mul(&self.incidence(k)?);
        }
        Ok(acc)
    }

    /// Images `τ_{[1,N)}(a)` for `N = 2, 3, …`, each level built from the
    /// previous one. Stops (returns `None`) once the total length would exceed
    /// `cap` or the horizon is reached.
    pub fn image_tower(&self, cap: usize) -> ImageTower<'_> {
        ImageTower {
            ds: self,
            next_level: 1,
            images: None,
            cap,
        }
    }

    /// Groups consecutive levels into blocks of `w`: level `k` of the result
    /// is `τ_{[(k−1)w+1, kw+1)}`. Only for eventually periodic sequences.
    pub fn group(&self, w: usize) -> Result<DirectiveSequence> {
        if w == 0 {
            return Err(invalid("block length must be positive"));
        }
        if w == 1 {
            return Ok(self.clone());
        }
        let (prefix, period) = self.periodic_parts().ok_or_else(|| {
            invalid("grouping is only supported for eventually periodic sequences")
        })?;
        let p = prefix.len().div_ceil(w) * w;
        let q = num_integer::lcm(period.len(), w);
        let block = |start: usize| -> Result<Morphism> {
            let mut acc = self.morphism(start)?;
            for k in start + 1..start + w {
                acc = Morphism::compose(&acc, &self.morphism(k)?)?;
            }
            Ok(acc)
        };
        let new_prefix = (0..p / w)
            .map(|k| block(k * w + 1))
            .collect::<Result<Vec<_>>>()?;
        let new_period = (0..q / w)
            .map(|k| block(p + k * w + 1))
            .collect::<Result<Vec<_>>>()?;
        DirectiveSequence::periodic(self.alphabet.clone(), new_prefix, new_period)
    }
}

/// Successive levels of telescoped images; see [`DirectiveSequence::image_tower`].
pub struct ImageTower<'a> {
    ds: &'a DirectiveSequence,
    next_level: usize,
    images: Option<Vec<Word>>,
    cap: usize,
}

impl ImageTower<'_> {
    /// Advances to the next depth and returns `(N, images τ_{[1,N)}(a))`.
    pub fn advance(&mut self) -> Result<Option<(usize, &[Word])>> {
        let level = self.next_level;
        if let Some(h) = self.ds.horizon() {
            if level > h {
                return Ok(None);
            }
        }
        let m = match self.ds.morphism(level) {
            Ok(m) => m,
            Err(Error::Range(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let next = match &self.images {
            None => m.images().to_vec(),
            Some(prev) => {
                let total: usize = m
                    .images()
                    .iter()
                    .map(|w| {
                        w.as_slice()
                            .iter()
                            .map(|&c| prev[c as usize].len())
                            .sum::<usize>()
                    })
                    .sum();
                if total > self.cap {
                    return Ok(None);
                }
                m.images()
                    .iter()
                    .map(|w| {
                        let mut v = Vec::new();
                        for &c in w.as_slice() {
                            v.extend_from_slice(prev[c as usize].as_slice());
                        }
                        Word::from_indices(v)
                    })
                    .collect()
            }
        };
        self.images = Some(next);
        self.next_level += 1;
        Ok(Some((level + 1, self.images.as_deref().unwrap())))
    }
}

/// Outcome of the primitivity decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitivity {
    /// Every window `τ_[n,N)` with `N − n ≥ window` has a positive matrix;
    /// `witness` is a start achieving the largest minimal window.
    Primitive {
        window: usize,
        witness: (usize, usize),
        valid_up_to: Option<usize>,
    },
    /// From level `start` on, no telescoped matrix ever becomes positive.
    NotPrimitive {
        start: usize,
        reason: String,
    },
    Inconclusive {
        reason: String,
    },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive { .. })
    }
}

/// Properness data of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProperness {
    pub level: usize,
    pub left: Option<u8>,
    pub right: Option<u8>,
}

/// Certificate produced by [`certify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceCertificate {
    pub primitive: Primitivity,
    pub unimodular: bool,
    /// First level whose matrix is not unimodular.
    pub non_unimodular_level: Option<usize>,
    pub left_proper: bool,
    pub right_proper: bool,
    pub proper: bool,
    pub levels: Vec<LevelProperness>,
    /// Smallest `w` such that every block `τ_[n,n+w)` is left proper.
    pub left_proper_block: Option<usize>,
    /// Smallest `w` such that every block `τ_[n,n+w)` is proper.
    pub proper_block: Option<usize>,
    pub growth: Growth,
    /// Certificates of finite descriptions hold only up to this level.
    pub valid_up_to: Option<usize>,
}

impl SequenceCertificate {
    /// Primitive, unimodular, and left proper at least blockwise, so that a
    /// proper representation of the same subshift exists.
    pub fn is_primitive_unimodular_properizable(&self) -> bool {
        self.primitive.is_primitive() && self.unimodular && self.left_proper_block.is_some()
    }
}

/// Image lengths of `τ_[1, depth]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Growth {
    pub depth: usize,
    pub min_length: BigInt,
    pub max_length: BigInt,
}

/// Window cap for sequences that are not eventually periodic.
pub fn window_cap(d: usize) -> usize {
    8 * d * d
}

/// Levels whose behaviour determines every window: for an eventually
/// periodic sequence, starts `1..=P+Q`; the state after level `N − 1` only
/// depends on `(N − P − 1) mod Q` once past the prefix.
fn phase(ds: &DirectiveSequence, level: usize) -> Option<usize> {
    let (prefix, period) = ds.periodic_parts()?;
    (level > prefix.len()).then(|| (level - 1 - prefix.len()) % period.len())
}

fn decide_primitivity(ds: &DirectiveSequence) -> Result<Primitivity> {
    let d = ds.d();
    let mut best: Option<(usize, (usize, usize))> = None;
    let starts = match ds.horizon() {
        None => ds.distinct_levels(),
        Some(h) => h,
    };
    let cap = window_cap(d);
    for n in 1..=starts {
        let mut pat = ds.incidence(n)?.support();
        let mut seen = HashSet::new();
        let mut big_n = n + 1;
        let found = loop {
            if pat.is_full() {
                break true;
            }
            if pat.has_zero_row() {
                return Ok(Primitivity::NotPrimitive {
                    start: n,
                    reason: format!("some letter never occurs in τ_[{n},N) for any N"),
                });
            }
            match ds.horizon() {
                None => {
                    if !seen.insert((phase(ds, big_n), pat.clone())) {
                        return Ok(Primitivity::NotPrimitive {
                            start: n,
                            reason: format!(
                                "the zero pattern of τ_[{n},N) cycles without becoming positive"
                            ),
                        });
                    }
                }
                Some(h) => {
                    if big_n > h {
                        break false;
                    }
                }
            }
            pat = pat.mul(&ds.incidence(big_n)?.support());
            big_n += 1;
        };
        if found {
            let w = big_n - n;
            if best.is_none_or(|(bw, _)| w > bw) {
                best = Some((w, (n, big_n)));
            }
        } else if n + cap <= starts {
            return Ok(Primitivity::Inconclusive {
                reason: format!("no positive window from level {n} within {cap} levels"),
            });
        }
    }
    Ok(match best {
        Some((window, witness)) => Primitivity::Primitive {
            window,
            witness,
            valid_up_to: ds.horizon(),
        },
        None => Primitivity::Inconclusive {
            reason: "horizon too short to find a positive window".into(),
        },
    })
}

/// Smallest `w` such that every composite of `w` consecutive letter maps is
/// constant, where `maps(n)` is the first- (or last-) letter map of `τ_n`.
fn constant_block(
    ds: &DirectiveSequence,
    maps: impl Fn(usize) -> Result<Vec<u8>>,
) -> Result<Option<usize>> {
    let starts = ds.distinct_levels();
    let mut worst = 0;
    for n in 1..=starts {
        // composite of the maps of levels n..N: letter a ↦ f_n(f_{n+1}(…f_{N−1}(a)))
        let mut comp = maps(n)?;
        let mut seen = HashSet::new();
        let mut big_n = n + 1;
        loop {
            if comp.iter().all(|&c| c == comp[0]) {
                break;
            }
            match ds.horizon() {
                None => {
                    if !seen.insert((phase(ds, big_n), comp.clone())) {
                        return Ok(None);
                    }
                }
                Some(h) => {
                    if big_n > h {
                        if n == 1 {
                            return Ok(None);
                        }
                        // Starts too close to the horizon cannot be decided.
                        return Ok((worst > 0).then_some(worst));
                    }
                }
            }
            let next = maps(big_n)?;
            comp = next.iter().map(|&c| comp[c as usize]).collect();
            big_n += 1;
        }
        worst = worst.max(big_n - n);
    }
    Ok(Some(worst))
}

/// Decides primitivity (exactly for eventually periodic sequences, up to the
/// horizon otherwise), unimodularity and (blockwise) properness, and records
/// the growth of `τ_[1, probe_depth]`.
pub fn certify(ds: &DirectiveSequence, probe_depth: usize) -> Result<SequenceCertificate> {
    if probe_depth == 0 {
        return Err(invalid("probe depth must be at least 1"));
    }
    let primitive = decide_primitivity(ds)?;
    let levels_checked = ds.distinct_levels();
    let mut non_unimodular_level = None;
    let mut levels = Vec::with_capacity(levels_checked);
    for n in 1..=levels_checked {
        if non_unimodular_level.is_none() && !ds.incidence(n)?.is_unimodular() {
            non_unimodular_level = Some(n);
        }
        let first = ds.first_letters(n)?;
        let last = ds.last_letters(n)?;
        let common = |v: &[u8]| v.iter().all(|&c| c == v[0]).then_some(v[0]);
        levels.push(LevelProperness {
            level: n,
            left: common(&first),
            right: common(&last),
        });
    }
    let left_proper = levels.iter().all(|l| l.left.is_some());
    let right_proper = levels.iter().all(|l| l.right.is_some());
    let left_proper_block = constant_block(ds, |n| ds.first_letters(n))?;
    let right_block = constant_block(ds, |n| ds.last_letters(n))?;
    let proper_block = match (left_proper_block, right_block) {
        (Some(l), Some(r)) => Some(l.max(r)),
        _ => None,
    };
    let depth = ds.horizon().map_or(probe_depth, |h| probe_depth.min(h));
    let m = ds.telescope_matrix(1, depth + 1)?;
    let sums = m.column_sums();
    let growth = Growth {
        depth,
        min_length: sums.iter().min().cloned().unwrap_or_default(),
        max_length: sums.iter().max().cloned().unwrap_or_default(),
    };
    Ok(SequenceCertificate {
        primitive,
        unimodular: non_unimodular_level.is_none(),
        non_unimodular_level,
        left_proper,
        right_proper,
        proper: left_proper && right_proper,
        levels,
        left_proper_block,
        proper_block,
        growth,
        valid_up_to: ds.horizon(),
    })
}

/// Turns a primitive left proper sequence into the proper sequence
/// `τ̃_n = τ_{2n−1} ∘ τ̄_{2n}`, where `τ̄` is the right proper conjugate.
pub fn properize(ds: &DirectiveSequence) -> Result<DirectiveSequence> {
    for n in 1..=ds.distinct_levels() {
        let first = ds.first_letters(n)?;
        if !first.iter().all(|&c| c == first[0]) {
            return Err(precondition(format!("level {n} is not left proper")));
        }
    }
    match decide_primitivity(ds)? {
        Primitivity::Primitive { .. } => {}
        other => {
            return Err(precondition(format!(
                "sequence is not certified primitive: {other:?}"
            )))
        }
    }
    let pair = |odd: &Morphism, even: &Morphism| -> Result<Morphism> {
        Morphism::compose(odd, &even.right_proper_conjugate()?)
    };
    let pairs = |ms: &[Morphism]| -> Result<Vec<Morphism>> {
        ms.chunks_exact(2).map(|c| pair(&c[0], &c[1])).collect()
    };
    if let Some((prefix, period)) = ds.periodic_parts() {
        let mut prefix = prefix.to_vec();
        let mut period = period.to_vec();
        if prefix.len() % 2 == 1 {
            prefix.push(period[0].clone());
            period.rotate_left(1);
        }
        if period.len() % 2 == 1 {
            period.extend(period.clone());
        }
        DirectiveSequence::periodic(ds.alphabet.clone(), pairs(&prefix)?, pairs(&period)?)
    } else if let Some(levels) = ds.truncated_levels() {
        if levels.len() < 2 {
            return Err(invalid("need at least two levels to properize"));
        }
        DirectiveSequence::truncated(ds.alphabet.clone(), pairs(levels)?)
    } else {
        Err(invalid("generator-backed sequences cannot be properized"))
    }
}

/// Outcome of the Morse–Hedlund aperiodicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Aperiodicity {
    /// `p(n) ≥ n + 1` for every probed `n`.
    Aperiodic { complexity: Vec<usize> },
    /// `p(n) = p(n+1)`: the subshift is periodic with this many factors per length.
    Periodic { period: usize, at_length: usize },
}

/// Checks aperiodicity through factor complexity up to `max_len`.
pub fn aperiodicity_witness(ds: &DirectiveSequence, max_len: usize) -> Result<Aperiodicity> {
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() {
        return Err(precondition("sequence is not certified primitive"));
    }
    if !cert.unimodular {
        return Err(precondition(format!(
            "level {} is not unimodular",
            cert.non_unimodular_level.unwrap_or(0)
        )));
    }
    if cert.left_proper_block.is_none() {
        return Err(precondition("sequence is not left proper, even blockwise"));
    }
    let lang = crate::language::build_language(ds, max_len + 1)?;
    let p: Vec<usize> = (0..=max_len + 1)
        .map(|n| lang.complexity(n).unwrap())
        .collect();
    if let Some(n) = (1..=max_len).find(|&n| p[n] == p[n + 1]) {
        return Ok(Aperiodicity::Periodic {
            period: p[n],
            at_length: n,
        });
    }
    if (0..=max_len).all(|n| p[n] > n) {
        Ok(Aperiodicity::Aperiodic {
            complexity: p[..=max_len].to_vec(),
        })
    } else {
        Err(Error::Inconclusive(
            "complexity neither strictly increasing nor eventually constant; this contradicts \
             aperiodicity of primitive unimodular proper sequences"
                .into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> DirectiveSequence {
        let ab = Alphabet::from_str_letters("ab").unwrap();
        DirectiveSequence::constant(Morphism::endo(&ab, &["ab", "a"]).unwrap()).unwrap()
    }

    fn trib() -> DirectiveSequence {
        let abc = Alphabet::from_str_letters("abc").unwrap();
        DirectiveSequence::constant(Morphism::endo(&abc, &["ab", "ac", "a"]).unwrap()).unwrap()
    }

    fn two_measure() -> DirectiveSequence {
        DirectiveSequence::two_measure(IntSequence::Geometric { base: 2, shift: 1 }, 40).unwrap()
    }

    #[test]
    fn telescope_examples() {
        let ds = fib();
        assert_eq!(
            ds.telescope(1, 3).unwrap().image_strings(),
            vec!["aba", "ab"]
        );
        assert_eq!(ds.telescope(4, 5).unwrap(), ds.morphism(4).unwrap());
        assert!(ds.telescope(3, 3).is_err());
        assert!(ds.telescope(0, 2).is_err());
    }

    #[test]
    fn two_measure_telescope_matches_matrix_product() {
        let ds = DirectiveSequence::two_measure(IntSequence::Geometric { base: 2, shift: 1 }, 10)
            .unwrap();
        // Direct product of A_1 ⋯ A_n with a_n = 2^(n+1), built by hand.
        let mut direct = IntegerMatrix::identity(3);
        for n in 1..=4u32 {
            let a = 2i64.pow(n + 1);
            direct = direct.mul(&IntegerMatrix::from_rows(&[
                vec![0, 1, 0],
                vec![a, 0, 1],
                vec![1, 0, 0],
            ]));
        }
        assert_eq!(ds.telescope(1, 5).unwrap().incidence_matrix(), direct);
        assert_eq!(ds.telescope_matrix(1, 5).unwrap(), direct);
        // The morphism forms alternate between 1 ↦ 32^a and 1 ↦ 2^a3.
        assert_eq!(ds.morphism(1).unwrap().image_strings()[0], "32222");
        assert_eq!(ds.morphism(2).unwrap().image_strings()[0], "222222223");
    }

    #[test]
    fn certify_tribonacci() {
        let c = certify(&trib(), 5).unwrap();
        match c.primitive {
            Primitivity::Primitive { window, .. } => assert_eq!(window, 3),
            other => panic!("{other:?}"),
        }
        assert!(c.unimodular);
        assert!(c.left_proper);
        assert!(!c.right_proper);
        assert_eq!(c.left_proper_block, Some(1));
        assert_eq!(c.proper_block, None);
    }

    #[test]
    fn certify_two_measure_family() {
        let c = certify(&two_measure(), 10).unwrap();
        match c.primitive {
            Primitivity::Primitive {
                window,
                valid_up_to,
                ..
            } => {
                assert_eq!(window, 5);
                assert_eq!(valid_up_to, Some(40));
            }
            other => panic!("{other:?}"),
        }
        assert!(c.unimodular);
        assert!(!c.left_proper);
        assert!(c.proper_block.unwrap() <= 5);
    }

    #[test]
    fn two_measure_five_blocks_are_proper_as_words() {
        let ds = DirectiveSequence::two_measure(
            IntSequence::List((1..=8).map(|k| BigInt::from(1u64 << (k + 1))).collect()),
            8,
        )
        .unwrap();
        for n in 1..=3 {
            let p = ds.telescope(n, n + 5).unwrap().properness();
            assert!(p.is_proper(), "τ_[{n},{}) not proper", n + 5);
        }
    }

    #[test]
    fn identity_period_is_not_primitive() {
        let ab = Alphabet::from_str_letters("ab").unwrap();
        let id = Morphism::identity(&ab);
        let ds = DirectiveSequence::periodic(ab, vec![], vec![id.clone(), id]).unwrap();
        assert!(matches!(
            certify(&ds, 3).unwrap().primitive,
            Primitivity::NotPrimitive { .. }
        ));
    }

    #[test]
    fn non_primitive_period_with_positive_prefix() {
        // A reducible period: a ↦ a, b ↦ ab never puts b inside the image of a.
        let ab = Alphabet::from_str_letters("ab").unwrap();
        let fibm = Morphism::endo(&ab, &["ab", "a"]).unwrap();
        let red = Morphism::endo(&ab, &["a", "ab"]).unwrap();
        let ds = DirectiveSequence::periodic(ab, vec![fibm], vec![red]).unwrap();
        assert!(!certify(&ds, 3).unwrap().primitive.is_primitive());
    }

    #[test]
    fn growth_is_column_sums() {
        let c = certify(&fib(), 10).unwrap();
        // |σ^10(b)| = F_11 = 89, |σ^10(a)| = F_12 = 144
        assert_eq!(c.growth.min_length, BigInt::from(89));
        assert_eq!(c.growth.max_length, BigInt::from(144));
    }

    #[test]
    fn properize_fibonacci() {
        let p = properize(&fib()).unwrap();
        let m = p.morphism(1).unwrap();
        // σ ∘ σ̄ with σ̄ = (a ↦ ba, b ↦ a)
        assert_eq!(m.image_strings(), vec!["aab".to_string(), "ab".to_string()]);
        let sigma = fib().morphism(1).unwrap();
        assert_eq!(
            m.incidence_matrix(),
            sigma.incidence_matrix().mul(&sigma.incidence_matrix())
        );
        assert!(m.properness().is_proper());
        assert_eq!(p.morphism(7).unwrap(), m);
    }

    #[test]
    fn properize_rejects_brun() {
        let l = Alphabet::from_str_letters("123").unwrap();
        let b12 = Morphism::endo(&l, &["1", "12", "3"]).unwrap();
        let ds = DirectiveSequence::constant(b12).unwrap();
        assert!(matches!(properize(&ds), Err(Error::Precondition(_))));
    }

    #[test]
    fn aperiodicity() {
        match aperiodicity_witness(&fib(), 12).unwrap() {
            Aperiodicity::Aperiodic { complexity } => {
                assert!(complexity.iter().enumerate().all(|(n, &p)| p == n + 1))
            }
            other => panic!("{other:?}"),
        }
        match aperiodicity_witness(&trib(), 12).unwrap() {
            Aperiodicity::Aperiodic { complexity } => {
                assert!(complexity.iter().enumerate().all(|(n, &p)| p == 2 * n + 1))
            }
            other => panic!("{other:?}"),
        }
        let ab = Alphabet::from_str_letters("ab").unwrap();
        let tm = DirectiveSequence::constant(Morphism::endo(&ab, &["ab", "ba"]).unwrap()).unwrap();
        assert!(matches!(
            aperiodicity_witness(&tm, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sequence_validation() {
        let ab = Alphabet::from_str_letters("ab").unwrap();
        assert!(DirectiveSequence::periodic(ab.clone(), vec![], vec![]).is_err());
        let abc = Alphabet::from_str_letters("abc").unwrap();
        assert!(DirectiveSequence::periodic(ab, vec![], vec![Morphism::identity(&abc)]).is_err());
        assert!(IntSequence::Geometric { base: 2, shift: 0 }
            .validate(5)
            .is_err());
        assert!(IntSequence::Geometric { base: 2, shift: 1 }
            .validate(5)
            .is_ok());
        assert!(IntSequence::List(vec![1.into(), 3.into()])
            .validate(2)
            .is_err());
        assert!(IntSequence::List(vec![3.into(), 2.into()])
            .validate(2)
            .is_err());
        assert!(IntSequence::List(vec![2.into(), 3.into()])
            .validate(2)
            .is_ok());
        assert!(IntSequence::List(vec![2.into(), 3.into()])
            .validate(3)
            .is_err());
        assert!(
            DirectiveSequence::two_measure(IntSequence::Geometric { base: 2, shift: 1 }, 0)
                .is_err()
        );
    }

    #[test]
    fn beyond_horizon_is_a_range_error() {
        assert!(matches!(two_measure().morphism(41), Err(Error::Range(_))));
        assert!(matches!(two_measure().incidence(41), Err(Error::Range(_))));
        // a_30 = 2^31 cannot be written out as a word.
        assert!(matches!(two_measure().morphism(30), Err(Error::Range(_))));
    }

    #[test]
    fn grouping_blocks() {
        let ds = trib();
        let g = ds.group(3).unwrap();
        assert_eq!(g.morphism(1).unwrap(), ds.telescope(1, 4).unwrap());
        assert_eq!(g.morphism(2).unwrap(), ds.telescope(4, 7).unwrap());
    }
}
