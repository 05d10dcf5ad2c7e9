//! Discrepancy profiles and the balance dashboard.
//!
//! `D_v(n)` is the largest gap `|w|_v − |w'|_v` over factors `w, w'` of a
//! common length `m ≤ n`. Profiles are computed with sliding windows over
//! the generating texts of a [`LanguageTable`].

use rayon::prelude::*;

use crate::dimgroup::{descriptor, infinitesimal_lattice, Descriptor, ProbeParams};
use crate::directive::{certify, DirectiveSequence};
use crate::error::{invalid, Result};
use crate::language::{build_language, LanguageTable};
use crate::returns::occurrences;
use crate::words::Word;

/// Extreme windows of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub length: usize,
    /// Window with the most occurrences.
    pub high: Word,
    pub high_count: u64,
    pub low: Word,
    pub low_count: u64,
}

impl WitnessPair {
    pub fn gap(&self) -> u64 {
        self.high_count - self.low_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub target: Word,
    /// `values[n − 1] = D_v(n)` for `n = 1..=up_to`.
    pub values: Vec<u64>,
    /// A pair realizing `D_v(up_to)`.
    pub witness: Option<WitnessPair>,
}

impl Profile {
    pub fn up_to(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, n: usize) -> u64 {
        self.values[n - 1]
    }

    pub fn last(&self) -> u64 {
        self.values.last().copied().unwrap_or(0)
    }
}

fn profile_of(texts: &[Word], v: &[u8], up_to: usize) -> Profile {
    // prefix[t][i] = number of occurrences of v starting before i
    let starts: Vec<Vec<u32>> = texts
        .iter()
        .map(|t| {
            let occ = occurrences(t.as_slice(), v);
            let mut prefix = vec![0u32; t.len() + 1];
            let mut k = 0;
            for i in 0..t.len() {
                if k < occ.len() && occ[k] == i {
                    k += 1;
                }
                prefix[i + 1] = k as u32;
            }
            prefix
        })
        .collect();
    let per_length: Vec<Option<WitnessPair>> = (1..=up_to)
        .into_par_iter()
        .map(|m| extremes(texts, &starts, v.len(), m))
        .collect();
    let mut values = Vec::with_capacity(up_to);
    let mut running = 0u64;
    let mut witness: Option<WitnessPair> = None;
    for w in per_length {
        if let Some(w) = w {
            if w.gap() > running || witness.is_none() {
                running = running.max(w.gap());
                witness = Some(w);
            }
        }
        values.push(running);
    }
    Profile {
        target: Word::from_indices(v.to_vec()),
        values,
        witness,
    }
}

fn extremes(texts: &[Word], starts: &[Vec<u32>], vlen: usize, m: usize) -> Option<WitnessPair> {
    let mut hi: Option<(u64, usize, usize)> = None;
    let mut lo: Option<(u64, usize, usize)> = None;
    for (ti, (t, prefix)) in texts.iter().zip(starts).enumerate() {
        let n = t.len();
        if n < m {
            continue;
        }
        for s in 0..=n - m {
            let c = if m < vlen {
                0
            } else {
                (prefix[s + m - vlen + 1] - prefix[s]) as u64
            };
            if hi.is_none_or(|h| c > h.0) {
                hi = Some((c, ti, s));
            }
            if lo.is_none_or(|l| c < l.0) {
                lo = Some((c, ti, s));
            }
        }
    }
    let (h, l) = (hi?, lo?);
    let word = |(_, ti, s): (u64, usize, usize)| {
        Word::from_indices(texts[ti].as_slice()[s..s + m].to_vec())
    };
    Some(WitnessPair {
        length: m,
        high: word(h),
        high_count: h.0,
        low: word(l),
        low_count: l.0,
    })
}

/// `D_a(n)` for the letter `a`.
pub fn letter_discrepancy(lang: &LanguageTable, letter: u8, up_to: usize) -> Result<Profile> {
    if letter as usize >= lang.alphabet().len() {
        return Err(invalid(format!(
            "letter index {letter} outside the alphabet"
        )));
    }
    check_range(lang, up_to)?;
    Ok(profile_of(lang.texts(), &[letter], up_to))
}

/// `D_v(n)` for a factor `v`.
pub fn factor_discrepancy(lang: &LanguageTable, v: &[u8], up_to: usize) -> Result<Profile> {
    if v.is_empty() || !lang.contains(v) {
        return Err(invalid(format!(
            "{} is not a non-empty factor of the language",
            lang.alphabet().render_slice(v)
        )));
    }
    check_range(lang, up_to)?;
    Ok(profile_of(lang.texts(), v, up_to))
}

fn check_range(lang: &LanguageTable, up_to: usize) -> Result<()> {
    if up_to == 0 || up_to > lang.max_len() {
        return Err(invalid(format!(
            "profile length {up_to} must be in 1..={}",
            lang.max_len()
        )));
    }
    Ok(())
}

/// Thresholds of the growth classifier.
///
/// Discrepancies of the examples grow like `log n` when they grow at all,
/// so the trend is measured per doubling of `n`: the least-squares slope of
/// `D(n)` against `log₂ n` over the dyadic lengths `up_to / 2^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRule {
    /// Number of dyadic sample lengths (largest first).
    pub samples: usize,
    /// Minimal increase of `D` per doubling of `n`.
    pub min_slope: f64,
    /// Minimal value of `D(up_to)` for a growing verdict.
    pub min_value: u64,
}

impl Default for GrowthRule {
    fn default() -> Self {
        GrowthRule {
            samples: 7,
            min_slope: 0.25,
            min_value: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GrowthClass {
    /// Constant over the final half of the range.
    Bounded {
        bound: u64,
    },
    Growing {
        slope_per_doubling: f64,
    },
    Inconclusive {
        slope_per_doubling: f64,
    },
}

pub fn classify(profile: &Profile, rule: &GrowthRule) -> GrowthClass {
    let n = profile.up_to();
    let mut pts = Vec::new();
    let mut m = n;
    while pts.len() < rule.samples.max(2) && m >= 1 {
        pts.push(((m as f64).log2(), profile.at(m) as f64));
        m /= 2;
    }
    let slope = if pts.len() < 2 {
        0.0
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx == 0.0 {
            0.0
        } else {
            sxy / sxx
        }
    };
    if slope >= rule.min_slope && profile.last() >= rule.min_value {
        return GrowthClass::Growing {
            slope_per_doubling: slope,
        };
    }
    if profile.at(n.div_ceil(2).max(1)) == profile.last() {
        return GrowthClass::Bounded {
            bound: profile.last(),
        };
    }
    GrowthClass::Inconclusive {
        slope_per_doubling: slope,
    }
}

/// Whether the hypotheses tying balance to frequencies apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassHypotheses {
    pub holds: bool,
    pub source: String,
}

impl ClassHypotheses {
    /// Minimal dendric subshifts are primitive unimodular proper S-adic; the
    /// dendric test here only covers bispecials up to `up_to`.
    pub fn from_dendric(lang: &LanguageTable, up_to: usize) -> Result<Self> {
        let v = lang.is_dendric(up_to)?;
        Ok(ClassHypotheses {
            holds: v.dendric,
            source: if v.dendric {
                format!(
                    "dendric up to length {up_to} ({} bispecial factors checked)",
                    v.bispecials_checked
                )
            } else {
                format!(
                    "not dendric: extension graph of {} is not a tree",
                    lang.alphabet().render(&v.witness.unwrap().word)
                )
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BalanceVerdict {
    NotBalanced {
        reason: String,
        witness: Option<WitnessPair>,
    },
    /// Every profile stayed bounded up to `up_to`; never a certificate.
    EmpiricallyBalanced {
        up_to: usize,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub profile: Profile,
    pub growth: GrowthClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub d: usize,
    pub up_to: usize,
    pub rule: GrowthRule,
    pub hypotheses: ClassHypotheses,
    pub letters: Vec<ProfileReport>,
    pub factors: Vec<ProfileReport>,
    /// `d` minus the rank of the integer relations among letter
    /// frequencies; only computed inside the class.
    pub frequency_rank: Option<usize>,
    pub rank_method: String,
    pub letter_verdict: BalanceVerdict,
    pub factor_verdict: BalanceVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceParams {
    pub up_to: usize,
    /// Factors to profile; by default every factor of length 2 and 3.
    pub factors: Option<Vec<Word>>,
    pub factor_up_to: Option<usize>,
    pub rule: GrowthRule,
    pub probe: ProbeParams,
}

impl Default for BalanceParams {
    fn default() -> Self {
        BalanceParams {
            up_to: 256,
            factors: None,
            factor_up_to: None,
            rule: GrowthRule::default(),
            probe: ProbeParams::default(),
        }
    }
}

fn verdict(
    reports: &[ProfileReport],
    up_to: usize,
    lang: &LanguageTable,
    what: &str,
) -> BalanceVerdict {
    if let Some(r) = reports
        .iter()
        .find(|r| matches!(r.growth, GrowthClass::Growing { .. }))
    {
        return BalanceVerdict::NotBalanced {
            reason: format!(
                "growing discrepancy for {} {}",
                what,
                lang.alphabet().render(&r.profile.target)
            ),
            witness: r.profile.witness.clone(),
        };
    }
    if reports
        .iter()
        .all(|r| matches!(r.growth, GrowthClass::Bounded { .. }))
    {
        return BalanceVerdict::EmpiricallyBalanced { up_to };
    }
    BalanceVerdict::Inconclusive {
        reason: format!("some {what} profiles neither plateau nor grow"),
    }
}

/// Dashboard over an explicit language table and (optional) descriptor.
pub fn balance_dashboard_with(
    lang: &LanguageTable,
    desc: Option<&Descriptor>,
    hypotheses: ClassHypotheses,
    params: &BalanceParams,
) -> Result<BalanceReport> {
    let d = lang.alphabet().len();
    let up_to = params.up_to;
    let letters = (0..d as u8)
        .map(|a| {
            let profile = letter_discrepancy(lang, a, up_to)?;
            let growth = classify(&profile, &params.rule);
            Ok(ProfileReport { profile, growth })
        })
        .collect::<Result<Vec<_>>>()?;
    let factor_words = match &params.factors {
        Some(f) => f.clone(),
        None => {
            let mut f = lang.factors(2.min(lang.max_len()))?;
            if lang.max_len() >= 3 {
                f.extend(lang.factors(3)?);
            }
            f
        }
    };
    let fup = params.factor_up_to.unwrap_or(up_to);
    let factors = factor_words
        .iter()
        .map(|w| {
            let profile = factor_discrepancy(lang, w.as_slice(), fup)?;
            let growth = classify(&profile, &params.rule);
            Ok(ProfileReport { profile, growth })
        })
        .collect::<Result<Vec<_>>>()?;
    let (frequency_rank, rank_method) = match (hypotheses.holds, desc) {
        (true, Some(desc)) => match infinitesimal_lattice(desc) {
            Ok(lat) => (Some(d - lat.basis.len()), format!("{:?}", lat.method)),
            Err(e) => (None, format!("relation search inconclusive: {e}")),
        },
        (true, None) => (None, "no measure descriptor".into()),
        (false, _) => (
            None,
            "not applicable outside the primitive unimodular proper class".into(),
        ),
    };
    let mut letter_verdict = verdict(&letters, up_to, lang, "letter");
    if let Some(r) = frequency_rank.filter(|&r| r < d) {
        // Rationally dependent frequencies rule out balance on letters in this class.
        if !matches!(letter_verdict, BalanceVerdict::NotBalanced { .. }) {
            letter_verdict = BalanceVerdict::NotBalanced {
                reason: format!(
                    "frequency rank {r} < {d}: letter frequencies are rationally dependent"
                ),
                witness: None,
            };
        }
    }
    let mut factor_verdict = verdict(&factors, fup, lang, "factor");
    if matches!(letter_verdict, BalanceVerdict::NotBalanced { .. }) && hypotheses.holds {
        if let BalanceVerdict::EmpiricallyBalanced { .. } = factor_verdict {
            factor_verdict = BalanceVerdict::NotBalanced {
                reason: "not balanced on letters, hence not on factors".into(),
                witness: None,
            };
        }
    }
    Ok(BalanceReport {
        d,
        up_to,
        rule: params.rule.clone(),
        hypotheses,
        letters,
        factors,
        frequency_rank,
        rank_method,
        letter_verdict,
        factor_verdict,
    })
}

/// Dashboard of a directive sequence.
pub fn balance_dashboard(ds: &DirectiveSequence, params: &BalanceParams) -> Result<BalanceReport> {
    let cert = certify(ds, 1)?;
    let holds =
        cert.primitive.is_primitive() && cert.unimodular && cert.left_proper_block.is_some();
    let hypotheses = ClassHypotheses {
        holds,
        source: if holds {
            "certified primitive, unimodular and (blockwise) proper".into()
        } else {
            format!(
                "outside the class: primitive={}, unimodular={}, proper block={:?}",
                cert.primitive.is_primitive(),
                cert.unimodular,
                cert.left_proper_block
            )
        },
    };
    let need = params.up_to.max(params.factor_up_to.unwrap_or(0)).max(3);
    let lang = build_language(ds, need)?;
    let desc = if holds {
        descriptor(ds, &params.probe).ok()
    } else {
        None
    };
    balance_dashboard_with(&lang, desc.as_ref(), hypotheses, params)
}

/// `max_n |Σ_{i<n} (χ_v(x_i) − freq)|` along a text.
pub fn centered_birkhoff_max(text: &[u8], letter: u8, freq: f64) -> f64 {
    let mut s = 0.0f64;
    let mut worst = 0.0f64;
    for &c in text {
        s += if c == letter { 1.0 - freq } else { -freq };
        worst = worst.max(s.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fibonacci, thue_morse_conjugate, tribonacci};

    #[test]
    fn fibonacci_letters_are_one_balanced() {
        let lang = build_language(&fibonacci(), 40).unwrap();
        let p = letter_discrepancy(&lang, 0, 40).unwrap();
        assert!(p.values.iter().all(|&v| v == 1));
        assert_eq!(p.witness.as_ref().unwrap().gap(), 1);
        assert_eq!(
            classify(&p, &GrowthRule::default()),
            GrowthClass::Bounded { bound: 1 }
        );
        assert!(letter_discrepancy(&lang, 2, 10).is_err());
        assert!(factor_discrepancy(&lang, &[1, 1], 10).is_err());
    }

    #[test]
    fn profiles_are_monotone() {
        let lang = build_language(&thue_morse_conjugate(), 64).unwrap();
        for a in 0..4 {
            let p = letter_discrepancy(&lang, a, 64).unwrap();
            assert!(p.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn witness_counts_match() {
        let lang = build_language(&tribonacci(), 30).unwrap();
        let p = factor_discrepancy(&lang, &[0, 1], 30).unwrap();
        let w = p.witness.clone().unwrap();
        let count = |x: &Word| occurrences(x.as_slice(), &[0, 1]).len() as u64;
        assert_eq!(count(&w.high), w.high_count);
        assert_eq!(count(&w.low), w.low_count);
        assert_eq!(w.gap(), p.last());
    }

    #[test]
    fn classifier_on_synthetic_profiles() {
        let rule = GrowthRule::default();
        let flat = Profile {
            target: Word::empty(),
            values: vec![2; 100],
            witness: None,
        };
        assert_eq!(classify(&flat, &rule), GrowthClass::Bounded { bound: 2 });
        let log: Vec<u64> = (1..=1024u64)
            .map(|n| 64 - n.leading_zeros() as u64)
            .collect();
        let p = Profile {
            target: Word::empty(),
            values: log,
            witness: None,
        };
        assert!(matches!(classify(&p, &rule), GrowthClass::Growing { .. }));
    }
}
