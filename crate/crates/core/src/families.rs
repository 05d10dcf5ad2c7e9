//! Built-in directive sequences and the interval-exchange codings used
//! as examples.

use std::cmp::Ordering;

use crate::dimgroup::{descriptor, Descriptor, MeasureVector, ProbeParams};
use crate::directive::{DirectiveSequence, IntSequence};
use crate::error::{invalid, Result};
use crate::language::LanguageTable;
use crate::matrix::Field;
use crate::numeric::rat;
use crate::quadratic::QuadSurd;
use crate::words::{Alphabet, Morphism, Word};

/// Named families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Fibonacci,
    Tribonacci,
    ThueMorse,
    ThueMorseConjugate,
    /// Period of the directive sequence as a word of letters `α_a`.
    ArnouxRauzy {
        word: String,
        d: Option<usize>,
    },
    /// Period as comma-separated pairs `ab` standing for `β_ab`.
    Brun {
        pairs: String,
    },
    /// `a_n` and the horizon.
    Sec65 {
        a: IntSequence,
        horizon: usize,
    },
    Iet3Ex63,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "fibonacci",
    "tribonacci",
    "thue_morse",
    "thue_morse_conjugate",
    "arnoux_rauzy",
    "brun",
    "sec65",
    "iet3_ex63",
];

fn endo(letters: &str, images: &[&str]) -> Result<DirectiveSequence> {
    let a = Alphabet::from_str_letters(letters)?;
    DirectiveSequence::constant(Morphism::endo(&a, images)?)
}

pub fn fibonacci() -> DirectiveSequence {
    endo("ab", &["ab", "a"]).expect("valid")
}

pub fn tribonacci() -> DirectiveSequence {
    endo("abc", &["ab", "ac", "a"]).expect("valid")
}

pub fn thue_morse() -> DirectiveSequence {
    endo("ab", &["ab", "ba"]).expect("valid")
}

pub fn thue_morse_conjugate() -> DirectiveSequence {
    endo("abcd", &["bb", "bd", "ca", "cb"]).expect("valid")
}

/// The default two-measure instance `a_n = 2^{n+1}` up to level 40.
pub fn sec65_default() -> DirectiveSequence {
    DirectiveSequence::two_measure(IntSequence::Geometric { base: 2, shift: 1 }, 40).expect("valid")
}

/// `d` letters: `a, b, …` or `1, 2, …`.
fn alphabet_for(d: usize, digits: bool) -> Result<Alphabet> {
    if d > 9 {
        return Err(invalid(
            "at most 9 letters are supported for built-in families",
        ));
    }
    let letters: String = if digits {
        (1..=d).map(|k| char::from(b'0' + k as u8)).collect()
    } else {
        (0..d).map(|k| char::from(b'a' + k as u8)).collect()
    };
    Alphabet::from_str_letters(&letters)
}

fn letter_index(c: char) -> Result<(usize, bool)> {
    match c {
        '1'..='9' => Ok((c as usize - '1' as usize, true)),
        'a'..='i' => Ok((c as usize - 'a' as usize, false)),
        _ => Err(invalid(format!("unsupported letter {c:?}"))),
    }
}

/// `α_a : a ↦ a, b ↦ ab`.
pub fn ar_morphism(alphabet: &Alphabet, a: u8) -> Morphism {
    let images = (0..alphabet.len() as u8)
        .map(|b| Word::from_indices(if b == a { vec![a] } else { vec![a, b] }))
        .collect();
    Morphism::new(alphabet.clone(), alphabet.clone(), images).expect("valid")
}

/// `β_ab : b ↦ ab, c ↦ c`.
pub fn brun_morphism(alphabet: &Alphabet, a: u8, b: u8) -> Morphism {
    let images = (0..alphabet.len() as u8)
        .map(|c| Word::from_indices(if c == b { vec![a, b] } else { vec![c] }))
        .collect();
    Morphism::new(alphabet.clone(), alphabet.clone(), images).expect("valid")
}

/// Periodic Arnoux–Rauzy sequence; every letter must occur in the period.
pub fn arnoux_rauzy(word: &str, d: Option<usize>) -> Result<DirectiveSequence> {
    let parsed: Vec<(usize, bool)> = word.chars().map(letter_index).collect::<Result<_>>()?;
    if parsed.is_empty() {
        return Err(invalid("empty Arnoux–Rauzy period"));
    }
    let digits = parsed[0].1;
    if parsed.iter().any(|p| p.1 != digits) {
        return Err(invalid("mixed letter styles in the period"));
    }
    let d = d
        .unwrap_or_else(|| parsed.iter().map(|p| p.0).max().unwrap() + 1)
        .max(2);
    let alphabet = alphabet_for(d, digits)?;
    for k in 0..d {
        if !parsed.iter().any(|p| p.0 == k) {
            return Err(invalid(format!(
                "letter {} never occurs in the period, so the sequence is not primitive",
                alphabet.letter(k as u8)
            )));
        }
    }
    if let Some(p) = parsed.iter().find(|p| p.0 >= d) {
        return Err(invalid(format!(
            "letter index {} outside a {d}-letter alphabet",
            p.0 + 1
        )));
    }
    let period = parsed
        .iter()
        .map(|p| ar_morphism(&alphabet, p.0 as u8))
        .collect();
    DirectiveSequence::periodic(alphabet, vec![], period)
}

/// Parses `"12,23,31"` into index pairs and the alphabet size.
pub fn parse_brun_pairs(pairs: &str) -> Result<(Vec<(u8, u8)>, usize, bool)> {
    let mut out = Vec::new();
    let mut digits = None;
    for tok in pairs.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let cs: Vec<char> = tok.chars().collect();
        if cs.len() != 2 {
            return Err(invalid(format!("Brun pair {tok:?} must have two letters")));
        }
        let (a, da) = letter_index(cs[0])?;
        let (b, db) = letter_index(cs[1])?;
        if da != db || digits.is_some_and(|d| d != da) {
            return Err(invalid("mixed letter styles in the pair word"));
        }
        digits = Some(da);
        if a == b {
            return Err(invalid(format!(
                "Brun pair {tok:?} needs two distinct letters"
            )));
        }
        out.push((a as u8, b as u8));
    }
    if out.is_empty() {
        return Err(invalid("empty Brun pair word"));
    }
    let d = out
        .iter()
        .map(|&(a, b)| a.max(b) as usize + 1)
        .max()
        .unwrap()
        .max(3);
    Ok((out, d, digits.unwrap_or(true)))
}

/// `τ_nτ_{n+1}` must be `β_abβ_ab` or `β_abβ_bc`.
pub fn brun_admissible(pairs: &[(u8, u8)], cyclic: bool) -> Option<usize> {
    let n = pairs.len();
    let last = if cyclic { n } else { n.saturating_sub(1) };
    (0..last).find(|&i| {
        let (p, q) = (pairs[i], pairs[(i + 1) % n]);
        !(p == q || q.0 == p.1)
    })
}

fn brun_check(pairs: &[(u8, u8)], d: usize, cyclic: bool) -> Result<()> {
    if let Some(i) = brun_admissible(pairs, cyclic) {
        let j = (i + 1) % pairs.len();
        return Err(invalid(format!(
            "inadmissible Brun transition at position {}: β_{}{} followed by β_{}{}",
            i + 1,
            pairs[i].0 + 1,
            pairs[i].1 + 1,
            pairs[j].0 + 1,
            pairs[j].1 + 1
        )));
    }
    if cyclic {
        for a in 0..d as u8 {
            if !pairs.iter().any(|p| p.0 == a) {
                return Err(invalid(format!(
                    "no β_{}x occurs in the period, so it is not primitive",
                    a + 1
                )));
            }
        }
    }
    Ok(())
}

/// Periodic Brun sequence with the pair word as its period.
pub fn brun(pairs: &str) -> Result<DirectiveSequence> {
    let (pairs, d, digits) = parse_brun_pairs(pairs)?;
    brun_check(&pairs, d, true)?;
    let alphabet = alphabet_for(d, digits)?;
    let period = pairs
        .iter()
        .map(|&(a, b)| brun_morphism(&alphabet, a, b))
        .collect();
    DirectiveSequence::periodic(alphabet, vec![], period)
}

/// A finite Brun sequence over `1..=d`.
pub fn brun_truncated(d: usize, pairs: &[(u8, u8)]) -> Result<DirectiveSequence> {
    if pairs
        .iter()
        .any(|&(a, b)| a == b || a as usize >= d || b as usize >= d)
    {
        return Err(invalid(
            "Brun pairs must be distinct letters of the alphabet",
        ));
    }
    brun_check(pairs, d, false)?;
    let alphabet = alphabet_for(d, true)?;
    let levels = pairs
        .iter()
        .map(|&(a, b)| brun_morphism(&alphabet, a, b))
        .collect();
    DirectiveSequence::truncated(alphabet, levels)
}

pub fn make(spec: &FamilySpec) -> Result<DirectiveSequence> {
    match spec {
        FamilySpec::Fibonacci => Ok(fibonacci()),
        FamilySpec::Tribonacci => Ok(tribonacci()),
        FamilySpec::ThueMorse => Ok(thue_morse()),
        FamilySpec::ThueMorseConjugate => Ok(thue_morse_conjugate()),
        FamilySpec::ArnouxRauzy { word, d } => arnoux_rauzy(word, *d),
        FamilySpec::Brun { pairs } => brun(pairs),
        FamilySpec::Sec65 { a, horizon } => DirectiveSequence::two_measure(a.clone(), *horizon),
        FamilySpec::Iet3Ex63 => Err(invalid(
            "iet3_ex63 is given as an interval exchange; use its coding or its exact measure",
        )),
    }
}

/// `α = (3 − √5)/2`.
pub fn ex63_alpha() -> QuadSurd {
    QuadSurd::new(rat(3, 2), rat(-1, 2), 5)
}

/// Interval lengths `(1 − 2α, α, α)`, which are the letter measures.
pub fn ex63_measure() -> Vec<QuadSurd> {
    let alpha = ex63_alpha();
    let one = QuadSurd::rational(rat(1, 1), 5);
    vec![one.sub(&alpha.scale(&rat(2, 1))), alpha.clone(), alpha]
}

pub fn ex63_descriptor() -> Descriptor {
    Descriptor::new(
        3,
        vec![MeasureVector::Quadratic(ex63_measure())],
        "interval lengths of the exchange",
    )
    .expect("valid measure")
}

/// Coding of the orbit of 0 under the exchange on
/// `I₁ = [0, 1−2α)`, `I₂ = [1−2α, 1−α)`, `I₃ = [1−α, 1)` with permutation
/// (1,3,2), i.e. `x ↦ x + 2α` on `I₁` and `x ↦ x + 2α − 1` elsewhere.
pub fn iet3_coding_ex63(len: usize) -> Word {
    let alpha = ex63_alpha();
    let one = QuadSurd::rational(rat(1, 1), 5);
    let two_alpha = alpha.scale(&rat(2, 1));
    let cut1 = one.sub(&two_alpha);
    let cut2 = one.sub(&alpha);
    let shift_back = two_alpha.sub(&one);
    let mut x = QuadSurd::rational(rat(0, 1), 5);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let c1 = x.cmp_exact(&cut1);
        let c2 = x.cmp_exact(&cut2);
        assert!(
            c1 != Ordering::Equal && (x.signum() == Ordering::Equal || c2 != Ordering::Equal),
            "orbit hit a discontinuity"
        );
        if c1 == Ordering::Less {
            out.push(0);
            x = x.add(&two_alpha);
        } else {
            out.push(if c2 == Ordering::Less { 1 } else { 2 });
            x = x.add(&shift_back);
        }
    }
    Word::from_indices(out)
}

/// Alphabet `123` of the coding.
pub fn ex63_alphabet() -> Alphabet {
    Alphabet::from_str_letters("123").expect("valid")
}

/// Language of the exchange read from the coding of the first
/// `coding_len` points of the orbit of 0.
pub fn ex63_language(coding_len: usize, max_len: usize) -> Result<LanguageTable> {
    LanguageTable::from_text(ex63_alphabet(), &iet3_coding_ex63(coding_len), max_len)
}

/// Descriptor of the three-interval exchange whose lengths are the
/// Tribonacci letter measures: the same measure vector.
pub fn iet64_descriptor(params: &ProbeParams) -> Result<Descriptor> {
    let mut d = descriptor(&tribonacci(), params)?;
    d.provenance = format!(
        "3-interval exchange with Tribonacci lengths ({})",
        d.provenance
    );
    Ok(d)
}
