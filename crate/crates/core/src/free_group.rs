//! Free-group basis test by Nielsen reduction.
//!
//! Generator `k` of the free group on `d` letters is encoded as `k + 1`,
//! its inverse as `-(k + 1)`.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::matrix::IntegerMatrix;
use crate::words::Word;

pub type Element = Vec<i32>;

/// Freely reduced product.
pub fn reduce(w: &[i32]) -> Element {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Element {
    w.iter().rev().map(|g| -g).collect()
}

pub fn product(u: &[i32], v: &[i32]) -> Element {
    let mut w = u.to_vec();
    w.extend_from_slice(v);
    reduce(&w)
}

pub fn from_word(w: &Word) -> Element {
    w.as_slice().iter().map(|&c| c as i32 + 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisVerdict {
    Basis,
    NotBasis,
    /// The plateau search hit its state cap.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisReport {
    pub verdict: BasisVerdict,
    /// Determinant of the abelianization matrix when the set has `d` words.
    pub abelian_det: Option<BigInt>,
    /// The set after reduction.
    pub reduced: Vec<Element>,
    pub reason: String,
}

const PLATEAU_CAP: usize = 20_000;

/// Whether `words` is a basis of the free group on `d` letters.
pub fn free_basis_check(words: &[Word], d: usize) -> BasisReport {
    let elems: Vec<Element> = words.iter().map(from_word).collect();
    if words.len() != d {
        return BasisReport {
            verdict: BasisVerdict::NotBasis,
            abelian_det: None,
            reduced: elems,
            reason: format!(
                "{} words cannot form a basis of a rank-{d} free group",
                words.len()
            ),
        };
    }
    let cols: Vec<Vec<BigInt>> = words
        .iter()
        .map(|w| w.abelianize(d).into_iter().map(BigInt::from).collect())
        .collect();
    let det = IntegerMatrix::from_big_rows(cols).det();
    if !det.abs().is_one() {
        return BasisReport {
            verdict: BasisVerdict::NotBasis,
            abelian_det: Some(det),
            reduced: elems,
            reason: "abelianization is not unimodular".into(),
        };
    }
    let (verdict, reduced, reason) = nielsen(elems, d);
    BasisReport {
        verdict,
        abelian_det: Some(det),
        reduced,
        reason,
    }
}

fn is_letters(set: &[Element], d: usize) -> bool {
    let mut seen = vec![false; d];
    set.iter().all(|e| {
        e.len() == 1 && {
            let k = e[0].unsigned_abs() as usize - 1;
            !std::mem::replace(&mut seen[k], true)
        }
    })
}

/// Candidate moves `u_i ← u_j^{±1}·u_i` or `u_i·u_j^{±1}`, in a fixed order.
fn moves(set: &[Element]) -> impl Iterator<Item = (usize, Element)> + '_ {
    let n = set.len();
    (0..n).flat_map(move |i| {
        (0..n).filter(move |&j| j != i).flat_map(move |j| {
            let inv = inverse(&set[j]);
            let pos = set[j].clone();
            [
                product(&set[i], &pos),
                product(&set[i], &inv),
                product(&pos, &set[i]),
                product(&inv, &set[i]),
            ]
            .into_iter()
            .map(move |e| (i, e))
        })
    })
}

fn best_decrease(set: &[Element]) -> Option<(usize, Element)> {
    moves(set)
        .filter(|(i, e)| e.len() < set[*i].len())
        .min_by(|(i, a), (j, b)| {
            (a.len() as isize - set[*i].len() as isize, *i, a).cmp(&(
                b.len() as isize - set[*j].len() as isize,
                *j,
                b,
            ))
        })
}

fn canonical(set: &[Element]) -> Vec<Element> {
    let mut c: Vec<Element> = set
        .iter()
        .map(|e| {
            let inv = inverse(e);
            if inv < *e {
                inv
            } else {
                e.clone()
            }
        })
        .collect();
    c.sort();
    c
}

fn nielsen(mut set: Vec<Element>, d: usize) -> (BasisVerdict, Vec<Element>, String) {
    loop {
        if set.iter().any(Vec::is_empty) {
            return (
                BasisVerdict::NotBasis,
                set,
                "a word reduces to the identity".into(),
            );
        }
        if is_letters(&set, d) {
            return (BasisVerdict::Basis, set, "reduced to the letters".into());
        }
        if let Some((i, e)) = best_decrease(&set) {
            set[i] = e;
            continue;
        }
        // Plateau: search length-preserving moves for a state admitting a decrease.
        let mut queue = VecDeque::from([set.clone()]);
        let mut seen = HashSet::from([canonical(&set)]);
        let mut escaped = None;
        'bfs: while let Some(s) = queue.pop_front() {
            for (i, e) in moves(&s) {
                if e.len() != s[i].len() {
                    continue;
                }
                let mut t = s.clone();
                t[i] = e;
                if !seen.insert(canonical(&t)) {
                    continue;
                }
                if best_decrease(&t).is_some() || is_letters(&t, d) {
                    escaped = Some(t);
                    break 'bfs;
                }
                if seen.len() > PLATEAU_CAP {
                    return (
                        BasisVerdict::Inconclusive,
                        set,
                        "plateau search exceeded its state cap".into(),
                    );
                }
                queue.push_back(t);
            }
        }
        match escaped {
            Some(t) => set = t,
            None => {
                return (
                    BasisVerdict::NotBasis,
                    set,
                    "Nielsen-reduced set is not a set of letters".into(),
                )
            }
        }
    }
}
