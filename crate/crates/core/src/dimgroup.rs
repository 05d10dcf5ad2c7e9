//! Dimension-group descriptors `(ℤ^d, C, 1)` built from letter measures,
//! the infinitesimal lattice, and a bounded strong-orbit-equivalence search.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::directive::{certify, DirectiveSequence};
use crate::error::{invalid, precondition, Error, Result};
use crate::lattice::{canonical_sign, find_relations, in_span, integer_kernel, integer_row};
use crate::matrix::{Field, IntegerMatrix};
use crate::measures::{ergodicity_probe, exact_letter_measure, ExactMeasure, ProbeVerdict};
use crate::numeric::{dot_interval, Interval, Rational};
use crate::quadratic::QuadSurd;

/// Digits used when an exact quadratic value has to be enclosed.
const ENCLOSURE_DIGITS: u32 = 60;

/// A letter-measure vector `(μ[a])_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureVector {
    Rational(Vec<Rational>),
    Quadratic(Vec<QuadSurd>),
    Boxed(Vec<Interval>),
}

impl From<ExactMeasure> for MeasureVector {
    fn from(m: ExactMeasure) -> Self {
        match m {
            ExactMeasure::Rational(v) => MeasureVector::Rational(v),
            ExactMeasure::Quadratic(v) => MeasureVector::Quadratic(v),
        }
    }
}

impl MeasureVector {
    pub fn len(&self) -> usize {
        match self {
            MeasureVector::Rational(v) => v.len(),
            MeasureVector::Quadratic(v) => v.len(),
            MeasureVector::Boxed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, MeasureVector::Boxed(_))
    }

    pub fn enclosure(&self) -> Vec<Interval> {
        match self {
            MeasureVector::Rational(v) => v.iter().cloned().map(Interval::point).collect(),
            MeasureVector::Quadratic(v) => {
                v.iter().map(|x| x.enclosure(ENCLOSURE_DIGITS)).collect()
            }
            MeasureVector::Boxed(v) => v.clone(),
        }
    }

    fn approx(&self) -> Vec<f64> {
        self.enclosure()
            .iter()
            .map(|iv| iv.midpoint().to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    fn width(&self) -> f64 {
        self.enclosure()
            .iter()
            .map(|iv| iv.width().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Sign of `⟨x, μ⟩`: exact for exact vectors, `None` when an enclosure
    /// straddles zero.
    pub fn dot_sign(&self, x: &[BigInt]) -> Option<Ordering> {
        match self {
            MeasureVector::Rational(v) => {
                let s: Rational = v
                    .iter()
                    .zip(x)
                    .map(|(m, k)| m * BigRational::from_integer(k.clone()))
                    .sum();
                Some(s.cmp(&Rational::zero()))
            }
            MeasureVector::Quadratic(v) => Some(quad_dot(v, x).signum()),
            MeasureVector::Boxed(v) => dot_interval(x, v).sign(),
        }
    }
}

fn quad_dot(v: &[QuadSurd], x: &[BigInt]) -> QuadSurd {
    v.iter().zip(x).fold(v[0].zero_like(), |acc, (m, k)| {
        acc.add(&m.scale(&BigRational::from_integer(k.clone())))
    })
}

/// `(ℤ^d, {x : ⟨x, μ⟩ > 0 for every extreme μ} ∪ {0}, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub d: usize,
    pub extreme_measures: Vec<MeasureVector>,
    pub provenance: String,
}

impl Descriptor {
    pub fn new(
        d: usize,
        extreme_measures: Vec<MeasureVector>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if extreme_measures.is_empty() || extreme_measures.len() > d.saturating_sub(1).max(1) {
            return Err(invalid(format!(
                "{} extreme measures on {d} letters (expected between 1 and {})",
                extreme_measures.len(),
                d.saturating_sub(1).max(1)
            )));
        }
        for m in &extreme_measures {
            if m.len() != d {
                return Err(invalid("measure vector of the wrong dimension"));
            }
            let ok = match m {
                MeasureVector::Rational(v) => {
                    v.iter().all(|x| !x.is_negative())
                        && v.iter().sum::<Rational>() == Rational::one()
                }
                MeasureVector::Quadratic(v) => {
                    v.iter().all(|x| x.signum() != Ordering::Less) && {
                        let s = v.iter().skip(1).fold(v[0].clone(), |a, b| a.add(b));
                        s.cmp_exact(&QuadSurd::rational(Rational::one(), s.radicand()))
                            == Ordering::Equal
                    }
                }
                MeasureVector::Boxed(v) => {
                    let lo: Rational = v.iter().map(|iv| iv.lo.clone()).sum();
                    let hi: Rational = v.iter().map(|iv| iv.hi.clone()).sum();
                    v.iter().all(|iv| !iv.hi.is_negative())
                        && lo <= Rational::one()
                        && Rational::one() <= hi
                }
            };
            if !ok {
                return Err(invalid(
                    "extreme measures must be non-negative with total mass 1",
                ));
            }
        }
        Ok(Descriptor {
            d,
            extreme_measures,
            provenance: provenance.into(),
        })
    }

    pub fn unit(&self) -> Vec<BigInt> {
        vec![BigInt::one(); self.d]
    }

    pub fn is_uniquely_ergodic(&self) -> bool {
        self.extreme_measures.len() == 1
    }
}

/// Depth and precision of the cone probe behind a descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeParams {
    pub max_depth: usize,
    pub eps: Rational,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            max_depth: 400,
            eps: BigRational::new(BigInt::one(), BigInt::from(10).pow(30)),
        }
    }
}

/// Descriptor of a primitive unimodular (blockwise) proper sequence:
/// exact measures for eventually periodic sequences whose Perron root is
/// rational or quadratic, probe enclosures otherwise.
pub fn descriptor(ds: &DirectiveSequence, params: &ProbeParams) -> Result<Descriptor> {
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() || !cert.unimodular || cert.left_proper_block.is_none() {
        return Err(precondition(
            "descriptors need a primitive unimodular (blockwise) proper sequence",
        ));
    }
    if ds.is_eventually_periodic() {
        if let Some(m) = exact_letter_measure(ds)? {
            return Descriptor::new(ds.d(), vec![m.into()], "exact Perron vector of the period");
        }
    }
    let report = ergodicity_probe(ds, params.max_depth, &params.eps)?;
    match report.verdict {
        ProbeVerdict::Unique { depth, enclosure } => Descriptor::new(
            ds.d(),
            vec![MeasureVector::Boxed(enclosure)],
            format!("cone enclosure at depth {depth}"),
        ),
        ProbeVerdict::Multiple {
            clusters,
            from_depth,
            to_depth,
            ..
        } => Descriptor::new(
            ds.d(),
            clusters
                .into_iter()
                .map(|c| MeasureVector::Boxed(c.enclosure))
                .collect(),
            format!("cluster boxes persistent over depths {from_depth}..={to_depth}"),
        ),
        ProbeVerdict::Inconclusive { reason } => {
            Err(Error::Inconclusive(format!("measure probe: {reason}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Positive,
    /// `⟨x, μ⟩ = 0` for every extreme measure (an infinitesimal, or 0).
    Zero,
    NegativeOrMixed,
    Undecidable,
}

/// Position of `x` with respect to the positive cone.
pub fn cone_membership(desc: &Descriptor, x: &[BigInt]) -> Result<Membership> {
    if x.len() != desc.d {
        return Err(invalid(format!(
            "vector of length {} for a rank-{} group",
            x.len(),
            desc.d
        )));
    }
    if x.iter().all(Zero::is_zero) {
        return Ok(Membership::Zero);
    }
    let signs: Vec<Option<Ordering>> = desc
        .extreme_measures
        .iter()
        .map(|m| m.dot_sign(x))
        .collect();
    if signs.contains(&Some(Ordering::Less)) {
        return Ok(Membership::NegativeOrMixed);
    }
    if signs.iter().all(|s| *s == Some(Ordering::Greater)) {
        return Ok(Membership::Positive);
    }
    let unknown = signs.iter().any(Option::is_none);
    let infinitesimal = || {
        infinitesimal_lattice(desc)
            .map(|lat| in_span(&lat.basis, x))
            .unwrap_or(false)
    };
    if signs.iter().all(|s| *s != Some(Ordering::Greater)) && (!unknown || infinitesimal()) {
        return Ok(Membership::Zero);
    }
    if !unknown {
        // Some zero, some positive.
        return Ok(Membership::NegativeOrMixed);
    }
    Ok(Membership::Undecidable)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeMethod {
    Exact,
    IntegerRelation { scale: BigInt, bound: BigInt },
}

/// `{x ∈ ℤ^d : ⟨x, μ⟩ = 0 for every extreme μ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitesimalLattice {
    pub basis: Vec<Vec<BigInt>>,
    pub method: LatticeMethod,
}

impl InfinitesimalLattice {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Default coefficient bound for relation search.
pub fn default_relation_bound() -> BigInt {
    BigInt::from(1_000_000)
}

pub fn infinitesimal_lattice(desc: &Descriptor) -> Result<InfinitesimalLattice> {
    infinitesimal_lattice_with_bound(desc, &default_relation_bound())
}

pub fn infinitesimal_lattice_with_bound(
    desc: &Descriptor,
    bound: &BigInt,
) -> Result<InfinitesimalLattice> {
    if desc.extreme_measures.iter().all(MeasureVector::is_exact) {
        let mut rows = Vec::new();
        for m in &desc.extreme_measures {
            match m {
                MeasureVector::Rational(v) => rows.push(integer_row(v)),
                MeasureVector::Quadratic(v) => {
                    // ⟨x, a + b√D⟩ = 0 with √D irrational splits into two rational equations.
                    rows.push(integer_row(
                        &v.iter().map(|q| q.a.clone()).collect::<Vec<_>>(),
                    ));
                    rows.push(integer_row(
                        &v.iter().map(|q| q.b.clone()).collect::<Vec<_>>(),
                    ));
                }
                MeasureVector::Boxed(_) => unreachable!(),
            }
        }
        let mut basis = integer_kernel(&rows, desc.d);
        for b in basis.iter_mut() {
            canonical_sign(b);
        }
        basis.sort();
        return Ok(InfinitesimalLattice {
            basis,
            method: LatticeMethod::Exact,
        });
    }
    let boxes: Vec<Vec<Interval>> = desc
        .extreme_measures
        .iter()
        .map(MeasureVector::enclosure)
        .collect();
    let search = find_relations(&boxes, bound);
    if !search.certified {
        let cand = search
            .candidate
            .map(|c| {
                format!(
                    "{:?}",
                    c.iter().map(ToString::to_string).collect::<Vec<_>>()
                )
            })
            .unwrap_or_default();
        return Err(Error::Inconclusive(format!(
            "enclosures too wide to settle relations up to {bound}; candidate {cand}"
        )));
    }
    let mut basis = search.relations;
    basis.sort();
    Ok(InfinitesimalLattice {
        basis,
        method: LatticeMethod::IntegerRelation {
            scale: search.scale,
            bound: search.bound,
        },
    })
}

/// Generators `μ[a]` of the image subgroup, per extreme measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGenerators {
    pub per_measure: Vec<MeasureVector>,
    /// Groups of letters whose values coincide exactly (first measure).
    pub duplicates: Vec<Vec<usize>>,
    pub note: Option<String>,
}

pub fn image_subgroup_generators(desc: &Descriptor) -> ImageGenerators {
    let first = &desc.extreme_measures[0];
    let mut duplicates: Vec<Vec<usize>> = Vec::new();
    if first.is_exact() {
        let mut used = vec![false; desc.d];
        for i in 0..desc.d {
            if used[i] {
                continue;
            }
            let group: Vec<usize> = (i..desc.d)
                .filter(|&j| {
                    let mut x = vec![BigInt::zero(); desc.d];
                    x[i] += 1;
                    x[j] -= 1;
                    first.dot_sign(&x) == Some(Ordering::Equal)
                })
                .collect();
            for &j in &group {
                used[j] = true;
            }
            if group.len() > 1 {
                duplicates.push(group);
            }
        }
    }
    let note = (!desc.is_uniquely_ergodic()).then(|| {
        "several extreme measures: the image subgroup is the intersection of the per-measure groups, which is not computed"
            .to_string()
    });
    ImageGenerators {
        per_measure: desc.extreme_measures.clone(),
        duplicates,
        note,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoeVerdict {
    /// `M` with `|det M| = 1`, `M·1 = 1` and `{ν} = {Mᵀμ}`. `exact` is false
    /// when the measure equation was only checked on enclosures.
    Witness {
        matrix: IntegerMatrix,
        exact: bool,
    },
    /// No witness with entries in `[-bound, bound]`; not a proof that the
    /// systems are not strong orbit equivalent.
    NoWitnessWithinBound {
        bound: i64,
    },
    NotSoe {
        reason: String,
    },
}

/// `Σ_i M_ij μ_i` compared with `ν_j`: `Some(exact)` on agreement.
fn column_matches(
    m: &[Vec<i64>],
    mu: &MeasureVector,
    nu: &MeasureVector,
    j: usize,
) -> Option<bool> {
    let d = m.len();
    let col: Vec<BigInt> = (0..d).map(|i| BigInt::from(m[i][j])).collect();
    match (mu, nu) {
        (MeasureVector::Rational(a), MeasureVector::Rational(b)) => {
            let s: Rational = a
                .iter()
                .zip(&col)
                .map(|(x, k)| x * BigRational::from_integer(k.clone()))
                .sum();
            (s == b[j]).then_some(true)
        }
        (MeasureVector::Quadratic(a), MeasureVector::Quadratic(b))
            if a[0].radicand() == b[0].radicand() =>
        {
            (quad_dot(a, &col).cmp_exact(&b[j]) == Ordering::Equal).then_some(true)
        }
        (MeasureVector::Quadratic(a), MeasureVector::Rational(b)) => (quad_dot(a, &col)
            .cmp_exact(&QuadSurd::rational(b[j].clone(), a[0].radicand()))
            == Ordering::Equal)
            .then_some(true),
        (MeasureVector::Rational(a), MeasureVector::Quadratic(b)) => {
            let s: Rational = a
                .iter()
                .zip(&col)
                .map(|(x, k)| x * BigRational::from_integer(k.clone()))
                .sum();
            (QuadSurd::rational(s, b[j].radicand()).cmp_exact(&b[j]) == Ordering::Equal)
                .then_some(true)
        }
        _ => dot_interval(&col, &mu.enclosure())
            .overlaps(&nu.enclosure()[j])
            .then_some(false),
    }
}

/// Integer vectors in `[-b, b]^d` with entry sum 1, in lexicographic order.
fn stochastic_rows(d: usize, b: i64) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, d: usize, b: i64, out: &mut Vec<Vec<i64>>) {
        let used: i64 = prefix.iter().sum();
        let left = (d - prefix.len()) as i64;
        if left == 1 {
            let last = 1 - used;
            if last.abs() <= b {
                let mut r = prefix.clone();
                r.push(last);
                out.push(r);
            }
            return;
        }
        for v in -b..=b {
            // The remaining left−1 entries must reach 1 − used − v.
            let need = 1 - used - v;
            if need.abs() <= b * (left - 1) {
                prefix.push(v);
                rec(prefix, d, b, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), d, b, &mut out);
    out
}

struct Search<'a> {
    d: usize,
    bound: i64,
    rows: &'a [Vec<i64>],
    /// (μ, ν) pairs under the chosen matching, with float approximations.
    pairs: Vec<(
        &'a MeasureVector,
        &'a MeasureVector,
        Vec<f64>,
        Vec<f64>,
        f64,
    )>,
}

impl Search<'_> {
    fn feasible(&self, m: &[Vec<i64>]) -> bool {
        let i = m.len();
        for (_, _, mu, nu, tol) in &self.pairs {
            let rest: f64 = mu[i..].iter().sum();
            for j in 0..self.d {
                let s: f64 = (0..i).map(|r| m[r][j] as f64 * mu[r]).sum();
                let gap = nu[j] - s;
                if gap.abs() > self.bound as f64 * rest + tol {
                    return false;
                }
            }
        }
        true
    }

    fn leaf(&self, m: &[Vec<i64>]) -> Option<(IntegerMatrix, bool)> {
        let mut exact = true;
        for (mu, nu, ..) in &self.pairs {
            for j in 0..self.d {
                exact &= column_matches(m, mu, nu, j)?;
            }
        }
        let mat = IntegerMatrix::from_rows(m);
        mat.is_unimodular().then_some((mat, exact))
    }

    /// Last row solved from the first measure pair, then verified.
    fn last_row(&self, m: &[Vec<i64>]) -> Option<Vec<i64>> {
        let (_, _, mu, nu, tol) = &self.pairs[0];
        let i = self.d - 1;
        if mu[i] < 1e-6 {
            return None;
        }
        let mut row = Vec::with_capacity(self.d);
        for j in 0..self.d {
            let s: f64 = (0..i).map(|r| m[r][j] as f64 * mu[r]).sum();
            let x = (nu[j] - s) / mu[i];
            let k = x.round();
            if (x - k).abs() * mu[i] > tol + 1e-9 || k.abs() > self.bound as f64 {
                return None;
            }
            row.push(k as i64);
        }
        (row.iter().sum::<i64>() == 1).then_some(row)
    }

    fn dfs(&self, m: &mut Vec<Vec<i64>>) -> Option<(IntegerMatrix, bool)> {
        if m.len() == self.d - 1 {
            let row = if self.d == 1 {
                vec![1]
            } else {
                self.last_row(m)?
            };
            m.push(row);
            let r = self.leaf(m);
            m.pop();
            return r;
        }
        for row in self.rows {
            m.push(row.clone());
            if self.feasible(m) {
                if let Some(r) = self.dfs(m) {
                    m.pop();
                    return Some(r);
                }
            }
            m.pop();
        }
        None
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Unimodular `M` with entries in `[-bound, bound]`, `M·1 = 1` and
/// `{ν} = {Mᵀμ}`. The identity is returned whenever it is a witness (equal
/// measure sets); otherwise the lexicographically smallest (row-major) one.
pub fn soe_test(left: &Descriptor, right: &Descriptor, bound: i64) -> Result<SoeVerdict> {
    if left.d != right.d {
        return Ok(SoeVerdict::NotSoe {
            reason: format!("alphabets of different sizes ({} and {})", left.d, right.d),
        });
    }
    if left.extreme_measures.len() != right.extreme_measures.len() {
        return Err(invalid(
            "descriptors have different numbers of extreme measures",
        ));
    }
    if bound < 1 {
        return Err(invalid("entry bound must be at least 1"));
    }
    let d = left.d;
    let rows = stochastic_rows(d, bound);
    let mut best: Option<(IntegerMatrix, bool)> = None;
    for perm in permutations(left.extreme_measures.len()) {
        let pairs = perm
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let (mu, nu) = (&left.extreme_measures[k], &right.extreme_measures[p]);
                let tol = (mu.width() + nu.width()) * (bound as f64) * (d as f64) + 1e-9;
                (mu, nu, mu.approx(), nu.approx(), tol)
            })
            .collect();
        let search = Search {
            d,
            bound,
            rows: &rows,
            pairs,
        };
        let identity: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| (i == j) as i64).collect())
            .collect();
        if let Some((matrix, exact)) = search.leaf(&identity) {
            return Ok(SoeVerdict::Witness { matrix, exact });
        }
        let found = rows.par_iter().find_map_first(|first| {
            let mut m = vec![first.clone()];
            if d > 1 && !search.feasible(&m) {
                return None;
            }
            if d == 1 {
                return search.leaf(&m);
            }
            search.dfs(&mut m)
        });
        if let Some((mat, exact)) = found {
            let better = best
                .as_ref()
                .is_none_or(|(b, _)| mat.to_i64_rows() < b.to_i64_rows());
            if better {
                best = Some((mat, exact));
            }
        }
    }
    Ok(match best {
        Some((matrix, exact)) => SoeVerdict::Witness { matrix, exact },
        None => SoeVerdict::NoWitnessWithinBound { bound },
    })
}
