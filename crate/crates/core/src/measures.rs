//! Letter-measure simplex through nested cones of normalized columns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::directive::{certify, DirectiveSequence};
use crate::error::{invalid, precondition, Error, Result};
use crate::matrix::{kernel, Field, IntegerMatrix};
use crate::numeric::{l1_distance, normalize, Interval, Rational};
use crate::quadratic::QuadSurd;

/// Normalized columns of `M_τ[1,n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureCone {
    pub depth: usize,
    pub matrix: IntegerMatrix,
    pub columns: Vec<Vec<Rational>>,
    pub diameter: Rational,
}

impl MeasureCone {
    pub fn from_matrix(depth: usize, matrix: IntegerMatrix) -> Self {
        let columns: Vec<Vec<Rational>> = (0..matrix.cols())
            .map(|c| normalize(&matrix.column(c)))
            .collect();
        let diameter = diameter(&columns);
        MeasureCone {
            depth,
            matrix,
            columns,
            diameter,
        }
    }

    /// Per-coordinate min/max of the columns: contains every letter-measure vector.
    pub fn enclosure(&self) -> Vec<Interval> {
        box_of(self.columns.iter())
    }
}

pub(crate) fn box_of<'a>(mut cols: impl Iterator<Item = &'a Vec<Rational>>) -> Vec<Interval> {
    let first = cols.next().expect("at least one column");
    let mut out: Vec<Interval> = first.iter().cloned().map(Interval::point).collect();
    for c in cols {
        for (iv, x) in out.iter_mut().zip(c) {
            *iv = iv.hull(&Interval::point(x.clone()));
        }
    }
    out
}

fn diameter(cols: &[Vec<Rational>]) -> Rational {
    let mut best = Rational::zero();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let dist = l1_distance(&cols[i], &cols[j]);
            if dist > best {
                best = dist;
            }
        }
    }
    best
}

fn require_primitive_unimodular(ds: &DirectiveSequence) -> Result<()> {
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() {
        return Err(precondition(format!(
            "sequence is not certified primitive: {:?}",
            cert.primitive
        )));
    }
    if !cert.unimodular {
        return Err(precondition(format!(
            "level {} is not unimodular",
            cert.non_unimodular_level.unwrap_or(0)
        )));
    }
    Ok(())
}

/// The cone at depth `n` (the unit simplex for `n = 0`).
pub fn cone_at(ds: &DirectiveSequence, n: usize) -> Result<MeasureCone> {
    require_primitive_unimodular(ds)?;
    Ok(MeasureCone::from_matrix(n, ds.telescope_matrix(1, n + 1)?))
}

/// Cones at depths `0..=max_depth`, each built from the previous one.
pub fn cone_sweep(ds: &DirectiveSequence, max_depth: usize) -> Result<Vec<MeasureCone>> {
    require_primitive_unimodular(ds)?;
    let mut out = Vec::with_capacity(max_depth + 1);
    let mut m = IntegerMatrix::identity(ds.d());
    out.push(MeasureCone::from_matrix(0, m.clone()));
    for n in 1..=max_depth {
        m = m.mul(&ds.incidence(n)?);
        out.push(MeasureCone::from_matrix(n, m.clone()));
    }
    Ok(out)
}

/// Coefficients expressing each column of the next cone as a convex
/// combination of the columns of `prev`: entry `[j][k]` is
/// `‖C_k‖·m_kj / ‖C'_j‖` where `C' = C·step`.
pub fn nesting_coefficients(prev: &IntegerMatrix, step: &IntegerMatrix) -> Vec<Vec<Rational>> {
    let next = prev.mul(step);
    let prev_norms = prev.column_sums();
    let next_norms = next.column_sums();
    (0..step.cols())
        .map(|j| {
            (0..step.rows())
                .map(|k| BigRational::new(&prev_norms[k] * step.get(k, j), next_norms[j].clone()))
                .collect()
        })
        .collect()
}

/// One group of columns that stayed together in the last probed depths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    /// Column indices at the final depth.
    pub columns: Vec<usize>,
    pub enclosure: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// The cone diameter fell below `eps` at `depth`.
    Unique {
        depth: usize,
        enclosure: Vec<Interval>,
    },
    /// Separated clusters persisted over the last quarter of depths. The
    /// clusters are limit points of the cones; that they are exactly the
    /// ergodic letter vectors is not certified.
    Multiple {
        clusters: Vec<Cluster>,
        from_depth: usize,
        to_depth: usize,
        min_gap: Rational,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub d: usize,
    pub max_depth: usize,
    pub eps: Rational,
    /// Diameter at each depth `0..=max_depth` that was computed.
    pub diameters: Vec<Rational>,
    pub verdict: ProbeVerdict,
}

/// Single-linkage clusters of `cols` at threshold `link`; returns the
/// clusters (sorted) and the smallest distance between two clusters.
pub fn single_linkage(
    cols: &[Vec<Rational>],
    link: &Rational,
) -> (Vec<Vec<usize>>, Option<Rational>) {
    let n = cols.len();
    let mut label: Vec<usize> = (0..n).collect();
    let dist: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| l1_distance(&cols[i], &cols[j])).collect())
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] <= *link && label[j] > label[i] {
                    label[j] = label[i];
                    changed = true;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for l in {
        let mut ls = label.clone();
        ls.sort_unstable();
        ls.dedup();
        ls
    } {
        groups.push((0..n).filter(|&i| label[i] == l).collect());
    }
    let mut gap: Option<Rational> = None;
    for i in 0..n {
        for j in 0..n {
            if label[i] != label[j] && gap.as_ref().is_none_or(|g| dist[i][j] < *g) {
                gap = Some(dist[i][j].clone());
            }
        }
    }
    (groups, gap)
}

/// Decides between one and several limit points of the cones.
pub fn ergodicity_probe(
    ds: &DirectiveSequence,
    max_depth: usize,
    eps: &Rational,
) -> Result<ProbeReport> {
    if max_depth < 3 {
        return Err(invalid("ergodicity probe needs max_depth ≥ 3"));
    }
    if !eps.is_positive() {
        return Err(invalid("eps must be positive"));
    }
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() || !cert.unimodular {
        return Err(precondition(
            "ergodicity probe needs a primitive unimodular sequence",
        ));
    }
    if cert.left_proper_block.is_none() {
        return Err(precondition(
            "ergodicity probe needs a (blockwise) left proper sequence",
        ));
    }
    let max_depth = ds.horizon().map_or(max_depth, |h| max_depth.min(h));
    let d = ds.d();
    let tail_start = max_depth - max_depth / 4;
    let two = BigRational::from_integer(2.into());
    let link = eps * &two;
    let sep = eps * BigRational::from_integer(4.into());
    let mut m = IntegerMatrix::identity(d);
    let mut diameters = vec![diameter(&MeasureCone::from_matrix(0, m.clone()).columns)];
    let mut tail: Option<(usize, Rational)> = None;
    let mut tail_broken = false;
    let mut last_groups = Vec::new();
    let mut last_cols = Vec::new();
    for n in 1..=max_depth {
        m = m.mul(&ds.incidence(n)?);
        let cone = MeasureCone::from_matrix(n, m.clone());
        diameters.push(cone.diameter.clone());
        if cone.diameter < *eps {
            let enclosure = cone.enclosure();
            return Ok(ProbeReport {
                d,
                max_depth,
                eps: eps.clone(),
                diameters,
                verdict: ProbeVerdict::Unique {
                    depth: n,
                    enclosure,
                },
            });
        }
        if n >= tail_start && !tail_broken {
            let (groups, gap) = single_linkage(&cone.columns, &link);
            let ok = groups.len() >= 2
                && gap.as_ref().is_some_and(|g| *g > sep)
                && (last_groups.is_empty() || groups.len() == last_groups.len());
            if ok {
                let g = gap.unwrap();
                tail = Some(match tail {
                    None => (n, g),
                    Some((s, best)) => (s, if g < best { g } else { best }),
                });
                last_groups = groups;
                last_cols = cone.columns.clone();
            } else {
                tail_broken = true;
            }
        }
    }
    let verdict = match tail {
        Some((from, min_gap)) if !tail_broken => {
            if last_groups.len() > d - 1 {
                ProbeVerdict::Inconclusive {
                    reason: format!(
                        "{} separated clusters exceed the bound of {} ergodic measures",
                        last_groups.len(),
                        d - 1
                    ),
                }
            } else {
                let clusters = last_groups
                    .into_iter()
                    .map(|g| Cluster {
                        enclosure: box_of(g.iter().map(|&i| &last_cols[i])),
                        columns: g,
                    })
                    .collect();
                ProbeVerdict::Multiple {
                    clusters,
                    from_depth: from,
                    to_depth: max_depth,
                    min_gap,
                }
            }
        }
        _ => ProbeVerdict::Inconclusive {
            reason: format!(
                "diameter did not fall below eps and no persistent separation by depth {max_depth}"
            ),
        },
    };
    Ok(ProbeReport {
        d,
        max_depth,
        eps: eps.clone(),
        diameters,
        verdict,
    })
}

/// Per-letter enclosure of the unique letter-measure vector.
pub fn letter_measure_enclosure(
    ds: &DirectiveSequence,
    max_depth: usize,
    eps: &Rational,
) -> Result<Vec<Interval>> {
    let report = ergodicity_probe(ds, max_depth, eps)?;
    match report.verdict {
        ProbeVerdict::Unique { enclosure, .. } => Ok(enclosure),
        other => Err(precondition(format!(
            "letter measure is not certified unique: {other:?}"
        ))),
    }
}

/// Letter-measure vector known exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactMeasure {
    Rational(Vec<Rational>),
    Quadratic(Vec<QuadSurd>),
}

impl ExactMeasure {
    /// Rigorous rational enclosure of each coordinate.
    pub fn enclosure(&self, digits: u32) -> Vec<Interval> {
        match self {
            ExactMeasure::Rational(v) => v.iter().cloned().map(Interval::point).collect(),
            ExactMeasure::Quadratic(v) => v.iter().map(|x| x.enclosure(digits)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ExactMeasure::Rational(v) => v.len(),
            ExactMeasure::Quadratic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let small: u64 = (&n)
        .try_into()
        .ok()
        .filter(|&v: &u64| v <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= small {
        if small % k == 0 {
            out.push(BigInt::from(k));
            if k * k != small {
                out.push(BigInt::from(small / k));
            }
        }
        k += 1;
    }
    Some(out)
}

/// Synthetic division of a monic integer polynomial `[c0, …, 1]` by `x − r`.
fn deflate(p: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + carry * r;
        q[k] = carry.clone();
    }
    q
}

fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Positive eigenvector of `m` for the eigenvalue `lambda`, normalized to
/// sum 1, when that eigenspace is a line spanned by a positive vector.
fn positive_eigenvector<F: Field>(
    m: &IntegerMatrix,
    lambda: &F,
    lift: impl Fn(&BigInt) -> F,
    positive: impl Fn(&F) -> bool,
) -> Option<Vec<F>> {
    let n = m.rows();
    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = lift(m.get(i, j));
                    if i == j {
                        e.sub(lambda)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let ker = kernel(&rows, n, lambda);
    if ker.len() != 1 {
        return None;
    }
    let v = &ker[0];
    let sum = v.iter().skip(1).fold(v[0].clone(), |acc, x| acc.add(x));
    if sum.vanishes() {
        return None;
    }
    let v: Vec<F> = v.iter().map(|x| x.div(&sum)).collect();
    v.iter().all(&positive).then_some(v)
}

/// Exact letter-measure vector of an eventually periodic primitive
/// sequence, when the Perron root of the period product is rational or
/// quadratic. `None` when it has higher degree.
pub fn exact_letter_measure(ds: &DirectiveSequence) -> Result<Option<ExactMeasure>> {
    let (prefix, period) = ds
        .periodic_parts()
        .ok_or_else(|| invalid("exact measures need an eventually periodic sequence"))?;
    let cert = certify(ds, 1)?;
    if !cert.primitive.is_primitive() {
        return Err(precondition("exact measures need a primitive sequence"));
    }
    let p = prefix.len();
    let head = ds.telescope_matrix(1, p + 1)?;
    let body = ds.telescope_matrix(p + 1, p + period.len() + 1)?;
    let mut poly = body.characteristic_polynomial();
    let mut rational_roots = Vec::new();
    loop {
        if poly.len() <= 1 {
            break;
        }
        let c0 = poly[0].clone();
        let candidates = if c0.is_zero() {
            vec![BigInt::zero()]
        } else {
            match divisors(&c0) {
                Some(ds) => ds.into_iter().flat_map(|x| [x.clone(), -x]).collect(),
                None => return Ok(None),
            }
        };
        match candidates.into_iter().find(|r| eval(&poly, r).is_zero()) {
            Some(r) => {
                poly = deflate(&poly, &r);
                rational_roots.push(r);
            }
            None => break,
        }
    }
    rational_roots.sort();
    rational_roots.dedup();
    let finish_rational = |v: Vec<Rational>| -> ExactMeasure {
        let mu: Vec<Rational> = (0..head.rows())
            .map(|i| {
                (0..head.cols())
                    .map(|j| BigRational::from_integer(head.get(i, j).clone()) * &v[j])
                    .sum()
            })
            .collect();
        let s: Rational = mu.iter().sum();
        ExactMeasure::Rational(mu.into_iter().map(|x| x / &s).collect())
    };
    // Quadratic remainder: its larger root may be the Perron root.
    if poly.len() == 3 {
        let pq = (
            BigRational::from_integer(poly[1].clone()),
            BigRational::from_integer(poly[0].clone()),
        );
        if let Some(root) = QuadSurd::largest_root(&pq.0, &pq.1) {
            let radicand = root.radicand();
            let lift =
                |x: &BigInt| QuadSurd::rational(BigRational::from_integer(x.clone()), radicand);
            if let Some(v) = positive_eigenvector(&body, &root, lift, |x| x.signum().is_gt()) {
                let mut mu: Vec<QuadSurd> = (0..head.rows())
                    .map(|i| {
                        (0..head.cols()).fold(root.zero_like(), |acc, j| {
                            acc.add(&lift(head.get(i, j)).mul(&v[j]))
                        })
                    })
                    .collect();
                let s = mu.iter().skip(1).fold(mu[0].clone(), |acc, x| acc.add(x));
                mu = mu.iter().map(|x| x.div(&s)).collect();
                return Ok(Some(ExactMeasure::Quadratic(mu)));
            }
        }
    }
    for r in rational_roots.iter().rev() {
        let lambda = BigRational::from_integer(r.clone());
        if let Some(v) = positive_eigenvector(
            &body,
            &lambda,
            |x| BigRational::from_integer(x.clone()),
            |x| x.is_positive(),
        ) {
            return Ok(Some(finish_rational(v)));
        }
    }
    if poly.len() <= 1 {
        return Err(Error::Inconclusive(
            "no positive eigenvector for a rational root".into(),
        ));
    }
    Ok(None)
}

/// `‖C_{n−3}‖ / ‖C_n‖` style ratio of column norms, exactly.
pub fn norm_ratio(num: &[BigInt], den: &[BigInt]) -> Rational {
    let a: BigInt = num.iter().sum();
    let b: BigInt = den.iter().sum();
    let g = a.gcd(&b);
    BigRational::new(a / &g, b / g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::IntSequence;
    use crate::numeric::{int, rat};
    use crate::words::{Alphabet, Morphism};

    fn constant(letters: &str, images: &[&str]) -> DirectiveSequence {
        let a = Alphabet::from_str_letters(letters).unwrap();
        DirectiveSequence::constant(Morphism::endo(&a, images).unwrap()).unwrap()
    }

    #[test]
    fn depth_zero_is_the_simplex() {
        let c = cone_at(&constant("ab", &["ab", "a"]), 0).unwrap();
        assert_eq!(c.columns, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert_eq!(c.diameter, int(2));
    }

    #[test]
    fn fibonacci_cone_contracts() {
        let c = cone_at(&constant("ab", &["ab", "a"]), 10).unwrap();
        // columns (F12, F11)/F13 and (F11, F10)/F12
        assert_eq!(c.columns[0], vec![rat(89, 144), rat(55, 144)]);
        assert!(c.diameter < rat(2, 100));
        let phi_inv = QuadSurd::new(rat(-1, 2), rat(1, 2), 5);
        for col in &c.columns {
            let diff = phi_inv.sub(&QuadSurd::rational(col[0].clone(), 5));
            assert!(diff.enclosure(30).hi.abs() < rat(1, 100));
        }
    }

    #[test]
    fn nesting_reconstructs_columns() {
        let ds = constant("abc", &["ab", "ac", "a"]);
        let prev = ds.telescope_matrix(1, 4).unwrap();
        let step = ds.incidence(4).unwrap();
        let coef = nesting_coefficients(&prev, &step);
        let prev_cone = MeasureCone::from_matrix(3, prev.clone());
        let next_cone = MeasureCone::from_matrix(4, prev.mul(&step));
        for (j, row) in coef.iter().enumerate() {
            assert!(row.iter().all(|c| !c.is_negative()));
            assert_eq!(row.iter().sum::<Rational>(), int(1));
            for i in 0..3 {
                let x: Rational = (0..3).map(|k| &row[k] * &prev_cone.columns[k][i]).sum();
                assert_eq!(x, next_cone.columns[j][i]);
            }
        }
    }

    #[test]
    fn probes() {
        let trib = constant("abc", &["ab", "ac", "a"]);
        let r = ergodicity_probe(&trib, 200, &rat(1, 1_000_000)).unwrap();
        assert!(
            matches!(r.verdict, ProbeVerdict::Unique { .. }),
            "{:?}",
            r.verdict
        );
        let two = DirectiveSequence::two_measure(IntSequence::Geometric { base: 2, shift: 1 }, 40)
            .unwrap();
        let r = ergodicity_probe(&two, 40, &rat(1, 1000)).unwrap();
        match r.verdict {
            ProbeVerdict::Multiple {
                clusters, min_gap, ..
            } => {
                assert_eq!(clusters.len(), 2);
                assert!(min_gap >= int(1));
            }
            other => panic!("{other:?}"),
        }
        assert!(ergodicity_probe(&trib, 2, &rat(1, 10)).is_err());
    }

    #[test]
    fn exact_measures() {
        let fib = constant("ab", &["ab", "a"]);
        match exact_letter_measure(&fib).unwrap().unwrap() {
            ExactMeasure::Quadratic(v) => {
                assert_eq!(v[0], QuadSurd::new(rat(-1, 2), rat(1, 2), 5));
                assert_eq!(v[1], QuadSurd::new(rat(3, 2), rat(-1, 2), 5));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            exact_letter_measure(&constant("abc", &["ab", "ac", "a"])).unwrap(),
            None
        );
        let tmc = constant("abcd", &["bb", "bd", "ca", "cb"]);
        assert_eq!(
            exact_letter_measure(&tmc).unwrap(),
            Some(ExactMeasure::Rational(vec![
                rat(1, 9),
                rat(4, 9),
                rat(2, 9),
                rat(2, 9)
            ]))
        );
        let tm = constant("ab", &["ab", "ba"]);
        assert_eq!(
            exact_letter_measure(&tm).unwrap(),
            Some(ExactMeasure::Rational(vec![rat(1, 2); 2]))
        );
    }
}
