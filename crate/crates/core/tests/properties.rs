mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sadic::balance::centered_birkhoff_max;
use sadic::dimgroup::{
    cone_membership, descriptor, soe_test, Descriptor, MeasureVector, Membership, SoeVerdict,
};
use sadic::directive::IntSequence;
use sadic::families::{brun_truncated, fibonacci, tribonacci};
use sadic::free_group::{free_basis_check, BasisVerdict};
use sadic::language::build_language;
use sadic::measures::{cone_sweep, nesting_coefficients, MeasureCone};
use sadic::numeric::Rational;
use sadic::{Alphabet, DirectiveSequence, IntegerMatrix, Morphism, Word};

fn alphabet(d: usize) -> Alphabet {
    Alphabet::from_str_letters(&"abcd"[..d]).unwrap()
}

fn morphism(d: usize) -> impl Strategy<Value = Morphism> {
    prop::collection::vec(prop::collection::vec(0..d as u8, 1..5), d).prop_map(move |images| {
        Morphism::new(
            alphabet(d),
            alphabet(d),
            images.into_iter().map(Word::from_indices).collect(),
        )
        .unwrap()
    })
}

fn two_morphisms() -> impl Strategy<Value = (Morphism, Morphism)> {
    (2usize..=4).prop_flat_map(|d| (morphism(d), morphism(d)))
}

fn periodic() -> impl Strategy<Value = DirectiveSequence> {
    (2usize..=3)
        .prop_flat_map(|d| {
            (
                prop::collection::vec(morphism(d), 0..3),
                prop::collection::vec(morphism(d), 1..4),
            )
        })
        .prop_map(|(prefix, period)| {
            let a = prefix.first().unwrap_or(&period[0]).source().clone();
            DirectiveSequence::periodic(a, prefix, period).unwrap()
        })
}

fn product(ms: impl Iterator<Item = IntegerMatrix>, d: usize) -> IntegerMatrix {
    ms.fold(IntegerMatrix::identity(d), |acc, m| acc.mul(&m))
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Stallings folding of the flower graph of `words`: the words generate the
/// free group on `d` letters iff everything folds onto one vertex carrying
/// a loop for every letter.
fn generates_free_group(words: &[Word], d: usize) -> bool {
    let mut edges: Vec<(usize, u8, usize)> = Vec::new();
    let mut vertices = 1;
    for w in words {
        let s = w.as_slice();
        let mut at = 0;
        for (i, &c) in s.iter().enumerate() {
            let to = if i + 1 == s.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            edges.push((at, c, to));
            at = to;
        }
    }
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    loop {
        let mut merged = false;
        let current: Vec<(usize, u8, usize)> = edges
            .iter()
            .map(|&(u, c, v)| (find(&mut parent, u), c, find(&mut parent, v)))
            .collect();
        'scan: for (i, e) in current.iter().enumerate() {
            for f in &current[i + 1..] {
                let (x, y) = if e.0 == f.0 && e.1 == f.1 && e.2 != f.2 {
                    (e.2, f.2)
                } else if e.2 == f.2 && e.1 == f.1 && e.0 != f.0 {
                    (e.0, f.0)
                } else {
                    continue;
                };
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
                merged = true;
                break 'scan;
            }
        }
        if !merged {
            break;
        }
    }
    let roots: BTreeSet<usize> = (0..vertices).map(|v| find(&mut parent, v)).collect();
    let labels: BTreeSet<u8> = edges.iter().map(|e| e.1).collect();
    roots.len() == 1 && labels.len() == d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_is_functorial((s, t) in two_morphisms()) {
        let st = Morphism::compose(&s, &t).unwrap();
        prop_assert_eq!(st.incidence_matrix(), s.incidence_matrix().mul(&t.incidence_matrix()));
        let w = Word::from_indices(vec![0, 1, 0]);
        prop_assert_eq!(st.apply(&w).unwrap(), s.apply(&t.apply(&w).unwrap()).unwrap());
    }

    #[test]
    fn telescoping_composes(ds in periodic(), n in 1usize..4, len in 1usize..5, split in 0usize..5) {
        let big_n = n + len;
        let m = ds.telescope(n, big_n).unwrap();
        let expected = product((n..big_n).map(|k| ds.incidence(k).unwrap()), ds.d());
        prop_assert_eq!(m.incidence_matrix(), expected.clone());
        prop_assert_eq!(ds.telescope_matrix(n, big_n).unwrap(), expected);
        let k = n + 1 + split % len.max(1);
        if k < big_n {
            let parts = Morphism::compose(&ds.telescope(n, k).unwrap(), &ds.telescope(k, big_n).unwrap()).unwrap();
            prop_assert_eq!(parts, m);
        }
    }

    #[test]
    fn two_measure_recurrence(first in 3u64..8, steps in prop::collection::vec(0u64..6, 14)) {
        let mut a = vec![BigInt::from(first)];
        for s in &steps {
            let next = a.last().unwrap() * 2 + s;
            a.push(next);
        }
        let horizon = a.len();
        let ds = DirectiveSequence::two_measure(IntSequence::List(a.clone()), horizon).unwrap();
        let e = |k: usize| (0..3).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect::<Vec<_>>();
        let mut cols = vec![e(2), e(1), e(0)];
        for n in 1..=horizon {
            cols.push(ds.telescope_matrix(1, n + 1).unwrap().column(0));
        }
        let norm = |v: &[BigInt]| -> BigInt { v.iter().sum() };
        for n in 1..=horizon {
            let i = n + 2;
            let rhs: Vec<BigInt> = cols[i - 2].iter().zip(&cols[i - 3]).map(|(x, y)| &a[n - 1] * x + y).collect();
            prop_assert_eq!(&cols[i], &rhs);
            let c = BigRational::new(norm(&cols[i - 3]), norm(&cols[i]));
            prop_assert!(c <= BigRational::new(BigInt::one(), a[n - 1].clone()));
        }
    }

    #[test]
    fn brun_cones_nest(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = common::random_brun_pairs(&mut rng, 30);
        let ds = brun_truncated(3, &pairs).unwrap();
        let cones = cone_sweep(&ds, 30).unwrap();
        for w in cones.windows(2) {
            prop_assert!(w[1].diameter <= w[0].diameter);
            let coef = nesting_coefficients(&w[0].matrix, &ds.incidence(w[1].depth).unwrap());
            for (j, row) in coef.iter().enumerate() {
                prop_assert!(row.iter().all(|c| *c >= Rational::zero()));
                prop_assert_eq!(row.iter().sum::<Rational>(), Rational::one());
                // The new normalized column is the convex combination of the old ones.
                for i in 0..3 {
                    let combo: Rational = row.iter().zip(&w[0].columns).map(|(c, col)| c * &col[i]).sum();
                    prop_assert_eq!(&combo, &w[1].columns[j][i]);
                }
            }
        }
    }

    #[test]
    fn soe_is_symmetric(weights in prop::collection::vec(1i64..50, 3), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let total: i64 = weights.iter().sum();
        let mu: Vec<Rational> = weights.iter().map(|&w| BigRational::new(w.into(), total.into())).collect();
        let nu: Vec<Rational> = perm.iter().map(|&p| mu[p].clone()).collect();
        let left = Descriptor::new(3, vec![MeasureVector::Rational(mu.clone())], "left").unwrap();
        let right = Descriptor::new(3, vec![MeasureVector::Rational(nu.clone())], "right").unwrap();
        for (l, r, x, y) in [(&left, &right, &mu, &nu), (&right, &left, &nu, &mu)] {
            match soe_test(l, r, 1).unwrap() {
                SoeVerdict::Witness { matrix, exact } => {
                    prop_assert!(exact);
                    prop_assert!(matrix.is_unimodular());
                    prop_assert!(matrix.row_sums().iter().all(|s| s.is_one()));
                    // Mᵀμ = ν
                    for j in 0..3 {
                        let s: Rational = (0..3).map(|i| BigRational::from_integer(matrix.get(i, j).clone()) * &x[i]).sum();
                        prop_assert_eq!(&s, &y[j]);
                    }
                }
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }

    #[test]
    fn basis_check_agrees_with_folding(d in 2usize..=3, raw in prop::collection::vec(prop::collection::vec(0u8..3, 1..5), 3)) {
        let words: Vec<Word> = raw
            .into_iter()
            .take(d)
            .map(|w| Word::from_indices(w.into_iter().map(|c| c % d as u8).collect()))
            .collect();
        let report = free_basis_check(&words, d);
        prop_assert_ne!(report.verdict, BasisVerdict::Inconclusive);
        prop_assert_eq!(report.verdict == BasisVerdict::Basis, generates_free_group(&words, d));
    }

    #[test]
    fn positive_cone_is_closed(x in prop::collection::vec(-20i64..20, 2), y in prop::collection::vec(-20i64..20, 2)) {
        let desc = descriptor(&fibonacci(), &Default::default()).unwrap();
        let (bx, by) = (big(&x), big(&y));
        let sum: Vec<BigInt> = bx.iter().zip(&by).map(|(a, b)| a + b).collect();
        if cone_membership(&desc, &bx).unwrap() == Membership::Positive
            && cone_membership(&desc, &by).unwrap() == Membership::Positive
        {
            prop_assert_eq!(cone_membership(&desc, &sum).unwrap(), Membership::Positive);
        }
        let neg: Vec<BigInt> = bx.iter().map(|a| -a).collect();
        if cone_membership(&desc, &bx).unwrap() == Membership::Positive {
            prop_assert_eq!(cone_membership(&desc, &neg).unwrap(), Membership::NegativeOrMixed);
        }
    }
}

#[test]
fn depth_zero_cone_is_the_simplex() {
    let c = MeasureCone::from_matrix(0, IntegerMatrix::identity(3));
    assert_eq!(c.diameter, BigRational::from_integer(2.into()));
}

#[test]
fn balanced_systems_have_bounded_birkhoff_sums() {
    // Centered Birkhoff sums of a C-balanced letter stay within C.
    for (ds, bound) in [(fibonacci(), 1.0), (tribonacci(), 2.0)] {
        let lang = build_language(&ds, 20).unwrap();
        let desc = descriptor(&ds, &Default::default()).unwrap();
        let mu = desc.extreme_measures[0].enclosure();
        for a in 0..ds.d() {
            let freq = mu[a].midpoint().to_f64().unwrap();
            for t in lang.texts() {
                assert!(centered_birkhoff_max(t.as_slice(), a as u8, freq) <= bound + 1e-9);
            }
        }
    }
}
