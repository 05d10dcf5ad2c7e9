//! Integer lattices: LLL reduction, saturated integer kernels and
//! integer-relation detection against interval enclosures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::{dot_interval, Interval, Rational};

/// Gram–Schmidt data: `mu[i][j]` for `j < i` and the squared norms `‖b*_i‖²`.
fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = basis.len();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<Rational> = basis[i]
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        let mut v = bi.clone();
        for j in 0..i {
            if norms[j] == Rational::zero() {
                continue;
            }
            let num: Rational = bi.iter().zip(&star[j]).map(|(x, y)| x * y).sum();
            let m = num / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
            mu[i][j] = m;
        }
        norms.push(v.iter().map(|x| x * x).sum());
        star.push(v);
    }
    (mu, norms)
}

/// Squared Gram–Schmidt norms `‖b*_i‖²`.
pub fn gram_schmidt_norms(basis: &[Vec<BigInt>]) -> Vec<Rational> {
    gram_schmidt(basis).1
}

fn round(x: &Rational) -> BigInt {
    let two = BigInt::from(2);
    // floor(x + 1/2)
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * two))
}

/// LLL reduction with `δ = 3/4`, in exact arithmetic. The input rows must
/// be linearly independent.
pub fn lll(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = round(&mu[k][j]);
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                for l in 0..j {
                    let t = &qr * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            (mu, norms) = gram_schmidt(basis);
            k = (k - 1).max(1);
        }
    }
}

/// Basis of `{x ∈ ℤⁿ : A·x = 0}` (saturated by construction), LLL-reduced.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    // u holds the column operations; its columns are stored as rows here.
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let col_sub =
        |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
            for row in a.iter_mut() {
                let t = q * &row[src];
                row[dst] -= t;
            }
            let s = u[src].clone();
            for (x, y) in u[dst].iter_mut().zip(&s) {
                *x -= q * y;
            }
        };
    let col_swap = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
    };
    let mut piv = 0;
    for r in 0..a.len() {
        if piv == ncols {
            break;
        }
        loop {
            let nz: Vec<usize> = (piv..ncols).filter(|&c| !a[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    col_swap(&mut a, &mut u, piv, c);
                    piv += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| a[r][c].abs()).unwrap();
            for &c in &nz {
                if c != p {
                    let q = a[r][c].div_floor(&a[r][p]);
                    col_sub(&mut a, &mut u, c, p, &q);
                }
            }
        }
    }
    let mut ker: Vec<Vec<BigInt>> = u.split_off(piv);
    lll(&mut ker);
    ker
}

fn lcm_of_denominators(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational row to a primitive integer row.
pub fn integer_row(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Outcome of an integer-relation search against enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSearch {
    /// Relations consistent with every enclosure, spanning every relation
    /// with `|x|∞ ≤ bound` when `certified`.
    pub relations: Vec<Vec<BigInt>>,
    pub certified: bool,
    /// When not certified: the shortest vector that could not be ruled out.
    pub candidate: Option<Vec<BigInt>>,
    /// Scale applied to the midpoints.
    pub scale: BigInt,
    pub bound: BigInt,
}

/// Searches integer `x` with `⟨x, μ_k⟩ = 0` for every vector `μ_k` known
/// through the boxes `boxes[k]`.
///
/// The lattice is spanned by `(e_i | round(S·mid_k,i))_k`. A relation `x`
/// with `|x|∞ ≤ B` has norm at most `√(dB² + m(dBδ)²)` there, with
/// `δ = S·w/2 + 1/2` and `w` the widest enclosure; every lattice vector
/// outside the span of the first `k` reduced vectors is at least as long
/// as the shortest later Gram–Schmidt vector.
pub fn find_relations(boxes: &[Vec<Interval>], bound: &BigInt) -> RelationSearch {
    let m = boxes.len();
    let d = boxes[0].len();
    let widest = boxes
        .iter()
        .flatten()
        .map(Interval::width)
        .max()
        .unwrap_or_else(Rational::zero);
    let scale = if widest.is_zero() {
        BigInt::one() << 256
    } else {
        // Smallest power of two ≥ 1/w.
        let inv = BigRational::one() / &widest;
        let mut s = BigInt::one();
        while BigRational::from_integer(s.clone()) < inv {
            s <<= 1;
        }
        s
    };
    let sr = BigRational::from_integer(scale.clone());
    let mut basis: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..d)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect();
            for b in boxes {
                row.push(round(&(&sr * b[i].midpoint())));
            }
            row
        })
        .collect();
    lll(&mut basis);
    let norms = gram_schmidt_norms(&basis);
    let is_relation = |x: &[BigInt]| {
        x.iter().any(|c| !c.is_zero())
            && x.iter().all(|c| c.abs() <= *bound)
            && boxes.iter().all(|b| dot_interval(x, b).contains_zero())
    };
    let k = basis.iter().take_while(|b| is_relation(&b[..d])).count();
    let db = BigRational::from_integer(bound * BigInt::from(d));
    let delta =
        &sr * &widest / BigRational::from_integer(2.into()) + BigRational::new(1.into(), 2.into());
    let limit = BigRational::from_integer(BigInt::from(d) * bound * bound)
        + BigRational::from_integer(m.into()) * (&db * &delta) * (&db * &delta);
    let certified = norms[k..].iter().all(|nrm| *nrm > limit);
    let mut relations: Vec<Vec<BigInt>> = basis[..k].iter().map(|b| b[..d].to_vec()).collect();
    for r in relations.iter_mut() {
        canonical_sign(r);
    }
    RelationSearch {
        relations,
        certified,
        candidate: (!certified)
            .then(|| basis.get(k).map(|b| b[..d].to_vec()))
            .flatten(),
        scale,
        bound: bound.clone(),
    }
}

/// Makes the first non-zero entry positive.
pub fn canonical_sign(v: &mut [BigInt]) {
    if v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Whether `x` lies in the rational span of `basis`.
pub fn in_span(basis: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    use crate::matrix::rank;
    let lift = |v: &Vec<BigInt>| {
        v.iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect::<Vec<_>>()
    };
    let mut rows: Vec<Vec<Rational>> = basis.iter().map(lift).collect();
    let one = Rational::one();
    let r0 = rank(&rows, x.len(), &one);
    rows.push(lift(&x.to_vec()));
    rank(&rows, x.len(), &one) == r0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_example_rows() {
        let k = integer_kernel(&[big(&[-4, 3, 3]), big(&[2, -1, -1])], 3);
        assert_eq!(k.len(), 1);
        let mut v = k[0].clone();
        canonical_sign(&mut v);
        assert_eq!(v, big(&[0, 1, -1]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel spanned by (2, -1), not (4, -2).
        let k = integer_kernel(&[big(&[2, 4])], 2);
        assert_eq!(k.len(), 1);
        assert!(k[0] == big(&[2, -1]) || k[0] == big(&[-2, 1]));
        assert_eq!(integer_kernel(&[big(&[1, 1, 1])], 3).len(), 2);
        assert_eq!(integer_kernel(&[big(&[0, 0])], 2).len(), 2);
    }

    #[test]
    fn lll_reduces_a_skewed_basis() {
        let mut b = vec![big(&[1, 0, 0]), big(&[1000, 1, 0]), big(&[999, 1000, 1])];
        lll(&mut b);
        let norms: Vec<BigInt> = b.iter().map(|v| dot(v, v)).collect();
        assert!(norms.iter().all(|n| *n <= BigInt::from(3)));
    }

    #[test]
    fn relation_search() {
        // (1/4, 1/4, 1/2) with tiny boxes: relations x1 = x2 and x1 + x2 = x3.
        let pts = [rat(1, 4), rat(1, 4), rat(1, 2)];
        let eps = BigRational::new(1.into(), BigInt::from(10).pow(30));
        let boxes = vec![pts
            .iter()
            .map(|p| Interval::new(p - &eps, p + &eps))
            .collect::<Vec<_>>()];
        let r = find_relations(&boxes, &BigInt::from(1000));
        assert!(r.certified);
        assert_eq!(r.relations.len(), 2);
    }
}
