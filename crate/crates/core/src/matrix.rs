//! Exact integer matrices and small dense linear algebra over exact fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntegerMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| x.into()).collect(),
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntegerMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_sums(&self) -> Vec<BigInt> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Matrix product; panics on a dimension mismatch.
    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Every entry strictly positive.
    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|x| x.is_positive())
    }

    /// Zero pattern: `true` where the entry is non-zero.
    pub fn support(&self) -> Pattern {
        Pattern {
            n: self.rows,
            m: self.cols,
            bits: self.data.iter().map(|x| !x.is_zero()).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse when the matrix is unimodular (so the inverse is integral).
    pub fn unimodular_inverse(&self) -> Option<IntegerMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let rows: Vec<Vec<BigRational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = invert(&rows)?;
        let big = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        Some(IntegerMatrix::from_big_rows(big))
    }

    /// Coefficients `[c_0, …, c_{n-1}, 1]` of `det(xI − M)`.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        // Faddeev–LeVerrier; every intermediate is integral because the
        // divisions are exact.
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m_k = IntegerMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m_k);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            m_k = next;
            let am = self.mul(&m_k);
            let trace: BigInt = (0..n).map(|i| am.get(i, i)).sum();
            coeffs[n - k] = -trace / BigInt::from(k);
        }
        coeffs
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Boolean zero pattern of a non-negative matrix; products of patterns are
/// patterns of products.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    n: usize,
    m: usize,
    bits: Vec<bool>,
}

impl Pattern {
    pub fn mul(&self, other: &Pattern) -> Pattern {
        assert_eq!(self.m, other.n);
        let mut bits = vec![false; self.n * other.m];
        for r in 0..self.n {
            for k in 0..self.m {
                if self.bits[r * self.m + k] {
                    for c in 0..other.m {
                        bits[r * other.m + c] |= other.bits[k * other.m + c];
                    }
                }
            }
        }
        Pattern {
            n: self.n,
            m: other.m,
            bits,
        }
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn has_zero_row(&self) -> bool {
        (0..self.n).any(|r| self.bits[r * self.m..(r + 1) * self.m].iter().all(|&b| !b))
    }
}

/// Exact field operations used by the generic elimination routines.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, other: &Self) -> Self;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Basis of the right null space of `rows` (each of length `ncols`), one
/// vector per free column of the reduced row echelon form.
pub fn kernel<F: Field>(rows: &[Vec<F>], ncols: usize, unit: &F) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].vanishes()) else {
            continue;
        };
        a.swap(r, p);
        let inv = unit.one_like().div(&a[r][c]);
        for j in 0..ncols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].vanishes() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let v = a[i][j].sub(&f.mul(&a[r][j]));
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![unit.zero_like(); ncols];
            v[f] = unit.one_like();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = a[i][f].zero_like().sub(&a[i][f]);
            }
            v
        })
        .collect()
}

/// Rank of a matrix over a field.
pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize, unit: &F) -> usize {
    ncols - kernel(rows, ncols, unit).len()
}

/// Inverse of a square matrix over a field, `None` when singular.
pub fn invert<F: Field>(rows: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = rows.len();
    let unit = rows.first()?.first()?.one_like();
    let mut a: Vec<Vec<F>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    unit.one_like()
                } else {
                    unit.zero_like()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].vanishes())?;
        a.swap(c, p);
        let inv = unit.div(&a[c][c]);
        for j in 0..2 * n {
            a[c][j] = a[c][j].mul(&inv);
        }
        for i in 0..n {
            if i != c && !a[i][c].vanishes() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let v = a[i][j].sub(&f.mul(&a[c][j]));
                    a[i][j] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
