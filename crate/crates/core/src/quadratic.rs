//! Exact arithmetic in real quadratic fields `ℚ(√D)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::Field;
use crate::numeric::{fraction_string, Interval, Rational};

/// The number `a + b·√D` with rational `a`, `b` and a square-free radicand
/// `D > 1`. Values with different radicands never mix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    radicand: u64,
}

/// Square-free part `s` and cofactor `k` with `n = k²·s`.
pub fn square_free_part(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut k = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (s * m, k)
}

impl QuadSurd {
    pub fn new(a: Rational, b: Rational, radicand: u64) -> Self {
        let (s, k) = square_free_part(radicand);
        assert!(s > 1, "radicand {radicand} is a perfect square");
        QuadSurd {
            a,
            b: b * BigRational::from_integer(k.into()),
            radicand: s,
        }
    }

    pub fn rational(a: Rational, radicand: u64) -> Self {
        QuadSurd::new(a, Rational::zero(), radicand)
    }

    /// `√D` itself.
    pub fn sqrt(radicand: u64) -> Self {
        QuadSurd::new(Rational::zero(), Rational::one(), radicand)
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &QuadSurd) {
        assert_eq!(
            self.radicand, other.radicand,
            "mixing different quadratic fields"
        );
    }

    pub fn conjugate(&self) -> QuadSurd {
        QuadSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand,
        }
    }

    /// Field norm `a² − D·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.radicand.into())
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand,
        }
    }

    pub fn scale(&self, k: &Rational) -> QuadSurd {
        QuadSurd {
            a: &self.a * k,
            b: &self.b * k,
            radicand: self.radicand,
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Opposite signs: compare a² with D·b².
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let db2 = &self.b * &self.b * BigRational::from_integer(self.radicand.into());
                match a2.cmp(&db2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn cmp_exact(&self, other: &QuadSurd) -> Ordering {
        Field::sub(self, other).signum()
    }

    /// Rational enclosure of `√D` of width `10^-digits`.
    fn sqrt_enclosure(radicand: u64, digits: u32) -> Interval {
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let n = BigInt::from(radicand) * &scale * &scale;
        let lo = n.sqrt();
        let hi = if &lo * &lo == n { lo.clone() } else { &lo + 1 };
        Interval::new(
            BigRational::new(lo, scale.clone()),
            BigRational::new(hi, scale),
        )
    }

    /// Rigorous rational enclosure of the value.
    pub fn enclosure(&self, digits: u32) -> Interval {
        let root = Self::sqrt_enclosure(self.radicand, digits);
        let b_part = if self.b.is_negative() {
            Interval::new(&self.b * &root.hi, &self.b * &root.lo)
        } else {
            Interval::new(&self.b * &root.lo, &self.b * &root.hi)
        };
        Interval::new(&self.a + &b_part.lo, &self.a + &b_part.hi)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }

    /// Largest real root of the monic quadratic `x² + p·x + q`, when it is
    /// irrational and real.
    pub fn largest_root(p: &Rational, q: &Rational) -> Option<QuadSurd> {
        // x = (−p + √(p² − 4q)) / 2
        let disc = p * p - q * BigRational::from_integer(4.into());
        if !disc.is_positive() {
            return None;
        }
        // disc = n/d  ⇒  √disc = √(n·d)/d
        let n = disc.numer() * disc.denom();
        let n: u64 = n.try_into().ok()?;
        let (s, k) = square_free_part(n);
        if s == 1 {
            return None;
        }
        let half = BigRational::new(1.into(), 2.into());
        let coef = BigRational::new(BigInt::from(k), disc.denom().clone()) * &half;
        Some(QuadSurd {
            a: -p * &half,
            b: coef,
            radicand: s,
        })
    }
}

impl Field for QuadSurd {
    fn zero_like(&self) -> Self {
        QuadSurd {
            a: Rational::zero(),
            b: Rational::zero(),
            radicand: self.radicand,
        }
    }
    fn one_like(&self) -> Self {
        QuadSurd {
            a: Rational::one(),
            b: Rational::zero(),
            radicand: self.radicand,
        }
    }
    fn vanishes(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.check(o);
        QuadSurd {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            radicand: self.radicand,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.check(o);
        QuadSurd {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            radicand: self.radicand,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = BigRational::from_integer(self.radicand.into());
        QuadSurd {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            radicand: self.radicand,
        }
    }
    fn div(&self, o: &Self) -> Self {
        self.check(o);
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in a quadratic field");
        let num = self.mul(&o.conjugate());
        QuadSurd {
            a: num.a / &n,
            b: num.b / &n,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fraction_string(&self.a));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {} {}*sqrt({})",
            fraction_string(&self.a),
            sign,
            fraction_string(&self.b.abs()),
            self.radicand
        )
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn s5(a: Rational, b: Rational) -> QuadSurd {
        QuadSurd::new(a, b, 5)
    }

    #[test]
    fn square_free() {
        assert_eq!(square_free_part(20), (5, 2));
        assert_eq!(square_free_part(5), (5, 1));
        assert_eq!(square_free_part(72), (2, 6));
    }

    #[test]
    fn signs_are_exact() {
        // √5 − 2 > 0
        assert_eq!(s5(int(-2), int(1)).signum(), Ordering::Greater);
        // 2 − √5 < 0
        assert_eq!(s5(int(2), int(-1)).signum(), Ordering::Less);
        // (3 − √5)/2 − 1/2 < 0
        assert_eq!(s5(rat(1, 1), rat(-1, 2)).signum(), Ordering::Less);
        assert_eq!(s5(int(0), int(0)).signum(), Ordering::Equal);
    }

    #[test]
    fn field_ops() {
        let phi = s5(rat(1, 2), rat(1, 2));
        // φ² = φ + 1
        assert_eq!(phi.mul(&phi), phi.add(&phi.one_like()));
        let inv = phi.one_like().div(&phi);
        assert_eq!(inv, s5(rat(-1, 2), rat(1, 2)));
    }

    #[test]
    fn golden_root() {
        let r = QuadSurd::largest_root(&int(-1), &int(-1)).unwrap();
        assert_eq!(r, s5(rat(1, 2), rat(1, 2)));
        assert!(QuadSurd::largest_root(&int(-2), &int(1)).is_none());
        assert!(QuadSurd::largest_root(&int(0), &int(1)).is_none());
    }

    #[test]
    fn enclosure_contains_value() {
        let x = s5(int(-2), int(1));
        let iv = x.enclosure(30);
        assert!(iv.width() <= rat(1, 1_000_000_000_000));
        assert!((x.to_f64() - 0.2360679774997897).abs() < 1e-12);
        assert!(iv.lo > rat(2360679774, 10_000_000_000));
        assert!(iv.hi < rat(2360679775, 10_000_000_000));
    }
}
