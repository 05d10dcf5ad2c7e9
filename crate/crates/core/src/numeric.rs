//! Rational helpers: closed intervals, parsing and decimal rendering.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Parses `"p/q"`, `"-3"`, `"0.125"` or `"1e-8"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || invalid(format!("cannot parse {s:?} as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0")
        .parse::<BigInt>()
        .map_err(|_| bad())?
        / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Exact `"p/q"` rendering (`"p"` for integers).
pub fn fraction_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with `digits` significant digits after the point,
/// truncated toward zero. For display only.
pub fn decimal_string(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (ip, fp) = scaled.div_rem(&scale);
    let mut frac = fp.to_string();
    while frac.len() < digits {
        frac.insert(0, '0');
    }
    let s = if digits == 0 {
        ip.to_string()
    } else {
        format!("{ip}.{frac}")
    };
    if neg && !(ip.is_zero() && fp.is_zero()) {
        format!("-{s}")
    } else {
        s
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// `Some(ordering)` of the whole interval against zero, `None` if it
    /// straddles zero (a degenerate `[0, 0]` gives `Equal`).
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            fraction_string(&self.lo),
            fraction_string(&self.hi)
        )
    }
}

/// `⟨x, box⟩` in interval arithmetic.
pub fn dot_interval(x: &[BigInt], b: &[Interval]) -> Interval {
    assert_eq!(x.len(), b.len());
    x.iter()
        .zip(b)
        .fold(Interval::point(Rational::zero()), |acc, (k, iv)| {
            acc.add(&iv.scale(k))
        })
}

pub fn l1_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Normalizes a non-negative integer vector to L1 norm 1.
pub fn normalize(v: &[BigInt]) -> Vec<Rational> {
    let total: BigInt = v.iter().sum();
    assert!(total.is_positive(), "cannot normalize a zero vector");
    v.iter()
        .map(|x| BigRational::new(x.clone(), total.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("1e-8").unwrap(), rat(1, 100_000_000));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-2.5e1").unwrap(), int(-25));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn renders() {
        assert_eq!(fraction_string(&rat(6, 4)), "3/2");
        assert_eq!(fraction_string(&int(-3)), "-3");
        assert_eq!(decimal_string(&rat(2, 3), 4), "0.6666");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-0.125");
        assert_eq!(decimal_string(&int(2), 0), "2");
    }

    #[test]
    fn interval_sign_and_scale() {
        let iv = Interval::new(rat(-1, 2), rat(1, 3));
        assert_eq!(iv.sign(), None);
        assert!(iv.contains_zero());
        let s = iv.scale(&BigInt::from(-3));
        assert_eq!(s, Interval::new(int(-1), rat(3, 2)));
        assert_eq!(
            Interval::new(rat(1, 9), rat(1, 2)).sign(),
            Some(Ordering::Greater)
        );
    }
}
