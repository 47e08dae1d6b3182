//! Numeric scalars shared by every density and moment computation.
//!
//! All engines are generic over [`Scalar`]. Two implementations exist:
//! [`Rational`] (arbitrary precision, exact) and `f64` (float mode, with
//! compensated summation).

use std::fmt;
use std::ops::{AddAssign, MulAssign, Neg};
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{Num, One, Signed, ToPrimitive, Zero};
use num::BigRational;

/// Exact rational number.
pub type Rational = BigRational;

/// Field element used by the engines.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    /// Accumulator used for long sums.
    type Sum: Accumulator<Self>;

    /// True for exact arithmetic.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Square root when it is representable, `None` otherwise.
    fn exact_sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Smallest integer `>= self`.
    fn ceil_i64(&self) -> i64;

    /// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"`.
    fn parse_str(s: &str) -> Option<Self>;

    /// Converts a JSON float literal. Exact scalars refuse non-integral floats.
    fn from_json_f64(v: f64) -> Option<Self>;

    fn powi(&self, e: u32) -> Self {
        num::traits::pow(self.clone(), e as usize)
    }

    fn sum_of<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        let mut acc = Self::Sum::default();
        for v in iter {
            acc.add(v);
        }
        acc.total()
    }
}

/// Running sum with a deterministic result for a fixed input order.
pub trait Accumulator<T>: Default {
    fn add(&mut self, v: T);
    fn total(self) -> T;
}

/// Plain exact accumulation.
#[derive(Debug, Clone, Default)]
pub struct ExactSum(Rational);

impl Accumulator<Rational> for ExactSum {
    fn add(&mut self, v: Rational) {
        self.0 += v;
    }

    fn total(self) -> Rational {
        self.0
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl Accumulator<f64> for CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.carry
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&digits).ok()?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if neg { -value } else { value })
}

impl Scalar for Rational {
    type Sum = ExactSum;
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Rational::new(rn, rd))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ceil_i64(&self) -> i64 {
        self.ceil()
            .to_integer()
            .to_i64()
            .expect("ceiling out of i64 range")
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.contains('.') {
            return parse_decimal(s);
        }
        let r = Rational::from_str(s).ok()?;
        Some(r)
    }

    fn from_json_f64(v: f64) -> Option<Self> {
        if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 {
            Some(Self::from_i64(v as i64))
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    type Sum = CompensatedSum;
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY)
    }

    fn exact_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ceil_i64(&self) -> i64 {
        self.ceil() as i64
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            return Some(a / b);
        }
        s.parse().ok()
    }

    fn from_json_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
}

/// Falling factorial `n (n-1) ... (n-k+1)`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: usize) -> BigInt {
    if k as u64 > n {
        return BigInt::zero();
    }
    (0..k as u64).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

/// `n^{p/2}` as a scalar; `None` when `p` is odd and `n` is not a perfect square
/// in exact mode.
pub fn half_power<T: Scalar>(n: u64, p: usize) -> Option<T> {
    let base = T::from_bigint(&BigInt::from(n));
    let whole = base.powi((p / 2) as u32);
    if p.is_multiple_of(2) {
        Some(whole)
    } else {
        base.exact_sqrt().map(|r| whole * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(Rational::parse_str("3/6"), Some(q(1, 2)));
        assert_eq!(Rational::parse_str("0.25"), Some(q(1, 4)));
        assert_eq!(Rational::parse_str("-1.5"), Some(q(-3, 2)));
        assert_eq!(Rational::parse_str("7"), Some(q(7, 1)));
        assert_eq!(Rational::parse_str("x"), None);
        assert_eq!(f64::parse_str("1/4"), Some(0.25));
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(q(9, 4).exact_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).exact_sqrt(), None);
        assert_eq!(q(-1, 1).exact_sqrt(), None);
    }

    #[test]
    fn json_floats_rejected_in_exact_mode() {
        assert_eq!(Rational::from_json_f64(0.5), None);
        assert_eq!(Rational::from_json_f64(2.0), Some(q(2, 1)));
        assert_eq!(f64::from_json_f64(0.5), Some(0.5));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1.0e16, 1.0, -1.0e16];
        assert_eq!(f64::sum_of(terms), 1.0);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 4), BigInt::zero());
        assert_eq!(falling_factorial(7, 0), BigInt::one());
        assert_eq!(half_power::<Rational>(4, 3), Some(q(8, 1)));
        assert_eq!(half_power::<Rational>(2, 3), None);
    }
}
