//! Scalar fields for potentials, overlap constants and characters.
//!
//! Every combinatorial operation in this crate only adds, subtracts and
//! compares scalars (plus division by small integers for averaging), so the
//! [`Scalar`] trait is an ordered-free abelian group with exact or tolerant
//! equality. Three carriers are provided:
//!
//! - [`Rational`]: exact arbitrary-precision rationals (the default).
//! - [`LogSum`]: exact elements of `Q + Q·log 2 + Q·log 3 + ...`, so that
//!   logarithms of positive rationals (and `log e = 1`) stay exact.
//! - `f64`: floating mode, compared with [`FLOAT_TOLERANCE`].
//!
//! [`ComplexPair`] lifts any of them to complex values stored as pairs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Absolute tolerance used by the floating scalar mode.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    /// True when equality is decided exactly.
    const EXACT: bool;

    fn zero() -> Self;

    fn from_i64(value: i64) -> Self;

    /// Equality: exact for exact carriers, absolute tolerance for floats.
    fn near(&self, other: &Self) -> bool;

    /// Multiplies by the rational `num / den`; `den` must be nonzero.
    fn scale(&self, num: i64, den: u64) -> Self;

    /// Real value as a float (real part for complex pairs).
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool {
        self.near(&Self::zero())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn near(&self, other: &Self) -> bool {
        libm::fabs(self - other) <= FLOAT_TOLERANCE
    }

    fn scale(&self, num: i64, den: u64) -> Self {
        self * (num as f64) / (den as f64)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn scale(&self, num: i64, den: u64) -> Self {
        self * Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: shift both down before dividing.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n = (q.numer() >> shift as usize).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift as usize).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("logarithm of a non-positive value {0}")]
    NonPositiveLog(String),
    #[error("value {0} is too large to factor")]
    TooLarge(String),
}

/// Exact element of the Q-vector space spanned by `1` and `log p` for primes
/// `p`. Logarithms of positive rationals factor uniquely over this basis.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LogSum {
    rational: Rational,
    logs: BTreeMap<u64, Rational>,
}

impl LogSum {
    pub fn rational(value: Rational) -> Self {
        Self { rational: value, logs: BTreeMap::new() }
    }

    pub fn integer(value: i64) -> Self {
        Self::rational(<Rational as Scalar>::from_i64(value))
    }

    /// `log q` for a positive rational `q`.
    pub fn ln(q: &Rational) -> Result<Self, ScalarError> {
        if !q.is_positive() {
            return Err(ScalarError::NonPositiveLog(alloc::format!("{q}")));
        }
        let mut out = Self::default();
        for (p, e) in factor(q.numer())? {
            out.add_log(p, Rational::from_integer(BigInt::from(e)));
        }
        for (p, e) in factor(q.denom())? {
            out.add_log(p, Rational::from_integer(BigInt::from(-e)));
        }
        Ok(out)
    }

    /// `log n` for a positive integer `n`.
    pub fn ln_int(n: u64) -> Result<Self, ScalarError> {
        Self::ln(&Rational::from_integer(BigInt::from(n)))
    }

    /// `log e`, i.e. the rational one.
    pub fn ln_e() -> Self {
        Self::integer(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Coefficients of `log p`, keyed by prime.
    pub fn log_terms(&self) -> &BTreeMap<u64, Rational> {
        &self.logs
    }

    fn add_log(&mut self, prime: u64, coefficient: Rational) {
        let entry = self.logs.entry(prime).or_insert_with(<Rational as Zero>::zero);
        *entry += coefficient;
        if Zero::is_zero(entry) {
            self.logs.remove(&prime);
        }
    }

    /// Adds `coefficient · log(prime)`. `prime` must be prime.
    pub fn with_log(mut self, prime: u64, coefficient: Rational) -> Self {
        self.add_log(prime, coefficient);
        self
    }
}

fn factor(n: &BigInt) -> Result<alloc::vec::Vec<(u64, i64)>, ScalarError> {
    let mut m = n
        .to_u64()
        .ok_or_else(|| ScalarError::TooLarge(alloc::format!("{n}")))?;
    let mut out = alloc::vec::Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

impl fmt::Debug for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !Zero::is_zero(&self.rational) || self.logs.is_empty() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (p, c) in &self.logs {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "log({p})")?;
            } else {
                write!(f, "{mag}*log({p})")?;
            }
        }
        Ok(())
    }
}

impl Add for LogSum {
    type Output = LogSum;
    fn add(mut self, rhs: LogSum) -> LogSum {
        self.rational += rhs.rational;
        for (p, c) in rhs.logs {
            self.add_log(p, c);
        }
        self
    }
}

impl Sub for LogSum {
    type Output = LogSum;
    fn sub(self, rhs: LogSum) -> LogSum {
        self + (-rhs)
    }
}

impl Neg for LogSum {
    type Output = LogSum;
    fn neg(self) -> LogSum {
        LogSum {
            rational: -self.rational,
            logs: self.logs.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Scalar for LogSum {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }

    fn from_i64(value: i64) -> Self {
        Self::integer(value)
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn scale(&self, num: i64, den: u64) -> Self {
        let k = Rational::new(BigInt::from(num), BigInt::from(den));
        let mut out = LogSum::rational(&self.rational * &k);
        for (p, c) in &self.logs {
            out.add_log(*p, c * &k);
        }
        out
    }

    fn to_f64(&self) -> f64 {
        self.logs
            .iter()
            .fold(rational_to_f64(&self.rational), |acc, (p, c)| {
                acc + rational_to_f64(c) * libm::log(*p as f64)
            })
    }
}

/// Complex scalar stored as a (real, imaginary) pair over any real carrier.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexPair<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> ComplexPair<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }
}

impl<S: Scalar> fmt::Display for ComplexPair<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

impl<S: Scalar> Add for ComplexPair<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<S: Scalar> Sub for ComplexPair<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<S: Scalar> Neg for ComplexPair<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<S: Scalar> Scalar for ComplexPair<S> {
    const EXACT: bool = S::EXACT;

    fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    fn from_i64(value: i64) -> Self {
        Self::new(S::from_i64(value), S::zero())
    }

    fn near(&self, other: &Self) -> bool {
        self.re.near(&other.re) && self.im.near(&other.im)
    }

    fn scale(&self, num: i64, den: u64) -> Self {
        Self::new(self.re.scale(num, den), self.im.scale(num, den))
    }

    fn to_f64(&self) -> f64 {
        self.re.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn log_of_composite_splits_over_primes() {
        let ten = LogSum::ln_int(10).unwrap();
        let sum = LogSum::ln_int(2).unwrap() + LogSum::ln_int(5).unwrap();
        assert_eq!(ten, sum);
        assert!((ten.to_f64() - libm::log(10.0)).abs() < 1e-12);
    }

    #[test]
    fn log_of_fraction_and_inverse_cancel() {
        let a = LogSum::ln(&q(9, 4)).unwrap();
        let b = LogSum::ln(&q(4, 9)).unwrap();
        assert!((a + b).is_zero());
    }

    #[test]
    fn log_of_one_is_zero_and_nonpositive_fails() {
        assert!(LogSum::ln_int(1).unwrap().is_zero());
        assert!(LogSum::ln(&q(-1, 2)).is_err());
        assert!(LogSum::ln(&q(0, 1)).is_err());
    }

    #[test]
    fn log_sum_display_is_readable() {
        let v = LogSum::rational(q(1, 3)).with_log(2, q(-2, 1)).with_log(3, q(1, 1));
        assert_eq!(alloc::format!("{v}"), "1/3 - 2*log(2) + log(3)");
        assert_eq!(alloc::format!("{}", LogSum::zero()), "0");
    }

    #[test]
    fn scaling_is_exact() {
        let v = LogSum::ln_int(8).unwrap().scale(1, 3);
        assert_eq!(v, LogSum::ln_int(2).unwrap());
        assert_eq!(q(3, 4).scale(-2, 3), q(-1, 2));
    }

    #[test]
    fn float_tolerance() {
        assert!(1.0f64.near(&(1.0 + 1e-13)));
        assert!(!1.0f64.near(&(1.0 + 1e-11)));
    }

    #[test]
    fn complex_pairs_compare_componentwise() {
        let a = ComplexPair::new(q(1, 2), q(1, 3));
        let b = ComplexPair::new(q(1, 2), q(0, 1));
        assert!(!a.near(&b));
        assert!((a.clone() - a).is_zero());
    }
}
