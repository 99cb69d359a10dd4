//! Exact rational and integer helpers shared by every numeric path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Builds `num/den` in canonical form.
pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational, ArithError> {
    let den = den.into();
    if den.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(BigRational::new(num.into(), den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational, ArithError> {
    if b.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(a / b)
}

/// Canonicalizes a rational that may have been assembled from raw parts.
pub fn normalize(a: &Rational) -> Rational {
    BigRational::new(a.numer().clone(), a.denom().clone())
}

/// Non-negative gcd of a list of integers; zero for an empty list.
pub fn gcd_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Positive lcm of a list of integers; one for an empty list.
pub fn lcm_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v))
        .abs()
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn pow_int(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// `base^exp` for a machine integer base, with `0^0 = 1`.
pub fn pow_i64(base: i64, exp: u32) -> BigInt {
    pow_int(&BigInt::from(base), exp)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Row of binomial coefficients `binom(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    row.push(BigInt::one());
    for i in 0..n {
        let next = &row[i] * (n - i) / (i + 1);
        row.push(next);
    }
    row
}

/// Stirling numbers of the second kind `S(m, j)` for `j = 0..=m`.
pub fn stirling2_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=m {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 1..=n {
            let carry = if j < n { &row[j] * j } else { BigInt::zero() };
            next[j] = carry + &row[j - 1];
        }
        row = next;
    }
    row
}

pub fn is_integer(a: &Rational) -> bool {
    a.denom().is_one()
}

pub fn to_integer(a: &Rational) -> Option<BigInt> {
    is_integer(a).then(|| a.numer().clone())
}
