//! A minimal field abstraction so that elimination, Taylor expansion and
//! Frobenius recurrences can run over the rationals, over prime fields, and
//! over number fields `Q[x]/(q)` with the same code.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::poly::QPoly;

/// Elements know their own field; `zero_like`/`one_like` produce constants of
/// that same field.
pub trait FieldElement: Clone + PartialEq + fmt::Debug {
    fn is_nil(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self;
    /// Image of a rational under the canonical map, if defined.
    fn embed(&self, q: &Rational) -> Option<Self>;

    fn embed_int(&self, n: i64) -> Self {
        self.embed(&Rational::from_integer(n.into()))
            .expect("integers embed in every field used here")
    }

    fn divided(&self, other: &Self) -> Self {
        self.times(&other.inverse())
    }
}

impl FieldElement for Rational {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn embed(&self, q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
}

/// Residue modulo a word-sized prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zp {
    value: u64,
    modulus: u64,
}

impl fmt::Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Zp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Zp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus));
        Zp::new(r.to_u64().expect("residue fits a word"), modulus)
    }

    /// Reduction of a rational; `None` when the prime divides the denominator.
    pub fn from_rational(q: &Rational, modulus: u64) -> Option<Self> {
        let den = Zp::from_bigint(q.denom(), modulus);
        if den.value == 0 {
            return None;
        }
        Some(Zp::from_bigint(q.numer(), modulus).times(&den.inverse()))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            exp >>= 1;
        }
        acc
    }
}

impl FieldElement for Zp {
    fn is_nil(&self) -> bool {
        self.value == 0
    }
    fn zero_like(&self) -> Self {
        Zp::new(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Zp::new(1, self.modulus)
    }
    fn plus(&self, other: &Self) -> Self {
        let s = self.value as u128 + other.value as u128;
        Zp::new((s % self.modulus as u128) as u64, self.modulus)
    }
    fn minus(&self, other: &Self) -> Self {
        let s = self.value as u128 + self.modulus as u128 - other.value as u128;
        Zp::new((s % self.modulus as u128) as u64, self.modulus)
    }
    fn times(&self, other: &Self) -> Self {
        let s = self.value as u128 * other.value as u128;
        Zp::new((s % self.modulus as u128) as u64, self.modulus)
    }
    fn negated(&self) -> Self {
        Zp::new((self.modulus - self.value) % self.modulus, self.modulus)
    }
    fn inverse(&self) -> Self {
        assert!(self.value != 0, "inverse of zero mod {}", self.modulus);
        let g = BigInt::from(self.value).extended_gcd(&BigInt::from(self.modulus));
        Zp::from_bigint(&g.x, self.modulus)
    }
    fn embed(&self, q: &Rational) -> Option<Self> {
        Zp::from_rational(q, self.modulus)
    }
}

/// Element of `Q[x]/(q)` for an irreducible `q`, stored as its reduced
/// representative of degree `< deg q`.
#[derive(Clone)]
pub struct NumberFieldElem {
    rep: QPoly,
    modulus: Arc<QPoly>,
}

impl PartialEq for NumberFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && self.modulus == other.modulus
    }
}

impl fmt::Debug for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.rep, self.modulus)
    }
}

impl NumberFieldElem {
    pub fn new(rep: QPoly, modulus: Arc<QPoly>) -> Self {
        let rep = rep.rem(&modulus);
        NumberFieldElem { rep, modulus }
    }

    /// The class of `x`, i.e. a root of the modulus.
    pub fn generator(modulus: Arc<QPoly>) -> Self {
        NumberFieldElem::new(QPoly::x(), modulus)
    }

    pub fn representative(&self) -> &QPoly {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<QPoly> {
        &self.modulus
    }

    /// Coordinates in the power basis `1, x, ..., x^(n-1)`.
    pub fn coordinates(&self) -> Vec<Rational> {
        let n = self.modulus.degree().unwrap_or(0);
        (0..n).map(|i| self.rep.coeff(i)).collect()
    }
}

impl FieldElement for NumberFieldElem {
    fn is_nil(&self) -> bool {
        self.rep.is_zero()
    }
    fn zero_like(&self) -> Self {
        NumberFieldElem {
            rep: QPoly::zero(),
            modulus: self.modulus.clone(),
        }
    }
    fn one_like(&self) -> Self {
        NumberFieldElem::new(QPoly::one(), self.modulus.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        NumberFieldElem {
            rep: &self.rep + &other.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn minus(&self, other: &Self) -> Self {
        NumberFieldElem {
            rep: &self.rep - &other.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn times(&self, other: &Self) -> Self {
        NumberFieldElem::new(&self.rep * &other.rep, self.modulus.clone())
    }
    fn negated(&self) -> Self {
        NumberFieldElem {
            rep: -&self.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn inverse(&self) -> Self {
        let inv = self
            .rep
            .inverse_mod(&self.modulus)
            .expect("nonzero element of a field quotient is invertible");
        NumberFieldElem::new(inv, self.modulus.clone())
    }
    fn embed(&self, q: &Rational) -> Option<Self> {
        Some(NumberFieldElem::new(
            QPoly::constant(q.clone()),
            self.modulus.clone(),
        ))
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = Zp::new(a, n).pow(d);
        if x.value == 1 || x.value == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x.times(&x);
            if x.value == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Symmetric representative of `a mod m` in `(-m/2, m/2]`.
pub fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if (&r * 2u32) > *m {
        r - m
    } else {
        r
    }
}

pub fn abs_big(a: &BigInt) -> BigInt {
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn zp_arithmetic() {
        let a = Zp::new(3, 7);
        assert_eq!(a.inverse().times(&a), a.one_like());
        assert_eq!(a.negated().plus(&a), a.zero_like());
        assert_eq!(Zp::from_rational(&rational(1, 2).unwrap(), 101).unwrap().value(), 51);
        assert!(Zp::from_rational(&rational(1, 3).unwrap(), 3).is_none());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(4_294_967_291));
        assert!(!is_prime_u64(4_294_967_297));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn number_field_inverse() {
        // Q(i)
        let q = Arc::new(QPoly::from_ints(&[1, 0, 1]));
        let i = NumberFieldElem::generator(q);
        let one = i.one_like();
        let z = i.plus(&one);
        assert_eq!(z.times(&z.inverse()), one);
        assert_eq!(i.times(&i), one.negated());
    }
}
