use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorial, Rational};

/// Truncated coefficient list `c_0, ..., c_M` of a regularized quantum period
/// `1 + sum_{d>=2} c_d t^d`. The truncation is explicit: index `M` is the last
/// known coefficient and nothing is implied beyond it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PeriodSequence {
    coeffs: Vec<Rational>,
}

impl PeriodSequence {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        PeriodSequence { coeffs }
    }

    pub fn from_integers<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        PeriodSequence {
            coeffs: values
                .into_iter()
                .map(|v| Rational::from_integer(v.into()))
                .collect(),
        }
    }

    /// The constant series `1` truncated to `len` terms: the period of a point.
    pub fn unit(len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        if let Some(c) = coeffs.first_mut() {
            *c = Rational::one();
        }
        PeriodSequence { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index `M` of the last stored coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn get(&self, d: usize) -> Option<&Rational> {
        self.coeffs.get(d)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// `c_0 = 1` and `c_1 = 0` whenever those indices are stored.
    pub fn follows_period_convention(&self) -> bool {
        let c0 = self.coeffs.first().is_none_or(|c| c.is_one());
        let c1 = self.coeffs.get(1).is_none_or(|c| c.is_zero());
        c0 && c1
    }

    /// The Gromov-Witten invariant `r_d = c_d / d!`.
    pub fn gromov_witten(&self, d: usize) -> Option<Rational> {
        self.coeffs
            .get(d)
            .map(|c| c / Rational::from_integer(factorial(d as u64)))
    }

    pub fn truncated(&self, len: usize) -> Self {
        PeriodSequence {
            coeffs: self.coeffs.iter().take(len).cloned().collect(),
        }
    }

    pub fn scaled(&self, by: &Rational) -> Self {
        PeriodSequence {
            coeffs: self.coeffs.iter().map(|c| c * by).collect(),
        }
    }

    /// Index of the first non-integral coefficient, if any.
    pub fn first_non_integral(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_integer())
    }
}

impl fmt::Display for PeriodSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PeriodSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodSequence{self}")
    }
}
