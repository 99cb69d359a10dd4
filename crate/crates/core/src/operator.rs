use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, Rational};
use crate::poly::QPoly;

/// One monomial `coeff * t^t_exp * D^d_exp` of an operator in `D = t d/dt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub d_exp: u32,
    pub t_exp: u32,
}

impl Term {
    pub fn new(coeff: impl Into<BigInt>, d_exp: u32, t_exp: u32) -> Self {
        Term {
            coeff: coeff.into(),
            d_exp,
            t_exp,
        }
    }

    /// `(m, n)` ordering key; lexicographic, `m` first.
    pub fn key(&self) -> (u32, u32) {
        (self.d_exp, self.t_exp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("operator has no terms")]
    Empty,
    #[error("term {index} has a zero coefficient")]
    ZeroCoefficient { index: usize },
    #[error("exponent pair [{d_exp},{t_exp}] appears more than once")]
    DuplicateExponent { d_exp: u32, t_exp: u32 },
    #[error("operator has no D-dependence (order 0)")]
    ZeroOrder,
    #[error("{coefficients} coefficients but {exponents} exponent pairs")]
    LengthMismatch {
        coefficients: usize,
        exponents: usize,
    },
}

/// Picard-Fuchs operator `L = sum_k l_k t^{n_k} D^{m_k}` with integer
/// coefficients. Term order is preserved as given; use
/// [`crate::recurrence::normalize`] for the canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DOperator {
    terms: Vec<Term>,
}

impl DOperator {
    pub fn new(terms: Vec<Term>) -> Result<Self, OperatorError> {
        if terms.is_empty() {
            return Err(OperatorError::Empty);
        }
        let mut seen = HashSet::new();
        for (index, term) in terms.iter().enumerate() {
            if term.coeff.is_zero() {
                return Err(OperatorError::ZeroCoefficient { index });
            }
            if !seen.insert(term.key()) {
                return Err(OperatorError::DuplicateExponent {
                    d_exp: term.d_exp,
                    t_exp: term.t_exp,
                });
            }
        }
        if terms.iter().all(|t| t.d_exp == 0) {
            return Err(OperatorError::ZeroOrder);
        }
        Ok(DOperator { terms })
    }

    /// Zip parallel coefficient and `[m, n]` exponent lists.
    pub fn from_parts(coeffs: &[BigInt], exponents: &[(u32, u32)]) -> Result<Self, OperatorError> {
        if coeffs.len() != exponents.len() {
            return Err(OperatorError::LengthMismatch {
                coefficients: coeffs.len(),
                exponents: exponents.len(),
            });
        }
        DOperator::new(
            coeffs
                .iter()
                .zip(exponents)
                .map(|(c, &(m, n))| Term::new(c.clone(), m, n))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn coefficients(&self) -> Vec<BigInt> {
        self.terms.iter().map(|t| t.coeff.clone()).collect()
    }

    pub fn exponents(&self) -> Vec<(u32, u32)> {
        self.terms.iter().map(Term::key).collect()
    }

    /// Order `r = max m_k`, the rank of the solution local system.
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|t| t.d_exp).max().unwrap_or(0)
    }

    pub fn max_t_exp(&self) -> u32 {
        self.terms.iter().map(|t| t.t_exp).max().unwrap_or(0)
    }

    pub fn min_t_exp(&self) -> u32 {
        self.terms.iter().map(|t| t.t_exp).min().unwrap_or(0)
    }

    /// The term with lexicographically maximal `(m, n)`.
    pub fn lead_term(&self) -> &Term {
        self.terms
            .iter()
            .max_by_key(|t| t.key())
            .expect("operators are non-empty")
    }

    /// Integer coefficients with no common factor and a positive leading term.
    pub fn is_normalized(&self) -> bool {
        gcd_all(self.terms.iter().map(|t| &t.coeff)).is_one() && self.lead_term().coeff.is_positive()
    }

    pub fn is_canonically_ordered(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].key() > w[1].key())
    }

    /// Same terms sorted by descending `(m, n)`.
    pub fn canonical_order(&self) -> DOperator {
        let mut terms = self.terms.clone();
        terms.sort_by_key(|t| std::cmp::Reverse(t.key()));
        DOperator { terms }
    }

    /// Equality as operators, ignoring term order.
    pub fn same_as(&self, other: &DOperator) -> bool {
        self.canonical_order() == other.canonical_order()
    }

    /// `L = sum_n t^n Q_n(D)`; returns `n -> Q_n` as polynomials in `D`.
    pub fn theta_parts(&self) -> BTreeMap<u32, QPoly> {
        let mut parts: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
        for t in &self.terms {
            let entry = parts.entry(t.t_exp).or_default();
            let m = t.d_exp as usize;
            if entry.len() <= m {
                entry.resize(m + 1, Rational::zero());
            }
            entry[m] += Rational::from_integer(t.coeff.clone());
        }
        parts.into_iter().map(|(n, c)| (n, QPoly::new(c))).collect()
    }

    /// `(coefficients, exponents)` rendered as `[l,...]` and `[[m,n],...]`.
    pub fn render_lists(&self) -> (String, String) {
        let coeffs: Vec<String> = self.terms.iter().map(|t| t.coeff.to_string()).collect();
        let exps: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("[{},{}]", t.d_exp, t.t_exp))
            .collect();
        (
            format!("[{}]", coeffs.join(",")),
            format!("[{}]", exps.join(",")),
        )
    }
}

impl fmt::Display for DOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            let neg = term.coeff.is_negative();
            let mag = term.coeff.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (term.t_exp == 0 && term.d_exp == 0) {
                factors.push(mag.to_string());
            }
            match term.t_exp {
                0 => {}
                1 => factors.push("t".into()),
                n => factors.push(format!("t^{n}")),
            }
            match term.d_exp {
                0 => {}
                1 => factors.push("D".into()),
                m => factors.push(format!("D^{m}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DOperator({self})")
    }
}

#[cfg(test)]
pub(crate) fn p1_operator() -> DOperator {
    DOperator::new(vec![Term::new(4, 1, 2), Term::new(-1, 1, 0), Term::new(4, 0, 2)]).unwrap()
}
