//! Coefficient recurrences induced by an operator in `D = t d/dt`.
//!
//! Applying `t^n D^m` to `sum c_d t^d` and reading off `t^e` gives
//! `sum_k l_k (e - n_k)^{m_k} c_{e - n_k} = 0`, with `c_j = 0` for `j < 0` and
//! `0^0 = 1`. The weight attached to `c_e` itself is `chi(e)`, where
//! `chi(x) = sum_{n_k = 0} l_k x^{m_k}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial_row, gcd_all, lcm_all, pow_i64, Rational};
use crate::operator::{DOperator, OperatorError, Term};
use crate::poly::QPoly;
use crate::sequence::PeriodSequence;

/// `(index, weight)` pairs of the relation at `t^e`, ascending by index.
/// Indices whose terms cancel keep a zero weight.
pub fn recurrence_relation(op: &DOperator, e: u64) -> Vec<(usize, Rational)> {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for term in op.terms() {
        let n = term.t_exp as u64;
        if n > e {
            continue;
        }
        let idx = e - n;
        let w = &term.coeff * pow_i64(idx as i64, term.d_exp);
        *acc.entry(idx as usize).or_insert_with(BigInt::zero) += w;
    }
    acc.into_iter()
        .map(|(i, w)| (i, Rational::from_integer(w)))
        .collect()
}

/// `chi(x) = sum_{n_k = 0} l_k x^{m_k}`; the indicial polynomial at `t = 0`
/// when some term has `n_k = 0`.
pub fn leading_weight_polynomial(op: &DOperator) -> QPoly {
    op.theta_parts().remove(&0).unwrap_or_else(QPoly::zero)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpansionError {
    #[error("no seed coefficients supplied")]
    NoSeeds,
    #[error("requested expansion to index {count} but seeds already reach index {seeded}")]
    NothingToCompute { count: usize, seeded: usize },
    #[error("relation at index {e} has zero leading weight and is violated by the earlier coefficients")]
    Obstructed { e: usize },
    #[error("relation at index {e} has zero leading weight; c_{e} must be supplied as a seed")]
    Underdetermined { e: usize },
}

/// Extend `seeds = c_0..c_s` to `c_0..c_count` by solving the recurrence.
pub fn expand(
    op: &DOperator,
    seeds: &PeriodSequence,
    count: usize,
) -> Result<PeriodSequence, ExpansionError> {
    let seeded = seeds.max_index().ok_or(ExpansionError::NoSeeds)?;
    if count <= seeded {
        return Err(ExpansionError::NothingToCompute { count, seeded });
    }
    let mut coeffs = seeds.coeffs().to_vec();
    coeffs.reserve(count - seeded);
    for e in seeded + 1..=count {
        let mut lead = Rational::zero();
        let mut rest = Rational::zero();
        for (idx, w) in recurrence_relation(op, e as u64) {
            if idx == e {
                lead = w;
            } else {
                rest += w * &coeffs[idx];
            }
        }
        if lead.is_zero() {
            return Err(if rest.is_zero() {
                ExpansionError::Underdetermined { e }
            } else {
                ExpansionError::Obstructed { e }
            });
        }
        coeffs.push(-rest / lead);
    }
    Ok(PeriodSequence::new(coeffs))
}

/// Expansion from the standard seeds `c_0 = 1`, `c_1 = 0`.
pub fn expand_period(op: &DOperator, count: usize) -> Result<PeriodSequence, ExpansionError> {
    expand(op, &PeriodSequence::from_integers([1, 0]), count)
}

/// Outcome of checking `L G = 0` on a truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilation {
    /// Largest `e` such that every relation `0..=e` could be checked.
    pub verified_range: usize,
    /// Violated relations as `(e, residual)`.
    pub residuals: Vec<(usize, Rational)>,
}

impl Annihilation {
    pub fn holds(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Check every relation whose indices lie inside the truncation. A sequence
/// stopping at `c_0` is read with the period convention `c_1 = 0`.
pub fn annihilates(op: &DOperator, seq: &PeriodSequence) -> Annihilation {
    let mut coeffs = seq.coeffs().to_vec();
    if coeffs.len() == 1 {
        coeffs.push(Rational::zero());
    }
    let Some(max) = coeffs.len().checked_sub(1) else {
        return Annihilation {
            verified_range: 0,
            residuals: Vec::new(),
        };
    };
    let residuals = (0..=max)
        .filter_map(|e| {
            let value: Rational = recurrence_relation(op, e as u64)
                .into_iter()
                .map(|(idx, w)| w * &coeffs[idx])
                .sum();
            (!value.is_zero()).then_some((e, value))
        })
        .collect();
    Annihilation {
        verified_range: max,
        residuals,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("operator has no nonzero terms")]
    Empty,
    #[error(transparent)]
    Invalid(#[from] OperatorError),
}

/// Normalized form of an operator with rational coefficients: integer
/// coefficients without common factor, positive coefficient on the
/// lexicographically maximal `(m, n)`, terms sorted by descending `(m, n)`.
/// Repeated pairs are summed and vanishing terms dropped.
pub fn normalize_rational(terms: &[(Rational, u32, u32)]) -> Result<DOperator, NormalizeError> {
    let mut merged: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for (c, m, n) in terms {
        *merged.entry((*m, *n)).or_insert_with(Rational::zero) += c;
    }
    merged.retain(|_, c| !c.is_zero());
    if merged.is_empty() {
        return Err(NormalizeError::Empty);
    }
    let den = lcm_all(merged.values().map(|c| c.denom()));
    let scaled: Vec<((u32, u32), BigInt)> = merged
        .iter()
        .rev()
        .map(|(k, c)| (*k, (c * Rational::from_integer(den.clone())).to_integer()))
        .collect();
    let mut g = gcd_all(scaled.iter().map(|(_, c)| c));
    // first entry is the lexicographic maximum
    if scaled[0].1.is_negative() {
        g = -g;
    }
    let out = scaled
        .into_iter()
        .map(|((m, n), c)| Term::new(c / &g, m, n))
        .collect();
    Ok(DOperator::new(out)?)
}

pub fn normalize(op: &DOperator) -> DOperator {
    let terms: Vec<(Rational, u32, u32)> = op
        .terms()
        .iter()
        .map(|t| (Rational::from_integer(t.coeff.clone()), t.d_exp, t.t_exp))
        .collect();
    normalize_rational(&terms).expect("a valid operator normalizes")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("requested index {count} exceeds the factors' truncations ({left} and {right})")]
    CountTooLarge {
        count: usize,
        left: usize,
        right: usize,
    },
}

/// Period of a product: `c_d = sum_{i+j=d} binom(d, i) a_i b_j`, for
/// `d = 0..=count`.
pub fn product_period(
    a: &PeriodSequence,
    b: &PeriodSequence,
    count: usize,
) -> Result<PeriodSequence, ProductError> {
    let left = a.max_index();
    let right = b.max_index();
    match (left, right) {
        (Some(l), Some(r)) if count <= l && count <= r => {}
        _ => {
            return Err(ProductError::CountTooLarge {
                count,
                left: left.unwrap_or(0),
                right: right.unwrap_or(0),
            })
        }
    }
    let (ac, bc) = (a.coeffs(), b.coeffs());
    let coeffs = (0..=count)
        .map(|d| {
            binomial_row(d)
                .into_iter()
                .enumerate()
                .map(|(i, binom)| Rational::from_integer(binom) * &ac[i] * &bc[d - i])
                .sum()
        })
        .collect();
    Ok(PeriodSequence::new(coeffs))
}

/// True when the sequence satisfies `c_0 = 1` (used for quick sanity checks
/// on products).
pub fn has_unit_constant_term(seq: &PeriodSequence) -> bool {
    seq.get(0).is_some_and(|c| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial, int, rational};
    use crate::operator::p1_operator;
    use proptest::prelude::*;

    fn central_binomial_interleaved(count: usize) -> PeriodSequence {
        PeriodSequence::from_integers((0..=count).map(|d| {
            if d % 2 == 0 {
                binomial(d as u64, d as u64 / 2)
            } else {
                BigInt::zero()
            }
        }))
    }

    #[test]
    fn p1_relation_at_two() {
        let rel = recurrence_relation(&p1_operator(), 2);
        assert_eq!(rel, vec![(0, int(4)), (2, int(-2))]);
    }

    #[test]
    fn p1_relation_at_zero_is_empty_constraint() {
        let rel = recurrence_relation(&p1_operator(), 0);
        assert_eq!(rel, vec![(0, int(0))]);
    }

    #[test]
    fn p1_relation_at_six() {
        let rel = recurrence_relation(&p1_operator(), 6);
        assert_eq!(rel, vec![(4, int(20)), (6, int(-6))]);
    }

    #[test]
    fn p1_expansion() {
        let s = expand_period(&p1_operator(), 8).unwrap();
        assert_eq!(s, PeriodSequence::from_integers([1, 0, 2, 0, 6, 0, 20, 0, 70]));
        assert_eq!(s, central_binomial_interleaved(8));
    }

    #[test]
    fn expansion_needs_work() {
        assert_eq!(
            expand_period(&p1_operator(), 1),
            Err(ExpansionError::NothingToCompute { count: 1, seeded: 1 })
        );
        assert_eq!(
            expand(&p1_operator(), &PeriodSequence::default(), 4),
            Err(ExpansionError::NoSeeds)
        );
    }

    #[test]
    fn expansion_is_linear_in_seed() {
        let s = expand(&p1_operator(), &PeriodSequence::from_integers([5, 0]), 4).unwrap();
        assert_eq!(s, PeriodSequence::from_integers([5, 0, 10, 0, 30]));
        let closed = central_binomial_interleaved(4).scaled(&int(5));
        assert_eq!(s, closed);
    }

    #[test]
    fn obstructed_and_underdetermined() {
        // D - 2: chi(e) = e - 2 vanishes at e = 2
        let op = DOperator::new(vec![Term::new(1, 1, 0), Term::new(-2, 0, 0)]).unwrap();
        // c_e = 0 for e = 1, then at e = 2 the relation is 0 * c_2 = 0
        assert_eq!(
            expand(&op, &PeriodSequence::from_integers([0]), 3),
            Err(ExpansionError::Underdetermined { e: 2 })
        );
        // D - 2 - t: relation at e=2 reads 0*c_2 - c_1 = 0, and at e=1 gives c_1 = -c_0
        let op = DOperator::new(vec![
            Term::new(1, 1, 0),
            Term::new(-2, 0, 0),
            Term::new(-1, 0, 1),
        ])
        .unwrap();
        assert_eq!(
            expand(&op, &PeriodSequence::from_integers([1]), 3),
            Err(ExpansionError::Obstructed { e: 2 })
        );
    }

    #[test]
    fn annihilation_checks() {
        let op = p1_operator();
        let good = annihilates(&op, &PeriodSequence::from_integers([1, 0, 2, 0, 6, 0, 20]));
        assert_eq!(good.verified_range, 6);
        assert!(good.holds());

        let bad = annihilates(&op, &PeriodSequence::from_integers([1, 0, 3]));
        assert_eq!(bad.residuals, vec![(2, int(-2))]);

        let short = annihilates(&op, &PeriodSequence::from_integers([1]));
        assert_eq!(short.verified_range, 1);
        assert!(short.holds());
    }

    #[test]
    fn normalization_examples() {
        let doubled = [
            (int(8), 1, 2),
            (int(-2), 1, 0),
            (int(8), 0, 2),
        ];
        assert_eq!(normalize_rational(&doubled).unwrap(), p1_operator());
        assert_eq!(normalize(&p1_operator()), p1_operator());
        let flipped = DOperator::new(vec![
            Term::new(-4, 1, 2),
            Term::new(1, 1, 0),
            Term::new(-4, 0, 2),
        ])
        .unwrap();
        let n = normalize(&flipped);
        assert_eq!(n, p1_operator());
        let seq = PeriodSequence::from_integers([1, 0, 2, 0, 6]);
        assert!(annihilates(&flipped, &seq).holds());
        assert!(annihilates(&n, &seq).holds());
    }

    #[test]
    fn normalization_of_rationals_and_order() {
        let terms = [
            (rational(1, 3).unwrap(), 0, 2),
            (rational(-1, 12).unwrap(), 1, 0),
            (rational(1, 3).unwrap(), 1, 2),
        ];
        let n = normalize_rational(&terms).unwrap();
        assert_eq!(n, p1_operator());
        assert!(n.is_canonically_ordered());
        assert_eq!(normalize_rational(&[]), Err(NormalizeError::Empty));
        assert_eq!(
            normalize_rational(&[(int(1), 1, 0), (int(-1), 1, 0)]),
            Err(NormalizeError::Empty)
        );
    }

    #[test]
    fn products() {
        let p1 = central_binomial_interleaved(6);
        let pp = product_period(&p1, &p1, 6).unwrap();
        assert_eq!(pp, PeriodSequence::from_integers([1, 0, 4, 0, 36, 0, 400]));
        let short = product_period(&p1, &PeriodSequence::from_integers([1, 0]), 1).unwrap();
        assert_eq!(short, PeriodSequence::from_integers([1, 0]));
        assert!(product_period(&p1, &PeriodSequence::from_integers([1, 0]), 2).is_err());
        assert!(has_unit_constant_term(&pp));
    }

    #[test]
    fn product_with_a_point() {
        let p1 = central_binomial_interleaved(10);
        let unit = PeriodSequence::unit(11);
        assert_eq!(product_period(&p1, &unit, 10).unwrap(), p1);
        assert_eq!(product_period(&unit, &p1, 10).unwrap(), p1);
    }

    fn arb_operator() -> impl Strategy<Value = DOperator> {
        prop::collection::btree_map((0u32..4, 0u32..4), -20i64..20, 1..7).prop_filter_map(
            "valid operator",
            |m| {
                let terms: Vec<Term> = m
                    .into_iter()
                    .filter(|(_, c)| *c != 0)
                    .map(|((d, t), c)| Term::new(c, d, t))
                    .collect();
                DOperator::new(terms).ok()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn normalize_is_idempotent(op in arb_operator(), k in -5i64..6) {
            prop_assume!(k != 0);
            let scaled = DOperator::new(
                op.terms().iter().map(|t| Term::new(&t.coeff * k, t.d_exp, t.t_exp)).collect()
            ).unwrap();
            let once = normalize(&scaled);
            prop_assert!(once.is_normalized());
            prop_assert!(once.is_canonically_ordered());
            prop_assert_eq!(normalize(&once), once.clone());
            prop_assert_eq!(normalize(&op), once);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn expansion_is_linear(op in arb_operator(), c0 in -9i64..10, c1 in -9i64..10, num in -7i64..8, den in 1i64..6) {
            let seeds = PeriodSequence::from_integers([c0, c1]);
            let alpha = rational(num, den).unwrap();
            let base = expand(&op, &seeds, 12);
            let scaled = expand(&op, &seeds.scaled(&alpha), 12);
            match (base, scaled) {
                (Ok(b), Ok(s)) => {
                    prop_assert_eq!(b.scaled(&alpha), s.clone());
                    prop_assert!(annihilates(&op, &s).verified_range == 12);
                    // relations from the seeded range onward hold
                    let res = annihilates(&op, &b);
                    prop_assert!(res.residuals.iter().all(|(e, _)| *e <= 1));
                }
                (Err(_), _) if alpha.is_zero() => {}
                (Err(a), Err(b)) if !alpha.is_zero() => {
                    let same_index = |e: &ExpansionError| match e {
                        ExpansionError::Obstructed { e } | ExpansionError::Underdetermined { e } => Some(*e),
                        _ => None,
                    };
                    prop_assert_eq!(same_index(&a), same_index(&b));
                }
                (a, b) => prop_assert!(alpha.is_zero(), "{:?} vs {:?}", a, b),
            }
        }
    }
}
