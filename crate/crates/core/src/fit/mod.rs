//! Discovering annihilating operators from truncated sequences.
//!
//! The unknowns are `l_{m,n}` for `0 <= m <= R`, `0 <= n <= S`, stored at
//! column `m (S + 1) + n`. Row `e` of the system, for `e = 0..=M`, is
//! `sum l_{m,n} (e - n)^m c_{e-n} = 0` with negative indices dropped.

mod modular;
mod reconstruct;

pub use modular::{fit_operator_modular, fit_operator_search_modular, ModularConfig, ModularFit, ModularStats};
pub use reconstruct::{rational_reconstruction, reconstruct_bounded};

use std::collections::HashMap;

use num_traits::Zero;

use crate::arith::Rational;
use crate::field::FieldElement;
use crate::linalg::{row_reduce, Echelon};
use crate::operator::{DOperator, OperatorError};
use crate::recurrence::{annihilates, normalize_rational, NormalizeError};
use crate::sequence::PeriodSequence;

pub const DEFAULT_MIN_EXCESS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitResult {
    pub operator: DOperator,
    pub excess_equations: usize,
    /// `(R, S)` of the ansatz that succeeded.
    pub ansatz: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotFoundReason {
    NullspaceTrivial,
    /// More solutions than the `t^j L` multiples of a single operator.
    NullspaceMultidimensional { dimension: usize },
    InsufficientExcess { excess: usize, required: usize },
    /// Every ansatz in the search range failed.
    SearchExhausted { attempts: usize },
}

impl std::fmt::Display for NotFoundReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NullspaceTrivial => write!(f, "nullspace_trivial"),
            Self::NullspaceMultidimensional { dimension } => {
                write!(f, "nullspace_multidimensional (dimension {dimension})")
            }
            Self::InsufficientExcess { excess, required } => {
                write!(f, "insufficient_excess ({excess} < {required})")
            }
            Self::SearchExhausted { attempts } => {
                write!(f, "no ansatz succeeded ({attempts} tried)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("ansatz needs R >= 1 and S >= 1, got R = {r}, S = {s}")]
    InvalidAnsatz { r: u32, s: u32 },
    #[error("cannot fit an empty sequence")]
    EmptySequence,
    #[error("no operator found: {0}")]
    NotFound(NotFoundReason),
    #[error("the nullspace consists of operators without D")]
    Degenerate,
    #[error("modular reconstruction did not stabilize within {tried} primes")]
    PrimesExhausted { tried: usize },
}

impl FitError {
    pub fn not_found(&self) -> Option<&NotFoundReason> {
        match self {
            Self::NotFound(r) => Some(r),
            _ => None,
        }
    }
}

pub(crate) fn column(m: u32, n: u32, s: u32) -> usize {
    (m * (s + 1) + n) as usize
}

/// The linear system for ansatz `(r, s)` over any field, given the sequence
/// already mapped into it.
pub(crate) fn equation_rows<F: FieldElement>(c: &[F], r: u32, s: u32, zero: &F) -> Vec<Vec<F>> {
    let ncols = ((r + 1) * (s + 1)) as usize;
    (0..c.len())
        .map(|e| {
            let mut row = vec![zero.clone(); ncols];
            for n in 0..=s.min(e as u32) {
                let idx = e - n as usize;
                let base = zero.embed_int(idx as i64);
                let mut value = c[idx].clone();
                for m in 0..=r {
                    row[column(m, n, s)] = value.clone();
                    value = value.times(&base);
                }
            }
            row
        })
        .collect()
}

/// Source of ranks and kernel vectors for the systems of one sequence.
pub(crate) trait KernelOracle {
    fn rank(&mut self, r: u32, s: u32) -> Result<usize, FitError>;
    /// Called only when the nullspace of `(r, s)` is one-dimensional.
    fn kernel_vector(&mut self, r: u32, s: u32) -> Result<Vec<Rational>, FitError>;
}

/// The shared decision procedure. The nullspace always contains `t^j L`
/// when it contains `L` and the `t`-degree allows, so a fit succeeds when
/// the smallest `S'` with a nontrivial kernel has a one-dimensional kernel
/// and the full kernel consists exactly of its `t`-multiples.
pub(crate) fn fit_with(
    oracle: &mut impl KernelOracle,
    seq: &PeriodSequence,
    r: u32,
    s: u32,
    min_excess: usize,
) -> Result<FitResult, FitError> {
    if r == 0 || s == 0 {
        return Err(FitError::InvalidAnsatz { r, s });
    }
    if seq.is_empty() {
        return Err(FitError::EmptySequence);
    }
    let unknowns = |s: u32| ((r + 1) * (s + 1)) as usize;
    let full_rank = oracle.rank(r, s)?;
    let full = unknowns(s) - full_rank;
    if full == 0 {
        return Err(FitError::NotFound(NotFoundReason::NullspaceTrivial));
    }
    let mut base = None;
    for s0 in 0..s {
        let nullity = unknowns(s0) - oracle.rank(r, s0)?;
        if nullity > 0 {
            base = Some((s0, nullity));
            break;
        }
    }
    let (s0, nullity) = base.unwrap_or((s, full));
    if nullity != 1 || full != (s - s0 + 1) as usize {
        return Err(FitError::NotFound(
            NotFoundReason::NullspaceMultidimensional { dimension: full },
        ));
    }
    let excess = seq.len() - full_rank;
    if excess < min_excess {
        return Err(FitError::NotFound(NotFoundReason::InsufficientExcess {
            excess,
            required: min_excess,
        }));
    }
    let v = oracle.kernel_vector(r, s0)?;
    let terms: Vec<(Rational, u32, u32)> = v
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let i = i as u32;
            (c, i / (s0 + 1), i % (s0 + 1))
        })
        .collect();
    let operator = match normalize_rational(&terms) {
        Ok(op) => op,
        Err(NormalizeError::Invalid(OperatorError::ZeroOrder)) | Err(NormalizeError::Empty) => {
            return Err(FitError::Degenerate)
        }
        Err(e) => panic!("kernel vector yields an invalid operator: {e}"),
    };
    assert!(
        annihilates(&operator, seq).holds(),
        "fitted operator must annihilate the input"
    );
    Ok(FitResult {
        operator,
        excess_equations: excess,
        ansatz: (r, s),
    })
}

/// Exact elimination over the rationals.
struct DenseOracle<'a> {
    seq: &'a [Rational],
    cache: HashMap<(u32, u32), Echelon<Rational>>,
}

impl DenseOracle<'_> {
    fn echelon(&mut self, r: u32, s: u32) -> &Echelon<Rational> {
        let seq = self.seq;
        self.cache.entry((r, s)).or_insert_with(|| {
            let rows = equation_rows(seq, r, s, &Rational::zero());
            row_reduce(rows, ((r + 1) * (s + 1)) as usize)
        })
    }
}

impl KernelOracle for DenseOracle<'_> {
    fn rank(&mut self, r: u32, s: u32) -> Result<usize, FitError> {
        Ok(self.echelon(r, s).rank())
    }

    fn kernel_vector(&mut self, r: u32, s: u32) -> Result<Vec<Rational>, FitError> {
        let mut basis = self.echelon(r, s).nullspace(&Rational::zero());
        debug_assert_eq!(basis.len(), 1);
        Ok(basis.remove(0))
    }
}

/// Fit an operator with `ord_D <= r` and `deg_t <= s` by exact elimination.
pub fn fit_operator(
    seq: &PeriodSequence,
    r: u32,
    s: u32,
    min_excess: usize,
) -> Result<FitResult, FitError> {
    let mut oracle = DenseOracle {
        seq: seq.coeffs(),
        cache: HashMap::new(),
    };
    fit_with(&mut oracle, seq, r, s, min_excess)
}

/// Ansatz sizes `1 <= R <= r_max`, `1 <= S <= s_max` ordered by `(R + S, R)`.
pub fn ansatz_order(r_max: u32, s_max: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (1..=r_max)
        .flat_map(|r| (1..=s_max).map(move |s| (r, s)))
        .collect();
    out.sort_by_key(|&(r, s)| (r + s, r));
    out
}

pub(crate) fn search_with(
    r_max: u32,
    s_max: u32,
    mut attempt: impl FnMut(u32, u32) -> Result<FitResult, FitError>,
) -> Result<FitResult, FitError> {
    if r_max == 0 || s_max == 0 {
        return Err(FitError::InvalidAnsatz { r: r_max, s: s_max });
    }
    let order = ansatz_order(r_max, s_max);
    let attempts = order.len();
    for (r, s) in order {
        match attempt(r, s) {
            Ok(found) => return Ok(found),
            Err(FitError::NotFound(reason)) => {
                log::debug!("ansatz ({r}, {s}): {reason}");
            }
            Err(FitError::Degenerate) => log::debug!("ansatz ({r}, {s}): degenerate"),
            Err(e) => return Err(e),
        }
    }
    Err(FitError::NotFound(NotFoundReason::SearchExhausted { attempts }))
}

/// First successful [`fit_operator`] over increasing ansatz sizes.
pub fn fit_operator_search(
    seq: &PeriodSequence,
    r_max: u32,
    s_max: u32,
    min_excess: usize,
) -> Result<FitResult, FitError> {
    search_with(r_max, s_max, |r, s| fit_operator(seq, r, s, min_excess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{p1_operator, Term};
    use crate::recurrence::{expand_period, product_period};

    fn p1_period(len: usize) -> PeriodSequence {
        expand_period(&p1_operator(), len - 1).unwrap()
    }

    #[test]
    fn recovers_p1() {
        let fit = fit_operator(&p1_period(30), 1, 2, 10).unwrap();
        assert_eq!(fit.operator, p1_operator());
        assert_eq!(fit.ansatz, (1, 2));
        // 30 equations, 6 unknowns, nullity 1
        assert_eq!(fit.excess_equations, 25);
    }

    #[test]
    fn constant_sequence_gives_d() {
        let seq = PeriodSequence::unit(10);
        let fit = fit_operator(&seq, 1, 1, 1).unwrap();
        assert_eq!(fit.operator, DOperator::new(vec![Term::new(1, 1, 0)]).unwrap());
    }

    #[test]
    fn short_input_is_multidimensional() {
        let err = fit_operator(&p1_period(4), 3, 6, 5).unwrap_err();
        assert!(matches!(
            err,
            FitError::NotFound(NotFoundReason::NullspaceMultidimensional { .. })
        ));
    }

    #[test]
    fn trivial_and_insufficient() {
        // a sequence with no first-order operator of t-degree 1
        let seq = p1_period(30);
        assert_eq!(
            fit_operator(&seq, 1, 1, 0),
            Err(FitError::NotFound(NotFoundReason::NullspaceTrivial))
        );
        let err = fit_operator(&p1_period(8), 1, 2, 10).unwrap_err();
        assert_eq!(
            err,
            FitError::NotFound(NotFoundReason::InsufficientExcess {
                excess: 3,
                required: 10
            })
        );
        assert_eq!(
            fit_operator(&seq, 0, 2, 0),
            Err(FitError::InvalidAnsatz { r: 0, s: 2 })
        );
    }

    #[test]
    fn nullspace_of_multiples_is_accepted() {
        // (1, 4) contains L, tL and t^2 L
        let fit = fit_operator(&p1_period(30), 1, 4, 10).unwrap();
        assert_eq!(fit.operator, p1_operator());
    }

    #[test]
    fn search_order() {
        assert_eq!(
            ansatz_order(2, 2),
            vec![(1, 1), (1, 2), (2, 1), (2, 2)]
        );
        let fit = fit_operator_search(&p1_period(30), 4, 8, 10).unwrap();
        assert_eq!(fit.ansatz, (1, 2));
        assert_eq!(fit, fit_operator(&p1_period(30), 1, 2, 10).unwrap());
        let short = PeriodSequence::from_integers([1, 0]);
        assert!(matches!(
            fit_operator_search(&short, 4, 8, 1),
            Err(FitError::NotFound(_))
        ));
    }

    #[test]
    fn product_round_trip() {
        let p1 = p1_period(40);
        let pp = product_period(&p1, &p1, 39).unwrap();
        let fit = fit_operator_search(&pp, 3, 4, 10).unwrap();
        assert_eq!(expand_period(&fit.operator, 39).unwrap(), pp);
    }

    #[test]
    fn system_rows_follow_the_relation() {
        let seq = p1_period(5);
        let rows = equation_rows(seq.coeffs(), 1, 2, &Rational::zero());
        // columns (0,0) (0,1) (0,2) (1,0) (1,1) (1,2) at e = 2
        let c = |v: i64| Rational::from_integer(v.into());
        assert_eq!(rows[2], vec![c(2), c(0), c(1), c(4), c(0), c(0)]);
        assert_eq!(rows[0], vec![c(1), c(0), c(0), c(0), c(0), c(0)]);
    }
}
