//! Multi-modular nullspaces with Chinese remaindering and rational
//! reconstruction, verified exactly before use.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::reconstruct::rational_reconstruction;
use super::{equation_rows, fit_with, search_with, FitError, FitResult, KernelOracle};
use crate::arith::Rational;
use crate::field::{is_prime_u64, FieldElement, Zp};
use crate::linalg::row_reduce;
use crate::sequence::PeriodSequence;

const PRIME_LOW: u64 = 1 << 31;
const PRIME_HIGH: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularConfig {
    pub seed: u64,
    /// Tried before any random prime, in order.
    pub forced_primes: Vec<u64>,
    /// Upper limit on primes drawn for a single kernel.
    pub max_primes: usize,
    /// Independent primes consulted for each rank.
    pub rank_primes: usize,
}

impl Default for ModularConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            forced_primes: Vec::new(),
            max_primes: 256,
            rank_primes: 2,
        }
    }
}

impl ModularConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModularStats {
    /// Primes whose images entered the final reconstruction.
    pub primes_used: Vec<u64>,
    /// Primes rejected for dividing a denominator or dropping the rank.
    pub primes_discarded: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularFit {
    pub result: FitResult,
    pub stats: ModularStats,
}

struct PrimeSource {
    forced: std::vec::IntoIter<u64>,
    rng: ChaCha8Rng,
    seen: HashSet<u64>,
}

impl PrimeSource {
    fn new(config: &ModularConfig) -> Self {
        Self {
            forced: config.forced_primes.clone().into_iter(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            seen: HashSet::new(),
        }
    }

    fn next_prime(&mut self) -> u64 {
        for p in self.forced.by_ref() {
            if is_prime_u64(p) && self.seen.insert(p) {
                return p;
            }
        }
        loop {
            let p = self.rng.random_range(PRIME_LOW..PRIME_HIGH) | 1;
            if is_prime_u64(p) && self.seen.insert(p) {
                return p;
            }
        }
    }
}

struct ModularOracle<'a> {
    seq: &'a [Rational],
    source: PrimeSource,
    config: &'a ModularConfig,
    stats: ModularStats,
    ranks: HashMap<(u32, u32), usize>,
}

enum Image {
    BadPrime,
    Echelon(crate::linalg::Echelon<Zp>),
}

impl ModularOracle<'_> {
    fn image(&self, p: u64, r: u32, s: u32) -> Image {
        let Some(c) = self
            .seq
            .iter()
            .map(|q| Zp::from_rational(q, p))
            .collect::<Option<Vec<_>>>()
        else {
            return Image::BadPrime;
        };
        let zero = Zp::new(0, p);
        let rows = equation_rows(&c, r, s, &zero);
        Image::Echelon(row_reduce(rows, ((r + 1) * (s + 1)) as usize))
    }

    fn discard(&mut self, p: u64, why: &str) {
        log::debug!("discarding prime {p}: {why}");
        self.stats.primes_discarded.push(p);
    }

    /// Exact check of the candidate against every equation.
    fn verifies(&self, v: &[Rational], r: u32, s: u32) -> bool {
        equation_rows(self.seq, r, s, &Rational::zero())
            .iter()
            .all(|row| {
                row.iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
                    .is_zero()
            })
    }
}

fn signature_better(candidate: &[usize], best: &[usize]) -> bool {
    candidate.len() > best.len() || (candidate.len() == best.len() && candidate < best)
}

impl KernelOracle for ModularOracle<'_> {
    fn rank(&mut self, r: u32, s: u32) -> Result<usize, FitError> {
        if let Some(&rank) = self.ranks.get(&(r, s)) {
            return Ok(rank);
        }
        let mut best = 0;
        let mut good = 0;
        let mut tried = 0;
        while good < self.config.rank_primes.max(1) {
            if tried >= self.config.max_primes {
                return Err(FitError::PrimesExhausted { tried });
            }
            tried += 1;
            let p = self.source.next_prime();
            match self.image(p, r, s) {
                Image::BadPrime => self.discard(p, "divides a denominator"),
                Image::Echelon(e) => {
                    good += 1;
                    best = best.max(e.rank());
                }
            }
        }
        self.ranks.insert((r, s), best);
        Ok(best)
    }

    fn kernel_vector(&mut self, r: u32, s: u32) -> Result<Vec<Rational>, FitError> {
        let mut best: Option<Vec<usize>> = None;
        let mut used: Vec<u64> = Vec::new();
        let mut residues: Vec<BigInt> = Vec::new();
        let mut modulus = BigInt::one();
        let mut previous: Option<Vec<Rational>> = None;
        for _ in 0..self.config.max_primes {
            let p = self.source.next_prime();
            let echelon = match self.image(p, r, s) {
                Image::BadPrime => {
                    self.discard(p, "divides a denominator");
                    continue;
                }
                Image::Echelon(e) => e,
            };
            if echelon.free_columns().len() != 1 {
                self.discard(p, "rank drop");
                continue;
            }
            match &best {
                Some(b) if signature_better(b, &echelon.pivots) || *b != echelon.pivots && !signature_better(&echelon.pivots, b) => {
                    self.discard(p, "unlucky pivot pattern");
                    continue;
                }
                Some(b) if *b == echelon.pivots => {}
                _ => {
                    for q in used.drain(..) {
                        self.discard(q, "unlucky pivot pattern");
                    }
                    best = Some(echelon.pivots.clone());
                    residues.clear();
                    modulus = BigInt::one();
                    previous = None;
                }
            }
            let image = echelon.nullspace(&Zp::new(0, p)).remove(0);
            let pb = BigInt::from(p);
            if residues.is_empty() {
                residues = image.iter().map(|x| BigInt::from(x.value())).collect();
            } else {
                let inv = Zp::from_bigint(&modulus, p).inverse();
                for (acc, x) in residues.iter_mut().zip(&image) {
                    let delta = Zp::from_bigint(&(BigInt::from(x.value()) - &*acc), p).times(&inv);
                    *acc += &modulus * BigInt::from(delta.value());
                }
            }
            modulus *= &pb;
            used.push(p);
            let candidate = residues
                .iter()
                .map(|a| rational_reconstruction(&a.mod_floor(&modulus), &modulus))
                .collect::<Option<Vec<_>>>();
            if let Some(v) = candidate {
                if previous.as_ref() == Some(&v) && self.verifies(&v, r, s) {
                    self.stats.primes_used = used;
                    return Ok(v);
                }
                previous = Some(v);
            } else {
                previous = None;
            }
        }
        Err(FitError::PrimesExhausted {
            tried: self.config.max_primes,
        })
    }
}

/// Same contract and output as [`super::fit_operator`], with nullspaces
/// solved modulo random primes.
pub fn fit_operator_modular(
    seq: &PeriodSequence,
    r: u32,
    s: u32,
    min_excess: usize,
    config: &ModularConfig,
) -> Result<ModularFit, FitError> {
    let mut oracle = ModularOracle {
        seq: seq.coeffs(),
        source: PrimeSource::new(config),
        config,
        stats: ModularStats::default(),
        ranks: HashMap::new(),
    };
    let result = fit_with(&mut oracle, seq, r, s, min_excess)?;
    Ok(ModularFit {
        result,
        stats: oracle.stats,
    })
}

pub fn fit_operator_search_modular(
    seq: &PeriodSequence,
    r_max: u32,
    s_max: u32,
    min_excess: usize,
    config: &ModularConfig,
) -> Result<FitResult, FitError> {
    search_with(r_max, s_max, |r, s| {
        fit_operator_modular(seq, r, s, min_excess, config).map(|f| f.result)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_operator;
    use crate::laurent::{constant_term_powers, LaurentPolynomial};
    use crate::operator::p1_operator;
    use crate::recurrence::expand_period;

    #[test]
    fn matches_dense_on_p1() {
        let seq = expand_period(&p1_operator(), 29).unwrap();
        let dense = fit_operator(&seq, 1, 2, 10).unwrap();
        for seed in 0..5 {
            let fit = fit_operator_modular(&seq, 1, 2, 10, &ModularConfig::with_seed(seed)).unwrap();
            assert_eq!(fit.result, dense);
            assert!(fit.stats.primes_used.len() >= 2);
            assert!(fit
                .stats
                .primes_used
                .iter()
                .all(|p| (PRIME_LOW..PRIME_HIGH).contains(p)));
        }
    }

    #[test]
    fn denominator_prime_is_discarded() {
        let third = Rational::new(1.into(), 3.into());
        let seq = expand_period(&p1_operator(), 29).unwrap().scaled(&third);
        let config = ModularConfig {
            forced_primes: vec![3, 3],
            ..ModularConfig::default()
        };
        let fit = fit_operator_modular(&seq, 1, 2, 10, &config).unwrap();
        assert_eq!(fit.stats.primes_discarded, vec![3]);
        assert_eq!(fit.result.operator, p1_operator());
        assert_eq!(fit.result, fit_operator(&seq, 1, 2, 10).unwrap());
    }

    #[test]
    fn small_prime_rank_drop_is_survived() {
        let seq = expand_period(&p1_operator(), 29).unwrap();
        let config = ModularConfig {
            forced_primes: vec![2, 5, 7],
            ..ModularConfig::default()
        };
        let fit = fit_operator_modular(&seq, 1, 2, 10, &config).unwrap();
        assert_eq!(fit.result.operator, p1_operator());
    }

    #[test]
    fn p2_mirror_cross_path() {
        let f = LaurentPolynomial::from_monomials(2, [vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        let seq = constant_term_powers(&f, 39).unwrap();
        let dense = fit_operator(&seq, 2, 3, 10).unwrap();
        let modular = fit_operator_modular(&seq, 2, 3, 10, &ModularConfig::with_seed(7)).unwrap();
        assert_eq!(dense, modular.result);
        assert!(crate::recurrence::annihilates(&dense.operator, &seq).holds());
    }

    #[test]
    fn deterministic_primes() {
        let config = ModularConfig::with_seed(42);
        let mut a = PrimeSource::new(&config);
        let mut b = PrimeSource::new(&config);
        for _ in 0..10 {
            assert_eq!(a.next_prime(), b.next_prime());
        }
    }
}
