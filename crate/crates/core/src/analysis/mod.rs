//! Diagnostics of Picard-Fuchs operators: the `d/dt` form, singular points,
//! the Fuchs criterion, local exponents and ramification.

mod local;
mod report;

pub use local::{indicial_polynomial, invariant_dimension, local_exponents, Exponent, IndicialPolynomial};
pub use report::{
    ramification_data, ramification_data_with, ramification_defect, AnalysisConfig, Completeness,
    PointReport, RamificationReport,
};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{gcd_all, stirling2_row, Rational};
use crate::operator::DOperator;
use crate::poly::{factor, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("operator is not Fuchsian: irregular singularity at {point}")]
    NotFuchsian { point: String },
    #[error("integer exponents at {point} span {gap}, above the limit {limit}")]
    ExponentGapTooLarge { point: String, gap: u64, limit: u64 },
    #[error("ramification defect {defect} is negative although the local system was declared irreducible")]
    NegativeDefect { defect: i64 },
}

/// `sum_i a_i(t) (d/dt)^i` with integer polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffForm {
    coeffs: Vec<QPoly>,
}

impl DiffForm {
    /// Takes `a_0..a_r`; trailing zero coefficients are dropped and the
    /// common content removed.
    pub fn new(mut coeffs: Vec<QPoly>) -> Option<Self> {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return None;
        }
        let den = crate::arith::lcm_all(coeffs.iter().flat_map(|p| p.coeffs().iter().map(|c| c.denom())));
        let scaled: Vec<QPoly> = coeffs
            .iter()
            .map(|p| p.scale(&Rational::from_integer(den.clone())))
            .collect();
        let content = gcd_all(
            scaled
                .iter()
                .flat_map(|p| p.coeffs().iter().map(|c| c.numer())),
        );
        let inv = Rational::new(BigInt::one(), content);
        Some(Self {
            coeffs: scaled.iter().map(|p| p.scale(&inv)).collect(),
        })
    }

    /// Builds from integer coefficient lists, lowest degree first.
    pub fn from_ints(coeffs: &[&[i64]]) -> Option<Self> {
        Self::new(coeffs.iter().map(|c| QPoly::from_ints(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &QPoly {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &QPoly {
        self.coeffs.last().expect("order at least one")
    }

    /// Coefficients of `L G` for `G = sum c_d t^d`, for every `e` whose value
    /// only involves `c_0..c_M`.
    pub fn apply_to_series(&self, c: &[Rational]) -> Vec<Rational> {
        if c.is_empty() {
            return Vec::new();
        }
        let m = c.len() - 1;
        let lag = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.coeffs().iter().position(|x| !x.is_zero()).map(|k| i as i64 - k as i64))
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        (0..=m.saturating_sub(lag))
            .take_while(|_| lag <= m)
            .map(|e| {
                let mut acc = Rational::zero();
                for (i, a) in self.coeffs.iter().enumerate() {
                    for (k, alpha) in a.coeffs().iter().enumerate() {
                        if alpha.is_zero() || e + i < k {
                            continue;
                        }
                        let d = e + i - k;
                        if d < i {
                            continue;
                        }
                        let falling: BigInt = (0..i).map(|j| BigInt::from(d - j)).product();
                        acc += alpha * Rational::from_integer(falling) * &c[d];
                    }
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({})", a.display_var("t"))?,
                1 => write!(f, "({})*d", a.display_var("t"))?,
                _ => write!(f, "({})*d^{i}", a.display_var("t"))?,
            }
        }
        Ok(())
    }
}

/// Rewrite with `D^m = sum_j S(m, j) t^j d^j`.
pub fn to_diff_form(op: &DOperator) -> DiffForm {
    let r = op.order() as usize;
    let mut a: Vec<Vec<BigInt>> = vec![Vec::new(); r + 1];
    for term in op.terms() {
        for (j, s) in stirling2_row(term.d_exp as usize).into_iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let deg = term.t_exp as usize + j;
            let slot = &mut a[j];
            if slot.len() <= deg {
                slot.resize(deg + 1, BigInt::zero());
            }
            slot[deg] += &term.coeff * s;
        }
    }
    DiffForm::new(a.iter().map(|c| QPoly::from_bigints(c)).collect())
        .expect("an operator of positive order has a nonzero leading coefficient")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointKind {
    Rational(Rational),
    /// Roots of a monic irreducible polynomial of degree at least two.
    Algebraic(QPoly),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingularPoint {
    pub kind: PointKind,
    /// Multiplicity in the leading coefficient; zero at infinity.
    pub multiplicity: usize,
}

impl SingularPoint {
    pub fn rational(value: Rational, multiplicity: usize) -> Self {
        Self {
            kind: PointKind::Rational(value),
            multiplicity,
        }
    }

    pub fn infinity() -> Self {
        Self {
            kind: PointKind::Infinity,
            multiplicity: 0,
        }
    }

    /// Number of points of the projective line this entry stands for.
    pub fn conjugates(&self) -> usize {
        match &self.kind {
            PointKind::Algebraic(f) => f.degree().unwrap_or(1),
            _ => 1,
        }
    }

    /// The monic irreducible factor vanishing at a finite point.
    pub fn factor(&self) -> Option<QPoly> {
        match &self.kind {
            PointKind::Rational(s) => Some(QPoly::new(vec![-s.clone(), Rational::one()])),
            PointKind::Algebraic(f) => Some(f.clone()),
            PointKind::Infinity => None,
        }
    }

    fn rank_key(&self) -> u8 {
        match self.kind {
            PointKind::Rational(_) => 0,
            PointKind::Algebraic(_) => 1,
            PointKind::Infinity => 2,
        }
    }
}

impl Ord for SingularPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.kind, &other.kind) {
            (PointKind::Rational(a), PointKind::Rational(b)) => a.cmp(b),
            (PointKind::Algebraic(f), PointKind::Algebraic(g)) => f
                .degree()
                .cmp(&g.degree())
                .then_with(|| f.coeffs().cmp(g.coeffs())),
            _ => self.rank_key().cmp(&other.rank_key()),
        }
        .then_with(|| self.multiplicity.cmp(&other.multiplicity))
    }
}

impl PartialOrd for SingularPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PointKind::Rational(s) => write!(f, "t = {s}"),
            PointKind::Algebraic(p) => write!(f, "roots of {}", p.display_var("t")),
            PointKind::Infinity => write!(f, "t = infinity"),
        }
    }
}

/// Irreducible factors of the leading coefficient, then infinity, in
/// canonical order.
pub fn singular_points(df: &DiffForm) -> Vec<SingularPoint> {
    let mut out: Vec<SingularPoint> = factor(df.leading())
        .factors
        .into_iter()
        .map(|(f, multiplicity)| {
            let kind = if f.degree() == Some(1) {
                PointKind::Rational(-f.coeff(0))
            } else {
                PointKind::Algebraic(f)
            };
            SingularPoint { kind, multiplicity }
        })
        .collect();
    out.sort();
    out.push(SingularPoint::infinity());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuchsCertificate {
    pub fuchsian: bool,
    pub points: Vec<(SingularPoint, bool)>,
}

/// Fuchs criterion at one point: `ord a_i >= ord a_r - (r - i)` at finite
/// points, `deg a_i - deg a_r <= -(r - i)` at infinity.
pub fn is_regular_at(df: &DiffForm, point: &SingularPoint) -> bool {
    let r = df.order() as i64;
    match point.factor() {
        Some(f) => {
            let nu = df.leading().valuation(&f) as i64;
            df.coeffs()[..df.order()]
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .all(|(i, a)| a.valuation(&f) as i64 >= nu - (r - i as i64))
        }
        None => {
            let top = df.leading().degree().expect("nonzero leading coefficient") as i64;
            df.coeffs()[..df.order()]
                .iter()
                .enumerate()
                .filter_map(|(i, a)| a.degree().map(|d| (i, d)))
                .all(|(i, d)| d as i64 - top <= -(r - i as i64))
        }
    }
}

pub fn is_fuchsian(df: &DiffForm) -> FuchsCertificate {
    let points: Vec<(SingularPoint, bool)> = singular_points(df)
        .into_iter()
        .map(|p| {
            let ok = is_regular_at(df, &p);
            (p, ok)
        })
        .collect();
    FuchsCertificate {
        fuchsian: points.iter().all(|(_, ok)| *ok),
        points,
    }
}
