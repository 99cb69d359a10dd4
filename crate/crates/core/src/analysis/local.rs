//! Local theta-forms `u^{-shift} L = sum_j u^j P_j(theta)` at a point, with
//! `u = t - s` or `u = 1/t`, and what follows from them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{is_regular_at, AnalysisError, DiffForm, PointKind, SingularPoint};
use crate::arith::Rational;
use crate::field::{FieldElement, NumberFieldElem};
use crate::linalg::rank;
use crate::poly::generic::{eval, mul, taylor_shift, trim};
use crate::poly::{factor, QPoly};

/// `prod_{k < i} (sign * theta - k)` in the power basis.
fn falling<F: FieldElement>(i: usize, sign: i64, zero: &F) -> Vec<F> {
    let mut out = vec![zero.one_like()];
    for k in 0..i {
        out = mul(&out, &[zero.embed_int(-(k as i64)), zero.embed_int(sign)]);
    }
    out
}

fn add_into<F: FieldElement>(parts: &mut Vec<Vec<F>>, j: usize, poly: &[F], scale: &F, zero: &F) {
    if parts.len() <= j {
        parts.resize(j + 1, Vec::new());
    }
    let slot = &mut parts[j];
    if slot.len() < poly.len() {
        slot.resize(poly.len(), zero.clone());
    }
    for (s, p) in slot.iter_mut().zip(poly) {
        *s = s.plus(&p.times(scale));
    }
}

/// `P_j` at the finite point `at`, or `None` when the point is irregular.
fn finite_form<F: FieldElement>(df: &DiffForm, at: &F) -> Option<Vec<Vec<F>>> {
    let zero = at.zero_like();
    let r = df.order();
    let shifted: Vec<Vec<F>> = df
        .coeffs()
        .iter()
        .map(|a| taylor_shift(&a.embed(&zero), at))
        .collect();
    let nu = shifted[r].iter().position(|c| !c.is_nil())?;
    let mut parts = Vec::new();
    for (i, b) in shifted.iter().enumerate() {
        let theta = falling(i, 1, &zero);
        for (k, beta) in b.iter().enumerate() {
            if beta.is_nil() {
                continue;
            }
            let j = (k + r).checked_sub(nu + i)?;
            add_into(&mut parts, j, &theta, beta, &zero);
        }
    }
    for p in &mut parts {
        trim(p);
    }
    Some(parts)
}

/// `P_j` at infinity in the parameter `1/t`.
fn infinity_form(df: &DiffForm) -> Option<Vec<Vec<Rational>>> {
    let zero = Rational::zero();
    let r = df.order();
    let top = df
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.degree().map(|d| d as i64 - i as i64))
        .max()?;
    let mut parts = Vec::new();
    for (i, a) in df.coeffs().iter().enumerate() {
        let theta = falling(i, -1, &zero);
        for (k, alpha) in a.coeffs().iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            let j = (top - (k as i64 - i as i64)) as usize;
            add_into(&mut parts, j, &theta, alpha, &zero);
        }
    }
    for p in &mut parts {
        trim(p);
    }
    (parts[0].len() == r + 1).then_some(parts)
}

/// A local theta-form over the residue field of the point.
pub(crate) enum LocalForm {
    Rational(Vec<Vec<Rational>>),
    Algebraic(Vec<Vec<NumberFieldElem>>),
}

pub(crate) fn local_form(df: &DiffForm, point: &SingularPoint) -> Result<LocalForm, AnalysisError> {
    let irregular = || AnalysisError::NotFuchsian {
        point: point.to_string(),
    };
    if !is_regular_at(df, point) {
        return Err(irregular());
    }
    let form = match &point.kind {
        PointKind::Rational(s) => finite_form(df, s).map(LocalForm::Rational),
        PointKind::Algebraic(f) => {
            let alpha = NumberFieldElem::generator(Arc::new(f.clone()));
            finite_form(df, &alpha).map(LocalForm::Algebraic)
        }
        PointKind::Infinity => infinity_form(df).map(LocalForm::Rational),
    };
    form.ok_or_else(irregular)
}

/// The indicial polynomial; coefficients are classes modulo `modulus` at
/// algebraic points and constants otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicialPolynomial {
    pub modulus: Option<QPoly>,
    pub coeffs: Vec<QPoly>,
}

impl IndicialPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn as_rational(&self) -> Option<QPoly> {
        if self.modulus.is_some() {
            return None;
        }
        Some(QPoly::new(self.coeffs.iter().map(|c| c.coeff(0)).collect()))
    }
}

impl fmt::Display for IndicialPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(p) => write!(f, "{}", p.display_var("λ")),
            None => {
                let terms: Vec<String> = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("({})*λ^{k}", c.display_var("a")))
                    .collect();
                let m = self.modulus.as_ref().expect("algebraic");
                write!(f, "{} where {} = 0", terms.join(" + "), m.display_var("a"))
            }
        }
    }
}

pub fn indicial_polynomial(
    df: &DiffForm,
    point: &SingularPoint,
) -> Result<IndicialPolynomial, AnalysisError> {
    Ok(match local_form(df, point)? {
        LocalForm::Rational(parts) => IndicialPolynomial {
            modulus: None,
            coeffs: parts[0].iter().map(|c| QPoly::constant(c.clone())).collect(),
        },
        LocalForm::Algebraic(parts) => IndicialPolynomial {
            modulus: point.factor(),
            coeffs: parts[0].iter().map(|c| c.representative().clone()).collect(),
        },
    })
}

/// One root of an indicial polynomial, or a block of non-rational roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Integer(BigInt),
    NonInteger(Rational),
    /// `degree` roots given by an irreducible factor over the residue field.
    Algebraic { degree: usize, factor: String },
}

impl Exponent {
    pub fn is_integer(&self) -> bool {
        matches!(self, Exponent::Integer(_))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Integer(n) => write!(f, "{n}"),
            Exponent::NonInteger(q) => write!(f, "{q}"),
            Exponent::Algebraic { factor, .. } => write!(f, "root of {factor}"),
        }
    }
}

fn tag_rational(root: Rational) -> Exponent {
    if root.is_integer() {
        Exponent::Integer(root.to_integer())
    } else {
        Exponent::NonInteger(root)
    }
}

/// The roots of the indicial polynomial with multiplicity: rational roots
/// ascending, then irreducible blocks.
pub fn local_exponents(df: &DiffForm, point: &SingularPoint) -> Result<Vec<Exponent>, AnalysisError> {
    let chi = indicial_polynomial(df, point)?;
    Ok(exponents_of(&chi))
}

fn exponents_of(chi: &IndicialPolynomial) -> Vec<Exponent> {
    let mut out = Vec::new();
    match chi.as_rational() {
        Some(p) => {
            let fact = factor(&p);
            let mut blocks = Vec::new();
            for (g, mult) in fact.factors {
                if g.degree() == Some(1) {
                    for _ in 0..mult {
                        out.push(tag_rational(-g.coeff(0)));
                    }
                } else {
                    for _ in 0..mult {
                        blocks.push(Exponent::Algebraic {
                            degree: g.degree().unwrap_or(0),
                            factor: g.display_var("λ").to_string(),
                        });
                    }
                }
            }
            out.sort_by_key(exponent_value);
            out.extend(blocks);
        }
        None => {
            let common = rational_part(chi);
            let mut found = 0;
            for (root, mult) in crate::poly::rational_roots(&common) {
                for _ in 0..mult {
                    out.push(tag_rational(root.clone()));
                    found += 1;
                }
            }
            let rest = chi.degree() - found;
            if rest > 0 {
                out.push(Exponent::Algebraic {
                    degree: rest,
                    factor: chi.to_string(),
                });
            }
        }
    }
    out
}

fn exponent_value(e: &Exponent) -> Rational {
    match e {
        Exponent::Integer(n) => Rational::from_integer(n.clone()),
        Exponent::NonInteger(q) => q.clone(),
        Exponent::Algebraic { .. } => Rational::zero(),
    }
}

/// Greatest common divisor over Q of the power-basis coordinates of an
/// indicial polynomial over a number field; its roots are the rational
/// roots of the original.
fn rational_part(chi: &IndicialPolynomial) -> QPoly {
    let n = chi.modulus.as_ref().and_then(|m| m.degree()).unwrap_or(1);
    (0..n)
        .map(|b| QPoly::new(chi.coeffs.iter().map(|c| c.coeff(b)).collect()))
        .fold(QPoly::zero(), |g, q| g.gcd(&q))
}

fn distinct_integer_roots(exponents: &[Exponent]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = exponents
        .iter()
        .filter_map(|e| match e {
            Exponent::Integer(n) => Some(n.clone()),
            _ => None,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Dimension of the Laurent-series solutions `sum_{n >= lo} y_n u^n`: the
/// coefficients between the smallest and largest integer exponent satisfy a
/// square triangular system, and every later coefficient is forced.
fn meromorphic_dimension<F: FieldElement>(parts: &[Vec<F>], lo: i64, hi: i64, zero: &F) -> usize {
    let width = (hi - lo + 1) as usize;
    let rows: Vec<Vec<F>> = (lo..=hi)
        .map(|big_n| {
            let mut row = vec![zero.clone(); width];
            for n in lo..=big_n {
                let j = (big_n - n) as usize;
                if let Some(p) = parts.get(j) {
                    row[(n - lo) as usize] = eval(p, &zero.embed_int(n));
                }
            }
            row
        })
        .collect();
    width - rank(rows, width)
}

pub(crate) fn invariant_dimension_bounded(
    df: &DiffForm,
    point: &SingularPoint,
    max_gap: u64,
) -> Result<(Vec<Exponent>, usize), AnalysisError> {
    let form = local_form(df, point)?;
    let exponents = exponents_of(&indicial_polynomial(df, point)?);
    let roots = distinct_integer_roots(&exponents);
    let (Some(lo), Some(hi)) = (roots.first(), roots.last()) else {
        return Ok((exponents, 0));
    };
    let gap = (hi - lo).to_u64().unwrap_or(u64::MAX);
    let too_large = || AnalysisError::ExponentGapTooLarge {
        point: point.to_string(),
        gap,
        limit: max_gap,
    };
    if gap > max_gap {
        return Err(too_large());
    }
    let (lo, hi) = (lo.to_i64().ok_or_else(too_large)?, hi.to_i64().ok_or_else(too_large)?);
    let dim = match form {
        LocalForm::Rational(parts) => meromorphic_dimension(&parts, lo, hi, &Rational::zero()),
        LocalForm::Algebraic(parts) => {
            let zero = parts[0][0].zero_like();
            meromorphic_dimension(&parts, lo, hi, &zero)
        }
    };
    Ok((exponents, dim))
}

/// Number of independent local solutions that are meromorphic, hence
/// single-valued, at the point.
pub fn invariant_dimension(df: &DiffForm, point: &SingularPoint) -> Result<usize, AnalysisError> {
    invariant_dimension_bounded(df, point, super::report::DEFAULT_MAX_EXPONENT_GAP).map(|(_, d)| d)
}
