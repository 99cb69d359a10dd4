//! Dense univariate polynomials over the rationals, plus generic helpers for
//! coefficient vectors over any [`FieldElement`].

mod factor;
mod modp;

pub use factor::{factor, factor_squarefree_primitive, rational_roots, Factorization};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, lcm_all, Rational};


/// Polynomial with rational coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        QPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        QPoly::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        QPoly::new(
            coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Euclidean division. Panics when dividing by zero.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let inv_lc = divisor.lc().recip();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quo), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(s0.scale(&r0.lc().recip()).rem(m))
    }

    /// `f(x + shift)`.
    pub fn shift(&self, shift: &Rational) -> QPoly {
        QPoly::new(generic::taylor_shift(&self.coeffs, shift))
    }

    /// Multiplicity of `factor` in `self`; `self` must be nonzero and
    /// `factor` non-constant.
    pub fn valuation(&self, factor: &QPoly) -> usize {
        assert!(!self.is_zero(), "valuation of the zero polynomial");
        let mut count = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(factor) {
            cur = q;
            count += 1;
        }
        count
    }

    /// `(content, primitive integer polynomial)` with `self = content * prim`
    /// and a positive leading coefficient in `prim`.
    pub fn primitive_part(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let den = lcm_all(self.coeffs.iter().map(|c| c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = gcd_all(&ints);
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, den), prim)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Embed the coefficients into a field carrying a context.
    pub fn embed<F: crate::field::FieldElement>(&self, template: &F) -> Vec<F> {
        self.coeffs
            .iter()
            .map(|c| template.embed(c).expect("rational embeds"))
            .collect()
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, var }
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

struct PolyDisplay<'a> {
    poly: &'a QPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Integer polynomial helpers used by factorization.
pub(crate) fn int_poly_divides(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    // exact division f / g over Z
    let dg = g.len() - 1;
    if f.len() < g.len() {
        return None;
    }
    let lg = &g[dg];
    let mut rem = f.to_vec();
    let mut quo = vec![BigInt::zero(); f.len() - dg];
    for k in (0..quo.len()).rev() {
        let (c, r) = rem[k + dg].div_rem(lg);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, d) in g.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quo[k] = c;
    }
    rem.iter().all(|c| c.is_zero()).then_some(quo)
}

/// Coefficient-vector polynomials over an arbitrary field (lowest degree
/// first). Callers keep vectors trimmed where it matters.
pub mod generic {
    use crate::field::FieldElement;

    pub fn trim<F: FieldElement>(coeffs: &mut Vec<F>) {
        while coeffs.last().is_some_and(|c| c.is_nil()) {
            coeffs.pop();
        }
    }

    pub fn eval<F: FieldElement>(coeffs: &[F], x: &F) -> F {
        let zero = x.zero_like();
        coeffs
            .iter()
            .rev()
            .fold(zero, |acc, c| acc.times(x).plus(c))
    }

    /// Coefficients of `f(u + at)` as a polynomial in `u`.
    pub fn taylor_shift<F: FieldElement>(coeffs: &[F], at: &F) -> Vec<F> {
        let mut out: Vec<F> = Vec::with_capacity(coeffs.len());
        for c in coeffs.iter().rev() {
            // out <- out * (u + at) + c
            let mut next = vec![at.zero_like(); out.len() + 1];
            for (i, o) in out.iter().enumerate() {
                next[i + 1] = next[i + 1].plus(o);
                next[i] = next[i].plus(&o.times(at));
            }
            next[0] = next[0].plus(c);
            out = next;
        }
        trim(&mut out);
        out
    }

    pub fn mul<F: FieldElement>(a: &[F], b: &[F]) -> Vec<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let zero = a[0].zero_like();
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_nil() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].plus(&x.times(y));
            }
        }
        trim(&mut out);
        out
    }

    /// Synthetic division by `(x - root)`; returns the quotient when exact.
    pub fn divide_linear<F: FieldElement>(coeffs: &[F], root: &F) -> Option<Vec<F>> {
        if coeffs.is_empty() {
            return None;
        }
        let n = coeffs.len();
        let mut quo = vec![root.zero_like(); n.saturating_sub(1)];
        let mut carry = root.zero_like();
        for i in (0..n).rev() {
            let v = coeffs[i].plus(&carry.times(root));
            if i == 0 {
                return v.is_nil().then_some(quo);
            }
            quo[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};

    #[test]
    fn division_and_gcd() {
        // (x - 1)(x + 2) and (x - 1)(x - 3)
        let a = QPoly::from_ints(&[-2, 1, 1]);
        let b = QPoly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), QPoly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&QPoly::from_ints(&[-1, 1]));
        assert_eq!(q, QPoly::from_ints(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = QPoly::from_ints(&[0, -1, 0, 4]);
        let s = rational(1, 2).unwrap();
        let g = f.shift(&s);
        for k in -3..4 {
            let u = int(k);
            assert_eq!(g.eval(&u), f.eval(&(&u + &s)));
        }
        assert!(g.coeff(0).is_zero());
        assert_eq!(g.coeff(1), int(2));
    }

    #[test]
    fn inverse_modulo() {
        let m = QPoly::from_ints(&[1, 0, 1]);
        let a = QPoly::from_ints(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m), QPoly::one());
    }

    #[test]
    fn valuation_and_primitive() {
        let t = QPoly::x();
        let f = &(&t * &t) * &QPoly::from_ints(&[-1, 0, 4]);
        assert_eq!(f.valuation(&t), 2);
        let half = QPoly::new(vec![rational(1, 2).unwrap(), rational(-3, 4).unwrap()]);
        let (c, p) = half.primitive_part();
        assert_eq!(c, rational(-1, 4).unwrap());
        assert_eq!(p, vec![BigInt::from(-2), BigInt::from(3)]);
    }

    #[test]
    fn display() {
        let f = QPoly::from_ints(&[0, -1, 0, 4]);
        assert_eq!(f.display_var("t").to_string(), "4*t^3 - t");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn generic_linear_division() {
        let f: Vec<Rational> = QPoly::from_ints(&[-6, 11, -6, 1]).coeffs().to_vec();
        let q = generic::divide_linear(&f, &int(1)).unwrap();
        assert_eq!(QPoly::new(q), QPoly::from_ints(&[6, -5, 1]));
        assert!(generic::divide_linear(&f, &int(4)).is_none());
    }
}
