//! Laurent polynomials in `x1..xk`, constant terms of their powers, and the
//! disjoint-variable sum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::sequence::PeriodSequence;

pub type Exponent = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("a Laurent polynomial needs at least one variable")]
    NoVariables,
    #[error("exponent vector has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("exponent overflow while multiplying")]
    ExponentOverflow,
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dims: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(dims: usize) -> Result<Self, LaurentError> {
        if dims == 0 {
            return Err(LaurentError::NoVariables);
        }
        Ok(Self {
            dims,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(dims: usize, c: Rational) -> Result<Self, LaurentError> {
        Self::new(dims, [(vec![0; dims], c)])
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are
    /// summed and zero coefficients dropped.
    pub fn new<I>(dims: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut out = Self::zero(dims)?;
        for (e, c) in terms {
            if e.len() != dims {
                return Err(LaurentError::WrongLength {
                    expected: dims,
                    found: e.len(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Sum of `x_i^{e}` monomials with coefficient one.
    pub fn from_monomials<I>(dims: usize, exps: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = Exponent>,
    {
        Self::new(dims, exps.into_iter().map(|e| (e, Rational::one())))
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.dims])
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.same_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.same_dims(other)?;
        self.mul_filtered(other, |_| true)
    }

    fn same_dims(&self, other: &Self) -> Result<(), LaurentError> {
        if self.dims == other.dims {
            Ok(())
        } else {
            Err(LaurentError::DimensionMismatch {
                left: self.dims,
                right: other.dims,
            })
        }
    }

    fn mul_filtered(
        &self,
        other: &Self,
        keep: impl Fn(&[i64]) -> bool,
    ) -> Result<Self, LaurentError> {
        let mut out = Self {
            dims: self.dims,
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect::<Option<Exponent>>()
                    .ok_or(LaurentError::ExponentOverflow)?;
                if keep(&e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Flip the sign of every exponent (`x_i -> 1/x_i`).
    pub fn inverted(&self) -> Self {
        Self {
            dims: self.dims,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|v| -v).collect(), c.clone()))
                .collect(),
        }
    }

    /// Permute variables: variable `i` becomes variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dims);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; self.dims];
                for (i, v) in e.iter().enumerate() {
                    out[perm[i]] = *v;
                }
                (out, c.clone())
            })
            .collect();
        Self {
            dims: self.dims,
            terms,
        }
    }
}

/// `f(x) + g(y)` in `dims_f + dims_g` variables.
pub fn disjoint_sum(f: &LaurentPolynomial, g: &LaurentPolynomial) -> LaurentPolynomial {
    let dims = f.dims + g.dims;
    let mut out = LaurentPolynomial {
        dims,
        terms: BTreeMap::new(),
    };
    for (e, c) in &f.terms {
        let mut v = e.clone();
        v.resize(dims, 0);
        out.add_term(v, c.clone());
    }
    for (e, c) in &g.terms {
        let mut v = vec![0; f.dims];
        v.extend_from_slice(e);
        out.add_term(v, c.clone());
    }
    out
}

/// Support function of the Newton polytope along each direction in
/// `{-1, 0, 1}^n`.
struct SupportBounds {
    directions: Vec<(Vec<i64>, i64)>,
}

impl SupportBounds {
    const MAX_DIMS: usize = 8;

    fn new(f: &LaurentPolynomial) -> Option<Self> {
        if f.dims > Self::MAX_DIMS || f.is_empty() {
            return None;
        }
        let n = f.dims;
        let total = 3usize.pow(n as u32);
        let mut directions = Vec::with_capacity(total - 1);
        for code in 1..total {
            let mut u = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                u.push((c % 3) as i64 - 1);
                c /= 3;
            }
            if u.iter().all(|x| *x == 0) {
                continue;
            }
            let h = f
                .terms
                .keys()
                .map(|e| dot(&u, e))
                .max()
                .expect("non-empty support");
            directions.push((u, h));
        }
        Some(Self { directions })
    }

    /// Could a monomial `a` still be cancelled to exponent zero by a
    /// product of at most `remaining` further factors?
    fn may_return(&self, a: &[i64], remaining: i64) -> bool {
        self.directions.iter().all(|(u, h)| {
            let need = -(dot(u, a) as i128);
            need <= 0.max(remaining as i128 * *h as i128)
        })
    }
}

fn dot(u: &[i64], e: &[i64]) -> i64 {
    u.iter().zip(e).map(|(a, b)| a * b).sum()
}

/// `[ct(f^0), ..., ct(f^count)]`, with Newton-polytope pruning of
/// monomials that cannot reach the origin in the remaining steps.
pub fn constant_term_powers(
    f: &LaurentPolynomial,
    count: usize,
) -> Result<PeriodSequence, LaurentError> {
    match SupportBounds::new(f) {
        Some(bounds) => powers_with(f, count, |e, remaining| bounds.may_return(e, remaining)),
        None => constant_term_powers_unpruned(f, count),
    }
}

/// Reference path keeping the full support of every power.
pub fn constant_term_powers_unpruned(
    f: &LaurentPolynomial,
    count: usize,
) -> Result<PeriodSequence, LaurentError> {
    powers_with(f, count, |_, _| true)
}

fn powers_with(
    f: &LaurentPolynomial,
    count: usize,
    keep: impl Fn(&[i64], i64) -> bool,
) -> Result<PeriodSequence, LaurentError> {
    let mut out = Vec::with_capacity(count + 1);
    let mut power = LaurentPolynomial::constant(f.dims, Rational::one())?;
    out.push(Rational::one());
    for d in 1..=count {
        let remaining = (count - d) as i64;
        power = power.mul_filtered(f, |e| keep(e, remaining))?;
        out.push(power.constant_term());
    }
    Ok(PeriodSequence::new(out))
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(|(i, v)| match v {
                    1 => format!("x{}", i + 1),
                    _ => format!("x{}^{}", i + 1, v),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({}; {})", self.dims, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct LaurentParseError {
    pub column: usize,
    pub message: String,
}

/// Parse `c * x1^a1 ... xk^ak` terms joined by `+`/`-`. Factors may be
/// separated by `*` or whitespace; `x`, `y`, `z`, `w` stand for `x1..x4`.
/// The number of variables is `dims` when given, else the largest index used
/// (at least one).
pub fn parse_laurent(text: &str, dims: Option<usize>) -> Result<LaurentPolynomial, LaurentParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let terms = p.polynomial()?;
    let used = terms
        .iter()
        .flat_map(|(e, _)| e.keys().copied())
        .max()
        .map_or(1, |i| i + 1);
    let dims = match dims {
        Some(d) if d < used => {
            return Err(LaurentParseError {
                column: 1,
                message: format!("variable x{used} exceeds the declared {d} variables"),
            })
        }
        Some(0) => {
            return Err(LaurentParseError {
                column: 1,
                message: "at least one variable is required".into(),
            })
        }
        Some(d) => d,
        None => used,
    };
    let dense = terms.into_iter().map(|(e, c)| {
        let mut v = vec![0; dims];
        for (i, x) in e {
            v[i] = x;
        }
        (v, c)
    });
    LaurentPolynomial::new(dims, dense).map_err(|e| LaurentParseError {
        column: 1,
        message: e.to_string(),
    })
}

impl FromStr for LaurentPolynomial {
    type Err = LaurentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_laurent(s, None)
    }
}

type SparseTerm = (BTreeMap<usize, i64>, Rational);

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, LaurentParseError> {
        Err(LaurentParseError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn polynomial(&mut self) -> Result<Vec<SparseTerm>, LaurentParseError> {
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            None => return self.err("empty polynomial"),
            _ => 1,
        };
        loop {
            let (e, c) = self.term()?;
            out.push((e, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(c) => return self.err(format!("unexpected '{c}'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<SparseTerm, LaurentParseError> {
        let mut exps: BTreeMap<usize, i64> = BTreeMap::new();
        let mut coeff = Rational::one();
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.number()?,
                Some(c) if c.is_ascii_alphabetic() => {
                    let (var, e) = self.power()?;
                    let slot = exps.entry(var).or_insert(0);
                    *slot = slot.checked_add(e).ok_or(LaurentParseError {
                        column: self.pos + 1,
                        message: "exponent overflow".into(),
                    })?;
                }
                _ if factors == 0 => return self.err("expected a coefficient or variable"),
                _ => return self.err("dangling '*'"),
            }
            factors += 1;
            match self.peek() {
                Some('*') => self.pos += 1,
                Some(c) if c.is_ascii_alphanumeric() => {}
                _ => break,
            }
        }
        exps.retain(|_, e| *e != 0);
        Ok((exps, coeff))
    }

    fn digits(&mut self) -> Result<BigInt, LaurentParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn number(&mut self) -> Result<Rational, LaurentParseError> {
        let num = self.digits()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn power(&mut self) -> Result<(usize, i64), LaurentParseError> {
        let c = self.chars[self.pos];
        self.pos += 1;
        let var = match c {
            'x' if self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                match s.parse::<usize>() {
                    Ok(i) if i >= 1 => i - 1,
                    _ => {
                        self.pos = start;
                        return self.err("variables are numbered from x1");
                    }
                }
            }
            'x' => 0,
            'y' => 1,
            'z' => 2,
            'w' => 3,
            other => {
                self.pos -= 1;
                return self.err(format!("unknown variable '{other}'"));
            }
        };
        if self.peek() != Some('^') {
            return Ok((var, 1));
        }
        self.pos += 1;
        let parens = self.peek() == Some('(');
        if parens {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mag = self.digits()?;
        if parens {
            if self.peek() != Some(')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        let value = if negative { -mag } else { mag };
        match i64::try_from(&value) {
            Ok(v) => Ok((var, v)),
            Err(_) => self.err("exponent out of range"),
        }
    }
}
