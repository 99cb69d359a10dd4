//! Factorization over the rationals: squarefree decomposition, then
//! Zassenhaus (modular factorization, Hensel lifting, recombination) on each
//! squarefree primitive part.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{lift_coeff, Fp, SplitMix};
use super::{int_poly_divides, QPoly};
use crate::arith::Rational;
use crate::field::{is_prime_u64, symmetric_mod};

/// `f = unit * prod(factor^mult)` with monic irreducible factors in
/// canonical order (degree, then coefficients).
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(QPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> QPoly {
        let mut acc = QPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }
}

fn canonical_key(p: &QPoly) -> (usize, Vec<Rational>) {
    (p.degree().unwrap_or(0), p.coeffs().to_vec())
}

/// Factor a nonzero polynomial over Q. Panics on the zero polynomial.
pub fn factor(f: &QPoly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.lc();
    let mut factors = Vec::new();
    if f.degree() == Some(0) {
        return Factorization { unit, factors };
    }
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        let (_, prim) = part.primitive_part();
        for g in factor_squarefree_primitive(&prim) {
            factors.push((QPoly::from_bigints(&g).monic(), mult));
        }
    }
    factors.sort_by_key(|a| canonical_key(&a.0));
    Factorization { unit, factors }
}

/// Rational roots with multiplicities, ascending.
pub fn rational_roots(f: &QPoly) -> Vec<(Rational, usize)> {
    let mut roots: Vec<(Rational, usize)> = factor(f)
        .factors
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, m)| (-g.coeff(0), m))
        .collect();
    roots.sort();
    roots
}

/// Yun's algorithm on a monic polynomial: pairs `(a_i, i)` with
/// `f = prod a_i^i`, each `a_i` squarefree and monic.
fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.exact_div(&b).expect("gcd divides");
    let mut d = &df.exact_div(&b).expect("gcd divides") - &c.derivative();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        c = c.exact_div(&a).expect("gcd divides");
        d = &d.exact_div(&a).expect("gcd divides") - &c.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Irreducible factors of a squarefree primitive integer polynomial with
/// positive leading coefficient. Output factors are primitive with positive
/// leading coefficients.
pub fn factor_squarefree_primitive(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // pull out x^k factors before going modular (only possible for k = 1 here)
    if f[0].is_zero() {
        let mut rest = factor_squarefree_primitive(&f[1..]);
        rest.push(vec![BigInt::zero(), BigInt::one()]);
        return rest;
    }
    let lc = f[n].clone();
    let (p, modular) = choose_prime(f, &lc);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    // coefficient bound for lc * (any factor) and the matching lifting depth
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let bound = lc.abs() * (BigInt::one() << n) * (norm2_sq.sqrt() + 1u32);
    let target = bound * 2u32 + 1u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut depth = 1u32;
    while modulus <= target {
        modulus *= &pb;
        depth += 1;
    }
    let lifted = hensel_lift(f, &modular, p, depth);
    recombine(f, lifted, &modulus)
}

fn choose_prime(f: &[BigInt], lc: &BigInt) -> (u64, Vec<Vec<u64>>) {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut rng = SplitMix::new(0x5EED);
    let mut candidate = 3u64;
    while tried < 6 {
        candidate += 2;
        if !is_prime_u64(candidate) || (lc % candidate).is_zero() {
            continue;
        }
        let fp = Fp { p: candidate };
        let fbar = fp.reduce(f);
        let g = fp.gcd(&fbar, &fp.derivative(&fbar));
        if g.len() != 1 {
            continue;
        }
        tried += 1;
        let factors = fp.factor_squarefree(&fp.monic(&fbar), &mut rng);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((candidate, factors));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    best.expect("some prime keeps a squarefree polynomial squarefree")
}

fn to_ints(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| lift_coeff(c)).collect()
}

fn mul_ints(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lift `f = lc * prod g_i (mod p)` with monic `g_i` to monic factors modulo
/// `p^depth`.
fn hensel_lift(f: &[BigInt], factors: &[Vec<u64>], p: u64, depth: u32) -> Vec<Vec<BigInt>> {
    let fp = Fp { p };
    let modulus = num_traits::pow(BigInt::from(p), depth as usize);
    let lc = f.last().unwrap().clone();
    let mut out = Vec::with_capacity(factors.len());
    let mut current = f.to_vec();
    let mut current_lc = lc;
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            // remaining monic factor
            let inv = current_lc
                .extended_gcd(&modulus)
                .x
                .mod_floor(&modulus);
            out.push(reduce_mod(
                &current.iter().map(|c| c * &inv).collect::<Vec<_>>(),
                &modulus,
            ));
            break;
        }
        let rest = factors[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, h| fp.mul(&acc, h));
        let g0: Vec<BigInt> = to_ints(&fp.scale(g, fp.reduce(&[current_lc.clone()])[0]));
        let (big_g, big_h) = lift_pair(&current, &g0, &to_ints(&rest), p, depth);
        let inv = current_lc.extended_gcd(&modulus).x.mod_floor(&modulus);
        out.push(reduce_mod(
            &big_g.iter().map(|c| c * &inv).collect::<Vec<_>>(),
            &modulus,
        ));
        current = big_h;
        current_lc = BigInt::one();
    }
    out
}

/// Linear Hensel lifting of `f = g * h (mod p)` with `h` monic to
/// `f = G * H (mod p^depth)`, `H` monic.
fn lift_pair(
    f: &[BigInt],
    g0: &[BigInt],
    h0: &[BigInt],
    p: u64,
    depth: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let fp = Fp { p };
    let gbar = fp.reduce(g0);
    let hbar = fp.reduce(h0);
    let (one, s, t) = fp.ext_gcd(&gbar, &hbar);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g = g0.to_vec();
    let mut h = h0.to_vec();
    let mut pk = pb.clone();
    for _ in 1..depth {
        let gh = mul_ints(&g, &h);
        let diff: Vec<BigInt> = (0..f.len().max(gh.len()))
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: Vec<BigInt> = diff
            .iter()
            .map(|c| {
                debug_assert!((c % &pk).is_zero());
                c / &pk
            })
            .collect();
        let ebar = fp.reduce(&e);
        let (q, sigma) = fp.div_rem(&fp.mul(&s, &ebar), &hbar);
        let tau = fp.add(&fp.mul(&t, &ebar), &fp.mul(&q, &gbar));
        let next = &pk * &pb;
        for (i, c) in tau.iter().enumerate() {
            if i >= g.len() {
                g.push(BigInt::zero());
            }
            g[i] += &pk * c;
        }
        for (i, c) in sigma.iter().enumerate() {
            h[i] += &pk * c;
        }
        g = reduce_mod(&g, &next);
        h = reduce_mod(&h, &next);
        pk = next;
    }
    (g, h)
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut v = a.to_vec();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let g = if v.last().is_some_and(|c| c.is_negative()) { -g } else { g };
    v.iter().map(|c| c / &g).collect()
}

fn recombine(f: &[BigInt], mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut result = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1usize;
    'outer: while 2 * size <= lifted.len() {
        let lc = rest.last().unwrap().clone();
        for subset in combinations(lifted.len(), size) {
            let prod = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                reduce_mod(&mul_ints(&acc, &lifted[i]), modulus)
            });
            let candidate: Vec<BigInt> = prod.iter().map(|c| symmetric_mod(c, modulus)).collect();
            let candidate = primitive(&candidate);
            if candidate.len() < 2 {
                continue;
            }
            if let Some(q) = int_poly_divides(&rest, &candidate) {
                result.push(candidate);
                rest = q;
                let mut k = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
                continue 'outer;
            }
        }
        size += 1;
    }
    result.push(primitive(&rest));
    result
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rational};

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn p1_symbol_factors() {
        // t(4t^2 - 1) = 4 t (t - 1/2)(t + 1/2)
        let f = poly(&[0, -1, 0, 4]);
        let fact = factor(&f);
        assert_eq!(fact.unit, int(4));
        let roots = rational_roots(&f);
        assert_eq!(
            roots,
            vec![
                (rational(-1, 2).unwrap(), 1),
                (int(0), 1),
                (rational(1, 2).unwrap(), 1)
            ]
        );
        assert_eq!(fact.expand(), f);
    }

    #[test]
    fn irreducible_quadratic_and_repeated_factors() {
        let q = poly(&[1, 0, 1]);
        let l = poly(&[-3, 2]);
        let f = &(&(&q * &q) * &l) * &poly(&[0, 1]);
        let fact = factor(&f);
        assert_eq!(fact.expand(), f);
        let degrees: Vec<(usize, usize)> = fact
            .factors
            .iter()
            .map(|(g, m)| (g.degree().unwrap(), *m))
            .collect();
        assert_eq!(degrees, vec![(1, 1), (1, 1), (2, 2)]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits mod every prime
        let f = poly(&[1, 0, -10, 0, 1]);
        let fact = factor(&f);
        assert_eq!(fact.factors.len(), 1);
        assert_eq!(fact.factors[0].0, f);
        // (x^4 - 10x^2 + 1)(x^2 - 2)(3x + 5)
        let g = &(&f * &poly(&[-2, 0, 1])) * &poly(&[5, 3]);
        let fact = factor(&g);
        assert_eq!(fact.expand(), g);
        assert_eq!(fact.factors.len(), 3);
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 = product of cyclotomic polynomials Phi_d, d | 12
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let f = poly(&c);
        let fact = factor(&f);
        assert_eq!(fact.expand(), f);
        let mut degrees: Vec<usize> = fact.factors.iter().map(|(g, _)| g.degree().unwrap()).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2, 2, 2, 4]);
    }

    #[test]
    fn large_coefficients() {
        let a = poly(&[123456789, -987654321, 1]);
        let b = poly(&[-31, 0, 0, 17]);
        let f = &a * &b;
        let fact = factor(&f);
        assert_eq!(fact.expand(), f);
        assert_eq!(fact.factors.len(), 2);
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
    }
}
