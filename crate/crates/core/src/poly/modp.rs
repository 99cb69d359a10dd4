//! Polynomials over a small prime field, coefficients as `u64` lowest first.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Clone, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn addm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    fn subm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        let g = BigInt::from(a).extended_gcd(&BigInt::from(self.p));
        debug_assert!(g.gcd == BigInt::from(1));
        g.x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn trim(&self, mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce(&self, f: &[BigInt]) -> Vec<u64> {
        let m = BigInt::from(self.p);
        self.trim(
            f.iter()
                .map(|c| c.mod_floor(&m).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        self.trim(
            (0..n)
                .map(|i| self.addm(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        self.trim(
            (0..n)
                .map(|i| self.subm(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.addm(out[i + j], self.mulm(x, y));
            }
        }
        self.trim(out)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        self.trim(a.iter().map(|&x| self.mulm(x, c)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(b[db]);
        let mut rem = a.to_vec();
        let mut quo = vec![0u64; a.len() - db];
        for k in (0..quo.len()).rev() {
            let c = self.mulm(rem[k + db], inv);
            if c == 0 {
                continue;
            }
            for (j, &d) in b.iter().enumerate() {
                rem[k + j] = self.subm(rem[k + j], self.mulm(c, d));
            }
            quo[k] = c;
        }
        rem.truncate(db);
        (self.trim(quo), self.trim(rem))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.div_rem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let inv = self.inv(*r0.last().expect("gcd of zero polynomials"));
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    pub fn derivative(&self, a: &[u64]) -> Vec<u64> {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mulm(c, i as u64 % self.p))
                .collect(),
        )
    }

    pub fn pow_mod(&self, base: &[u64], exp: &BigUint, modulus: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        self.rem(&acc, modulus)
    }

    /// Complete factorization of a monic squarefree polynomial into monic
    /// irreducibles (Cantor-Zassenhaus). `p` must be odd.
    pub fn factor_squarefree(&self, f: &[u64], rng: &mut SplitMix) -> Vec<Vec<u64>> {
        let x = vec![0u64, 1];
        let p_big = BigUint::from(self.p);
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let mut h = self.rem(&x, &rest);
        let mut d = 1usize;
        while rest.len() > 2 * d {
            h = self.pow_mod(&h, &p_big, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if g.len() > 1 {
                rest = self.div_rem(&rest, &g).0;
                h = self.rem(&h, &rest);
                self.split_equal_degree(&g, d, rng, &mut out);
            }
            d += 1;
        }
        if rest.len() > 1 {
            out.push(self.monic(&rest));
        }
        out
    }

    fn split_equal_degree(&self, g: &[u64], d: usize, rng: &mut SplitMix, out: &mut Vec<Vec<u64>>) {
        if g.len() - 1 == d {
            out.push(g.to_vec());
            return;
        }
        let exp = (num_traits::pow(BigUint::from(self.p), d) - 1u32) / 2u32;
        loop {
            let a: Vec<u64> = (0..g.len() - 1).map(|_| rng.next() % self.p).collect();
            let a = self.trim(a);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.pow_mod(&a, &exp, g), &[1]);
            let s = self.gcd(&b, g);
            if s.len() > 1 && s.len() < g.len() {
                let other = self.div_rem(g, &s).0;
                self.split_equal_degree(&s, d, rng, out);
                self.split_equal_degree(&self.monic(&other), d, rng, out);
                return;
            }
        }
    }
}

/// Small deterministic generator for the randomized splitting step.
pub(crate) struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

pub(crate) fn lift_coeff(c: u64) -> BigInt {
    BigInt::from(c)
}

