//! Rational reconstruction by the half-extended Euclidean algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::arith::Rational;

/// Find `p/q` with `p ≡ a q (mod m)`, `|p|, q <= floor(sqrt(m/2))`,
/// `q > 0` and `gcd(p, q) = gcd(q, m) = 1`. Requires `0 <= a < m`, `m >= 2`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    reconstruct_bounded(a.clone(), m.clone(), bound).map(|(p, q)| Rational::new(p, q))
}

/// The reconstruction kernel over any integer type; `(p, q)` is returned in
/// lowest terms with `q > 0`.
pub fn reconstruct_bounded<T>(a: T, m: T, bound: T) -> Option<(T, T)>
where
    T: Integer + Signed + Clone,
{
    if m <= T::one() || a.is_negative() || a >= m {
        return None;
    }
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (T::zero(), T::one());
    while r1 > bound {
        let q = r0.div_floor(&r1);
        let r2 = r0 - q.clone() * r1.clone();
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = t0 - q * t1.clone();
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (p, q) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if !p.gcd(&q).is_one() || !q.gcd(&m).is_one() {
        return None;
    }
    Some((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn small_cases() {
        let r = |a: i64, m: i64| rational_reconstruction(&BigInt::from(a), &BigInt::from(m));
        assert_eq!(r(0, 101), Some(rational(0, 1).unwrap()));
        assert_eq!(r(51, 101), Some(rational(1, 2).unwrap()));
        // bound 2: q = 1 needs p ≡ 7, q = 2 needs p ≡ 3; neither is small
        assert_eq!(r(7, 11), None);
        assert_eq!(r(6, 11), Some(rational(1, 2).unwrap()));
        assert_eq!(r(11, 11), None);
    }

    #[test]
    fn large_modulus() {
        let m = BigInt::from(4294967291u64) * BigInt::from(4294967279u64);
        let target = rational(-123456789, 987654).unwrap();
        let den = target.denom().clone();
        let egcd = den.extended_gcd(&m);
        let den_inv = egcd.x.mod_floor(&m);
        let a = (target.numer() * den_inv).mod_floor(&m);
        assert_eq!(rational_reconstruction(&a, &m), Some(target));
    }
}
