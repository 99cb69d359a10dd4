use num_integer::Integer;
use qperiod::fit::{rational_reconstruction, reconstruct_bounded};

#[derive(Clone, Debug, PartialEq)]
enum Found {
    None,
    One(i64, i64),
    Many(Vec<(i64, i64)>),
}

fn inverse_mod(q: i64, m: i64) -> i64 {
    let g = q.extended_gcd(&m);
    assert_eq!(g.gcd, 1);
    g.x.mod_floor(&m)
}

/// Every reduced `p/q` within the bound, indexed by its residue.
fn brute_force(m: i64) -> Vec<Found> {
    let bound = (m / 2).sqrt_floor();
    let mut out = vec![Found::None; m as usize];
    for q in 1..=bound {
        if q.gcd(&m) != 1 {
            continue;
        }
        let qi = inverse_mod(q, m);
        for p in -bound..=bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            let a = (p * qi).mod_floor(&m) as usize;
            out[a] = match std::mem::replace(&mut out[a], Found::None) {
                Found::None => Found::One(p, q),
                Found::One(p0, q0) => Found::Many(vec![(p0, q0), (p, q)]),
                Found::Many(mut v) => {
                    v.push((p, q));
                    Found::Many(v)
                }
            };
        }
    }
    out
}

trait SqrtFloor {
    fn sqrt_floor(self) -> Self;
}

impl SqrtFloor for i64 {
    fn sqrt_floor(self) -> i64 {
        num_integer::Roots::sqrt(&self)
    }
}

#[test]
fn exhaustive_against_brute_force() {
    let mut ambiguous = Vec::new();
    for m in 2..=10_000i64 {
        let bound = (m / 2).sqrt_floor();
        let expected = brute_force(m);
        for (a, want) in expected.iter().enumerate() {
            let got = reconstruct_bounded(a as i64, m, bound);
            match want {
                Found::None => assert_eq!(got, None, "a = {a}, m = {m}"),
                Found::One(p, q) => assert_eq!(got, Some((*p, *q)), "a = {a}, m = {m}"),
                Found::Many(all) => {
                    ambiguous.push((m, a));
                    assert!(all.contains(&got.unwrap()), "a = {a}, m = {m}");
                }
            }
        }
    }
    // the bound is tight only for m = 2, where 1 ≡ -1
    assert_eq!(ambiguous, vec![(2, 1)]);
}

#[test]
fn bigint_entry_point_agrees() {
    for m in [2i64, 3, 11, 101, 997, 1024] {
        for a in 0..m {
            let small = reconstruct_bounded(a, m, (m / 2).sqrt_floor());
            let big = rational_reconstruction(&a.into(), &m.into());
            assert_eq!(
                small.map(|(p, q)| num_rational::BigRational::new(p.into(), q.into())),
                big
            );
        }
    }
}
