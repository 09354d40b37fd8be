use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::gcd;

use super::RationalPoint;

/// Rational points `(u/v^2, w/v^3)` on `y^2 = x^3 + a` with `|u| <= bound^2`
/// and `1 <= v <= bound`, together with the identity. Sorted and deduplicated.
pub fn naive_point_search(a: &BigInt, bound: u64) -> Vec<RationalPoint> {
    let mut out = vec![RationalPoint::identity()];
    let small_a = i128::try_from(a).ok();
    let ubound = (bound * bound) as i128;
    for v in 1..=bound {
        let v2 = (v * v) as i128;
        let v6 = v2.checked_pow(3);
        for u in -ubound..=ubound {
            if gcd(u.unsigned_abs() as u64, v) != 1 {
                continue;
            }
            let rhs = match (small_a, v6) {
                (Some(a), Some(v6)) => u
                    .checked_pow(3)
                    .zip(a.checked_mul(v6))
                    .and_then(|(c, d)| c.checked_add(d))
                    .map(BigInt::from),
                _ => None,
            }
            .unwrap_or_else(|| BigInt::from(u).pow(3) + a * BigInt::from(v2).pow(3));
            if rhs.is_negative() {
                continue;
            }
            let w = rhs.sqrt();
            if &w * &w != rhs {
                continue;
            }
            let (x, z) = (BigInt::from(u) * v, BigInt::from(v).pow(3));
            out.push(RationalPoint::from_projective(x.clone(), w.clone(), z.clone()).unwrap());
            if w.is_positive() {
                out.push(RationalPoint::from_projective(x, -w, z).unwrap());
            }
        }
    }
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|p| p.is_identity() || p.coords().2 >= &BigInt::one()));
    out
}
