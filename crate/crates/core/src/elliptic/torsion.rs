use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::exact_root;

use super::RationalPoint;

/// The rational torsion subgroup of a Mordell curve: cyclic of order
/// 1, 2, 3 or 6, with a chosen generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionStructure {
    order: u32,
    generator: RationalPoint,
}

impl TorsionStructure {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn generator(&self) -> &RationalPoint {
        &self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// Torsion of `y^2 = x^3 + a` for sixth-power-free or arbitrary nonzero `a`,
/// read off from the shape of `a`.
pub fn torsion_structure(a: &BigInt) -> TorsionStructure {
    let sq = |n: &BigInt| n * n;
    let cube = |n: &BigInt| n * n * n;
    let of = |order: u32, x: BigInt, y: BigInt| TorsionStructure {
        order,
        generator: RationalPoint::from_projective(x, y, BigInt::one()).unwrap(),
    };
    if a.is_positive() {
        if let Some(c) = exact_root(a, 6) {
            return of(6, 2 * sq(&c), 3 * cube(&c));
        }
        if let Some(b) = exact_root(a, 2) {
            return of(3, 0.into(), b);
        }
    } else if (-a) % 432 == BigInt::from(0) {
        if let Some(c) = exact_root(&(-a / 432), 6) {
            return of(3, 12 * sq(&c), 36 * cube(&c));
        }
    }
    if let Some(c) = exact_root(a, 3) {
        return of(2, -c, 0.into());
    }
    TorsionStructure { order: 1, generator: RationalPoint::identity() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::isqrt;
    use crate::elliptic::MordellCurve;

    /// Torsion by brute force: integral points with `y = 0` or `y^2 | 27 a^2`
    /// (a Nagell-Lutz style bound), keeping those of finite order.
    fn torsion_by_search(a: i64) -> Vec<RationalPoint> {
        let e = MordellCurve::new(a).unwrap();
        let bound = 27 * a * a;
        let mut ys = vec![0i64];
        for y in 1..=isqrt(bound as u64) as i64 {
            if bound % (y * y) == 0 {
                ys.push(y);
                ys.push(-y);
            }
        }
        let mut out = vec![RationalPoint::identity()];
        for y in ys {
            let target = y * y - a;
            let x = (target as f64).cbrt().round() as i64;
            for x in [x - 1, x, x + 1] {
                if x * x * x == target {
                    let pt = RationalPoint::from_ints(x, y);
                    if e.small_order(&pt, 12).unwrap().is_some() {
                        out.push(pt);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn shapes() {
        assert_eq!(torsion_structure(&1.into()).order(), 6);
        assert_eq!(torsion_structure(&64.into()).order(), 6);
        assert_eq!(torsion_structure(&4.into()).order(), 3);
        assert_eq!(torsion_structure(&(-432).into()).order(), 3);
        assert_eq!(torsion_structure(&8.into()).order(), 2);
        assert_eq!(torsion_structure(&(-1).into()).order(), 2);
        assert_eq!(torsion_structure(&2.into()).order(), 1);
        assert_eq!(torsion_structure(&555304.into()).order(), 1);
        let big = BigInt::from(138826i64).pow(3);
        let t = torsion_structure(&big);
        assert_eq!(t.order(), 2);
        assert_eq!(t.generator(), &RationalPoint::from_ints(-138826, 0));
    }

    #[test]
    fn matches_brute_force() {
        for a in (-200i64..=200).filter(|&a| a != 0) {
            let t = torsion_structure(&a.into());
            let found = torsion_by_search(a);
            assert_eq!(t.order() as usize, found.len(), "a = {a}");
            let e = MordellCurve::new(a).unwrap();
            assert_eq!(e.small_order(t.generator(), 12).unwrap(), Some(t.order()), "a = {a}");
        }
    }
}
