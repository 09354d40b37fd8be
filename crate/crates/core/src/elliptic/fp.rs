use std::collections::HashMap;

use num_bigint::BigInt;

use crate::arith::{gcd, pow_mod};
use crate::error::{Error, Result};

use super::MordellCurve;

/// A point of `E_a(F_p)`. Ordered with the identity first, then by `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpPoint {
    Infinity,
    Affine(u64, u64),
}

/// `y^2 = x^3 + a` over `F_p`, `p > 3` prime, `a != 0 mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpCurve {
    p: u64,
    a: u64,
}

impl FpCurve {
    pub(crate) fn new(p: u64, a: u64) -> Self {
        debug_assert!(p > 3 && a % p != 0);
        Self { p, a: a % p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    /// Point with projective coordinates already reduced modulo `p`.
    pub fn from_projective(&self, x: u64, y: u64, z: u64) -> FpPoint {
        if z % self.p == 0 {
            return FpPoint::Infinity;
        }
        let zi = self.inv(z % self.p);
        FpPoint::Affine(self.mul(x, zi), self.mul(y, zi))
    }

    pub fn contains(&self, pt: FpPoint) -> bool {
        match pt {
            FpPoint::Infinity => true,
            FpPoint::Affine(x, y) => {
                self.mul(y, y) == (self.mul(self.mul(x, x), x) + self.a) % self.p
            }
        }
    }

    pub fn neg(&self, pt: FpPoint) -> FpPoint {
        match pt {
            FpPoint::Affine(x, y) if y != 0 => FpPoint::Affine(x, self.p - y),
            other => other,
        }
    }

    pub fn add(&self, a: FpPoint, b: FpPoint) -> FpPoint {
        let p = self.p;
        let (x1, y1, x2, y2) = match (a, b) {
            (FpPoint::Infinity, q) | (q, FpPoint::Infinity) => return q,
            (FpPoint::Affine(x1, y1), FpPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return FpPoint::Infinity;
            }
            self.mul(3 * self.mul(x1, x1) % p, self.inv(2 * y1 % p))
        } else {
            self.mul((y2 + p - y1) % p, self.inv((x2 + p - x1) % p))
        };
        let x3 = (self.mul(slope, slope) + 2 * p - x1 - x2) % p;
        let y3 = (self.mul(slope, (x1 + p - x3) % p) + p - y1) % p;
        FpPoint::Affine(x3, y3)
    }

    pub fn sub(&self, a: FpPoint, b: FpPoint) -> FpPoint {
        self.add(a, self.neg(b))
    }

    pub fn scalar(&self, pt: FpPoint, mut n: u64) -> FpPoint {
        let mut acc = FpPoint::Infinity;
        let mut base = pt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            n >>= 1;
        }
        acc
    }

    /// Order of `pt`, given any multiple `n` of it (e.g. the group order).
    pub fn order_of(&self, pt: FpPoint, n: u64) -> u64 {
        debug_assert_eq!(self.scalar(pt, n), FpPoint::Infinity);
        let mut ord = n;
        for (q, _) in crate::arith::factor(n) {
            while ord % q == 0 && self.scalar(pt, ord / q) == FpPoint::Infinity {
                ord /= q;
            }
        }
        ord
    }

    /// All points, identity first, then ascending `(x, y)`.
    pub fn points(&self) -> Vec<FpPoint> {
        let p = self.p;
        let mut roots: Vec<Option<u64>> = vec![None; p as usize];
        for y in 0..=(p / 2) {
            roots[self.mul(y, y) as usize] = Some(y);
        }
        let mut pts = vec![FpPoint::Infinity];
        for x in 0..p {
            let rhs = (self.mul(self.mul(x, x), x) + self.a) % p;
            if let Some(y) = roots[rhs as usize] {
                if y == 0 {
                    pts.push(FpPoint::Affine(x, 0));
                } else {
                    let (lo, hi) = (y.min(p - y), y.max(p - y));
                    pts.push(FpPoint::Affine(x, lo));
                    pts.push(FpPoint::Affine(x, hi));
                }
            }
        }
        pts
    }
}

/// `E(F_p) = Z/d1 x Z/d2` with `d1 | d2`, together with a basis and the
/// coordinate map `point -> (c1, c2)` with `point = c1*g1 + c2*g2`.
#[derive(Debug, Clone)]
pub struct AbelianGroupFp {
    curve: FpCurve,
    d1: u64,
    d2: u64,
    g1: FpPoint,
    g2: FpPoint,
    coords: HashMap<FpPoint, (u32, u32)>,
}

impl AbelianGroupFp {
    pub fn curve(&self) -> &FpCurve {
        &self.curve
    }

    pub fn p(&self) -> u64 {
        self.curve.p
    }

    pub fn order(&self) -> u64 {
        self.d1 * self.d2
    }

    pub fn invariants(&self) -> (u64, u64) {
        (self.d1, self.d2)
    }

    pub fn generators(&self) -> (FpPoint, FpPoint) {
        (self.g1, self.g2)
    }

    /// Coordinates `(c1, c2)` with `0 <= c1 < d1`, `0 <= c2 < d2`.
    pub fn coordinates(&self, pt: FpPoint) -> Option<(u64, u64)> {
        self.coords.get(&pt).map(|&(a, b)| (a as u64, b as u64))
    }

    pub fn point_at(&self, c1: u64, c2: u64) -> FpPoint {
        let c = &self.curve;
        c.add(c.scalar(self.g1, c1 % self.d1), c.scalar(self.g2, c2 % self.d2))
    }

    /// Invariants of `E(F_p)/N E(F_p) = Z/gcd(N,d1) x Z/gcd(N,d2)`.
    pub fn quotient_invariants(&self, n: u64) -> (u64, u64) {
        (gcd(n, self.d1), gcd(n, self.d2))
    }

    /// Coordinates of `pt` in `E(F_p)/N E(F_p)`.
    pub fn quotient_coordinates(&self, pt: FpPoint, n: u64) -> Option<(u64, u64)> {
        let (q1, q2) = self.quotient_invariants(n);
        self.coordinates(pt).map(|(a, b)| (a % q1, b % q2))
    }
}

/// Computes the structure of `E_a(F_p)` by enumerating its points.
pub fn group_structure_fp(a: &BigInt, p: u64) -> Result<AbelianGroupFp> {
    let curve = MordellCurve::new(a.clone())?.reduce(p)?;
    structure_of(curve)
}

pub(crate) fn structure_of(curve: FpCurve) -> Result<AbelianGroupFp> {
    let pts = curve.points();
    let n = pts.len() as u64;

    let mut exponent = 1u64;
    for &pt in &pts[1..] {
        if exponent == n {
            break;
        }
        if curve.scalar(pt, exponent) != FpPoint::Infinity {
            exponent = crate::arith::lcm(exponent, curve.order_of(pt, n));
        }
    }
    let d2 = exponent;
    let d1 = n / d2;
    let d2_primes: Vec<u64> = crate::arith::factor(d2).into_iter().map(|(q, _)| q).collect();
    let g2 = pts
        .iter()
        .copied()
        .find(|&pt| d2_primes.iter().all(|&q| curve.scalar(pt, d2 / q) != FpPoint::Infinity))
        .ok_or_else(|| Error::Invariant(format!("no point of maximal order at p = {}", curve.p)))?;

    let g1 = if d1 == 1 {
        FpPoint::Infinity
    } else {
        let mut subgroup = HashMap::with_capacity(d2 as usize);
        let mut q = FpPoint::Infinity;
        for j in 0..d2 {
            subgroup.insert(q, j);
            q = curve.add(q, g2);
        }
        let mut found = None;
        for &pt in &pts[1..] {
            // order of pt in E / <g2>
            let mut q = pt;
            let mut t = 1u64;
            while !subgroup.contains_key(&q) && t <= d1 {
                q = curve.add(q, pt);
                t += 1;
            }
            if t == d1 {
                let j = subgroup[&q];
                if j % d1 != 0 {
                    return Err(Error::Invariant(format!("quotient lift failed at p = {}", curve.p)));
                }
                found = Some(curve.sub(pt, curve.scalar(g2, j / d1)));
                break;
            }
        }
        found.ok_or_else(|| Error::Invariant(format!("no complement basis at p = {}", curve.p)))?
    };

    let mut coords = HashMap::with_capacity(n as usize);
    let mut row = FpPoint::Infinity;
    for c1 in 0..d1 {
        let mut q = row;
        for c2 in 0..d2 {
            coords.insert(q, (c1 as u32, c2 as u32));
            q = curve.add(q, g2);
        }
        row = curve.add(row, g1);
    }
    if coords.len() as u64 != n {
        return Err(Error::Invariant(format!("basis does not span E(F_{})", curve.p)));
    }
    Ok(AbelianGroupFp { curve, d1, d2, g1, g2, coords })
}
