//! Mordell curves `E_a : y^2 = x^3 + a` over `Q` and over `F_p`.

mod fp;
mod mw;
mod search;
mod torsion;

pub use fp::{group_structure_fp, AbelianGroupFp, FpCurve, FpPoint};
pub use mw::{certify_nondivisibility, MwSubgroup};
pub use search::naive_point_search;
pub use torsion::{torsion_structure, TorsionStructure};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{big_mod, is_prime};
use crate::error::{invalid, Result};

/// A rational point in projective coordinates `(X : Y : Z)` with
/// `gcd(X, Y, Z) = 1` and `Z >= 0`. The identity is `(0 : 1 : 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    x: BigInt,
    y: BigInt,
    z: BigInt,
}

impl RationalPoint {
    pub fn identity() -> Self {
        Self { x: BigInt::zero(), y: BigInt::one(), z: BigInt::zero() }
    }

    /// Normalizes an arbitrary nonzero integer triple.
    pub fn from_projective(x: BigInt, y: BigInt, z: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return invalid("(0 : 0 : 0) is not a projective point");
        }
        let g = x.gcd(&y).gcd(&z);
        let (mut x, mut y, mut z) = (x / &g, y / &g, z / &g);
        let flip = z.is_negative() || (z.is_zero() && (y.is_negative() || (y.is_zero() && x.is_negative())));
        if flip {
            x = -x;
            y = -y;
            z = -z;
        }
        if z.is_zero() {
            // every point of a Mordell curve with Z = 0 is the identity
            return Ok(Self::identity());
        }
        Ok(Self { x, y, z })
    }

    pub fn from_affine(x: &BigRational, y: &BigRational) -> Self {
        let z = x.denom().lcm(y.denom());
        let xn = x.numer() * (&z / x.denom());
        let yn = y.numer() * (&z / y.denom());
        Self::from_projective(xn, yn, z).expect("z is nonzero")
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::from_projective(x.into(), y.into(), BigInt::one()).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero()
    }

    pub fn coords(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.x, &self.y, &self.z)
    }

    pub fn affine(&self) -> Option<(BigRational, BigRational)> {
        if self.is_identity() {
            return None;
        }
        Some((
            BigRational::new(self.x.clone(), self.z.clone()),
            BigRational::new(self.y.clone(), self.z.clone()),
        ))
    }

    pub fn neg(&self) -> Self {
        if self.is_identity() {
            return self.clone();
        }
        Self { x: self.x.clone(), y: -&self.y, z: self.z.clone() }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.x, self.y, self.z)
    }
}

/// `E_a : y^2 = x^3 + a` with `a != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MordellCurve {
    a: BigInt,
}

impl MordellCurve {
    pub fn new(a: impl Into<BigInt>) -> Result<Self> {
        let a = a.into();
        if a.is_zero() {
            return invalid("y^2 = x^3 is singular");
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        let (x, y, z) = p.coords();
        y * y * z == x * x * x + &self.a * z * z * z
    }

    fn check(&self, p: &RationalPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            invalid(format!("{p} is not on y^2 = x^3 + {}", self.a))
        }
    }

    /// Group law. Errors if either point lies on a different curve.
    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> Result<RationalPoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        let (Some((x1, y1)), Some((x2, y2))) = (p.affine(), q.affine()) else {
            return if p.is_identity() { q.clone() } else { p.clone() };
        };
        let slope = if x1 == x2 {
            if (&y1 + &y2).is_zero() {
                return RationalPoint::identity();
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            three * &x1 * &x1 / (two * &y1)
        } else {
            (&y2 - &y1) / (&x2 - &x1)
        };
        let x3 = &slope * &slope - &x1 - &x2;
        let y3 = slope * (&x1 - &x3) - y1;
        RationalPoint::from_affine(&x3, &y3)
    }

    pub fn double(&self, p: &RationalPoint) -> Result<RationalPoint> {
        self.add(p, p)
    }

    /// `n * P` for any integer `n`.
    pub fn mul(&self, p: &RationalPoint, n: i64) -> Result<RationalPoint> {
        self.check(p)?;
        let mut base = if n < 0 { p.neg() } else { p.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = RationalPoint::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Order of `P` if it is at most `max`, else `None`.
    pub fn small_order(&self, p: &RationalPoint, max: u32) -> Result<Option<u32>> {
        self.check(p)?;
        let mut q = p.clone();
        for n in 1..=max {
            if q.is_identity() {
                return Ok(Some(n));
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }

    /// Whether `p` is a prime of good reduction, i.e. `p` does not divide `6a`.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        p > 3 && is_prime(p) && big_mod(&self.a, p) != 0
    }

    pub fn reduce(&self, p: u64) -> Result<FpCurve> {
        if !self.has_good_reduction(p) {
            return invalid(format!("{p} is a bad prime for y^2 = x^3 + {}", self.a));
        }
        Ok(FpCurve::new(p, big_mod(&self.a, p)))
    }

    /// Reduction of a rational point modulo a good prime. Total: points with
    /// `p` in their denominators go to the identity.
    pub fn reduce_point(&self, pt: &RationalPoint, p: u64) -> Result<FpPoint> {
        let curve = self.reduce(p)?;
        Ok(curve.from_projective(big_mod(&pt.x, p), big_mod(&pt.y, p), big_mod(&pt.z, p)))
    }
}

impl fmt::Display for MordellCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}", self.a)
    }
}
