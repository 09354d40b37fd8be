//! Sparse polynomials in `Z[x, y, z, k]`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::big_mod;

/// Exponents of `x, y, z, k`.
pub type Monomial = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: i64, exps: Monomial) -> Self {
        let mut p = Self::zero();
        p.push(exps, BigInt::from(coeff));
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::term(c, [0; 4])
    }

    fn push(&mut self, exps: Monomial, coeff: BigInt) {
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// Total degree in `x, y, z` (ignoring `k`), if homogeneous.
    pub fn xyz_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m[0] + m[1] + m[2]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, vals: [&BigInt; 4]) -> BigInt {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(vals)
                    .fold(c.clone(), |acc, (&e, v)| acc * v.pow(e))
            })
            .sum()
    }

    pub fn eval_mod(&self, vals: [u64; 4], p: u64) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = big_mod(c, p) as u128;
            for (&e, &v) in m.iter().zip(vals.iter()) {
                t = t * crate::arith::pow_mod(v % p, e as u64, p) as u128 % p as u128;
            }
            acc = ((acc as u128 + t) % p as u128) as u64;
        }
        acc
    }

    /// Normal form modulo `x^6 + y^6 - k z^6`: every `x^6` is replaced by
    /// `k z^6 - y^6`, so the result has `x`-degree below 6.
    pub fn reduce_mod_sextic(&self) -> Self {
        let mut work = self.terms.clone();
        let mut out = Poly::zero();
        while let Some((m, c)) = work.pop_last() {
            if m[0] < 6 {
                out.push(m, c);
                continue;
            }
            let base = [m[0] - 6, m[1], m[2], m[3]];
            for (shift, sign) in [([0, 0, 6, 1], 1), ([0, 6, 0, 0], -1)] {
                let nm = [base[0], base[1] + shift[1], base[2] + shift[2], base[3] + shift[3]];
                let entry = work.entry(nm).or_insert_with(BigInt::zero);
                *entry += &c * sign;
                if entry.is_zero() {
                    work.remove(&nm);
                }
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(*m, c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]];
                out.push(m, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sextic_reduces_to_zero() {
        let f = &(&Poly::term(1, [6, 0, 0, 0]) + &Poly::term(1, [0, 6, 0, 0])) - &Poly::term(1, [0, 0, 6, 1]);
        assert!(f.reduce_mod_sextic().is_zero());
        let g = &f * &Poly::term(3, [7, 1, 2, 0]);
        assert!(g.reduce_mod_sextic().is_zero());
        assert!(!Poly::term(1, [5, 0, 0, 0]).reduce_mod_sextic().is_zero());
    }

    #[test]
    fn evaluation() {
        let p = &Poly::term(2, [1, 1, 0, 0]) - &Poly::term(1, [0, 0, 2, 1]);
        let v: Vec<BigInt> = [3, 4, 5, 6].iter().map(|&n| BigInt::from(n)).collect();
        assert_eq!(p.eval([&v[0], &v[1], &v[2], &v[3]]), BigInt::from(24 - 150));
        assert_eq!(p.eval_mod([3, 4, 5, 6], 7), (24 + 7 * 30 - 150) as u64 % 7);
        assert_eq!(p.pow(2).xyz_degree(), Some(4));
        assert_eq!((&p + &Poly::constant(1)).xyz_degree(), None);
        assert_eq!(Poly::term(1, [1, 2, 3, 9]).xyz_degree(), Some(6));
    }
}
