//! Constructing integers `k = (a/m)^6 + (b/m)^6` with `gcd(ab, m) = 1`.
//!
//! Such a pair needs `(b/a)^6 = -1 mod m^6`, so `b/a` has order 4 or 12
//! modulo `m^6`. For each such residue `q`, short vectors of the lattice
//! `{(x, y) : y = q x mod m^6}` give small numerators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, inv_mod, lagrange_reduce, mul_mod, pow_mod, Lattice2D};
use crate::error::{invalid, Result};
use crate::local::SumsetCache;

/// `k = (a^6 + b^6) / m^6` with `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Representation {
    pub k: BigInt,
    pub a: u128,
    pub b: u128,
    pub m: u64,
}

impl Representation {
    pub fn verify(&self) -> bool {
        verify_representation(&self.k, &self.a.into(), &self.b.into(), &self.m.into())
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.k, self.a, self.b, self.m)
    }
}

/// Exact check of `a^6 + b^6 = k m^6`.
pub fn verify_representation(k: &BigInt, a: &BigInt, b: &BigInt, m: &BigInt) -> bool {
    a.pow(6) + b.pow(6) == k * m.pow(6)
}

/// All `q mod p^e` with `q^6 = -1`, by search mod `p` and Hensel lifting.
fn sixth_roots_of_minus_one_prime_power(p: u64, e: u32) -> Vec<u64> {
    let modulus = p.pow(e);
    let mut roots = Vec::new();
    for r in 1..p {
        if (pow_mod(r, 6, p) + 1) % p != 0 {
            continue;
        }
        // Newton step q <- q - (q^6 + 1) / (6 q^5), exact since 6 q^5 is a unit
        let mut q = r;
        let mut cur = p;
        while cur < modulus {
            cur = (cur as u128 * cur as u128).min(modulus as u128) as u64;
            let f = (pow_mod(q, 6, cur) + 1) % cur;
            let df = mul_mod(6, pow_mod(q, 5, cur), cur);
            let step = mul_mod(f, inv_mod(df, cur).expect("unit derivative"), cur);
            q = (q + cur - step) % cur;
        }
        roots.push(q % modulus);
    }
    roots
}

/// All `q mod m^6` with `q^6 = -1 (mod m^6)`.
pub fn sixth_roots_of_minus_one(m: u64) -> Result<Vec<u64>> {
    validate_modulus(m)?;
    let modulus = m.pow(6);
    let mut acc: Vec<(u64, u64)> = vec![(0, 1)];
    for (p, e) in factor(m) {
        let pe = p.pow(6 * e);
        let roots = sixth_roots_of_minus_one_prime_power(p, 6 * e);
        let mut next = Vec::with_capacity(acc.len() * roots.len());
        for &(r, n) in &acc {
            for &s in &roots {
                next.push((crt(r, n, s, pe), n * pe));
            }
        }
        acc = next;
    }
    let mut out: Vec<u64> = acc.into_iter().map(|(r, _)| r % modulus).collect();
    out.sort_unstable();
    Ok(out)
}

fn crt(r: u64, n: u64, s: u64, m: u64) -> u64 {
    // x = r + n * ((s - r) / n mod m)
    let inv = inv_mod(n % m, m).expect("coprime moduli");
    let diff = (s + m - r % m) % m;
    let t = mul_mod(diff, inv, m);
    ((r as u128 + n as u128 * t as u128) % (n as u128 * m as u128)) as u64
}

fn validate_modulus(m: u64) -> Result<()> {
    if m == 0 {
        return invalid("m must be positive");
    }
    if m > 1625 {
        return invalid(format!("m = {m} is too large: m^6 must fit in 64 bits"));
    }
    if let Some((p, _)) = factor(m).into_iter().find(|&(p, _)| p % 4 != 1) {
        return invalid(format!("m = {m} has the prime factor {p}, which is not 1 mod 4"));
    }
    Ok(())
}

/// Representations with denominator exactly `m`, from short lattice vectors.
/// `m = 1` yields nothing: those would be integer sums.
pub fn find_representations(m: u64) -> Result<Vec<Representation>> {
    validate_modulus(m)?;
    if m == 1 {
        return Ok(Vec::new());
    }
    let modulus = m.pow(6);
    let m6 = BigInt::from(modulus);
    let mut out = Vec::new();
    for q in sixth_roots_of_minus_one(m)? {
        let (u, v) = lagrange_reduce(&Lattice2D::new(modulus, q)?);
        for c1 in -2i128..=2 {
            for c2 in -2i128..=2 {
                let (x, y) = (c1 * u.0 + c2 * v.0, c1 * u.1 + c2 * v.1);
                let (a, b) = (x.unsigned_abs(), y.unsigned_abs());
                if a == 0 || b == 0 || gcd_u128(a, m as u128) != 1 || gcd_u128(b, m as u128) != 1 {
                    continue;
                }
                let sum = BigInt::from(a).pow(6) + BigInt::from(b).pow(6);
                let (k, rem) = sum.div_rem(&m6);
                debug_assert!(rem.is_zero());
                out.push(Representation { k, a: a.min(b), b: a.max(b), m });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

/// `((2^(n-1) - 1) / 2, (2^(n-1) + 1) / 2)` as numerators over 2, and the
/// integer `x^n + y^n`.
pub fn odd_power_rep(n: u32) -> Result<(u64, u64, BigInt)> {
    if n < 3 || n % 2 == 0 || n > 60 {
        return invalid(format!("exponent must be odd and between 3 and 59, got {n}"));
    }
    let half = 1u64 << (n - 1);
    let (x, y) = (half - 1, half + 1);
    let sum = BigInt::from(x).pow(n) + BigInt::from(y).pow(n);
    let (k, rem) = sum.div_rem(&(BigInt::one() << n as usize));
    if !rem.is_zero() {
        return invalid("odd-power sum is not an integer");
    }
    Ok((x, y, k))
}

/// `13^6 (f_1^6 + f_2^6)` for `f_1 = (2863 + 10764 t)/13`, `f_2 = (1207 + 26455 t)/13`,
/// as coefficients of `t^0, ..., t^6`.
pub fn family_numerator() -> [BigInt; 7] {
    let lin = |c0: i64, c1: i64| [BigInt::from(c0), BigInt::from(c1)];
    let pow6 = |[c0, c1]: [BigInt; 2]| {
        let mut coeffs = vec![BigInt::one()];
        for _ in 0..6 {
            let mut next = vec![BigInt::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c * &c0;
                next[i + 1] += c * &c1;
            }
            coeffs = next;
        }
        coeffs
    };
    let a = pow6(lin(2863, 10764));
    let b = pow6(lin(1207, 26455));
    std::array::from_fn(|i| &a[i] + &b[i])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    /// `f_1^6 + f_2^6` as a polynomial in `t`.
    pub polynomial: [BigInt; 7],
    /// Every coefficient of the numerator is divisible by `13^6`.
    pub integral: bool,
    /// Coefficients of `t, ..., t^6` vanish mod 13 and the constant is 5 mod 13.
    pub congruence: bool,
    /// 5 is not a sum of two sixth powers mod 13.
    pub five_excluded: bool,
    /// `(t, f_1^6 + f_2^6)` for every `t` checked, and whether each passed.
    pub witnesses: Vec<(i64, BigInt, bool)>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.integral && self.congruence && self.five_excluded && self.witnesses.iter().all(|w| w.2)
    }
}

/// Checks the family symbolically and at every `t` in `range`.
pub fn verify_family(range: std::ops::RangeInclusive<i64>) -> FamilyReport {
    let num = family_numerator();
    let d = BigInt::from(13).pow(6);
    let integral = num.iter().all(|c| (c % &d).is_zero());
    let polynomial: [BigInt; 7] = std::array::from_fn(|i| &num[i] / &d);
    let thirteen = BigInt::from(13);
    let congruence = polynomial[1..].iter().all(|c| (c % &thirteen).is_zero())
        && polynomial[0].mod_floor(&thirteen) == BigInt::from(5);
    let five_excluded = !SumsetCache::new(13).contains(5);

    let witnesses = range
        .map(|t| {
            let f1 = BigInt::from(2863) + BigInt::from(10764) * t;
            let f2 = BigInt::from(1207) + BigInt::from(26455) * t;
            let total = f1.pow(6) + f2.pow(6);
            let (value, rem) = total.div_rem(&d);
            let ok = rem.is_zero()
                && value.is_positive()
                && value.mod_floor(&thirteen) == BigInt::from(5)
                && (f1 % 13u32 != BigInt::zero() || f2 % 13u32 != BigInt::zero());
            (t, value, ok)
        })
        .collect();
    FamilyReport { polynomial, integral, congruence, five_excluded, witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::is_sum_of_two_integer_sixth_powers;

    #[test]
    fn roots_for_five() {
        let roots = sixth_roots_of_minus_one(5).unwrap();
        assert!(roots.contains(&1068));
        for &q in &roots {
            assert_eq!((pow_mod(q, 6, 15625) + 1) % 15625, 0);
        }
        // brute force over all residues
        let brute: Vec<u64> = (0..15625).filter(|&q| (pow_mod(q, 6, 15625) + 1) % 15625 == 0).collect();
        assert_eq!(roots, brute);
    }

    #[test]
    fn roots_for_composite_modulus() {
        let roots = sixth_roots_of_minus_one(65).unwrap();
        let m6 = 65u64.pow(6);
        assert!(!roots.is_empty());
        for &q in &roots {
            assert_eq!((pow_mod(q, 6, m6) + 1) % m6, 0);
        }
        // two roots mod 5 (order 4) times six mod 13 (orders 4 and 12)
        assert_eq!(roots.len(), 12);
    }

    #[test]
    fn five_gives_the_minimal_representation() {
        let reps = find_representations(5).unwrap();
        let target = Representation { k: 164634913.into(), a: 44, b: 117, m: 5 };
        assert_eq!(reps[0], target);
        assert!(reps.iter().all(|r| r.verify()));
        assert!(verify_representation(&164634913.into(), &44.into(), &117.into(), &5.into()));
        assert!(!verify_representation(&164634913.into(), &44.into(), &118.into(), &5.into()));
    }

    #[test]
    fn invalid_moduli() {
        assert!(find_representations(0).is_err());
        assert!(find_representations(3).is_err());
        assert!(find_representations(15).is_err());
        assert!(find_representations(1).unwrap().is_empty());
    }

    #[test]
    fn thirteen_by_exact_arithmetic() {
        let reps = find_representations(13).unwrap();
        assert!(!reps.is_empty());
        let m6 = BigInt::from(13).pow(6);
        for r in &reps {
            let sum = BigInt::from(r.a).pow(6) + BigInt::from(r.b).pow(6);
            assert_eq!(sum, &r.k * &m6);
            assert!(r.a % 13 != 0 && r.b % 13 != 0);
            if let Ok(k) = u64::try_from(&r.k) {
                assert!(is_sum_of_two_integer_sixth_powers(k).is_none());
            }
        }
    }

    #[test]
    fn odd_powers() {
        assert_eq!(odd_power_rep(5).unwrap(), (15, 17, 68101.into()));
        assert_eq!(odd_power_rep(3).unwrap(), (3, 5, 19.into()));
        let (x, y, k) = odd_power_rep(7).unwrap();
        assert_eq!(BigInt::from(x).pow(7) + BigInt::from(y).pow(7), k << 7);
        assert!(odd_power_rep(4).is_err());
        assert!(odd_power_rep(1).is_err());
    }

    #[test]
    fn family_small_range() {
        let r = verify_family(-100..=100);
        assert!(r.passed());
        assert_eq!(r.witnesses.len(), 201);
        assert_eq!(SumsetCache::new(13).residues(), vec![0, 1, 2, 11, 12]);
        // integer sums never land on 5 mod 13
        for a in 0..13u64 {
            for b in 0..13u64 {
                assert_ne!((a.pow(6) + b.pow(6)) % 13, 5);
            }
        }
    }
}
