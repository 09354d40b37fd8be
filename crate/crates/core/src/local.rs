//! Local solvability of `C_k : x^6 + y^6 = k z^6`.
//!
//! For sixth-power-free `k`, `C_k` has points over every `Q_p` exactly when
//!
//! * every odd prime dividing `k` is `1 (mod 4)`,
//! * `k = 1, 2 (mod 8)` and `k = 1, 2 (mod 9)` (the primes 2 and 3),
//! * for every prime `7 <= p <= 400` with `p = 1 (mod 6)` and `p` not dividing
//!   `k`, the projective curve has a smooth `F_p` point.
//!
//! Primes `p = 5 (mod 6)` never obstruct (sixth powers are squares there), and
//! primes above 400 not dividing `6k` are handled by the Weil bound for a
//! genus 10 curve. For `p = 1 (mod 12)` the line `z = 0` already carries
//! smooth points since `-1` is a sixth power, so only `p = 7 (mod 12)` can
//! actually cut anything: there `k mod p` must be a sum of two sixth powers.
//!
//! [`qp_solvable_oracle`] decides `C_k(Q_p) != {}` independently by direct
//! enumeration and Hensel's lemma; it is used to cross-check the criterion.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::arith::{is_prime, primes_up_to, sixth_power_free};
use crate::error::{invalid, Result};

/// Largest prime whose local condition is checked explicitly.
pub const LOCAL_PRIME_BOUND: u64 = 400;

/// Allowed residues of `k` modulo 504 = 7 * 8 * 9.
pub fn residue_classes_504() -> Vec<u64> {
    (0..504u64)
        .filter(|r| matches!(r % 7, 1 | 2) && matches!(r % 8, 1 | 2) && matches!(r % 9, 1 | 2))
        .collect()
}

/// The curve `x^6 + y^6 = k z^6` for sixth-power-free `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SexticCurve {
    k: u64,
}

impl SexticCurve {
    pub fn new(k: u64) -> Result<Self> {
        if !sixth_power_free(k)?.is_free {
            return invalid(format!("{k} is not sixth-power-free"));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn contains(&self, x: u64, y: u64, z: u64, p: u64) -> bool {
        let s = |v: u64| crate::arith::pow_mod(v, 6, p);
        (s(x) + s(y)) % p == crate::arith::mul_mod(self.k % p, s(z), p)
    }

    pub fn local_certificate(&self) -> LocalCertificate {
        LocalFilter::global().certify(self.k)
    }
}

/// Residues `a^6 + b^6 mod p`, stored as a bitset over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetCache {
    p: u64,
    bits: Vec<u64>,
    minus_one_is_sixth_power: bool,
}

impl SumsetCache {
    pub fn new(p: u64) -> Self {
        let mut sixth = vec![false; p as usize];
        for a in 0..p {
            sixth[crate::arith::pow_mod(a, 6, p) as usize] = true;
        }
        let powers: Vec<u64> = (0..p).filter(|&v| sixth[v as usize]).collect();
        let mut bits = vec![0u64; (p as usize).div_ceil(64)];
        for &a in &powers {
            for &b in &powers {
                let s = ((a + b) % p) as usize;
                bits[s / 64] |= 1 << (s % 64);
            }
        }
        Self { p, bits, minus_one_is_sixth_power: sixth[(p - 1) as usize] && p > 2 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn contains(&self, r: u64) -> bool {
        let r = (r % self.p) as usize;
        self.bits[r / 64] >> (r % 64) & 1 == 1
    }

    pub fn residues(&self) -> Vec<u64> {
        (0..self.p).filter(|&r| self.contains(r)).collect()
    }

    /// Whether `C_k(F_p)` has a point, which for `p` not dividing `6k` is
    /// automatically smooth.
    pub fn has_projective_point(&self, k: u64) -> bool {
        self.minus_one_is_sixth_power || self.contains(k)
    }
}

pub fn sumset_mod_p(p: u64) -> Result<SumsetCache> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(SumsetCache::new(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalReason {
    NotSixthPowerFree,
    BadPrime3Mod4(u64),
    FailsModP(u64),
    /// `k = a^6 + b^6` with integers `a >= b >= 0`.
    IntegerSum(u64, u64),
    Passes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalCertificate {
    pub k: u64,
    pub locally_solvable: bool,
    pub reason: LocalReason,
}

/// Precomputed sumset tables and trial-division primes.
#[derive(Debug, Clone)]
pub struct LocalFilter {
    sumsets: Vec<SumsetCache>,
    small_primes: Vec<u64>,
}

impl LocalFilter {
    pub fn new() -> Self {
        let sumsets = primes_up_to(LOCAL_PRIME_BOUND)
            .into_iter()
            .filter(|p| p % 6 == 1)
            .map(SumsetCache::new)
            .collect();
        Self { sumsets, small_primes: primes_up_to(1 << 16) }
    }

    /// Shared instance, built on first use.
    pub fn global() -> &'static LocalFilter {
        static FILTER: OnceLock<LocalFilter> = OnceLock::new();
        FILTER.get_or_init(LocalFilter::new)
    }

    pub fn sumsets(&self) -> &[SumsetCache] {
        &self.sumsets
    }

    fn passes_residue_tests(&self, k: u64) -> std::result::Result<(), u64> {
        if !matches!(k % 8, 1 | 2) {
            return Err(2);
        }
        if !matches!(k % 9, 1 | 2) {
            return Err(3);
        }
        for s in &self.sumsets {
            if k % s.p != 0 && !s.has_projective_point(k) {
                return Err(s.p);
            }
        }
        Ok(())
    }

    // Some(reason) if k has a sixth power factor or an odd prime = 3 (mod 4).
    fn factor_obstruction(&self, k: u64) -> Option<LocalReason> {
        let mut n = k;
        for &p in &self.small_primes {
            if p * p > n {
                break;
            }
            if n % p != 0 {
                continue;
            }
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e >= 6 {
                return Some(LocalReason::NotSixthPowerFree);
            }
            if p % 4 == 3 {
                return Some(LocalReason::BadPrime3Mod4(p));
            }
        }
        if n > 1 && (self.small_primes.last().unwrap().pow(2) < n) {
            // cofactor beyond the table; fall back to full factorization
            for (p, e) in crate::arith::factor(n) {
                if e >= 6 {
                    return Some(LocalReason::NotSixthPowerFree);
                }
                if p % 4 == 3 {
                    return Some(LocalReason::BadPrime3Mod4(p));
                }
            }
        } else if n % 4 == 3 {
            return Some(LocalReason::BadPrime3Mod4(n));
        }
        None
    }

    /// Classifies any `k >= 1`; never errors.
    pub fn certify(&self, k: u64) -> LocalCertificate {
        let fail = |reason| LocalCertificate { k, locally_solvable: false, reason };
        if k == 0 {
            return fail(LocalReason::NotSixthPowerFree);
        }
        if let Some(reason) = self.factor_obstruction(k) {
            return fail(reason);
        }
        if let Err(p) = self.passes_residue_tests(k) {
            return fail(LocalReason::FailsModP(p));
        }
        let reason = match is_sum_of_two_integer_sixth_powers(k) {
            Some((a, b)) => LocalReason::IntegerSum(a, b),
            None => LocalReason::Passes,
        };
        LocalCertificate { k, locally_solvable: true, reason }
    }

    /// The pipeline predicate: locally solvable and not already a sum of two
    /// integer sixth powers.
    pub fn is_candidate(&self, k: u64) -> bool {
        k > 0
            && self.passes_residue_tests(k).is_ok()
            && self.factor_obstruction(k).is_none()
            && is_sum_of_two_integer_sixth_powers(k).is_none()
    }

    /// All candidate `k < bound`, ascending. Only the eight residue classes
    /// modulo 504 allowed by the conditions at 2, 3 and 7 are visited.
    pub fn enumerate(&self, bound: u64) -> Vec<u64> {
        let classes = residue_classes_504();
        const CHUNK: u64 = 504 * 2048;
        let chunks = bound.div_ceil(CHUNK);
        let mut out: Vec<u64> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(bound);
                let mut found = Vec::new();
                let mut base = lo;
                while base < hi {
                    for &r in &classes {
                        let k = base + r;
                        if k < hi && self.is_candidate(k) {
                            found.push(k);
                        }
                    }
                    base += 504;
                }
                found
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl Default for LocalFilter {
    fn default() -> Self {
        Self::new()
    }
}

/// Local certificate for a sixth-power-free `k`.
pub fn is_locally_solvable(k: u64) -> Result<LocalCertificate> {
    if !sixth_power_free(k)?.is_free {
        return invalid(format!("{k} is not sixth-power-free"));
    }
    Ok(LocalFilter::global().certify(k))
}

/// Sorted sixth-power-free `k < bound`, not sums of two integer sixth powers,
/// with `C_k` locally solvable.
pub fn enumerate_locally_solvable(bound: u64) -> Vec<u64> {
    LocalFilter::global().enumerate(bound)
}

fn sixth(n: u64) -> u128 {
    (n as u128).pow(6)
}

/// `(a, b)` with `a^6 + b^6 = k` and `a >= b >= 0`, if any.
pub fn is_sum_of_two_integer_sixth_powers(k: u64) -> Option<(u64, u64)> {
    let k = k as u128;
    let mut b = 0u64;
    while 2 * sixth(b) <= k {
        let rest = k - sixth(b);
        let mut a = (rest as f64).powf(1.0 / 6.0).round() as u64;
        while a > 0 && sixth(a) > rest {
            a -= 1;
        }
        while sixth(a + 1) <= rest {
            a += 1;
        }
        if sixth(a) == rest {
            return Some((a, b));
        }
        b += 1;
    }
    None
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Decides `C_k(Q_p) != {}` by enumeration modulo `p^e` and Hensel's lemma.
///
/// Take a primitive `Q_p` point. If `p` divided both `x` and `y` then `z` would
/// be a unit and `v_p(x^6 + y^6) >= 6 > v_p(k z^6)`, so one of `x, y` is a unit,
/// and by symmetry we may take `x = 1`. Then `dF/dx = 6` has valuation
/// `v = v_p(6)`, and Hensel's lemma lifts any solution of
/// `1 + y^6 = k z^6 (mod p^(2v+1))`. Conversely every point reduces to such a
/// solution, so checking residues modulo `p^(2v+1)` is exact.
pub fn qp_solvable_oracle(k: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if !sixth_power_free(k)?.is_free {
        return invalid(format!("{k} is not sixth-power-free"));
    }
    let e = 2 * valuation(6, p) + 1;
    let m = p.pow(e);
    let t6: Vec<u64> = (0..m).map(|u| crate::arith::pow_mod(u, 6, m)).collect();
    let mut rhs = vec![false; m as usize];
    let km = k % m;
    for &s in &t6 {
        rhs[crate::arith::mul_mod(km, s, m) as usize] = true;
    }
    Ok(t6.iter().any(|&s| rhs[((1 + s) % m) as usize]))
}

/// Primes at which the oracle has to be consulted for `k`: all `p <= 400`
/// together with the prime divisors of `k`.
pub fn relevant_primes(k: u64) -> Vec<u64> {
    let mut ps = primes_up_to(LOCAL_PRIME_BOUND);
    for (p, _) in crate::arith::factor(k) {
        if p > LOCAL_PRIME_BOUND {
            ps.push(p);
        }
    }
    ps
}

/// Local solvability decided only through [`qp_solvable_oracle`].
pub fn locally_solvable_by_oracle(k: u64) -> Result<bool> {
    for p in relevant_primes(k) {
        if !qp_solvable_oracle(k, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sumset_oracle(p: u64) -> Vec<u64> {
        let mut out = std::collections::BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                out.insert((a.pow(6) % p + b.pow(6) % p) % p);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset_mod_p(7).unwrap().residues(), vec![0, 1, 2]);
        assert_eq!(sumset_mod_p(5).unwrap().residues(), vec![0, 1, 2, 3, 4]);
        assert_eq!(sumset_mod_p(13).unwrap().residues(), vec![0, 1, 2, 11, 12]);
        assert!(sumset_mod_p(15).is_err());
        for p in primes_up_to(400) {
            assert_eq!(sumset_mod_p(p).unwrap().residues(), sumset_oracle(p), "p={p}");
        }
    }

    #[test]
    fn residue_classes() {
        let c = residue_classes_504();
        assert_eq!(c.len(), 8);
        assert!(c.contains(&(2017 % 504)));
    }

    #[test]
    fn certificate_examples() {
        let c = is_locally_solvable(2017).unwrap();
        assert!(c.locally_solvable);
        assert_eq!(c.reason, LocalReason::Passes);

        let c = is_locally_solvable(16).unwrap();
        assert!(!c.locally_solvable);
        assert_eq!(c.reason, LocalReason::FailsModP(2));

        let c = is_locally_solvable(3).unwrap();
        assert_eq!(c.reason, LocalReason::BadPrime3Mod4(3));

        assert!(is_locally_solvable(64).is_err());
        assert_eq!(LocalFilter::global().certify(128).reason, LocalReason::NotSixthPowerFree);

        let c = is_locally_solvable(65).unwrap();
        assert_eq!(c.reason, LocalReason::IntegerSum(2, 1));
    }

    #[test]
    fn integer_sums() {
        assert_eq!(is_sum_of_two_integer_sixth_powers(65), Some((2, 1)));
        assert_eq!(is_sum_of_two_integer_sixth_powers(2), Some((1, 1)));
        assert_eq!(is_sum_of_two_integer_sixth_powers(1), Some((1, 0)));
        assert_eq!(is_sum_of_two_integer_sixth_powers(2017), None);
        for a in 0..40u64 {
            for b in 0..=a {
                let k = a.pow(6) + b.pow(6);
                if k > 0 {
                    assert_eq!(is_sum_of_two_integer_sixth_powers(k), Some((a, b)));
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert!(qp_solvable_oracle(2, 3).unwrap());
        assert!(!qp_solvable_oracle(16, 2).unwrap());
        assert!(qp_solvable_oracle(2017, 13).unwrap());
        assert!(!qp_solvable_oracle(3, 3).unwrap());
        assert!(qp_solvable_oracle(5, 5).unwrap());
        assert!(!qp_solvable_oracle(7, 7).unwrap());
    }

    #[test]
    fn oracle_matches_two_and_three_adic_classes() {
        for k in 1..=3000u64 {
            if !sixth_power_free(k).unwrap().is_free {
                continue;
            }
            assert_eq!(qp_solvable_oracle(k, 2).unwrap(), matches!(k % 8, 1 | 2), "k={k}");
            let three = k % 3 != 0 && matches!(k % 9, 1 | 2);
            assert_eq!(qp_solvable_oracle(k, 3).unwrap(), three, "k={k}");
        }
    }

    #[test]
    fn oracle_matches_sumset_criterion() {
        let filter = LocalFilter::global();
        let primes: Vec<u64> = primes_up_to(400).into_iter().filter(|&p| p > 3).collect();
        for k in (1..=10_000u64).filter(|k| k % 7 == 3 || k % 97 == 0 || *k < 600) {
            if !sixth_power_free(k).unwrap().is_free {
                continue;
            }
            for &p in &primes {
                if k % p == 0 {
                    assert_eq!(qp_solvable_oracle(k, p).unwrap(), p % 4 == 1, "k={k} p={p}");
                    continue;
                }
                let expect = if p % 6 == 5 {
                    true
                } else {
                    filter.sumsets.iter().find(|s| s.p == p).unwrap().has_projective_point(k)
                };
                assert_eq!(qp_solvable_oracle(k, p).unwrap(), expect, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn certify_matches_oracle_everywhere() {
        let filter = LocalFilter::global();
        for k in 1..=2500u64 {
            if !sixth_power_free(k).unwrap().is_free {
                continue;
            }
            let c = filter.certify(k);
            assert_eq!(c.locally_solvable, locally_solvable_by_oracle(k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn integer_sums_are_locally_solvable() {
        let filter = LocalFilter::global();
        for a in 1..30u64 {
            for b in 0..=a {
                let k = a.pow(6) + b.pow(6);
                if sixth_power_free(k).unwrap().is_free {
                    assert!(filter.certify(k).locally_solvable, "k={k}");
                }
            }
        }
    }

    #[test]
    fn enumeration_small_bounds() {
        assert!(enumerate_locally_solvable(2017).is_empty());
        assert_eq!(enumerate_locally_solvable(2018), vec![2017]);
        assert!(enumerate_locally_solvable(1).is_empty());
    }

    #[test]
    fn enumeration_matches_rescan() {
        let filter = LocalFilter::global();
        let bound = 100_000;
        let slow: Vec<u64> = (1..bound)
            .filter(|&k| {
                let c = filter.certify(k);
                c.locally_solvable && c.reason == LocalReason::Passes
            })
            .collect();
        let fast = enumerate_locally_solvable(bound);
        assert_eq!(fast, slow);
        for k in fast {
            for (p, _) in crate::arith::factor(k) {
                assert!(p == 2 || p % 4 == 1);
            }
        }
    }
}
