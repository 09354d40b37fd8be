use num_bigint::BigInt;

use crate::arith::is_prime;
use crate::error::{invalid, Result};

use super::fp::structure_of;
use super::{torsion_structure, FpPoint, MordellCurve, RationalPoint, TorsionStructure};

/// A finite-index subgroup `A = <P_1, ..., P_r> + E(Q)_tors` of a Mordell
/// curve, given by generators of infinite order.
#[derive(Debug, Clone)]
pub struct MwSubgroup {
    curve: MordellCurve,
    generators: Vec<RationalPoint>,
    torsion: TorsionStructure,
    saturation_checked: Vec<u64>,
}

impl MwSubgroup {
    /// Validates that every generator lies on the curve and has infinite order.
    pub fn new(a: impl Into<BigInt>, generators: Vec<RationalPoint>) -> Result<Self> {
        let curve = MordellCurve::new(a)?;
        for g in &generators {
            if !curve.contains(g) {
                return invalid(format!("generator {g} is not on {curve}"));
            }
            if curve.small_order(g, 12)?.is_some() {
                return invalid(format!("generator {g} is a torsion point"));
            }
        }
        let torsion = torsion_structure(curve.a());
        Ok(Self { curve, generators, torsion, saturation_checked: Vec::new() })
    }

    pub fn curve(&self) -> &MordellCurve {
        &self.curve
    }

    pub fn a(&self) -> &BigInt {
        self.curve.a()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[RationalPoint] {
        &self.generators
    }

    pub fn torsion(&self) -> &TorsionStructure {
        &self.torsion
    }

    /// Primes `l` at which `A` has been certified `l`-saturated.
    pub fn saturation_checked(&self) -> &[u64] {
        &self.saturation_checked
    }

    /// Runs [`certify_nondivisibility`] and records `l` on success.
    pub fn check_saturation(&mut self, ell: u64, trial_primes: &[u64]) -> bool {
        let ok = certify_nondivisibility(self, ell, trial_primes);
        if ok && !self.saturation_checked.contains(&ell) {
            self.saturation_checked.push(ell);
            self.saturation_checked.sort_unstable();
        }
        ok
    }
}

/// Proves `A` is saturated at the prime `l`: every nonzero class of `A / lA`
/// must reduce to a point outside `l E(F_q)` for some trial prime `q`. Then
/// no element of `A \ lA` is divisible by `l` in `E(Q)`. Returns `false` if
/// the trial primes do not suffice or `l` is not prime.
pub fn certify_nondivisibility(sub: &MwSubgroup, ell: u64, trial_primes: &[u64]) -> bool {
    if !is_prime(ell) {
        return false;
    }
    let rank = sub.rank();
    let tors_classes = crate::arith::gcd(ell, sub.torsion.order() as u64);
    let total = (ell as usize).pow(rank as u32) * tors_classes as usize;
    // class index i encodes (c_1, ..., c_r, j) in mixed radix
    let mut open: Vec<usize> = (1..total).collect();

    for &q in trial_primes {
        if open.is_empty() {
            break;
        }
        let Ok(fq) = sub.curve.reduce(q) else { continue };
        let Ok(group) = structure_of(fq) else { continue };
        let (m1, m2) = group.quotient_invariants(ell);
        if m1 == 1 && m2 == 1 {
            continue;
        }
        let reduce = |p: &RationalPoint| -> (u64, u64) {
            let r = sub.curve.reduce_point(p, q).unwrap_or(FpPoint::Infinity);
            group.quotient_coordinates(r, ell).expect("reduction lies on the curve")
        };
        let gens: Vec<(u64, u64)> = sub.generators.iter().map(reduce).collect();
        let tors = reduce(sub.torsion.generator());
        open.retain(|&idx| {
            let mut rest = idx;
            let (mut s1, mut s2) = (0u64, 0u64);
            for g in &gens {
                let c = (rest % ell as usize) as u64;
                rest /= ell as usize;
                s1 += c * g.0;
                s2 += c * g.1;
            }
            let j = rest as u64;
            s1 += j * tors.0;
            s2 += j * tors.1;
            s1 % m1 == 0 && s2 % m2 == 0
        });
    }
    open.is_empty()
}
