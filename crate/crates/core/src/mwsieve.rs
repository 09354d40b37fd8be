//! The Mordell-Weil sieve on `phi : C_k -> E_a` with a finite-index subgroup
//! `A` of `E_a(Q)`.
//!
//! A coset `sum n_i P_i + j T + N A` is admissible at `p` when its reduction
//! meets `phi(C_k(F_p)) + N E(F_p)`. If no coset survives, `C_k(Q)` is empty,
//! provided `[E(Q) : A]` is prime to `N`.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{gcd, is_prime, primes_up_to};
use crate::elliptic::{group_structure_fp, AbelianGroupFp, MwSubgroup};
use crate::error::{invalid, Error, Result};
use crate::maps::{image_set_fp, map_by_id, CodomainTag, CurveMapSpec};

/// One ladder step: multiply `N` by `multiplier`, then sieve with every good
/// prime up to `prime_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveStage {
    pub multiplier: u64,
    pub prime_cap: u64,
}

/// Ladder `N = 2, 4, 12, 84` with caps 311, 311, 479, 1021.
pub const DEFAULT_STAGES: [SieveStage; 4] = [
    SieveStage { multiplier: 2, prime_cap: 311 },
    SieveStage { multiplier: 2, prime_cap: 311 },
    SieveStage { multiplier: 3, prime_cap: 479 },
    SieveStage { multiplier: 7, prime_cap: 1021 },
];

#[derive(Debug, Clone)]
pub struct SieveConfig {
    pub k: u64,
    pub map: &'static CurveMapSpec,
    pub subgroup: MwSubgroup,
    pub stages: Vec<SieveStage>,
    pub max_cosets: usize,
    pub max_prime: u64,
}

impl SieveConfig {
    /// Default ladder for `A` on the codomain of map `map_id`.
    pub fn new(k: u64, map_id: usize, subgroup: MwSubgroup) -> Result<Self> {
        let cfg = Self {
            k,
            map: map_by_id(map_id)?,
            subgroup,
            stages: DEFAULT_STAGES.to_vec(),
            max_cosets: 50_000_000,
            max_prime: 1021,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_stages(mut self, stages: Vec<SieveStage>) -> Result<Self> {
        self.stages = stages;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return invalid("k must be positive");
        }
        let a = self.map.codomain().coefficient(&self.k.into());
        if &a != self.subgroup.a() {
            return invalid(format!(
                "map {} lands on y^2 = x^3 + {a}, but the subgroup lives on y^2 = x^3 + {}",
                self.map.id(),
                self.subgroup.a()
            ));
        }
        for s in &self.stages {
            if !is_prime(s.multiplier) || s.multiplier > 100 {
                return invalid(format!("ladder multiplier {} must be a prime <= 100", s.multiplier));
            }
        }
        Ok(())
    }

    /// Final modulus of the ladder.
    pub fn final_modulus(&self) -> u64 {
        self.stages.iter().map(|s| s.multiplier).product()
    }
}

/// Survivor counts at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveEvent {
    pub modulus: u64,
    pub p: u64,
    pub before: usize,
    pub after: usize,
}

/// Admissible cosets of `A / N A`, stored flat as `(n_1, ..., n_r, j)` with
/// `0 <= n_i < N` and `0 <= j < gcd(N, #T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveState {
    modulus: u64,
    rank: usize,
    torsion_order: u64,
    cosets: Vec<u32>,
    primes_used: Vec<u64>,
    events: Vec<SieveEvent>,
}

impl SieveState {
    /// The single coset of `A / 1 A`.
    pub fn initial(rank: usize, torsion_order: u64) -> Self {
        Self {
            modulus: 1,
            rank,
            torsion_order,
            cosets: vec![0; rank + 1],
            primes_used: Vec::new(),
            events: Vec::new(),
        }
    }

    /// Every coset of `A / N A`.
    pub fn full(rank: usize, torsion_order: u64, modulus: u64) -> Self {
        let mut s = Self::initial(rank, torsion_order);
        for (q, e) in crate::arith::factor(modulus) {
            for _ in 0..e {
                s = s.lift(q);
            }
        }
        s.events.clear();
        s
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.cosets.len() / (self.rank + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> impl Iterator<Item = &[u32]> {
        self.cosets.chunks_exact(self.rank + 1)
    }

    pub fn primes_used(&self) -> &[u64] {
        &self.primes_used
    }

    pub fn events(&self) -> &[SieveEvent] {
        &self.events
    }

    pub fn contains(&self, coset: &[u32]) -> bool {
        self.cosets().any(|c| c == coset)
    }

    fn torsion_classes(&self, modulus: u64) -> u64 {
        gcd(modulus, self.torsion_order)
    }

    /// Full preimage in `A / (r N) A`.
    pub fn lift(&self, r: u64) -> Self {
        let n = self.modulus;
        let new_mod = n * r;
        let old_t = self.torsion_classes(n);
        let new_t = self.torsion_classes(new_mod);
        let stride = self.rank + 1;
        let mut out = Vec::with_capacity(self.cosets.len() * (r as usize).pow(self.rank as u32));
        let combos = (r as usize).pow(self.rank as u32);
        for c in self.cosets.chunks_exact(stride) {
            for idx in 0..combos {
                let mut rest = idx;
                let base = out.len();
                for &ni in &c[..self.rank] {
                    let s = (rest % r as usize) as u64;
                    rest /= r as usize;
                    out.push((ni as u64 + n * s) as u32);
                }
                let mut j = c[self.rank] as u64;
                let mut first = true;
                while j < new_t {
                    if !first {
                        out.extend_from_within(base..base + self.rank);
                    }
                    out.push(j as u32);
                    first = false;
                    j += old_t;
                }
            }
        }
        Self {
            modulus: new_mod,
            rank: self.rank,
            torsion_order: self.torsion_order,
            cosets: out,
            primes_used: self.primes_used.clone(),
            events: self.events.clone(),
        }
    }
}

/// Everything about `E(F_p)` and `phi(C_k(F_p))` the sieve needs.
#[derive(Debug, Clone)]
pub struct PrimeData {
    p: u64,
    group: AbelianGroupFp,
    image: Vec<(u64, u64)>,
    generators: Vec<(u64, u64)>,
    torsion: (u64, u64),
}

impl PrimeData {
    pub fn new(k: u64, p: u64, map: &CurveMapSpec, subgroup: &MwSubgroup) -> Result<Self> {
        let group = group_structure_fp(subgroup.a(), p)?;
        let image = image_set_fp(k, p, map)?;
        let coords = |pt| {
            group
                .coordinates(pt)
                .ok_or_else(|| Error::Invariant(format!("point off E(F_{p})")))
        };
        let image = image.points().iter().map(|&pt| coords(pt)).collect::<Result<Vec<_>>>()?;
        let reduce = |g| subgroup.curve().reduce_point(g, p).and_then(coords);
        let generators = subgroup.generators().iter().map(reduce).collect::<Result<Vec<_>>>()?;
        let torsion = reduce(subgroup.torsion().generator())?;
        Ok(Self { p, group, image, generators, torsion })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn group(&self) -> &AbelianGroupFp {
        &self.group
    }

    /// Filters `state` to the cosets admissible at this prime.
    pub fn admissible(&self, state: &SieveState) -> SieveState {
        let n = state.modulus;
        let (q1, q2) = self.group.quotient_invariants(n);
        let mut hit = vec![false; (q1 * q2) as usize];
        for &(a, b) in &self.image {
            hit[((a % q1) * q2 + b % q2) as usize] = true;
        }
        let rank = state.rank;
        let gens: Vec<(u64, u64)> = self.generators.iter().map(|&(a, b)| (a % q1, b % q2)).collect();
        let tors = (self.torsion.0 % q1, self.torsion.1 % q2);
        let mut out = Vec::new();
        for c in state.cosets.chunks_exact(rank + 1) {
            let (mut s1, mut s2) = (0u64, 0u64);
            for (&ni, g) in c[..rank].iter().zip(&gens) {
                s1 += ni as u64 * g.0;
                s2 += ni as u64 * g.1;
            }
            s1 += c[rank] as u64 * tors.0;
            s2 += c[rank] as u64 * tors.1;
            if hit[((s1 % q1) * q2 + s2 % q2) as usize] {
                out.extend_from_slice(c);
            }
        }
        let mut next = SieveState { cosets: out, ..state.clone() };
        if !next.primes_used.contains(&self.p) {
            next.primes_used.push(self.p);
        }
        next.events.push(SieveEvent { modulus: n, p: self.p, before: state.len(), after: next.len() });
        next
    }
}

/// Filters `state` at a single prime.
pub fn admissible_at_prime(config: &SieveConfig, state: &SieveState, p: u64) -> Result<SieveState> {
    Ok(PrimeData::new(config.k, p, config.map, &config.subgroup)?.admissible(state))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveVerdict {
    /// No coset survives: `C_k(Q)` is empty.
    Empty,
    /// The ladder ran out (or an abort threshold was hit) with survivors.
    Exhausted,
}

impl fmt::Display for SieveVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SieveVerdict::Empty => "EMPTY",
            SieveVerdict::Exhausted => "EXHAUSTED",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SieveOutcome {
    pub k: u64,
    pub verdict: SieveVerdict,
    pub state: SieveState,
    /// `(l, certified)` for every prime `l | N` at which saturation was checked.
    pub saturation: Vec<(u64, bool)>,
    pub notes: Vec<String>,
}

impl SieveOutcome {
    pub fn max_prime(&self) -> u64 {
        self.state.primes_used.iter().copied().max().unwrap_or(0)
    }

    /// Whether an `Empty` verdict is backed by saturation at every `l | N`.
    pub fn is_proof(&self) -> bool {
        self.verdict == SieveVerdict::Empty && self.saturation.iter().all(|&(_, ok)| ok)
    }

    /// Event lines `k N p before after`, comment lines, and the verdict line.
    pub fn transcript(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .saturation
            .iter()
            .map(|(l, ok)| format!("# saturation l={l} {}", if *ok { "certified" } else { "unverified" }))
            .collect();
        out.extend(self.notes.iter().map(|n| format!("# {n}")));
        out.extend(
            self.state
                .events
                .iter()
                .map(|e| format!("{} {} {} {} {}", self.k, e.modulus, e.p, e.before, e.after)),
        );
        out.push(format!(
            "{} VERDICT {} {} {}",
            self.k,
            self.verdict,
            self.state.modulus,
            self.max_prime()
        ));
        out
    }
}

/// Good primes for the sieve: `p > 3` prime, `p` not dividing `k`.
pub fn sieve_primes(k: u64, cap: u64) -> Vec<u64> {
    primes_up_to(cap).into_iter().filter(|&p| p > 3 && k % p != 0).collect()
}

/// Runs the ladder. Stops early with `Empty` as soon as no coset survives.
pub fn run_sieve(config: &SieveConfig) -> Result<SieveOutcome> {
    config.validate()?;
    let sub = &config.subgroup;
    let mut state = SieveState::initial(sub.rank(), sub.torsion().order() as u64);
    let mut cache: HashMap<u64, PrimeData> = HashMap::new();
    let mut notes = Vec::new();

    let mut ells: Vec<u64> = config.stages.iter().map(|s| s.multiplier).collect();
    ells.sort_unstable();
    ells.dedup();
    let trial = sieve_primes(config.k, config.max_prime.max(1021));
    let saturation = ells
        .iter()
        .map(|&l| (l, crate::elliptic::certify_nondivisibility(sub, l, &trial)))
        .collect();

    let done = |state: SieveState, notes: Vec<String>, saturation| {
        let verdict = if state.is_empty() { SieveVerdict::Empty } else { SieveVerdict::Exhausted };
        Ok(SieveOutcome { k: config.k, verdict, state, saturation, notes })
    };

    for stage in &config.stages {
        let projected = state.len().saturating_mul(
            (stage.multiplier as usize).pow(sub.rank() as u32)
                * (gcd(state.modulus * stage.multiplier, state.torsion_order)
                    / gcd(state.modulus, state.torsion_order)) as usize,
        );
        if projected > config.max_cosets {
            notes.push(format!("abort: lifting to N={} needs {projected} cosets", state.modulus * stage.multiplier));
            return done(state, notes, saturation);
        }
        state = state.lift(stage.multiplier);
        for p in sieve_primes(config.k, stage.prime_cap.min(config.max_prime)) {
            let data = match cache.get(&p) {
                Some(d) => d,
                None => match PrimeData::new(config.k, p, config.map, sub) {
                    Ok(d) => cache.entry(p).or_insert(d),
                    Err(Error::PatchCoverage { .. }) => {
                        notes.push(format!("skipped p={p}: patch coverage"));
                        continue;
                    }
                    Err(e) => return Err(e),
                },
            };
            state = data.admissible(&state);
            if state.is_empty() {
                return done(state, notes, saturation);
            }
        }
    }
    done(state, notes, saturation)
}

/// Picks the subgroup of least rank, ties broken by codomain order, and the
/// first map onto that codomain.
pub fn choose_curve(candidates: &[(CodomainTag, MwSubgroup)]) -> Option<(&'static CurveMapSpec, &MwSubgroup)> {
    let (tag, sub) = candidates.iter().min_by_key(|(tag, sub)| (sub.rank(), *tag))?;
    Some((tag.maps().next()?, sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{MordellCurve, RationalPoint};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn k138826_config() -> SieveConfig {
        let d = BigInt::from(2358);
        let x = BigRational::new(605879737.into(), &d * &d);
        let y = BigRational::new(BigInt::from(-17828809046227i64), d.pow(3));
        let sub = MwSubgroup::new(555304, vec![RationalPoint::from_affine(&x, &y)]).unwrap();
        SieveConfig::new(138826, 3, sub).unwrap()
    }

    fn residues(state: &SieveState) -> Vec<u32> {
        let mut v: Vec<u32> = state.cosets().map(|c| c[0]).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn worked_example_mod_six() {
        let cfg = k138826_config();
        let full = SieveState::full(1, 1, 6);
        assert_eq!(full.len(), 6);
        let at5 = admissible_at_prime(&cfg, &full, 5).unwrap();
        assert_eq!(residues(&at5), vec![0, 2, 4]);
        let at7 = admissible_at_prime(&cfg, &full, 7).unwrap();
        assert_eq!(residues(&at7), vec![1, 5]);
        assert!(admissible_at_prime(&cfg, &at5, 7).unwrap().is_empty());
    }

    #[test]
    fn worked_example_run() {
        let cfg = k138826_config()
            .with_stages(vec![SieveStage { multiplier: 2, prime_cap: 3 }, SieveStage { multiplier: 3, prime_cap: 7 }])
            .unwrap();
        let out = run_sieve(&cfg).unwrap();
        assert_eq!(out.verdict, SieveVerdict::Empty);
        assert_eq!(out.state.primes_used(), &[5, 7]);
        assert_eq!(out.state.modulus(), 6);
        assert!(out.is_proof());
        let t = out.transcript();
        assert_eq!(t.last().unwrap(), "138826 VERDICT EMPTY 6 7");
        assert!(t.contains(&"138826 6 5 6 3".to_string()));
        assert!(t.contains(&"138826 6 7 3 0".to_string()));
    }

    #[test]
    fn default_ladder_also_proves_emptiness() {
        let out = run_sieve(&k138826_config()).unwrap();
        assert_eq!(out.verdict, SieveVerdict::Empty);
    }

    #[test]
    fn trivial_modulus() {
        let cfg = k138826_config();
        let s = admissible_at_prime(&cfg, &SieveState::initial(1, 1), 5).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn lifting_counts_and_torsion() {
        let s = SieveState::initial(2, 6).lift(2);
        assert_eq!(s.len(), 4 * 2);
        let s = s.lift(2);
        assert_eq!(s.len(), 16 * 2);
        let s = s.lift(3);
        assert_eq!(s.len(), 144 * 6);
        assert!(s.cosets().all(|c| c[0] < 12 && c[1] < 12 && c[2] < 6));
        let s = SieveState::initial(4, 1).lift(2).lift(2).lift(3).lift(7);
        assert_eq!(s.len(), 84usize.pow(4));
    }

    #[test]
    fn config_validation() {
        let cfg = k138826_config();
        assert!(SieveConfig::new(138826, 1, cfg.subgroup.clone()).is_err());
        assert!(cfg.clone().with_stages(vec![SieveStage { multiplier: 4, prime_cap: 10 }]).is_err());
        assert!(cfg.with_stages(vec![SieveStage { multiplier: 101, prime_cap: 10 }]).is_err());
    }

    #[test]
    fn choice_prefers_low_rank_then_tag_order() {
        let e = MordellCurve::new(2).unwrap();
        let p = RationalPoint::from_ints(-1, 1);
        let a = MwSubgroup::new(2, vec![p.clone(), e.double(&p).unwrap()]).unwrap();
        let b = MwSubgroup::new(2, vec![p]).unwrap();
        let cands = vec![(CodomainTag::Ek3, b.clone()), (CodomainTag::Ek, a), (CodomainTag::E4k, b)];
        let (m, s) = choose_curve(&cands).unwrap();
        assert_eq!((m.id(), s.rank()), (3, 1));
    }

    fn known_point_config(a: u64, b: u64) -> Option<(SieveConfig, Vec<u32>)> {
        let k = a.pow(6) + b.pow(6);
        let map = map_by_id(1).unwrap();
        let img = map.eval_rational(k, [a as i64, b as i64, 1]).ok()?;
        let sub = MwSubgroup::new(k, vec![img]).ok()?;
        let cfg = SieveConfig::new(k, 1, sub)
            .ok()?
            .with_stages(vec![
                SieveStage { multiplier: 2, prime_cap: 150 },
                SieveStage { multiplier: 3, prime_cap: 150 },
                SieveStage { multiplier: 2, prime_cap: 200 },
            ])
            .ok()?;
        Some((cfg, vec![1, 0]))
    }

    #[test]
    fn known_point_k65_survives() {
        let (cfg, coset) = known_point_config(1, 2).unwrap();
        let out = run_sieve(&cfg).unwrap();
        assert_eq!(out.verdict, SieveVerdict::Exhausted);
        assert!(out.state.contains(&coset));
        assert!(out.state.events().iter().all(|e| e.after >= 1 && e.after <= e.before));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn integer_sums_are_never_proved_empty(a in 1u64..6, b in 1u64..6) {
            prop_assume!(a != b && gcd(a, b) == 1);
            if let Some((cfg, coset)) = known_point_config(a, b) {
                let out = run_sieve(&cfg).unwrap();
                prop_assert_eq!(out.verdict, SieveVerdict::Exhausted);
                prop_assert!(out.state.contains(&coset));
            }
        }
    }
}
