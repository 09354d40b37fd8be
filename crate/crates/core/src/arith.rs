//! Integer and modular arithmetic shared by the other modules.
//!
//! Everything here works on machine integers: the values of `k` handled by
//! the pipeline stay below `2^32`, sieve primes stay below `10^5`, and the
//! only wide intermediate products go through `u128`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Signed;

use crate::error::{invalid, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduces a big integer into `[0, m)`.
pub fn big_mod(n: &BigInt, m: u64) -> u64 {
    let r = n % BigInt::from(m);
    let r = if r.is_negative() { r + BigInt::from(m) } else { r };
    u64::try_from(r).expect("residue fits in u64")
}

pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

pub fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Exact `e`-th root of a big integer, if one exists. Negative inputs have
/// roots only for odd `e`.
pub fn exact_root(n: &BigInt, e: u32) -> Option<BigInt> {
    if n.is_negative() {
        if e % 2 == 0 {
            return None;
        }
        return exact_root(&-n, e).map(|r| -r);
    }
    let r = n.nth_root(e);
    if r.pow(e) == *n {
        Some(r)
    } else {
        None
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases, which is deterministic
/// for every `n < 3.3 * 10^24` and therefore for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

const TRIAL_LIMIT: u64 = 10_000_000;

/// Prime factorization as `(prime, exponent)` pairs in ascending order.
///
/// Trial division up to `10^7`; a cofactor left over after that is either
/// prime (checked by [`is_prime`]) or split with Pollard's rho.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d <= TRIAL_LIMIT && d * d <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        let mut big = Vec::new();
        split_large(n, &mut big);
        big.sort_unstable();
        for p in big {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

fn split_large(n: u64, acc: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        acc.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, acc);
    split_large(n / d, acc);
}

// Floyd cycle finding; n is an odd composite here.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Carmichael function: exponent of `(Z/m)^*`.
pub fn carmichael(m: u64) -> u64 {
    factor(m).into_iter().fold(1, |acc, (p, e)| {
        let pe1 = p.pow(e - 1);
        let l = if p == 2 && e >= 3 { pe1 / 2 } else { pe1 * (p - 1) };
        lcm(acc, l)
    })
}

/// Least `n >= 1` with `a^n = 1 (mod m)`.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return invalid("modulus must be positive");
    }
    if gcd(a % m, m) != 1 {
        return invalid(format!("{a} is not a unit modulo {m}"));
    }
    if m == 1 {
        return Ok(1);
    }
    let mut order = carmichael(m);
    for (q, _) in factor(order) {
        while order % q == 0 && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Decomposition `k = core * root^6` with `core` sixth-power-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SixthPowerFree {
    pub is_free: bool,
    pub core: u64,
    pub root: u64,
}

pub fn sixth_power_free(k: u64) -> Result<SixthPowerFree> {
    if k == 0 {
        return invalid("k must be positive");
    }
    let mut core = 1u64;
    let mut root = 1u64;
    for (p, e) in factor(k) {
        root *= p.pow(e / 6);
        core *= p.pow(e % 6);
    }
    Ok(SixthPowerFree { is_free: root == 1, core, root })
}

/// Squarefree part: `n = sf * m^2`.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    let mut sf = 1u64;
    let mut m = 1u64;
    for (p, e) in factor(n) {
        m *= p.pow(e / 2);
        if e % 2 == 1 {
            sf *= p;
        }
    }
    (sf, m)
}

/// The lattice `{(x, y) in Z^2 : y = multiplier * x (mod modulus)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice2D {
    pub modulus: u64,
    pub multiplier: u64,
}

impl Lattice2D {
    pub fn new(modulus: u64, multiplier: u64) -> Result<Self> {
        if modulus == 0 {
            return invalid("lattice modulus must be positive");
        }
        Ok(Self { modulus, multiplier: multiplier % modulus })
    }

    pub fn contains(&self, v: (i128, i128)) -> bool {
        let m = self.modulus as i128;
        (v.1 - self.multiplier as i128 * v.0).rem_euclid(m) == 0
    }
}

fn dot(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.0 + a.1 * b.1
}

fn sub_mul(v: (i128, i128), c: i128, u: (i128, i128)) -> (i128, i128) {
    (v.0 - c * u.0, v.1 - c * u.1)
}

fn nonneg(v: (i128, i128)) -> (i128, i128) {
    if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
        (-v.0, -v.1)
    } else {
        v
    }
}

// Nearest integer to a/b, b > 0, halves rounded towards -inf.
fn round_div(a: i128, b: i128) -> i128 {
    (2 * a + b).div_euclid(2 * b)
}

/// Lagrange-Gauss reduction of a rank-two lattice.
///
/// Returns `(v1, v2)` with `|v1| <= |v2| <= |v2 +- v1|`, both normalized so the
/// first nonzero coordinate is positive. Ties between equally short choices
/// are broken towards the lexicographically smallest vector, so the output is
/// a deterministic function of the lattice.
pub fn lagrange_reduce(lattice: &Lattice2D) -> ((i128, i128), (i128, i128)) {
    let mut u = (1i128, lattice.multiplier as i128);
    let mut v = (0i128, lattice.modulus as i128);
    if dot(u, u) > dot(v, v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let mu = round_div(dot(u, v), dot(u, u));
        v = sub_mul(v, mu, u);
        if dot(v, v) >= dot(u, u) {
            break;
        }
        std::mem::swap(&mut u, &mut v);
    }
    let best = dot(v, v);
    v = [v, sub_mul(v, 1, u), sub_mul(v, -1, u)]
        .into_iter()
        .filter(|w| dot(*w, *w) == best)
        .map(nonneg)
        .min()
        .expect("v itself is a candidate");
    u = nonneg(u);
    if dot(u, u) == dot(v, v) && v < u {
        std::mem::swap(&mut u, &mut v);
    }
    (u, v)
}
