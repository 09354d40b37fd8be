//! Theta series of six positive ternary forms of discriminant 576, integer
//! combinations of them, and rank-zero certificates for `E_{k^3}`.
//!
//! Two combinations are provided. [`ThetaWeights::H`] is
//! `16 h = 5 theta_1 - 3 theta_2 - 7 theta_3 + 5 theta_4 + 9 theta_5 - 3 theta_6`;
//! its constant term is 6, so it has a nonzero Eisenstein component and its
//! zeros do not track `L(E_{k^3}, 1)`. [`ThetaWeights::EIGENFORM`] is the cusp
//! form in the span of the six series whose coefficients on `n = 1, 17 (mod 24)`
//! obey the Hecke relations of `y^2 = x^3 - 1`; certificates use it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{isqrt, squarefree_decomposition};
use crate::error::{invalid, Error, Result};

/// Integer weights of `theta_{Q_1}, ..., theta_{Q_6}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaWeights(pub [i64; 6]);

impl ThetaWeights {
    pub const H: Self = Self([5, -3, -7, 5, 9, -3]);
    /// On `n = 1 (mod 8)` prime to 3 this vanishes exactly when
    /// `L(E_{n^3}, 1)` does, for squarefree `n`.
    pub const EIGENFORM: Self = Self([1, -1, -2, 1, 2, -1]);

    pub fn combine(&self, r: [i64; 6]) -> i64 {
        self.0.iter().zip(r).map(|(w, r)| w * r).sum()
    }
}

impl fmt::Display for ThetaWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", w.join(","))
    }
}

impl FromStr for ThetaWeights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(Self::H),
            "eigenform" => Ok(Self::EIGENFORM),
            _ => invalid(format!("unknown theta combination {s:?} (expected h or eigenform)")),
        }
    }
}

/// A positive definite ternary form `Q(v) = v^T G v / 2`, stored by the
/// even matrix `G` (twice the Gram matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryQF {
    g: [[i64; 3]; 3],
}

impl TernaryQF {
    /// `a x^2 + b y^2 + c z^2 + r yz + s xz + t xy`.
    pub fn from_coefficients(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        let g = [[2 * a, t, s], [t, 2 * b, r], [s, r, 2 * c]];
        let m1 = g[0][0];
        let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if m1 <= 0 || m2 <= 0 || det3(&g) <= 0 {
            return invalid(format!("form with matrix {g:?} is not positive definite"));
        }
        Ok(Self { g })
    }

    /// The six forms `Q_1, ..., Q_6`.
    pub fn builtin() -> [TernaryQF; 6] {
        let f = |a, b, c, r, s, t| Self::from_coefficients(a, b, c, r, s, t).unwrap();
        [
            f(1, 4, 144, 0, 0, 0),
            f(4, 5, 36, 0, 0, -4),
            f(4, 9, 16, 0, 0, 0),
            f(1, 16, 36, 0, 0, 0),
            f(4, 13, 13, 10, 0, 0),
            f(4, 4, 37, 4, 0, 0),
        ]
    }

    pub fn matrix(&self) -> &[[i64; 3]; 3] {
        &self.g
    }

    /// Determinant of the Gram matrix, `det(G) / 8`.
    pub fn gram_determinant(&self) -> i64 {
        det3(&self.g) / 8
    }

    pub fn eval(&self, v: [i64; 3]) -> i64 {
        let g = &self.g;
        let mut s = 0;
        for i in 0..3 {
            for j in 0..3 {
                s += v[i] * g[i][j] * v[j];
            }
        }
        s / 2
    }

    /// A variable orthogonal to the other two, as `(index, coefficient)`,
    /// preferring the largest coefficient.
    fn split_variable(&self) -> Option<(usize, i64)> {
        (0..3)
            .filter(|&i| (0..3).all(|j| j == i || self.g[i][j] == 0))
            .map(|i| (i, self.g[i][i] / 2))
            .max_by_key(|&(_, c)| c)
    }

    /// The binary form on the remaining two variables, as `(a, b, c)` for
    /// `a u^2 + b uv + c v^2`.
    fn complement(&self, i: usize) -> (i64, i64, i64) {
        let [j, k] = match i {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        (self.g[j][j] / 2, self.g[j][k], self.g[k][k] / 2)
    }
}

impl fmt::Display for TernaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.g;
        let terms = [
            (g[0][0] / 2, "x^2"),
            (g[1][1] / 2, "y^2"),
            (g[2][2] / 2, "z^2"),
            (g[1][2], "yz"),
            (g[0][2], "xz"),
            (g[0][1], "xy"),
        ];
        let mut first = true;
        for &(c, m) in terms.iter().filter(|(c, _)| *c != 0) {
            let body = if c.abs() == 1 { m.to_string() } else { format!("{}{m}", c.abs()) };
            match (first, c < 0) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

fn det3(g: &[[i64; 3]; 3]) -> i64 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Representation numbers `r(n) = #{v : Q(v) = n}` for `0 <= n <= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSeries {
    coeffs: Vec<u32>,
}

impl ThetaSeries {
    pub fn limit(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeff(&self, n: u64) -> u32 {
        self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

/// Counts of `a u^2 + b uv + c v^2 = n` for `n <= limit`, saturating into
/// `T` with an error on overflow.
fn binary_counts<T>(form: (i64, i64, i64), limit: u64) -> Result<Vec<T>>
where
    T: Copy + Default + TryFrom<u32> + Into<u32>,
{
    let (a, b, c) = form;
    let disc = 4 * a * c - b * b;
    debug_assert!(a > 0 && disc > 0);
    let lim = limit as i128;
    let (a, b, c, disc) = (a as i128, b as i128, c as i128, disc as i128);
    let mut out = vec![T::default(); limit as usize + 1];
    let vmax = isqrt((4 * a * lim / disc) as u64) as i128 + 1;
    for v in -vmax..=vmax {
        // a u^2 + b v u + c v^2 <= L  <=>  (2au + bv)^2 <= 4aL - disc v^2
        let room = 4 * a * lim - disc * v * v;
        if room < 0 {
            continue;
        }
        let s = isqrt(room as u64) as i128;
        let lo = (-b * v - s).div_euclid(2 * a) - 1;
        let hi = (-b * v + s).div_euclid(2 * a) + 1;
        for u in lo..=hi {
            let n = a * u * u + b * u * v + c * v * v;
            if n <= lim {
                let slot = &mut out[n as usize];
                let next = (*slot).into() + 1;
                *slot = T::try_from(next)
                    .map_err(|_| Error::Invariant(format!("representation count overflow at {n}")))?;
            }
        }
    }
    Ok(out)
}

/// Theta series by splitting `Q = c w^2 (+) binary` when possible, and by
/// direct enumeration otherwise.
pub fn theta_coeffs(form: &TernaryQF, limit: u64) -> Result<ThetaSeries> {
    let Some((i, c)) = form.split_variable() else {
        return theta_coeffs_direct(form, limit);
    };
    let bin: Vec<u32> = binary_counts(form.complement(i), limit)?;
    let mut coeffs = bin.clone();
    let c = c as u64;
    let mut t = 1u64;
    while c * t * t <= limit {
        let shift = (c * t * t) as usize;
        for n in shift..coeffs.len() {
            coeffs[n] += 2 * bin[n - shift];
        }
        t += 1;
    }
    Ok(ThetaSeries { coeffs })
}

/// Theta series by enumerating every lattice vector in the ellipsoid.
pub fn theta_coeffs_direct(form: &TernaryQF, limit: u64) -> Result<ThetaSeries> {
    let g = form.matrix();
    let det = det3(g) as i128;
    let cof = |i: usize| {
        let [j, k] = [(i + 1) % 3, (i + 2) % 3];
        (g[j][j] * g[k][k] - g[j][k] * g[k][j]) as i128
    };
    // |v_i|^2 <= 2 L cof_ii / det for Q(v) = v^T G v / 2
    let bound = |i: usize| isqrt((2 * limit as i128 * cof(i) / det) as u64) as i64 + 1;
    let (bx, by, bz) = (bound(0), bound(1), bound(2));
    let mut coeffs = vec![0u32; limit as usize + 1];
    for x in -bx..=bx {
        for y in -by..=by {
            for z in -bz..=bz {
                let n = form.eval([x, y, z]);
                if n >= 0 && n as u64 <= limit {
                    coeffs[n as usize] += 1;
                }
            }
        }
    }
    Ok(ThetaSeries { coeffs })
}

/// Dense coefficients `C(0..=L)` of `sum w_i theta_{Q_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSeries {
    weights: ThetaWeights,
    coeffs: Vec<i64>,
}

const DUMP_MAGIC: &[u8; 8] = b"SIXTHETA";

impl HSeries {
    pub fn limit(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn weights(&self) -> ThetaWeights {
        self.weights
    }

    /// With [`ThetaWeights::H`], `C(n) = 16 c(n)`.
    pub fn coeff(&self, n: u64) -> i64 {
        self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn from_theta(series: &[ThetaSeries], weights: ThetaWeights) -> Result<Self> {
        if series.len() != 6 {
            return invalid("a combination needs exactly six theta series");
        }
        let len = series.iter().map(|s| s.coeffs.len()).min().unwrap_or(0);
        let coeffs = (0..len)
            .map(|n| weights.combine(std::array::from_fn(|i| series[i].coeffs[n] as i64)))
            .collect();
        Ok(Self { weights, coeffs })
    }

    /// Raw dump: the magic bytes, the six weights, then `C(0), ..., C(L)`,
    /// all little-endian `i64`.
    pub fn write_dump(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(DUMP_MAGIC)?;
        for c in self.weights.0.iter().chain(&self.coeffs) {
            w.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        if buf.len() < 8 * 8 || &buf[..8] != DUMP_MAGIC || buf.len() % 8 != 0 {
            return invalid("not a theta coefficient dump");
        }
        let mut words = buf[8..].chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap()));
        let weights = ThetaWeights(std::array::from_fn(|_| words.next().unwrap()));
        Ok(Self { weights, coeffs: words.collect() })
    }
}

/// Dense `C(0..=limit)` of `16 h`.
pub fn h_coeffs(limit: u64) -> Result<HSeries> {
    combination_coeffs(limit, ThetaWeights::H)
}

/// Dense coefficients of any combination.
pub fn combination_coeffs(limit: u64, weights: ThetaWeights) -> Result<HSeries> {
    let series = TernaryQF::builtin()
        .par_iter()
        .map(|q| theta_coeffs(q, limit))
        .collect::<Result<Vec<_>>>()?;
    HSeries::from_theta(&series, weights)
}

/// `r_Q(n)` for selected `n` only, via one binary table of two bytes per
/// integer up to the largest target.
pub fn theta_coeffs_at(form: &TernaryQF, targets: &BTreeSet<u64>) -> Result<HashMap<u64, i64>> {
    let Some(&limit) = targets.last() else { return Ok(HashMap::new()) };
    let (i, c) = form
        .split_variable()
        .ok_or_else(|| Error::InvalidArgument(format!("form {form} has no split variable")))?;
    let bin: Vec<u16> = binary_counts(form.complement(i), limit)?;
    let c = c as u64;
    let list: Vec<u64> = targets.iter().copied().collect();
    Ok(list
        .par_iter()
        .map(|&n| {
            let mut r = bin[n as usize] as i64;
            let mut t = 1u64;
            while c * t * t <= n {
                r += 2 * bin[(n - c * t * t) as usize] as i64;
                t += 1;
            }
            (n, r)
        })
        .collect())
}

/// Coefficients of a combination at selected `n` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseCoeffs {
    pub weights: ThetaWeights,
    pub values: HashMap<u64, i64>,
}

/// `C(n)` for selected `n` only. Holds one binary table at a time.
pub fn h_coeffs_at(targets: &BTreeSet<u64>, weights: ThetaWeights) -> Result<SparseCoeffs> {
    let mut values: HashMap<u64, i64> = targets.iter().map(|&n| (n, 0)).collect();
    for (form, weight) in TernaryQF::builtin().iter().zip(weights.0) {
        if weight == 0 {
            continue;
        }
        for (n, r) in theta_coeffs_at(form, targets)? {
            *values.get_mut(&n).unwrap() += weight * r;
        }
    }
    Ok(SparseCoeffs { weights, values })
}

/// Source of `C(n)` values: a dense series or a sparse table.
pub trait HCoefficients {
    fn weights(&self) -> ThetaWeights;
    fn h_coeff(&self, n: u64) -> Option<i64>;
}

impl HCoefficients for HSeries {
    fn weights(&self) -> ThetaWeights {
        self.weights
    }

    fn h_coeff(&self, n: u64) -> Option<i64> {
        self.coeffs.get(n as usize).copied()
    }
}

impl HCoefficients for SparseCoeffs {
    fn weights(&self) -> ThetaWeights {
        self.weights
    }

    fn h_coeff(&self, n: u64) -> Option<i64> {
        self.values.get(&n).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankZeroVerdict {
    CertifiedRankZero,
    Inconclusive,
}

impl fmt::Display for RankZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankZeroVerdict::CertifiedRankZero => "certified_rank_zero",
            RankZeroVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome for one odd `k`: its squarefree part, the coefficient used
/// (if any) and the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCertificate {
    pub k: u64,
    pub core: u64,
    pub coeff: Option<i64>,
    pub verdict: RankZeroVerdict,
}

impl fmt::Display for ThetaCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coeff {
            Some(c) => write!(f, "{} {} {} {}", self.k, self.core, c, self.verdict),
            None => write!(f, "{} {} - {}", self.k, self.core, self.verdict),
        }
    }
}

/// The squarefree part `k'` of `k`, if `k` is eligible (odd, prime to 3).
pub fn certificate_core(k: u64) -> Result<u64> {
    if k == 0 || k % 2 == 0 || k % 3 == 0 {
        return invalid(format!("rank-zero certificate needs odd k prime to 3, got {k}"));
    }
    Ok(squarefree_decomposition(k).0)
}

/// Certifies `rank E_{k^3}(Q) = 0` when `k' = 1 mod 8` and `C(k') != 0`.
/// A squarefree `k' = 1 mod 8` is a fundamental discriminant. Only
/// [`ThetaWeights::EIGENFORM`] coefficients are accepted.
pub fn rank_zero_certificate(k: u64, h: &impl HCoefficients) -> Result<ThetaCertificate> {
    if h.weights() != ThetaWeights::EIGENFORM {
        return invalid(format!("certificates need the eigenform combination, got weights {}", h.weights()));
    }
    let core = certificate_core(k)?;
    let coeff = if core % 8 == 1 { h.h_coeff(core) } else { None };
    let verdict = match coeff {
        Some(c) if c != 0 => RankZeroVerdict::CertifiedRankZero,
        _ => RankZeroVerdict::Inconclusive,
    };
    Ok(ThetaCertificate { k, core, coeff, verdict })
}

/// The coefficient indices needed to certify the odd entries of `ks`.
pub fn certificate_targets(ks: &[u64]) -> BTreeSet<u64> {
    ks.iter()
        .filter_map(|&k| certificate_core(k).ok())
        .filter(|c| c % 8 == 1)
        .collect()
}
