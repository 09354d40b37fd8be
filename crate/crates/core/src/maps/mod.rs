//! Rational maps from `C_k : x^6 + y^6 = k z^6` to Mordell curves.
//!
//! Each map is given by one patch `(X : Y : Z)` of homogeneous polynomials
//! in `x, y, z` with coefficients in `Z[k]`. Every patch here is defined at
//! every point of `C_k` over `F_p` for `p` not dividing `6k`, which
//! [`image_set_fp`] re-checks at runtime.

pub mod poly;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::arith::{big_mod, pow_mod};
use crate::elliptic::{FpCurve, FpPoint, MordellCurve, RationalPoint};
use crate::error::{invalid, Error, Result};

use poly::Poly;

/// The six codomains `y^2 = x^3 + a(k)`, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodomainTag {
    Ek,
    E4k,
    EmK2,
    E16k2,
    Ek3,
    Em4k4,
}

impl CodomainTag {
    pub const ALL: [CodomainTag; 6] = [
        CodomainTag::Ek,
        CodomainTag::E4k,
        CodomainTag::EmK2,
        CodomainTag::E16k2,
        CodomainTag::Ek3,
        CodomainTag::Em4k4,
    ];

    /// The coefficient `a(k)`.
    pub fn coefficient(self, k: &BigInt) -> BigInt {
        let k2 = k * k;
        match self {
            CodomainTag::Ek => k.clone(),
            CodomainTag::E4k => 4 * k,
            CodomainTag::EmK2 => -k2,
            CodomainTag::E16k2 => 16 * k2,
            CodomainTag::Ek3 => k2 * k,
            CodomainTag::Em4k4 => -4 * &k2 * &k2,
        }
    }

    /// `a(k)` as a polynomial in the variable `k`.
    pub fn coefficient_poly(self) -> Poly {
        let (c, e) = match self {
            CodomainTag::Ek => (1, 1),
            CodomainTag::E4k => (4, 1),
            CodomainTag::EmK2 => (-1, 2),
            CodomainTag::E16k2 => (16, 2),
            CodomainTag::Ek3 => (1, 3),
            CodomainTag::Em4k4 => (-4, 4),
        };
        Poly::term(c, [0, 0, 0, e])
    }

    pub fn curve(self, k: u64) -> MordellCurve {
        MordellCurve::new(self.coefficient(&BigInt::from(k))).expect("k is nonzero")
    }

    pub fn name(self) -> &'static str {
        match self {
            CodomainTag::Ek => "Ek",
            CodomainTag::E4k => "E4k",
            CodomainTag::EmK2 => "E-k2",
            CodomainTag::E16k2 => "E16k2",
            CodomainTag::Ek3 => "Ek3",
            CodomainTag::Em4k4 => "E-4k4",
        }
    }

    /// Built-in maps landing on this codomain.
    pub fn maps(self) -> impl Iterator<Item = &'static CurveMapSpec> {
        builtin_maps().iter().filter(move |m| m.codomain == self)
    }
}

impl fmt::Display for CodomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodomainTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CodomainTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown codomain tag {s:?}")))
    }
}

/// A map `C_k -> E_{a(k)}` given by one coordinate patch.
#[derive(Debug, Clone)]
pub struct CurveMapSpec {
    id: usize,
    codomain: CodomainTag,
    patch: [Poly; 3],
}

impl CurveMapSpec {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn codomain(&self) -> CodomainTag {
        self.codomain
    }

    pub fn patch(&self) -> &[Poly; 3] {
        &self.patch
    }

    pub fn degree(&self) -> u32 {
        self.patch[0].xyz_degree().expect("patches are homogeneous")
    }

    /// `Y^2 Z - X^3 - a(k) Z^3` reduced modulo `x^6 + y^6 - k z^6`, with `k`
    /// kept symbolic. Zero exactly when the patch lands on the codomain.
    pub fn weierstrass_residual(&self) -> Poly {
        let [x, y, z] = &self.patch;
        let rhs = &x.pow(3) + &(&self.codomain().coefficient_poly() * &z.pow(3));
        (&(&y.pow(2) * z) - &rhs).reduce_mod_sextic()
    }

    pub fn satisfies_weierstrass_identity(&self) -> bool {
        self.weierstrass_residual().is_zero()
    }

    /// Image of a rational point `(x : y : z)` of `C_k`.
    pub fn eval_rational(&self, k: u64, pt: [i64; 3]) -> Result<RationalPoint> {
        let [x, y, z] = pt.map(BigInt::from);
        let kk = BigInt::from(k);
        if &x.pow(6) + &y.pow(6) != &kk * z.pow(6) {
            return invalid(format!("({x} : {y} : {z}) is not on C_{k}"));
        }
        let [px, py, pz] = &self.patch;
        let vals = [&x, &y, &z, &kk];
        RationalPoint::from_projective(px.eval(vals), py.eval(vals), pz.eval(vals))
    }

    /// Image of an `F_p` point `(x : y : z)` of `C_k`.
    pub fn eval_fp(&self, curve: &FpCurve, k: u64, pt: [u64; 3]) -> Result<FpPoint> {
        let p = curve.p();
        let vals = [pt[0], pt[1], pt[2], k % p];
        let [x, y, z] = [0, 1, 2].map(|i| self.patch[i].eval_mod(vals, p));
        if x == 0 && y == 0 && z == 0 {
            return Err(Error::PatchCoverage {
                map: self.id,
                p,
                point: format!("({} : {} : {})", pt[0], pt[1], pt[2]),
            });
        }
        let image = curve.from_projective(x, y, z);
        if !curve.contains(image) {
            return Err(Error::Invariant(format!("map {} leaves E over F_{p}", self.id)));
        }
        Ok(image)
    }
}

fn t(c: i64, e: [u32; 4]) -> Poly {
    Poly::term(c, e)
}

fn sum(parts: &[Poly]) -> Poly {
    parts.iter().fold(Poly::zero(), |acc, p| &acc + p)
}

/// The ten built-in maps, numbered 1 to 10.
pub fn builtin_maps() -> &'static [CurveMapSpec] {
    static MAPS: OnceLock<Vec<CurveMapSpec>> = OnceLock::new();
    MAPS.get_or_init(|| {
        use CodomainTag::*;
        let spec = |id, codomain, patch| CurveMapSpec { id, codomain, patch };
        vec![
            spec(1, Ek, [t(-1, [0, 2, 1, 0]), t(1, [3, 0, 0, 0]), t(1, [0, 0, 3, 0])]),
            spec(2, Ek, [t(-1, [2, 0, 1, 0]), t(1, [0, 3, 0, 0]), t(1, [0, 0, 3, 0])]),
            spec(
                3,
                E4k,
                [t(1, [4, 1, 1, 0]), sum(&[t(1, [6, 0, 0, 0]), t(2, [0, 6, 0, 0])]), t(1, [0, 3, 3, 0])],
            ),
            spec(
                4,
                E4k,
                [t(1, [1, 4, 1, 0]), sum(&[t(2, [6, 0, 0, 0]), t(1, [0, 6, 0, 0])]), t(1, [3, 0, 3, 0])],
            ),
            spec(5, EmK2, [t(1, [0, 1, 2, 1]), t(1, [3, 0, 0, 1]), t(1, [0, 3, 0, 0])]),
            spec(6, EmK2, [t(1, [1, 0, 2, 1]), t(1, [0, 3, 0, 1]), t(1, [3, 0, 0, 0])]),
            spec(
                7,
                E16k2,
                [t(-4, [2, 2, 2, 0]), sum(&[t(-8, [6, 0, 0, 0]), t(4, [0, 0, 6, 1])]), t(1, [0, 0, 6, 0])],
            ),
            spec(8, Ek3, [t(1, [2, 1, 0, 1]), t(1, [0, 0, 3, 2]), t(1, [0, 3, 0, 0])]),
            spec(9, Ek3, [t(1, [1, 2, 0, 1]), t(1, [0, 0, 3, 2]), t(1, [3, 0, 0, 0])]),
            spec(
                10,
                Em4k4,
                [t(1, [1, 1, 4, 2]), sum(&[t(1, [0, 6, 0, 2]), t(-1, [6, 0, 0, 2])]), t(1, [3, 3, 0, 0])],
            ),
        ]
    })
}

pub fn map_by_id(id: usize) -> Result<&'static CurveMapSpec> {
    builtin_maps()
        .iter()
        .find(|m| m.id == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no map numbered {id}")))
}

/// Projective points of `C_k` over `F_p`: `(x, y, 1)` and `(x, 1, 0)`.
pub fn curve_points_fp(k: u64, p: u64) -> Vec<[u64; 3]> {
    let sixth: Vec<u64> = (0..p).map(|v| pow_mod(v, 6, p)).collect();
    let kp = k % p;
    let mut pts = Vec::new();
    for x in 0..p {
        for y in 0..p {
            if (sixth[x as usize] + sixth[y as usize]) % p == kp {
                pts.push([x, y, 1]);
            }
        }
    }
    for x in 0..p {
        if (sixth[x as usize] + 1) % p == 0 {
            pts.push([x, 1, 0]);
        }
    }
    pts
}

/// The image `phi(C_k(F_p))` inside `E_{a(k)}(F_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSetFp {
    p: u64,
    source_points: usize,
    points: BTreeSet<FpPoint>,
}

impl ImageSetFp {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn source_points(&self) -> usize {
        self.source_points
    }

    pub fn points(&self) -> &BTreeSet<FpPoint> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: &FpPoint) -> bool {
        self.points.contains(pt)
    }
}

/// Computes the image of `C_k(F_p)` under `map` for a prime `p` not dividing `6k`.
pub fn image_set_fp(k: u64, p: u64, map: &CurveMapSpec) -> Result<ImageSetFp> {
    if k == 0 {
        return invalid("k must be positive");
    }
    let a = map.codomain.coefficient(&BigInt::from(k));
    let curve = MordellCurve::new(a)?.reduce(p)?;
    if big_mod(&BigInt::from(k), p) == 0 {
        return invalid(format!("{p} divides k = {k}"));
    }
    let src = curve_points_fp(k, p);
    let points = src
        .iter()
        .map(|&pt| map.eval_fp(&curve, k, pt))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(ImageSetFp { p, source_points: src.len(), points })
}

/// Whether the rational torsion of every codomain is known to avoid
/// `phi(C_k(Q))`. True for `k > 2`: the torsion points of these curves pull
/// back only to points of `C_1` and `C_2`.
pub fn torsion_image_excludes(k: u64) -> bool {
    k > 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn sextic() -> Poly {
        sum(&[t(1, [6, 0, 0, 0]), t(1, [0, 6, 0, 0]), t(-1, [0, 0, 6, 1])])
    }

    #[test]
    fn maps_land_on_codomain_symbolically() {
        assert!(sextic().reduce_mod_sextic().is_zero());
        for m in builtin_maps() {
            assert!(m.weierstrass_residual().is_zero(), "map {}", m.id());
            assert!(m.satisfies_weierstrass_identity());
            let [_, y, z] = m.patch();
            let d = m.degree();
            assert!(y.xyz_degree() == Some(d) && z.xyz_degree() == Some(d));
            let expect = if [3, 4, 7, 10].contains(&m.id()) { 6 } else { 3 };
            assert_eq!(d, expect, "map {}", m.id());
        }
    }

    #[test]
    fn degrees_and_tags() {
        assert_eq!(builtin_maps().len(), 10);
        let counts: Vec<usize> = CodomainTag::ALL.iter().map(|t| t.maps().count()).collect();
        assert_eq!(counts, vec![2, 2, 2, 1, 2, 1]);
        for tag in CodomainTag::ALL {
            assert_eq!(tag.name().parse::<CodomainTag>().unwrap(), tag);
        }
        assert!("E5k".parse::<CodomainTag>().is_err());
        assert!(map_by_id(11).is_err());
    }

    #[test]
    fn rational_images() {
        // 1 + 64 = 65
        let m3 = map_by_id(3).unwrap();
        let img = m3.eval_rational(65, [1, 2, 1]).unwrap();
        assert!(CodomainTag::E4k.curve(65).contains(&img));
        assert_eq!(img.affine().unwrap().0, num_rational::BigRational::new(1.into(), 4.into()));
        assert!(m3.eval_rational(65, [1, 1, 1]).is_err());
        for m in builtin_maps() {
            let img = m.eval_rational(65, [2, -1, 1]).unwrap();
            assert!(m.codomain().curve(65).contains(&img), "map {}", m.id());
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(curve_points_fp(138826, 5).len(), 6);
        assert_eq!(curve_points_fp(138826, 7).len(), 36);
        let m3 = map_by_id(3).unwrap();
        assert_eq!(image_set_fp(138826, 5, m3).unwrap().len(), 3);
        assert_eq!(image_set_fp(138826, 7, m3).unwrap().len(), 6);
        assert!(image_set_fp(138826, 3, m3).is_err());
        assert!(image_set_fp(35, 7, m3).is_err());
    }

    #[test]
    fn curve_points_satisfy_equation_and_weil_bound() {
        for p in primes_up_to(100).into_iter().filter(|&p| p > 3) {
            for k in [1u64, 2, 17, 65, 2017, 138826] {
                if k % p == 0 {
                    continue;
                }
                let pts = curve_points_fp(k, p);
                for [x, y, z] in &pts {
                    assert_eq!((pow_mod(*x, 6, p) + pow_mod(*y, 6, p)) % p, k % p * pow_mod(*z, 6, p) % p);
                }
                // genus 10: |#C(F_p) - (p + 1)| <= 20 sqrt(p)
                let dev = (pts.len() as f64 - (p + 1) as f64).abs();
                assert!(dev <= 20.0 * (p as f64).sqrt(), "k={k} p={p}");
            }
        }
    }

    #[test]
    fn every_patch_covers_every_point() {
        for p in primes_up_to(120).into_iter().filter(|&p| p > 3) {
            for k in [1u64, 2, 5, 17, 65, 2017, 138826, 3506050] {
                if k % p == 0 {
                    continue;
                }
                for m in builtin_maps() {
                    let img = image_set_fp(k, p, m).unwrap();
                    assert!(img.len() <= img.source_points());
                }
            }
        }
    }

    #[test]
    fn reduction_commutes_with_maps() {
        let k = 65u64;
        for m in builtin_maps() {
            let e = m.codomain().curve(k);
            let q = m.eval_rational(k, [1, 2, 1]).unwrap();
            for p in [7u64, 11, 17, 19, 23, 29, 31] {
                let fp = e.reduce(p).unwrap();
                let direct = m.eval_fp(&fp, k, [1, 2, 1]).unwrap();
                assert_eq!(e.reduce_point(&q, p).unwrap(), direct);
            }
        }
        assert!(torsion_image_excludes(3));
        assert!(!torsion_image_excludes(2));
    }
}
