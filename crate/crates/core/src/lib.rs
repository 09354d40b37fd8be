//! Deciding whether integers are sums of two rational sixth powers.
//!
//! A rational solution of `a^6 + b^6 = k` is a rational point on the plane
//! curve `C_k : x^6 + y^6 = k z^6`. The pipeline implemented here removes
//! candidate values of `k` in stages:
//!
//! 1. [`local`]: `C_k` must have points over every completion of `Q`.
//! 2. [`theta`]: nonvanishing of a weight 3/2 theta coefficient shows that
//!    `y^2 = x^3 + k^3` has rank zero, which rules out odd `k`.
//! 3. [`maps`] + [`elliptic`] + [`mwsieve`]: `C_k` maps to six Mordell curves
//!    `y^2 = x^3 + a`; given generators of a finite-index subgroup of one of
//!    them, the Mordell-Weil sieve proves `C_k(Q)` empty.
//!
//! [`repfind`] goes the other way and constructs non-integral representations.

pub mod arith;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod local;
pub mod maps;
pub mod mwsieve;
pub mod repfind;
pub mod theta;

pub use arith::{lagrange_reduce, multiplicative_order, sixth_power_free, Lattice2D, SixthPowerFree};
pub use elliptic::{
    AbelianGroupFp, FpCurve, FpPoint, MordellCurve, MwSubgroup, RationalPoint, TorsionStructure,
};
pub use error::{Error, Result};
pub use local::{LocalCertificate, LocalFilter, LocalReason, SexticCurve, SumsetCache};
pub use maps::{CodomainTag, CurveMapSpec, ImageSetFp};
pub use mwsieve::{SieveConfig, SieveOutcome, SieveStage, SieveState, SieveVerdict};
pub use theta::{HSeries, TernaryQF, ThetaSeries, ThetaWeights};
