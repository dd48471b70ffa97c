//! Certified continued fractions of real algebraic numbers, word-combinatorial
//! detectors on their quotient words, and PSL(2,Z) orbit scans.
//!
//! All decisions are made in exact integer arithmetic or with outward-rounded
//! dyadic intervals; nothing here trusts a float.

pub mod algebraic;
pub mod cf;
pub mod dyadic;
pub mod error;
pub mod format;
pub mod harness;
pub mod json;
pub mod mat2;
pub mod orbit;
pub mod poly;
pub mod words;

pub use algebraic::{AlgebraicNumber, DyadicInterval};
pub use cf::{
    detect_period, expand, expand_with, growth_metrics, verify_cf_identities, word_matrix, CfExpansion,
    Convergents, ExpandConfig, GrowthReport, IdentityReport, PeriodicForm,
};
pub use dyadic::{Dyadic, Interval};
pub use error::{Error, Result};
pub use harness::{PairContext, Verdict};
pub use mat2::Mat2;
pub use orbit::{Alpha, ApproxRecord, NormMode, OrbitConfig, OrbitScan, UnimodularMatrix, Xi};
pub use poly::IntPolynomial;
pub use words::{DetectorParams, RepetitionWitness, SharedBlockWitness, Word};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
