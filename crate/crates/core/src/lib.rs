//! Radial efficiency, returns-to-scale classification and scale ratios for
//! free disposal hull (FDH) technologies.
//!
//! The analysis is generic over [`Scalar`]: `f64` with a relative tolerance,
//! or exact [`Rational`] arithmetic. Every quantity is computed from the
//! ratio table of a reference unit ([`RatioTable`]); the [`oracle`] module
//! re-derives the same quantities by brute force for testing.

pub mod efficiency;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod par;
pub mod response;
pub mod rts;
pub mod scalar;
pub mod scale;
pub mod technology;
pub mod verify;

pub use efficiency::{is_mpss, phi, scores, theta, EfficiencyScores, Score};
pub use error::{FdhError, Result};
pub use model::{ratio_table, Dataset, Delta, Orientation, RatioTable};
pub use response::{build_response, one_sided_step_derivatives, ResponseFunction, StepSlope};
pub use rts::{
    check_consistency, classify, classify_all, classify_all_sequential, grs, left_rts, right_rts,
    GrsClass, LeftRts, OneSidedRts, RightRts, RtsReport, UnitOutcome, Violation,
};
pub use scalar::{Extended, Rational, Scalar, Tolerance};
pub use scale::{scale_ratios, sigma_minus, sigma_plus, ScaleRatios};
pub use technology::{is_efficient, member, Point};
