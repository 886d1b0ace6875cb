//! Maximum incremental and minimum decremental ratios.
//!
//! For an FDH-VRS efficient unit `o` with response function `beta_o`:
//!
//! ```text
//! sigma_plus  = sup_{alpha > 1}          (beta_o(alpha) - 1) / (alpha - 1)
//! sigma_minus = min_{alpha_min <= alpha < 1} (beta_o(alpha) - 1) / (alpha - 1)
//! ```
//!
//! Both reduce to a scan of the ratio table.
//!
//! `sigma_plus`: on each step the quotient is largest at the step's left end,
//! and the step value there is some `beta_jo` with `alpha_jo` no larger. A
//! unit with `alpha_jo <= 1` and `beta_jo > 1` would dominate `o`, so for an
//! efficient unit the supremum is attained by a unit with `alpha_jo > 1`, and
//!
//! ```text
//! sigma_plus = max(0, max_{j: alpha_jo > 1} (beta_jo - 1) / (alpha_jo - 1)),
//! ```
//!
//! with 0 when no such unit exists (`beta_o = 1` on `(1, +inf)`).
//!
//! `sigma_minus`: for `alpha < 1` every reachable step value is below 1
//! (again by efficiency), and `(1 - v) / (1 - alpha)` grows with `alpha`
//! on a step of value `v`, so the minimum sits at a step's left end. If the
//! step starting at `a` has value `beta_jo` with `alpha_jo <= a`, then
//! `(1 - beta_jo) / (1 - alpha_jo) <= (1 - beta_jo) / (1 - a)`; conversely
//! `beta_o(alpha_jo) >= beta_jo`. Hence
//!
//! ```text
//! sigma_minus = min_{j: alpha_jo < 1} (beta_jo - 1) / (alpha_jo - 1),
//! ```
//!
//! and `+inf` when no unit is smaller than `o` (the left domain is empty).
//! Units within tolerance of `alpha_jo = 1` belong to neither side.

use crate::error::{FdhError, Result};
use crate::model::{Dataset, RatioTable};
use crate::scalar::{Extended, Scalar, Tolerance};
use crate::technology::dominating_unit;

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRatios<S = f64> {
    pub sigma_plus: S,
    pub sigma_minus: Extended<S>,
    /// Unit attaining `sigma_plus`; `None` when the zero floor applies.
    pub plus_witness: Option<usize>,
    /// Unit attaining `sigma_minus`; `None` when it is infinite.
    pub minus_witness: Option<usize>,
}

pub(crate) fn ensure_efficient<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<()> {
    d.check_index(o)?;
    match dominating_unit(d, o) {
        Some(_) => Err(FdhError::InefficientUnit(d.name(o).to_string())),
        None => Ok(()),
    }
}

/// Units strictly larger than `o` in the input-ratio sense.
pub fn incremental_set<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> Vec<usize> {
    table
        .pairs()
        .filter(|(_, a, _)| a.gt_tol(&S::one(), tol))
        .map(|(j, _, _)| j)
        .collect()
}

/// Units strictly smaller than `o` in the input-ratio sense.
pub fn decremental_set<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> Vec<usize> {
    table
        .pairs()
        .filter(|(_, a, _)| a.lt_tol(&S::one(), tol))
        .map(|(j, _, _)| j)
        .collect()
}

fn quotient<S: Scalar>(table: &RatioTable<S>, j: usize) -> S {
    let one = S::one();
    (table.beta[j].clone() - one.clone()) / (table.alpha[j].clone() - one)
}

/// `sigma_plus` from a ratio table, without the efficiency check.
pub fn sigma_plus_from_table<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> (S, Option<usize>) {
    let mut best: Option<(S, usize)> = None;
    for j in incremental_set(table, tol) {
        let q = quotient(table, j);
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, j));
        }
    }
    match best {
        Some((q, j)) if q >= S::zero() => (q, Some(j)),
        _ => (S::zero(), None),
    }
}

/// `sigma_minus` from a ratio table, without the efficiency check.
pub fn sigma_minus_from_table<S: Scalar>(
    table: &RatioTable<S>,
    tol: Tolerance,
) -> (Extended<S>, Option<usize>) {
    let mut best: Option<(S, usize)> = None;
    for j in decremental_set(table, tol) {
        let q = quotient(table, j);
        if best.as_ref().is_none_or(|(b, _)| q < *b) {
            best = Some((q, j));
        }
    }
    match best {
        Some((q, j)) => (Extended::Finite(q), Some(j)),
        None => (Extended::Infinite, None),
    }
}

pub fn ratios_from_table<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> ScaleRatios<S> {
    let (sigma_plus, plus_witness) = sigma_plus_from_table(table, tol);
    let (sigma_minus, minus_witness) = sigma_minus_from_table(table, tol);
    ScaleRatios {
        sigma_plus,
        sigma_minus,
        plus_witness,
        minus_witness,
    }
}

/// Maximum incremental ratio of an efficient unit, with its witness.
pub fn sigma_plus<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<(S, Option<usize>)> {
    ensure_efficient(d, o)?;
    Ok(sigma_plus_from_table(&RatioTable::new(d, o)?, tol))
}

/// Minimum decremental ratio of an efficient unit, with its witness.
pub fn sigma_minus<S: Scalar>(
    d: &Dataset<S>,
    o: usize,
    tol: Tolerance,
) -> Result<(Extended<S>, Option<usize>)> {
    ensure_efficient(d, o)?;
    Ok(sigma_minus_from_table(&RatioTable::new(d, o)?, tol))
}

pub fn scale_ratios<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<ScaleRatios<S>> {
    ensure_efficient(d, o)?;
    Ok(ratios_from_table(&RatioTable::new(d, o)?, tol))
}
