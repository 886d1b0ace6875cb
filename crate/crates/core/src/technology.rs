//! Membership and dominance in the FDH technologies.
//!
//! A point `(x, y)` belongs to `T^Delta` when a single observed unit `j`,
//! scaled by some admissible `delta`, uses no more input and yields no less
//! output: `delta * x_j <= x` and `delta * y_j >= y`. For fixed `j` those
//! constraints describe the closed interval
//! `[max_r y_r / y_rj, min_i x_i / x_ij]`, so every test below is a scan over
//! the units with one interval intersection each.
//!
//! Comparisons here are plain `<`/`<=` on the scalar type; no tolerance.

use crate::error::{FdhError, Result};
use crate::model::{Dataset, Delta};
use crate::scalar::{max_of, min_of, Scalar};

/// Input/output bundle to test against a technology.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S = f64> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: Vec<S>, y: Vec<S>) -> Self {
        Point { x, y }
    }

    /// The observed bundle of unit `j`.
    pub fn of_unit(d: &Dataset<S>, j: usize) -> Self {
        Point {
            x: d.input(j).to_vec(),
            y: d.output(j).to_vec(),
        }
    }

    /// `(delta * x_o, delta * y_o)`.
    pub fn scaled_unit(d: &Dataset<S>, o: usize, delta: &S) -> Self {
        Point {
            x: d.input(o).iter().map(|v| v.clone() * delta.clone()).collect(),
            y: d.output(o).iter().map(|v| v.clone() * delta.clone()).collect(),
        }
    }

    fn check(&self, d: &Dataset<S>) -> Result<()> {
        if self.x.len() != d.num_inputs() || self.y.len() != d.num_outputs() {
            return Err(FdhError::DimensionMismatch {
                inputs: d.num_inputs(),
                outputs: d.num_outputs(),
                found_inputs: self.x.len(),
                found_outputs: self.y.len(),
            });
        }
        Ok(())
    }
}

/// Scaling interval `[lo, hi]` under which unit `j` covers `p`, before
/// intersecting with any returns-to-scale region.
fn covering_interval<S: Scalar>(d: &Dataset<S>, j: usize, p: &Point<S>) -> (S, S) {
    let lo = p
        .y
        .iter()
        .zip(d.output(j))
        .map(|(py, yj)| py.clone() / yj.clone())
        .fold(S::zero(), max_of);
    let hi = p
        .x
        .iter()
        .zip(d.input(j))
        .map(|(px, xj)| px.clone() / xj.clone())
        .reduce(min_of)
        .expect("at least one input");
    (lo, hi)
}

/// Intersection of `[lo, hi]` with the region of `delta`, if nonempty.
pub(crate) fn clip_to_region<S: Scalar>(delta: Delta, lo: S, hi: S) -> Option<(S, S)> {
    let (rlo, rhi) = delta.bounds::<S>();
    let lo = max_of(lo, rlo);
    let hi = match rhi {
        Some(h) => min_of(hi, h),
        None => hi,
    };
    (lo <= hi).then_some((lo, hi))
}

/// `p ∈ T^Delta`.
pub fn member<S: Scalar>(d: &Dataset<S>, delta: Delta, p: &Point<S>) -> Result<bool> {
    p.check(d)?;
    Ok((0..d.len()).any(|j| {
        let (lo, hi) = covering_interval(d, j, p);
        clip_to_region(delta, lo, hi).is_some()
    }))
}

/// `p` lies in the interior of `T^VRS`: some unit uses strictly less of every
/// input and yields strictly more of every output, with `p.y > 0`.
pub fn interior_member<S: Scalar>(d: &Dataset<S>, p: &Point<S>) -> Result<bool> {
    p.check(d)?;
    if p.y.iter().any(|v| *v <= S::zero()) {
        return Ok(false);
    }
    Ok((0..d.len()).any(|j| {
        d.input(j).iter().zip(&p.x).all(|(xj, px)| xj < px)
            && d.output(j).iter().zip(&p.y).all(|(yj, py)| yj > py)
    }))
}

/// Unit `j` weakly dominates `o` with a different bundle.
pub fn dominates<S: Scalar>(d: &Dataset<S>, j: usize, o: usize) -> bool {
    let x_le = d.input(j).iter().zip(d.input(o)).all(|(a, b)| a <= b);
    let y_ge = d.output(j).iter().zip(d.output(o)).all(|(a, b)| a >= b);
    let same = d.input(j) == d.input(o) && d.output(j) == d.output(o);
    x_le && y_ge && !same
}

/// First observed unit that dominates `o` under VRS, if any.
pub fn dominating_unit<S: Scalar>(d: &Dataset<S>, o: usize) -> Option<usize> {
    (0..d.len()).find(|&j| j != o && dominates(d, j, o))
}

/// Delta-efficiency: no point of `T^Delta` other than `(x_o, y_o)` itself
/// uses no more input and yields no less output.
///
/// Units with data identical to `o` never witness inefficiency.
pub fn is_efficient<S: Scalar>(d: &Dataset<S>, delta: Delta, o: usize) -> Result<bool> {
    d.check_index(o)?;
    if delta == Delta::Vrs {
        return Ok(dominating_unit(d, o).is_none());
    }
    let target = Point::of_unit(d, o);
    for j in 0..d.len() {
        let (lo, hi) = covering_interval(d, j, &target);
        let Some((lo, hi)) = clip_to_region(delta, lo, hi) else {
            continue;
        };
        if lo < hi {
            // Only one scaling of j can reproduce x_o exactly.
            return Ok(false);
        }
        if !reproduces(d, j, o, &lo) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `delta * (x_j, y_j) == (x_o, y_o)`.
fn reproduces<S: Scalar>(d: &Dataset<S>, j: usize, o: usize, delta: &S) -> bool {
    let same_x = d
        .input(j)
        .iter()
        .zip(d.input(o))
        .all(|(a, b)| a.clone() * delta.clone() == *b);
    let same_y = d
        .output(j)
        .iter()
        .zip(d.output(o))
        .all(|(a, b)| a.clone() * delta.clone() == *b);
    same_x && same_y
}
