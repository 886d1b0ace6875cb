//! The stepwise response function of a unit under FDH-VRS.
//!
//! `beta_o(alpha)` is the largest proportion of `y_o` producible from
//! `alpha * x_o`. Unit `j` contributes `beta_jo` once `alpha >= alpha_jo`, so
//! the function is the running maximum of `beta_jo` over units sorted by
//! `alpha_jo`: piecewise constant, right-continuous and nondecreasing on
//! `[min_j alpha_jo, +inf)`.

use crate::error::{FdhError, Result};
use crate::model::{Dataset, RatioTable};
use crate::scalar::Scalar;
use crate::technology::dominating_unit;

/// One step: the function equals `value` from `threshold` up to the next
/// step's threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<S = f64> {
    pub threshold: S,
    pub value: S,
}

/// Canonical step list: thresholds and values both strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseFunction<S = f64> {
    pub reference: usize,
    steps: Vec<Step<S>>,
}

/// One-sided slope of a step function at a point: either flat or a jump.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepSlope {
    Zero,
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepDerivatives {
    pub right: StepSlope,
    /// `None` when the domain does not extend to the left of 1.
    pub left: Option<StepSlope>,
}

impl<S: Scalar> ResponseFunction<S> {
    pub fn from_table(table: &RatioTable<S>) -> Self {
        let mut order: Vec<usize> = (0..table.len()).collect();
        order.sort_by(|&a, &b| {
            table.alpha[a]
                .partial_cmp(&table.alpha[b])
                .expect("ratios are comparable")
        });
        let mut steps: Vec<Step<S>> = Vec::new();
        for j in order {
            let (alpha, beta) = (&table.alpha[j], &table.beta[j]);
            match steps.last_mut() {
                Some(last) if last.threshold == *alpha => {
                    if *beta > last.value {
                        last.value = beta.clone();
                    }
                }
                Some(last) if *beta <= last.value => {}
                _ => steps.push(Step {
                    threshold: alpha.clone(),
                    value: beta.clone(),
                }),
            }
        }
        ResponseFunction {
            reference: table.reference,
            steps,
        }
    }

    pub fn steps(&self) -> &[Step<S>] {
        &self.steps
    }

    /// Left end of the domain.
    pub fn alpha_min(&self) -> &S {
        &self.steps[0].threshold
    }

    /// `beta_o(alpha)`; errors below the domain.
    pub fn eval(&self, alpha: &S) -> Result<S> {
        let idx = self.steps.partition_point(|s| s.threshold <= *alpha);
        if idx == 0 {
            return Err(FdhError::OutsideDomain(alpha.to_f64()));
        }
        Ok(self.steps[idx - 1].value.clone())
    }

    /// Limit of `beta_o` from the left at `alpha`, if `alpha` is above the
    /// left end of the domain.
    pub fn left_limit(&self, alpha: &S) -> Option<S> {
        let idx = self.steps.partition_point(|s| s.threshold < *alpha);
        (idx > 0).then(|| self.steps[idx - 1].value.clone())
    }
}

pub fn build_response<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<ResponseFunction<S>> {
    Ok(ResponseFunction::from_table(&RatioTable::new(d, o)?))
}

/// One-sided derivatives of `beta_o` at `alpha = 1` for an FDH-VRS efficient
/// unit.
///
/// Steps are right-continuous and the next threshold after 1 lies strictly
/// above it, so the right derivative is always zero. The left one is
/// infinite exactly when the function jumps at 1.
pub fn one_sided_step_derivatives<S: Scalar>(
    d: &Dataset<S>,
    r: &ResponseFunction<S>,
) -> Result<StepDerivatives> {
    let o = r.reference;
    if dominating_unit(d, o).is_some() {
        return Err(FdhError::InefficientUnit(d.name(o).to_string()));
    }
    let one = S::one();
    let at_one = r.eval(&one)?;
    let left = r.left_limit(&one).map(|below| {
        if below < at_one {
            StepSlope::Infinite
        } else {
            StepSlope::Zero
        }
    });
    Ok(StepDerivatives {
        right: StepSlope::Zero,
        left,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::scalar::Rational;

    fn step_pairs(r: &ResponseFunction<Rational>) -> Vec<(Rational, Rational)> {
        r.steps()
            .iter()
            .map(|s| (s.threshold.clone(), s.value.clone()))
            .collect()
    }

    #[test]
    fn four_units_unit_b_steps() {
        let d = four_units();
        let r = build_response(&d, B).unwrap();
        assert_eq!(
            step_pairs(&r),
            vec![
                (q(1, 3), q(1, 2)),
                (q(1, 1), q(1, 1)),
                (q(5, 3), q(5, 4)),
                (q(2, 1), q(13, 4)),
            ]
        );
        assert_eq!(r.eval(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(r.eval(&q(1, 1)).unwrap(), q(1, 1));
        assert_eq!(r.eval(&q(3, 2)).unwrap(), q(1, 1));
        assert_eq!(r.eval(&q(100, 1)).unwrap(), q(13, 4));
        assert!(matches!(r.eval(&q(1, 4)), Err(FdhError::OutsideDomain(_))));
    }

    #[test]
    fn efficient_units_have_value_one_at_one() {
        let d = four_units();
        for o in 0..d.len() {
            assert_eq!(build_response(&d, o).unwrap().eval(&q(1, 1)).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn smallest_unit_domain_starts_at_one() {
        let d = four_units();
        assert_eq!(*build_response(&d, A).unwrap().alpha_min(), q(1, 1));
    }

    #[test]
    fn derivatives_four_units() {
        let d = four_units();
        let b = one_sided_step_derivatives(&d, &build_response(&d, B).unwrap()).unwrap();
        assert_eq!(b.right, StepSlope::Zero);
        assert_eq!(b.left, Some(StepSlope::Infinite));
        let c = one_sided_step_derivatives(&d, &build_response(&d, C).unwrap()).unwrap();
        assert_eq!((c.right, c.left), (StepSlope::Zero, Some(StepSlope::Infinite)));
        let a = one_sided_step_derivatives(&d, &build_response(&d, A).unwrap()).unwrap();
        assert_eq!(a.left, None);
    }

    #[test]
    fn derivatives_reject_inefficient_unit() {
        let d = single_io(&[("B", 3, 4), ("E", 4, 4)]);
        let r = build_response(&d, 1).unwrap();
        assert!(matches!(
            one_sided_step_derivatives(&d, &r),
            Err(FdhError::InefficientUnit(_))
        ));
    }

    #[test]
    fn dominated_and_tied_steps_are_merged() {
        // Two units at the same input scale and one beaten by a cheaper unit.
        let d = single_io(&[("O", 2, 2), ("P", 4, 3), ("Q", 4, 5), ("R", 6, 4)]);
        let r = build_response(&d, 0).unwrap();
        assert_eq!(
            step_pairs(&r),
            vec![(q(1, 1), q(1, 1)), (q(2, 1), q(5, 2))]
        );
    }

    #[test]
    fn beta_at_alpha_jo_dominates_beta_jo() {
        let d = four_units();
        for o in 0..d.len() {
            let t = RatioTable::new(&d, o).unwrap();
            let r = ResponseFunction::from_table(&t);
            for (_, a, b) in t.pairs() {
                assert!(r.eval(a).unwrap() >= *b);
            }
        }
    }
}
