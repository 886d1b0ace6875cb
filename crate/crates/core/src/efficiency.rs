//! Radial input and output efficiency under the four FDH technologies.
//!
//! The mixed-integer programs pick exactly one active unit `j` and a scale
//! `delta` from the region of the returns-to-scale assumption. With `j`
//! fixed, the output constraint of the input program is
//! `delta >= 1 / beta_jo`, and the input requirement it implies is
//! `theta = delta * alpha_jo`, increasing in `delta`. The optimum for each
//! `j` therefore sits at the smallest admissible `delta`:
//!
//! | region | feasible when | theta_j                 | delta            |
//! |--------|---------------|-------------------------|------------------|
//! | VRS    | beta >= 1     | alpha                   | 1                |
//! | CRS    | always        | alpha / beta            | 1 / beta         |
//! | NIRS   | beta >= 1     | alpha / beta            | 1 / beta         |
//! | NDRS   | always        | max(alpha, alpha/beta)  | max(1, 1/beta)   |
//!
//! The output program mirrors this with `delta <= 1 / alpha_jo` and
//! `phi = delta * beta_jo`, optimal at the largest admissible `delta`:
//!
//! | region | feasible when | phi_j                   | delta            |
//! |--------|---------------|-------------------------|------------------|
//! | VRS    | alpha <= 1    | beta                    | 1                |
//! | CRS    | always        | beta / alpha            | 1 / alpha        |
//! | NIRS   | always        | beta * min(1, 1/alpha)  | min(1, 1/alpha)  |
//! | NDRS   | alpha <= 1    | beta / alpha            | 1 / alpha        |
//!
//! Unit `o` itself (`alpha = beta = 1`) is feasible everywhere, so no program
//! is ever infeasible. The `oracle` module re-derives every score by
//! enumerating candidate scales against the raw constraints.

use crate::error::Result;
use crate::model::{Dataset, Delta, Orientation, RatioTable};
use crate::scalar::{max_of, min_of, Scalar, Tolerance};

/// Optimal value of one radial program with the unit and scale achieving it.
#[derive(Clone, Debug, PartialEq)]
pub struct Score<S = f64> {
    pub value: S,
    pub witness: usize,
    pub delta: S,
}

/// Input (`theta`) and output (`phi`) scores for every technology, indexed by
/// [`Delta::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyScores<S = f64> {
    pub theta: [Score<S>; 4],
    pub phi: [Score<S>; 4],
}

impl<S: Scalar> EfficiencyScores<S> {
    pub fn theta(&self, delta: Delta) -> &S {
        &self.theta[delta.index()].value
    }

    pub fn phi(&self, delta: Delta) -> &S {
        &self.phi[delta.index()].value
    }

    pub fn get(&self, orientation: Orientation, delta: Delta) -> &Score<S> {
        match orientation {
            Orientation::Input => &self.theta[delta.index()],
            Orientation::Output => &self.phi[delta.index()],
        }
    }
}

/// Candidate `(score, delta)` for peer `j` in the input program, if feasible.
fn theta_candidate<S: Scalar>(delta: Delta, alpha: &S, beta: &S) -> Option<(S, S)> {
    let one = S::one();
    match delta {
        Delta::Vrs => (*beta >= one).then(|| (alpha.clone(), one)),
        Delta::Crs => Some((alpha.clone() / beta.clone(), beta.recip())),
        Delta::Nirs => {
            (*beta >= one).then(|| (alpha.clone() / beta.clone(), beta.recip()))
        }
        Delta::Ndrs => {
            let scale = max_of(one, beta.recip());
            Some((alpha.clone() * scale.clone(), scale))
        }
    }
}

fn phi_candidate<S: Scalar>(delta: Delta, alpha: &S, beta: &S) -> Option<(S, S)> {
    let one = S::one();
    match delta {
        Delta::Vrs => (*alpha <= one).then(|| (beta.clone(), one)),
        Delta::Crs => Some((beta.clone() / alpha.clone(), alpha.recip())),
        Delta::Nirs => {
            let scale = min_of(one, alpha.recip());
            Some((beta.clone() * scale.clone(), scale))
        }
        Delta::Ndrs => {
            (*alpha <= one).then(|| (beta.clone() / alpha.clone(), alpha.recip()))
        }
    }
}

fn best<S: Scalar>(
    table: &RatioTable<S>,
    candidate: impl Fn(&S, &S) -> Option<(S, S)>,
    better: impl Fn(&S, &S) -> bool,
) -> Score<S> {
    let mut best: Option<Score<S>> = None;
    for (j, alpha, beta) in table.pairs() {
        let Some((value, delta)) = candidate(alpha, beta) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| better(&value, &b.value)) {
            best = Some(Score {
                value,
                witness: j,
                delta,
            });
        }
    }
    best.expect("the reference unit is always feasible")
}

pub fn theta_from_table<S: Scalar>(table: &RatioTable<S>, delta: Delta) -> Score<S> {
    best(table, |a, b| theta_candidate(delta, a, b), |v, b| v < b)
}

pub fn phi_from_table<S: Scalar>(table: &RatioTable<S>, delta: Delta) -> Score<S> {
    best(table, |a, b| phi_candidate(delta, a, b), |v, b| v > b)
}

/// Input-oriented radial efficiency of unit `o` under `T^delta`.
pub fn theta<S: Scalar>(d: &Dataset<S>, delta: Delta, o: usize) -> Result<Score<S>> {
    Ok(theta_from_table(&RatioTable::new(d, o)?, delta))
}

/// Output-oriented radial efficiency of unit `o` under `T^delta`.
pub fn phi<S: Scalar>(d: &Dataset<S>, delta: Delta, o: usize) -> Result<Score<S>> {
    Ok(phi_from_table(&RatioTable::new(d, o)?, delta))
}

pub fn scores_from_table<S: Scalar>(table: &RatioTable<S>) -> EfficiencyScores<S> {
    EfficiencyScores {
        theta: Delta::ALL.map(|delta| theta_from_table(table, delta)),
        phi: Delta::ALL.map(|delta| phi_from_table(table, delta)),
    }
}

pub fn scores<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<EfficiencyScores<S>> {
    Ok(scores_from_table(&RatioTable::new(d, o)?))
}

/// Most productive scale size: `theta` under CRS equals 1.
pub fn is_mpss<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<bool> {
    let score = theta(d, Delta::Crs, o)?;
    Ok(score.value.approx_eq(&S::one(), tol))
}
