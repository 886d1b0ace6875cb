//! Returns-to-scale classification of FDH-VRS efficient units.
//!
//! One-sided classes come from ratio tests on the table of `(alpha_jo,
//! beta_jo)`:
//!
//! * Right-IRS iff some `j` has `beta_jo > 1` and `alpha_jo < beta_jo`;
//!   Right-DRS iff every `j` has `beta_jo <= 1` or `beta_jo < alpha_jo`;
//!   Right-CRS otherwise.
//! * Left-DRS iff some `j` has `alpha_jo < 1` and `alpha_jo < beta_jo`;
//!   Left-IRS iff every `j` has `alpha_jo >= 1` or `beta_jo < alpha_jo`;
//!   Left-CRS otherwise.
//!
//! The global class compares `theta` under CRS, NIRS and NDRS.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::efficiency::{scores_from_table, EfficiencyScores, Score};
use crate::error::{FdhError, Result};
use crate::model::{Dataset, Delta, RatioTable};
use crate::par;
use crate::scale::{ensure_efficient, ratios_from_table, ScaleRatios};
use crate::scalar::{Scalar, Tolerance};
use crate::technology::dominating_unit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RightRts {
    #[serde(rename = "Right-IRS")]
    Irs,
    #[serde(rename = "Right-DRS")]
    Drs,
    #[serde(rename = "Right-CRS")]
    Crs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeftRts {
    #[serde(rename = "Left-IRS")]
    Irs,
    #[serde(rename = "Left-DRS")]
    Drs,
    #[serde(rename = "Left-CRS")]
    Crs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneSidedRts {
    pub right: RightRts,
    pub left: LeftRts,
}

/// Global returns to scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrsClass {
    #[serde(rename = "G-CRS")]
    Crs,
    #[serde(rename = "G-SCRS")]
    Scrs,
    #[serde(rename = "G-IRS")]
    Irs,
    #[serde(rename = "G-DRS")]
    Drs,
}

impl RightRts {
    pub fn label(self) -> &'static str {
        match self {
            RightRts::Irs => "Right-IRS",
            RightRts::Drs => "Right-DRS",
            RightRts::Crs => "Right-CRS",
        }
    }

    /// Class implied by where `sigma_plus` sits relative to 1.
    pub fn from_sigma<S: Scalar>(sigma_plus: &S, tol: Tolerance) -> Self {
        match sigma_plus.cmp_tol(&S::one(), tol) {
            Ordering::Greater => RightRts::Irs,
            Ordering::Less => RightRts::Drs,
            Ordering::Equal => RightRts::Crs,
        }
    }
}

impl LeftRts {
    pub fn label(self) -> &'static str {
        match self {
            LeftRts::Irs => "Left-IRS",
            LeftRts::Drs => "Left-DRS",
            LeftRts::Crs => "Left-CRS",
        }
    }

    pub fn from_sigma<S: Scalar>(sigma_minus: &crate::scalar::Extended<S>, tol: Tolerance) -> Self {
        match sigma_minus.cmp_tol(&S::one(), tol) {
            Ordering::Greater => LeftRts::Irs,
            Ordering::Less => LeftRts::Drs,
            Ordering::Equal => LeftRts::Crs,
        }
    }
}

impl GrsClass {
    pub fn label(self) -> &'static str {
        match self {
            GrsClass::Crs => "G-CRS",
            GrsClass::Scrs => "G-SCRS",
            GrsClass::Irs => "G-IRS",
            GrsClass::Drs => "G-DRS",
        }
    }
}

impl fmt::Display for RightRts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl fmt::Display for LeftRts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl fmt::Display for GrsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn right_from_table<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> RightRts {
    let one = S::one();
    let mut weak = false;
    for (_, alpha, beta) in table.pairs() {
        if !beta.gt_tol(&one, tol) {
            continue;
        }
        match alpha.cmp_tol(beta, tol) {
            Ordering::Less => return RightRts::Irs,
            Ordering::Equal => weak = true,
            Ordering::Greater => {}
        }
    }
    if weak {
        RightRts::Crs
    } else {
        RightRts::Drs
    }
}

pub fn left_from_table<S: Scalar>(table: &RatioTable<S>, tol: Tolerance) -> LeftRts {
    let one = S::one();
    let mut weak = false;
    for (_, alpha, beta) in table.pairs() {
        if !alpha.lt_tol(&one, tol) {
            continue;
        }
        match alpha.cmp_tol(beta, tol) {
            Ordering::Less => return LeftRts::Drs,
            Ordering::Equal => weak = true,
            Ordering::Greater => {}
        }
    }
    if weak {
        LeftRts::Crs
    } else {
        LeftRts::Irs
    }
}

pub fn right_rts<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<RightRts> {
    ensure_efficient(d, o)?;
    Ok(right_from_table(&RatioTable::new(d, o)?, tol))
}

pub fn left_rts<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<LeftRts> {
    ensure_efficient(d, o)?;
    Ok(left_from_table(&RatioTable::new(d, o)?, tol))
}

/// Global class from the three input scores.
///
/// Returns `None` when the scores fit none of the four patterns.
pub fn grs_from_scores<S: Scalar>(crs: &S, nirs: &S, ndrs: &S, tol: Tolerance) -> Option<GrsClass> {
    let c_ni = crs.approx_eq(nirs, tol);
    let c_nd = crs.approx_eq(ndrs, tol);
    match (c_ni, c_nd) {
        (true, true) if crs.approx_eq(&S::one(), tol) => Some(GrsClass::Crs),
        (true, true) => Some(GrsClass::Scrs),
        (true, false) if ndrs.gt_tol(crs, tol) => Some(GrsClass::Irs),
        (false, true) if nirs.gt_tol(crs, tol) => Some(GrsClass::Drs),
        _ => None,
    }
}

fn grs_of<S: Scalar>(d: &Dataset<S>, o: usize, sc: &EfficiencyScores<S>, tol: Tolerance) -> Result<GrsClass> {
    let (c, ni, nd) = (sc.theta(Delta::Crs), sc.theta(Delta::Nirs), sc.theta(Delta::Ndrs));
    grs_from_scores(c, ni, nd, tol).ok_or_else(|| FdhError::Unclassifiable {
        dmu: d.name(o).to_string(),
        crs: c.to_f64(),
        nirs: ni.to_f64(),
        ndrs: nd.to_f64(),
    })
}

pub fn grs<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<GrsClass> {
    ensure_efficient(d, o)?;
    let sc = scores_from_table(&RatioTable::new(d, o)?);
    grs_of(d, o, &sc, tol)
}

/// Everything known about one efficient unit.
#[derive(Clone, Debug, PartialEq)]
pub struct RtsReport<S = f64> {
    pub unit: usize,
    pub one_sided: OneSidedRts,
    pub grs: GrsClass,
    pub sigma: ScaleRatios<S>,
    pub mpss: bool,
    pub scores: EfficiencyScores<S>,
}

/// Result of classifying one unit in a batch.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitOutcome<S = f64> {
    Efficient(RtsReport<S>),
    Inefficient {
        unit: usize,
        theta_vrs: Score<S>,
        scores: EfficiencyScores<S>,
        dominated_by: usize,
    },
    /// Efficient, but the scores fit no global pattern within tolerance.
    Failed { unit: usize, error: String },
}

impl<S> UnitOutcome<S> {
    pub fn unit(&self) -> usize {
        match self {
            UnitOutcome::Efficient(r) => r.unit,
            UnitOutcome::Inefficient { unit, .. } | UnitOutcome::Failed { unit, .. } => *unit,
        }
    }

    pub fn report(&self) -> Option<&RtsReport<S>> {
        match self {
            UnitOutcome::Efficient(r) => Some(r),
            _ => None,
        }
    }
}

/// Full report for an efficient unit.
pub fn classify<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> Result<RtsReport<S>> {
    ensure_efficient(d, o)?;
    let table = RatioTable::new(d, o)?;
    report_from_table(d, &table, tol)
}

fn report_from_table<S: Scalar>(d: &Dataset<S>, table: &RatioTable<S>, tol: Tolerance) -> Result<RtsReport<S>> {
    let o = table.reference;
    let scores = scores_from_table(table);
    let grs = grs_of(d, o, &scores, tol)?;
    let mpss = scores.theta(Delta::Crs).approx_eq(&S::one(), tol);
    Ok(RtsReport {
        unit: o,
        one_sided: OneSidedRts {
            right: right_from_table(table, tol),
            left: left_from_table(table, tol),
        },
        grs,
        sigma: ratios_from_table(table, tol),
        mpss,
        scores,
    })
}

fn outcome<S: Scalar>(d: &Dataset<S>, o: usize, tol: Tolerance) -> UnitOutcome<S> {
    let table = RatioTable::new(d, o).expect("index in range");
    if let Some(j) = dominating_unit(d, o) {
        let scores = scores_from_table(&table);
        return UnitOutcome::Inefficient {
            unit: o,
            theta_vrs: scores.theta[Delta::Vrs.index()].clone(),
            scores,
            dominated_by: j,
        };
    }
    match report_from_table(d, &table, tol) {
        Ok(r) => UnitOutcome::Efficient(r),
        Err(e) => UnitOutcome::Failed {
            unit: o,
            error: e.to_string(),
        },
    }
}

/// Classifies every unit, in input order. Runs on the rayon pool when the
/// `parallel` feature is enabled.
pub fn classify_all<S: Scalar>(d: &Dataset<S>, tol: Tolerance) -> Vec<UnitOutcome<S>> {
    par::map_indices(d.len(), |o| outcome(d, o, tol))
}

/// Single-threaded [`classify_all`].
pub fn classify_all_sequential<S: Scalar>(d: &Dataset<S>, tol: Tolerance) -> Vec<UnitOutcome<S>> {
    (0..d.len()).map(|o| outcome(d, o, tol)).collect()
}

/// A relation between the global class, one-sided classes and ratios that
/// failed to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Violation {
    /// Right class disagrees with `sigma_plus` against 1.
    RightVsSigmaPlus,
    /// Left class disagrees with `sigma_minus` against 1.
    LeftVsSigmaMinus,
    /// G-IRS without Right-IRS.
    GlobalIrsNotRightIrs,
    /// G-DRS without Left-DRS.
    GlobalDrsNotLeftDrs,
    /// G-CRS with `sigma_plus > 1` or `sigma_minus < 1`.
    GlobalCrsRatios,
    /// G-SCRS without `sigma_plus > 1` and `sigma_minus < 1`.
    GlobalScrsRatios,
}

/// Checks the report against the known implications. An empty list means
/// the report is internally consistent.
pub fn check_consistency<S: Scalar>(report: &RtsReport<S>, tol: Tolerance) -> Vec<Violation> {
    let mut out = Vec::new();
    let one = S::one();
    let plus = report.sigma.sigma_plus.cmp_tol(&one, tol);
    let minus = report.sigma.sigma_minus.cmp_tol(&one, tol);
    if RightRts::from_sigma(&report.sigma.sigma_plus, tol) != report.one_sided.right {
        out.push(Violation::RightVsSigmaPlus);
    }
    if LeftRts::from_sigma(&report.sigma.sigma_minus, tol) != report.one_sided.left {
        out.push(Violation::LeftVsSigmaMinus);
    }
    match report.grs {
        GrsClass::Irs if report.one_sided.right != RightRts::Irs => {
            out.push(Violation::GlobalIrsNotRightIrs)
        }
        GrsClass::Drs if report.one_sided.left != LeftRts::Drs => {
            out.push(Violation::GlobalDrsNotLeftDrs)
        }
        GrsClass::Crs if plus == Ordering::Greater || minus == Ordering::Less => {
            out.push(Violation::GlobalCrsRatios)
        }
        GrsClass::Scrs if plus != Ordering::Greater || minus != Ordering::Less => {
            out.push(Violation::GlobalScrsRatios)
        }
        _ => {}
    }
    out
}
