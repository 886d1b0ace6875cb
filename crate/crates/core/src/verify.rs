//! Batch cross-checks of the fast path against the oracle.
//!
//! Each dataset is analysed in exact arithmetic and every selected [`Check`]
//! is tallied per unit. Datasets fan out over the rayon pool.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::efficiency::scores;
use crate::model::{Dataset, Delta, RatioTable};
use crate::oracle::{
    oracle_left_rts, oracle_phi, oracle_response, oracle_right_rts, oracle_sigma_minus,
    oracle_sigma_plus, oracle_theta, random_dataset, random_dims, sigma_plus_enumerated,
    OracleConfig,
};
use crate::par;
use crate::response::ResponseFunction;
use crate::rts::{check_consistency, classify_all, GrsClass, LeftRts, RightRts, UnitOutcome};
use crate::scalar::{Extended, Rational, Scalar, Tolerance};
use crate::scale::incremental_set;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Closed-form scores equal enumeration for every technology.
    Scores,
    /// Every unit gets a verdict; efficient units get a full report.
    Partition,
    /// Ratio-test classes equal the ratio-threshold and system classes.
    OneSided,
    /// No violated implication between global and one-sided classes.
    Consistency,
    /// Under G-IRS the incremental set is nonempty, contains every unit
    /// with more output, and the closed-form ratio matches enumeration.
    Incremental,
    /// Scale ratios equal the grid and enumeration oracles.
    ScaleRatios,
    /// Step function equals brute-force evaluation on a grid.
    Response,
    /// The float backend reproduces the exact results.
    FloatAgreement,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Scores,
        Check::Partition,
        Check::OneSided,
        Check::Consistency,
        Check::Incremental,
        Check::ScaleRatios,
        Check::Response,
        Check::FloatAgreement,
    ];

    /// Checks that need no grid sweep.
    pub const STRUCTURAL: [Check; 6] = [
        Check::Scores,
        Check::Partition,
        Check::OneSided,
        Check::Consistency,
        Check::Incremental,
        Check::FloatAgreement,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Check::Scores => "scores",
            Check::Partition => "partition",
            Check::OneSided => "one-sided",
            Check::Consistency => "consistency",
            Check::Incremental => "incremental",
            Check::ScaleRatios => "scale-ratios",
            Check::Response => "response",
            Check::FloatAgreement => "float-agreement",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub datasets: u64,
    pub units: u64,
    pub efficient_units: u64,
    /// Counts of G-SCRS units seen, which are rare on random data.
    pub scrs_units: u64,
    pub tallies: BTreeMap<Check, Tally>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.values().all(|t| t.failed == 0)
    }

    pub fn tally(&self, check: Check) -> Tally {
        self.tallies.get(&check).cloned().unwrap_or_default()
    }

    fn record(&mut self, check: Check, ok: bool, context: impl FnOnce() -> String) {
        self.tallies.entry(check).or_default().record(ok, context);
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.datasets += other.datasets;
        self.units += other.units;
        self.efficient_units += other.efficient_units;
        self.scrs_units += other.scrs_units;
        for (k, t) in other.tallies {
            self.tallies.entry(k).or_default().merge(t);
        }
    }
}

fn ext_eq(a: &Extended<Rational>, b: &Extended<Rational>) -> bool {
    a == b
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn ext_close(a: &Extended<f64>, b: &Extended<Rational>) -> bool {
    match (a, b) {
        (Extended::Infinite, Extended::Infinite) => true,
        (Extended::Finite(x), Extended::Finite(y)) => close(*x, y.to_f64()),
        _ => false,
    }
}

/// Runs the selected checks on one dataset.
pub fn verify_dataset(
    d: &Dataset<Rational>,
    cfg: &OracleConfig,
    tol: Tolerance,
    checks: &[Check],
) -> VerifyReport {
    let on = |c: Check| checks.contains(&c);
    let ctx = |o: usize, what: &str| format!("{} in {:?}: {what}", d.name(o), d.names());
    let mut rep = VerifyReport {
        datasets: 1,
        units: d.len() as u64,
        ..VerifyReport::default()
    };
    let outcomes = classify_all(d, tol);

    if on(Check::Scores) {
        for o in 0..d.len() {
            let sc = scores(d, o).expect("valid index");
            let ok = Delta::ALL.iter().all(|&delta| {
                *sc.theta(delta) == oracle_theta(d, delta, o).expect("valid index")
                    && *sc.phi(delta) == oracle_phi(d, delta, o).expect("valid index")
            });
            rep.record(Check::Scores, ok, || ctx(o, "closed-form score differs from enumeration"));
        }
    }

    if on(Check::Partition) {
        for out in &outcomes {
            let ok = !matches!(out, UnitOutcome::Failed { .. });
            rep.record(Check::Partition, ok, || ctx(out.unit(), &format!("{out:?}")));
        }
    }

    for r in outcomes.iter().filter_map(UnitOutcome::report) {
        let o = r.unit;
        rep.efficient_units += 1;
        if r.grs == GrsClass::Scrs {
            rep.scrs_units += 1;
        }
        let sig = &r.sigma;

        if on(Check::OneSided) {
            let right = oracle_right_rts(d, o).expect("valid index");
            let left = oracle_left_rts(d, o).expect("valid index");
            let ok = r.one_sided.right == right
                && r.one_sided.right == RightRts::from_sigma(&sig.sigma_plus, tol)
                && r.one_sided.left == left
                && r.one_sided.left == LeftRts::from_sigma(&sig.sigma_minus, tol);
            rep.record(Check::OneSided, ok, || {
                ctx(o, &format!("{:?} vs systems ({right}, {left}) and {sig:?}", r.one_sided))
            });
        }

        if on(Check::Consistency) {
            let violations = check_consistency(r, tol);
            let one = Rational::from_integer(1.into());
            let scrs_ok = r.grs != GrsClass::Scrs
                || (sig.sigma_plus > one
                    && sig.sigma_minus.finite().is_some_and(|m| *m < one));
            rep.record(Check::Consistency, violations.is_empty() && scrs_ok, || {
                ctx(o, &format!("{violations:?} for {:?} {:?}", r.grs, r.one_sided))
            });
        }

        if on(Check::Incremental) && r.grs == GrsClass::Irs {
            let table = RatioTable::new(d, o).expect("valid index");
            let pi = incremental_set(&table, tol);
            let one = Rational::from_integer(1.into());
            let s1_in_pi = table
                .pairs()
                .filter(|(_, _, b)| **b > one)
                .all(|(j, _, _)| pi.contains(&j));
            let enumerated = sigma_plus_enumerated(d, o);
            let ok = !pi.is_empty()
                && s1_in_pi
                && ext_eq(&Extended::Finite(sig.sigma_plus.clone()), &enumerated);
            rep.record(Check::Incremental, ok, || {
                ctx(o, &format!("pi={pi:?}, sigma_plus={} vs {enumerated}", sig.sigma_plus))
            });
        }

        if on(Check::ScaleRatios) {
            let plus = oracle_sigma_plus(d, o, cfg).expect("efficient");
            let minus = oracle_sigma_minus(d, o, cfg).expect("efficient");
            let ok = ext_eq(&Extended::Finite(sig.sigma_plus.clone()), &plus)
                && ext_eq(&sig.sigma_minus, &minus);
            rep.record(Check::ScaleRatios, ok, || {
                ctx(o, &format!("({}, {}) vs oracle ({plus}, {minus})", sig.sigma_plus, sig.sigma_minus))
            });
        }

        if on(Check::Response) {
            let ok = response_agrees(d, o, cfg);
            rep.record(Check::Response, ok, || ctx(o, "step function differs from grid"));
        }
    }

    if on(Check::FloatAgreement) {
        let fd = d.to_f64();
        let float = classify_all(&fd, tol);
        for (exact, approx) in outcomes.iter().zip(&float) {
            let ok = float_agrees(exact, approx);
            rep.record(Check::FloatAgreement, ok, || {
                ctx(exact.unit(), &format!("{approx:?} vs {exact:?}"))
            });
        }
    }
    rep
}

fn float_agrees(exact: &UnitOutcome<Rational>, approx: &UnitOutcome<f64>) -> bool {
    match (exact, approx) {
        (UnitOutcome::Efficient(e), UnitOutcome::Efficient(a)) => {
            let scores_ok = Delta::ALL.iter().all(|&delta| {
                close(*a.scores.theta(delta), e.scores.theta(delta).to_f64())
                    && close(*a.scores.phi(delta), e.scores.phi(delta).to_f64())
            });
            scores_ok
                && a.grs == e.grs
                && a.one_sided == e.one_sided
                && a.mpss == e.mpss
                && close(a.sigma.sigma_plus, e.sigma.sigma_plus.to_f64())
                && ext_close(&a.sigma.sigma_minus, &e.sigma.sigma_minus)
        }
        (
            UnitOutcome::Inefficient { theta_vrs: e, .. },
            UnitOutcome::Inefficient { theta_vrs: a, .. },
        ) => close(a.value, e.value.to_f64()),
        _ => false,
    }
}

/// Compares the step function with brute-force evaluation on an even grid
/// over `[alpha_min / 2, alpha_max]` plus every breakpoint.
fn response_agrees(d: &Dataset<Rational>, o: usize, cfg: &OracleConfig) -> bool {
    let table = RatioTable::new(d, o).expect("valid index");
    let r = ResponseFunction::from_table(&table);
    let two = Rational::from_integer(2.into());
    let lo = r.alpha_min().clone() / two;
    let top = table
        .alpha
        .iter()
        .max()
        .cloned()
        .expect("nonempty")
        .max(Rational::from_integer(1.into()));
    let hi = cfg
        .alpha_max
        .clone()
        .unwrap_or_else(|| top * Rational::from_integer(10.into()));
    let steps = Rational::from_integer((cfg.grid_steps as i64).into());
    let mut points: Vec<Rational> = (0..=cfg.grid_steps as i64)
        .map(|k| lo.clone() + (hi.clone() - lo.clone()) * Rational::from_integer(k.into()) / steps.clone())
        .collect();
    points.extend(table.alpha.iter().cloned());
    points.iter().all(|a| r.eval(a).ok() == oracle_response(d, o, a))
}

/// Runs `trials` random datasets seeded from `cfg.seed` upwards.
pub fn verify_random(cfg: &OracleConfig, tol: Tolerance, trials: u64, checks: &[Check]) -> VerifyReport {
    let seeds: Vec<u64> = (0..trials).map(|t| cfg.seed.wrapping_add(t)).collect();
    let parts = par::map_slice(&seeds, |&seed| {
        let (n, m, s) = random_dims(seed);
        verify_dataset(&random_dataset(seed, n, m, s), cfg, tol, checks)
    });
    let mut total = VerifyReport::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// Checks that apply under `cfg`: the float cross-check is dropped when
/// only exact results are wanted.
pub fn default_checks(cfg: &OracleConfig) -> Vec<Check> {
    Check::ALL
        .into_iter()
        .filter(|c| !(cfg.exact && *c == Check::FloatAgreement))
        .collect()
}
