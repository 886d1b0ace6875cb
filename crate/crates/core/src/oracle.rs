//! Brute-force reference computations.
//!
//! Everything here works from the raw constraints of the underlying
//! programs rather than from the ratio table: candidate scales are collected
//! from the data, every constraint is checked explicitly for each candidate,
//! and the best feasible objective wins. Nothing in the fast path calls into
//! this module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FdhError, Result};
use crate::model::{Dataset, Delta};
use crate::rts::{LeftRts, RightRts};
use crate::scalar::{Extended, Rational, Scalar};
use crate::scale::ensure_efficient;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Uniform grid points per sweep, on top of the data breakpoints.
    pub grid_steps: usize,
    /// Upper end of the `alpha` sweep; `None` means 10x the largest input
    /// ratio against the reference unit.
    pub alpha_max: Option<Rational>,
    pub seed: u64,
    /// Verify in exact arithmetic only; otherwise the float backend is also
    /// checked against the exact results.
    pub exact: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_steps: 10_000,
            alpha_max: None,
            seed: 0,
            exact: true,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_steps < 100 {
            return Err(FdhError::InvalidConfig(format!(
                "grid_steps must be at least 100, got {}",
                self.grid_steps
            )));
        }
        Ok(())
    }
}

/// `x_j <= scale * x_o` componentwise.
fn inputs_covered<S: Scalar>(d: &Dataset<S>, j: usize, o: usize, scale: &S) -> bool {
    d.input(j)
        .iter()
        .zip(d.input(o))
        .all(|(xj, xo)| *xj <= scale.clone() * xo.clone())
}

/// `y_j >= scale * y_o` componentwise.
fn outputs_covered<S: Scalar>(d: &Dataset<S>, j: usize, o: usize, scale: &S) -> bool {
    d.output(j)
        .iter()
        .zip(d.output(o))
        .all(|(yj, yo)| *yj >= scale.clone() * yo.clone())
}

fn input_ratios<S: Scalar>(d: &Dataset<S>, j: usize, o: usize) -> Vec<S> {
    d.input(j)
        .iter()
        .zip(d.input(o))
        .map(|(a, b)| a.clone() / b.clone())
        .collect()
}

fn output_ratios<S: Scalar>(d: &Dataset<S>, j: usize, o: usize) -> Vec<S> {
    d.output(j)
        .iter()
        .zip(d.output(o))
        .map(|(a, b)| a.clone() / b.clone())
        .collect()
}

fn keep_best<S: Scalar>(best: &mut Option<S>, v: S, better: impl Fn(&S, &S) -> bool) {
    if best.as_ref().is_none_or(|b| better(&v, b)) {
        *best = Some(v);
    }
}

/// Input program by enumeration.
///
/// For active unit `j` the candidate scales are the region endpoints and
/// every `y_ro / y_rj`; each is kept only if it lies in the region and
/// satisfies every output constraint, and then costs
/// `theta = max_i scale * x_ij / x_io`.
pub fn oracle_theta<S: Scalar>(d: &Dataset<S>, delta: Delta, o: usize) -> Result<S> {
    d.check_index(o)?;
    let (lo, hi) = delta.bounds::<S>();
    let mut best = None;
    for j in 0..d.len() {
        let mut candidates: Vec<S> = d
            .output(o)
            .iter()
            .zip(d.output(j))
            .map(|(yo, yj)| yo.clone() / yj.clone())
            .collect();
        candidates.push(lo.clone());
        candidates.extend(hi.clone());
        for scale in candidates {
            if !delta.contains(&scale) || !outputs_covered_scaled(d, j, o, &scale) {
                continue;
            }
            let theta = d
                .input(j)
                .iter()
                .zip(d.input(o))
                .map(|(xj, xo)| scale.clone() * xj.clone() / xo.clone())
                .fold(S::zero(), |a, b| if b > a { b } else { a });
            keep_best(&mut best, theta, |v, b| v < b);
        }
    }
    Ok(best.expect("unit o with scale 1 is feasible"))
}

/// `scale * y_j >= y_o`.
fn outputs_covered_scaled<S: Scalar>(d: &Dataset<S>, j: usize, o: usize, scale: &S) -> bool {
    d.output(j)
        .iter()
        .zip(d.output(o))
        .all(|(yj, yo)| scale.clone() * yj.clone() >= *yo)
}

/// `scale * x_j <= x_o`.
fn inputs_within_scaled<S: Scalar>(d: &Dataset<S>, j: usize, o: usize, scale: &S) -> bool {
    d.input(j)
        .iter()
        .zip(d.input(o))
        .all(|(xj, xo)| scale.clone() * xj.clone() <= *xo)
}

/// Output program by enumeration, mirroring [`oracle_theta`].
pub fn oracle_phi<S: Scalar>(d: &Dataset<S>, delta: Delta, o: usize) -> Result<S> {
    d.check_index(o)?;
    let (lo, hi) = delta.bounds::<S>();
    let mut best = None;
    for j in 0..d.len() {
        let mut candidates: Vec<S> = d
            .input(o)
            .iter()
            .zip(d.input(j))
            .map(|(xo, xj)| xo.clone() / xj.clone())
            .collect();
        candidates.push(lo.clone());
        candidates.extend(hi.clone());
        for scale in candidates {
            if !delta.contains(&scale) || !inputs_within_scaled(d, j, o, &scale) {
                continue;
            }
            let phi = d
                .output(j)
                .iter()
                .zip(d.output(o))
                .map(|(yj, yo)| scale.clone() * yj.clone() / yo.clone())
                .reduce(|a, b| if b < a { b } else { a })
                .expect("at least one output");
            keep_best(&mut best, phi, |v, b| v > b);
        }
    }
    Ok(best.expect("unit o with scale 1 is feasible"))
}

/// `beta_o(alpha)` by testing every candidate output proportion for
/// membership of `(alpha x_o, beta y_o)` in `T^VRS`. `None` below the domain.
pub fn oracle_response<S: Scalar>(d: &Dataset<S>, o: usize, alpha: &S) -> Option<S> {
    let mut best = None;
    for j in 0..d.len() {
        if !inputs_covered(d, j, o, alpha) {
            continue;
        }
        for beta in output_ratios(d, j, o) {
            if outputs_covered(d, j, o, &beta) {
                keep_best(&mut best, beta, |v, b| v > b);
            }
        }
    }
    best
}

/// Every `x_ij / x_io`: the only places the response function can step.
fn breakpoints<S: Scalar>(d: &Dataset<S>, o: usize) -> Vec<S> {
    let mut pts: Vec<S> = (0..d.len()).flat_map(|j| input_ratios(d, j, o)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    pts.dedup();
    pts
}

fn alpha_upper<S: Scalar>(d: &Dataset<S>, o: usize, cfg: &OracleConfig) -> S {
    match &cfg.alpha_max {
        Some(a) => S::from_rational(a),
        None => {
            let top = breakpoints(d, o).pop().expect("nonempty");
            let one = S::one();
            let top = if top > one { top } else { one };
            S::from_u32(10) * top
        }
    }
}

/// Evenly spaced points on `[start, end]` (both included when `closed`),
/// merged with the breakpoints inside the same range.
fn sweep<S: Scalar>(start: &S, end: &S, steps: usize, extra: &[S], keep: impl Fn(&S) -> bool) -> Vec<S> {
    let width = end.clone() - start.clone();
    let n = S::from_u32(steps as u32);
    let mut pts: Vec<S> = (0..=steps)
        .map(|k| start.clone() + width.clone() * S::from_u32(k as u32) / n.clone())
        .collect();
    pts.extend(extra.iter().cloned());
    pts.retain(|p| keep(p));
    pts
}

/// Exhaustive enumeration of `sup (beta - 1) / (alpha - 1)` over
/// `alpha > 1`, `beta >= 0` and one active unit.
///
/// Attained candidates pair each feasible data-derived `alpha > 1` with each
/// feasible data-derived `beta`. Two limits are added: `alpha -> +inf`
/// (value 0, always reachable through `o` itself) and `alpha -> 1+` for a
/// unit needing no more input than `o` (infinite if it covers a `beta > 1`).
pub fn sigma_plus_enumerated<S: Scalar>(d: &Dataset<S>, o: usize) -> Extended<S> {
    let one = S::one();
    let mut best = S::zero();
    for j in 0..d.len() {
        let mut betas = output_ratios(d, j, o);
        betas.push(S::zero());
        betas.retain(|b| outputs_covered(d, j, o, b));
        if inputs_covered(d, j, o, &one) && betas.iter().any(|b| *b > one) {
            return Extended::Infinite;
        }
        for alpha in input_ratios(d, j, o) {
            if alpha <= one || !inputs_covered(d, j, o, &alpha) {
                continue;
            }
            for beta in &betas {
                let v = (beta.clone() - one.clone()) / (alpha.clone() - one.clone());
                if v > best {
                    best = v;
                }
            }
        }
    }
    Extended::Finite(best)
}

/// Sweep of `(beta_o(alpha) - 1) / (alpha - 1)` over `(1, alpha_max]`.
pub fn sigma_plus_grid<S: Scalar>(d: &Dataset<S>, o: usize, cfg: &OracleConfig) -> S {
    let one = S::one();
    let upper = alpha_upper(d, o, cfg);
    let bps = breakpoints(d, o);
    let pts = sweep(&one, &upper, cfg.grid_steps, &bps, |p| *p > one && *p <= upper);
    let mut best = S::zero();
    for alpha in pts {
        let beta = oracle_response(d, o, &alpha).expect("alpha above 1 is in the domain");
        let v = (beta - one.clone()) / (alpha - one.clone());
        if v > best {
            best = v;
        }
    }
    best
}

/// Sweep of `(beta_o(alpha) - 1) / (alpha - 1)` over `[alpha_min, 1)`;
/// infinite when that range is empty.
pub fn sigma_minus_grid<S: Scalar>(d: &Dataset<S>, o: usize, cfg: &OracleConfig) -> Extended<S> {
    let one = S::one();
    let bps = breakpoints(d, o);
    let Some(start) = bps
        .iter()
        .find(|a| oracle_response(d, o, a).is_some())
        .cloned()
    else {
        return Extended::Infinite;
    };
    if start >= one {
        return Extended::Infinite;
    }
    let pts = sweep(&start, &one, cfg.grid_steps, &bps, |p| *p >= start && *p < one);
    let mut best: Option<S> = None;
    for alpha in pts {
        let beta = oracle_response(d, o, &alpha).expect("inside the domain");
        let v = (beta - one.clone()) / (alpha - one.clone());
        keep_best(&mut best, v, |v, b| v < b);
    }
    best.map_or(Extended::Infinite, Extended::Finite)
}

/// `sigma_plus` of an efficient unit: the larger of the enumeration and the
/// grid sweep (they coincide on exact data).
pub fn oracle_sigma_plus<S: Scalar>(d: &Dataset<S>, o: usize, cfg: &OracleConfig) -> Result<Extended<S>> {
    ensure_efficient(d, o)?;
    let grid = sigma_plus_grid(d, o, cfg);
    Ok(match sigma_plus_enumerated(d, o) {
        Extended::Finite(e) if grid > e => Extended::Finite(grid),
        other => other,
    })
}

pub fn oracle_sigma_minus<S: Scalar>(d: &Dataset<S>, o: usize, cfg: &OracleConfig) -> Result<Extended<S>> {
    ensure_efficient(d, o)?;
    Ok(sigma_minus_grid(d, o, cfg))
}

/// The four scaled-dominance systems behind the one-sided classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    /// `x_j < delta x_o`, `y_j > delta y_o`, `delta > 1`.
    RightStrict,
    /// `x_j <= delta x_o`, `y_j >= delta y_o`, `delta > 1`.
    RightWeak,
    /// `x_j <= delta x_o`, `y_j >= delta y_o`, `0 < delta < 1`.
    LeftWeak,
    /// `x_j < delta x_o`, `y_j > delta y_o`, `0 < delta < 1`.
    LeftStrict,
}

impl System {
    pub const ALL: [System; 4] = [
        System::RightStrict,
        System::RightWeak,
        System::LeftWeak,
        System::LeftStrict,
    ];

    pub fn number(self) -> u8 {
        match self {
            System::RightStrict => 6,
            System::RightWeak => 7,
            System::LeftWeak => 8,
            System::LeftStrict => 9,
        }
    }
}

/// Decides a system exactly from interval endpoints.
///
/// For active unit `j` the input constraints bound `delta` below by
/// `max_i x_ij / x_io` and the output constraints bound it above by
/// `min_r y_rj / y_ro`, strictly or weakly according to the system.
pub fn oracle_system_feasible<S: Scalar>(d: &Dataset<S>, o: usize, system: System) -> Result<bool> {
    d.check_index(o)?;
    let one = S::one();
    let zero = S::zero();
    for j in 0..d.len() {
        let lower = input_ratios(d, j, o)
            .into_iter()
            .reduce(|a, b| if b > a { b } else { a })
            .expect("inputs");
        let upper = output_ratios(d, j, o)
            .into_iter()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("outputs");
        let feasible = match system {
            // (max(lower, 1), upper) open
            System::RightStrict => lower < upper && one < upper,
            // [lower, upper] ∩ (1, inf)
            System::RightWeak => lower <= upper && one < upper,
            // [lower, upper] ∩ (0, 1)
            System::LeftWeak => lower <= upper && lower < one && zero < upper,
            // (lower, upper) ∩ (0, 1)
            System::LeftStrict => lower < upper && lower < one && zero < upper,
        };
        if feasible {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Right class straight from the definitions via systems 6 and 7.
pub fn oracle_right_rts<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<RightRts> {
    Ok(if oracle_system_feasible(d, o, System::RightStrict)? {
        RightRts::Irs
    } else if !oracle_system_feasible(d, o, System::RightWeak)? {
        RightRts::Drs
    } else {
        RightRts::Crs
    })
}

/// Left class straight from the definitions via systems 8 and 9.
pub fn oracle_left_rts<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<LeftRts> {
    Ok(if !oracle_system_feasible(d, o, System::LeftWeak)? {
        LeftRts::Irs
    } else if oracle_system_feasible(d, o, System::LeftStrict)? {
        LeftRts::Drs
    } else {
        LeftRts::Crs
    })
}

/// Reproducible dataset of small positive rationals.
///
/// Beyond independent draws, some units are exact rescalings or duplicates
/// of earlier ones so that ties and constant-returns boundaries show up.
pub fn random_dataset(seed: u64, n: usize, m: usize, s: usize) -> Dataset<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let num: i64 = rng.random_range(1..=12);
        let den: i64 = rng.random_range(1..=4);
        Rational::new(num.into(), den.into())
    };
    let mut inputs: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut outputs: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for j in 0..n {
        let roll: f64 = rng.random();
        if j > 0 && roll < 0.25 {
            let src = rng.random_range(0..j);
            let factors = [(1, 2), (2, 1), (3, 1), (1, 1), (3, 2)];
            let (p, q) = factors[rng.random_range(0..factors.len())];
            let k = Rational::new(p.into(), q.into());
            inputs.push(inputs[src].iter().map(|v| v * &k).collect());
            outputs.push(outputs[src].iter().map(|v| v * &k).collect());
        } else {
            inputs.push((0..m).map(|_| draw(&mut rng)).collect());
            outputs.push((0..s).map(|_| draw(&mut rng)).collect());
        }
    }
    let names = (0..n).map(|j| format!("U{}", j + 1)).collect();
    Dataset::new(names, inputs, outputs).expect("generated data is valid")
}

/// Dimensions for trial `seed`: `n` in 1..=8, `m` and `s` in 1..=3.
pub fn random_dims(seed: u64) -> (usize, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d1a5);
    (
        rng.random_range(1..=8),
        rng.random_range(1..=3),
        rng.random_range(1..=3),
    )
}
