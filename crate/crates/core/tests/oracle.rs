mod common;

use common::*;
use fdh_core::oracle::{
    oracle_phi, oracle_response, oracle_sigma_plus, oracle_system_feasible, oracle_theta,
    random_dataset, random_dims, OracleConfig, System,
};
use fdh_core::scale::sigma_plus;
use fdh_core::technology::dominating_unit;
use fdh_core::verify::{verify_dataset, verify_random, Check};
use fdh_core::{build_response, phi, theta, Delta, Extended, Rational, Tolerance};

#[test]
fn response_matches_fine_grid_up_to_three() {
    let cfg = OracleConfig::default();
    assert_eq!(cfg.grid_steps, 10_000);
    let three = q(3, 1);
    for seed in 0..4 {
        let (n, m, s) = random_dims(seed);
        let d = random_dataset(seed, n, m, s);
        for o in 0..d.len() {
            let r = build_response(&d, o).unwrap();
            let lo = r.alpha_min().clone();
            if lo >= three {
                continue;
            }
            let steps = q(cfg.grid_steps as i64, 1);
            for k in 0..=cfg.grid_steps as i64 {
                let a = lo.clone() + (three.clone() - lo.clone()) * q(k, 1) / steps.clone();
                assert_eq!(r.eval(&a).ok(), oracle_response(&d, o, &a), "seed {seed} unit {o} alpha {a}");
            }
        }
    }
}

#[test]
fn four_units_scores_match_enumeration() {
    let d = four_units();
    for o in 0..d.len() {
        for delta in Delta::ALL {
            assert_eq!(theta(&d, delta, o).unwrap().value, oracle_theta(&d, delta, o).unwrap());
            assert_eq!(phi(&d, delta, o).unwrap().value, oracle_phi(&d, delta, o).unwrap());
        }
    }
}

#[test]
fn system_examples() {
    let d = four_units();
    // D reached from B by 2 < delta < 13/4.
    assert!(oracle_system_feasible(&d, B, System::RightStrict).unwrap());
    assert!(!oracle_system_feasible(&d, A, System::LeftWeak).unwrap());
    let ray = single_io(&[("O", 1, 1), ("J", 2, 2)]);
    assert!(!oracle_system_feasible(&ray, 0, System::RightStrict).unwrap());
    assert!(oracle_system_feasible(&ray, 0, System::RightWeak).unwrap());
}

#[test]
fn sigma_plus_on_random_efficient_units() {
    let cfg = OracleConfig {
        grid_steps: 500,
        ..OracleConfig::default()
    };
    let tol = Tolerance::default();
    for seed in 100..160 {
        let (n, m, s) = random_dims(seed);
        let d = random_dataset(seed, n, m, s);
        for o in (0..d.len()).filter(|&o| dominating_unit(&d, o).is_none()) {
            let (fast, _) = sigma_plus(&d, o, tol).unwrap();
            assert_eq!(Extended::Finite(fast), oracle_sigma_plus(&d, o, &cfg).unwrap());
        }
    }
}

#[test]
fn largest_unit_has_zero_sigma_plus() {
    let d = four_units();
    let cfg = OracleConfig::default();
    assert_eq!(oracle_sigma_plus(&d, D, &cfg).unwrap(), Extended::Finite(q(0, 1)));
}

#[test]
fn inefficient_unit_is_rejected() {
    let d = single_io(&[("B", 3, 4), ("E", 4, 4)]);
    assert!(oracle_sigma_plus(&d, 1, &OracleConfig::default()).is_err());
}

#[test]
fn float_cross_check_on_random_batch() {
    let cfg = OracleConfig {
        grid_steps: 100,
        exact: false,
        seed: 5000,
        ..OracleConfig::default()
    };
    let rep = verify_random(&cfg, Tolerance::default(), 150, &[Check::FloatAgreement]);
    assert!(rep.all_passed(), "{rep:?}");
    assert_eq!(rep.tally(Check::FloatAgreement).passed, rep.units);
}

#[test]
fn verify_flags_nothing_on_hand_made_cases() {
    let cfg = OracleConfig {
        grid_steps: 300,
        ..OracleConfig::default()
    };
    let cases = [
        single_io(&[("S", 1, 2), ("O", 4, 4), ("L", 10, 20)]),
        single_io(&[("S", 1, 3), ("O", 4, 4)]),
        single_io(&[("O", 2, 4), ("J", 4, 3)]),
    ];
    for d in cases {
        let rep = verify_dataset(&d, &cfg, Tolerance::default(), &Check::ALL);
        assert!(rep.all_passed(), "{:?}: {rep:?}", d.names());
    }
}

#[test]
fn generator_respects_dimensions() {
    for seed in 0..50 {
        let (n, m, s) = random_dims(seed);
        assert!((1..=8).contains(&n) && (1..=3).contains(&m) && (1..=3).contains(&s));
        let d = random_dataset(seed, n, m, s);
        assert_eq!((d.len(), d.num_inputs(), d.num_outputs()), (n, m, s));
        let zero: Rational = q(0, 1);
        assert!((0..n).all(|j| d.input(j).iter().chain(d.output(j)).all(|v| *v > zero)));
    }
}
