//! Randomised invariants of the orbit and volume calculus.

use proptest::prelude::*;
use systolica::constructors::{random_admissible_profile, RandomProfileParams};
use systolica::measures::{contact_volume, negative_euler_check, systolic_ratio};
use systolica::orbits::{
    contractible_systole_with_grid, enumerate_closed_orbits, systole_with_grid, OrbitKind,
};
use systolica::{Profile, Side};

const GRID: usize = 1024;

fn random_profile(e: i64, seed: u64) -> Profile {
    random_admissible_profile(&RandomProfileParams::new(e, seed).unwrap()).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn systole_is_bounded_by_the_fibers(e in 1i64..6, seed in 0u64..10_000) {
        let p = random_profile(e, seed);
        let sys = systole_with_grid(&p, GRID).unwrap();
        prop_assert!(sys.value <= p.k_min() * (1.0 + 1e-12));
        prop_assert!(sys.value <= sys.certification_bound);
        let contr = contractible_systole_with_grid(&p, GRID).unwrap();
        prop_assert!(contr.value >= sys.value * (1.0 - 1e-12));
        if e == 1 {
            prop_assert!(rel_close(contr.value, sys.value, 1e-12));
        }
    }

    #[test]
    fn larger_search_finds_nothing_shorter(e in 1i64..6, seed in 0u64..10_000) {
        let p = random_profile(e, seed);
        let sys = systole_with_grid(&p, GRID).unwrap();
        let wider = enumerate_closed_orbits(&p, 2 * sys.q_max_used, GRID).unwrap();
        let shortest = wider.iter().map(|o| o.period).fold(f64::INFINITY, f64::min);
        prop_assert!(shortest >= sys.value * (1.0 - 1e-12));
    }

    #[test]
    fn section_orbits_close_exactly(e in 1i64..6, seed in 0u64..10_000) {
        let p = random_profile(e, seed);
        for o in enumerate_closed_orbits(&p, 6, GRID).unwrap() {
            if o.kind == OrbitKind::Section {
                let side = if o.k < 0.0 { Side::Left } else { Side::Right };
                let w = p.rotation(o.k, side).unwrap();
                prop_assert!((w - o.p as f64 / o.q as f64).abs() <= 1e-10);
                let tau = p.return_time(o.k, side).unwrap();
                prop_assert!(rel_close(o.period, o.q as f64 * tau, 1e-10));
                let ratio = o.contractible_period / o.period;
                prop_assert!((ratio - ratio.round()).abs() < 1e-9 && ratio >= 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn scaling_is_equivariant(e in 1i64..5, seed in 0u64..10_000, c in 0.2f64..5.0) {
        let p = random_profile(e, seed);
        let q = p.scaled(c).unwrap();
        let (v, vc) = (contact_volume(&p, 1e-12).unwrap(), contact_volume(&q, 1e-12).unwrap());
        prop_assert!(rel_close(vc, c * c * v, 1e-9));
        let (s, sc) = (systole_with_grid(&p, GRID).unwrap(), systole_with_grid(&q, GRID).unwrap());
        prop_assert!(rel_close(sc.value, c * s.value, 1e-9));
        prop_assert_eq!((sc.witness.p, sc.witness.q), (s.witness.p, s.witness.q));
        let (r, rc) = (systolic_ratio(&p).unwrap(), systolic_ratio(&q).unwrap());
        prop_assert!(rel_close(r, rc, 1e-9));
    }

    #[test]
    fn negative_euler_margin(
        e in 1i64..6,
        samples in prop::collection::vec(prop_oneof![0.1f64..3.0, -3.0f64..-0.1], 1..60),
        raw_weights in prop::collection::vec(0.01f64..1.0, 60),
    ) {
        let n = samples.len();
        let total: f64 = raw_weights[..n].iter().sum();
        let weights: Vec<f64> = raw_weights[..n].iter().map(|w| w * e as f64 / total).collect();
        let report = negative_euler_check(-e, &samples, &weights).unwrap();
        prop_assert!(report.margin >= -1e-12 * report.bound);
        let constant = samples.iter().all(|k| k.abs() == samples[0].abs());
        prop_assert_eq!(report.equality_flag, constant);
        if !constant {
            prop_assert!(report.margin > 0.0);
        }
    }
}
