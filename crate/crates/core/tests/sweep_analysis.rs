use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dimerspin::sweep::GridAxis;
use dimerspin::{
    critical_field, detect_plateaus, entanglement_onset, ground_state_magnetization,
    open_chain_profile, pair_concurrence, run_sweep, xx_tilt_comparison, Boundary, ChainSpec,
    Model, PreparedChain, Strategy as Path, SweepParam, SweepRequest,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ZERO_TOL: f64 = 1e-6;

fn eight_sites() -> ChainSpec {
    ChainSpec {
        n_sites: 8,
        ..ChainSpec::default()
    }
}

fn b_axis(max: f64, steps: usize) -> GridAxis {
    GridAxis::linspace(SweepParam::B, 0.0, max, steps).unwrap()
}

#[test]
fn reused_spectrum_matches_fresh_points() {
    let axis = b_axis(5.0, 200);
    let grid = run_sweep(&SweepRequest::new(
        eight_sites(),
        0.1,
        vec![axis.clone()],
        vec![1, 2],
    ))
    .unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..10 {
        let p = rng.random_range(0..axis.len());
        let spec = eight_sites().with_field(axis.values[p]);
        let slow = PreparedChain::with_strategy(&spec, Path::Dense).unwrap();
        for (slot, bond) in [1, 2].into_iter().enumerate() {
            let c = slow.pair_concurrence(spec.b, 0.1, bond).unwrap().c;
            assert!(
                (grid.concurrence(p, slot) - c).abs() < 1e-8,
                "B={} bond {bond}",
                spec.b
            );
        }
    }
}

#[test]
fn grids_do_not_depend_on_thread_count() {
    let axes = vec![
        b_axis(4.0, 17),
        GridAxis::linspace(SweepParam::Delta, 0.0, 1.0, 5).unwrap(),
    ];
    let req = SweepRequest::new(eight_sites(), 0.1, axes, vec![1, 2]);
    let serial = run_sweep(&req.clone().with_threads(1)).unwrap();
    for threads in [2, 4, 8] {
        assert_eq!(
            run_sweep(&req.clone().with_threads(threads)).unwrap(),
            serial
        );
    }
}

#[test]
fn grid_points_match_single_point_evaluation() {
    let axes = vec![
        GridAxis::new(SweepParam::Kt, vec![0.05, 0.4]),
        GridAxis::new(SweepParam::Theta, vec![0.0, 0.9]),
    ];
    let template = ChainSpec {
        n_sites: 6,
        b: 1.2,
        model: Model::Xx,
        ..ChainSpec::default()
    };
    let grid = run_sweep(&SweepRequest::new(template, 0.1, axes, vec![2])).unwrap();
    for p in 0..grid.n_points() {
        let point = grid.point(p);
        let c = pair_concurrence(&point.spec, point.kt, 2).unwrap().c;
        assert!((grid.concurrence(p, 0) - c).abs() < 1e-12);
    }
}

#[test]
fn open_four_site_profile_matches_dense_pipeline() {
    let template = ChainSpec {
        n_sites: 4,
        boundary: Boundary::Open,
        ..ChainSpec::default()
    };
    let axis = b_axis(5.0, 41);
    let profile = open_chain_profile(&template, 0.1, &axis.values, 2).unwrap();
    assert_eq!(profile.pairs.len(), 3);
    for (p, &b) in axis.values.iter().enumerate() {
        let spec = template.with_field(b);
        let dense = PreparedChain::with_strategy(&spec, Path::Dense).unwrap();
        for slot in 0..3 {
            let c = dense.pair_concurrence(b, 0.1, slot + 1).unwrap().c;
            assert!((profile.grid.concurrence(p, slot) - c).abs() < 1e-10);
        }
    }
}

#[test]
fn critical_field_grows_with_temperature_at_eight_sites() {
    let axis = b_axis(10.0, 801);
    let fields: Vec<f64> = [0.02, 0.1, 0.5]
        .iter()
        .map(|&kt| {
            let grid = run_sweep(&SweepRequest::new(
                eight_sites(),
                kt,
                vec![axis.clone()],
                vec![1],
            ))
            .unwrap();
            critical_field(&axis.values, &grid.series(0), ZERO_TOL).unwrap()
        })
        .collect();
    assert!(fields.windows(2).all(|w| w[0] < w[1]), "{fields:?}");
    assert!((fields[0] - 4.1246).abs() < 0.0125);
}

#[test]
fn ground_state_critical_field_is_the_saturation_field() {
    let axis = b_axis(5.0, 401);
    let spacing = axis.values[1];
    let grid = run_sweep(&SweepRequest::new(
        eight_sites(),
        0.0,
        vec![axis.clone()],
        vec![1, 2],
    ))
    .unwrap();
    let (m, jumps) = ground_state_magnetization(&eight_sites(), &axis.values).unwrap();
    let saturation = *jumps.last().unwrap();
    assert!((saturation - 4.0).abs() <= spacing);
    for slot in 0..2 {
        let b_c = critical_field(&axis.values, &grid.series(slot), ZERO_TOL).unwrap();
        assert!((b_c - saturation).abs() <= spacing, "{b_c} vs {saturation}");
    }
    let beyond = axis.values.iter().position(|&b| b > saturation).unwrap();
    assert!(m[beyond..].iter().all(|&x| (x + 8.0).abs() < 1e-12));
}

#[test]
fn weak_pair_onset_depends_on_dimerization() {
    let axis = b_axis(6.0, 241);
    for (delta, expect_onset) in [(0.2, true), (1.0, false)] {
        let spec = ChainSpec {
            delta,
            ..eight_sites()
        };
        let grid = run_sweep(&SweepRequest::new(
            spec,
            0.1,
            vec![axis.clone()],
            vec![1, 2],
        ))
        .unwrap();
        assert_eq!(
            entanglement_onset(&axis.values, &grid.series(0), ZERO_TOL),
            None
        );
        let onset = entanglement_onset(&axis.values, &grid.series(1), ZERO_TOL);
        assert_eq!(onset.is_some(), expect_onset, "δ={delta}: {onset:?}");
        if delta == 1.0 {
            assert!(grid.series(1).iter().all(|&c| c <= 1e-10));
        }
    }
}

#[test]
fn staircase_fades_as_dimerization_grows() {
    let axis = b_axis(6.0, 400);
    let big_steps = |delta: f64| {
        let spec = ChainSpec {
            delta,
            ..eight_sites()
        };
        let grid = run_sweep(&SweepRequest::new(spec, 0.1, vec![axis.clone()], vec![1])).unwrap();
        let report = detect_plateaus(&axis.values, &grid.series(0), 1e-3, 3).unwrap();
        report.steps.iter().filter(|s| s.magnitude > 0.05).count()
    };
    assert!(big_steps(0.2) >= 3);
    assert_eq!(big_steps(1.0), 1);
}

#[test]
fn tilt_ordering_at_six_sites() {
    let template = ChainSpec {
        n_sites: 6,
        model: Model::Xx,
        ..ChainSpec::default()
    };
    let b: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
    let tilts = xx_tilt_comparison(&template, &[0.0, FRAC_PI_4, FRAC_PI_2], &b, 0.1, 1).unwrap();
    let maxima: Vec<f64> = tilts.iter().map(|t| t.post_dip_max.unwrap()).collect();
    assert!(maxima.windows(2).all(|w| w[0] < w[1]), "{maxima:?}");
    assert!(maxima[0] < 1e-6 && maxima[2] > 0.1);

    let single = xx_tilt_comparison(&template, &[FRAC_PI_4], &b, 0.1, 1).unwrap();
    assert_eq!(single[0].grid, tilts[1].grid);
    assert!(xx_tilt_comparison(&eight_sites(), &[0.0], &b, 0.1, 1).is_err());
}

/// A staircase with linear transitions one grid spacing wide.
fn staircase(levels: &[f64], locations: &[f64], b: &[f64]) -> Vec<f64> {
    let h = b[1] - b[0];
    b.iter()
        .map(|&x| {
            let mut c = levels[0];
            for (k, &loc) in locations.iter().enumerate() {
                let t = ((x - loc) / h + 0.5).clamp(0.0, 1.0);
                c += t * (levels[k + 1] - levels[k]);
            }
            c
        })
        .collect()
}

proptest! {
    #[test]
    fn planted_steps_are_recovered(
        gaps in proptest::collection::vec(12usize..40, 1..5),
        drops in proptest::collection::vec(0.02f64..0.3, 4),
        offset in 0.0f64..1.0,
    ) {
        let b: Vec<f64> = (0..240).map(|i| i as f64 * 0.02).collect();
        let h = b[1];
        let mut idx = 10;
        let mut locations = Vec::new();
        for g in &gaps {
            idx += g;
            locations.push(b[idx] + offset * h);
        }
        prop_assume!(idx + 10 < b.len());
        let mut levels = vec![1.0];
        for d in drops.iter().take(gaps.len()) {
            levels.push(levels.last().unwrap() - d);
        }
        let c = staircase(&levels, &locations, &b);
        let tol = 1e-3;
        let report = detect_plateaus(&b, &c, tol, 3).unwrap();
        prop_assert_eq!(report.steps.len(), locations.len());
        for (k, step) in report.steps.iter().enumerate() {
            prop_assert!((step.location - locations[k]).abs() <= h);
            prop_assert!((step.magnitude - (levels[k] - levels[k + 1])).abs() <= 2.0 * tol);
        }
    }
}

#[test]
fn low_temperature_magnetization_has_even_integer_plateaus() {
    let chain = PreparedChain::new(&ChainSpec::default()).unwrap();
    let b = b_axis(4.0, 400).values;
    let m: Vec<f64> = b
        .iter()
        .map(|&x| chain.magnetization(x, 0.02).unwrap())
        .collect();
    let report = detect_plateaus(&b, &m, 1e-3, 3).unwrap();
    let mut levels = Vec::new();
    for p in &report.plateaus {
        let level = (p.mean / 2.0).round() * 2.0;
        assert!(
            (p.mean - level).abs() < 1e-3,
            "plateau at {} has mean {}",
            p.b_start,
            p.mean
        );
        if levels.last() != Some(&level) {
            levels.push(level);
        }
    }
    assert_eq!(levels, [0.0, -2.0, -4.0, -6.0, -8.0]);
}
