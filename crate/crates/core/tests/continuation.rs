use cone_moduli::continuation::{RowStatus, SweepMode};
use cone_moduli::{
    continue_to_angles, load, solve_complete, sweep, trace_map, AngleMode, ConeTarget, ContinuationOptions,
    PathStatus, ShapeAssignment,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn figure8() -> (cone_moduli::GluingSystem, ShapeAssignment) {
    let system = load("figure8").unwrap().assemble();
    let complete = solve_complete(&system, None).unwrap();
    (system, complete)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn accepted_samples_solve_the_system(theta in 0.05f64..1.3) {
        let (system, complete) = figure8();
        let target = ConeTarget::new(vec![theta]).unwrap();
        let path = continue_to_angles(&system, &complete, &target, &ContinuationOptions::default()).unwrap();
        prop_assert!(path.is_completed());
        prop_assert!(path.samples.windows(2).all(|w| w[1].t > w[0].t));
        for s in &path.samples {
            let r = system.residual(&s.shapes, &s.log_holonomies).unwrap();
            prop_assert!(r.iter().all(|r| r.norm() < 1e-10));
            let tr = trace_map(&system, &s.shapes, target.signs()).unwrap();
            prop_assert!(tr.iter().zip(&s.traces).all(|(a, b)| (a - b).norm() < 1e-9));
        }
        let last = path.last();
        prop_assert!((last.log_holonomies[0] - Complex64::new(0.0, theta)).norm() < 1e-10);
        prop_assert!((last.traces[0] - 2.0 * (theta / 2.0).cos()).norm() < 1e-9);
    }
}

#[test]
fn volume_decreases_with_angle() {
    let (system, complete) = figure8();
    let grid: Vec<f64> = (1..=20).map(|k| 2.0 * k as f64 / 20.0).collect();
    let rows = sweep(
        &system,
        &complete,
        &grid,
        &[1.0],
        &[1.0],
        AngleMode::Standard,
        &ContinuationOptions::default(),
        SweepMode::WarmStart,
    )
    .unwrap();
    assert!(rows.iter().all(|r| r.status == RowStatus::Completed));
    assert!(rows.windows(2).all(|w| w[1].volume < w[0].volume));
}

#[test]
fn warm_and_independent_sweeps_agree() {
    let (system, complete) = figure8();
    let grid: Vec<f64> = (1..=8).map(|k| 0.2 * k as f64).collect();
    let opts = ContinuationOptions::default();
    let run = |mode| sweep(&system, &complete, &grid, &[1.0], &[1.0], AngleMode::Standard, &opts, mode).unwrap();
    let warm = run(SweepMode::WarmStart);
    let cold = run(SweepMode::Independent { jobs: 3 });
    for (a, b) in warm.iter().zip(&cold) {
        assert_eq!(a.status, b.status);
        assert!((a.volume - b.volume).abs() < 1e-10);
    }
    assert_eq!(cold, run(SweepMode::Independent { jobs: 3 }));
}

#[test]
fn sweep_rejects_bad_grids() {
    let (system, complete) = figure8();
    let opts = ContinuationOptions::default();
    for grid in [vec![], vec![0.5, 0.5], vec![1.0, 0.5], vec![0.1, f64::NAN]] {
        assert!(sweep(&system, &complete, &grid, &[1.0], &[1.0], AngleMode::Standard, &opts, SweepMode::WarmStart)
            .is_err());
    }
}

#[test]
fn target_above_standard_range_is_rejected() {
    assert!(ConeTarget::new(vec![2.5]).is_err());
    assert!(ConeTarget::new(vec![-0.1]).is_err());
    assert!(ConeTarget::new(vec![2.0]).is_ok());
}

#[test]
fn whitehead_equal_angles_keep_equal_traces() {
    let system = load("whitehead").unwrap().assemble();
    let complete = solve_complete(&system, None).unwrap();
    let target = ConeTarget::new(vec![1.2, 1.2]).unwrap();
    let path = continue_to_angles(&system, &complete, &target, &ContinuationOptions::default()).unwrap();
    assert!(matches!(path.status, PathStatus::Completed));
    for s in &path.samples {
        assert!((s.traces[0] - s.traces[1]).norm() < 1e-9);
    }
}

#[test]
fn continuation_is_deterministic() {
    let (system, complete) = figure8();
    let target = ConeTarget::new(vec![1.7]).unwrap();
    let opts = ContinuationOptions::default();
    let a = continue_to_angles(&system, &complete, &target, &opts).unwrap();
    let b = continue_to_angles(&system, &complete, &target, &opts).unwrap();
    assert_eq!(a.last().shapes, b.last().shapes);
    assert_eq!(a.samples.len(), b.samples.len());
}
