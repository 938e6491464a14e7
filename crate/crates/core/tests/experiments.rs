use hilreg::experiments::{
    read_results, run_arh_forecast, run_cell_with, write_results, ArhSpec, ExperimentSpec, RuleKind,
    TestOperator,
};
use hilreg::procgen::{NoiseShape, OperatorKind, ProfileKind};
use hilreg::Execution;

fn spec(profile: ProfileKind, operator: TestOperator, sigma2: f64, n: usize, runs: usize) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(profile, operator, sigma2, n);
    s.runs = runs;
    s.seed = 3;
    s
}

#[test]
fn larger_noise_never_lowers_mse_at_n80() {
    for profile in ProfileKind::TABLE {
        for op in TestOperator::ALL {
            let low = run_cell_with(&spec(profile, op, 1.0, 80, 40), Execution::Parallel).unwrap();
            let high = run_cell_with(&spec(profile, op, 4.0, 80, 40), Execution::Parallel).unwrap();
            for rule in [RuleKind::Predict, RuleKind::Cv] {
                let (a, b) = (low.outcome(rule).unwrap().mse, high.outcome(rule).unwrap().mse);
                assert!(b >= a, "{profile} {op} {rule}: σ²=4 gives {b}, σ²=1 gives {a}");
            }
        }
    }
}

#[test]
fn adaptive_level_grows_with_n() {
    for (profile, op) in
        [(ProfileKind::LAMBDA1, TestOperator::Psi3), (ProfileKind::Poly11, TestOperator::Psi1)]
    {
        let ks: Vec<f64> = [80, 320, 1280, 5120]
            .iter()
            .map(|&n| {
                let mut s = spec(profile, op, 1.0, n, 40);
                s.rules = vec![RuleKind::Predict];
                run_cell_with(&s, Execution::Parallel).unwrap().rules[0].median_k
            })
            .collect();
        assert!(ks.windows(2).all(|w| w[1] >= w[0]), "{profile} {op}: {ks:?}");
    }
}

#[test]
fn results_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let cells: Vec<_> = [80, 320]
        .iter()
        .map(|&n| {
            run_cell_with(&spec(ProfileKind::Poly2, TestOperator::Psi2, 1.0, n, 4), Execution::Sequential)
                .unwrap()
        })
        .collect();
    write_results(&cells, Some("round trip"), &path).unwrap();
    assert_eq!(read_results(&path).unwrap(), cells);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 1 + 4);
}

#[test]
fn noise_shape_is_recorded_and_matters() {
    let mut a = spec(ProfileKind::LAMBDA1, TestOperator::Psi1, 1.0, 80, 10);
    let mut b = a.clone();
    a.noise_shape = NoiseShape::Profile;
    b.noise_shape = NoiseShape::PerCoordinate;
    let (ca, cb) =
        (run_cell_with(&a, Execution::Parallel).unwrap(), run_cell_with(&b, Execution::Parallel).unwrap());
    assert_eq!(ca.noise_shape, NoiseShape::Profile);
    assert!(cb.outcome(RuleKind::Predict).unwrap().mse > ca.outcome(RuleKind::Predict).unwrap().mse);
}

#[test]
fn arh_forecast_requires_contraction() {
    let mut s = ArhSpec::new(OperatorKind::Psi1Identity, ProfileKind::LAMBDA1, 5, vec![80]);
    s.target_norm = 1.0;
    assert!(run_arh_forecast(&s, Execution::Sequential).is_err());
    s.target_norm = 0.5;
    s.runs = 3;
    let cells = run_arh_forecast(&s, Execution::Sequential).unwrap();
    assert_eq!(cells.len(), 1);
    assert!(cells[0].median_k >= 1.0 && cells[0].mse >= 0.0);
}
