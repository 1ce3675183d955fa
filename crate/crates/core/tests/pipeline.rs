use qboost::dataset::{Dataset, Label};
use qboost::objective::{build_qubo, ResponseTable};
use qboost::pipeline::{cross_validate_lambda, train, train_on_splits, Method, TrainSpec};
use qboost::solvers::solve_exhaustive;
use qboost::stumps::{build_dictionary, ScaleMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Label decided by the sign of x_0; x_1 and x_2 are constant, so their
/// stumps can only output a constant. Classes alternate, so every set built
/// from an even number of consecutive samples is balanced.
fn toy(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|k| {
            let mag = 0.5 + rng.random_range(0.0..0.5);
            let x0 = if k % 2 == 0 { mag } else { -mag };
            vec![x0, 0.3, -0.2]
        })
        .collect();
    let labels = (0..n)
        .map(|k| if k % 2 == 0 { Label::Positive } else { Label::Negative })
        .collect();
    Dataset::from_raw(rows, labels, false).unwrap()
}

fn toy_spec(method: Method, grid: Vec<f64>) -> TrainSpec {
    let mut spec = TrainSpec::new(method, 11);
    spec.lambda_grid = Some(grid);
    spec.cv_folds = 5;
    spec
}

#[test]
fn qp_on_separable_toy_matches_exhaustive_oracle() {
    let (train_set, val, test) = (toy(40, 1), toy(20, 2), toy(30, 3));
    let lambda = 0.01 * 40.0 / 36.0;
    let spec = toy_spec(Method::Qp, vec![lambda]);
    let out = train_on_splits(&train_set, &val, &test, &spec).unwrap();
    assert_eq!(out.report.test_errors, 0);
    assert_eq!(out.report.num_active_weak_classifiers, 1);

    let dict = build_dictionary(&train_set, 1, ScaleMode::OneOverN).unwrap();
    let table = ResponseTable::new(&dict, &train_set).unwrap();
    let qubo = build_qubo(&table, lambda, 1, None).unwrap();
    let oracle = solve_exhaustive(&qubo).unwrap();
    assert_eq!(out.classifier.weights, qubo.decode(&oracle.best_bits).unwrap());
}

#[test]
fn zero_one_on_separable_toy() {
    let spec = toy_spec(Method::ZeroOne, vec![0.5]);
    let out = train_on_splits(&toy(40, 1), &toy(20, 2), &toy(30, 3), &spec).unwrap();
    assert_eq!(out.report.test_errors, 0);
    assert_eq!(out.report.num_active_weak_classifiers, 1);
}

#[test]
fn adaboost_on_separable_toy() {
    let spec = TrainSpec::new(Method::Adaboost, 4);
    let out = train_on_splits(&toy(40, 1), &toy(20, 2), &toy(30, 3), &spec).unwrap();
    assert_eq!(out.report.test_errors, 0);
    assert_eq!(out.report.threshold, 0.0);
    assert_eq!(out.report.boosting_rounds, Some(1));
}

#[test]
fn cv_single_lambda_and_huge_lambda() {
    let pool = toy(60, 5);
    let spec = toy_spec(Method::Qp, vec![0.3]);
    assert_eq!(cross_validate_lambda(&pool, &spec, 40).unwrap().chosen_lambda, 0.3);

    let spec = toy_spec(Method::Qp, vec![0.0, 1e6]);
    let cv = cross_validate_lambda(&pool, &spec, 40).unwrap();
    assert_eq!(cv.chosen_lambda, 0.0);
    let huge = &cv.scores[1];
    assert_eq!(huge.mean_active, 0.0);
    // all-zero weights predict +1 everywhere: error is the negative-class rate of each fold
    let mean_negative = 0.5;
    assert!((huge.mean_error_rate - mean_negative).abs() < 0.1);
    assert_eq!(cv.scores[0].mean_error_rate, 0.0);
}

#[test]
fn cv_folds_are_deterministic() {
    let pool = toy(30, 6);
    let spec = toy_spec(Method::ZeroOne, vec![0.0, 0.5, 2.0]);
    assert_eq!(
        cross_validate_lambda(&pool, &spec, 20).unwrap(),
        cross_validate_lambda(&pool, &spec, 20).unwrap()
    );
}

fn noisy(seed: u64) -> Dataset {
    qboost::data::generate(&qboost::data::SyntheticConfig {
        dimension: 4,
        overlap: 0.8,
        num_samples: 150,
        seed,
        ..Default::default()
    })
    .unwrap()
}

#[test]
fn training_is_deterministic() {
    for method in [Method::Qp, Method::ZeroOne, Method::Adaboost] {
        let mut spec = TrainSpec::new(method, 99);
        spec.cv_folds = 4;
        let data = noisy(1);
        let a = train(&data, &spec).unwrap();
        let b = train(&data, &spec).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(a.classifier.to_json().unwrap(), b.classifier.to_json().unwrap());
    }
}

#[test]
fn test_labels_do_not_leak() {
    for method in [Method::Qp, Method::ZeroOne, Method::Adaboost] {
        let mut spec = TrainSpec::new(method, 5);
        spec.cv_folds = 4;
        let data = noisy(2);
        let idx: Vec<usize> = (0..data.len()).collect();
        let (tr, va, te) = (
            data.subset(&idx[..50]).unwrap(),
            data.subset(&idx[50..100]).unwrap(),
            data.subset(&idx[100..]).unwrap(),
        );
        let flipped: Vec<_> = te
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let mut s = s.clone();
                if k % 3 == 0 {
                    s.label = s.label.flipped();
                }
                s
            })
            .collect();
        let te2 = Dataset::new(flipped).unwrap();
        let a = train_on_splits(&tr, &va, &te, &spec).unwrap();
        let b = train_on_splits(&tr, &va, &te2, &spec).unwrap();
        assert_eq!(a.classifier, b.classifier);
        let (mut ra, mut rb) = (a.report, b.report);
        for r in [&mut ra, &mut rb] {
            r.test_errors = 0;
            r.test_error_rate = 0.0;
        }
        assert_eq!(ra, rb);
    }
}

#[test]
fn qp_objective_equals_energy_plus_offset() {
    let mut spec = TrainSpec::new(Method::Qp, 3);
    spec.cv_folds = 4;
    let out = train(&noisy(3), &spec).unwrap();
    let obj = out.report.train_objective.unwrap();
    let energy = out.report.solver_energy_with_offset.unwrap();
    assert!((obj - energy).abs() < 1e-9, "{obj} vs {energy}");
}

#[test]
fn chosen_model_respects_active_cap() {
    let mut spec = TrainSpec::new(Method::Qp, 8);
    spec.cv_folds = 4;
    let out = train(&noisy(4), &spec).unwrap();
    let cv = out.report.cv.as_ref().unwrap();
    if !cv.fell_back {
        let chosen = cv.scores.iter().find(|s| s.lambda == cv.chosen_lambda).unwrap();
        assert!(chosen.mean_active <= cv.num_stumps as f64 / 2.0);
    }
    assert!(out.report.test_error_rate >= 0.0 && out.report.test_error_rate <= 1.0);
    assert_eq!(
        out.report.test_error_rate,
        out.report.test_errors as f64 / out.report.test_size as f64
    );
}
