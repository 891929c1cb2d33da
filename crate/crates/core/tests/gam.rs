mod common;

use gamsum::corpus::{from_model_bytes, to_model_bytes, ModelFile, ModelKind};
use gamsum::dataset::Dataset;
use gamsum::gam::logistic::{train_logistic, LogisticConfig};
use gamsum::gam::{importance_ratios, ImportanceStatistic, Term};
use gamsum::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, _) = common::random_model(&mut rng);
        for _ in 0..20 {
            let x: Vec<f64> = (0..model.n_features()).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let logit = model.predict_logit(&x);
            prop_assert_eq!(common::summed_terms(&model, &x).to_bits(), logit.to_bits());
            let dec = model.decompose(&x);
            prop_assert_eq!(dec.total().to_bits(), logit.to_bits());
            // canonical order: mains by feature, then pairs lexicographically
            let terms: Vec<Term> = dec.terms.iter().map(|t| t.term).collect();
            prop_assert_eq!(terms, model.terms());
        }
    }

    #[test]
    fn centering_keeps_predictions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut model, data) = common::random_model(&mut rng);
        let before: Vec<f64> = data.rows().map(|r| model.predict_logit(r)).collect();
        model.center(&data);
        for (r, b) in data.rows().zip(&before) {
            prop_assert!((model.predict_logit(r) - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
        for m in model.term_means(&data) {
            prop_assert!(m.abs() < 1e-9);
        }
    }

    #[test]
    fn model_file_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, _) = common::random_model(&mut rng);
        let file = ModelFile::new(ModelKind::Ebm, serde_json::json!({"rounds": 3}), model, None);
        let bytes = to_model_bytes(&file).unwrap();
        let back = from_model_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(to_model_bytes(&back).unwrap(), bytes);
    }
}

fn sample_file() -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (model, _) = common::random_model(&mut rng);
    to_model_bytes(&ModelFile::new(ModelKind::Logistic, serde_json::json!({}), model, None)).unwrap()
}

#[test]
fn future_version_is_rejected() {
    let text = String::from_utf8(sample_file()).unwrap();
    let bumped = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
    assert_ne!(text, bumped);
    match from_model_bytes(bumped.as_bytes()) {
        Err(Error::UnsupportedVersion { found: 2, supported: 1 }) => {}
        other => panic!("expected a version error, got {other:?}"),
    }
}

#[test]
fn tampered_payload_fails_integrity() {
    let text = String::from_utf8(sample_file()).unwrap();
    let at = text.find("\"intercept\": ").unwrap() + "\"intercept\": ".len();
    let mut tampered = text.clone();
    tampered.insert(at, '1');
    assert!(matches!(from_model_bytes(tampered.as_bytes()), Err(Error::Integrity(_))));
    assert!(matches!(from_model_bytes(b"{ not json"), Err(Error::Integrity(_))));
    let truncated = &text.as_bytes()[..text.len() / 2];
    assert!(matches!(from_model_bytes(truncated), Err(Error::Integrity(_))));
}

/// Newton-Raphson (IRLS) logistic regression with a dense solve.
fn irls(data: &Dataset) -> DVector<f64> {
    let (n, d) = (data.n_rows(), data.n_features());
    let x = DMatrix::from_fn(n, d + 1, |i, j| if j == 0 { 1.0 } else { data.row(i)[j - 1] });
    let y = DVector::from_iterator(n, data.labels.iter().map(|&l| f64::from(l)));
    let mut beta = DVector::zeros(d + 1);
    for _ in 0..50 {
        let eta = &x * &beta;
        let p = eta.map(|z| 1.0 / (1.0 + (-z).exp()));
        let w = p.map(|q| q * (1.0 - q));
        let grad = x.transpose() * (&y - &p);
        let mut hess = DMatrix::zeros(d + 1, d + 1);
        for i in 0..n {
            let row = x.row(i);
            hess += w[i] * row.transpose() * row;
        }
        let step = hess.lu().solve(&grad).expect("non-singular Hessian");
        beta += &step;
        if step.norm() < 1e-13 {
            break;
        }
    }
    beta
}

#[test]
fn logistic_matches_newton_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..5 {
        let d = 1 + trial % 4;
        let n = 400;
        let truth: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let x: Vec<f64> = (0..d).map(|j| rng.gen_range(0.0..1.0) * (j + 1) as f64).collect();
            let z = truth[0] + x.iter().zip(&truth[1..]).map(|(a, b)| a * b).sum::<f64>();
            labels.push(u8::from(rng.gen_bool(1.0 / (1.0 + (-z).exp()))));
            values.extend(x);
        }
        let data = Dataset::new((0..d).map(|j| format!("x{j}")).collect(), values, labels).unwrap();
        let beta = irls(&data);
        let (model, report) = train_logistic(&data, &LogisticConfig::default()).unwrap();
        assert!(report.converged);
        let coefs = model.linear_coefficients().unwrap();
        for j in 0..d {
            assert!((coefs[j] - beta[j + 1]).abs() < 1e-4, "coef {j}: {} vs {}", coefs[j], beta[j + 1]);
        }
        for r in data.rows().take(50) {
            let want = beta[0] + r.iter().zip(beta.iter().skip(1)).map(|(a, b)| a * b).sum::<f64>();
            assert!((model.predict_logit(r) - want).abs() < 1e-4);
        }
    }
}

#[test]
fn importance_ratios_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let (model, data) = common::random_model(&mut rng);
        for stat in [ImportanceStatistic::Std, ImportanceStatistic::Mad] {
            match importance_ratios(&model, &data, stat) {
                Ok(ratios) => {
                    let total: f64 = ratios.iter().map(|r| r.ratio).sum();
                    assert!((total - 1.0).abs() < 1e-9);
                    assert!(ratios.windows(2).all(|w| w[0].ratio >= w[1].ratio));
                }
                Err(Error::ZeroImportance) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn schema_mismatch_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (model, _) = common::random_model(&mut rng);
    let mut names: Vec<String> = model.feature_names.clone();
    names.push("extra".into());
    assert!(matches!(model.check_schema(&names), Err(Error::Schema(_))));
    assert!(model.check_schema(&model.feature_names.clone()).is_ok());
}
