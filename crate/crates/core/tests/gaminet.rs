use gamsum::corpus::to_model_bytes;
use gamsum::gam::Term;
use gamsum::gaminet::{
    batch_gradient, clarity_from_outputs, clarity_penalty, export_fidelity, gradient_check, train_gaminet, Batch,
    GaminetConfig, Mlp,
};
use gamsum::synthetic::{additive_data, planted_interaction, Planted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn batch(rng: &mut ChaCha8Rng, arity: usize, n: usize) -> Batch {
    Batch {
        inputs: (0..n).map(|_| (0..arity).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect(),
        targets: (0..n).map(|_| f64::from(rng.gen_range(0..2u8))).collect(),
    }
}

fn quick(seed: u64, epochs: [usize; 3]) -> GaminetConfig {
    GaminetConfig {
        epochs,
        seed,
        ..GaminetConfig::default()
    }
}

#[test]
fn gradient_check_main_and_pair_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for arity in [1, 2] {
        let net = Mlp::new(arity, &[16, 16], &mut rng);
        let b = batch(&mut rng, arity, 32);
        let err = gradient_check(&net, &b);
        assert!(err < 1e-4, "arity {arity}: {err}");
    }
}

#[test]
fn zero_network_gradient_is_closed_form() {
    let net = Mlp::zeros(2, &[8]);
    let b = Batch {
        inputs: vec![vec![0.3, -0.1]; 5],
        targets: vec![1.0, 1.0, 0.0, 1.0, 0.0],
    };
    let g = batch_gradient(&net, &b);
    // logistic(0) = 0.5, so the bias gradient is 0.5 - mean(y)
    assert!((g.last().unwrap() - (0.5 - 0.6)).abs() < 1e-15);
    assert!(g[..g.len() - 1].iter().all(|&v| v == 0.0));
}

fn symmetric_grid(k: usize) -> (Vec<[f64; 2]>, Vec<usize>, Vec<usize>) {
    let level = |a: usize| (a as f64 - (k as f64 - 1.0) / 2.0) / k as f64;
    let mut xs = Vec::new();
    let (mut bi, mut bj) = (Vec::new(), Vec::new());
    for a in 0..k {
        for b in 0..k {
            xs.push([level(a), level(b)]);
            bi.push(a);
            bj.push(b);
        }
    }
    (xs, bi, bj)
}

#[test]
fn clarity_of_constant_output_is_its_square() {
    let mut net = Mlp::zeros(2, &[4]);
    *net.params.last_mut().unwrap() = -1.5;
    let (xs, bi, bj) = symmetric_grid(6);
    let p = clarity_penalty(&net, &xs, [&bi, &bj]);
    assert!((p - 2.25).abs() < 1e-12, "{p}");
}

#[test]
fn clarity_of_product_on_symmetric_grid_vanishes() {
    let (xs, bi, bj) = symmetric_grid(8);
    let out: Vec<f64> = xs.iter().map(|x| x[0] * x[1]).collect();
    let (p, _) = clarity_from_outputs(&out, [&bi, &bj]);
    assert!(p < 1e-24, "{p}");
    // a main effect leaking into the pair is penalized
    let leaky: Vec<f64> = xs.iter().map(|x| x[0] * x[1] + x[0]).collect();
    assert!(clarity_from_outputs(&leaky, [&bi, &bj]).0 > 1e-3);
}

fn logloss(nets: &gamsum::gaminet::GaminetNetworks, data: &gamsum::dataset::Dataset) -> f64 {
    let total: f64 = data
        .rows()
        .zip(&data.labels)
        .map(|(r, &y)| {
            let z = nets.predict_logit(r);
            z.max(0.0) + (-z.abs()).exp().ln_1p() - f64::from(y) * z
        })
        .sum();
    total / data.n_rows() as f64
}

#[test]
fn zero_clarity_weight_leaves_pure_logloss() {
    // one full batch with a negligible step: the logged fine-tuning objective
    // is the loss of the final networks
    let data = Planted {
        rows: 400,
        features: 4,
        interaction: 6.0,
        seed: 2,
    }
    .generate();
    let config = |lambda| GaminetConfig {
        epochs: [1, 1, 1],
        batch_size: 1000,
        step_size: 1e-12,
        tau: 1.0,
        clarity_weight: lambda,
        seed: 3,
        ..GaminetConfig::default()
    };
    let pure = train_gaminet(&data, None, &config(0.0)).unwrap();
    assert!(!pure.networks.pairs.is_empty());
    let objective = pure.log.last().unwrap().train_objective;
    assert!((objective - logloss(&pure.networks, &data)).abs() < 1e-9);

    let penalized = train_gaminet(&data, None, &config(1.0)).unwrap();
    let objective = penalized.log.last().unwrap().train_objective;
    assert!(objective - logloss(&penalized.networks, &data) > 1e-6);
}

#[test]
fn noise_mains_are_pruned() {
    let data = additive_data(3000, 2, 9);
    let config = GaminetConfig {
        tau: 0.98,
        interactions: 0,
        ..quick(4, [60, 1, 20])
    };
    let out = train_gaminet(&data, None, &config).unwrap();
    assert_eq!(out.pruned_mains, vec![2, 3], "variances {:?}", out.main_variances);
    assert_eq!(out.networks.retained_mains(), vec![0, 1]);
}

#[test]
fn heredity_and_pruned_terms_on_planted_data() {
    let data = planted_interaction(4000, 3).generate();
    let held_out = planted_interaction(2000, 8).generate();
    let out = train_gaminet(&data, None, &quick(1, [40, 40, 20])).unwrap();
    let nets = &out.networks;
    assert!(nets.heredity_violations().is_empty(), "{:?}", nets.pairs.iter().map(|p| p.features).collect::<Vec<_>>());
    let kept = nets.retained_mains();
    for (i, j) in nets.pairs.iter().map(|p| p.features) {
        assert!(kept.contains(&i) || kept.contains(&j));
    }
    assert!(out.candidate_pairs.len() <= GaminetConfig::default().interactions);
    for &f in &out.pruned_mains {
        assert!(out.model.mains.iter().all(|m| m.feature != f));
        for r in held_out.rows().take(50) {
            assert_eq!(nets.contribution(Term::Main(f), r), 0.0);
        }
    }
    for &(i, j) in &out.pruned_pairs {
        assert!(out.model.pairs.iter().all(|p| p.features != (i, j)));
        for r in held_out.rows().take(50) {
            assert_eq!(nets.contribution(Term::Pair(i, j), r), 0.0);
        }
    }
    let fidelity = export_fidelity(nets, &out.model, &held_out);
    assert!(fidelity < 0.05, "fidelity {fidelity}");
}

#[test]
fn same_seed_same_grids() {
    let data = planted_interaction(1500, 6).generate();
    let config = quick(12, [15, 15, 5]);
    let a = train_gaminet(&data, None, &config).unwrap();
    let b = train_gaminet(&data, None, &config).unwrap();
    assert_eq!(a.model, b.model);
    let bytes = |m| to_model_bytes(&gamsum::corpus::ModelFile::new(gamsum::corpus::ModelKind::Gaminet, serde_json::Value::Null, m, None)).unwrap();
    assert_eq!(bytes(a.model.clone()), bytes(b.model));
    let c = train_gaminet(&data, None, &quick(13, [15, 15, 5])).unwrap();
    assert_ne!(a.model, c.model);
}
