//! Planted-effect generators with known log-odds, for checking trainers.

use rand::Rng;

use crate::dataset::Dataset;
use crate::gam::logistic;
use crate::seed;

pub fn linear_effect(x: f64) -> f64 {
    2.0 * x - 1.0
}

pub fn wave_effect(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin()
}

/// Product surface centered at (0.5, 0.5); it is orthogonal to both
/// marginals under independent uniform inputs.
pub fn product_effect(x1: f64, x2: f64, strength: f64) -> f64 {
    strength * (x1 - 0.5) * (x2 - 0.5)
}

/// `features` uniform inputs on [0, 1]. The first carries
/// [`linear_effect`], the second [`wave_effect`], and the two interact
/// through [`product_effect`]; the rest are noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Planted {
    pub rows: usize,
    pub features: usize,
    pub interaction: f64,
    pub seed: u64,
}

impl Planted {
    pub fn logit(&self, x: &[f64]) -> f64 {
        linear_effect(x[0]) + wave_effect(x[1]) + product_effect(x[0], x[1], self.interaction)
    }

    pub fn generate(&self) -> Dataset {
        assert!(self.features >= 2, "planted data needs two signal features");
        let mut rng = seed::rng(self.seed, "planted", &self.features.to_string());
        let mut values = Vec::with_capacity(self.rows * self.features);
        let mut labels = Vec::with_capacity(self.rows);
        for _ in 0..self.rows {
            let x: Vec<f64> = (0..self.features).map(|_| rng.gen::<f64>()).collect();
            let p = logistic(self.logit(&x));
            labels.push(u8::from(rng.gen::<f64>() < p));
            values.extend(x);
        }
        let names = (1..=self.features).map(|i| format!("x{i}")).collect();
        Dataset::new(names, values, labels).expect("planted data is well formed")
    }
}

/// The standard suite: 6 features, product strength 6.
pub fn planted_interaction(rows: usize, seed: u64) -> Planted {
    Planted {
        rows,
        features: 6,
        interaction: 6.0,
        seed,
    }
}

/// Labels from a sign pattern on the first two features with a third
/// feature adding an additive effect: an interaction no additive model can
/// express.
pub fn xor_data(rows: usize, seed: u64) -> Dataset {
    let mut rng = seed::rng(seed, "xor", "");
    let mut values = Vec::with_capacity(rows * 3);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let x: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let sign = if (x[0] > 0.5) == (x[1] > 0.5) { 1.0 } else { -1.0 };
        let z = 2.0 * sign + (x[2] - 0.5);
        labels.push(u8::from(rng.gen::<f64>() < logistic(z)));
        values.extend(x);
    }
    Dataset::new(vec!["x1".into(), "x2".into(), "x3".into()], values, labels)
        .expect("xor data is well formed")
}

/// Purely additive data: `y ~ Bernoulli(logistic(2 x1 - 1 + wave(x2)))`
/// with `noise` extra uniform features.
pub fn additive_data(rows: usize, noise: usize, seed: u64) -> Dataset {
    Planted {
        rows,
        features: 2 + noise,
        interaction: 0.0,
        seed,
    }
    .generate()
}
