//! Shared fixtures and brute-force reference computations.
#![allow(dead_code)]

use gamsum::corpus::{load_corpus, RawDocument};
use rand::Rng;

pub const MINI_CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/mini_corpus.jsonl");

pub fn mini_corpus() -> Vec<RawDocument> {
    load_corpus(MINI_CORPUS).expect("bundled mini-corpus loads")
}

/// Longest common subsequence by trying every subsequence of the shorter
/// list, longest first.
pub fn brute_force_lcs(a: &[String], b: &[String]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let n = short.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let len = mask.count_ones() as usize;
        if len <= best {
            continue;
        }
        let sub: Vec<&String> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| &short[k]).collect();
        let mut it = long.iter();
        if sub.iter().all(|t| it.any(|x| x == *t)) {
            best = len;
        }
    }
    best
}

pub fn random_tokens(rng: &mut impl Rng, max_len: usize, alphabet: usize) -> Vec<String> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| format!("t{}", rng.gen_range(0..alphabet))).collect()
}

pub fn f_measure(hits: usize, cand: usize, reference: usize) -> f64 {
    if hits == 0 {
        return 0.0;
    }
    let p = hits as f64 / cand as f64;
    let r = hits as f64 / reference as f64;
    2.0 * p * r / (p + r)
}

pub fn words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

/// A random additive model over `1..=6` features with a mix of binned and
/// linear mains and some pairs, plus the data its binners were fit on.
pub fn random_model(rng: &mut impl Rng) -> (gamsum::gam::AdditiveModel, gamsum::dataset::Dataset) {
    use gamsum::dataset::Dataset;
    use gamsum::gam::{AdditiveModel, Binner, MainShape, PairShape, ShapeValues};

    let d = rng.gen_range(1..=6);
    let rows = rng.gen_range(10..60);
    let values: Vec<f64> = (0..rows * d)
        .map(|_| if rng.gen_bool(0.2) { f64::from(rng.gen_range(0..4)) } else { rng.gen_range(-3.0..3.0) })
        .collect();
    let labels = (0..rows).map(|_| rng.gen_range(0..2)).collect();
    let names = (0..d).map(|j| format!("f{j}")).collect();
    let data = Dataset::new(names, values, labels).unwrap();
    let binner = Binner::fit(&data, rng.gen_range(2..40)).unwrap();
    let pair_binner = Binner::fit(&data, rng.gen_range(2..12)).unwrap();
    let kept: Vec<usize> = (0..d).filter(|_| rng.gen_bool(0.8)).collect();
    let mains = kept
        .into_iter()
        .map(|j| MainShape {
            feature: j,
            shape: if rng.gen_bool(0.7) {
                ShapeValues::Binned {
                    values: (0..binner.n_bins(j)).map(|_| rng.gen_range(-5.0..5.0)).collect(),
                }
            } else {
                ShapeValues::Linear {
                    coef: rng.gen_range(-2.0..2.0),
                    offset: rng.gen_range(-1.0..1.0),
                }
            },
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if rng.gen_bool(0.3) {
                let (r, c) = (pair_binner.n_bins(i), pair_binner.n_bins(j));
                let mut p = PairShape::zeros((i, j), r, c);
                p.values.iter_mut().for_each(|v| *v = rng.gen_range(-3.0..3.0));
                pairs.push(p);
            }
        }
    }
    let model = AdditiveModel::new(
        data.feature_names.clone(),
        rng.gen_range(-2.0..2.0),
        mains,
        pairs,
        binner,
        pair_binner,
    )
    .unwrap();
    (model, data)
}

/// Left fold of the decomposition in its reported order.
pub fn summed_terms(model: &gamsum::gam::AdditiveModel, x: &[f64]) -> f64 {
    let dec = model.decompose(x);
    dec.terms.iter().fold(dec.intercept, |acc, t| acc + t.value)
}
