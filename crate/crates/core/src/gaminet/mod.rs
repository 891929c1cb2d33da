//! GAMI-Net: one small network per main effect or pair, trained in three
//! stages with pruning, heredity and a marginal-clarity penalty.
//!
//! 1. Main-effect networks are trained jointly; the smallest set of mains
//!    whose output variance reaches a `tau` share of the total is kept.
//! 2. Pairs are screened on the stage-1 residuals, restricted to pairs with
//!    a retained parent, trained with the mains frozen, then pruned the
//!    same way.
//! 3. Every retained network and the intercept are fine-tuned together.
//!
//! The finished networks are evaluated on bin grids and exported as an
//! [`AdditiveModel`].

mod check;
mod clarity;
mod mlp;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::ebm::{rank_interactions_from_logits, PairStrength};
use crate::gam::{logistic, AdditiveModel, Binner, MainShape, PairShape, ShapeValues, Term};
use crate::{seed, Error, Result};

pub use check::{batch_gradient, batch_loss, gradient_check, Batch, FD_STEP, REL_FLOOR};
pub use clarity::{clarity_from_outputs, clarity_penalty};
pub use mlp::{Cache, Mlp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaminetConfig {
    /// Epochs for the main, pair and fine-tuning stages.
    pub epochs: [usize; 3],
    pub batch_size: usize,
    pub step_size: f64,
    /// Pairs trained in stage 2.
    pub interactions: usize,
    /// Cumulative variance share kept when pruning.
    pub tau: f64,
    /// Weight of the clarity penalty.
    pub clarity_weight: f64,
    pub hidden: Vec<usize>,
    /// Bins per parent axis for the clarity penalty.
    pub clarity_bins: usize,
    /// Bins per feature for pair screening.
    pub screen_bins: usize,
    /// Export grid for main effects.
    pub max_bins: usize,
    /// Export grid per axis for pairs.
    pub pair_bins: usize,
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for GaminetConfig {
    fn default() -> Self {
        Self {
            epochs: [200, 200, 100],
            batch_size: 256,
            step_size: 0.2,
            interactions: 10,
            tau: 0.99,
            clarity_weight: 0.1,
            hidden: vec![16, 16],
            clarity_bins: 10,
            screen_bins: 32,
            max_bins: 256,
            pair_bins: 128,
            clip_norm: 5.0,
            seed: 0,
        }
    }
}

impl GaminetConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Validation(format!("gaminet config: {m}")));
        if self.epochs.contains(&0) {
            return bad("every stage needs at least one epoch");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad("step_size must be positive");
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau must be in (0, 1]");
        }
        if !(self.clarity_weight >= 0.0 && self.clarity_weight.is_finite()) {
            return bad("clarity_weight must be non-negative");
        }
        if self.hidden.contains(&0) {
            return bad("hidden layer widths must be positive");
        }
        if self.clarity_bins < 1 || self.screen_bins < 2 || self.max_bins < 2 || self.pair_bins < 2 {
            return bad("bin counts too small");
        }
        if !(self.clip_norm > 0.0) {
            return bad("clip_norm must be positive");
        }
        Ok(())
    }
}

/// Per-feature standardization applied before every network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Scaling {
    fn fit(data: &Dataset) -> Self {
        let n = data.n_rows() as f64;
        let (mut mean, mut scale) = (Vec::new(), Vec::new());
        for j in 0..data.n_features() {
            let col = data.column(j);
            let m = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt();
            mean.push(m);
            scale.push(if sd > 0.0 { sd } else { 1.0 });
        }
        Self { mean, scale }
    }

    fn apply(&self, j: usize, v: f64) -> f64 {
        (v - self.mean[j]) / self.scale[j]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainNet {
    pub feature: usize,
    pub net: Mlp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairNet {
    pub features: (usize, usize),
    pub net: Mlp,
}

/// Retained subnetworks. Native prediction sums in the same order as
/// [`AdditiveModel`]: intercept, mains by feature, pairs lexicographic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaminetNetworks {
    pub feature_names: Vec<String>,
    pub scaling: Scaling,
    pub intercept: f64,
    pub mains: Vec<MainNet>,
    pub pairs: Vec<PairNet>,
}

impl GaminetNetworks {
    pub fn main_output(&self, m: &MainNet, x: &[f64]) -> f64 {
        m.net.forward(&[self.scaling.apply(m.feature, x[m.feature])])
    }

    pub fn pair_output(&self, p: &PairNet, x: &[f64]) -> f64 {
        let (i, j) = p.features;
        p.net
            .forward(&[self.scaling.apply(i, x[i]), self.scaling.apply(j, x[j])])
    }

    /// Contribution of any term; terms that were pruned contribute 0.
    pub fn contribution(&self, term: Term, x: &[f64]) -> f64 {
        match term {
            Term::Main(f) => self
                .mains
                .iter()
                .find(|m| m.feature == f)
                .map_or(0.0, |m| self.main_output(m, x)),
            Term::Pair(i, j) => self
                .pairs
                .iter()
                .find(|p| p.features == (i, j))
                .map_or(0.0, |p| self.pair_output(p, x)),
        }
    }

    pub fn predict_logit(&self, x: &[f64]) -> f64 {
        let mut z = self.intercept;
        for m in &self.mains {
            z += self.main_output(m, x);
        }
        for p in &self.pairs {
            z += self.pair_output(p, x);
        }
        z
    }

    pub fn retained_mains(&self) -> Vec<usize> {
        self.mains.iter().map(|m| m.feature).collect()
    }

    /// Pairs with neither parent among the retained mains.
    pub fn heredity_violations(&self) -> Vec<(usize, usize)> {
        let kept = self.retained_mains();
        self.pairs
            .iter()
            .map(|p| p.features)
            .filter(|(i, j)| !kept.contains(i) && !kept.contains(j))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub stage: u8,
    pub epoch: usize,
    /// Mean training objective over the epoch's batches.
    pub train_objective: f64,
    pub val_logloss: Option<f64>,
}

pub fn log_tsv(rows: &[EpochLog]) -> String {
    let mut s = String::from("stage\tepoch\ttrain_objective\tval_logloss\n");
    for r in rows {
        let val = r.val_logloss.map_or(String::new(), |v| v.to_string());
        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.stage, r.epoch, r.train_objective, val));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaminetOutcome {
    pub networks: GaminetNetworks,
    pub model: AdditiveModel,
    pub log: Vec<EpochLog>,
    /// Output variance of every stage-1 main network, by feature.
    pub main_variances: Vec<f64>,
    pub pruned_mains: Vec<usize>,
    /// Screened pairs in rank order, before the heredity filter.
    pub screened_pairs: Vec<PairStrength>,
    /// Stage-2 pairs after the heredity filter.
    pub candidate_pairs: Vec<(usize, usize)>,
    pub pruned_pairs: Vec<(usize, usize)>,
}

struct Prepared<'a> {
    data: &'a Dataset,
    /// Standardized features, row-major.
    z: Vec<Vec<f64>>,
    /// Clarity bin of each row, per feature.
    clarity_bins: Vec<Vec<usize>>,
}

impl<'a> Prepared<'a> {
    fn new(data: &'a Dataset, scaling: &Scaling, clarity: Option<&Binner>) -> Self {
        let z = data
            .rows()
            .map(|r| (0..r.len()).map(|j| scaling.apply(j, r[j])).collect())
            .collect();
        let clarity_bins = clarity.map_or_else(Vec::new, |b| {
            (0..data.n_features())
                .map(|j| data.rows().map(|r| b.bin(j, r[j])).collect())
                .collect()
        });
        Self {
            data,
            z,
            clarity_bins,
        }
    }
}

/// What a stage trains; everything else is held fixed.
#[derive(Clone, Copy)]
struct StageSpec {
    stage: u8,
    train_intercept: bool,
    train_mains: bool,
    train_pairs: bool,
    epochs: usize,
}

fn row_loss(z: f64, y: u8) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p() - if y == 1 { z } else { 0.0 }
}

fn main_input(p: &Prepared<'_>, row: usize, f: usize) -> [f64; 1] {
    [p.z[row][f]]
}

fn pair_input(p: &Prepared<'_>, row: usize, (i, j): (usize, usize)) -> [f64; 2] {
    [p.z[row][i], p.z[row][j]]
}

fn mean_logloss(nets: &GaminetNetworks, p: &Prepared<'_>) -> f64 {
    let n = p.data.n_rows();
    let total: f64 = (0..n)
        .map(|r| {
            let mut z = nets.intercept;
            for m in &nets.mains {
                z += m.net.forward(&main_input(p, r, m.feature));
            }
            for q in &nets.pairs {
                z += q.net.forward(&pair_input(p, r, q.features));
            }
            row_loss(z, p.data.labels[r])
        })
        .sum();
    total / n.max(1) as f64
}

fn run_stage(
    nets: &mut GaminetNetworks,
    train: &Prepared<'_>,
    val: Option<&Prepared<'_>>,
    spec: StageSpec,
    config: &GaminetConfig,
    log: &mut Vec<EpochLog>,
) -> Result<()> {
    let n = train.data.n_rows();
    let labels = &train.data.labels;
    // contribution of frozen terms per row
    let frozen: Vec<f64> = (0..n)
        .map(|r| {
            let mut z = if spec.train_intercept { 0.0 } else { nets.intercept };
            if !spec.train_mains {
                for m in &nets.mains {
                    z += m.net.forward(&main_input(train, r, m.feature));
                }
            }
            if !spec.train_pairs {
                for q in &nets.pairs {
                    z += q.net.forward(&pair_input(train, r, q.features));
                }
            }
            z
        })
        .collect();
    let main_ids: Vec<usize> = if spec.train_mains { (0..nets.mains.len()).collect() } else { vec![] };
    let pair_ids: Vec<usize> = if spec.train_pairs { (0..nets.pairs.len()).collect() } else { vec![] };
    if main_ids.is_empty() && pair_ids.is_empty() && !spec.train_intercept {
        return Ok(());
    }
    let lambda = config.clarity_weight;
    let mut main_grads: Vec<Vec<f64>> = main_ids.iter().map(|&k| vec![0.0; nets.mains[k].net.n_params()]).collect();
    let mut pair_grads: Vec<Vec<f64>> = pair_ids.iter().map(|&k| vec![0.0; nets.pairs[k].net.n_params()]).collect();
    let mut main_caches: Vec<Vec<Cache>> = main_ids.iter().map(|_| vec![Cache::default(); config.batch_size]).collect();
    let mut pair_caches: Vec<Vec<Cache>> = pair_ids.iter().map(|_| vec![Cache::default(); config.batch_size]).collect();
    let mut order: Vec<usize> = (0..n).collect();

    for epoch in 1..=spec.epochs {
        let mut rng = seed::rng(config.seed, "gaminet-epoch", &format!("{}-{epoch}", spec.stage));
        order.shuffle(&mut rng);
        let mut objective_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            let b = batch.len();
            let mut logits: Vec<f64> = batch.iter().map(|&r| frozen[r]).collect();
            if spec.train_intercept {
                logits.iter_mut().for_each(|z| *z += nets.intercept);
            }
            for (t, &k) in main_ids.iter().enumerate() {
                let m = &nets.mains[k];
                for (s, &r) in batch.iter().enumerate() {
                    logits[s] += m.net.forward_cached(&main_input(train, r, m.feature), &mut main_caches[t][s]);
                }
            }
            let mut pair_outputs: Vec<Vec<f64>> = Vec::with_capacity(pair_ids.len());
            for (t, &k) in pair_ids.iter().enumerate() {
                let q = &nets.pairs[k];
                let outs: Vec<f64> = batch
                    .iter()
                    .enumerate()
                    .map(|(s, &r)| q.net.forward_cached(&pair_input(train, r, q.features), &mut pair_caches[t][s]))
                    .collect();
                for (z, o) in logits.iter_mut().zip(&outs) {
                    *z += o;
                }
                pair_outputs.push(outs);
            }
            let mut loss = 0.0;
            let dz: Vec<f64> = batch
                .iter()
                .zip(&logits)
                .map(|(&r, &z)| {
                    loss += row_loss(z, labels[r]);
                    (logistic(z) - labels[r] as f64) / b as f64
                })
                .collect();
            loss /= b as f64;

            main_grads.iter_mut().for_each(|g| g.iter_mut().for_each(|v| *v = 0.0));
            pair_grads.iter_mut().for_each(|g| g.iter_mut().for_each(|v| *v = 0.0));
            for (t, &k) in main_ids.iter().enumerate() {
                let net = &nets.mains[k].net;
                for s in 0..b {
                    net.backward(&main_caches[t][s], dz[s], &mut main_grads[t]);
                }
            }
            for (t, &k) in pair_ids.iter().enumerate() {
                let q = &nets.pairs[k];
                let mut dout = dz.clone();
                if lambda > 0.0 {
                    let (i, j) = q.features;
                    let bi: Vec<usize> = batch.iter().map(|&r| train.clarity_bins[i][r]).collect();
                    let bj: Vec<usize> = batch.iter().map(|&r| train.clarity_bins[j][r]).collect();
                    let (pen, g) = clarity_from_outputs(&pair_outputs[t], [&bi, &bj]);
                    loss += lambda * pen;
                    for (d, gv) in dout.iter_mut().zip(g) {
                        *d += lambda * gv;
                    }
                }
                for s in 0..b {
                    q.net.backward(&pair_caches[t][s], dout[s], &mut pair_grads[t]);
                }
            }
            let intercept_grad: f64 = if spec.train_intercept { dz.iter().sum() } else { 0.0 };

            let norm_sq = intercept_grad * intercept_grad
                + main_grads.iter().chain(&pair_grads).flatten().map(|g| g * g).sum::<f64>();
            if !loss.is_finite() || !norm_sq.is_finite() {
                return Err(Error::StepSize {
                    stage: spec.stage,
                    epoch,
                    loss,
                    step_size: config.step_size,
                });
            }
            let norm = norm_sq.sqrt();
            let scale = if norm > config.clip_norm { config.clip_norm / norm } else { 1.0 };
            let step = config.step_size * scale;
            nets.intercept -= step * intercept_grad;
            for (t, &k) in main_ids.iter().enumerate() {
                for (p, g) in nets.mains[k].net.params.iter_mut().zip(&main_grads[t]) {
                    *p -= step * g;
                }
            }
            for (t, &k) in pair_ids.iter().enumerate() {
                for (p, g) in nets.pairs[k].net.params.iter_mut().zip(&pair_grads[t]) {
                    *p -= step * g;
                }
            }
            objective_sum += loss * b as f64;
        }
        let train_objective = objective_sum / n as f64;
        if !train_objective.is_finite() {
            return Err(Error::StepSize {
                stage: spec.stage,
                epoch,
                loss: train_objective,
                step_size: config.step_size,
            });
        }
        log.push(EpochLog {
            stage: spec.stage,
            epoch,
            train_objective,
            val_logloss: val.map(|v| mean_logloss(nets, v)),
        });
    }
    Ok(())
}

fn variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Indices (into `variances`) of the smallest high-variance prefix whose
/// share of the total reaches `tau`, in original order.
fn keep_by_variance(variances: &[f64], tau: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..variances.len()).collect();
    order.sort_by(|&a, &b| variances[b].total_cmp(&variances[a]).then(a.cmp(&b)));
    let total: f64 = order.iter().map(|&k| variances[k]).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    let mut kept = Vec::new();
    let mut cumulative = 0.0;
    for k in order {
        kept.push(k);
        cumulative += variances[k];
        if cumulative >= tau * total {
            break;
        }
    }
    kept.sort_unstable();
    kept
}

pub fn train_gaminet(
    train: &Dataset,
    val: Option<&Dataset>,
    config: &GaminetConfig,
) -> Result<GaminetOutcome> {
    config.validate()?;
    train.require_both_classes()?;
    if let Some(v) = val {
        if v.feature_names != train.feature_names {
            return Err(Error::Schema("validation features differ from training features".into()));
        }
    }
    let d = train.n_features();
    let scaling = Scaling::fit(train);
    let clarity_binner = Binner::fit(train, config.clarity_bins.max(2))?;
    let prep = Prepared::new(train, &scaling, Some(&clarity_binner));
    let val_prep = val.map(|v| Prepared::new(v, &scaling, None));
    let rate = train.positives() as f64 / train.n_rows() as f64;
    let mut nets = GaminetNetworks {
        feature_names: train.feature_names.clone(),
        scaling: scaling.clone(),
        intercept: (rate / (1.0 - rate)).ln(),
        mains: (0..d)
            .map(|f| MainNet {
                feature: f,
                net: Mlp::new(1, &config.hidden, &mut seed::rng(config.seed, "gaminet-init", &format!("main-{f}"))),
            })
            .collect(),
        pairs: Vec::new(),
    };
    let mut log = Vec::new();
    let stage = |stage, train_intercept, train_mains, train_pairs| StageSpec {
        stage,
        train_intercept,
        train_mains,
        train_pairs,
        epochs: config.epochs[stage as usize - 1],
    };

    run_stage(&mut nets, &prep, val_prep.as_ref(), stage(1, true, true, false), config, &mut log)?;
    let main_variances: Vec<f64> = nets
        .mains
        .iter()
        .map(|m| {
            let out: Vec<f64> = (0..train.n_rows())
                .map(|r| m.net.forward(&main_input(&prep, r, m.feature)))
                .collect();
            variance(&out)
        })
        .collect();
    let kept = keep_by_variance(&main_variances, config.tau);
    let pruned_mains: Vec<usize> = (0..d).filter(|f| !kept.contains(f)).collect();
    nets.mains.retain(|m| kept.contains(&m.feature));

    let base: Vec<f64> = (0..train.n_rows())
        .map(|r| {
            nets.mains
                .iter()
                .fold(nets.intercept, |z, m| z + m.net.forward(&main_input(&prep, r, m.feature)))
        })
        .collect();
    let screen_binner = Binner::fit(train, config.screen_bins)?;
    let all_pairs = d * d.saturating_sub(1) / 2;
    let screened_pairs = rank_interactions_from_logits(train, &screen_binner, &base, all_pairs);
    let candidate_pairs: Vec<(usize, usize)> = screened_pairs
        .iter()
        .map(|p| p.features)
        .filter(|(i, j)| kept.contains(i) || kept.contains(j))
        .take(config.interactions)
        .collect();
    let mut pruned_pairs = Vec::new();
    if !candidate_pairs.is_empty() {
        let mut sorted = candidate_pairs.clone();
        sorted.sort_unstable();
        nets.pairs = sorted
            .iter()
            .map(|&(i, j)| PairNet {
                features: (i, j),
                net: Mlp::new(2, &config.hidden, &mut seed::rng(config.seed, "gaminet-init", &format!("pair-{i}-{j}"))),
            })
            .collect();
        run_stage(&mut nets, &prep, val_prep.as_ref(), stage(2, false, false, true), config, &mut log)?;
        let pair_variances: Vec<f64> = nets
            .pairs
            .iter()
            .map(|q| {
                let out: Vec<f64> = (0..train.n_rows())
                    .map(|r| q.net.forward(&pair_input(&prep, r, q.features)))
                    .collect();
                variance(&out)
            })
            .collect();
        let keep_pairs = keep_by_variance(&pair_variances, config.tau);
        pruned_pairs = (0..nets.pairs.len())
            .filter(|k| !keep_pairs.contains(k))
            .map(|k| nets.pairs[k].features)
            .collect();
        nets.pairs = keep_pairs.iter().map(|&k| nets.pairs[k].clone()).collect();
    }
    run_stage(&mut nets, &prep, val_prep.as_ref(), stage(3, true, true, true), config, &mut log)?;
    let model = export_model(&nets, train, config)?;
    Ok(GaminetOutcome {
        networks: nets,
        model,
        log,
        main_variances,
        pruned_mains,
        screened_pairs,
        candidate_pairs,
        pruned_pairs,
    })
}

/// Evaluates the networks at bin centers and centers the resulting shapes
/// on `train`.
pub fn export_model(
    nets: &GaminetNetworks,
    train: &Dataset,
    config: &GaminetConfig,
) -> Result<AdditiveModel> {
    let binner = Binner::fit(train, config.max_bins)?;
    let pair_binner = Binner::fit(train, config.pair_bins)?;
    let d = train.n_features();
    let mut x = vec![0.0; d];
    let mains = nets
        .mains
        .iter()
        .map(|m| MainShape {
            feature: m.feature,
            shape: ShapeValues::Binned {
                values: (0..binner.n_bins(m.feature))
                    .map(|b| {
                        x[m.feature] = binner.bin_center(m.feature, b);
                        nets.main_output(m, &x)
                    })
                    .collect(),
            },
        })
        .collect();
    let pairs = nets
        .pairs
        .iter()
        .map(|q| {
            let (i, j) = q.features;
            let (rows, cols) = (pair_binner.n_bins(i), pair_binner.n_bins(j));
            let mut values = Vec::with_capacity(rows * cols);
            for a in 0..rows {
                for b in 0..cols {
                    x[i] = pair_binner.bin_center(i, a);
                    x[j] = pair_binner.bin_center(j, b);
                    values.push(nets.pair_output(q, &x));
                }
            }
            PairShape {
                features: (i, j),
                rows,
                cols,
                values,
            }
        })
        .collect();
    let mut model = AdditiveModel::new(
        nets.feature_names.clone(),
        nets.intercept,
        mains,
        pairs,
        binner,
        pair_binner,
    )?;
    model.center(train);
    Ok(model)
}

/// Largest |exported logit - native logit| over `data`.
pub fn export_fidelity(nets: &GaminetNetworks, model: &AdditiveModel, data: &Dataset) -> f64 {
    data.rows()
        .map(|r| (model.predict_logit(r) - nets.predict_logit(r)).abs())
        .fold(0.0, f64::max)
}
