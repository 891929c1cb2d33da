//! Explainable boosting: cyclic bagged boosting of main effects, then
//! screened pairwise interactions boosted on the residuals.

mod boost;
mod interactions;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::gam::{AdditiveModel, Binner, MainShape, PairShape, ShapeValues};
use crate::{seed, Error, Result};

use boost::{boost_bag, BagOutcome, BoostParams, Layout, Term};
pub use interactions::{
    grid_interaction_ss, rank_interactions, rank_interactions_from_logits, PairStrength,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EbmConfig {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_leaves: usize,
    pub min_samples_leaf: usize,
    pub bags: usize,
    pub bag_fraction: f64,
    /// Number of pairwise interactions.
    pub interactions: usize,
    pub max_bins: usize,
    /// Bins per feature for pair grids and interaction screening.
    pub pair_bins: usize,
    /// Rounds without validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
}

impl Default for EbmConfig {
    fn default() -> Self {
        Self {
            rounds: 500,
            learning_rate: 0.05,
            max_leaves: 3,
            min_samples_leaf: 2,
            bags: 8,
            bag_fraction: 0.85,
            interactions: 10,
            max_bins: 256,
            pair_bins: 32,
            patience: 50,
            seed: 0,
        }
    }
}

impl EbmConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Validation(format!("ebm config: {m}")));
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning_rate must be in (0, 1]");
        }
        if self.bags == 0 {
            return bad("bags must be at least 1");
        }
        if !(self.bag_fraction > 0.0 && self.bag_fraction <= 1.0) {
            return bad("bag_fraction must be in (0, 1]");
        }
        if self.max_leaves == 0 || self.min_samples_leaf == 0 {
            return bad("max_leaves and min_samples_leaf must be at least 1");
        }
        if self.max_bins < 2 || self.pair_bins < 2 || self.max_bins > u16::MAX as usize {
            return bad("bin counts must be in [2, 65535]");
        }
        if self.patience == 0 {
            return bad("patience must be at least 1");
        }
        Ok(())
    }

    fn boost_params(&self) -> BoostParams {
        BoostParams {
            rounds: self.rounds,
            learning_rate: self.learning_rate,
            max_leaves: self.max_leaves,
            min_samples_leaf: self.min_samples_leaf,
            patience: self.patience,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub stage: u8,
    pub round: usize,
    /// Mean in-bag training logloss over bags.
    pub train_logloss: f64,
    /// Mean validation logloss over bags; out-of-bag rows stand in when no
    /// validation set is given.
    pub val_logloss: Option<f64>,
}

pub fn log_tsv(rows: &[LogRow]) -> String {
    let mut s = String::from("stage\tround\ttrain_logloss\tval_logloss\n");
    for r in rows {
        let val = r.val_logloss.map_or(String::new(), |v| v.to_string());
        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.stage, r.round, r.train_logloss, val));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbmOutcome {
    pub model: AdditiveModel,
    pub log: Vec<LogRow>,
    pub ranking: Vec<PairStrength>,
    pub mains_val_logloss: Option<f64>,
    pub final_val_logloss: Option<f64>,
    pub notices: Vec<String>,
}

/// Mean logloss of a model on a dataset.
pub fn logloss(model: &AdditiveModel, data: &Dataset) -> f64 {
    let logits: Vec<f64> = data.rows().map(|r| model.predict_logit(r)).collect();
    boost::mean_loss(&logits, &data.labels)
}

fn bag_rows(n: usize, bag: usize, config: &EbmConfig, purpose: &str) -> Vec<usize> {
    let m = ((n as f64 * config.bag_fraction).round() as usize).clamp(1, n);
    if m == n {
        return (0..n).collect();
    }
    let mut rng = seed::rng(config.seed, purpose, &bag.to_string());
    let mut rows = index::sample(&mut rng, n, m).into_vec();
    rows.sort_unstable();
    rows
}

fn merge_log(stage: u8, bags: &[BagOutcome]) -> Vec<LogRow> {
    let len = bags.iter().map(|b| b.train_loss.len()).max().unwrap_or(0);
    let at = |v: &[f64], r: usize| v[r.min(v.len() - 1)];
    let nb = bags.len() as f64;
    (0..len)
        .map(|r| LogRow {
            stage,
            round: r,
            train_logloss: bags.iter().map(|b| at(&b.train_loss, r)).sum::<f64>() / nb,
            val_logloss: bags
                .first()
                .filter(|b| !b.val_loss.is_empty())
                .map(|_| bags.iter().map(|b| at(&b.val_loss, r)).sum::<f64>() / nb),
        })
        .collect()
}

/// Cell values averaged over bags, in bag order.
fn average_values(bags: &[BagOutcome], term: usize) -> Vec<f64> {
    let mut out = vec![0.0; bags[0].values[term].len()];
    for b in bags {
        for (o, v) in out.iter_mut().zip(&b.values[term]) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|v| *v /= bags.len() as f64);
    out
}

fn check_inputs(train: &Dataset, val: Option<&Dataset>, config: &EbmConfig) -> Result<()> {
    config.validate()?;
    train.require_both_classes()?;
    if let Some(v) = val {
        if v.feature_names != train.feature_names {
            return Err(Error::Schema("validation features differ from training features".into()));
        }
    }
    Ok(())
}

/// Trains every bag. Without a validation set, each bag stops early on its
/// own out-of-bag rows.
fn run_bags(
    terms: &[Term<'_>],
    train: &Dataset,
    base: &[f64],
    val: Option<&Dataset>,
    val_base: &[f64],
    config: &EbmConfig,
    purpose: &str,
) -> Vec<BagOutcome> {
    let params = config.boost_params();
    (0..config.bags)
        .into_par_iter()
        .map(|bag| {
            let rows = bag_rows(train.n_rows(), bag, config, purpose);
            if let Some(v) = val {
                return boost_bag(terms, &train.labels, base, &v.labels, val_base, &rows, &params);
            }
            let mut in_bag = vec![false; train.n_rows()];
            rows.iter().for_each(|&i| in_bag[i] = true);
            let oob: Vec<usize> = (0..train.n_rows()).filter(|&i| !in_bag[i]).collect();
            let oob_cells: Vec<Vec<u32>> = terms
                .iter()
                .map(|t| oob.iter().map(|&i| t.train_cells[i]).collect())
                .collect();
            let oob_terms: Vec<Term<'_>> = terms
                .iter()
                .zip(&oob_cells)
                .map(|(t, c)| Term {
                    layout: t.layout,
                    train_cells: t.train_cells,
                    val_cells: c,
                })
                .collect();
            let oob_labels: Vec<u8> = oob.iter().map(|&i| train.labels[i]).collect();
            let oob_base: Vec<f64> = oob.iter().map(|&i| base[i]).collect();
            boost_bag(&oob_terms, &train.labels, base, &oob_labels, &oob_base, &rows, &params)
        })
        .collect()
}

/// Stage 1: bagged cyclic boosting of one shape per feature.
pub fn train_main_effects(
    train: &Dataset,
    val: Option<&Dataset>,
    config: &EbmConfig,
) -> Result<(AdditiveModel, Vec<LogRow>)> {
    check_inputs(train, val, config)?;
    let binner = Binner::fit(train, config.max_bins)?;
    let pair_binner = Binner::fit(train, config.pair_bins)?;
    let to_u32 = |b: Vec<Vec<u16>>| -> Vec<Vec<u32>> {
        b.into_iter().map(|c| c.into_iter().map(u32::from).collect()).collect()
    };
    let train_cells = to_u32(binner.bin_dataset(train));
    let val_cells = val.map_or_else(
        || vec![Vec::new(); train.n_features()],
        |v| to_u32(binner.bin_dataset(v)),
    );
    let terms: Vec<Term<'_>> = (0..train.n_features())
        .map(|j| Term {
            layout: Layout::Line(binner.n_bins(j)),
            train_cells: &train_cells[j],
            val_cells: &val_cells[j],
        })
        .collect();
    let rate = train.positives() as f64 / train.n_rows() as f64;
    let intercept = (rate / (1.0 - rate)).ln();
    let base = vec![intercept; train.n_rows()];
    let val_base = vec![intercept; val.map_or(0, Dataset::n_rows)];
    let bags = run_bags(&terms, train, &base, val, &val_base, config, "ebm-main-bag");
    let mains = (0..train.n_features())
        .map(|j| MainShape {
            feature: j,
            shape: ShapeValues::Binned {
                values: average_values(&bags, j),
            },
        })
        .collect();
    let mut model = AdditiveModel::new(
        train.feature_names.clone(),
        intercept,
        mains,
        vec![],
        binner,
        pair_binner,
    )?;
    model.center(train);
    Ok((model, merge_log(1, &bags)))
}

/// Stage 2: boosts pair grids on the residuals of `mains`, whose shapes are
/// left untouched.
pub fn train_pairs(
    mains: &AdditiveModel,
    train: &Dataset,
    val: Option<&Dataset>,
    pairs: &[(usize, usize)],
    config: &EbmConfig,
) -> Result<(AdditiveModel, Vec<LogRow>)> {
    check_inputs(train, val, config)?;
    mains.check_schema(&train.feature_names)?;
    let pb = &mains.pair_binner;
    let cells_for = |data: &Dataset, (i, j): (usize, usize)| -> Vec<u32> {
        let cols = pb.n_bins(j);
        data.rows()
            .map(|r| (pb.bin(i, r[i]) * cols + pb.bin(j, r[j])) as u32)
            .collect()
    };
    let train_cells: Vec<Vec<u32>> = pairs.iter().map(|&p| cells_for(train, p)).collect();
    let val_cells: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&p| val.map_or_else(Vec::new, |v| cells_for(v, p)))
        .collect();
    let terms: Vec<Term<'_>> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| Term {
            layout: Layout::Grid(pb.n_bins(i), pb.n_bins(j)),
            train_cells: &train_cells[k],
            val_cells: &val_cells[k],
        })
        .collect();
    let base: Vec<f64> = train.rows().map(|r| mains.predict_logit(r)).collect();
    let val_base: Vec<f64> = val.map_or_else(Vec::new, |v| v.rows().map(|r| mains.predict_logit(r)).collect());
    let bags = run_bags(&terms, train, &base, val, &val_base, config, "ebm-pair-bag");
    let pair_shapes = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| PairShape {
            features: (i, j),
            rows: pb.n_bins(i),
            cols: pb.n_bins(j),
            values: average_values(&bags, k),
        })
        .collect();
    let mut model = AdditiveModel::new(
        mains.feature_names.clone(),
        mains.intercept,
        mains.mains.clone(),
        pair_shapes,
        mains.binner.clone(),
        mains.pair_binner.clone(),
    )?;
    model.center_pairs(train);
    Ok((model, merge_log(2, &bags)))
}

/// Both stages. Pairs are dropped when they make validation loss worse.
pub fn train_ebm(train: &Dataset, val: Option<&Dataset>, config: &EbmConfig) -> Result<EbmOutcome> {
    let (mains, mut log) = train_main_effects(train, val, config)?;
    let mains_val = val.map(|v| logloss(&mains, v));
    let mut notices = Vec::new();
    let ranking = rank_interactions(&mains, train, config.interactions);
    if ranking.is_empty() {
        return Ok(EbmOutcome {
            model: mains,
            log,
            ranking,
            mains_val_logloss: mains_val,
            final_val_logloss: mains_val,
            notices,
        });
    }
    let pairs: Vec<(usize, usize)> = ranking.iter().map(|p| p.features).collect();
    let (full, pair_log) = train_pairs(&mains, train, val, &pairs, config)?;
    log.extend(pair_log);
    let full_val = val.map(|v| logloss(&full, v));
    let (model, final_val) = match (mains_val, full_val) {
        (Some(m), Some(f)) if f > m => {
            let msg = format!(
                "pairwise terms raised validation logloss ({f:.6} > {m:.6}); keeping main effects only"
            );
            log::info!("{msg}");
            notices.push(msg);
            (mains, mains_val)
        }
        _ => (full, full_val),
    };
    Ok(EbmOutcome {
        model,
        log,
        ranking,
        mains_val_logloss: mains_val,
        final_val_logloss: final_val,
        notices,
    })
}
