use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::gam::{logistic, AdditiveModel, Binner};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStrength {
    pub features: (usize, usize),
    /// Interaction sum of squares of the best 2x2 cut, as a fraction of the
    /// residual total sum of squares.
    pub strength: f64,
}

/// Largest non-additive sum of squares over all single cut pairs of a
/// residual grid. `sums`/`counts` are row-major `rows x cols`.
///
/// For quadrant means `m` with counts `N`, the best additive fit on the two
/// cuts leaves `D^2 / sum(1/N)` where `D = m00 - m01 - m10 + m11`.
pub fn grid_interaction_ss(sums: &[f64], counts: &[usize], rows: usize, cols: usize) -> f64 {
    // inclusive-exclusive prefix tables of size (rows+1) x (cols+1)
    let w = cols + 1;
    let mut ps = vec![0.0; (rows + 1) * w];
    let mut pc = vec![0usize; (rows + 1) * w];
    for r in 0..rows {
        for c in 0..cols {
            let k = (r + 1) * w + c + 1;
            ps[k] = sums[r * cols + c] + ps[k - 1] + ps[k - w] - ps[k - w - 1];
            pc[k] = counts[r * cols + c] + pc[k - 1] + pc[k - w] - pc[k - w - 1];
        }
    }
    let total_s = ps[rows * w + cols];
    let total_c = pc[rows * w + cols];
    let mut best: f64 = 0.0;
    for a in 1..rows {
        let row_s = ps[a * w + cols];
        let row_c = pc[a * w + cols];
        for b in 1..cols {
            let s00 = ps[a * w + b];
            let c00 = pc[a * w + b];
            let s01 = row_s - s00;
            let c01 = row_c - c00;
            let col_s = ps[rows * w + b];
            let col_c = pc[rows * w + b];
            let s10 = col_s - s00;
            let c10 = col_c - c00;
            let s11 = total_s - s00 - s01 - s10;
            let c11 = total_c - c00 - c01 - c10;
            if c00 == 0 || c01 == 0 || c10 == 0 || c11 == 0 {
                continue;
            }
            let (n00, n01, n10, n11) = (c00 as f64, c01 as f64, c10 as f64, c11 as f64);
            let d = s00 / n00 - s01 / n01 - s10 / n10 + s11 / n11;
            let ss = d * d / (1.0 / n00 + 1.0 / n01 + 1.0 / n10 + 1.0 / n11);
            best = best.max(ss);
        }
    }
    best
}

/// Screens every feature pair on the residuals `y - logistic(base_logits)`
/// over the `binner` grid. Sorted by descending strength, ties in
/// lexicographic pair order; at most `k` pairs are returned.
pub fn rank_interactions_from_logits(
    data: &Dataset,
    binner: &Binner,
    base_logits: &[f64],
    k: usize,
) -> Vec<PairStrength> {
    let d = data.n_features();
    if d < 2 || k == 0 || data.is_empty() {
        return Vec::new();
    }
    let residuals: Vec<f64> = data
        .labels
        .iter()
        .zip(base_logits)
        .map(|(&y, &z)| y as f64 - logistic(z))
        .collect();
    let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
    let total_ss: f64 = residuals.iter().map(|r| (r - mean) * (r - mean)).sum();
    let bins = binner.bin_dataset(data);
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            let (rows, cols) = (binner.n_bins(i), binner.n_bins(j));
            let mut sums = vec![0.0; rows * cols];
            let mut counts = vec![0usize; rows * cols];
            for (row, &r) in residuals.iter().enumerate() {
                let cell = bins[i][row] as usize * cols + bins[j][row] as usize;
                sums[cell] += r;
                counts[cell] += 1;
            }
            let ss = grid_interaction_ss(&sums, &counts, rows, cols);
            let strength = if total_ss > 0.0 { ss / total_ss } else { 0.0 };
            out.push(PairStrength {
                features: (i, j),
                strength,
            });
        }
    }
    // stable sort keeps lexicographic order among ties
    out.sort_by(|a, b| b.strength.total_cmp(&a.strength));
    out.truncate(k);
    out
}

/// Pair ranking on the residuals of a finalized model, over its pair grid.
pub fn rank_interactions(model: &AdditiveModel, data: &Dataset, k: usize) -> Vec<PairStrength> {
    let base: Vec<f64> = data.rows().map(|r| model.predict_logit(r)).collect();
    rank_interactions_from_logits(data, &model.pair_binner, &base, k)
}
