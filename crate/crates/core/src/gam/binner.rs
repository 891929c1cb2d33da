use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Per-feature quantile cut points.
///
/// Bin `k` of a feature holds values in `[cuts[k-1], cuts[k])`; values below
/// the first cut land in bin 0 and values at or above the last cut land in
/// the last bin, so out-of-range inputs clamp to the edge bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Binner {
    pub cuts: Vec<Vec<f64>>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Cut points for one feature with at most `max_bins` bins.
///
/// Each cut sits halfway between two adjacent distinct values. With no more
/// distinct values than bins, every distinct value gets its own bin;
/// otherwise the cut nearest each `k / max_bins` quantile rank is used and
/// repeated cuts collapse.
pub fn quantile_cuts(values: &[f64], max_bins: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    // cumulative count up to and including each distinct value
    let mut cumulative: Vec<usize> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        if distinct.last() == Some(&v) {
            *cumulative.last_mut().unwrap() = i + 1;
        } else {
            distinct.push(v);
            cumulative.push(i + 1);
        }
    }
    let midpoint = |t: usize| distinct[t] + (distinct[t + 1] - distinct[t]) / 2.0;
    if distinct.len() <= max_bins {
        return (0..distinct.len().saturating_sub(1)).map(midpoint).collect();
    }
    let n = sorted.len() as f64;
    let boundaries = &cumulative[..distinct.len() - 1];
    let mut picked: Vec<usize> = Vec::with_capacity(max_bins - 1);
    for k in 1..max_bins {
        let rank = k as f64 * n / max_bins as f64;
        let pos = boundaries.partition_point(|&c| (c as f64) < rank);
        let mut best = pos.min(boundaries.len() - 1);
        if pos > 0 && (rank - boundaries[pos - 1] as f64) <= (boundaries[best] as f64 - rank).abs()
        {
            best = pos - 1;
        }
        if picked.last() != Some(&best) {
            picked.push(best);
        }
    }
    picked.dedup();
    picked.into_iter().map(midpoint).collect()
}

impl Binner {
    pub fn fit(data: &Dataset, max_bins: usize) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Validation("cannot fit bins on an empty dataset".into()));
        }
        if max_bins < 2 {
            return Err(Error::Validation(format!("max_bins must be at least 2, got {max_bins}")));
        }
        let mut cuts = Vec::with_capacity(data.n_features());
        let mut min = Vec::with_capacity(data.n_features());
        let mut max = Vec::with_capacity(data.n_features());
        for j in 0..data.n_features() {
            let col = data.column(j);
            min.push(col.iter().copied().fold(f64::INFINITY, f64::min));
            max.push(col.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            cuts.push(quantile_cuts(&col, max_bins));
        }
        Ok(Self { cuts, min, max })
    }

    pub fn n_features(&self) -> usize {
        self.cuts.len()
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.cuts[feature].len() + 1
    }

    pub fn bin(&self, feature: usize, value: f64) -> usize {
        self.cuts[feature].partition_point(|&c| c <= value)
    }

    /// `[lower, upper]` of a bin; edge bins extend to the observed range.
    pub fn bin_bounds(&self, feature: usize, bin: usize) -> (f64, f64) {
        let cuts = &self.cuts[feature];
        let lower = if bin == 0 { self.min[feature] } else { cuts[bin - 1] };
        let upper = if bin == cuts.len() { self.max[feature] } else { cuts[bin] };
        (lower, upper)
    }

    /// Midpoint of a bin's bounds; always maps back to the same bin.
    pub fn bin_center(&self, feature: usize, bin: usize) -> f64 {
        let (lo, hi) = self.bin_bounds(feature, bin);
        lo + (hi - lo) / 2.0
    }

    /// Column-major bin indices: `out[feature][row]`.
    pub fn bin_dataset(&self, data: &Dataset) -> Vec<Vec<u16>> {
        (0..self.n_features())
            .map(|j| data.rows().map(|r| self.bin(j, r[j]) as u16).collect())
            .collect()
    }

    /// Row counts per bin of a feature.
    pub fn bin_counts(&self, feature: usize, binned: &[u16]) -> Vec<usize> {
        let mut counts = vec![0; self.n_bins(feature)];
        for &b in binned {
            counts[b as usize] += 1;
        }
        counts
    }
}
