//! Dense labeled feature matrices shared by the trainers.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-major feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    values: Vec<f64>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, values: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        let width = feature_names.len();
        if width == 0 {
            return Err(Error::Validation("dataset needs at least one feature".into()));
        }
        if values.len() != width * labels.len() {
            return Err(Error::Validation(format!(
                "dataset shape mismatch: {} values for {} rows of {width} features",
                values.len(),
                labels.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("dataset contains non-finite values".into()));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::Validation("labels must be 0 or 1".into()));
        }
        Ok(Self {
            feature_names,
            values,
            labels,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(
        feature_names: Vec<String>,
        rows: &[R],
        labels: Vec<u8>,
    ) -> Result<Self> {
        let values = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(feature_names, values, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_features();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks(self.n_features())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Subset in the given row order.
    pub fn select(&self, rows: &[usize]) -> Self {
        let mut values = Vec::with_capacity(rows.len() * self.n_features());
        let mut labels = Vec::with_capacity(rows.len());
        for &i in rows {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Self {
            feature_names: self.feature_names.clone(),
            values,
            labels,
        }
    }

    /// Fails unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let pos = self.positives();
        if pos == 0 || pos == self.n_rows() {
            return Err(Error::Training(format!(
                "training data needs both classes, got {pos} positives of {} rows",
                self.n_rows()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(Dataset::new(names.clone(), vec![0.0; 3], vec![0, 1]).is_err());
        let d = Dataset::new(names, vec![1.0, 2.0, 3.0, 4.0], vec![0, 1]).unwrap();
        assert_eq!(d.row(1), &[3.0, 4.0]);
        assert_eq!(d.column(0), vec![1.0, 3.0]);
        assert_eq!(d.select(&[1]).labels, vec![1]);
    }
}
