use serde::{Deserialize, Serialize};

use super::Binner;
use crate::dataset::Dataset;
use crate::{Error, Result};

pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// A univariate shape function in log-odds units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeValues {
    /// One value per bin of the model's main binner.
    Binned { values: Vec<f64> },
    /// `coef * x + offset`, exact on any input.
    Linear { coef: f64, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainShape {
    pub feature: usize,
    pub shape: ShapeValues,
}

/// A bivariate lookup over the model's pair binner, row-major with rows
/// indexed by the first feature's bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairShape {
    pub features: (usize, usize),
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl PairShape {
    pub fn zeros(features: (usize, usize), rows: usize, cols: usize) -> Self {
        Self {
            features,
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Main(usize),
    Pair(usize, usize),
}

/// Intercept plus main and pairwise shape functions under a logistic link.
///
/// Mains are kept sorted by feature and pairs lexicographically; prediction
/// always sums in that order, starting from the intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditiveModel {
    pub feature_names: Vec<String>,
    pub intercept: f64,
    pub mains: Vec<MainShape>,
    pub pairs: Vec<PairShape>,
    pub binner: Binner,
    pub pair_binner: Binner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermContribution {
    pub term: Term,
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub intercept: f64,
    pub terms: Vec<TermContribution>,
}

impl Decomposition {
    /// Left fold from the intercept in term order; equals `predict_logit`.
    pub fn total(&self) -> f64 {
        self.terms.iter().fold(self.intercept, |acc, t| acc + t.value)
    }
}

impl AdditiveModel {
    /// Validates and canonicalizes term order.
    pub fn new(
        feature_names: Vec<String>,
        intercept: f64,
        mut mains: Vec<MainShape>,
        mut pairs: Vec<PairShape>,
        binner: Binner,
        pair_binner: Binner,
    ) -> Result<Self> {
        let d = feature_names.len();
        if binner.n_features() != d || pair_binner.n_features() != d {
            return Err(Error::Schema(format!(
                "binner covers {} features, model has {d}",
                binner.n_features()
            )));
        }
        mains.sort_by_key(|m| m.feature);
        if mains.windows(2).any(|w| w[0].feature == w[1].feature) {
            return Err(Error::Validation("duplicate main shape".into()));
        }
        for m in &mains {
            if m.feature >= d {
                return Err(Error::Schema(format!("main shape on unknown feature {}", m.feature)));
            }
            if let ShapeValues::Binned { values } = &m.shape {
                if values.len() != binner.n_bins(m.feature) {
                    return Err(Error::Schema(format!(
                        "main shape for feature {} has {} bins, binner has {}",
                        m.feature,
                        values.len(),
                        binner.n_bins(m.feature)
                    )));
                }
            }
        }
        pairs.sort_by_key(|p| p.features);
        if pairs.windows(2).any(|w| w[0].features == w[1].features) {
            return Err(Error::Validation("duplicate pair shape".into()));
        }
        for p in &pairs {
            let (i, j) = p.features;
            if i >= j || j >= d {
                return Err(Error::Schema(format!("invalid pair ({i}, {j})")));
            }
            if p.rows != pair_binner.n_bins(i)
                || p.cols != pair_binner.n_bins(j)
                || p.values.len() != p.rows * p.cols
            {
                return Err(Error::Schema(format!("pair ({i}, {j}) grid does not match binner")));
            }
        }
        let all_finite = intercept.is_finite()
            && mains.iter().all(|m| match &m.shape {
                ShapeValues::Binned { values } => values.iter().all(|v| v.is_finite()),
                ShapeValues::Linear { coef, offset } => coef.is_finite() && offset.is_finite(),
            })
            && pairs.iter().all(|p| p.values.iter().all(|v| v.is_finite()));
        if !all_finite {
            return Err(Error::Validation("model has non-finite parameters".into()));
        }
        Ok(Self {
            feature_names,
            intercept,
            mains,
            pairs,
            binner,
            pair_binner,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.mains
            .iter()
            .map(|m| Term::Main(m.feature))
            .chain(self.pairs.iter().map(|p| Term::Pair(p.features.0, p.features.1)))
            .collect()
    }

    pub fn term_name(&self, term: Term) -> String {
        match term {
            Term::Main(i) => self.feature_names[i].clone(),
            Term::Pair(i, j) => format!("{} x {}", self.feature_names[i], self.feature_names[j]),
        }
    }

    pub fn main_value(&self, main: &MainShape, x: f64) -> f64 {
        match &main.shape {
            ShapeValues::Binned { values } => values[self.binner.bin(main.feature, x)],
            ShapeValues::Linear { coef, offset } => coef * x + offset,
        }
    }

    pub fn pair_value(&self, pair: &PairShape, xi: f64, xj: f64) -> f64 {
        let (i, j) = pair.features;
        pair.at(self.pair_binner.bin(i, xi), self.pair_binner.bin(j, xj))
    }

    /// Per-term contributions in canonical order.
    fn contributions<'a>(&'a self, x: &'a [f64]) -> impl Iterator<Item = (Term, f64)> + 'a {
        self.mains
            .iter()
            .map(move |m| (Term::Main(m.feature), self.main_value(m, x[m.feature])))
            .chain(self.pairs.iter().map(move |p| {
                let (i, j) = p.features;
                (Term::Pair(i, j), self.pair_value(p, x[i], x[j]))
            }))
    }

    pub fn predict_logit(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_features());
        self.contributions(x).fold(self.intercept, |acc, (_, v)| acc + v)
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        logistic(self.predict_logit(x))
    }

    pub fn decompose(&self, x: &[f64]) -> Decomposition {
        Decomposition {
            intercept: self.intercept,
            terms: self
                .contributions(x)
                .map(|(term, value)| TermContribution {
                    term,
                    name: self.term_name(term),
                    value,
                })
                .collect(),
        }
    }

    /// Contribution of every term for every row: `out[term][row]`.
    pub fn term_matrix(&self, data: &Dataset) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::with_capacity(data.n_rows()); self.mains.len() + self.pairs.len()];
        for row in data.rows() {
            for (k, (_, v)) in self.contributions(row).enumerate() {
                out[k].push(v);
            }
        }
        out
    }

    /// Shifts every shape to mean zero over `data`, moving the means into the
    /// intercept. Predictions are unchanged up to rounding.
    pub fn center(&mut self, data: &Dataset) {
        self.center_terms(data, true, true);
    }

    /// Centers pair shapes only; main shapes stay bit-identical.
    pub fn center_pairs(&mut self, data: &Dataset) {
        self.center_terms(data, false, true);
    }

    fn center_terms(&mut self, data: &Dataset, mains: bool, pairs: bool) {
        if data.is_empty() {
            return;
        }
        let n = data.n_rows() as f64;
        let columns = self.term_matrix(data);
        let mut shift = 0.0;
        if mains {
            for (m, col) in self.mains.iter_mut().zip(&columns) {
                let mean = col.iter().sum::<f64>() / n;
                match &mut m.shape {
                    ShapeValues::Binned { values } => values.iter_mut().for_each(|v| *v -= mean),
                    ShapeValues::Linear { offset, .. } => *offset -= mean,
                }
                shift += mean;
            }
        }
        if pairs {
            for (p, col) in self.pairs.iter_mut().zip(&columns[self.mains.len()..]) {
                let mean = col.iter().sum::<f64>() / n;
                p.values.iter_mut().for_each(|v| *v -= mean);
                shift += mean;
            }
        }
        self.intercept += shift;
    }

    /// Mean contribution of each term over `data`.
    pub fn term_means(&self, data: &Dataset) -> Vec<f64> {
        let n = data.n_rows().max(1) as f64;
        self.term_matrix(data)
            .iter()
            .map(|c| c.iter().sum::<f64>() / n)
            .collect()
    }

    /// Checks that `data` has this model's feature columns.
    pub fn check_schema(&self, names: &[String]) -> Result<()> {
        if names != self.feature_names.as_slice() {
            return Err(Error::Schema(format!(
                "model expects features {:?}, data has {:?}",
                self.feature_names, names
            )));
        }
        Ok(())
    }
}
