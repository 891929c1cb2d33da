use serde::{Deserialize, Serialize};

use super::{AdditiveModel, Term};
use crate::dataset::Dataset;
use crate::{Error, Result};

/// Spread statistic used to rate a term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceStatistic {
    /// Population standard deviation of the term's contributions.
    #[default]
    Std,
    /// Mean absolute deviation from the mean contribution.
    Mad,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermImportance {
    pub term: Term,
    pub name: String,
    pub spread: f64,
    pub ratio: f64,
}

fn spread(values: &[f64], stat: ImportanceStatistic) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    match stat {
        ImportanceStatistic::Std => {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
        }
        ImportanceStatistic::Mad => values.iter().map(|v| (v - mean).abs()).sum::<f64>() / n,
    }
}

/// Normalized spread of each term's contributions over `data`, sorted by
/// descending ratio (ties in term order). Ratios sum to 1.
pub fn importance_ratios(
    model: &AdditiveModel,
    data: &Dataset,
    stat: ImportanceStatistic,
) -> Result<Vec<TermImportance>> {
    if data.is_empty() {
        return Err(Error::Validation("importance needs a non-empty dataset".into()));
    }
    model.check_schema(&data.feature_names)?;
    let spreads: Vec<f64> = model
        .term_matrix(data)
        .iter()
        .map(|c| spread(c, stat))
        .collect();
    let total: f64 = spreads.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroImportance);
    }
    let mut out: Vec<TermImportance> = model
        .terms()
        .into_iter()
        .zip(spreads)
        .map(|(term, s)| TermImportance {
            term,
            name: model.term_name(term),
            spread: s,
            ratio: s / total,
        })
        .collect();
    out.sort_by(|a, b| b.ratio.total_cmp(&a.ratio));
    Ok(out)
}

pub fn importance_tsv(ratios: &[TermImportance]) -> String {
    let mut s = String::from("rank\tterm\tspread\tratio\n");
    for (k, r) in ratios.iter().enumerate() {
        s.push_str(&format!("{}\t{}\t{}\t{}\n", k + 1, r.name, r.spread, r.ratio));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gam::{Binner, MainShape, ShapeValues};

    fn model(coefs: &[f64]) -> AdditiveModel {
        let d = coefs.len();
        let names = (0..d).map(|i| format!("f{i}")).collect();
        let b = Binner {
            cuts: vec![vec![]; d],
            min: vec![0.0; d],
            max: vec![1.0; d],
        };
        let mains = coefs
            .iter()
            .enumerate()
            .map(|(i, &c)| MainShape {
                feature: i,
                shape: ShapeValues::Linear { coef: c, offset: 0.0 },
            })
            .collect();
        AdditiveModel::new(names, 0.0, mains, vec![], b.clone(), b).unwrap()
    }

    fn data(d: usize) -> Dataset {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64; d]).collect();
        Dataset::from_rows((0..d).map(|i| format!("f{i}")).collect(), &rows, vec![0; 10]).unwrap()
    }

    #[test]
    fn single_and_two_to_one() {
        let r = importance_ratios(&model(&[0.0, 1.5]), &data(2), ImportanceStatistic::Std).unwrap();
        assert_eq!(r[0].name, "f1");
        assert_eq!(r[0].ratio, 1.0);
        let r = importance_ratios(&model(&[1.0, 2.0]), &data(2), ImportanceStatistic::Std).unwrap();
        assert!((r[0].ratio - 2.0 / 3.0).abs() < 1e-12);
        assert!((r[1].ratio - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r[0].name, "f1");
    }

    #[test]
    fn zero_model_is_an_error() {
        let e = importance_ratios(&model(&[0.0, 0.0]), &data(2), ImportanceStatistic::Std);
        assert!(matches!(e, Err(Error::ZeroImportance)));
    }

    #[test]
    fn mad_variant() {
        let r = importance_ratios(&model(&[1.0, 3.0]), &data(2), ImportanceStatistic::Mad).unwrap();
        assert!((r[0].ratio - 0.75).abs() < 1e-12);
    }
}
