use serde::{Deserialize, Serialize};

use super::{AdditiveModel, Binner};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinAxis {
    pub feature: String,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub center: Vec<f64>,
}

impl BinAxis {
    fn new(binner: &Binner, names: &[String], feature: usize) -> Self {
        let n = binner.n_bins(feature);
        let (lower, upper) = (0..n).map(|b| binner.bin_bounds(feature, b)).unzip();
        Self {
            feature: names[feature].clone(),
            lower,
            upper,
            center: (0..n).map(|b| binner.bin_center(feature, b)).collect(),
        }
    }
}

/// Plot-ready lookup table for one term, evaluated at bin centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeTable {
    Main {
        name: String,
        axis: BinAxis,
        contribution: Vec<f64>,
    },
    /// `contribution[row][col]`, rows along the first feature.
    Pair {
        name: String,
        rows: BinAxis,
        cols: BinAxis,
        contribution: Vec<Vec<f64>>,
    },
}

pub fn export_shape_tables(model: &AdditiveModel) -> Vec<ShapeTable> {
    let names = &model.feature_names;
    let mut tables = Vec::new();
    for m in &model.mains {
        let axis = BinAxis::new(&model.binner, names, m.feature);
        let contribution = axis.center.iter().map(|&x| model.main_value(m, x)).collect();
        tables.push(ShapeTable::Main {
            name: names[m.feature].clone(),
            axis,
            contribution,
        });
    }
    for p in &model.pairs {
        let (i, j) = p.features;
        let rows = BinAxis::new(&model.pair_binner, names, i);
        let cols = BinAxis::new(&model.pair_binner, names, j);
        let contribution = rows
            .center
            .iter()
            .map(|&xi| cols.center.iter().map(|&xj| model.pair_value(p, xi, xj)).collect())
            .collect();
        tables.push(ShapeTable::Pair {
            name: model.term_name(super::Term::Pair(i, j)),
            rows,
            cols,
            contribution,
        });
    }
    tables
}

/// Long-format tab-separated tables; pair rows carry both axes, main rows
/// leave the second axis empty.
pub fn shape_tables_tsv(tables: &[ShapeTable]) -> String {
    let mut s = String::from(
        "term\tbin_i\tlower_i\tupper_i\tcenter_i\tbin_j\tlower_j\tupper_j\tcenter_j\tcontribution\n",
    );
    for t in tables {
        match t {
            ShapeTable::Main {
                name,
                axis,
                contribution,
            } => {
                for (b, c) in contribution.iter().enumerate() {
                    s.push_str(&format!(
                        "{name}\t{b}\t{}\t{}\t{}\t\t\t\t\t{c}\n",
                        axis.lower[b], axis.upper[b], axis.center[b]
                    ));
                }
            }
            ShapeTable::Pair {
                name,
                rows,
                cols,
                contribution,
            } => {
                for (a, row) in contribution.iter().enumerate() {
                    for (b, c) in row.iter().enumerate() {
                        s.push_str(&format!(
                            "{name}\t{a}\t{}\t{}\t{}\t{b}\t{}\t{}\t{}\t{c}\n",
                            rows.lower[a],
                            rows.upper[a],
                            rows.center[a],
                            cols.lower[b],
                            cols.upper[b],
                            cols.center[b]
                        ));
                    }
                }
            }
        }
    }
    s
}

pub fn shape_tables_json(tables: &[ShapeTable]) -> String {
    serde_json::to_string_pretty(tables).expect("shape tables serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gam::{MainShape, PairShape, ShapeValues};

    #[test]
    fn tables_match_decompose_at_centers() {
        let b = Binner {
            cuts: vec![vec![0.3, 0.6]; 3],
            min: vec![0.0; 3],
            max: vec![1.0; 3],
        };
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mains = (0..3)
            .map(|f| MainShape {
                feature: f,
                shape: ShapeValues::Binned {
                    values: vec![f as f64, -1.0, 0.5],
                },
            })
            .collect();
        let mut pair = PairShape::zeros((0, 2), 3, 3);
        pair.values = (0..9).map(|v| v as f64 / 10.0).collect();
        let m = AdditiveModel::new(names, 0.1, mains, vec![pair], b.clone(), b).unwrap();
        let tables = export_shape_tables(&m);
        assert_eq!(tables.len(), 4);
        let ShapeTable::Pair {
            rows,
            cols,
            contribution,
            ..
        } = &tables[3]
        else {
            panic!("expected pair table last");
        };
        for (a, &xi) in rows.center.iter().enumerate() {
            for (c, &xj) in cols.center.iter().enumerate() {
                let d = m.decompose(&[xi, 0.0, xj]);
                assert_eq!(d.terms[3].value, contribution[a][c]);
            }
        }
        let tsv = shape_tables_tsv(&tables);
        assert_eq!(tsv.lines().count(), 1 + 3 * 3 + 9);
        assert!(shape_tables_json(&tables).contains("\"kind\": \"pair\""));
    }
}
