//! Logistic-regression baseline as an additive model with linear shapes.

use serde::{Deserialize, Serialize};

use super::{logistic, AdditiveModel, Binner, MainShape, ShapeValues};
use crate::dataset::Dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub max_iterations: usize,
    /// Stop once the gradient norm (standardized coordinates) falls below this.
    pub tolerance: f64,
    pub l2: f64,
    /// Bins for the exported explanation tables.
    pub max_bins: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            tolerance: 1e-8,
            l2: 0.0,
            max_bins: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticReport {
    pub iterations: usize,
    pub gradient_norm: f64,
    pub loss: f64,
    pub converged: bool,
}

struct Standardized {
    mean: Vec<f64>,
    scale: Vec<f64>,
    z: Vec<Vec<f64>>,
}

fn standardize(data: &Dataset) -> Standardized {
    let n = data.n_rows() as f64;
    let d = data.n_features();
    let mut mean = vec![0.0; d];
    let mut scale = vec![1.0; d];
    for j in 0..d {
        let col = data.column(j);
        let m = col.iter().sum::<f64>() / n;
        let sd = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt();
        mean[j] = m;
        if sd > 0.0 {
            scale[j] = sd;
        }
    }
    let z = data
        .rows()
        .map(|r| (0..d).map(|j| (r[j] - mean[j]) / scale[j]).collect())
        .collect();
    Standardized { mean, scale, z }
}

/// Mean logloss plus `l2/2 * |w|^2` (bias unpenalized); `params = [b, w..]`.
fn loss_and_grad(z: &[Vec<f64>], y: &[u8], params: &[f64], l2: f64) -> (f64, Vec<f64>) {
    let n = z.len() as f64;
    let mut grad = vec![0.0; params.len()];
    let mut loss = 0.0;
    for (row, &label) in z.iter().zip(y) {
        let s = params[0] + row.iter().zip(&params[1..]).map(|(a, w)| a * w).sum::<f64>();
        let t = label as f64;
        // log(1 + e^s) - t*s, computed stably
        loss += s.max(0.0) + (-s.abs()).exp().ln_1p() - t * s;
        let r = logistic(s) - t;
        grad[0] += r;
        for (g, a) in grad[1..].iter_mut().zip(row) {
            *g += r * a;
        }
    }
    grad.iter_mut().for_each(|g| *g /= n);
    loss /= n;
    for (g, w) in grad[1..].iter_mut().zip(&params[1..]) {
        *g += l2 * w;
        loss += 0.5 * l2 * w * w;
    }
    (loss, grad)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gradient descent with Armijo backtracking on standardized features.
///
/// The fit is mapped back to raw units as `coef * x + offset` per feature,
/// then centered so each shape has mean zero on the training rows.
pub fn train_logistic(
    data: &Dataset,
    config: &LogisticConfig,
) -> Result<(AdditiveModel, LogisticReport)> {
    data.require_both_classes()?;
    if config.l2 < 0.0 || !config.tolerance.is_finite() || config.tolerance <= 0.0 {
        return Err(Error::Validation("logistic config needs l2 >= 0 and tolerance > 0".into()));
    }
    let st = standardize(data);
    let d = data.n_features();
    let mut params = vec![0.0; d + 1];
    let (mut loss, mut grad) = loss_and_grad(&st.z, &data.labels, &params, config.l2);
    let mut step: f64 = 1.0;
    let mut iterations = 0;
    while iterations < config.max_iterations && norm(&grad) > config.tolerance {
        iterations += 1;
        let g2 = grad.iter().map(|g| g * g).sum::<f64>();
        step = (step * 2.0).min(64.0);
        loop {
            let trial: Vec<f64> = params.iter().zip(&grad).map(|(p, g)| p - step * g).collect();
            let (l, g) = loss_and_grad(&st.z, &data.labels, &trial, config.l2);
            if l <= loss - 0.5 * step * g2 {
                params = trial;
                loss = l;
                grad = g;
                break;
            }
            step /= 2.0;
            if step < 1e-20 {
                break;
            }
        }
        if step < 1e-20 {
            break;
        }
    }
    let gradient_norm = norm(&grad);
    let converged = gradient_norm <= config.tolerance;
    if !converged {
        log::warn!(
            "logistic regression did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})"
        );
    }
    let mains = (0..d)
        .map(|j| {
            let coef = params[j + 1] / st.scale[j];
            MainShape {
                feature: j,
                shape: ShapeValues::Linear {
                    coef,
                    offset: -coef * st.mean[j],
                },
            }
        })
        .collect();
    let binner = Binner::fit(data, config.max_bins)?;
    let mut model = AdditiveModel::new(
        data.feature_names.clone(),
        params[0],
        mains,
        vec![],
        binner.clone(),
        binner,
    )?;
    model.center(data);
    Ok((
        model,
        LogisticReport {
            iterations,
            gradient_norm,
            loss,
            converged,
        },
    ))
}

impl AdditiveModel {
    /// Raw-unit coefficients of a model whose mains are all linear.
    pub fn linear_coefficients(&self) -> Option<Vec<f64>> {
        let mut coefs = vec![0.0; self.n_features()];
        for m in &self.mains {
            match m.shape {
                ShapeValues::Linear { coef, .. } => coefs[m.feature] = coef,
                ShapeValues::Binned { .. } => return None,
            }
        }
        Some(coefs)
    }
}
