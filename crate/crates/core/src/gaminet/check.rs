use super::mlp::{Cache, Mlp};
use crate::gam::logistic;

/// Inputs with 0/1 targets for checking a single subnetwork.
#[derive(Debug, Clone)]
pub struct Batch {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

fn row_loss(z: f64, y: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z
}

/// Mean logloss of `logistic(net(x))`, summed with Neumaier compensation so
/// the finite differences are not swamped by accumulation error.
pub fn batch_loss(net: &Mlp, batch: &Batch) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (x, &y) in batch.inputs.iter().zip(&batch.targets) {
        let v = row_loss(net.forward(x), y);
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    (sum + comp) / batch.inputs.len() as f64
}

/// Analytic gradient of [`batch_loss`] by backpropagation.
pub fn batch_gradient(net: &Mlp, batch: &Batch) -> Vec<f64> {
    let mut grad = vec![0.0; net.n_params()];
    let mut cache = Cache::default();
    let n = batch.inputs.len() as f64;
    for (x, &y) in batch.inputs.iter().zip(&batch.targets) {
        let z = net.forward_cached(x, &mut cache);
        net.backward(&cache, (logistic(z) - y) / n, &mut grad);
    }
    grad
}

pub const FD_STEP: f64 = 1e-5;
/// Gradients smaller than this are compared in absolute terms.
pub const REL_FLOOR: f64 = 1e-7;

/// Largest relative difference between the analytic gradient and central
/// finite differences, over all parameters.
pub fn gradient_check(net: &Mlp, batch: &Batch) -> f64 {
    let analytic = batch_gradient(net, batch);
    let mut probe = net.clone();
    let mut worst: f64 = 0.0;
    for (k, &a) in analytic.iter().enumerate() {
        let orig = probe.params[k];
        probe.params[k] = orig + FD_STEP;
        let plus = batch_loss(&probe, batch);
        probe.params[k] = orig - FD_STEP;
        let minus = batch_loss(&probe, batch);
        probe.params[k] = orig;
        let numeric = (plus - minus) / (2.0 * FD_STEP);
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(REL_FLOOR);
        worst = worst.max(rel);
    }
    worst
}
