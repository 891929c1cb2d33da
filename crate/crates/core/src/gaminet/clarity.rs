use super::mlp::Mlp;

/// Marginal-clarity penalty of pair outputs on a batch.
///
/// For each parent axis, outputs are averaged within each occupied bin and
/// the squared bin means are averaged over bins; the penalty is the mean of
/// the two axes. Returns the penalty and its gradient with respect to each
/// output.
pub fn clarity_from_outputs(outputs: &[f64], bins: [&[usize]; 2]) -> (f64, Vec<f64>) {
    let n = outputs.len();
    let mut grad = vec![0.0; n];
    if n == 0 {
        return (0.0, grad);
    }
    let mut penalty = 0.0;
    for axis in bins {
        let width = axis.iter().copied().max().map_or(0, |m| m + 1);
        let mut sums = vec![0.0; width];
        let mut counts = vec![0usize; width];
        for (&b, &o) in axis.iter().zip(outputs) {
            sums[b] += o;
            counts[b] += 1;
        }
        let occupied = counts.iter().filter(|&&c| c > 0).count() as f64;
        let means: Vec<f64> = sums
            .iter()
            .zip(&counts)
            .map(|(&s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
            .collect();
        penalty += 0.5 * means.iter().map(|m| m * m).sum::<f64>() / occupied;
        for (g, &b) in grad.iter_mut().zip(axis) {
            // d/d o_k of 0.5 * mean_b(m_b^2) = m_b / (occupied * n_b)
            *g += means[b] / (occupied * counts[b] as f64);
        }
    }
    (penalty, grad)
}

/// Clarity penalty of a pair subnetwork over a batch of 2-D inputs with
/// their per-axis bin ids.
pub fn clarity_penalty(net: &Mlp, inputs: &[[f64; 2]], bins: [&[usize]; 2]) -> f64 {
    let outputs: Vec<f64> = inputs.iter().map(|x| net.forward(x)).collect();
    clarity_from_outputs(&outputs, bins).0
}
