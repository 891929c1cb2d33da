use rand::Rng;
use serde::{Deserialize, Serialize};

/// Fully connected network with tanh hidden layers and a scalar linear
/// output. Parameters are stored flat, layer by layer, each layer as its
/// row-major `outputs x inputs` weights followed by its biases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    /// Layer widths from input to output; the last entry is 1.
    pub sizes: Vec<usize>,
    pub params: Vec<f64>,
}

/// Per-layer activations from one forward pass.
#[derive(Debug, Clone, Default)]
pub struct Cache {
    acts: Vec<Vec<f64>>,
}

impl Mlp {
    /// Glorot-uniform weights, zero biases.
    pub fn new<R: Rng>(arity: usize, hidden: &[usize], rng: &mut R) -> Self {
        let mut sizes = vec![arity];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let mut params = Vec::new();
        for w in sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            params.extend((0..fan_in * fan_out).map(|_| rng.gen_range(-limit..=limit)));
            params.extend(std::iter::repeat_n(0.0, fan_out));
        }
        Self { sizes, params }
    }

    pub fn zeros(arity: usize, hidden: &[usize]) -> Self {
        let mut sizes = vec![arity];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let n = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Self {
            sizes,
            params: vec![0.0; n],
        }
    }

    pub fn arity(&self) -> usize {
        self.sizes[0]
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        let mut cache = Cache::default();
        self.forward_cached(x, &mut cache)
    }

    pub fn forward_cached(&self, x: &[f64], cache: &mut Cache) -> f64 {
        debug_assert_eq!(x.len(), self.arity());
        let layers = self.sizes.len() - 1;
        cache.acts.resize(layers, Vec::new());
        cache.acts[0].clear();
        cache.acts[0].extend_from_slice(x);
        let mut offset = 0;
        let mut out = 0.0;
        for l in 0..layers {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let w = &self.params[offset..offset + n_in * n_out];
            let b = &self.params[offset + n_in * n_out..offset + n_in * n_out + n_out];
            offset += n_in * n_out + n_out;
            let (done, rest) = cache.acts.split_at_mut(l + 1);
            let input = &done[l];
            if l + 1 == layers {
                out = b[0] + w.iter().zip(input).map(|(a, v)| a * v).sum::<f64>();
            } else {
                let next = &mut rest[0];
                next.clear();
                for o in 0..n_out {
                    let row = &w[o * n_in..(o + 1) * n_in];
                    let s = b[o] + row.iter().zip(input).map(|(a, v)| a * v).sum::<f64>();
                    next.push(s.tanh());
                }
            }
        }
        out
    }

    /// Adds `dout * d(output)/d(params)` into `grad`, using the activations
    /// of the last `forward_cached` call.
    pub fn backward(&self, cache: &Cache, dout: f64, grad: &mut [f64]) {
        let layers = self.sizes.len() - 1;
        let mut offsets = Vec::with_capacity(layers);
        let mut offset = 0;
        for l in 0..layers {
            offsets.push(offset);
            offset += self.sizes[l] * self.sizes[l + 1] + self.sizes[l + 1];
        }
        let mut delta = vec![dout];
        for l in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let off = offsets[l];
            let input = &cache.acts[l];
            for o in 0..n_out {
                let d = delta[o];
                if d == 0.0 {
                    continue;
                }
                let g = &mut grad[off + o * n_in..off + (o + 1) * n_in];
                for (gi, a) in g.iter_mut().zip(input) {
                    *gi += d * a;
                }
                grad[off + n_in * n_out + o] += d;
            }
            if l > 0 {
                let w = &self.params[off..off + n_in * n_out];
                let mut prev = vec![0.0; n_in];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    for (p, &wv) in prev.iter_mut().zip(&w[o * n_in..(o + 1) * n_in]) {
                        *p += d * wv;
                    }
                }
                for (p, a) in prev.iter_mut().zip(input) {
                    *p *= 1.0 - a * a;
                }
                delta = prev;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn shapes_and_zero_network() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m = Mlp::new(2, &[16, 16], &mut rng);
        assert_eq!(m.n_params(), 2 * 16 + 16 + 16 * 16 + 16 + 16 + 1);
        let z = Mlp::zeros(1, &[4]);
        assert_eq!(z.forward(&[3.0]), 0.0);
    }

    #[test]
    fn linear_output_layer() {
        // no hidden layers: output = w . x + b
        let m = Mlp {
            sizes: vec![2, 1],
            params: vec![0.5, -2.0, 0.25],
        };
        assert_eq!(m.forward(&[2.0, 1.0]), 0.5 * 2.0 - 2.0 + 0.25);
        let mut cache = Cache::default();
        m.forward_cached(&[2.0, 1.0], &mut cache);
        let mut g = vec![0.0; 3];
        m.backward(&cache, 1.0, &mut g);
        assert_eq!(g, vec![2.0, 1.0, 1.0]);
    }
}
