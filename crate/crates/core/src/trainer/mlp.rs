use crate::error::{Error, Result};
use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
}

/// Affine layer `z = x·W + b` with `W` stored input-major (in × out).
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Dense {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self { weights: Array2::zeros((inputs, outputs)), bias: Array1::zeros(outputs) }
    }

    fn xavier_uniform(inputs: usize, outputs: usize, rng: &mut impl Rng) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        let weights = Array2::from_shape_simple_fn((inputs, outputs), || rng.random_range(-limit..limit));
        Self { weights, bias: Array1::zeros(outputs) }
    }

    fn param_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

/// Feed-forward network: tanh hidden layers, linear output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layer_sizes: Vec<usize>,
    pub layers: Vec<Dense>,
    pub activation: Activation,
    pub seed: u64,
}

/// Per-layer parameter gradients, shaped like [`MlpModel::layers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Dense>,
}

/// Activations kept from a batched forward pass for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    activations: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Array2<f64> {
        self.activations.last().expect("cache holds at least the input")
    }
}

fn check_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 || layer_sizes.contains(&0) {
        return Err(Error::InvalidArgument(format!("invalid layer sizes {layer_sizes:?}")));
    }
    Ok(())
}

impl MlpModel {
    /// Xavier-uniform weights and zero biases, deterministic in `seed`.
    pub fn new(layer_sizes: &[usize], seed: u64) -> Result<Self> {
        check_sizes(layer_sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = layer_sizes.windows(2).map(|w| Dense::xavier_uniform(w[0], w[1], &mut rng)).collect();
        Ok(Self { layer_sizes: layer_sizes.to_vec(), layers, activation: Activation::Tanh, seed })
    }

    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        check_sizes(layer_sizes)?;
        let layers = layer_sizes.windows(2).map(|w| Dense::zeros(w[0], w[1])).collect();
        Ok(Self { layer_sizes: layer_sizes.to_vec(), layers, activation: Activation::Tanh, seed: 0 })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().expect("validated at construction")
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Dense::param_count).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| l.weights.iter().chain(l.bias.iter()).all(|v| v.is_finite()))
    }

    /// Batched forward pass; rows of `x` are samples.
    pub fn forward_batch(&self, x: ArrayView2<'_, f64>) -> Result<ForwardCache> {
        if x.ncols() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: x.ncols() });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x.to_owned());
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let mut z = activations[k].dot(&layer.weights);
            z += &layer.bias;
            if k < last {
                z.mapv_inplace(f64::tanh);
            }
            activations.push(z);
        }
        Ok(ForwardCache { activations })
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let view = ArrayView2::from_shape((1, x.len()), x).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(self.forward_batch(view)?.output().row(0).to_vec())
    }

    /// Gradients of a loss whose derivative with respect to the network
    /// output is `d_output`.
    pub fn backward(&self, cache: &ForwardCache, d_output: Array2<f64>) -> Gradients {
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = d_output;
        for k in (0..self.layers.len()).rev() {
            let input = &cache.activations[k];
            let weights = input.t().dot(&delta);
            let bias = delta.sum_axis(Axis(0));
            if k > 0 {
                let mut upstream = delta.dot(&self.layers[k].weights.t());
                upstream.zip_mut_with(input, |d, a| *d *= 1.0 - a * a);
                delta = upstream;
            }
            grads.push(Dense { weights, bias });
        }
        grads.reverse();
        Gradients { layers: grads }
    }

    /// `θ ← θ + scale·direction`, layer by layer.
    pub fn add_scaled(&mut self, direction: &Gradients, scale: f64) {
        for (l, d) in self.layers.iter_mut().zip(&direction.layers) {
            l.weights.scaled_add(scale, &d.weights);
            l.bias.scaled_add(scale, &d.bias);
        }
    }
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Self { layers: model.layers.iter().map(|l| Dense::zeros(l.weights.nrows(), l.weights.ncols())).collect() }
    }

    /// `self ← momentum·self + scale·g`.
    pub fn accumulate(&mut self, momentum: f64, g: &Gradients, scale: f64) {
        for (v, g) in self.layers.iter_mut().zip(&g.layers) {
            v.weights.zip_mut_with(&g.weights, |a, b| *a = momentum * *a + scale * b);
            v.bias.zip_mut_with(&g.bias, |a, b| *a = momentum * *a + scale * b);
        }
    }

    pub fn norm(&self) -> f64 {
        self.layers.iter().flat_map(|l| l.weights.iter().chain(l.bias.iter())).map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_model_outputs_zero() {
        let m = MlpModel::zeros(&[9, 16, 6]).unwrap();
        assert_eq!(m.forward(&[0.3; 9]).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn single_linear_identity_layer_is_identity() {
        let mut m = MlpModel::zeros(&[4, 4]).unwrap();
        m.layers[0].weights = Array2::eye(4);
        let x = [0.5, -1.0, 2.0, 3.5];
        assert_eq!(m.forward(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = MlpModel::new(&[3, 5, 2], 1).unwrap();
        assert!(matches!(m.forward(&[1.0; 4]), Err(Error::DimensionMismatch { expected: 3, actual: 4 })));
        assert!(MlpModel::new(&[3], 1).is_err());
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let a = MlpModel::new(&[9, 128, 128, 6], 7).unwrap();
        let b = MlpModel::new(&[9, 128, 128, 6], 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, MlpModel::new(&[9, 128, 128, 6], 8).unwrap());
        let limit = (6.0 / (9.0 + 128.0_f64)).sqrt();
        assert!(a.layers[0].weights.iter().all(|w| w.abs() <= limit));
        assert_eq!(a.param_count(), 9 * 128 + 128 + 128 * 128 + 128 + 128 * 6 + 6);
    }

    #[test]
    fn backward_matches_finite_differences_for_squared_output() {
        // L = ½‖f(x)‖² summed over the batch, so dL/df = f.
        let m = MlpModel::new(&[3, 5, 4, 2], 3).unwrap();
        let x = Array2::from_shape_vec((2, 3), vec![0.1, -0.4, 0.9, 1.2, 0.3, -0.7]).unwrap();
        let loss = |m: &MlpModel| 0.5 * m.forward_batch(x.view()).unwrap().output().iter().map(|v| v * v).sum::<f64>();
        let cache = m.forward_batch(x.view()).unwrap();
        let g = m.backward(&cache, cache.output().clone());
        let h = 1e-6;
        for l in 0..m.layers.len() {
            for idx in 0..m.layers[l].weights.len() {
                let (r, c) = (idx / m.layers[l].weights.ncols(), idx % m.layers[l].weights.ncols());
                let mut p = m.clone();
                p.layers[l].weights[[r, c]] += h;
                let mut q = m.clone();
                q.layers[l].weights[[r, c]] -= h;
                let fd = (loss(&p) - loss(&q)) / (2.0 * h);
                assert!((fd - g.layers[l].weights[[r, c]]).abs() < 1e-8);
            }
        }
    }
}
