use crate::manifold::{sample_uniform_rotation, Rotation};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// How a rotation is placed in the data space 𝒳.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmbeddingSpec {
    /// The nine row-major matrix entries.
    Flatten9,
    /// `x ↦ A₂·tanh(A₁·vec(R) + b₁) + b₂` with fixed random `A₁ ∈ ℝ^{D×9}`,
    /// `A₂ ∈ ℝ^{D×D}` drawn from `seed`.
    Lifted { dim: usize, seed: u64 },
}

impl EmbeddingSpec {
    pub fn build(&self) -> Embedding {
        match *self {
            EmbeddingSpec::Flatten9 => Embedding { spec: *self, lift: None, pre_rotation: None },
            EmbeddingSpec::Lifted { dim, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut normal = |scale: f64| scale * rng.sample::<f64, _>(StandardNormal);
                let a1 = Array2::from_shape_simple_fn((dim, 9), || normal(1.0 / 3.0));
                let b1 = Array1::from_shape_simple_fn(dim, || normal(0.1));
                let a2 = Array2::from_shape_simple_fn((dim, dim), || normal(1.0 / (dim as f64).sqrt()));
                let b2 = Array1::from_shape_simple_fn(dim, || normal(0.1));
                Embedding { spec: *self, lift: Some(Lift { a1, b1, a2, b2 }), pre_rotation: None }
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            EmbeddingSpec::Flatten9 => 9,
            EmbeddingSpec::Lifted { dim, .. } => *dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Lift {
    a1: Array2<f64>,
    b1: Array1<f64>,
    a2: Array2<f64>,
    b2: Array1<f64>,
}

/// A materialised embedding `i: SO(3) → ℝᴰ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    spec: EmbeddingSpec,
    lift: Option<Lift>,
    pre_rotation: Option<Rotation>,
}

impl Embedding {
    pub fn spec(&self) -> EmbeddingSpec {
        self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.spec.ambient_dim()
    }

    /// The same embedding applied to `Q·R`.
    pub fn with_pre_rotation(mut self, q: Rotation) -> Self {
        self.pre_rotation = Some(q);
        self
    }

    pub fn embed(&self, r: &Rotation) -> Vec<f64> {
        let r = self.pre_rotation.map_or(*r, |q| q * *r);
        let flat = Array1::from(r.to_flat().to_vec());
        match &self.lift {
            None => flat.to_vec(),
            Some(l) => {
                let hidden = (l.a1.dot(&flat) + &l.b1).mapv(f64::tanh);
                (l.a2.dot(&hidden) + &l.b2).to_vec()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// One embedded sample per row.
    pub inputs: Array2<f64>,
    pub rotations: Vec<Rotation>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }
}

/// `n` Haar rotations and their embeddings.
pub fn make_dataset<R: Rng + ?Sized>(n: usize, embedding: &Embedding, rng: &mut R) -> Dataset {
    let n = n.max(1);
    let rotations: Vec<Rotation> = (0..n).map(|_| sample_uniform_rotation(rng)).collect();
    let dim = embedding.ambient_dim();
    let mut inputs = Array2::zeros((n, dim));
    for (mut row, r) in inputs.rows_mut().into_iter().zip(&rotations) {
        row.assign(&Array1::from(embedding.embed(r)));
    }
    Dataset { inputs, rotations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::geodesic_distance;

    #[test]
    fn flatten_of_identity() {
        let e = EmbeddingSpec::Flatten9.build();
        assert_eq!(e.embed(&Rotation::IDENTITY), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn dataset_is_deterministic() {
        let e = EmbeddingSpec::Lifted { dim: 12, seed: 3 }.build();
        let a = make_dataset(50, &e, &mut ChaCha8Rng::seed_from_u64(5));
        let b = make_dataset(50, &e, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        assert_eq!(a.inputs.ncols(), 12);
    }

    #[test]
    fn lifted_embedding_separates_distinct_rotations() {
        let e = EmbeddingSpec::Lifted { dim: 30, seed: 11 }.build();
        let d = make_dataset(1000, &e, &mut ChaCha8Rng::seed_from_u64(6));
        let mut min = f64::INFINITY;
        for i in 0..d.len() {
            for j in (i + 1)..d.len() {
                if geodesic_distance(&d.rotations[i], &d.rotations[j]) < 0.1 {
                    continue;
                }
                let gap = (&d.inputs.row(i) - &d.inputs.row(j)).mapv(|v| v * v).sum().sqrt();
                min = min.min(gap);
            }
        }
        assert!(min > 0.0 && min.is_finite(), "{min}");
    }
}
