use super::config::TrainConfig;
use super::dataset::{make_dataset, Embedding};
use super::loss::loss_and_grad;
use super::mlp::{Gradients, MlpModel};
use crate::error::{Error, Result};
use crate::heads::HeadPipeline;
use crate::manifold::{geodesic_distance, sample_uniform_rotation, Rotation};
use crate::topology::{discontinuity_witness_search, retract_check, LoopProbe, WitnessReport, WitnessSearchConfig};
use ndarray::Array2;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Loss above this multiple of the initial loss counts as divergent.
const DIVERGENCE_FACTOR: f64 = 1e3;
/// Consecutive divergent steps that abort training.
const DIVERGENCE_PATIENCE: usize = 100;

const STREAM_DATA: u64 = 1;
const STREAM_INIT: u64 = 2;
const STREAM_BATCH: u64 = 3;
const STREAM_EVAL: u64 = 4;
const STREAM_WITNESS: u64 = 5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    /// Evaluation points where the encoder was undefined, scored as π.
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossPoint {
    pub step: usize,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config: TrainConfig,
    pub param_count: usize,
    /// Geodesic reconstruction error (radians) before any update.
    pub initial_error: ErrorSummary,
    pub final_error: ErrorSummary,
    /// Largest error of a fresh retract check.
    pub retract_max_error: f64,
    /// Mean batch loss over each `log_every` block of steps.
    pub loss_curve: Vec<LossPoint>,
    pub skipped_elements: usize,
    /// Steps whose whole batch hit the head's singular guard.
    pub skipped_steps: usize,
    pub canonical_loops: Vec<LoopProbe>,
    pub witness: WitnessReport,
    pub reconstruction_passed: bool,
    pub continuity_passed: bool,
}

impl TrainReport {
    pub fn homeomorphic(&self) -> bool {
        self.reconstruction_passed && self.continuity_passed
    }

    /// Fraction of consecutive `window`-step windows whose mean logged loss
    /// does not exceed that of the window before.
    pub fn non_increasing_fraction(&self, window: usize) -> f64 {
        let per = (window / self.config.log_every.max(1)).max(1);
        let means: Vec<f64> =
            self.loss_curve.chunks_exact(per).map(|c| c.iter().map(|p| p.loss).sum::<f64>() / per as f64).collect();
        if means.len() < 2 {
            return 1.0;
        }
        let ok = means.windows(2).filter(|w| w[1] <= w[0]).count();
        ok as f64 / (means.len() - 1) as f64
    }
}

/// `ψ = head ∘ ξ` as a fallible encoder on ambient vectors.
pub fn encoder<'a>(model: &'a MlpModel, head: &'a HeadPipeline) -> impl Fn(&[f64]) -> Result<Rotation> + 'a {
    move |x| head.forward(&model.forward(x)?)
}

pub fn evaluate_error<R: Rng + ?Sized>(
    model: &MlpModel,
    head: &HeadPipeline,
    embedding: &Embedding,
    n: usize,
    rng: &mut R,
) -> Result<ErrorSummary> {
    let enc = encoder(model, head);
    let mut errors = Vec::with_capacity(n);
    let mut failures = 0;
    for _ in 0..n.max(1) {
        let r = sample_uniform_rotation(rng);
        match enc(&embedding.embed(&r)) {
            Ok(out) => errors.push(geodesic_distance(&out, &r)),
            Err(Error::OriginUndefined { .. } | Error::DegenerateFrame { .. }) => {
                failures += 1;
                errors.push(std::f64::consts::PI);
            }
            Err(e) => return Err(e),
        }
    }
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let max = errors.iter().copied().fold(0.0, f64::max);
    errors.sort_by(f64::total_cmp);
    let median = errors[errors.len() / 2];
    Ok(ErrorSummary { mean, median, max, failures })
}

/// Trains `ξ` with SGD + momentum through the configured head and runs the
/// post-hoc diagnostics on `head ∘ ξ`.
pub fn train(config: &TrainConfig) -> Result<(MlpModel, TrainReport)> {
    train_with_embedding(config, &config.embedding.build())
}

/// [`train`] with an explicitly materialised embedding, which must have the
/// configured ambient dimension.
pub fn train_with_embedding(config: &TrainConfig, embedding: &Embedding) -> Result<(MlpModel, TrainReport)> {
    config.validate()?;
    if embedding.ambient_dim() != config.embedding.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: config.embedding.ambient_dim(),
            actual: embedding.ambient_dim(),
        });
    }
    let head = config.head.pipeline();
    let data = make_dataset(config.samples, embedding, &mut stream(config.seed, STREAM_DATA));
    let mut model = MlpModel::new(&config.layer_sizes(), stream(config.seed, STREAM_INIT).next_u64())?;

    let initial_error =
        evaluate_error(&model, &head, embedding, config.eval_samples, &mut stream(config.seed, STREAM_EVAL))?;

    let mut batch_rng = stream(config.seed, STREAM_BATCH);
    let dim = data.inputs.ncols();
    let mut inputs = Array2::zeros((config.batch_size, dim));
    let mut targets = vec![Rotation::IDENTITY; config.batch_size];
    let mut velocity = Gradients::zeros_like(&model);
    let mut initial_loss = None;
    let mut divergent_run = 0;
    let mut loss_curve = Vec::new();
    let (mut block_sum, mut block_n) = (0.0, 0usize);
    let (mut skipped_elements, mut skipped_steps) = (0, 0);

    for step in 0..config.steps {
        for (b, target) in targets.iter_mut().enumerate() {
            let i = batch_rng.random_range(0..data.len());
            inputs.row_mut(b).assign(&data.inputs.row(i));
            *target = data.rotations[i];
        }
        match loss_and_grad(&model, inputs.view(), &targets, config.head) {
            Ok(lg) => {
                skipped_elements += lg.skipped;
                let initial = *initial_loss.get_or_insert(lg.loss);
                if !(lg.loss <= DIVERGENCE_FACTOR * initial) {
                    divergent_run += 1;
                    if divergent_run >= DIVERGENCE_PATIENCE {
                        return Err(Error::DivergedLoss { step, loss: lg.loss, initial });
                    }
                } else {
                    divergent_run = 0;
                }
                if lg.loss.is_finite() {
                    velocity.accumulate(config.momentum, &lg.gradients, -config.learning_rate);
                    model.add_scaled(&velocity, 1.0);
                    block_sum += lg.loss;
                    block_n += 1;
                }
            }
            Err(Error::NearSingularHead { .. }) => {
                skipped_elements += config.batch_size;
                skipped_steps += 1;
            }
            Err(e) => return Err(e),
        }
        if (step + 1) % config.log_every == 0 || step + 1 == config.steps {
            if block_n > 0 {
                loss_curve.push(LossPoint { step: step + 1, loss: block_sum / block_n as f64 });
            }
            block_sum = 0.0;
            block_n = 0;
        }
    }
    if !model.is_finite() {
        return Err(Error::DivergedLoss {
            step: config.steps,
            loss: f64::NAN,
            initial: initial_loss.unwrap_or(f64::NAN),
        });
    }

    let final_error =
        evaluate_error(&model, &head, embedding, config.eval_samples, &mut stream(config.seed, STREAM_EVAL))?;
    let mut eval_rng = stream(config.seed, STREAM_EVAL);
    eval_rng.set_word_pos(1 << 40);
    let retract_max_error =
        retract_check(encoder(&model, &head), |r| embedding.embed(r), config.eval_samples, &mut eval_rng);
    let witness_config = WitnessSearchConfig {
        n_paths: config.witness_paths,
        n_samples: config.eval_loop_samples,
        jump_threshold: config.jump_threshold,
        ..Default::default()
    };
    let witness = discontinuity_witness_search(
        encoder(&model, &head),
        |r| embedding.embed(r),
        &witness_config,
        &mut stream(config.seed, STREAM_WITNESS),
    )?;
    let canonical_loops = witness.probes.iter().filter(|p| p.label.starts_with("canonical")).cloned().collect();

    let report = TrainReport {
        config: config.clone(),
        param_count: model.param_count(),
        initial_error,
        reconstruction_passed: final_error.mean < config.error_threshold,
        continuity_passed: !witness.found(),
        final_error,
        retract_max_error,
        loss_curve,
        skipped_elements,
        skipped_steps,
        canonical_loops,
        witness,
    };
    Ok((model, report))
}
