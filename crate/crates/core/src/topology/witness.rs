//! Search for discontinuities of an encoder into SO(3).
//!
//! There is no finite-resolution definition of "discontinuous", so a jump is
//! judged by how it responds to refinement. Sampling a loop `refinement`
//! times more finely shrinks every jump of a Lipschitz map by about that
//! factor, while a genuine discontinuity keeps its size. The persistence of
//! a probe is `fine max jump / coarse max jump`, and a probe is a witness
//! when its persistence exceeds `persistence_ratio`, its fine jump exceeds
//! `jump_threshold` and it stands above `median_factor` times the median
//! fine step.

use super::encode::{encode_path, loop_closure_test, DiagnosticVerdict, LatentMetric, LatentPath};
use super::holonomy::quaternion_holonomy;
use super::path::{make_based_rotation_path, ManifoldPath};
use crate::error::Result;
use crate::manifold::{normalize, sample_uniform_rotation, sample_unit_vector3, Mat3, Rotation, Vec3};
use crate::tolerances::Tolerances;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearchConfig {
    /// Random full-turn loops probed in addition to the three canonical ones.
    pub n_paths: usize,
    /// Coarse samples per loop.
    pub n_samples: usize,
    pub refinement: usize,
    pub jump_threshold: f64,
    pub persistence_ratio: f64,
    pub median_factor: f64,
}

impl Default for WitnessSearchConfig {
    fn default() -> Self {
        Self {
            n_paths: 16,
            n_samples: 64,
            refinement: 4,
            jump_threshold: 0.1,
            persistence_ratio: 0.5,
            median_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopProbe {
    pub label: String,
    pub base: Rotation,
    pub axis: Vec3,
    pub coarse: DiagnosticVerdict,
    pub fine: DiagnosticVerdict,
    pub persistence: f64,
    pub score: f64,
    pub persistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPath {
    pub path: ManifoldPath,
    pub latent: LatentPath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Probe with the largest `max_jump × persistence` score.
    pub worst: LoopProbe,
    /// Fine-resolution samples of the worst probe, present when it is persistent.
    pub witness: Option<WitnessPath>,
    pub persistent_count: usize,
    pub probe_count: usize,
    /// Every probe in search order: the canonical loops first.
    pub probes: Vec<LoopProbe>,
    pub config: WitnessSearchConfig,
}

impl WitnessReport {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

fn encode_rotations<E, F>(encoder: &E, embedding: &F, path: &ManifoldPath) -> Result<LatentPath>
where
    E: Fn(&[f64]) -> Result<Rotation>,
    F: Fn(&Rotation) -> Vec<f64>,
{
    encode_path(|x| encoder(x).map(|r| r.to_flat().to_vec()), path, embedding, LatentMetric::Geodesic)
}

/// Verdict on an encoded loop, with the ℤ/2 class of the image loop when
/// the image is closed and finely sampled enough to lift.
fn verdict(latent: &LatentPath, threshold: f64) -> DiagnosticVerdict {
    let mut v = loop_closure_test(latent, threshold);
    if v.is_closed && v.max_jump < Tolerances::DEFAULT.lift_max_step {
        let mut pts: Vec<Rotation> =
            latent.points.iter().map(|p| Rotation::from_matrix_unchecked(Mat3::from_slice(p))).collect();
        let n = pts.len();
        pts[n - 1] = pts[0];
        if let Ok(image) = ManifoldPath::new(pts, true) {
            v.holonomy = quaternion_holonomy(&image).ok();
        }
    }
    v
}

/// Probes `encoder ∘ embedding` along the full-turn loops about the three
/// coordinate axes and along `n_paths` random loops `R₀·exp(t·a)`.
pub fn discontinuity_witness_search<E, F, R>(
    encoder: E,
    embedding: F,
    config: &WitnessSearchConfig,
    rng: &mut R,
) -> Result<WitnessReport>
where
    E: Fn(&[f64]) -> Result<Rotation>,
    F: Fn(&Rotation) -> Vec<f64>,
    R: Rng + ?Sized,
{
    let mut loops: Vec<(String, Rotation, Vec3)> = [("e_x", Vec3::X), ("e_y", Vec3::Y), ("e_z", Vec3::Z)]
        .into_iter()
        .map(|(l, a)| (format!("canonical-{l}"), Rotation::IDENTITY, a))
        .collect();
    for k in 0..config.n_paths {
        loops.push((format!("random-{k}"), sample_uniform_rotation(rng), sample_unit_vector3(rng)));
    }

    let coarse_n = config.n_samples.max(16);
    let fine_n = coarse_n * config.refinement.max(1);
    let mut best: Option<(LoopProbe, WitnessPath)> = None;
    let mut persistent_count = 0;
    let mut probes = Vec::new();

    for (label, base, axis) in loops {
        let unit = normalize(axis.to_array())?;
        let coarse_path = make_based_rotation_path(base, unit, TAU, coarse_n)?;
        let fine_path = make_based_rotation_path(base, unit, TAU, fine_n)?;
        let coarse_latent = encode_rotations(&encoder, &embedding, &coarse_path)?;
        let fine_latent = encode_rotations(&encoder, &embedding, &fine_path)?;
        let coarse = verdict(&coarse_latent, config.jump_threshold);
        let fine = verdict(&fine_latent, config.jump_threshold);

        let persistence = if coarse.max_jump > 0.0 { fine.max_jump / coarse.max_jump } else { 0.0 };
        let persistent = persistence > config.persistence_ratio
            && fine.max_jump > config.jump_threshold
            && fine.max_jump > config.median_factor * fine.median_jump;
        persistent_count += usize::from(persistent);
        let score = fine.max_jump * persistence;
        let probe = LoopProbe { label, base, axis, coarse, fine, persistence, score, persistent };

        let better = match &best {
            None => true,
            Some((b, _)) => (probe.persistent, probe.score) > (b.persistent, b.score),
        };
        probes.push(probe.clone());
        if better {
            best = Some((probe, WitnessPath { path: fine_path, latent: fine_latent }));
        }
    }

    let (worst, path) = best.expect("at least the canonical loops are probed");
    Ok(WitnessReport {
        witness: worst.persistent.then_some(path),
        worst,
        persistent_count,
        probe_count: probes.len(),
        probes,
        config: *config,
    })
}
