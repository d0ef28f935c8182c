//! Which necessary and sufficient conditions for a homeomorphic encoder each
//! head meets. The verdicts follow from topology alone and are tabulated statically; the
//! attached witness illustrates them numerically on a full-turn loop.

use super::{HeadKind, HeadPipeline};
use crate::manifold::{geodesic_distance, normalize, Vec3};
use crate::topology::{
    encode_path, loop_closure_test, make_rotation_loop, quaternion_holonomy, Holonomy, LatentMetric,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Violated,
    Satisfied,
    NotApplicable,
}

/// The argument a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    /// A continuous encoder restricting to a homeomorphism is a retract, so
    /// each πₖ(M) must inject into πₖ of the encoder's domain.
    RetractHomotopyInjection,
    /// A compact image of the intermediate stage forces `h′` to be a homeomorphism.
    CompactLatentForcesHomeomorphism,
    /// With `h′` a homeomorphism, each πₖ(M) must be a subgroup of πₖ(𝒵).
    LatentHomotopySubgroup,
    /// With `h′` a homeomorphism, M must embed in 𝒵.
    EmbeddabilityInLatent,
    /// `h ∘ g` admits a continuous right inverse on an embedded copy of M.
    ExactContinuousSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub verdict: Verdict,
    pub citation: Option<Citation>,
    pub reason: String,
}

impl Finding {
    fn violated(citation: Citation, reason: &str) -> Self {
        Self { verdict: Verdict::Violated, citation: Some(citation), reason: reason.into() }
    }

    fn satisfied(citation: Citation, reason: &str) -> Self {
        Self { verdict: Verdict::Satisfied, citation: Some(citation), reason: reason.into() }
    }

    fn not_applicable(reason: &str) -> Self {
        Self { verdict: Verdict::NotApplicable, citation: None, reason: reason.into() }
    }
}

/// The head's natural section evaluated along a non-contractible loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    pub loop_axis: Vec3,
    pub n_samples: usize,
    /// Class of the source loop in π₁(SO(3)).
    pub loop_holonomy: Holonomy,
    pub latent_max_jump: f64,
    pub latent_jump_location: usize,
    pub latent_median_jump: f64,
    /// Max jump at 4× the samples divided by max jump at `n_samples`.
    pub persistence: f64,
    pub latent_closed: bool,
    /// Largest geodesic error of `head(section(R))` along the loop.
    pub section_round_trip_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub kind: HeadKind,
    pub intermediate_space: String,
    pub z_compact: bool,
    pub retract_obstruction: Finding,
    pub h_prime_forced_homeo: Finding,
    pub homotopy_obstruction: Finding,
    pub embeddability_obstruction: Finding,
    pub sufficient_condition_met: Finding,
    pub witness: Option<Witness>,
}

impl ConditionReport {
    pub fn findings(&self) -> [(&'static str, &Finding); 5] {
        [
            ("retract_obstruction", &self.retract_obstruction),
            ("h_prime_forced_homeo", &self.h_prime_forced_homeo),
            ("homotopy_obstruction", &self.homotopy_obstruction),
            ("embeddability_obstruction", &self.embeddability_obstruction),
            ("sufficient_condition_met", &self.sufficient_condition_met),
        ]
    }

    /// True when no finding is violated.
    pub fn admits_homeomorphic_encoder(&self) -> bool {
        self.findings().iter().all(|(_, f)| f.verdict != Verdict::Violated)
    }
}

const WITNESS_SAMPLES: usize = 256;

fn section_witness(kind: HeadKind) -> Option<Witness> {
    let pipeline = HeadPipeline::new(kind);
    let axis = normalize([1.0, 2.0, 3.0]).ok()?;
    let encode = |n: usize| {
        let path = make_rotation_loop(axis, TAU, n).ok()?;
        let latent = encode_path(|x| Ok(x.to_vec()), &path, |r| pipeline.section(r), LatentMetric::Euclidean).ok()?;
        Some((path, latent))
    };
    let (path, latent) = encode(WITNESS_SAMPLES)?;
    let (_, fine) = encode(4 * WITNESS_SAMPLES)?;
    let verdict = loop_closure_test(&latent, 0.1);
    let fine_jump = fine.max_jump().1;
    let round_trip = path
        .points()
        .iter()
        .map(|r| pipeline.forward(&pipeline.section(r)).map_or(f64::INFINITY, |b| geodesic_distance(r, &b)))
        .fold(0.0, f64::max);
    Some(Witness {
        description: format!("{kind} section along a full turn about (1,2,3)/√14"),
        loop_axis: Vec3::from_array(*axis.as_array()),
        n_samples: WITNESS_SAMPLES,
        loop_holonomy: quaternion_holonomy(&path).ok()?,
        latent_max_jump: verdict.max_jump,
        latent_jump_location: verdict.jump_location,
        latent_median_jump: verdict.median_jump,
        persistence: if verdict.max_jump > 0.0 { fine_jump / verdict.max_jump } else { 0.0 },
        latent_closed: verdict.is_closed,
        section_round_trip_error: round_trip,
    })
}

/// Verdict table for one head, with a numerical witness from its section.
pub fn check_necessary_conditions(kind: HeadKind) -> ConditionReport {
    use Citation::*;
    let na = Finding::not_applicable;
    let (space, compact, retract, forced, homotopy, embed, sufficient) = match kind {
        HeadKind::Exponential => (
            "R^3",
            false,
            Finding::violated(
                RetractHomotopyInjection,
                "h∘g∘ξ is globally continuous, so it would be a retract of R^n onto SO(3); \
                 π₁(SO(3)) = Z/2 cannot inject into π₁(R^n) = 0",
            ),
            na("intermediate space R^3 is not compact"),
            na("h′ is not forced to be a homeomorphism"),
            na("h′ is not forced to be a homeomorphism"),
            na("no continuous exact section"),
        ),
        HeadKind::Quaternion => (
            "S^3",
            true,
            na("g is discontinuous at the origin, so the encoder is not globally continuous"),
            Finding::satisfied(CompactLatentForcesHomeomorphism, "S^3 is compact"),
            Finding::violated(
                LatentHomotopySubgroup,
                "S^3 is simply connected: Z/2 = π₁(SO(3)) is not a subgroup of π₁(S^3) = 0",
            ),
            na("not needed: the homotopy condition already fails"),
            na("no continuous exact section"),
        ),
        HeadKind::AxisAngle => (
            "S^2 x S^1",
            true,
            na("g is discontinuous where either input vanishes"),
            Finding::satisfied(CompactLatentForcesHomeomorphism, "S^2 x S^1 is compact"),
            na("not needed: the embeddability condition already fails"),
            Finding::violated(EmbeddabilityInLatent, "h′ would embed SO(3) in S^2 x S^1, which is impossible"),
            na("no continuous exact section"),
        ),
        HeadKind::Basis => (
            "S^2 x S^2",
            true,
            na("g is discontinuous where either input vanishes"),
            Finding::satisfied(CompactLatentForcesHomeomorphism, "S^2 x S^2 is compact"),
            na("not needed: the sufficient condition holds"),
            na("not needed: the sufficient condition holds"),
            Finding::satisfied(
                ExactContinuousSection,
                "orthonormal pairs form a closed copy of SO(3) in R^6 and the first two \
                 columns of a rotation are an exact continuous right inverse of h∘g",
            ),
        ),
    };
    ConditionReport {
        kind,
        intermediate_space: space.into(),
        z_compact: compact,
        retract_obstruction: retract,
        h_prime_forced_homeo: forced,
        homotopy_obstruction: homotopy,
        embeddability_obstruction: embed,
        sufficient_condition_met: sufficient,
        witness: section_witness(kind),
    }
}
