use crate::report::LoopDiagnostic;
use homeo_core::manifold::{normalize, Mat3};
use homeo_core::topology::{encode_path, loop_closure_test, make_rotation_loop, quaternion_holonomy, LatentMetric};
use homeo_core::{HeadKind, Result, Rotation, Vec3};
use std::f64::consts::TAU;

/// Full-turn loops about the coordinate axes, pushed through the head's
/// natural section and checked for closure at `n_samples` and `4·n_samples`.
pub fn section_loops(kind: HeadKind, n_samples: usize, threshold: f64) -> Result<Vec<LoopDiagnostic>> {
    let pipeline = kind.pipeline();
    let encoder = |x: &[f64]| Ok(pipeline.section(&Rotation::new(Mat3::from_slice(x))?));
    let flatten = |r: &Rotation| r.to_flat().to_vec();
    let n_samples = n_samples.max(16);
    [("e_x", Vec3::X), ("e_y", Vec3::Y), ("e_z", Vec3::Z)]
        .into_iter()
        .map(|(label, axis)| {
            let unit = normalize(axis.to_array())?;
            let path = make_rotation_loop(unit, TAU, n_samples)?;
            let fine = make_rotation_loop(unit, TAU, 4 * n_samples)?;
            let latent = encode_path(encoder, &path, flatten, LatentMetric::Euclidean)?;
            let fine_latent = encode_path(encoder, &fine, flatten, LatentMetric::Euclidean)?;
            let section = loop_closure_test(&latent, threshold);
            let refined = loop_closure_test(&fine_latent, threshold).max_jump;
            Ok(LoopDiagnostic {
                label: format!("canonical-{label}"),
                head: kind,
                axis,
                n_samples,
                loop_holonomy: quaternion_holonomy(&path)?,
                persistence: if section.max_jump > 0.0 { refined / section.max_jump } else { 0.0 },
                refined_max_jump: refined,
                section,
            })
        })
        .collect()
}
