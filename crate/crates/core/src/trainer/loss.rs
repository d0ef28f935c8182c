use super::mlp::{Gradients, MlpModel};
use crate::error::{Error, Result};
use crate::heads::HeadKind;
use crate::manifold::Rotation;
use ndarray::{Array2, ArrayView2};

#[derive(Debug, Clone, PartialEq)]
pub struct LossAndGrad {
    /// Mean of `‖vec(head(ξ(x))) − vec(R)‖²` over the elements used.
    pub loss: f64,
    pub gradients: Gradients,
    pub used: usize,
    /// Elements whose head input fell on the singular guard.
    pub skipped: usize,
}

/// Reconstruction loss of a batch through `head` and its gradient with
/// respect to every model parameter.
///
/// Elements whose head evaluation returns `NearSingularHead` are dropped
/// from the mean. If every element is dropped the error is returned.
pub fn loss_and_grad(
    model: &MlpModel,
    inputs: ArrayView2<'_, f64>,
    targets: &[Rotation],
    head: HeadKind,
) -> Result<LossAndGrad> {
    if targets.is_empty() || inputs.nrows() != targets.len() {
        return Err(Error::DimensionMismatch { expected: targets.len().max(1), actual: inputs.nrows() });
    }
    let pipeline = head.pipeline();
    if model.output_dim() != pipeline.input_dim() {
        return Err(Error::DimensionMismatch { expected: pipeline.input_dim(), actual: model.output_dim() });
    }
    let cache = model.forward_batch(inputs)?;
    let outputs = cache.output();
    let mut d_output = Array2::zeros(outputs.raw_dim());
    let mut total = 0.0;
    let mut used = 0;
    let mut last_singular = None;
    let mut row_grad = vec![0.0; pipeline.input_dim()];

    for (i, target) in targets.iter().enumerate() {
        let y = outputs.row(i).to_vec();
        let eval = match pipeline.evaluate(&y) {
            Ok(e) => e,
            Err(err @ Error::NearSingularHead { .. }) => {
                last_singular = Some(err);
                continue;
            }
            Err(err) => return Err(err),
        };
        let got = eval.rotation.to_flat();
        let want = target.to_flat();
        let mut residual = [0.0; 9];
        for k in 0..9 {
            residual[k] = got[k] - want[k];
            total += residual[k] * residual[k];
            residual[k] *= 2.0;
        }
        eval.pullback(&residual, &mut row_grad);
        d_output.row_mut(i).iter_mut().zip(&row_grad).for_each(|(d, g)| *d = *g);
        used += 1;
    }

    if used == 0 {
        return Err(last_singular.expect("nonempty batch with no used element"));
    }
    let scale = 1.0 / used as f64;
    d_output.mapv_inplace(|v| v * scale);
    Ok(LossAndGrad {
        loss: total * scale,
        gradients: model.backward(&cache, d_output),
        used,
        skipped: targets.len() - used,
    })
}
