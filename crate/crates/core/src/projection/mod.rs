//! Distance to an embedded manifold and its metric projection, for the
//! spheres Sⁿ ⊂ ℝⁿ⁺¹ and SO(3) ⊂ ℝ⁹, plus probes of the projection's
//! regularity (1-Lipschitz distance, gradient formula, reconstruction identity).

mod probes;
mod svd;

pub use probes::{distance_gradient_check, lipschitz_probe, reconstruction_identity};
pub use svd::{svd3, symmetric_eigen, Svd3};

use crate::error::{Error, Result};
use crate::manifold::{euclidean_norm, Mat3};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ManifoldKind {
    Sphere { n: usize },
    So3,
}

/// A closed submanifold of Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedManifold {
    pub kind: ManifoldKind,
    pub ambient_dim: usize,
    /// Distance below which an ambient point counts as a member.
    pub tolerance: f64,
}

impl EmbeddedManifold {
    pub fn sphere(n: usize) -> Self {
        Self { kind: ManifoldKind::Sphere { n }, ambient_dim: n + 1, tolerance: 1e-9 }
    }

    pub fn so3() -> Self {
        Self { kind: ManifoldKind::So3, ambient_dim: 9, tolerance: 1e-9 }
    }

    pub fn name(&self) -> String {
        match self.kind {
            ManifoldKind::Sphere { n } => format!("sphere({n})"),
            ManifoldKind::So3 => "so3".into(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        distance_to(self, x) <= self.tolerance
    }

    /// Distance from `x` to the set where the projection is not unique.
    pub(crate) fn singular_margin(&self, x: &[f64]) -> f64 {
        match self.kind {
            ManifoldKind::Sphere { .. } => euclidean_norm(x),
            ManifoldKind::So3 => {
                let s = svd3(&Mat3::from_slice(x)).sigma;
                s[1] + s[2]
            }
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, actual: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("ambient point has non-finite entries".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub point: Vec<f64>,
    pub distance: f64,
    /// False on (or within the uniqueness margin of) the set where several
    /// points of the manifold are equally close; `point` is then one of them.
    pub unique: bool,
}

/// Euclidean distance from `x` to the manifold.
///
/// # Panics
/// If `x` does not live in the ambient space of `m`.
pub fn distance_to(m: &EmbeddedManifold, x: &[f64]) -> f64 {
    assert_eq!(x.len(), m.ambient_dim, "ambient dimension mismatch");
    match m.kind {
        ManifoldKind::Sphere { .. } => (euclidean_norm(x) - 1.0).abs(),
        ManifoldKind::So3 => {
            let s = svd3(&Mat3::from_slice(x)).sigma;
            s.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>().sqrt()
        }
    }
}

/// Nearest point of the manifold. On the non-uniqueness set a single
/// minimiser is returned with `unique = false`.
pub fn project(m: &EmbeddedManifold, x: &[f64]) -> Result<ProjectionResult> {
    m.check(x)?;
    let margin = Tolerances::DEFAULT.projection_unique;
    let (point, unique) = match m.kind {
        ManifoldKind::Sphere { .. } => {
            let norm = euclidean_norm(x);
            if norm <= margin {
                let mut p = vec![0.0; x.len()];
                p[0] = 1.0;
                (p, false)
            } else {
                (x.iter().map(|v| v / norm).collect(), true)
            }
        }
        ManifoldKind::So3 => {
            let svd = svd3(&Mat3::from_slice(x));
            let r = svd.u * svd.v.transpose();
            (r.0.to_vec(), svd.sigma[1] + svd.sigma[2] > margin)
        }
    };
    let diff: Vec<f64> = x.iter().zip(&point).map(|(a, b)| a - b).collect();
    Ok(ProjectionResult { distance: euclidean_norm(&diff), point, unique })
}

/// [`project`], refusing points on the non-uniqueness set.
pub fn project_unique(m: &EmbeddedManifold, x: &[f64]) -> Result<ProjectionResult> {
    let p = project(m, x)?;
    if p.unique {
        Ok(p)
    } else {
        Err(Error::NonUnique)
    }
}
