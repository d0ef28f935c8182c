use super::holonomy::Holonomy;
use super::path::ManifoldPath;
use crate::error::{Error, Result};
use crate::manifold::{euclidean_norm, geodesic_distance, Mat3, Rotation};
use serde::{Deserialize, Serialize};

/// How consecutive latent points are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatentMetric {
    Euclidean,
    /// Latent points are row-major 3x3 rotations; distance is the geodesic angle.
    Geodesic,
}

impl LatentMetric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            LatentMetric::Euclidean => {
                let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                euclidean_norm(&d)
            }
            LatentMetric::Geodesic => {
                let ra = Rotation::from_matrix_unchecked(Mat3::from_slice(a));
                let rb = Rotation::from_matrix_unchecked(Mat3::from_slice(b));
                geodesic_distance(&ra, &rb)
            }
        }
    }
}

/// Image of a [`ManifoldPath`] under an encoder stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentPath {
    pub points: Vec<Vec<f64>>,
    /// `jump_profile[k]` is the distance between points `k` and `k + 1`.
    pub jump_profile: Vec<f64>,
    pub metric: LatentMetric,
}

impl LatentPath {
    pub fn from_points(points: Vec<Vec<f64>>, metric: LatentMetric) -> Self {
        let jump_profile = points.windows(2).map(|w| metric.distance(&w[0], &w[1])).collect();
        Self { points, jump_profile, metric }
    }

    pub fn max_jump(&self) -> (usize, f64) {
        self.jump_profile
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0), |best, (i, j)| if j > best.1 { (i, j) } else { best })
    }

    pub fn median_jump(&self) -> f64 {
        median(&self.jump_profile)
    }

    pub fn endpoint_gap(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => self.metric.distance(a, b),
            _ => 0.0,
        }
    }
}

pub(crate) fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len().is_multiple_of(2) {
        0.5 * (s[m - 1] + s[m])
    } else {
        s[m]
    }
}

/// Applies `embedding` then `encoder` pointwise along `path`.
pub fn encode_path<E, F>(encoder: E, path: &ManifoldPath, embedding: F, metric: LatentMetric) -> Result<LatentPath>
where
    E: Fn(&[f64]) -> Result<Vec<f64>>,
    F: Fn(&Rotation) -> Vec<f64>,
{
    let points = path
        .points()
        .iter()
        .enumerate()
        .map(|(index, r)| encoder(&embedding(r)).map_err(|e| Error::EncoderFailed { index, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatentPath::from_points(points, metric))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticVerdict {
    pub max_jump: f64,
    pub jump_location: usize,
    pub median_jump: f64,
    pub endpoint_gap: f64,
    pub is_closed: bool,
    pub holonomy: Option<Holonomy>,
}

/// Summarises a latent loop. A homeomorphic encoder yields a closed latent
/// loop whose `max_jump` shrinks as the source loop is sampled more finely.
pub fn loop_closure_test(latent: &LatentPath, jump_threshold: f64) -> DiagnosticVerdict {
    let (jump_location, max_jump) = latent.max_jump();
    let endpoint_gap = latent.endpoint_gap();
    DiagnosticVerdict {
        max_jump,
        jump_location,
        median_jump: latent.median_jump(),
        endpoint_gap,
        is_closed: endpoint_gap < jump_threshold,
        holonomy: None,
    }
}
