use crate::error::{Error, Result};
use crate::manifold::{exp_so3, geodesic_distance, Rotation, UnitVector, Vec3};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Rotations sampled in order along a continuous curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldPath {
    points: Vec<Rotation>,
    /// Curve parameter in `[0, 1]` for each point.
    params: Vec<f64>,
    is_loop: bool,
    max_step: f64,
}

impl ManifoldPath {
    /// Uniform parameters are assigned. A loop must end where it starts.
    pub fn new(points: Vec<Rotation>, is_loop: bool) -> Result<Self> {
        let n = points.len();
        let params = (0..n).map(|k| k as f64 / (n.max(2) - 1) as f64).collect();
        Self::with_params(points, params, is_loop)
    }

    pub fn with_params(points: Vec<Rotation>, params: Vec<f64>, is_loop: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath(format!("need at least 2 points, got {}", points.len())));
        }
        if params.len() != points.len() {
            return Err(Error::InvalidPath("parameter count differs from point count".into()));
        }
        if is_loop {
            let gap = (*points[0].matrix() - *points[points.len() - 1].matrix()).max_abs();
            if gap > Tolerances::DEFAULT.loop_closure {
                return Err(Error::InvalidPath(format!("loop does not close (gap {gap:e})")));
            }
        }
        let max_step = points.windows(2).map(|w| geodesic_distance(&w[0], &w[1])).fold(0.0, f64::max);
        Ok(Self { points, params, is_loop, max_step })
    }

    /// Samples `f` at `t_k = k/n`, `k = 0..=n`.
    pub fn from_fn(n_steps: usize, is_loop: bool, f: impl Fn(f64) -> Rotation) -> Result<Self> {
        let params: Vec<f64> = (0..=n_steps).map(|k| k as f64 / n_steps as f64).collect();
        let mut points: Vec<Rotation> = params.iter().map(|&t| f(t)).collect();
        if is_loop {
            // Pin the endpoint so round-off in f(1) does not open the loop.
            points[n_steps] = points[0];
        }
        Self::with_params(points, params, is_loop)
    }

    /// The constant loop at `r`.
    pub fn constant(r: Rotation, n_steps: usize) -> Result<Self> {
        Self::from_fn(n_steps, true, |_| r)
    }

    pub fn points(&self) -> &[Rotation] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    /// `Q·R·Qᵀ` applied to every point.
    pub fn conjugate(&self, q: &Rotation) -> Result<Self> {
        let points = self.points.iter().map(|r| *q * *r * q.inverse()).collect();
        Self::with_params(points, self.params.clone(), self.is_loop)
    }

    /// Left translation `Q·R`.
    pub fn translate(&self, q: &Rotation) -> Result<Self> {
        let points = self.points.iter().map(|r| *q * *r).collect();
        Self::with_params(points, self.params.clone(), self.is_loop)
    }

    /// Traverses `self` then `other`; both must be loops at the same base point.
    pub fn concat(&self, other: &ManifoldPath) -> Result<Self> {
        if !(self.is_loop && other.is_loop) {
            return Err(Error::InvalidPath("only loops can be concatenated".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        let n = points.len();
        let params = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        Self::with_params(points, params, true)
    }
}

fn is_multiple_of_full_turn(angle: f64) -> bool {
    let turns = angle / TAU;
    (turns - turns.round()).abs() < 1e-12
}

/// `points[k] = exp((k/n)·total_angle·axis)`, `k = 0..=n`.
pub fn make_rotation_loop(axis: UnitVector<3>, total_angle: f64, n_samples: usize) -> Result<ManifoldPath> {
    make_based_rotation_path(Rotation::IDENTITY, axis, total_angle, n_samples)
}

/// The geodesic `base·exp(t·total_angle·axis)` for `t ∈ [0, 1]`.
pub fn make_based_rotation_path(
    base: Rotation,
    axis: UnitVector<3>,
    total_angle: f64,
    n_samples: usize,
) -> Result<ManifoldPath> {
    if n_samples < 16 {
        return Err(Error::InvalidPath(format!("need at least 16 samples, got {n_samples}")));
    }
    let a = Vec3::from_array(*axis.as_array());
    let is_loop = is_multiple_of_full_turn(total_angle);
    ManifoldPath::from_fn(n_samples, is_loop, |t| base * exp_so3(a * (t * total_angle)))
}
