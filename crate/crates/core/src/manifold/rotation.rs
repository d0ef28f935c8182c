use super::matrix::{hat, vee_antisymmetric, Mat3};
use super::vector::Vec3;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// An element of SO(3), stored as its row-major matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat3", into = "Mat3")]
pub struct Rotation(Mat3);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation(Mat3::IDENTITY);

    /// Validates orthonormality and orientation against [`Tolerances::rotation`].
    pub fn new(m: Mat3) -> Result<Self> {
        let orthogonality = orthogonality_defect(&m);
        let det = m.det();
        let tol = Tolerances::DEFAULT.rotation;
        if !m.is_finite() || orthogonality > tol || (det - 1.0).abs() > tol {
            return Err(Error::NotARotation { orthogonality, det });
        }
        Ok(Rotation(m))
    }

    /// Caller guarantees `m ∈ SO(3)` up to round-off.
    pub(crate) fn from_matrix_unchecked(m: Mat3) -> Self {
        Rotation(m)
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Result<Self> {
        Self::new(Mat3::from_cols(c0, c1, c2))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn col(&self, c: usize) -> Vec3 {
        self.0.col(c)
    }

    pub fn inverse(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    pub fn angle(&self) -> f64 {
        rotation_angle(&self.0)
    }

    /// The nine row-major entries, the `flatten9` embedding into ℝ⁹.
    pub fn to_flat(&self) -> [f64; 9] {
        self.0 .0
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.0.mul_vec(v)
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, o: Rotation) -> Rotation {
        Rotation(self.0 * o.0)
    }
}

impl TryFrom<Mat3> for Rotation {
    type Error = Error;
    fn try_from(m: Mat3) -> Result<Self> {
        Rotation::new(m)
    }
}

impl From<Rotation> for Mat3 {
    fn from(r: Rotation) -> Mat3 {
        r.0
    }
}

/// ‖RᵀR − I‖_F.
pub fn orthogonality_defect(m: &Mat3) -> f64 {
    (m.transpose() * *m - Mat3::IDENTITY).frobenius_norm()
}

/// Rodrigues coefficients `(sin θ / θ, (1 − cos θ) / θ²)`.
pub(crate) fn rodrigues_coefficients(theta: f64) -> (f64, f64) {
    if theta < Tolerances::DEFAULT.small_angle {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    }
}

/// Closed-form matrix exponential of `hat(ω)`.
pub fn exp_so3(omega: Vec3) -> Rotation {
    let theta = omega.norm();
    let (a, b) = rodrigues_coefficients(theta);
    let k = *hat(omega).matrix();
    Rotation(Mat3::IDENTITY + k * a + (k * k) * b)
}

fn rotation_angle(m: &Mat3) -> f64 {
    let cos = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sin = vee_antisymmetric(m).norm();
    sin.atan2(cos)
}

/// Principal logarithm, `‖log R‖ ∈ [0, π]`.
///
/// Inside the band `tr R ≤ −1 + near_pi_trace` the axis is read from the
/// largest diagonal entry of `(R + Rᵀ)/2 − cos θ·I`, with that axis component
/// made positive. The sign is then aligned with the antisymmetric part of `R`
/// whenever that part is resolvable, so exactly at θ = π the diagonal
/// convention alone decides.
pub fn log_so3(r: &Rotation) -> Vec3 {
    let m = r.matrix();
    let tr = m.trace();
    let s = vee_antisymmetric(m);
    let sin = s.norm();
    let cos = ((tr - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = sin.atan2(cos);

    if tr > -1.0 + Tolerances::DEFAULT.near_pi_trace {
        if theta < Tolerances::DEFAULT.small_angle {
            return s * (1.0 + theta * theta / 6.0);
        }
        return s * (theta / sin);
    }

    theta * near_pi_axis(m, cos, s)
}

/// Like [`log_so3`] but refuses rotations in the near-π band where the
/// logarithm is not unique.
pub fn try_log_so3(r: &Rotation) -> Result<Vec3> {
    let tr = r.matrix().trace();
    if tr <= -1.0 + Tolerances::DEFAULT.near_pi_trace {
        return Err(Error::AngleNearPi { trace: tr });
    }
    Ok(log_so3(r))
}

fn near_pi_axis(m: &Mat3, cos: f64, skew: Vec3) -> Vec3 {
    let sym = (*m + m.transpose()) * 0.5 - Mat3::IDENTITY * cos;
    let diag = [sym.get(0, 0), sym.get(1, 1), sym.get(2, 2)];
    let k = (0..3).max_by(|&i, &j| diag[i].total_cmp(&diag[j])).unwrap_or(0);
    let mut axis = sym.col(k);
    let n = axis.norm();
    if n == 0.0 {
        return Vec3::Z;
    }
    axis = axis * (1.0 / n);
    if axis[k] < 0.0 {
        axis = -axis;
    }
    let alignment = axis.dot(skew);
    if alignment.abs() > 1e3 * f64::EPSILON && alignment < 0.0 {
        axis = -axis;
    }
    axis
}

/// Length of the shortest geodesic between two rotations, in radians.
pub fn geodesic_distance(r1: &Rotation, r2: &Rotation) -> f64 {
    let rel = r1.matrix().transpose() * *r2.matrix();
    rotation_angle(&rel)
}
