//! Closed-form Jacobians of `vec(h(g(y)))` with respect to the head input.
//!
//! The Jacobian is stored row-major as 9 × `input_dim`: row `i` is the
//! derivative of the `i`-th row-major rotation entry.

use super::{circle_to_angle, HeadKind, HeadPipeline};
use crate::error::{Error, Result};
use crate::manifold::{exp_so3, hat, Mat3, Rotation, UnitQuaternion, Vec3};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct HeadEvaluation {
    pub rotation: Rotation,
    pub jacobian: Vec<f64>,
    pub input_dim: usize,
}

impl HeadEvaluation {
    /// `∂R_i / ∂y_j`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.jacobian[i * self.input_dim + j]
    }

    /// `Jᵀ g` for an upstream gradient `g` over the nine rotation entries.
    pub fn pullback(&self, upstream: &[f64; 9], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, g) in upstream.iter().enumerate() {
            let row = &self.jacobian[i * self.input_dim..(i + 1) * self.input_dim];
            out.iter_mut().zip(row).for_each(|(o, r)| *o += g * r);
        }
    }
}

/// `(I − n nᵀ)/‖x‖` for a 3-vector; errors below `guard`.
fn normalize3_jacobian(x: Vec3, guard: f64) -> Result<(Vec3, Mat3)> {
    let r = x.norm();
    if !(r >= guard) {
        return Err(Error::NearSingularHead { norm: r });
    }
    let n = Vec3::new(x.x / r, x.y / r, x.z / r);
    Ok((n, (Mat3::IDENTITY - Mat3::outer(n, n)) * (1.0 / r)))
}

/// Derivatives of `vec(exp(ω))` along each coordinate axis of ω.
fn exp_jacobian(omega: Vec3) -> [Mat3; 3] {
    let theta = omega.norm();
    let t2 = theta * theta;
    let (a, b, c, d) = if theta < 1e-2 {
        // a'(θ)/θ and b'(θ)/θ by Taylor series to avoid cancellation.
        (
            1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0,
            -1.0 / 12.0 + t2 / 180.0 - t2 * t2 / 6720.0,
        )
    } else {
        let (s, co) = theta.sin_cos();
        (s / theta, (1.0 - co) / t2, (theta * co - s) / (t2 * theta), (theta * s - 2.0 * (1.0 - co)) / (t2 * t2))
    };
    let k = *hat(omega).matrix();
    let k2 = k * k;
    let axes = [Vec3::X, Vec3::Y, Vec3::Z];
    std::array::from_fn(|i| {
        let e = *hat(axes[i]).matrix();
        let wi = omega[i];
        k * (c * wi) + e * a + k2 * (d * wi) + (e * k + k * e) * b
    })
}

/// Partial derivatives of the quaternion-to-matrix polynomial, for w, x, y, z.
fn quat_polynomial_jacobian(q: [f64; 4]) -> [Mat3; 4] {
    let [w, x, y, z] = q;
    let t = 2.0;
    [
        Mat3::from_rows([0.0, -t * z, t * y], [t * z, 0.0, -t * x], [-t * y, t * x, 0.0]),
        Mat3::from_rows([0.0, t * y, t * z], [t * y, -2.0 * t * x, -t * w], [t * z, t * w, -2.0 * t * x]),
        Mat3::from_rows([-2.0 * t * y, t * x, t * w], [t * x, 0.0, t * z], [-t * w, t * z, -2.0 * t * y]),
        Mat3::from_rows([-2.0 * t * z, -t * w, t * x], [t * w, -2.0 * t * z, t * y], [t * x, t * y, 0.0]),
    ]
}

/// Builds the 9 × n Jacobian from one 3x3 matrix derivative per input coordinate.
fn pack(columns: &[Mat3]) -> Vec<f64> {
    let n = columns.len();
    let mut out = vec![0.0; 9 * n];
    for (j, m) in columns.iter().enumerate() {
        for i in 0..9 {
            out[i * n + j] = m.0[i];
        }
    }
    out
}

impl HeadPipeline {
    /// Rotation and Jacobian at `y`. Any norm inside the head below
    /// [`Tolerances::head_singular`] yields [`Error::NearSingularHead`].
    pub fn evaluate(&self, y: &[f64]) -> Result<HeadEvaluation> {
        if y.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: y.len() });
        }
        let guard = Tolerances::DEFAULT.head_singular;
        let (rotation, columns): (Rotation, Vec<Mat3>) = match self.kind() {
            HeadKind::Exponential => {
                let omega = Vec3::from_slice(y);
                (exp_so3(omega), exp_jacobian(omega).to_vec())
            }
            HeadKind::Quaternion => {
                let r = (y.iter().map(|v| v * v).sum::<f64>()).sqrt();
                if !(r >= guard) {
                    return Err(Error::NearSingularHead { norm: r });
                }
                let q = UnitQuaternion::from_vector([y[0], y[1], y[2], y[3]])?;
                let n = q.to_array();
                let dq = quat_polynomial_jacobian(n);
                // d n_k / d y_j = (δ_kj − n_k n_j) / r
                let cols = (0..4)
                    .map(|j| {
                        (0..4).fold(Mat3::ZERO, |acc, k| {
                            let delta = if k == j { 1.0 } else { 0.0 };
                            acc + dq[k] * ((delta - n[k] * n[j]) / r)
                        })
                    })
                    .collect();
                (q.to_rotation(), cols)
            }
            HeadKind::AxisAngle => {
                let (u, du) = normalize3_jacobian(Vec3::from_slice(&y[..3]), guard)?;
                let r2 = y[3] * y[3] + y[4] * y[4];
                if !(r2.sqrt() >= guard) {
                    return Err(Error::NearSingularHead { norm: r2.sqrt() });
                }
                let r = r2.sqrt();
                let theta = circle_to_angle(y[3] / r, y[4] / r);
                let dtheta = [-2.0 * y[4] / r2, 2.0 * y[3] / r2];
                let omega = u * theta;
                let de = exp_jacobian(omega);
                let along = |v: Vec3| de[0] * v.x + de[1] * v.y + de[2] * v.z;
                let mut cols: Vec<Mat3> = (0..3).map(|j| along(du.col(j) * theta)).collect();
                let du_dtheta = along(u);
                cols.extend(dtheta.iter().map(|dt| du_dtheta * *dt));
                (exp_so3(omega), cols)
            }
            HeadKind::Basis => {
                let (u, du_dx) = normalize3_jacobian(Vec3::from_slice(&y[..3]), guard)?;
                let (v, dv_dy) = normalize3_jacobian(Vec3::from_slice(&y[3..6]), guard)?;
                let p = u.dot(v);
                let w2p = v - u * p;
                let (w2, dw2) = normalize3_jacobian(w2p, guard)?;
                let w3 = u.cross(w2);
                let dw2p_du = -(Mat3::outer(u, v) + Mat3::IDENTITY * p);
                let dw2p_dv = Mat3::IDENTITY - Mat3::outer(u, u);
                let hu = *hat(u).matrix();
                let hw2 = *hat(w2).matrix();

                let dw2_dx = dw2 * dw2p_du * du_dx;
                let dw3_dx = -(hw2 * du_dx) + hu * dw2_dx;
                let dw2_dy = dw2 * dw2p_dv * dv_dy;
                let dw3_dy = hu * dw2_dy;

                let column = |c1: Vec3, c2: Vec3, c3: Vec3| Mat3::from_cols(c1, c2, c3);
                let mut cols: Vec<Mat3> = (0..3).map(|j| column(du_dx.col(j), dw2_dx.col(j), dw3_dx.col(j))).collect();
                cols.extend((0..3).map(|j| column(Vec3::ZERO, dw2_dy.col(j), dw3_dy.col(j))));
                (Rotation::from_matrix_unchecked(Mat3::from_cols(u, w2, w3)), cols)
            }
        };
        Ok(HeadEvaluation { rotation, jacobian: pack(&columns), input_dim: self.input_dim() })
    }
}
