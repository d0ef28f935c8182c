//! Candidate encoder tails `h ∘ g` mapping a network output in ℝⁿ to SO(3).
//!
//! Each head splits into a (possibly discontinuous) map `g` from ℝⁿ into an
//! intermediate space and a continuous map `h` from that space onto SO(3):
//!
//! | head          | input | intermediate | h                      |
//! |---------------|-------|--------------|------------------------|
//! | `exponential` | 3     | ℝ³           | Rodrigues exponential  |
//! | `quaternion`  | 4     | S³           | double cover           |
//! | `axis-angle`  | 3 + 2 | S² × S¹      | `exp(θ·u)`             |
//! | `basis`       | 3 + 3 | S² × S²      | Gram-Schmidt frame     |

mod conditions;
mod jacobian;

pub use conditions::{check_necessary_conditions, Citation, ConditionReport, Finding, Verdict, Witness};
pub use jacobian::HeadEvaluation;

use crate::error::{Error, Result};
use crate::manifold::{exp_so3, log_so3, normalize, quat_to_rot, Mat3, Rotation, UnitQuaternion, UnitVector, Vec3};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeadKind {
    Exponential,
    Quaternion,
    AxisAngle,
    Basis,
}

impl HeadKind {
    pub const ALL: [HeadKind; 4] = [HeadKind::Exponential, HeadKind::Quaternion, HeadKind::AxisAngle, HeadKind::Basis];

    pub fn name(self) -> &'static str {
        match self {
            HeadKind::Exponential => "exponential",
            HeadKind::Quaternion => "quaternion",
            HeadKind::AxisAngle => "axis-angle",
            HeadKind::Basis => "basis",
        }
    }

    /// Width of the network output consumed by this head.
    pub fn input_dim(self) -> usize {
        match self {
            HeadKind::Exponential => 3,
            HeadKind::Quaternion => 4,
            HeadKind::AxisAngle => 5,
            HeadKind::Basis => 6,
        }
    }

    pub fn pipeline(self) -> HeadPipeline {
        HeadPipeline::new(self)
    }
}

impl fmt::Display for HeadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeadKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HeadKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown head '{s}' (expected exponential, quaternion, axis-angle or basis)"
            ))
        })
    }
}

/// A point of the intermediate space 𝒵 between `g` and `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum Intermediate {
    Tangent { omega: Vec3 },
    Sphere3 { q: UnitQuaternion },
    AxisAngle { axis: UnitVector<3>, angle: UnitVector<2> },
    Frame { first: UnitVector<3>, second: UnitVector<3> },
}

/// The `(g, h)` tail of an encoder for one head kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadPipeline {
    kind: HeadKind,
}

impl HeadPipeline {
    pub fn new(kind: HeadKind) -> Self {
        Self { kind }
    }

    pub fn kind(&self) -> HeadKind {
        self.kind
    }

    pub fn input_dim(&self) -> usize {
        self.kind.input_dim()
    }

    fn check_dim(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: y.len() });
        }
        Ok(())
    }

    /// The normalising stage; the identity for the exponential head.
    pub fn g(&self, y: &[f64]) -> Result<Intermediate> {
        self.check_dim(y)?;
        Ok(match self.kind {
            HeadKind::Exponential => Intermediate::Tangent { omega: Vec3::from_slice(y) },
            HeadKind::Quaternion => Intermediate::Sphere3 { q: UnitQuaternion::from_vector([y[0], y[1], y[2], y[3]])? },
            HeadKind::AxisAngle => {
                Intermediate::AxisAngle { axis: normalize([y[0], y[1], y[2]])?, angle: normalize([y[3], y[4]])? }
            }
            HeadKind::Basis => {
                Intermediate::Frame { first: normalize([y[0], y[1], y[2]])?, second: normalize([y[3], y[4], y[5]])? }
            }
        })
    }

    /// The continuous stage onto SO(3).
    pub fn h(&self, z: &Intermediate) -> Result<Rotation> {
        match (self.kind, z) {
            (HeadKind::Exponential, Intermediate::Tangent { omega }) => Ok(exp_so3(*omega)),
            (HeadKind::Quaternion, Intermediate::Sphere3 { q }) => Ok(quat_to_rot(q)),
            (HeadKind::AxisAngle, Intermediate::AxisAngle { axis, angle }) => {
                let theta = circle_to_angle(angle.as_array()[0], angle.as_array()[1]);
                Ok(exp_so3(Vec3::from_array(*axis.as_array()) * theta))
            }
            (HeadKind::Basis, Intermediate::Frame { first, second }) => {
                gram_schmidt_frame(Vec3::from_array(*first.as_array()), Vec3::from_array(*second.as_array()))
            }
            _ => Err(Error::InvalidArgument(format!("intermediate point does not belong to the {} head", self.kind))),
        }
    }

    /// `h(g(y))`.
    pub fn forward(&self, y: &[f64]) -> Result<Rotation> {
        self.h(&self.g(y)?)
    }

    /// A right inverse of `h ∘ g`: an input that the head maps to `r`.
    ///
    /// Only the basis section is continuous on all of SO(3); the others jump
    /// on a measure-zero set (angle π for the exponential and axis-angle
    /// heads, the `w = 0` equator for the quaternion head).
    pub fn section(&self, r: &Rotation) -> Vec<f64> {
        match self.kind {
            HeadKind::Exponential => log_so3(r).to_array().to_vec(),
            HeadKind::Quaternion => {
                let q = UnitQuaternion::from_rotation(r);
                let q = if q.w() < 0.0 { -q } else { q };
                q.to_array().to_vec()
            }
            HeadKind::AxisAngle => {
                let (axis, angle) = axis_angle_section(r);
                let mut v = axis.to_array().to_vec();
                v.extend_from_slice(&angle);
                v
            }
            HeadKind::Basis => {
                let (u, v) = basis_section(r);
                let mut out = u.to_array().to_vec();
                out.extend_from_slice(&v.to_array());
                out
            }
        }
    }
}

/// Exponential head: `h = exp`, `g = id`.
pub fn head_exponential(y: Vec3) -> Rotation {
    exp_so3(y)
}

/// Quaternion head: normalise onto S³, then the double cover.
pub fn head_quaternion(y: [f64; 4]) -> Result<Rotation> {
    Ok(quat_to_rot(&UnitQuaternion::from_vector(y)?))
}

/// Angle encoded by a point `(v₁, v₂)` of S¹ read as the direction of the
/// Rodrigues coefficient pair `(sin θ, 1 − cos θ)`.
///
/// That direction is `(cos θ/2, sin θ/2)`, so θ = 2·atan2(v₂, v₁). The map is
/// continuous on the whole circle because `exp(±2π·u) = I`.
pub fn circle_to_angle(v1: f64, v2: f64) -> f64 {
    2.0 * v2.atan2(v1)
}

/// Inverse of [`circle_to_angle`] on `θ ∈ (−2π, 2π]`.
pub fn angle_to_circle(theta: f64) -> [f64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [c, s]
}

/// Axis-angle head: `(x, y) ↦ exp(θ·x/‖x‖)` with θ from the direction of `y`.
pub fn head_axis_angle(x: Vec3, y: [f64; 2]) -> Result<Rotation> {
    let u = normalize(x.to_array())?;
    let v = normalize(y)?;
    let theta = circle_to_angle(v.as_array()[0], v.as_array()[1]);
    Ok(exp_so3(Vec3::from_array(*u.as_array()) * theta))
}

/// The axis-angle formula `I + v₁·[u]ₓ + v₂·[u]ₓ²` applied verbatim with
/// `(v₁, v₂)` on the unit circle. Generally not orthogonal, so it returns a
/// bare matrix.
pub fn head_axis_angle_literal(x: Vec3, y: [f64; 2]) -> Result<Mat3> {
    let u = Vec3::from_array(*normalize(x.to_array())?.as_array());
    let v = normalize(y)?;
    let k = *crate::manifold::hat(u).matrix();
    Ok(Mat3::IDENTITY + k * v.as_array()[0] + (k * k) * v.as_array()[1])
}

/// Axis on S² and the angle's circle point, with θ ∈ [0, π].
pub fn axis_angle_section(r: &Rotation) -> (Vec3, [f64; 2]) {
    let w = log_so3(r);
    let theta = w.norm();
    let axis = if theta > 0.0 { w * (1.0 / theta) } else { Vec3::Z };
    (axis, angle_to_circle(theta))
}

/// Gram-Schmidt frame with columns `(w₁, w₂, w₁ × w₂)`.
fn gram_schmidt_frame(u: Vec3, v: Vec3) -> Result<Rotation> {
    let w2p = v - u * u.dot(v);
    let n = w2p.norm();
    if !(n > Tolerances::DEFAULT.degenerate_frame) {
        return Err(Error::DegenerateFrame { norm: n });
    }
    let w2 = Vec3::new(w2p.x / n, w2p.y / n, w2p.z / n);
    let w3 = u.cross(w2);
    Ok(Rotation::from_matrix_unchecked(Mat3::from_cols(u, w2, w3)))
}

/// Basis head: normalise both inputs, orthogonalise the second against the
/// first, complete with the cross product.
pub fn head_basis(x: Vec3, y: Vec3) -> Result<Rotation> {
    let u = Vec3::from_array(*normalize(x.to_array())?.as_array());
    let v = Vec3::from_array(*normalize(y.to_array())?.as_array());
    gram_schmidt_frame(u, v)
}

/// First two columns of `r`: an exact, continuous right inverse of the basis head.
pub fn basis_section(r: &Rotation) -> (Vec3, Vec3) {
    (r.col(0), r.col(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{geodesic_distance, orthogonality_defect, sample_uniform_rotation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: &Rotation, b: &Rotation, tol: f64) -> bool {
        (*a.matrix() - *b.matrix()).max_abs() < tol
    }

    #[test]
    fn names_round_trip() {
        for k in HeadKind::ALL {
            assert_eq!(k.name().parse::<HeadKind>().unwrap(), k);
        }
        assert!("rodrigues".parse::<HeadKind>().is_err());
    }

    #[test]
    fn exponential_examples() {
        assert_eq!(head_exponential(Vec3::ZERO), Rotation::IDENTITY);
        let r = head_exponential(Vec3::new(0.0, 0.0, FRAC_PI_2));
        let expected = Mat3::from_rows([0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((*r.matrix() - expected).max_abs() < 1e-15);
    }

    #[test]
    fn exponential_is_root_two_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0_f64;
        for _ in 0..2000 {
            let y = crate::manifold::sample_in_ball(&mut rng, 6.0);
            let d = crate::manifold::sample_unit_vector3(&mut rng) * 1e-5;
            let jump = (*head_exponential(y + d).matrix() - *head_exponential(y).matrix()).frobenius_norm();
            worst = worst.max(jump / d.norm());
        }
        assert!(worst <= 2f64.sqrt() * (1.0 + 1e-4), "slope {worst}");
    }

    #[test]
    fn quaternion_examples() {
        assert!(close(&head_quaternion([5.0, 0.0, 0.0, 0.0]).unwrap(), &Rotation::IDENTITY, 1e-15));
        let y = [0.3, -1.2, 0.4, 2.0];
        let r = head_quaternion(y).unwrap();
        assert!(close(&r, &head_quaternion(y.map(|c| 3.0 * c)).unwrap(), 1e-15));
        assert_eq!(r, head_quaternion(y.map(|c| -c)).unwrap());
        assert!(matches!(head_quaternion([0.0; 4]), Err(Error::OriginUndefined { .. })));
    }

    #[test]
    fn axis_angle_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let x = crate::manifold::sample_unit_vector3(&mut rng) * rng.random_range(0.1..5.0);
            let r = head_axis_angle(x, angle_to_circle(0.0)).unwrap();
            assert!(close(&r, &Rotation::IDENTITY, 1e-15));
        }
        let r = head_axis_angle(Vec3::Z, angle_to_circle(FRAC_PI_2)).unwrap();
        assert!(close(&r, &exp_so3(Vec3::new(0.0, 0.0, FRAC_PI_2)), 1e-15));
        assert!(head_axis_angle(Vec3::ZERO, [1.0, 0.0]).is_err());
        assert!(head_axis_angle(Vec3::X, [0.0, 0.0]).is_err());
    }

    #[test]
    fn axis_angle_literal_leaves_so3() {
        let u = Vec3::new(0.0, 0.0, 1.0);
        let m = head_axis_angle_literal(u, [1.0, 0.0]).unwrap();
        // R = I + [u]ₓ, RᵀR = I − [u]ₓ² = diag(2, 2, 1): defect ‖diag(1,1,0)‖_F = √2.
        let k = *crate::manifold::hat(u).matrix();
        assert!((m - (Mat3::IDENTITY + k)).max_abs() < 1e-15);
        let defect = orthogonality_defect(&m);
        assert!((defect - 2f64.sqrt()).abs() < 1e-12);
        assert!(defect > 0.5);
    }

    #[test]
    fn basis_examples() {
        assert!(close(&head_basis(Vec3::X, Vec3::Y).unwrap(), &Rotation::IDENTITY, 1e-15));
        let r = head_basis(Vec3::Y, Vec3::Z).unwrap();
        let expected = Mat3::from_cols(Vec3::Y, Vec3::Z, Vec3::X);
        assert!((*r.matrix() - expected).max_abs() < 1e-15);
        assert!(matches!(head_basis(Vec3::X, Vec3::new(2.0, 0.0, 0.0)), Err(Error::DegenerateFrame { .. })));
    }

    #[test]
    fn basis_section_examples() {
        assert_eq!(basis_section(&Rotation::IDENTITY), (Vec3::X, Vec3::Y));
        let r = exp_so3(Vec3::new(0.0, 0.0, FRAC_PI_2));
        let (u, v) = basis_section(&r);
        assert!((u - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((v - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let r = sample_uniform_rotation(&mut rng);
            let (u, v) = basis_section(&r);
            assert!(close(&head_basis(u, v).unwrap(), &r, 1e-10));
        }
    }

    #[test]
    fn every_section_is_a_right_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for kind in HeadKind::ALL {
            let p = kind.pipeline();
            for _ in 0..500 {
                let r = sample_uniform_rotation(&mut rng);
                let back = p.forward(&p.section(&r)).unwrap();
                assert!(geodesic_distance(&r, &back) < 1e-9, "{kind}");
            }
            let half_turn = exp_so3(Vec3::new(PI, 0.0, 0.0));
            let back = p.forward(&p.section(&half_turn)).unwrap();
            assert!(geodesic_distance(&half_turn, &back) < 1e-9, "{kind}");
        }
    }

    #[test]
    fn pipeline_rejects_wrong_dimension() {
        let p = HeadKind::Basis.pipeline();
        assert!(matches!(p.forward(&[1.0, 0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pipeline_intermediate_matches_kind() {
        let p = HeadKind::Quaternion.pipeline();
        let z = HeadKind::Basis.pipeline().g(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(p.h(&z).is_err());
    }
}
