use super::matrix::Mat3;
use super::rotation::Rotation;
use super::vector::Vec3;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::ops::Neg;

/// A point on S³ ⊂ ℝ⁴, `w` first (Hamilton convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Accepts components that already have unit norm.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Tolerances::DEFAULT.unit_norm {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self { w, x, y, z })
    }

    /// Projects an arbitrary non-zero 4-vector onto S³.
    pub fn from_vector(v: [f64; 4]) -> Result<Self> {
        let u = super::sphere::normalize(v)?;
        let [w, x, y, z] = *u.as_array();
        Ok(Self { w, x, y, z })
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let a = super::sphere::normalize(axis.to_array())?;
        let (s, c) = (0.5 * angle).sin_cos();
        let [ax, ay, az] = *a.as_array();
        Ok(Self { w: c, x: s * ax, y: s * ay, z: s * az })
    }

    /// One of the two quaternions covering `r`; the sign is unspecified.
    pub fn from_rotation(r: &Rotation) -> Self {
        // Shepperd: pivot on the largest of w², x², y², z².
        let m = r.matrix();
        let t = m.trace();
        let (m00, m11, m22) = (m.get(0, 0), m.get(1, 1), m.get(2, 2));
        let q = if t >= m00 && t >= m11 && t >= m22 {
            let s = 2.0 * (1.0 + t).sqrt();
            [
                0.25 * s,
                (m.get(2, 1) - m.get(1, 2)) / s,
                (m.get(0, 2) - m.get(2, 0)) / s,
                (m.get(1, 0) - m.get(0, 1)) / s,
            ]
        } else if m00 >= m11 && m00 >= m22 {
            let s = 2.0 * (1.0 + m00 - m11 - m22).sqrt();
            [
                (m.get(2, 1) - m.get(1, 2)) / s,
                0.25 * s,
                (m.get(0, 1) + m.get(1, 0)) / s,
                (m.get(0, 2) + m.get(2, 0)) / s,
            ]
        } else if m11 >= m22 {
            let s = 2.0 * (1.0 - m00 + m11 - m22).sqrt();
            [
                (m.get(0, 2) - m.get(2, 0)) / s,
                (m.get(0, 1) + m.get(1, 0)) / s,
                0.25 * s,
                (m.get(1, 2) + m.get(2, 1)) / s,
            ]
        } else {
            let s = 2.0 * (1.0 - m00 - m11 + m22).sqrt();
            [
                (m.get(1, 0) - m.get(0, 1)) / s,
                (m.get(0, 2) + m.get(2, 0)) / s,
                (m.get(1, 2) + m.get(2, 1)) / s,
                0.25 * s,
            ]
        };
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self { w: q[0] / n, x: q[1] / n, y: q[2] / n, z: q[3] / n }
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &UnitQuaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Hamilton product.
    pub fn compose(&self, o: &UnitQuaternion) -> UnitQuaternion {
        let (a, b) = (self, o);
        UnitQuaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }

    pub fn to_rotation(&self) -> Rotation {
        quat_to_rot(self)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

/// The double cover S³ → SO(3). Every entry is a sum of products of pairs of
/// components, so `q` and `−q` give bit-identical matrices.
pub fn quat_to_rot(q: &UnitQuaternion) -> Rotation {
    let UnitQuaternion { w, x, y, z } = *q;
    Rotation::from_matrix_unchecked(Mat3::from_rows(
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::rotation::{exp_so3, geodesic_distance};

    #[test]
    fn identity_quaternion_maps_to_identity() {
        assert_eq!(quat_to_rot(&UnitQuaternion::IDENTITY), Rotation::IDENTITY);
    }

    #[test]
    fn z_rotation_agrees_with_exp() {
        let theta = 0.7_f64;
        let q = UnitQuaternion::new((theta / 2.0).cos(), 0.0, 0.0, (theta / 2.0).sin()).unwrap();
        let r = quat_to_rot(&q);
        let e = exp_so3(Vec3::new(0.0, 0.0, theta));
        assert!((*r.matrix() - *e.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn antipodes_give_identical_matrices() {
        let q = UnitQuaternion::from_vector([0.3, -0.5, 0.7, 0.1]).unwrap();
        assert_eq!(quat_to_rot(&q), quat_to_rot(&-q));
    }

    #[test]
    fn from_rotation_covers_input() {
        for w in [
            Vec3::new(0.1, 0.2, 0.3),
            Vec3::new(3.1, 0.0, 0.0),
            Vec3::new(0.0, -(std::f64::consts::PI - 3e-6), 0.0),
            Vec3::new(0.0, 0.0, std::f64::consts::PI - 3e-6),
            Vec3::new(1.0, 1.0, 1.0),
        ] {
            let r = exp_so3(w);
            let q = UnitQuaternion::from_rotation(&r);
            assert!(geodesic_distance(&r, &quat_to_rot(&q)) < 1e-12);
        }
    }

    #[test]
    fn compose_matches_matrix_product() {
        let a = UnitQuaternion::from_vector([0.2, 0.9, -0.1, 0.4]).unwrap();
        let b = UnitQuaternion::from_vector([-0.7, 0.1, 0.3, 0.5]).unwrap();
        let lhs = quat_to_rot(&a.compose(&b));
        let rhs = quat_to_rot(&a) * quat_to_rot(&b);
        assert!((*lhs.matrix() - *rhs.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn new_rejects_non_unit() {
        assert!(UnitQuaternion::new(1.0, 1.0, 0.0, 0.0).is_err());
    }
}
