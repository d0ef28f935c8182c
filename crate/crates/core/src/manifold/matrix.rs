use super::vector::Vec3;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Dense 3x3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat3(pub [f64; 9]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([0.0; 9]);
    pub const IDENTITY: Mat3 = Mat3([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);

    pub fn from_rows(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> Self {
        Mat3([r0[0], r0[1], r0[2], r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]])
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3([c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Mat3([d[0], 0.0, 0.0, 0.0, d[1], 0.0, 0.0, 0.0, d[2]])
    }

    /// Panics if `s` has fewer than nine elements.
    pub fn from_slice(s: &[f64]) -> Self {
        let mut m = [0.0; 9];
        m.copy_from_slice(&s[..9]);
        Mat3(m)
    }

    pub fn outer(a: Vec3, b: Vec3) -> Self {
        Mat3([a.x * b.x, a.x * b.y, a.x * b.z, a.y * b.x, a.y * b.y, a.y * b.z, a.z * b.x, a.z * b.y, a.z * b.z])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[3 * r + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.0[3 * r + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec3 {
        Vec3::new(self.get(0, c), self.get(1, c), self.get(2, c))
    }

    pub fn row(&self, r: usize) -> Vec3 {
        Vec3::new(self.get(r, 0), self.get(r, 1), self.get(r, 2))
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[4] + self.0[8]
    }

    pub fn det(&self) -> f64 {
        self.row(0).dot(self.row(1).cross(self.row(2)))
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut out = self.0;
        out.iter_mut().for_each(|x| *x *= s);
        Mat3(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self.0;
        out.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        Mat3(out)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        let mut out = self.0;
        out.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        Mat3(out)
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                out[3 * r + c] = (0..3).map(|k| self.get(r, k) * o.get(k, c)).sum();
            }
        }
        Mat3(out)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.mul_vec(v)
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        self.scale(s)
    }
}

/// Element of the Lie algebra so(3): a skew-symmetric 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Skew3(Mat3);

impl Skew3 {
    /// Accepts `m` if `mᵀ = −m` entrywise within the skew tolerance.
    pub fn new(m: Mat3) -> Result<Self> {
        let defect = (m + m.transpose()).max_abs();
        if defect > Tolerances::DEFAULT.skew {
            return Err(Error::InvalidArgument(format!("matrix is not skew-symmetric (defect {defect:e})")));
        }
        Ok(Skew3(m))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat3 {
        self.0
    }
}

/// `hat(v) w = v × w`.
pub fn hat(v: Vec3) -> Skew3 {
    Skew3(Mat3::from_rows([0.0, -v.z, v.y], [v.z, 0.0, -v.x], [-v.y, v.x, 0.0]))
}

/// Inverse of [`hat`]. Reads the lower-triangle entries.
pub fn vee(s: &Skew3) -> Vec3 {
    let m = s.matrix();
    Vec3::new(m.get(2, 1), m.get(0, 2), m.get(1, 0))
}

/// `vee` of the antisymmetric part of an arbitrary matrix.
pub(crate) fn vee_antisymmetric(m: &Mat3) -> Vec3 {
    Vec3::new(0.5 * (m.get(2, 1) - m.get(1, 2)), 0.5 * (m.get(0, 2) - m.get(2, 0)), 0.5 * (m.get(1, 0) - m.get(0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_of_zero_is_zero() {
        assert_eq!(*hat(Vec3::ZERO).matrix(), Mat3::ZERO);
    }

    #[test]
    fn hat_of_ez_matches_entries() {
        let m = *hat(Vec3::Z).matrix();
        // zero-based (0,1) and (1,0)
        let expected = Mat3::from_rows([0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]);
        assert_eq!(m, expected);
        for w in [Vec3::X, Vec3::Y, Vec3::new(0.3, -1.2, 2.5)] {
            let d = m * w - Vec3::Z.cross(w);
            assert!(d.norm() < 1e-15);
        }
    }

    #[test]
    fn hat_is_linear_and_vee_inverts() {
        let a = Vec3::new(0.4, -2.0, 1.1);
        let b = Vec3::new(-3.0, 0.25, 0.7);
        let lhs = *hat(a).matrix() + *hat(b).matrix();
        let rhs = *hat(a + b).matrix();
        assert!((lhs - rhs).max_abs() < 1e-15);
        assert_eq!(vee(&hat(a)), a);
    }

    #[test]
    fn skew_rejects_symmetric() {
        assert!(Skew3::new(Mat3::IDENTITY).is_err());
        assert!(Skew3::new(*hat(Vec3::X).matrix()).is_ok());
    }
}
