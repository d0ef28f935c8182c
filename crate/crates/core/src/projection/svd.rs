//! 3x3 singular value decomposition through a cyclic Jacobi eigensolver on `MᵀM`.

use crate::manifold::{Mat3, Vec3};
use crate::tolerances::Tolerances;

/// `M = U · diag(σ) · Vᵀ` with `U, V ∈ SO(3)` and `σ₁ ≥ σ₂ ≥ |σ₃|`.
///
/// Orientation is absorbed into the sign of `σ₃`, so `det M` has the sign of `σ₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd3 {
    pub u: Mat3,
    pub sigma: [f64; 3],
    pub v: Mat3,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Mat3 {
        self.u * Mat3::diag(self.sigma) * self.v.transpose()
    }
}

/// Eigenvalues (descending) and eigenvectors (columns) of a symmetric matrix.
pub fn symmetric_eigen(a: &Mat3) -> ([f64; 3], Mat3) {
    let tol = Tolerances::DEFAULT;
    let mut a = *a;
    let mut v = Mat3::IDENTITY;
    let scale = a.frobenius_norm();

    for _ in 0..tol.jacobi_max_sweeps {
        let off = (2.0 * (a.get(0, 1).powi(2) + a.get(0, 2).powi(2) + a.get(1, 2).powi(2))).sqrt();
        if off <= tol.jacobi_off_diagonal * scale || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a.get(p, q);
            if apq == 0.0 {
                continue;
            }
            let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut j = Mat3::IDENTITY;
            j.set(p, p, c);
            j.set(q, q, c);
            j.set(p, q, s);
            j.set(q, p, -s);
            a = j.transpose() * a * j;
            // Exact zero keeps later sweeps from re-reading round-off.
            a.set(p, q, 0.0);
            a.set(q, p, 0.0);
            v = v * j;
        }
    }

    let mut order = [0usize, 1, 2];
    let diag = [a.get(0, 0), a.get(1, 1), a.get(2, 2)];
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.map(|i| diag[i]);
    let vecs = Mat3::from_cols(v.col(order[0]), v.col(order[1]), v.col(order[2]));
    (values, vecs)
}

fn any_perpendicular(u: Vec3) -> Vec3 {
    let trial = if u.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let p = trial - u * u.dot(trial);
    p * (1.0 / p.norm())
}

/// Signed SVD with both factors proper rotations.
pub fn svd3(m: &Mat3) -> Svd3 {
    let (_, mut v) = symmetric_eigen(&(m.transpose() * *m));
    if v.det() < 0.0 {
        let c = -v.col(2);
        v = Mat3::from_cols(v.col(0), v.col(1), c);
    }
    let (v1, v2, v3) = (v.col(0), v.col(1), v.col(2));
    let (mv1, mv2, mv3) = (m.mul_vec(v1), m.mul_vec(v2), m.mul_vec(v3));

    let n1 = mv1.norm();
    let u1 = if n1 > f64::MIN_POSITIVE { mv1 * (1.0 / n1) } else { Vec3::X };
    let w = mv2 - u1 * u1.dot(mv2);
    let n2 = w.norm();
    let u2 = if n2 > 1e-300 && n2 > 1e-14 * n1 { w * (1.0 / n2) } else { any_perpendicular(u1) };
    let u3 = u1.cross(u2);

    Svd3 { u: Mat3::from_cols(u1, u2, u3), sigma: [u1.dot(mv1), u2.dot(mv2), u3.dot(mv3)], v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// One-sided (Hestenes) Jacobi SVD working on `M` directly: an
    /// independent route to the singular values.
    fn hestenes_singular_values(m: &Mat3) -> [f64; 3] {
        let mut cols = [m.col(0), m.col(1), m.col(2)];
        for _ in 0..60 {
            let mut rotated = false;
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let alpha = cols[p].norm_squared();
                let beta = cols[q].norm_squared();
                let gamma = cols[p].dot(cols[q]);
                if gamma.abs() <= 1e-17 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (a, b) = (cols[p], cols[q]);
                cols[p] = a * c - b * s;
                cols[q] = a * s + b * c;
            }
            if !rotated {
                break;
            }
        }
        let mut s = cols.map(|c| c.norm());
        s.sort_by(|a, b| b.total_cmp(a));
        if m.det() < 0.0 {
            s[2] = -s[2];
        }
        s
    }

    fn random_matrix(rng: &mut impl Rng) -> Mat3 {
        Mat3(std::array::from_fn(|_| rng.sample(StandardNormal)))
    }

    #[test]
    fn agrees_with_one_sided_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2000 {
            let m = random_matrix(&mut rng);
            let svd = svd3(&m);
            let oracle = hestenes_singular_values(&m);
            for (a, b) in svd.sigma.iter().zip(oracle) {
                assert!((a - b).abs() < 1e-10, "{:?} vs {:?}", svd.sigma, oracle);
            }
            assert!((svd.reconstruct() - m).max_abs() < 1e-12 * m.frobenius_norm().max(1.0));
            assert!((svd.u.det() - 1.0).abs() < 1e-12 && (svd.v.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn handles_degenerate_inputs() {
        for m in [
            Mat3::ZERO,
            Mat3::IDENTITY,
            Mat3::IDENTITY * 1.5,
            Mat3::diag([1.0, 1.0, -1.0]),
            Mat3::outer(Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 0.0)),
        ] {
            let svd = svd3(&m);
            assert!((svd.reconstruct() - m).max_abs() < 1e-12, "{m:?}");
            assert!(svd.sigma[0] >= svd.sigma[1] && svd.sigma[1] >= svd.sigma[2].abs() - 1e-15);
        }
    }

    #[test]
    fn eigen_of_diagonal_is_sorted() {
        let (vals, _) = symmetric_eigen(&Mat3::diag([1.0, 3.0, 2.0]));
        assert_eq!(vals, [3.0, 2.0, 1.0]);
    }
}
