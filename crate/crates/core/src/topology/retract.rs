use crate::error::Result;
use crate::manifold::{geodesic_distance, sample_uniform_rotation, Rotation};
use rand::Rng;
use std::f64::consts::PI;

/// Largest geodesic error of `encoder ∘ embedding` against the identity on
/// `n_samples` Haar rotations. A continuous retract would make this zero.
///
/// Points where the encoder is undefined count as the maximal error π.
pub fn retract_check<E, F, R>(encoder: E, embedding: F, n_samples: usize, rng: &mut R) -> f64
where
    E: Fn(&[f64]) -> Result<Rotation>,
    F: Fn(&Rotation) -> Vec<f64>,
    R: Rng + ?Sized,
{
    (0..n_samples.max(1))
        .map(|_| {
            let r = sample_uniform_rotation(rng);
            encoder(&embedding(&r)).map_or(PI, |out| geodesic_distance(&out, &r))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heads::{basis_section, head_basis};
    use crate::manifold::{Mat3, Vec3};
    use crate::projection::{project, EmbeddedManifold};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flatten(r: &Rotation) -> Vec<f64> {
        r.to_flat().to_vec()
    }

    #[test]
    fn exact_section_is_a_retract_on_the_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let enc = |x: &[f64]| {
            let m = Rotation::new(Mat3::from_slice(x))?;
            let (u, v) = basis_section(&m);
            head_basis(u, v)
        };
        assert!(retract_check(enc, flatten, 2000, &mut rng) < 1e-9);
    }

    #[test]
    fn projection_fixes_manifold_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let enc = |x: &[f64]| {
            let p = project(&EmbeddedManifold::so3(), x)?;
            Rotation::new(Mat3::from_slice(&p.point))
        };
        assert!(retract_check(enc, flatten, 2000, &mut rng) < 1e-9);
    }

    #[test]
    fn constant_encoder_is_not_a_retract() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let err = retract_check(|_| Ok(Rotation::IDENTITY), flatten, 2000, &mut rng);
        assert!(err > 2.5 && err <= PI);
        let _ = Vec3::ZERO;
    }
}
