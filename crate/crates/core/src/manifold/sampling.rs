use super::quaternion::{quat_to_rot, UnitQuaternion};
use super::rotation::Rotation;
use super::vector::Vec3;
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-uniform unit quaternion: a normalised 4-vector of standard normals.
pub fn sample_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Ok(q) = UnitQuaternion::from_vector(v) {
            return q;
        }
    }
}

/// Haar-uniform rotation.
pub fn sample_uniform_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    quat_to_rot(&sample_unit_quaternion(rng))
}

/// Uniform direction on S².
pub fn sample_unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v * (1.0 / n);
        }
    }
}

/// Uniform point in the ball of the given radius.
pub fn sample_in_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Vec3 {
    let dir = sample_unit_vector3(rng);
    let r = radius * rng.random::<f64>().cbrt();
    dir * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = sample_uniform_rotation(&mut ChaCha8Rng::seed_from_u64(42));
        let b = sample_uniform_rotation(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        let c = sample_uniform_rotation(&mut ChaCha8Rng::seed_from_u64(43));
        assert_ne!(a, c);
    }

    #[test]
    fn samples_are_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let r = sample_uniform_rotation(&mut rng);
            assert!(Rotation::new(*r.matrix()).is_ok());
        }
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            assert!(sample_in_ball(&mut rng, 3.0).norm() <= 3.0);
        }
    }
}
