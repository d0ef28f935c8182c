use super::{distance_to, project, EmbeddedManifold};
use crate::error::{Error, Result};
use crate::manifold::euclidean_norm;
use rand::Rng;

fn fd_gradient(m: &EmbeddedManifold, x: &[f64], step: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + step;
            let plus = distance_to(m, &xp);
            xp[i] = x[i] - step;
            let minus = distance_to(m, &xp);
            xp[i] = x[i];
            (plus - minus) / (2.0 * step)
        })
        .collect()
}

/// The stencil must stay clear of both the manifold (where the distance has
/// a kink) and the non-uniqueness set (where it is not differentiable).
fn check_generic(m: &EmbeddedManifold, x: &[f64], step: f64) -> Result<f64> {
    let d = distance_to(m, x);
    let minimum = 10.0 * step;
    if !(d > minimum) {
        return Err(Error::TooCloseToManifold { distance: d, minimum });
    }
    let margin = m.singular_margin(x);
    if !(margin > minimum) {
        return Err(Error::TooCloseToManifold { distance: margin, minimum });
    }
    Ok(d)
}

/// `‖∇_fd d(x) − (x − π(x))/d(x)‖`.
pub fn distance_gradient_check(m: &EmbeddedManifold, x: &[f64], step: f64) -> Result<f64> {
    let d = check_generic(m, x, step)?;
    let p = project(m, x)?;
    let fd = fd_gradient(m, x, step);
    let diff: Vec<f64> = x.iter().zip(&p.point).zip(&fd).map(|((xi, pi), gi)| gi - (xi - pi) / d).collect();
    Ok(euclidean_norm(&diff))
}

/// `‖π(x) − (x − d(x)·∇_fd d(x))‖`.
pub fn reconstruction_identity(m: &EmbeddedManifold, x: &[f64], step: f64) -> Result<f64> {
    let d = check_generic(m, x, step)?;
    let p = project(m, x)?;
    let fd = fd_gradient(m, x, step);
    let diff: Vec<f64> = x.iter().zip(&p.point).zip(&fd).map(|((xi, pi), gi)| pi - (xi - d * gi)).collect();
    Ok(euclidean_norm(&diff))
}

/// Largest observed `|d(x) − d(y)| / ‖x − y‖` over `n_pairs` pairs drawn
/// from the cube `[−3, 3]^ambient`. Half the pairs are independent, the
/// rest are close neighbours, where the ratio is tightest.
pub fn lipschitz_probe<R: Rng + ?Sized>(m: &EmbeddedManifold, n_pairs: usize, rng: &mut R) -> f64 {
    let dim = m.ambient_dim;
    let mut worst = 0.0_f64;
    let mut done = 0;
    while done < n_pairs.max(1) {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let y: Vec<f64> = if done % 2 == 0 {
            (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect()
        } else {
            x.iter().map(|v| v + rng.random_range(-1e-2..1e-2)).collect()
        };
        let sep: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let gap = euclidean_norm(&sep);
        if gap == 0.0 {
            continue;
        }
        worst = worst.max((distance_to(m, &x) - distance_to(m, &y)).abs() / gap);
        done += 1;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Mat3;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_gradient_at_axis_point() {
        let s2 = EmbeddedManifold::sphere(2);
        assert!(distance_gradient_check(&s2, &[2.0, 0.0, 0.0], 1e-6).unwrap() < 1e-6);
        assert!(reconstruction_identity(&s2, &[2.0, 0.0, 0.0], 1e-6).unwrap() < 1e-6);
    }

    #[test]
    fn so3_gradient_at_scaled_identity() {
        let so3 = EmbeddedManifold::so3();
        let x = (Mat3::IDENTITY * 1.5).0;
        assert!(distance_gradient_check(&so3, &x, 1e-6).unwrap() < 1e-5);
        assert!(reconstruction_identity(&so3, &x, 1e-6).unwrap() < 1e-4);
    }

    #[test]
    fn singular_set_is_refused() {
        let s2 = EmbeddedManifold::sphere(2);
        assert!(matches!(distance_gradient_check(&s2, &[1e-9, 0.0, 0.0], 1e-6), Err(Error::TooCloseToManifold { .. })));
        assert!(matches!(distance_gradient_check(&s2, &[1.0, 1e-7, 0.0], 1e-6), Err(Error::TooCloseToManifold { .. })));
        let so3 = EmbeddedManifold::so3();
        assert!(distance_gradient_check(&so3, &Mat3::diag([1.0, 1.0, -1.0]).0, 1e-6).is_err());
    }

    #[test]
    fn lipschitz_ratio_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for m in [EmbeddedManifold::sphere(2), EmbeddedManifold::so3()] {
            let r = lipschitz_probe(&m, 5000, &mut rng);
            assert!(r <= 1.0 + 1e-9 && r > 0.5, "{}: {r}", m.name());
        }
    }
}
