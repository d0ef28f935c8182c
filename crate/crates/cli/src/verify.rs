//! Fixed-seed invariant suites behind `homeo verify`.

use crate::report::{SuiteResult, Verification};
use homeo_core::heads::{basis_section, check_necessary_conditions, head_basis, Verdict};
use homeo_core::manifold::{
    exp_so3, geodesic_distance, log_so3, normalize, orthogonality_defect, quat_to_rot, sample_in_ball,
    sample_uniform_rotation, sample_unit_quaternion, sample_unit_vector3, Mat3,
};
use homeo_core::projection::{
    distance_gradient_check, lipschitz_probe, project, reconstruction_identity, EmbeddedManifold,
};
use homeo_core::topology::{
    encode_path, loop_closure_test, make_based_rotation_path, make_rotation_loop, quaternion_holonomy, Holonomy,
    LatentMetric,
};
use homeo_core::{Error, HeadKind, Rotation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

struct Ctx {
    seed: u64,
    samples: usize,
    scale: f64,
}

impl Ctx {
    fn rng(&self, suite: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(suite);
        r
    }

    /// Passes when `metric < tolerance · scale`.
    fn below(&self, name: &str, metric: f64, tolerance: f64, cases: usize, what: &str) -> SuiteResult {
        let tol = tolerance * self.scale;
        SuiteResult {
            name: name.into(),
            passed: metric < tol,
            metric,
            tolerance: tol,
            cases,
            detail: format!("{what} {metric:.3e} (< {tol:.1e})"),
        }
    }

    fn count(&self, name: &str, failures: usize, cases: usize, what: &str) -> SuiteResult {
        SuiteResult {
            name: name.into(),
            passed: failures == 0,
            metric: failures as f64,
            tolerance: 0.0,
            cases,
            detail: format!("{failures} of {cases} {what}"),
        }
    }
}

fn exp_log(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(1);
    let worst = (0..c.samples)
        .map(|_| {
            let w = sample_in_ball(&mut r, PI - 1e-3);
            (log_so3(&exp_so3(w)) - w).norm()
        })
        .fold(0.0, f64::max);
    c.below("exp-log-round-trip", worst, 1e-8, c.samples, "max ‖log(exp ω) − ω‖")
}

fn rodrigues(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(2);
    let worst = (0..c.samples)
        .map(|_| {
            let w = sample_in_ball(&mut r, 3.0);
            let a = Mat3::from_rows([0.0, -w.z, w.y], [w.z, 0.0, -w.x], [-w.y, w.x, 0.0]);
            let (mut sum, mut term) = (Mat3::IDENTITY, Mat3::IDENTITY);
            for k in 1..30 {
                term = (term * a) * (1.0 / k as f64);
                sum = sum + term;
            }
            (*exp_so3(w).matrix() - sum).frobenius_norm()
        })
        .fold(0.0, f64::max);
    c.below("rodrigues-series", worst, 1e-10, c.samples, "max Frobenius error vs 30-term series")
}

fn rotation_validity(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(3);
    let worst = (0..c.samples)
        .map(|_| {
            let m = *exp_so3(sample_in_ball(&mut r, 20.0)).matrix();
            orthogonality_defect(&m).max((m.det() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    c.below("exp-lands-on-so3", worst, 1e-9, c.samples, "max orthogonality/det defect")
}

fn double_cover(c: &Ctx) -> [SuiteResult; 2] {
    let mut r = c.rng(4);
    let (mut sign, mut dist) = (0.0_f64, 0.0_f64);
    for _ in 0..c.samples {
        let p = sample_unit_quaternion(&mut r);
        let q = sample_unit_quaternion(&mut r);
        sign = sign.max((*quat_to_rot(&p).matrix() - *quat_to_rot(&-p).matrix()).max_abs());
        let angle = 2.0 * p.dot(&q).abs().min(1.0).acos();
        dist = dist.max((geodesic_distance(&quat_to_rot(&p), &quat_to_rot(&q)) - angle).abs());
    }
    [
        c.below("quaternion-sign", sign, 1e-14, c.samples, "max |R(q) − R(−q)|"),
        c.below("quaternion-distance", dist, 1e-8, c.samples, "max |d(R(p), R(q)) − 2 arccos|⟨p,q⟩||"),
    ]
}

fn lipschitz(c: &Ctx, m: EmbeddedManifold, stream: u64) -> SuiteResult {
    let mut r = c.rng(stream);
    let pairs = 10 * c.samples;
    let ratio = lipschitz_probe(&m, pairs, &mut r);
    c.below(&format!("lipschitz-{}", m.name()), (ratio - 1.0).max(0.0), 1e-9, pairs, "excess Lipschitz ratio")
}

fn gradient_probes(c: &Ctx) -> [SuiteResult; 2] {
    let mut r = c.rng(7);
    let (mut grad, mut recon, mut done) = (0.0_f64, 0.0_f64, 0);
    let mut failure = None;
    for m in [EmbeddedManifold::sphere(2), EmbeddedManifold::so3()] {
        let mut k = 0;
        while k < c.samples / 2 {
            let x: Vec<f64> = (0..m.ambient_dim).map(|_| r.random_range(-2.0..2.0)).collect();
            match (distance_gradient_check(&m, &x, 1e-6), reconstruction_identity(&m, &x, 1e-6)) {
                (Ok(g), Ok(e)) => {
                    grad = grad.max(g);
                    recon = recon.max(e);
                    k += 1;
                    done += 1;
                }
                (Err(Error::TooCloseToManifold { .. }), _) | (_, Err(Error::TooCloseToManifold { .. })) => {}
                (Err(e), _) | (_, Err(e)) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
    }
    let mut out = [
        c.below("distance-gradient", grad, 1e-5, done, "max ‖∇d − (x − π(x))/d‖"),
        c.below("reconstruction-identity", recon, 1e-4, done, "max ‖π(x) − (x − d∇d)‖"),
    ];
    if let Some(e) = failure {
        for s in &mut out {
            s.passed = false;
            s.detail = format!("probe error: {e}");
        }
    }
    out
}

fn projection_idempotent(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(8);
    let so3 = EmbeddedManifold::so3();
    let mut worst: f64 = 0.0;
    for _ in 0..c.samples {
        let x: Vec<f64> = (0..9).map(|_| r.random_range(-3.0..3.0)).collect();
        let p = project(&so3, &x).expect("finite");
        let again = project(&so3, &p.point).expect("finite");
        let gap = p.point.iter().zip(&again.point).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(gap);
    }
    c.below("projection-idempotent", worst, 1e-10, c.samples, "max ‖π(π(x)) − π(x)‖∞")
}

fn holonomy(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(9);
    let mut failures = 0;
    let n = 20;
    for _ in 0..n {
        let axis = normalize(sample_unit_vector3(&mut r).to_array()).expect("unit sample");
        let base = sample_uniform_rotation(&mut r);
        let ok = (|| -> Result<bool, Error> {
            let mut ok = true;
            for samples in [64, 128, 256] {
                ok &=
                    quaternion_holonomy(&make_based_rotation_path(base, axis, TAU, samples)?)? == Holonomy::NonTrivial;
            }
            let single = make_rotation_loop(axis, TAU, 128)?;
            ok &= quaternion_holonomy(&make_rotation_loop(axis, 2.0 * TAU, 256)?)? == Holonomy::Trivial;
            ok &= quaternion_holonomy(&single.concat(&single)?)? == Holonomy::Trivial;
            ok &= quaternion_holonomy(&single.conjugate(&base)?)? == Holonomy::NonTrivial;
            Ok(ok)
        })();
        failures += usize::from(!ok.unwrap_or(false));
    }
    c.count("holonomy", failures, n, "axes with a wrong ℤ/2 class")
}

fn sections(c: &Ctx) -> [SuiteResult; 2] {
    let mut r = c.rng(10);
    let (mut basis, mut others) = (0.0_f64, 0.0_f64);
    for _ in 0..c.samples {
        let rot = sample_uniform_rotation(&mut r);
        let (a, b) = basis_section(&rot);
        let back = head_basis(a, b).expect("orthonormal");
        basis = basis.max((*back.matrix() - *rot.matrix()).max_abs());
        for kind in HeadKind::ALL {
            let p = kind.pipeline();
            others = match p.forward(&p.section(&rot)) {
                Ok(out) => others.max(geodesic_distance(&out, &rot)),
                Err(_) => f64::INFINITY,
            };
        }
    }
    [
        c.below("basis-round-trip", basis, 1e-10, c.samples, "max entry error of head_basis ∘ basis_section"),
        c.below(
            "sections-right-inverse",
            others,
            1e-9,
            c.samples,
            "max geodesic error of head ∘ section over all heads",
        ),
    ]
}

fn loop_closure(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(11);
    let p = HeadKind::Basis.pipeline();
    let encoder = |x: &[f64]| Ok(p.section(&Rotation::new(Mat3::from_slice(x))?));
    let flatten = |r: &Rotation| r.to_flat().to_vec();
    let mut worst: f64 = 0.0;
    let n = 10;
    for _ in 0..n {
        let axis = normalize(sample_unit_vector3(&mut r).to_array()).expect("unit sample");
        let jumps: Vec<f64> = [64, 256]
            .into_iter()
            .map(|k| {
                let path = make_rotation_loop(axis, TAU, k).expect("valid loop");
                let latent = encode_path(encoder, &path, flatten, LatentMetric::Euclidean).expect("section is total");
                let v = loop_closure_test(&latent, 0.1);
                if v.is_closed {
                    v.max_jump
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        worst = worst.max(jumps[1] / jumps[0]);
    }
    c.below("basis-loop-closure", worst, 0.3, n, "max jump ratio for 64 → 256 samples")
}

fn jacobians(c: &Ctx) -> SuiteResult {
    let mut r = c.rng(12);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let per_head = (c.samples / 4).max(1);
    for kind in HeadKind::ALL {
        let p = kind.pipeline();
        let mut k = 0;
        while k < per_head {
            let y: Vec<f64> = (0..kind.input_dim()).map(|_| r.random_range(-1.5..1.5)).collect();
            let Ok(eval) = p.evaluate(&y) else { continue };
            if kind != HeadKind::Exponential && y.iter().map(|v| v * v).sum::<f64>() < 0.1 {
                continue;
            }
            let (mut num, mut den) = (0.0, 0.0);
            let mut usable = true;
            for j in 0..y.len() {
                let (mut yp, mut ym) = (y.clone(), y.clone());
                yp[j] += h;
                ym[j] -= h;
                let (Ok(fp), Ok(fm)) = (p.forward(&yp), p.forward(&ym)) else {
                    usable = false;
                    break;
                };
                let (fp, fm) = (fp.to_flat(), fm.to_flat());
                for i in 0..9 {
                    let fd = (fp[i] - fm[i]) / (2.0 * h);
                    num += (fd - eval.entry(i, j)).powi(2);
                    den += fd * fd;
                }
            }
            // Stay clear of the singular sets where both sides are ill-conditioned.
            if !usable || den < 1e-2 {
                continue;
            }
            worst = worst.max((num / den).sqrt());
            k += 1;
        }
    }
    c.below("head-jacobians", worst, 1e-4, 4 * per_head, "max relative Frobenius error vs central differences")
}

fn conditions() -> SuiteResult {
    let expected = [
        (HeadKind::Exponential, "retract_obstruction", Verdict::Violated),
        (HeadKind::Quaternion, "homotopy_obstruction", Verdict::Violated),
        (HeadKind::AxisAngle, "embeddability_obstruction", Verdict::Violated),
        (HeadKind::Basis, "sufficient_condition_met", Verdict::Satisfied),
    ];
    let wrong = expected
        .iter()
        .filter(|(kind, field, verdict)| {
            let report = check_necessary_conditions(*kind);
            let found = report.findings().into_iter().find(|(n, _)| n == field).map(|(_, f)| f.verdict);
            found != Some(*verdict) || report.admits_homeomorphic_encoder() != (*kind == HeadKind::Basis)
        })
        .count();
    SuiteResult {
        name: "condition-reports".into(),
        passed: wrong == 0,
        metric: wrong as f64,
        tolerance: 0.0,
        cases: 4,
        detail: format!("{wrong} of 4 heads with an unexpected verdict"),
    }
}

pub fn run(seed: u64, samples: usize, tolerance_scale: f64) -> Verification {
    let c = Ctx { seed, samples: samples.max(4), scale: tolerance_scale };
    let mut suites = vec![exp_log(&c), rodrigues(&c), rotation_validity(&c)];
    suites.extend(double_cover(&c));
    suites.push(lipschitz(&c, EmbeddedManifold::sphere(2), 5));
    suites.push(lipschitz(&c, EmbeddedManifold::so3(), 6));
    suites.extend(gradient_probes(&c));
    suites.push(projection_idempotent(&c));
    suites.push(holonomy(&c));
    suites.extend(sections(&c));
    suites.push(loop_closure(&c));
    suites.push(jacobians(&c));
    suites.push(conditions());
    let first_failure = suites.iter().find(|s| !s.passed).map(|s| s.name.clone());
    Verification { passed: first_failure.is_none(), first_failure, tolerance_scale, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let v = run(0, 200, 1.0);
        assert!(v.passed, "{:?}", v.suites.iter().filter(|s| !s.passed).collect::<Vec<_>>());
    }

    #[test]
    fn zero_tolerance_names_first_suite() {
        let v = run(0, 50, 0.0);
        assert!(!v.passed);
        assert_eq!(v.first_failure.as_deref(), Some("exp-log-round-trip"));
    }
}
