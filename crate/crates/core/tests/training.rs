use homeo_core::manifold::exp_so3;
use homeo_core::topology::retract_check;
use homeo_core::trainer::{train, train_with_embedding, EmbeddingSpec, TrainConfig};
use homeo_core::{HeadKind, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

fn reference(name: &str) -> TrainConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference").join(name);
    TrainConfig::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn reference_basis_loss_decreases_window_by_window() {
    let (_, report) = train(&reference("seed-0/basis.conf")).unwrap();
    let fraction = report.non_increasing_fraction(500);
    assert!(fraction >= 0.9, "{fraction}");
    assert!(report.homeomorphic());
}

fn modest(head: HeadKind) -> TrainConfig {
    TrainConfig {
        head,
        hidden: vec![64, 64],
        steps: 6_000,
        samples: 4_000,
        learning_rate: 3e-3,
        eval_samples: 5_000,
        witness_paths: 8,
        seed: 11,
        ..Default::default()
    }
}

#[test]
fn verdicts_survive_rotating_the_data() {
    let q = exp_so3(Vec3::new(0.4, -1.1, 2.0));
    for head in [HeadKind::Basis, HeadKind::Quaternion] {
        let c = modest(head);
        let (_, plain) = train(&c).unwrap();
        let rotated_embedding = c.embedding.build().with_pre_rotation(q);
        let (_, rotated) = train_with_embedding(&c, &rotated_embedding).unwrap();
        assert_eq!(plain.reconstruction_passed, rotated.reconstruction_passed, "{head}");
        assert_eq!(plain.continuity_passed, rotated.continuity_passed, "{head}");
        assert_eq!(plain.homeomorphic(), head == HeadKind::Basis);
    }
}

#[test]
fn lifted_embedding_trains_through_the_basis_head() {
    let c = TrainConfig { embedding: EmbeddingSpec::Lifted { dim: 30, seed: 5 }, ..modest(HeadKind::Basis) };
    let (model, report) = train(&c).unwrap();
    assert!(report.final_error.mean < report.initial_error.mean / 4.0, "{:?}", report.final_error);
    let head = c.head.pipeline();
    let embedding = c.embedding.build();
    let worst = retract_check(
        |x: &[f64]| head.forward(&model.forward(x)?),
        |r| embedding.embed(r),
        500,
        &mut ChaCha8Rng::seed_from_u64(1),
    );
    assert!(worst < std::f64::consts::PI);
}

#[test]
fn identical_configs_give_identical_reports() {
    let c = TrainConfig { steps: 1_500, eval_samples: 1_000, ..modest(HeadKind::AxisAngle) };
    let a = train(&c).unwrap().1;
    let b = train(&c).unwrap().1;
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
