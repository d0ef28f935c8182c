//! Primitives for SO(3), the spheres S², S³ and the Lie algebra so(3).

mod matrix;
mod quaternion;
mod rotation;
mod sampling;
mod sphere;
mod vector;

pub use matrix::{hat, vee, Mat3, Skew3};
pub use quaternion::{quat_to_rot, UnitQuaternion};
pub use rotation::{exp_so3, geodesic_distance, log_so3, orthogonality_defect, try_log_so3, Rotation};
pub use sampling::{sample_in_ball, sample_uniform_rotation, sample_unit_quaternion, sample_unit_vector3};
pub(crate) use sphere::euclidean_norm;
pub use sphere::{normalize, normalize_in_place, UnitVector};
pub use vector::Vec3;
