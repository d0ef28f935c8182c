//! Encoders onto SO(3) that restrict to homeomorphisms on the data manifold,
//! and the numerical machinery for telling which candidate designs can.
//!
//! * [`manifold`]: SO(3), S², S³ and so(3) primitives.
//! * [`heads`]: the exponential, quaternion, axis-angle and basis heads,
//!   their Jacobians, sections and condition reports.
//! * [`projection`]: distance to and metric projection onto Sⁿ and SO(3).
//! * [`topology`]: loops, holonomy, loop closure, retract and
//!   discontinuity-witness diagnostics.
//! * [`trainer`]: a small MLP auto-encoder trained through each head.

// Guards are written as `!(x >= bound)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heads;
pub mod manifold;
pub mod projection;
pub mod tolerances;
pub mod topology;
pub mod trainer;

pub use error::{Error, Result};
pub use heads::{ConditionReport, HeadKind, HeadPipeline, Verdict};
pub use manifold::{Rotation, UnitQuaternion, UnitVector, Vec3};
pub use tolerances::Tolerances;
pub use topology::{DiagnosticVerdict, ManifoldPath};
