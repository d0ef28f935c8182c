//! Numerical witnesses for the topological obstructions to continuous
//! encoders on SO(3): loops, their ℤ/2 holonomy, loop closure of encoded
//! paths, retract checks and a refinement-based discontinuity search.

mod encode;
mod export;
mod holonomy;
mod path;
mod retract;
mod witness;

pub use encode::{encode_path, loop_closure_test, DiagnosticVerdict, LatentMetric, LatentPath};
pub use export::write_witness_csv;
pub use holonomy::{lift_path, quaternion_holonomy, Holonomy};
pub use path::{make_based_rotation_path, make_rotation_loop, ManifoldPath};
pub use retract::retract_check;
pub use witness::{discontinuity_witness_search, LoopProbe, WitnessPath, WitnessReport, WitnessSearchConfig};
