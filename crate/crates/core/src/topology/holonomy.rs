use super::path::ManifoldPath;
use crate::error::{Error, Result};
use crate::manifold::UnitQuaternion;
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};

/// Class of a loop in π₁(SO(3)) = ℤ/2ℤ, reported as ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Holonomy {
    /// Contractible: the lift to S³ closes.
    Trivial,
    /// Non-contractible: the lift ends at the antipode of its start.
    NonTrivial,
}

impl Holonomy {
    pub fn sign(self) -> i8 {
        match self {
            Holonomy::Trivial => 1,
            Holonomy::NonTrivial => -1,
        }
    }

    /// ℤ/2 group law.
    pub fn compose(self, o: Holonomy) -> Holonomy {
        if self == o {
            Holonomy::Trivial
        } else {
            Holonomy::NonTrivial
        }
    }
}

impl From<Holonomy> for i8 {
    fn from(h: Holonomy) -> i8 {
        h.sign()
    }
}

impl TryFrom<i8> for Holonomy {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Holonomy::Trivial),
            -1 => Ok(Holonomy::NonTrivial),
            _ => Err(format!("holonomy must be +1 or -1, got {v}")),
        }
    }
}

/// Continuous lift of a path to S³, choosing at each step the quaternion
/// sign closest to the previous lift.
pub fn lift_path(path: &ManifoldPath) -> Result<Vec<UnitQuaternion>> {
    let limit = Tolerances::DEFAULT.lift_max_step;
    if path.max_step() >= limit {
        return Err(Error::StepTooLarge { step: path.max_step(), limit });
    }
    let mut lift = Vec::with_capacity(path.len());
    for r in path.points() {
        let q = UnitQuaternion::from_rotation(r);
        let q = match lift.last() {
            Some(prev) if q.dot(prev) < 0.0 => -q,
            _ => q,
        };
        lift.push(q);
    }
    Ok(lift)
}

/// `sign⟨q_first, q_last⟩` of the continuous lift of a closed loop.
pub fn quaternion_holonomy(path: &ManifoldPath) -> Result<Holonomy> {
    if !path.is_loop() {
        return Err(Error::InvalidPath("holonomy needs a closed loop".into()));
    }
    let lift = lift_path(path)?;
    let (first, last) = (lift[0], lift[lift.len() - 1]);
    Ok(if first.dot(&last) > 0.0 { Holonomy::Trivial } else { Holonomy::NonTrivial })
}
