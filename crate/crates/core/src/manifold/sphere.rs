use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};

/// A point on S^{N-1} ⊂ ℝᴺ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector<const N: usize>(#[serde(with = "serde_array")] [f64; N]);

impl<const N: usize> UnitVector<N> {
    pub fn new(v: [f64; N]) -> Result<Self> {
        let norm = euclidean_norm(&v);
        if !norm.is_finite() || (norm - 1.0).abs() > Tolerances::DEFAULT.unit_norm {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    pub fn as_array(&self) -> &[f64; N] {
        &self.0
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Scaled so that tiny (sub-1e-154) inputs do not underflow to zero.
pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    if (1e-100..1e100).contains(&scale) {
        return v.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Metric projection onto the unit sphere: `x / ‖x‖`.
pub fn normalize<const N: usize>(x: [f64; N]) -> Result<UnitVector<N>> {
    let mut out = x;
    let norm = normalize_in_place(&mut out)?;
    debug_assert!(norm > 0.0);
    Ok(UnitVector(out))
}

/// Slice form of [`normalize`]; returns the original norm.
pub fn normalize_in_place(x: &mut [f64]) -> Result<f64> {
    let norm = euclidean_norm(x);
    if !(norm >= Tolerances::DEFAULT.origin) || !norm.is_finite() {
        return Err(Error::OriginUndefined { norm });
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(norm)
}

mod serde_array {
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(a: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
        a.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[f64; N], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        v.try_into().map_err(|v: Vec<f64>| D::Error::invalid_length(v.len(), &"fixed-length array"))
    }
}
