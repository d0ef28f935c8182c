use super::dataset::EmbeddingSpec;
use crate::error::{Error, Result};
use crate::heads::HeadKind;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub head: HeadKind,
    pub embedding: EmbeddingSpec,
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub steps: usize,
    pub seed: u64,
    /// Training set size.
    pub samples: usize,
    /// Haar rotations used for the reported reconstruction error.
    pub eval_samples: usize,
    /// Coarse samples per loop in the witness search.
    pub eval_loop_samples: usize,
    /// Random loops probed beside the canonical ones.
    pub witness_paths: usize,
    pub jump_threshold: f64,
    /// Mean geodesic error (radians) below which reconstruction passes.
    pub error_threshold: f64,
    /// Steps averaged into one loss-curve point.
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            head: HeadKind::Basis,
            embedding: EmbeddingSpec::Flatten9,
            hidden: vec![128, 128],
            learning_rate: 1e-3,
            momentum: 0.9,
            batch_size: 32,
            steps: 20_000,
            seed: 0,
            samples: 10_000,
            eval_samples: 50_000,
            eval_loop_samples: 64,
            witness_paths: 16,
            jump_threshold: 0.1,
            error_threshold: 0.2,
            log_every: 100,
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Config { line, message: format!("{key}: cannot parse {value:?}: {e}") })
}

fn parse_embedding(line: usize, value: &str) -> Result<EmbeddingSpec> {
    if value == "flatten9" {
        return Ok(EmbeddingSpec::Flatten9);
    }
    let inner = value.strip_prefix("lifted(").and_then(|v| v.strip_suffix(')')).ok_or_else(|| Error::Config {
        line,
        message: format!("embedding: expected flatten9 or lifted(D, seed), got {value:?}"),
    })?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Config { line, message: "embedding: lifted takes (D, seed)".into() });
    }
    Ok(EmbeddingSpec::Lifted {
        dim: parse_value(line, "embedding", parts[0])?,
        seed: parse_value(line, "embedding", parts[1])?,
    })
}

impl TrainConfig {
    /// Parses flat `key = value` lines. `#` starts a comment; keys absent
    /// from the text keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config { line, message: format!("expected `key = value`, got {content:?}") })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "head" => c.head = value.parse().map_err(|e: Error| Error::Config { line, message: e.to_string() })?,
                "embedding" => c.embedding = parse_embedding(line, value)?,
                "hidden" => {
                    c.hidden = value.split(',').map(|v| parse_value(line, key, v.trim())).collect::<Result<_>>()?
                }
                "learning_rate" => c.learning_rate = parse_value(line, key, value)?,
                "momentum" => c.momentum = parse_value(line, key, value)?,
                "batch_size" => c.batch_size = parse_value(line, key, value)?,
                "steps" => c.steps = parse_value(line, key, value)?,
                "seed" => c.seed = parse_value(line, key, value)?,
                "samples" => c.samples = parse_value(line, key, value)?,
                "eval_samples" => c.eval_samples = parse_value(line, key, value)?,
                "eval_loop_samples" => c.eval_loop_samples = parse_value(line, key, value)?,
                "witness_paths" => c.witness_paths = parse_value(line, key, value)?,
                "jump_threshold" => c.jump_threshold = parse_value(line, key, value)?,
                "error_threshold" => c.error_threshold = parse_value(line, key, value)?,
                "log_every" => c.log_every = parse_value(line, key, value)?,
                _ => return Err(Error::Config { line, message: format!("unknown key {key:?}") }),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config { line: 0, message: m.to_string() });
        if self.hidden.contains(&0) {
            return bad("hidden sizes must be positive");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad("momentum must lie in [0, 1)");
        }
        if self.batch_size == 0 || self.samples == 0 || self.eval_samples == 0 || self.log_every == 0 {
            return bad("batch_size, samples, eval_samples and log_every must be positive");
        }
        if self.eval_loop_samples < 16 {
            return bad("eval_loop_samples must be at least 16");
        }
        if !(self.jump_threshold > 0.0 && self.error_threshold > 0.0) {
            return bad("thresholds must be positive");
        }
        if let EmbeddingSpec::Lifted { dim: 0, .. } = self.embedding {
            return bad("lifted dimension must be positive");
        }
        Ok(())
    }

    /// Layer sizes of the encoder network.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.embedding.ambient_dim()];
        sizes.extend(&self.hidden);
        sizes.push(self.head.input_dim());
        sizes
    }

    /// Inverse of [`TrainConfig::parse`].
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let embedding = match self.embedding {
            EmbeddingSpec::Flatten9 => "flatten9".to_string(),
            EmbeddingSpec::Lifted { dim, seed } => format!("lifted({dim}, {seed})"),
        };
        let hidden: Vec<String> = self.hidden.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "head = {}", self.head);
        let _ = writeln!(s, "embedding = {embedding}");
        let _ = writeln!(s, "hidden = {}", hidden.join(", "));
        let _ = writeln!(s, "learning_rate = {:e}", self.learning_rate);
        let _ = writeln!(s, "momentum = {}", self.momentum);
        let _ = writeln!(s, "batch_size = {}", self.batch_size);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "samples = {}", self.samples);
        let _ = writeln!(s, "eval_samples = {}", self.eval_samples);
        let _ = writeln!(s, "eval_loop_samples = {}", self.eval_loop_samples);
        let _ = writeln!(s, "witness_paths = {}", self.witness_paths);
        let _ = writeln!(s, "jump_threshold = {}", self.jump_threshold);
        let _ = writeln!(s, "error_threshold = {}", self.error_threshold);
        let _ = writeln!(s, "log_every = {}", self.log_every);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let text =
            "# reference run\nhead = quaternion  # trailing\n\nembedding = lifted(30, 7)\nhidden = 64, 32\nsteps=500\n";
        let c = TrainConfig::parse(text).unwrap();
        assert_eq!(c.head, HeadKind::Quaternion);
        assert_eq!(c.embedding, EmbeddingSpec::Lifted { dim: 30, seed: 7 });
        assert_eq!(c.hidden, vec![64, 32]);
        assert_eq!(c.steps, 500);
        assert_eq!(c.batch_size, TrainConfig::default().batch_size);
        assert_eq!(c.layer_sizes(), vec![30, 64, 32, 4]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = TrainConfig::parse("head = basis\n\nsteps = many\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
        assert!(matches!(TrainConfig::parse("colour = red"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(TrainConfig::parse("a\nhead basis"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(TrainConfig::parse("head = euler"), Err(Error::Config { line: 1, .. })));
        assert!(TrainConfig::parse("momentum = 1.0").is_err());
        assert!(TrainConfig::parse("hidden = 16, 0").is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = TrainConfig {
            head: HeadKind::AxisAngle,
            embedding: EmbeddingSpec::Lifted { dim: 12, seed: 4 },
            learning_rate: 3e-4,
            ..Default::default()
        };
        assert_eq!(TrainConfig::parse(&c.to_config_text()).unwrap(), c);
    }
}
