use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{ChainParams, GridConvention};

/// Closed range sampled at `min, min + step, ..`, up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

/// A sweep axis: a single value or a stepped range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Scalar(f64),
    Range(RangeSpec),
}

impl Axis {
    pub fn validate(&self, name: &str) -> Result<()> {
        match *self {
            Axis::Scalar(v) if v.is_finite() => Ok(()),
            Axis::Scalar(v) => Err(Error::InvalidGrid(format!(
                "{name} value {v} is not finite"
            ))),
            Axis::Range(RangeSpec { min, max, step }) => {
                if !(min.is_finite() && max.is_finite() && step.is_finite()) {
                    return Err(Error::InvalidGrid(format!(
                        "{name} range has non-finite bounds"
                    )));
                }
                if step <= 0.0 {
                    return Err(Error::InvalidGrid(format!(
                        "{name} step must be > 0, got {step}"
                    )));
                }
                if min >= max {
                    return Err(Error::InvalidGrid(format!(
                        "{name} range needs min < max, got [{min}, {max}]"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            Axis::Scalar(v) => vec![v],
            Axis::Range(RangeSpec { min, max, step }) => {
                let count = ((max - min) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| min + i as f64 * step).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: PathBuf,
}

fn one() -> f64 {
    1.0
}

/// A `(λ, t)` sweep at fixed `N` and `δ`, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J", default = "one")]
    pub j: f64,
    #[serde(default = "one")]
    pub a: f64,
    pub delta: f64,
    pub lambda: Axis,
    pub time: Axis,
    #[serde(default)]
    pub grid: GridConvention,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

impl SweepConfig {
    /// Chain parameters at the first `λ` of the sweep.
    pub fn base_params(&self) -> Result<ChainParams> {
        let lambda = self.lambda.points()[0];
        ChainParams::with_units(self.n, self.j, lambda, self.delta, self.a)
    }

    pub fn validate(&self) -> Result<()> {
        self.lambda.validate("lambda")?;
        self.time.validate("time")?;
        self.base_params()?;
        let mut seen = HashSet::new();
        for out in &self.outputs {
            if !seen.insert(&out.path) {
                return Err(Error::Config(format!(
                    "output path {} listed more than once",
                    out.path.display()
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|source| Error::Json {
            path: origin.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2A: &str = r#"{
        "N": 200, "delta": 0.1,
        "lambda": {"min": 0, "max": 2, "step": 0.02},
        "time": {"min": 0, "max": 27, "step": 0.05},
        "grid": "paper",
        "outputs": [{"format": "csv", "path": "a.csv"}, {"format": "svg", "path": "a.svg"}]
    }"#;

    fn parse(s: &str) -> Result<SweepConfig> {
        SweepConfig::from_json(s, Path::new("test.json"))
    }

    #[test]
    fn parses_with_defaults() {
        let c = parse(FIG2A).unwrap();
        assert_eq!(c.n, 200);
        assert_eq!(c.j, 1.0);
        assert_eq!(c.a, 1.0);
        assert_eq!(c.grid, GridConvention::PaperInteger);
        assert_eq!(c.lambda.points().len(), 101);
        assert_eq!(c.time.points().len(), 541);
        assert_eq!(c.outputs[1].format, OutputFormat::Svg);
    }

    #[test]
    fn scalar_lambda() {
        let c = parse(
            r#"{"N": 8, "delta": 0, "lambda": 0.9, "time": {"min": 0, "max": 1, "step": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(c.lambda.points(), vec![0.9]);
        assert!(c.outputs.is_empty());
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = parse(r#"{"N": 8, "delta": 0, "lambda": 0.9, "time": 1, "colour": "red"}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Json { .. }));
        assert!(parse(r#"{"N": 8, "delta": 0, "lambda": {"min": 0, "max": 1, "step": 0.1, "x": 1}, "time": 1}"#).is_err());
        assert!(parse(r#"{"N": 8, "delta": 0, "lambda": 0.9, "time": 1, "outputs": [{"format": "png", "path": "x"}]}"#).is_err());
    }

    #[test]
    fn rejects_invalid_grids_and_params() {
        let bad_step =
            r#"{"N": 8, "delta": 0, "lambda": {"min": 0, "max": 1, "step": 0}, "time": 1}"#;
        assert!(matches!(parse(bad_step), Err(Error::InvalidGrid(_))));
        let empty =
            r#"{"N": 8, "delta": 0, "lambda": 0.5, "time": {"min": 2, "max": 1, "step": 0.1}}"#;
        assert!(matches!(parse(empty), Err(Error::InvalidGrid(_))));
        let odd = r#"{"N": 7, "delta": 0, "lambda": 0.5, "time": 1}"#;
        assert!(matches!(parse(odd), Err(Error::InvalidSiteCount(7))));
        let dup = r#"{"N": 8, "delta": 0, "lambda": 0.5, "time": 1,
            "outputs": [{"format": "csv", "path": "x"}, {"format": "svg", "path": "x"}]}"#;
        assert!(matches!(parse(dup), Err(Error::Config(_))));
    }

    #[test]
    fn json_round_trip() {
        let c = parse(FIG2A).unwrap();
        assert_eq!(parse(&c.to_json()).unwrap(), c);
    }
}
