//! JSON experiment descriptions. One document describes one experiment.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use su11_walk::oracle::CrossCheckConfig;
use su11_walk::{CoinOperator, Frame, PhaseMode, WalkConfig, C64};

use crate::error::{CliError, Result};

/// Quantities a `run` can emit, one table each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Output {
    Probabilities,
    Sigma,
    Entropy,
    GramRow,
    OverlapCurve,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::Probabilities => "probabilities",
            Output::Sigma => "sigma",
            Output::Entropy => "entropy",
            Output::GramRow => "gram-row",
            Output::OverlapCurve => "overlap-curve",
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

mod frame_string {
    use super::*;

    pub fn serialize<S: Serializer>(frame: &Frame, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(frame)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Frame, D::Error> {
        let text = String::deserialize(d)?;
        Frame::from_str(&text).map_err(serde::de::Error::custom)
    }
}

fn default_sites() -> usize {
    200
}

fn default_steps() -> usize {
    40
}

fn default_coin() -> [[f64; 2]; 2] {
    [[1.0, 0.0], [0.0, 0.0]]
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Probabilities]
}

fn default_overlap_points() -> usize {
    361
}

/// A single walk and the tables to write from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// File stem for every output of this experiment.
    pub name: String,
    /// `ideal`, `hw:<|α|>` or `su11:<k>,<r>`.
    #[serde(with = "frame_string")]
    pub frame: Frame,
    #[serde(default = "default_sites")]
    pub sites: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub start: i64,
    /// `[[re, im], [re, im]]` for `(c_↑, c_↓)`.
    #[serde(default = "default_coin")]
    pub coin: [[f64; 2]; 2],
    #[serde(default)]
    pub phase_mode: PhaseMode,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    /// Samples of `θ ∈ [−π, π]` for the `overlap-curve` output.
    #[serde(default = "default_overlap_points")]
    pub overlap_points: usize,
    /// Free-form legend label; defaults to the frame string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Validation applied after parsing, reported as `field: message`.
pub trait Validate {
    fn validate(&self) -> std::result::Result<(), String>;
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !name.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(format!(
            "name: `{name}` must be non-empty and use only [A-Za-z0-9._-]"
        ))
    }
}

impl ExperimentConfig {
    pub fn coin_state(&self) -> [C64; 2] {
        [
            C64::new(self.coin[0][0], self.coin[0][1]),
            C64::new(self.coin[1][0], self.coin[1][1]),
        ]
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.frame.to_string())
    }

    pub fn walk_config(&self) -> WalkConfig {
        WalkConfig {
            sites: self.sites,
            start: self.start,
            coin_state: self.coin_state(),
            coin: CoinOperator::hadamard(),
            frame: self.frame,
            phase_mode: self.phase_mode,
            steps: self.steps,
        }
    }
}

impl Validate for ExperimentConfig {
    fn validate(&self) -> std::result::Result<(), String> {
        check_name(&self.name)?;
        if self.sites < 2 {
            return Err(format!("sites: {} is below the minimum of 2", self.sites));
        }
        let half = (self.sites / 2) as i64;
        if self.start < -half || self.start >= self.sites as i64 - half {
            return Err(format!(
                "start: {} outside [{}, {})",
                self.start,
                -half,
                self.sites as i64 - half
            ));
        }
        if self.coin.iter().flatten().any(|v| !v.is_finite()) {
            return Err("coin: amplitudes must be finite".into());
        }
        su11_walk::walk::validate_coin_state(self.coin_state())
            .map_err(|e| format!("coin: {e}"))?;
        if self.outputs.is_empty() {
            return Err("outputs: at least one output is required".into());
        }
        if self.outputs.contains(&Output::OverlapCurve) && self.overlap_points < 2 {
            return Err("overlap_points: need at least 2 samples".into());
        }
        Ok(())
    }
}

/// Grid for the standalone overlap table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapConfig {
    pub name: String,
    pub k: Vec<f64>,
    pub r: Vec<f64>,
    #[serde(default = "default_overlap_points")]
    pub points: usize,
}

impl Validate for OverlapConfig {
    fn validate(&self) -> std::result::Result<(), String> {
        check_name(&self.name)?;
        if self.k.is_empty() {
            return Err("k: list must not be empty".into());
        }
        if self.r.is_empty() {
            return Err("r: list must not be empty".into());
        }
        if let Some(k) = self.k.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(format!("k: {k} is not a positive finite number"));
        }
        if let Some(r) = self.r.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(format!("r: {r} is not a non-negative finite number"));
        }
        if self.points < 2 {
            return Err("points: need at least 2 samples".into());
        }
        Ok(())
    }
}

fn default_cross_sites() -> usize {
    16
}

fn default_cross_steps() -> usize {
    10
}

fn default_modes() -> Vec<PhaseMode> {
    vec![PhaseMode::Physical]
}

fn default_tolerance() -> f64 {
    1e-8
}

/// Engine-versus-oracle grid `k × r × modes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossCheckSuite {
    pub name: String,
    pub k: Vec<f64>,
    pub r: Vec<f64>,
    #[serde(default = "default_cross_sites")]
    pub sites: usize,
    #[serde(default = "default_cross_steps")]
    pub steps: usize,
    #[serde(default = "default_modes")]
    pub modes: Vec<PhaseMode>,
    #[serde(default = "default_coin")]
    pub coin: [[f64; 2]; 2],
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for CrossCheckSuite {
    fn default() -> Self {
        CrossCheckSuite {
            name: "crosscheck".into(),
            k: vec![0.25, 0.75, 1.0, 10.0],
            r: vec![0.5, 1.0],
            sites: default_cross_sites(),
            steps: default_cross_steps(),
            modes: default_modes(),
            coin: default_coin(),
            tolerance: default_tolerance(),
        }
    }
}

impl CrossCheckSuite {
    pub fn cases(&self) -> Vec<CrossCheckConfig> {
        let mut out = Vec::new();
        for &mode in &self.modes {
            for &k in &self.k {
                for &r in &self.r {
                    out.push(CrossCheckConfig {
                        k,
                        r,
                        sites: self.sites,
                        steps: self.steps,
                        phase_mode: mode,
                        coin: self.coin,
                        tolerance: self.tolerance,
                    });
                }
            }
        }
        out
    }
}

impl Validate for CrossCheckSuite {
    fn validate(&self) -> std::result::Result<(), String> {
        check_name(&self.name)?;
        if self.k.is_empty() || self.r.is_empty() || self.modes.is_empty() {
            return Err("k, r, modes: lists must not be empty".into());
        }
        for case in self.cases() {
            case.validate().map_err(|e| {
                format!(
                    "case k={} r={} mode={}: {e}",
                    case.k, case.r, case.phase_mode
                )
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Bar,
    Line,
}

impl FromStr for ChartKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bar" => Ok(ChartKind::Bar),
            "line" => Ok(ChartKind::Line),
            other => Err(format!(
                "unknown chart kind `{other}` (expected bar or line)"
            )),
        }
    }
}

/// Which columns to draw and how. Unset fields come from table metadata.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub kind: Option<ChartKind>,
    #[serde(default)]
    pub x: Option<String>,
    /// Columns drawn from every input table.
    #[serde(default)]
    pub y: Vec<String>,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub x_label: Option<String>,
    #[serde(default)]
    pub y_label: Option<String>,
}

impl Validate for ChartSpec {
    fn validate(&self) -> std::result::Result<(), String> {
        if let Some(name) = &self.name {
            check_name(name)?;
        }
        Ok(())
    }
}

/// Reads, parses and validates a JSON document.
pub fn load<T: DeserializeOwned + Validate>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    parse(&text).map_err(|message| CliError::Config {
        path: path.to_owned(),
        message,
    })
}

pub fn parse<T: DeserializeOwned + Validate>(text: &str) -> std::result::Result<T, String> {
    let value: T = serde_json::from_str(text).map_err(|e| e.to_string())?;
    value.validate()?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3B: &str = r#"{
        "name": "fig3b",
        "frame": "su11:10,2",
        "sites": 200,
        "steps": 40,
        "coin": [[1, 0], [0, 0]],
        "phase_mode": "physical",
        "outputs": ["probabilities", "sigma"]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg: ExperimentConfig = parse(FIG3B).unwrap();
        assert_eq!(cfg.frame, Frame::su11(10.0, 2.0).unwrap());
        assert_eq!(cfg.start, 0);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = parse(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn fractional_parameters_round_trip() {
        let cfg = ExperimentConfig {
            frame: Frame::su11(0.1 + 0.2, 1.0 / 3.0).unwrap(),
            ..parse(FIG3B).unwrap()
        };
        let back: ExperimentConfig = parse(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn field_level_errors() {
        let cases = [
            (FIG3B.replace("\"sites\": 200", "\"sites\": 1"), "sites"),
            (
                FIG3B.replace("[[1, 0], [0, 0]]", "[[1, 0], [1, 0]]"),
                "coin",
            ),
            (FIG3B.replace("su11:10,2", "su11:-1,2"), "k"),
            (FIG3B.replace("\"steps\"", "\"stepz\""), "stepz"),
            (FIG3B.replace("\"fig3b\"", "\"../x\""), "name"),
            (FIG3B.replace("\"physical\"", "\"quantum\""), "quantum"),
        ];
        for (text, field) in cases {
            let err = parse::<ExperimentConfig>(&text).unwrap_err();
            assert!(err.contains(field), "{err}");
        }
    }

    #[test]
    fn suite_expands_grid() {
        let suite = CrossCheckSuite {
            modes: vec![PhaseMode::Physical, PhaseMode::PaperIdealized],
            ..CrossCheckSuite::default()
        };
        assert_eq!(suite.cases().len(), 16);
        assert!(suite.validate().is_ok());
        let too_big = CrossCheckSuite {
            sites: 128,
            ..CrossCheckSuite::default()
        };
        assert!(too_big.validate().is_err());
    }
}
