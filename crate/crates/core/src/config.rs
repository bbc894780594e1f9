//! Configuration files (JSON or TOML) and two-column knot data.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bounds::BaseOperatorSpec;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::ifs::PerturbationSpec;
use crate::levels::LevelSequence;
use crate::norms::DEFAULT_SLACK;
use crate::partition::Partition;
use crate::problem::{DepthPolicy, Mode, ProblemConfig, DEFAULT_EPS, DEFAULT_GRID};
use crate::rb::Strategy;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSection {
    #[serde(default)]
    pub knots: Option<Vec<f64>>,
    /// Two-column CSV with header `x,y`; relative to the config file.
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

/// On-disk configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub partition: PartitionSection,
    /// Germ; defaults to the piecewise-linear interpolant of CSV data.
    #[serde(default)]
    pub germ: Option<FunctionSpec>,
    #[serde(default)]
    pub ordinates: Option<Vec<f64>>,
    pub levels: LevelSequence,
    #[serde(default = "default_d")]
    pub d: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub depth: Option<DepthPolicy>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub slack: Option<f64>,
    /// Base operators used by the operator-level bound checks.
    #[serde(default)]
    pub operator: Option<BaseOperatorSpec>,
    /// Perturbation used by the sensitivity check.
    #[serde(default)]
    pub perturbation: Option<PerturbationSpec>,
}

fn default_d() -> f64 {
    1.0
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

/// A parsed configuration resolved into library types.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub problem: ProblemConfig,
    pub strategy: Strategy,
    pub operator: Option<BaseOperatorSpec>,
    pub perturbation: Option<PerturbationSpec>,
}

impl ConfigFile {
    pub fn parse(text: &str, toml_syntax: bool) -> Result<Self> {
        if toml_syntax {
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
        } else {
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
        }
    }

    /// `base_dir` resolves relative CSV paths.
    pub fn resolve(self, base_dir: &Path) -> Result<LoadedConfig> {
        let (knots, ordinates, germ) = match (self.partition.knots, self.partition.csv) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "partition takes either knots or csv, not both".into(),
                ))
            }
            (None, None) => return Err(Error::Config("partition needs knots or csv".into())),
            (Some(knots), None) => {
                let germ = self
                    .germ
                    .ok_or_else(|| Error::Config("germ is required when knots are given".into()))?;
                (knots, self.ordinates, germ)
            }
            (None, Some(csv)) => {
                if self.ordinates.is_some() {
                    return Err(Error::Config(
                        "ordinates come from the csv file; drop the ordinates section".into(),
                    ));
                }
                let (xs, ys) = read_xy_csv(&base_dir.join(csv))?;
                let germ = self.germ.unwrap_or_else(|| FunctionSpec::PiecewiseLinear {
                    xs: xs.clone(),
                    ys: ys.clone(),
                });
                (xs, Some(ys), germ)
            }
        };
        let partition = Partition::new(knots)?;
        let mut problem = ProblemConfig::new(partition, germ, self.levels)
            .with_exponent(self.d)
            .with_grid(self.grid)
            .with_mode(self.mode)
            .with_depth(self.depth.unwrap_or(DepthPolicy::Tolerance(DEFAULT_EPS)));
        problem.ordinates = ordinates;
        problem.slack = self.slack.unwrap_or(DEFAULT_SLACK);
        Ok(LoadedConfig {
            problem,
            strategy: self.strategy,
            operator: self.operator,
            perturbation: self.perturbation,
        })
    }
}

/// Reads a JSON (`.json`) or TOML (anything else) configuration.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let base = path.parent().unwrap_or(Path::new("."));
    ConfigFile::parse(&text, !is_json)?.resolve(base)
}

/// Reads a two-column CSV with header `x,y`.
pub fn read_xy_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Config(format!(
            "{}: expected header x,y",
            path.display()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Config(e.to_string()))?;
        let parse = |k: usize| -> Result<f64> {
            record[k].parse::<f64>().map_err(|e| {
                Error::Config(format!("{} row {}: {e}", path.display(), line + 2))
            })
        };
        xs.push(parse(0)?);
        ys.push(parse(1)?);
    }
    Ok((xs, ys))
}
