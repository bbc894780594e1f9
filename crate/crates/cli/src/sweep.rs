//! Dependence experiment manifests.
//!
//! ```json
//! {
//!   "config": "running.json",
//!   "experiments": [
//!     {"name": "sq-vs-cube", "kind": "base", "a": [...], "b": [...]},
//!     {"name": "scale", "kind": "scaling", "a": [[...]], "b": [[...]], "cap": 0.5},
//!     {"name": "shift", "kind": "partition", "sequence": [[...], [...], [...]]}
//!   ]
//! }
//! ```
//!
//! A partition experiment compares each knot vector of `sequence` with
//! `reference` (the config's partition by default). Its rows carry the
//! map-displacement bound as `predicted` and the interpolant distance as
//! `observed`; a row passes when the displacement bound holds and the
//! observed distance is strictly below the previous row's.

use std::fs;
use std::path::{Path, PathBuf};

use nsfif::config::load_config;
use nsfif::depend;
use nsfif::export::{self, ExperimentRow};
use nsfif::{BoundReport, Error, FunctionSpec, Partition, Problem};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    config: Option<PathBuf>,
    #[serde(default)]
    experiments: Vec<Experiment>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Experiment {
    Base {
        name: String,
        a: Vec<FunctionSpec>,
        b: Vec<FunctionSpec>,
    },
    Scaling {
        name: String,
        a: Vec<Vec<FunctionSpec>>,
        b: Vec<Vec<FunctionSpec>>,
        cap: f64,
    },
    Partition {
        name: String,
        #[serde(default)]
        reference: Option<Vec<f64>>,
        sequence: Vec<Vec<f64>>,
    },
}

#[derive(Serialize)]
struct Detail {
    experiment: String,
    report: BoundReport,
    interpolant_distance: Option<f64>,
}

fn row(experiment: &str, kind: &str, predicted: f64, observed: f64, pass: bool) -> ExperimentRow {
    ExperimentRow {
        experiment: experiment.into(),
        kind: kind.into(),
        predicted,
        observed,
        margin: predicted - observed,
        pass,
    }
}

fn read_manifest(path: &Path) -> Result<Manifest, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub(crate) fn run(manifest_path: &Path, config: Option<&Path>, out: &Path) -> Result<(), Failure> {
    let manifest = read_manifest(manifest_path)?;
    let base_dir = manifest_path.parent().unwrap_or(Path::new("."));
    let config_path = manifest
        .config
        .as_ref()
        .map(|c| base_dir.join(c))
        .or_else(|| config.map(Path::to_path_buf));

    let mut rows = Vec::new();
    let mut details = Vec::new();
    if !manifest.experiments.is_empty() {
        let path = config_path
            .ok_or_else(|| Error::Config("manifest has experiments but no config".into()))?;
        let problem = Problem::new(load_config(&path)?.problem)?;
        for exp in &manifest.experiments {
            match exp {
                Experiment::Base { name, a, b } => {
                    let r = depend::base_dependence(&problem, a, b)?;
                    rows.push(row(name, "base", r.predicted, r.observed, r.pass));
                    details.push(Detail {
                        experiment: name.clone(),
                        report: r,
                        interpolant_distance: None,
                    });
                }
                Experiment::Scaling { name, a, b, cap } => {
                    let r = depend::scaling_dependence(&problem, a, b, *cap)?;
                    rows.push(row(name, "scaling", r.predicted, r.observed, r.pass));
                    details.push(Detail {
                        experiment: name.clone(),
                        report: r,
                        interpolant_distance: None,
                    });
                }
                Experiment::Partition {
                    name,
                    reference,
                    sequence,
                } => {
                    let reference = match reference {
                        Some(k) => Partition::new(k.clone())?,
                        None => problem.partition().clone(),
                    };
                    let mut previous = f64::INFINITY;
                    for knots in sequence {
                        let rep = depend::partition_dependence(&problem, &reference, &Partition::new(knots.clone())?)?;
                        let pass = rep.displacement.pass && rep.observed < previous;
                        previous = rep.observed;
                        rows.push(row(name, "partition", rep.displacement.predicted, rep.observed, pass));
                        details.push(Detail {
                            experiment: name.clone(),
                            report: rep.displacement,
                            interpolant_distance: Some(rep.observed),
                        });
                    }
                }
            }
        }
    }

    fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    export::write_experiments_csv(&out.join("results.csv"), &rows)?;
    export::write_json(&out.join("results.json"), &details)?;
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}
