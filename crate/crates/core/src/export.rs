//! CSV and JSON artifacts: curves, bound reports, build summaries.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::norms::{self, NormEstimate};
use crate::problem::{Mode, Problem, ValidationReport};
use crate::rb::{Interpolant, Strategy};

/// Round-trippable formatting with 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn io(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
    w.write_record(header).map_err(|e| io(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| io(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))
}

/// `x,f,falpha` at grid resolution.
pub fn write_curve(path: &Path, interpolant: &Interpolant<'_>) -> Result<()> {
    let problem = interpolant.problem();
    let values = interpolant.on_grid();
    let germ = problem.germ_samples();
    let rows = problem
        .grid()
        .points()
        .iter()
        .zip(germ.values())
        .zip(values.values())
        .map(|((x, f), fa)| vec![format_number(*x), format_number(*f), format_number(*fa)]);
    write_rows(path, &["x", "f", "falpha"], rows)
}

/// `bound,predicted,observed,margin,pass`.
pub fn write_reports_csv(path: &Path, reports: &[BoundReport]) -> Result<()> {
    let rows = reports.iter().map(|r| {
        vec![
            r.name.clone(),
            format_number(r.predicted),
            format_number(r.observed),
            format_number(r.margin),
            r.pass.to_string(),
        ]
    });
    write_rows(path, &["bound", "predicted", "observed", "margin", "pass"], rows)
}

/// One row per dependence experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub kind: String,
    pub predicted: f64,
    pub observed: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn write_experiments_csv(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    let records = rows.iter().map(|r| {
        vec![
            r.experiment.clone(),
            r.kind.clone(),
            format_number(r.predicted),
            format_number(r.observed),
            format_number(r.margin),
            r.pass.to_string(),
        ]
    });
    write_rows(
        path,
        &["experiment", "kind", "predicted", "observed", "margin", "pass"],
        records,
    )
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    let mut f = fs::File::create(path).map_err(|e| io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io(path, e))?;
    f.write_all(b"\n").map_err(|e| io(path, e))
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildSummary {
    pub intervals: usize,
    pub grid_points: usize,
    pub strategy: Strategy,
    pub mode: Mode,
    pub depth: usize,
    pub alpha_sup: f64,
    pub base_gap: f64,
    pub germ_sup: f64,
    /// Bound `R` on the interpolant.
    pub value_bound: f64,
    pub tail_bound: f64,
    pub knot_residual: f64,
    pub interpolant: NormEstimate,
    pub validation: ValidationReport,
    pub lip_hypothesis: Option<BoundReport>,
}

impl BuildSummary {
    pub fn new(interpolant: &Interpolant<'_>) -> Result<Self> {
        let problem: &Problem = interpolant.problem();
        let values = interpolant.on_grid();
        let lip_hypothesis = match problem.mode() {
            Mode::Lipschitz => Some(norms::check_lip_hypothesis(
                problem,
                problem.config().slack,
            )?),
            Mode::Continuous => None,
        };
        Ok(Self {
            intervals: problem.partition().intervals(),
            grid_points: problem.grid().len(),
            strategy: interpolant.strategy(),
            mode: problem.mode(),
            depth: interpolant.depth(),
            alpha_sup: problem.alpha_sup(),
            base_gap: problem.base_gap(),
            germ_sup: problem.germ_sup(),
            value_bound: problem.value_bound(),
            tail_bound: problem.series_tail_bound(interpolant.depth()),
            knot_residual: interpolant.knot_residual()?,
            interpolant: NormEstimate::of_sampled(&values, problem.exponent())?,
            validation: problem.validation().clone(),
            lip_hypothesis,
        })
    }
}
