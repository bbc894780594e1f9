//! Problem configuration, hypothesis validation, and the validated
//! [`Problem`] that every evaluator works from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::levels::LevelSequence;
use crate::norms::{self, DEFAULT_SLACK};
use crate::partition::{AffineMapSet, Partition};
use crate::sampled::{Grid, SampledFunction};

/// Agreement required between base functions (and ordinates) and the germ
/// at the end points.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_GRID: usize = 1025;
pub const DEFAULT_EPS: f64 = 1e-8;

/// How many series terms / trajectory levels to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthPolicy {
    Fixed(usize),
    /// Smallest depth whose geometric tail bound is at most the tolerance.
    Tolerance(f64),
}

/// Function space the construction is carried out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    #[serde(alias = "cont")]
    Continuous,
    #[serde(alias = "lip")]
    Lipschitz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub partition: Partition,
    pub germ: FunctionSpec,
    pub levels: LevelSequence,
    /// Interpolation ordinates `y_i`; `None` means `y_i = f(x_i)`.
    pub ordinates: Option<Vec<f64>>,
    /// Hölder exponent `d` in `(0, 1]`.
    pub exponent: f64,
    pub grid_size: usize,
    pub depth: DepthPolicy,
    pub mode: Mode,
    /// Relative slack applied to grid-estimated hypothesis checks.
    pub slack: f64,
}

impl ProblemConfig {
    pub fn new(partition: Partition, germ: FunctionSpec, levels: LevelSequence) -> Self {
        Self {
            partition,
            germ,
            levels,
            ordinates: None,
            exponent: 1.0,
            grid_size: DEFAULT_GRID,
            depth: DepthPolicy::Tolerance(DEFAULT_EPS),
            mode: Mode::Continuous,
            slack: DEFAULT_SLACK,
        }
    }

    pub fn with_grid(mut self, m: usize) -> Self {
        self.grid_size = m;
        self
    }

    pub fn with_depth(mut self, depth: DepthPolicy) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_exponent(mut self, d: f64) -> Self {
        self.exponent = d;
        self
    }

    pub fn with_levels(mut self, levels: LevelSequence) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_germ(mut self, germ: FunctionSpec) -> Self {
        self.germ = germ;
        self
    }

    pub fn with_ordinates(mut self, ys: Vec<f64>) -> Self {
        self.ordinates = Some(ys);
        self
    }

    /// Interpolation targets `y_i`.
    pub fn targets(&self) -> Vec<f64> {
        match &self.ordinates {
            Some(ys) => ys.clone(),
            None => self
                .partition
                .knots()
                .iter()
                .map(|&x| self.germ.eval(x))
                .collect(),
        }
    }

    fn broadcast_scalings(&mut self) {
        let n = self.partition.intervals();
        for level in self.levels.levels_mut() {
            level.broadcast(n);
        }
    }
}

/// Outcome of checking a configuration against the convergence hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mode: Mode,
    /// Grid estimate of `‖α‖∞`.
    pub alpha_sup: f64,
    /// `[|b_r(x_0) - f(x_0)|, |b_r(x_N) - f(x_N)|]` per prefix level.
    pub endpoint_residuals: Vec<[f64; 2]>,
    /// Per-level `max_i ‖α_{i,r}‖_d / a_i^d` (Lipschitz mode only).
    pub lip_ratios: Option<Vec<f64>>,
    pub slack: f64,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    /// Computes every check without failing on hypothesis violations; only
    /// structural problems (shape, exponent, grid) are errors here.
    pub fn assess(cfg: &ProblemConfig) -> Result<Self> {
        let mut cfg = cfg.clone();
        cfg.broadcast_scalings();
        Self::assess_broadcast(&cfg, &Grid::for_partition(&cfg.partition, cfg.grid_size)?)
    }

    fn assess_broadcast(cfg: &ProblemConfig, grid: &Grid) -> Result<Self> {
        let n = cfg.partition.intervals();
        if !(cfg.exponent > 0.0 && cfg.exponent <= 1.0) {
            return Err(Error::BadExponent(cfg.exponent));
        }
        if let DepthPolicy::Tolerance(eps) = cfg.depth {
            if !(eps > 0.0) {
                return Err(Error::BadTolerance(eps));
            }
        }
        cfg.germ.check()?;
        for (r, level) in cfg.levels.prefix().iter().enumerate() {
            if level.scaling.len() != n {
                return Err(Error::IntervalCountMismatch {
                    level: r + 1,
                    expected: n,
                    got: level.scaling.len(),
                });
            }
            level.base.check()?;
            for a in &level.scaling {
                a.check()?;
            }
        }
        let (x0, xn) = (cfg.partition.start(), cfg.partition.end());
        let (f0, fn_) = (cfg.germ.eval(x0), cfg.germ.eval(xn));
        let mut alpha_sup = 0.0_f64;
        let mut endpoint_residuals = Vec::new();
        let mut warnings = Vec::new();
        for (r, level) in cfg.levels.prefix().iter().enumerate() {
            for a in &level.scaling {
                alpha_sup = alpha_sup.max(norms::sup_norm(a, grid)?);
            }
            endpoint_residuals.push([
                (level.base.eval(x0) - f0).abs(),
                (level.base.eval(xn) - fn_).abs(),
            ]);
            if level.base == cfg.germ {
                warnings.push(format!(
                    "level {}: base function equals the germ; the interpolant reduces to the germ",
                    r + 1
                ));
            }
        }
        let mut report = Self {
            mode: cfg.mode,
            alpha_sup,
            endpoint_residuals,
            lip_ratios: None,
            slack: cfg.slack,
            warnings,
        };
        if cfg.mode == Mode::Lipschitz {
            let d = cfg.exponent;
            let slopes = cfg.partition.affine_maps().slopes().to_vec();
            let mut ratios = Vec::new();
            for level in cfg.levels.prefix() {
                let mut worst = 0.0_f64;
                for (a, s) in level.scaling.iter().zip(&slopes) {
                    worst = worst.max(norms::norm_d(a, d, grid)? / s.powf(d));
                }
                ratios.push(worst);
            }
            report.lip_ratios = Some(ratios);
        }
        Ok(report)
    }

    /// First violated hypothesis, if any.
    pub fn verdict(&self) -> Result<()> {
        if !(self.alpha_sup < 1.0) {
            return Err(Error::ScalingNotContractive {
                norm: self.alpha_sup,
            });
        }
        for (r, res) in self.endpoint_residuals.iter().enumerate() {
            for (k, what) in [(0, "base at x_0"), (1, "base at x_N")] {
                if !(res[k] <= ENDPOINT_TOLERANCE) {
                    return Err(Error::EndpointMismatch {
                        level: r + 1,
                        what: what.into(),
                        at: k as f64,
                        residual: res[k],
                    });
                }
            }
        }
        if let Some(ratios) = &self.lip_ratios {
            for (r, &ratio) in ratios.iter().enumerate() {
                if !(ratio * (1.0 + self.slack) < 0.5) {
                    return Err(Error::LipConditionViolated {
                        level: r + 1,
                        ratio,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn passes(&self) -> bool {
        self.verdict().is_ok()
    }
}

/// Checks `cfg` against the convergence hypotheses of its mode and returns
/// the full report, or the first violation.
pub fn validate_level_sequence(cfg: &ProblemConfig) -> Result<ValidationReport> {
    let report = ValidationReport::assess(cfg)?;
    report.verdict()?;
    Ok(report)
}

/// Per-grid-point data shared by every RB application.
#[derive(Debug, Clone)]
pub(crate) struct GridPlan {
    /// Subinterval holding the node.
    pub interval: Vec<usize>,
    /// `Q_i(x_k)`.
    pub preimage: Vec<f64>,
    /// Grid cell and weight of the preimage.
    pub cell: Vec<(usize, f64)>,
    /// `f(x_k)`.
    pub germ: Vec<f64>,
}

/// Level data evaluated at the preimages of the grid nodes.
#[derive(Debug, Clone)]
pub(crate) struct LevelTable {
    /// `α_{i_k, r}(Q_{i_k}(x_k))`.
    pub alpha: Vec<f64>,
    /// Grid samples of `b_r`, interpolated at the preimages.
    pub base: Vec<f64>,
}

/// A configuration that passed [`validate_level_sequence`], together with
/// the grid and the cached quantities the evaluators need.
#[derive(Debug, Clone)]
pub struct Problem {
    cfg: ProblemConfig,
    maps: AffineMapSet,
    grid: Grid,
    report: ValidationReport,
    germ_sup: f64,
    base_gap: f64,
    base_sup: f64,
    pub(crate) plan: GridPlan,
    pub(crate) tables: Vec<LevelTable>,
}

impl Problem {
    pub fn new(cfg: ProblemConfig) -> Result<Self> {
        let mut cfg = cfg;
        cfg.broadcast_scalings();
        let grid = Grid::for_partition(&cfg.partition, cfg.grid_size)?;
        let report = ValidationReport::assess_broadcast(&cfg, &grid)?;
        report.verdict()?;
        check_ordinates(&cfg)?;
        let maps = cfg.partition.affine_maps();

        let germ_samples = grid.sample(&cfg.germ);
        let germ_sup = norms::sup_norm_values(germ_samples.values())?;
        let mut base_gap = 0.0_f64;
        let mut base_sup = 0.0_f64;
        let mut base_samples = Vec::new();
        for level in cfg.levels.prefix() {
            let b = grid.sample(&level.base);
            base_sup = base_sup.max(norms::sup_norm_values(b.values())?);
            base_gap = base_gap.max(germ_samples.sup_distance(&b)?);
            base_samples.push(b);
        }

        let mut plan = GridPlan {
            interval: Vec::with_capacity(grid.len()),
            preimage: Vec::with_capacity(grid.len()),
            cell: Vec::with_capacity(grid.len()),
            germ: germ_samples.into_values(),
        };
        for &x in grid.points() {
            let i = cfg.partition.locate_unchecked(x);
            let u = maps.inverse(i, x);
            plan.interval.push(i);
            plan.preimage.push(u);
            plan.cell.push(grid.cell(u));
        }
        let tables = cfg
            .levels
            .prefix()
            .iter()
            .zip(&base_samples)
            .map(|(level, b)| LevelTable {
                alpha: plan
                    .interval
                    .iter()
                    .zip(&plan.preimage)
                    .map(|(&i, &u)| level.scaling[i].eval(u))
                    .collect(),
                base: plan.cell.iter().map(|&(k, w)| b.at_cell(k, w)).collect(),
            })
            .collect();

        Ok(Self {
            cfg,
            maps,
            grid,
            report,
            germ_sup,
            base_gap,
            base_sup,
            plan,
            tables,
        })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.cfg
    }

    pub fn partition(&self) -> &Partition {
        &self.cfg.partition
    }

    pub fn maps(&self) -> &AffineMapSet {
        &self.maps
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn germ(&self) -> &FunctionSpec {
        &self.cfg.germ
    }

    pub fn levels(&self) -> &LevelSequence {
        &self.cfg.levels
    }

    pub fn exponent(&self) -> f64 {
        self.cfg.exponent
    }

    pub fn mode(&self) -> Mode {
        self.cfg.mode
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    /// Grid estimate of `‖α‖∞ = sup_r max_i ‖α_{i,r}‖∞`.
    pub fn alpha_sup(&self) -> f64 {
        self.report.alpha_sup
    }

    /// Grid estimate of `sup_r ‖f - b_r‖∞`.
    pub fn base_gap(&self) -> f64 {
        self.base_gap
    }

    /// Grid estimate of `sup_r ‖b_r‖∞`.
    pub fn base_sup(&self) -> f64 {
        self.base_sup
    }

    /// Grid estimate of `‖f‖∞`.
    pub fn germ_sup(&self) -> f64 {
        self.germ_sup
    }

    /// `R = ‖f‖∞ + ‖α‖∞/(1-‖α‖∞) · sup_r ‖f - b_r‖∞`, a bound on the
    /// interpolant independent of the partition.
    pub fn value_bound(&self) -> f64 {
        let a = self.alpha_sup();
        self.germ_sup + a / (1.0 - a) * self.base_gap
    }

    /// Germ sampled on the problem grid.
    pub fn germ_samples(&self) -> SampledFunction {
        SampledFunction::from_parts(self.grid.clone(), self.plan.germ.clone())
    }

    /// Interpolation targets `y_i`.
    pub fn targets(&self) -> Vec<f64> {
        self.cfg.targets()
    }

    /// Rebuilds the problem from an edited copy of its configuration.
    pub fn modified(&self, edit: impl FnOnce(&mut ProblemConfig) -> Result<()>) -> Result<Problem> {
        let mut cfg = self.cfg.clone();
        edit(&mut cfg)?;
        Problem::new(cfg)
    }

    /// Rebuilds the problem on another partition with the same germ and
    /// levels.
    pub fn with_partition(&self, partition: Partition) -> Result<Problem> {
        self.modified(|cfg| {
            cfg.partition = partition;
            cfg.ordinates = None;
            Ok(())
        })
    }

    /// Rebuilds the problem with another level sequence.
    pub fn with_levels(&self, levels: LevelSequence) -> Result<Problem> {
        Problem::new(self.cfg.clone().with_levels(levels))
    }

    /// Rebuilds the problem with another germ.
    pub fn with_germ(&self, germ: FunctionSpec) -> Result<Problem> {
        let mut cfg = self.cfg.clone().with_germ(germ);
        cfg.ordinates = None;
        Problem::new(cfg)
    }

    pub(crate) fn table(&self, level: usize) -> &LevelTable {
        &self.tables[level.clamp(1, self.tables.len()) - 1]
    }
}

fn check_ordinates(cfg: &ProblemConfig) -> Result<()> {
    let Some(ys) = &cfg.ordinates else {
        return Ok(());
    };
    let knots = cfg.partition.knots();
    if ys.len() != knots.len() {
        return Err(Error::Config(format!(
            "{} ordinates for {} knots",
            ys.len(),
            knots.len()
        )));
    }
    for (index, (&x, &y)) in knots.iter().zip(ys).enumerate() {
        let fx = cfg.germ.eval(x);
        if !((y - fx).abs() <= ENDPOINT_TOLERANCE) {
            return Err(Error::OrdinateMismatch { index, y, fx });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levels::Level;

    fn cfg(alpha: f64, base: FunctionSpec) -> ProblemConfig {
        let p = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
        let levels = LevelSequence::stationary(Level::uniform(FunctionSpec::constant(alpha), 2, base));
        ProblemConfig::new(p, FunctionSpec::polynomial([0.0, 1.0]), levels)
    }

    fn square() -> FunctionSpec {
        FunctionSpec::polynomial([0.0, 0.0, 1.0])
    }

    #[test]
    fn lip_condition_examples() {
        let c = cfg(0.4, square());
        assert!(validate_level_sequence(&c).is_ok());
        let err = validate_level_sequence(&c.clone().with_mode(Mode::Lipschitz)).unwrap_err();
        match err {
            Error::LipConditionViolated { ratio, .. } => assert!((ratio - 0.8).abs() < 1e-12),
            e => panic!("unexpected {e:?}"),
        }
        let c = cfg(0.2, square()).with_mode(Mode::Lipschitz);
        let rep = validate_level_sequence(&c).unwrap();
        assert!((rep.lip_ratios.unwrap()[0] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn endpoint_mismatch() {
        let c = cfg(0.4, FunctionSpec::polynomial([0.1, 0.0, 1.0]));
        match validate_level_sequence(&c).unwrap_err() {
            Error::EndpointMismatch { level, residual, .. } => {
                assert_eq!(level, 1);
                assert!((residual - 0.1).abs() < 1e-12);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn scaling_not_contractive() {
        let c = cfg(1.2, square());
        assert!(matches!(
            Problem::new(c),
            Err(Error::ScalingNotContractive { .. })
        ));
        let c = cfg(-1.0, square());
        assert!(matches!(
            validate_level_sequence(&c),
            Err(Error::ScalingNotContractive { .. })
        ));
    }

    #[test]
    fn base_equal_to_germ_warns() {
        let c = cfg(0.4, FunctionSpec::polynomial([0.0, 1.0]));
        let rep = validate_level_sequence(&c).unwrap();
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn structural_errors() {
        let c = cfg(0.4, square()).with_exponent(0.0);
        assert_eq!(validate_level_sequence(&c), Err(Error::BadExponent(0.0)));
        let c = cfg(0.4, square()).with_depth(DepthPolicy::Tolerance(0.0));
        assert_eq!(validate_level_sequence(&c), Err(Error::BadTolerance(0.0)));
        let mut c = cfg(0.4, square());
        c.levels = LevelSequence::stationary(Level::uniform(
            FunctionSpec::constant(0.1),
            3,
            square(),
        ));
        assert!(matches!(
            Problem::new(c),
            Err(Error::IntervalCountMismatch { expected: 2, got: 3, .. })
        ));
    }

    #[test]
    fn ordinates_must_match_germ() {
        let c = cfg(0.4, square()).with_ordinates(vec![0.0, 0.5, 1.0]);
        assert!(Problem::new(c).is_ok());
        let c = cfg(0.4, square()).with_ordinates(vec![0.0, 0.7, 1.0]);
        assert!(matches!(
            Problem::new(c),
            Err(Error::OrdinateMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn cached_norms() {
        let p = Problem::new(cfg(0.4, square())).unwrap();
        assert_eq!(p.alpha_sup(), 0.4);
        assert_eq!(p.base_gap(), 0.25);
        assert_eq!(p.germ_sup(), 1.0);
        assert!((p.value_bound() - 7.0 / 6.0).abs() < 1e-15);
    }
}
