//! Closed-form bounds and their empirical verification: error and
//! corollary bounds, the fractal operator's Lipschitz constant and relative
//! bound, stability under germ/base perturbation, and sensitivity to
//! perturbed maps.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::ifs::{PerturbationSpec, PerturbedProblem};
use crate::norms;
use crate::partition::Partition;
use crate::problem::Problem;
use crate::rb::{depth_for_tolerance, tail_bound, MAX_DEPTH};
use crate::sampled::SampledFunction;
use crate::trials;

/// Series depth used as the reference evaluator in every verifier.
pub const ORACLE_DEPTH: usize = 40;

/// Absolute slack on top of the truncation bounds.
pub const BASE_TOLERANCE: f64 = 1e-6;

/// Probe polynomials used for the empirical operator norm.
pub const PROBE_COUNT: usize = 20;

/// A predicted bound next to the observed quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub predicted: f64,
    pub observed: f64,
    /// `predicted - observed`.
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs: BTreeMap<String, f64>,
}

impl BoundReport {
    /// Passes when `observed ≤ predicted + tolerance`.
    pub fn new(
        name: &str,
        predicted: f64,
        observed: f64,
        tolerance: f64,
        inputs: BTreeMap<String, f64>,
    ) -> Self {
        Self {
            name: name.into(),
            predicted,
            observed,
            margin: predicted - observed,
            tolerance,
            pass: observed <= predicted + tolerance,
            inputs,
        }
    }

    /// Passes when `observed < threshold` strictly.
    pub fn strict(name: &str, threshold: f64, observed: f64, inputs: BTreeMap<String, f64>) -> Self {
        Self {
            name: name.into(),
            predicted: threshold,
            observed,
            margin: threshold - observed,
            tolerance: 0.0,
            pass: observed < threshold,
            inputs,
        }
    }

    pub fn with_input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.into(), value);
        self
    }
}

/// Per-trial reports of a randomized check and the tightest one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Campaign {
    pub name: String,
    pub reports: Vec<BoundReport>,
    /// Trials dropped as degenerate.
    pub skipped: usize,
}

impl Campaign {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.pass).count()
    }

    /// Report with the smallest `margin + tolerance`.
    pub fn worst(&self) -> Option<&BoundReport> {
        self.reports
            .iter()
            .min_by(|a, b| (a.margin + a.tolerance).total_cmp(&(b.margin + b.tolerance)))
    }

    /// Single report summarizing the campaign: worst trial, with counts.
    pub fn summary(&self) -> Option<BoundReport> {
        let worst = self.worst()?.clone();
        let mut r = BoundReport {
            pass: self.pass(),
            ..worst
        };
        r.name = self.name.clone();
        r.inputs.insert("trials".into(), self.reports.len() as f64);
        r.inputs.insert("skipped".into(), self.skipped as f64);
        r.inputs.insert("violations".into(), self.violations() as f64);
        Some(r)
    }
}

/// One base operator `L_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseOperator {
    /// Line through `(x_0, f(x_0))` and `(x_N, f(x_N))`.
    EndpointLine,
    /// Piecewise-linear interpolant of `f` at the knots.
    KnotPiecewiseLinear,
    /// `λ f + (1-λ) · endpoint line`.
    Blend { lambda: f64 },
}

impl BaseOperator {
    pub fn apply(&self, f: &FunctionSpec, p: &Partition) -> FunctionSpec {
        let (x0, xn) = (p.start(), p.end());
        let line = FunctionSpec::line((x0, f.eval(x0)), (xn, f.eval(xn)));
        match *self {
            BaseOperator::EndpointLine => line,
            BaseOperator::KnotPiecewiseLinear => FunctionSpec::PiecewiseLinear {
                xs: p.knots().to_vec(),
                ys: p.knots().iter().map(|&x| f.eval(x)).collect(),
            },
            BaseOperator::Blend { lambda } => {
                FunctionSpec::combination([(lambda, f.clone()), (1.0 - lambda, line)])
            }
        }
    }

    /// Sup-norm operator bound `|L_r|`.
    pub fn analytic_norm(&self) -> f64 {
        match *self {
            BaseOperator::EndpointLine | BaseOperator::KnotPiecewiseLinear => 1.0,
            BaseOperator::Blend { lambda } => lambda.abs() + (1.0 - lambda).abs(),
        }
    }
}

/// Base operators per level with a repeat-last tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BaseOperatorSpec {
    levels: Vec<BaseOperator>,
}

impl BaseOperatorSpec {
    pub fn new(levels: Vec<BaseOperator>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyLevels);
        }
        Ok(Self { levels })
    }

    pub fn stationary(op: BaseOperator) -> Self {
        Self { levels: vec![op] }
    }

    pub fn level(&self, r: usize) -> BaseOperator {
        self.levels[r.clamp(1, self.levels.len()) - 1]
    }

    pub fn prefix(&self) -> &[BaseOperator] {
        &self.levels
    }

    /// `b_r = L_r f` for the explicit prefix.
    pub fn bases(&self, f: &FunctionSpec, p: &Partition) -> Vec<FunctionSpec> {
        self.levels.iter().map(|op| op.apply(f, p)).collect()
    }

    /// `|L| = sup_r |L_r|` from the analytic values.
    pub fn analytic_norm(&self) -> f64 {
        self.levels
            .iter()
            .map(BaseOperator::analytic_norm)
            .fold(0.0, f64::max)
    }

    /// Largest `‖L_r q‖∞ / ‖q‖∞` over random polynomial probes of degree at
    /// most 5 on the problem grid.
    pub fn empirical_norm(&self, problem: &Problem, seed: u64) -> Result<f64> {
        let p = problem.partition();
        let grid = problem.grid();
        let mut rng = trials::trial_rng(seed, 0);
        let mut worst = 0.0_f64;
        for _ in 0..PROBE_COUNT {
            let q = trials::random_polynomial(&mut rng, 5);
            let qn = norms::sup_norm(&q, grid)?;
            if qn < 1e-12 {
                continue;
            }
            for op in &self.levels {
                worst = worst.max(norms::sup_norm(&op.apply(&q, p), grid)? / qn);
            }
        }
        Ok(worst)
    }
}

/// Problem with `b_r = L_r f`.
pub fn with_operator_bases(problem: &Problem, lspec: &BaseOperatorSpec) -> Result<Problem> {
    operator_problem(problem, problem.germ().clone(), lspec)
}

/// Problem with germ `germ` and bases `L_r germ`; everything else is kept.
pub fn operator_problem(
    problem: &Problem,
    germ: FunctionSpec,
    lspec: &BaseOperatorSpec,
) -> Result<Problem> {
    let bases = lspec.bases(&germ, problem.partition());
    problem.modified(|cfg| {
        cfg.levels = cfg.levels.with_bases(&bases)?;
        cfg.germ = germ;
        cfg.ordinates = None;
        Ok(())
    })
}

fn oracle(problem: &Problem) -> SampledFunction {
    problem.series_on_grid(ORACLE_DEPTH)
}

fn oracle_tail(problem: &Problem) -> f64 {
    problem.series_tail_bound(ORACLE_DEPTH)
}

fn inputs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// `‖f^α - f‖∞ ≤ ‖α‖∞/(1-‖α‖∞) · sup_r ‖f - b_r‖∞` for the problem's own
/// bases.
pub fn error_bound_own(problem: &Problem) -> Result<BoundReport> {
    let a = problem.alpha_sup();
    let gap = problem.base_gap();
    let predicted = a / (1.0 - a) * gap;
    let observed = oracle(problem).sup_distance(&problem.germ_samples())?;
    Ok(BoundReport::new(
        "error",
        predicted,
        observed,
        BASE_TOLERANCE + oracle_tail(problem),
        inputs(&[("alpha", a), ("base_gap", gap), ("depth", ORACLE_DEPTH as f64)]),
    ))
}

/// Error bound with `b_r = L_r f`.
pub fn error_bound(problem: &Problem, lspec: &BaseOperatorSpec) -> Result<BoundReport> {
    error_bound_own(&with_operator_bases(problem, lspec)?)
}

/// `‖f^α - L_j f‖∞ ≤ 1/(1-‖α‖∞) · sup_r ‖f - b_r‖∞` with the problem's own
/// bases; `L_j f` is `b_j`.
pub fn corollary_bound_own(problem: &Problem, j: usize) -> Result<BoundReport> {
    let a = problem.alpha_sup();
    let gap = problem.base_gap();
    let predicted = gap / (1.0 - a);
    let bj = problem.grid().sample(problem.levels().base(j));
    let observed = oracle(problem).sup_distance(&bj)?;
    Ok(BoundReport::new(
        "corollary",
        predicted,
        observed,
        BASE_TOLERANCE + oracle_tail(problem),
        inputs(&[
            ("alpha", a),
            ("base_gap", gap),
            ("j", j as f64),
            ("depth", ORACLE_DEPTH as f64),
        ]),
    ))
}

pub fn corollary_bound(problem: &Problem, lspec: &BaseOperatorSpec, j: usize) -> Result<BoundReport> {
    corollary_bound_own(&with_operator_bases(problem, lspec)?, j)
}

/// `‖f^α‖∞ ≤ ‖f‖∞/(1-‖α‖∞) + ‖α‖∞/(1-‖α‖∞) · ‖Lf‖∞` for one germ.
pub fn relative_bound(problem: &Problem, lspec: &BaseOperatorSpec) -> Result<BoundReport> {
    let q = with_operator_bases(problem, lspec)?;
    let a = q.alpha_sup();
    let lf = q.base_sup();
    let fnorm = q.germ_sup();
    let predicted = fnorm / (1.0 - a) + a / (1.0 - a) * lf;
    let observed = norms::sup_norm_values(oracle(&q).values())?;
    Ok(BoundReport::new(
        "relative",
        predicted,
        observed,
        BASE_TOLERANCE + oracle_tail(&q),
        inputs(&[("alpha", a), ("germ_sup", fnorm), ("lf_sup", lf)]),
    ))
}

/// Fractal operator Lipschitz constant `(1 + |L| ‖α‖∞)/(1 - ‖α‖∞)`.
pub fn operator_lipschitz_constant(alpha: f64, l_norm: f64) -> f64 {
    (1.0 + l_norm * alpha) / (1.0 - alpha)
}

/// Ratio `‖f^α - g^α‖∞ / ‖f - g‖∞` for two germs against the operator
/// constant.
pub fn operator_lipschitz_pair(
    problem: &Problem,
    lspec: &BaseOperatorSpec,
    f: &FunctionSpec,
    g: &FunctionSpec,
) -> Result<BoundReport> {
    let pf = operator_problem(problem, f.clone(), lspec)?;
    let pg = operator_problem(problem, g.clone(), lspec)?;
    let den = pf.germ_samples().sup_distance(&pg.germ_samples())?;
    if den < 1e-12 {
        return Err(Error::DegeneratePair(1e-12));
    }
    let num = oracle(&pf).sup_distance(&oracle(&pg))?;
    let a = problem.alpha_sup();
    let l = lspec.analytic_norm();
    Ok(BoundReport::new(
        "operator_lipschitz",
        operator_lipschitz_constant(a, l),
        num / den,
        BASE_TOLERANCE + (oracle_tail(&pf) + oracle_tail(&pg)) / den,
        inputs(&[("alpha", a), ("l_norm", l), ("germ_distance", den)]),
    ))
}

/// Operator Lipschitz check over random germ pairs.
pub fn operator_lipschitz_check(
    problem: &Problem,
    lspec: &BaseOperatorSpec,
    n_trials: usize,
    seed: u64,
) -> Result<Campaign> {
    let l_emp = lspec.empirical_norm(problem, seed)?;
    let results = trials::run(n_trials, seed, |rng, _| {
        let f = trials::random_germ(rng);
        let g = trials::random_germ(rng);
        operator_lipschitz_pair(problem, lspec, &f, &g)
    });
    collect("operator_lipschitz", results, |r| r.with_input("l_empirical", l_emp))
}

/// Relative bound over random germs.
pub fn relative_bound_check(
    problem: &Problem,
    lspec: &BaseOperatorSpec,
    n_trials: usize,
    seed: u64,
) -> Result<Campaign> {
    let results = trials::run(n_trials, seed, |rng, _| {
        relative_bound(&operator_problem(problem, trials::random_germ(rng), lspec)?, lspec)
    });
    collect("relative", results, |r| r)
}

/// Error and corollary bounds over random germs, base operators and
/// scalings.
pub fn error_bound_check(problem: &Problem, n_trials: usize, seed: u64) -> Result<(Campaign, Campaign)> {
    let results = trials::run(n_trials, seed, |rng, _| {
        let q = trials::random_operator_problem(rng, problem)?;
        let j = rng.random_range(1..=q.levels().prefix_len());
        Ok::<_, Error>((error_bound_own(&q)?, corollary_bound_own(&q, j)?))
    });
    let mut err = Vec::new();
    let mut cor = Vec::new();
    for r in results {
        let (a, b) = r?;
        err.push(Ok(a));
        cor.push(Ok(b));
    }
    Ok((collect("error", err, |r| r)?, collect("corollary", cor, |r| r)?))
}

fn collect(
    name: &str,
    results: Vec<Result<BoundReport>>,
    decorate: impl Fn(BoundReport) -> BoundReport,
) -> Result<Campaign> {
    let mut reports = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(rep) => reports.push(decorate(rep)),
            Err(Error::DegeneratePair(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(Campaign {
        name: name.into(),
        reports,
        skipped,
    })
}

/// `‖f^α - f̂^α‖∞ ≤ (‖f - f̂‖∞ + ‖α‖∞ sup_r ‖b_r - b̂_r‖∞)/(1 - ‖α‖∞)`.
pub fn stability_bound(a: &Problem, b: &Problem) -> Result<BoundReport> {
    if a.partition() != b.partition() || !a.grid().same_as(b.grid()) {
        return Err(Error::PartitionMismatch);
    }
    if !a.levels().same_scaling(b.levels()) {
        return Err(Error::ScalingMismatch);
    }
    let alpha = a.alpha_sup().max(b.alpha_sup());
    let germ_gap = a.germ_samples().sup_distance(&b.germ_samples())?;
    let levels = a.levels().prefix_len().max(b.levels().prefix_len());
    let mut base_gap = 0.0_f64;
    for r in 1..=levels {
        let ba = a.grid().sample(a.levels().base(r));
        let bb = a.grid().sample(b.levels().base(r));
        base_gap = base_gap.max(ba.sup_distance(&bb)?);
    }
    let predicted = (germ_gap + alpha * base_gap) / (1.0 - alpha);
    let observed = oracle(a).sup_distance(&oracle(b))?;
    Ok(BoundReport::new(
        "stability",
        predicted,
        observed,
        BASE_TOLERANCE + oracle_tail(a) + oracle_tail(b),
        inputs(&[("alpha", alpha), ("germ_gap", germ_gap), ("base_gap", base_gap)]),
    ))
}

/// Stability over random germ and base perturbations of `problem`.
pub fn stability_check(problem: &Problem, n_trials: usize, seed: u64) -> Result<Campaign> {
    let results = trials::run(n_trials, seed, |rng, _| {
        let (a, b) = trials::random_stability_pair(rng, problem)?;
        stability_bound(&a, &b)
    });
    collect("stability", results, |r| r)
}

/// Predicted sensitivity bound from sup norms.
pub fn sensitivity_prediction(alpha: f64, t: f64, s: f64, theta: f64, phi: f64, gap: f64) -> Result<f64> {
    let rest = 1.0 - alpha - t * theta;
    if !(rest > 0.0) {
        return Err(Error::PerturbationTooLarge(format!(
            "1 - ‖α‖ - ‖t‖‖θ‖ = {rest} is not positive"
        )));
    }
    Ok(phi * s / rest + theta * gap * t / ((1.0 - alpha) * rest))
}

/// Sensitivity of the interpolant to perturbed maps.
pub fn sensitivity_bound(problem: &Problem, spec: &PerturbationSpec) -> Result<BoundReport> {
    let pp = PerturbedProblem::new(problem, spec)?;
    let n = pp.norms();
    let alpha = problem.alpha_sup();
    let gap = problem.base_gap();
    let predicted = sensitivity_prediction(alpha, n.t, n.s, n.theta, n.phi, gap)?;
    let rho = n.effective_scaling;
    let needed = depth_for_tolerance(rho, gap + n.s * n.phi, 1e-10);
    let depth = ORACLE_DEPTH.max(needed).min(MAX_DEPTH);
    let perturbed = pp.trajectory(depth)?;
    let reference = pp.reference(depth)?.on_grid();
    let observed = perturbed.sup_distance(&reference)?;
    let tail = tail_bound(alpha, gap, depth)
        + if rho > 0.0 {
            rho.powi(depth as i32) * (rho * gap + n.s * n.phi) / (1.0 - rho)
        } else {
            0.0
        };
    Ok(BoundReport::new(
        "sensitivity",
        predicted,
        observed,
        BASE_TOLERANCE + tail,
        inputs(&[
            ("alpha", alpha),
            ("t", n.t),
            ("s", n.s),
            ("theta", n.theta),
            ("phi", n.phi),
            ("base_gap", gap),
            ("depth", depth as f64),
        ]),
    ))
}

/// Sensitivity over random perturbations within the precondition.
pub fn sensitivity_check(problem: &Problem, n_trials: usize, seed: u64) -> Result<Campaign> {
    let results = trials::run(n_trials, seed, |rng, _| {
        let spec = trials::random_perturbation(rng, problem);
        sensitivity_bound(problem, &spec)
    });
    collect("sensitivity", results, |r| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::PerturbationLevel;
    use crate::levels::{Level, LevelSequence};
    use crate::problem::ProblemConfig;

    fn x() -> FunctionSpec {
        FunctionSpec::polynomial([0.0, 1.0])
    }

    fn bump() -> FunctionSpec {
        FunctionSpec::polynomial([0.0, 1.0, -1.0])
    }

    fn running(alpha: f64) -> Problem {
        let p = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
        let levels = LevelSequence::stationary(Level::uniform(
            FunctionSpec::constant(alpha),
            2,
            FunctionSpec::polynomial([0.0, 0.0, 1.0]),
        ));
        Problem::new(ProblemConfig::new(p, x(), levels)).unwrap()
    }

    #[test]
    fn report_pass_rule() {
        let r = BoundReport::new("b", 1.0, 1.0 + 5e-7, 1e-6, BTreeMap::new());
        assert!(r.pass);
        assert!((r.margin + 5e-7).abs() < 1e-15);
        assert!(!BoundReport::new("b", 1.0, 1.1, 1e-6, BTreeMap::new()).pass);
        assert!(!BoundReport::strict("h", 0.5, 0.5, BTreeMap::new()).pass);
    }

    fn p_grid_max(h: &dyn Fn(f64) -> f64) -> f64 {
        running(0.4)
            .grid()
            .points()
            .iter()
            .map(|&x| h(x).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn error_bound_examples() {
        let r = error_bound_own(&running(0.4)).unwrap();
        assert!((r.predicted - 1.0 / 6.0).abs() < 1e-12);
        // Independent oracle: on {0, 1/2, 1} every inverse map is the
        // doubling map, so the series is Σ 0.4^j (z_j - z_j²).
        let oracle = |x: f64| {
            let (mut z, mut w, mut s) = (x, 1.0, 0.0);
            for _ in 0..60 {
                z = if z < 0.5 { 2.0 * z } else { 2.0 * z - 1.0 };
                w *= 0.4;
                s += w * (z - z * z);
            }
            s
        };
        let grid_max = p_grid_max(&oracle);
        assert!((r.observed - grid_max).abs() < 1e-12, "{}", r.observed);
        assert!(r.observed > 0.148 && r.observed < 1.0 / 6.0);
        assert!(r.pass);
        let r = error_bound_own(&running(0.0)).unwrap();
        assert_eq!((r.predicted, r.observed), (0.0, 0.0));
        let line = BaseOperatorSpec::stationary(BaseOperator::EndpointLine);
        let r = error_bound(&running(0.4), &line).unwrap();
        assert_eq!(r.predicted, 0.0);
        assert!(r.observed < 1e-15);
    }

    #[test]
    fn corollary_examples() {
        let r = corollary_bound_own(&running(0.4), 1).unwrap();
        assert!((r.predicted - 5.0 / 12.0).abs() < 1e-12);
        assert!(r.pass);
        let r = corollary_bound_own(&running(0.0), 1).unwrap();
        assert!((r.predicted - 0.25).abs() < 1e-12);
        assert!((r.observed - 0.25).abs() < 1e-12);
    }

    #[test]
    fn operator_examples() {
        let id = BaseOperatorSpec::stationary(BaseOperator::EndpointLine);
        assert!((operator_lipschitz_constant(0.4, 1.0) - 7.0 / 3.0).abs() < 1e-15);
        let z = running(0.0);
        let r = operator_lipschitz_pair(&z, &id, &bump(), &FunctionSpec::polynomial([0.0, 0.5])).unwrap();
        assert!((r.observed - 1.0).abs() < 1e-12);
        assert_eq!(r.predicted, 1.0);
        let c = operator_lipschitz_check(&running(0.4), &id, 25, 3).unwrap();
        assert!(c.pass());
        assert!(operator_lipschitz_pair(&z, &id, &x(), &x()).is_err());
    }

    #[test]
    fn operator_norms() {
        let p = running(0.4);
        let blend = BaseOperatorSpec::stationary(BaseOperator::Blend { lambda: 0.3 });
        assert_eq!(blend.analytic_norm(), 1.0);
        let e = blend.empirical_norm(&p, 1).unwrap();
        assert!(e <= 1.0 + 1e-12 && e > 0.0);
        let pl = BaseOperatorSpec::stationary(BaseOperator::KnotPiecewiseLinear);
        assert!(pl.empirical_norm(&p, 1).unwrap() <= 1.0 + 1e-12);
        let b = BaseOperator::Blend { lambda: 1.5 };
        assert_eq!(b.analytic_norm(), 2.0);
    }

    #[test]
    fn relative_examples() {
        let line = BaseOperatorSpec::stationary(BaseOperator::KnotPiecewiseLinear);
        let r = relative_bound(&running(0.4), &line).unwrap();
        assert!((r.predicted - (1.0 / 0.6 + 0.4 / 0.6)).abs() < 1e-12);
        assert!(r.pass);
        let zero = operator_problem(&running(0.4), FunctionSpec::constant(0.0), &line).unwrap();
        let r = relative_bound(&zero, &line).unwrap();
        assert_eq!((r.predicted, r.observed), (0.0, 0.0));
    }

    #[test]
    fn stability_examples() {
        let a = running(0.4);
        let r = stability_bound(&a, &a).unwrap();
        assert_eq!((r.predicted, r.observed), (0.0, 0.0));
        let b = a.with_germ(x().plus(bump().scaled(0.01))).unwrap();
        let r = stability_bound(&a, &b).unwrap();
        assert!((r.predicted - 0.01 * 0.25 / 0.6).abs() < 1e-12);
        assert!(r.pass);
        let s = stability_bound(&b, &a).unwrap();
        assert_eq!((r.predicted, r.observed), (s.predicted, s.observed));
        let bb = FunctionSpec::polynomial([0.0, 0.0, 1.0]).plus(bump().scaled(0.02));
        let c = a.with_levels(a.levels().with_bases(&[bb]).unwrap()).unwrap();
        let r = stability_bound(&a, &c).unwrap();
        assert!((r.predicted - 0.4 * 0.02 * 0.25 / 0.6).abs() < 1e-12);
        assert!(r.pass);
        assert_eq!(stability_bound(&a, &running(0.3)), Err(Error::ScalingMismatch));
    }

    #[test]
    fn sensitivity_examples() {
        let p = running(0.4);
        let r = sensitivity_bound(&p, &PerturbationSpec::zero()).unwrap();
        assert_eq!((r.predicted, r.observed), (0.0, 0.0));
        let s_only = PerturbationSpec::stationary(PerturbationLevel::uniform(
            0.0,
            0.1,
            FunctionSpec::constant(0.0),
            bump(),
        ));
        let r = sensitivity_bound(&p, &s_only).unwrap();
        assert!((r.predicted - 1.0 / 24.0).abs() < 1e-12);
        assert!(r.pass);
        let t_only = PerturbationSpec::stationary(PerturbationLevel::uniform(
            0.05,
            0.0,
            FunctionSpec::constant(1.0),
            FunctionSpec::constant(0.0),
        ));
        let r = sensitivity_bound(&p, &t_only).unwrap();
        assert!((r.predicted - 0.25 * 0.05 / (0.6 * 0.55)).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn sensitivity_precondition() {
        assert!(matches!(
            sensitivity_prediction(0.4, 0.9, 0.0, 1.0, 0.0, 0.25),
            Err(Error::PerturbationTooLarge(_))
        ));
    }

    #[test]
    fn campaigns_pass_on_running_example() {
        let p = running(0.4);
        let (e, c) = error_bound_check(&p, 10, 7).unwrap();
        assert!(e.pass() && c.pass());
        assert!(stability_check(&p, 10, 7).unwrap().pass());
        assert!(sensitivity_check(&p, 10, 7).unwrap().pass());
        let line = BaseOperatorSpec::stationary(BaseOperator::EndpointLine);
        assert!(relative_bound_check(&p, &line, 10, 7).unwrap().pass());
    }
}
