//! Reproducible random configurations for randomized verification.
//!
//! Every trial draws from its own ChaCha8 stream selected by
//! `(seed, trial index)`, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{BaseOperator, BaseOperatorSpec};
use crate::error::Result;
use crate::function::FunctionSpec;
use crate::ifs::{PerturbationLevel, PerturbationSpec};
use crate::levels::{Level, LevelSequence};
use crate::norms;
use crate::partition::Partition;
use crate::problem::{Mode, Problem, ProblemConfig};

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs `n` independent trials in parallel; results keep trial order.
pub fn run<T, F>(n: usize, seed: u64, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|k| trial(&mut trial_rng(seed, k), k))
        .collect()
}

/// Coefficients uniform in `[-1, 1]`, degree uniform in `0..=max_degree`.
pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize) -> FunctionSpec {
    let degree = rng.random_range(0..=max_degree);
    FunctionSpec::polynomial(
        (0..=degree)
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect::<Vec<f64>>(),
    )
}

pub fn random_sinusoid(rng: &mut impl Rng) -> FunctionSpec {
    FunctionSpec::sinusoid(
        rng.random_range(-1.0..=1.0),
        rng.random_range(0.5..6.0),
        rng.random_range(0.0..std::f64::consts::TAU),
        rng.random_range(-0.5..=0.5),
    )
}

/// Polynomial or sinusoid with equal probability.
pub fn random_germ(rng: &mut impl Rng) -> FunctionSpec {
    if rng.random_bool(0.5) {
        random_polynomial(rng, 5)
    } else {
        random_sinusoid(rng)
    }
}

/// `g` plus the line that makes it agree with `target` at both end points.
pub fn endpoint_corrected(g: FunctionSpec, target: &FunctionSpec, p: &Partition) -> FunctionSpec {
    let (x0, xn) = (p.start(), p.end());
    let fix = FunctionSpec::line(
        (x0, target.eval(x0) - g.eval(x0)),
        (xn, target.eval(xn) - g.eval(xn)),
    );
    g.plus(fix)
}

/// `g` minus its end-point line: vanishes at both ends.
pub fn endpoint_vanishing(g: FunctionSpec, p: &Partition) -> FunctionSpec {
    endpoint_corrected(g, &FunctionSpec::constant(0.0), p)
}

/// Random polynomial corrected to match `f` at the end points.
pub fn random_base(rng: &mut impl Rng, f: &FunctionSpec, p: &Partition) -> FunctionSpec {
    endpoint_corrected(random_polynomial(rng, 5), f, p)
}

/// Constant or sinusoid with sup norm below `cap`.
pub fn random_scaling(rng: &mut impl Rng, cap: f64, constant: bool) -> FunctionSpec {
    if constant || rng.random_bool(0.5) {
        FunctionSpec::constant(rng.random_range(-cap..cap))
    } else {
        let amplitude = rng.random_range(0.0..cap);
        let offset = rng.random_range(-(cap - amplitude)..(cap - amplitude).max(1e-12));
        FunctionSpec::sinusoid(
            amplitude,
            rng.random_range(0.5..8.0),
            rng.random_range(0.0..std::f64::consts::TAU),
            offset,
        )
    }
}

/// Random strictly increasing knots on `[start, end]` with `n` intervals.
pub fn random_partition(rng: &mut impl Rng, n: usize, start: f64, end: f64) -> Partition {
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let total: f64 = weights.iter().sum();
    let mut knots = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    knots.push(start);
    for w in &weights[..n - 1] {
        acc += w;
        let t = acc / total;
        knots.push(start * (1.0 - t) + end * t);
    }
    knots.push(end);
    Partition::new(knots).expect("weights are positive")
}

/// Shape of [`random_problem`] configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomProblemOptions {
    pub min_intervals: usize,
    pub max_intervals: usize,
    pub grid: usize,
    /// Upper bound on `‖α‖∞`.
    pub cap: f64,
    /// Longest explicit level prefix.
    pub max_prefix: usize,
}

impl Default for RandomProblemOptions {
    fn default() -> Self {
        Self {
            min_intervals: 2,
            max_intervals: 6,
            grid: 1025,
            cap: 0.8,
            max_prefix: 2,
        }
    }
}

/// Random valid configuration on `[0, 1]`.
///
/// With a prefix longer than one, every level but the last uses one
/// constant scaling for all intervals; the last level, which repeats, may
/// use arbitrary per-interval scalings.
pub fn random_problem(rng: &mut impl Rng, opts: &RandomProblemOptions) -> Result<Problem> {
    let n = rng.random_range(opts.min_intervals..=opts.max_intervals);
    let p = random_partition(rng, n, 0.0, 1.0);
    let f = random_germ(rng);
    let prefix = rng.random_range(1..=opts.max_prefix.max(1));
    let levels = (1..=prefix)
        .map(|r| {
            let base = random_base(rng, &f, &p);
            if r < prefix {
                Level::uniform(random_scaling(rng, opts.cap, true), n, base)
            } else {
                Level::new((0..n).map(|_| random_scaling(rng, opts.cap, false)).collect(), base)
            }
        })
        .collect();
    Problem::new(ProblemConfig::new(p, f, LevelSequence::new(levels)?).with_grid(opts.grid))
}

/// Random base operators, one or two levels.
pub fn random_operator_spec(rng: &mut impl Rng) -> BaseOperatorSpec {
    let levels = rng.random_range(1..=2);
    BaseOperatorSpec::new(
        (0..levels)
            .map(|_| match rng.random_range(0..3) {
                0 => BaseOperator::EndpointLine,
                1 => BaseOperator::KnotPiecewiseLinear,
                _ => BaseOperator::Blend {
                    lambda: rng.random_range(0.0..1.0),
                },
            })
            .collect(),
    )
    .expect("at least one level")
}

fn random_scalings(rng: &mut impl Rng, n: usize, levels: usize, cap: f64) -> Vec<Vec<FunctionSpec>> {
    (0..levels)
        .map(|_| (0..n).map(|_| random_scaling(rng, cap, false)).collect())
        .collect()
}

/// `problem`'s partition and grid with a random germ, random base
/// operators `b_r = L_r f` and random scalings, in continuous mode.
pub fn random_operator_problem(rng: &mut impl Rng, problem: &Problem) -> Result<Problem> {
    let n = problem.partition().intervals();
    let f = random_germ(rng);
    let lspec = random_operator_spec(rng);
    let bases = lspec.bases(&f, problem.partition());
    let scalings = random_scalings(rng, n, bases.len(), 0.9);
    problem.modified(|cfg| {
        let levels = LevelSequence::new(
            scalings
                .into_iter()
                .zip(bases)
                .map(|(s, b)| Level::new(s, b))
                .collect(),
        )?;
        cfg.levels = levels;
        cfg.mode = Mode::Continuous;
        cfg.germ = f;
        cfg.ordinates = None;
        Ok(())
    })
}

/// Two problems sharing partition and scalings, with perturbed germ and
/// bases.
pub fn random_stability_pair(rng: &mut impl Rng, problem: &Problem) -> Result<(Problem, Problem)> {
    let a = random_operator_problem(rng, problem)?;
    let p = a.partition().clone();
    let eps_f = if rng.random_bool(0.8) { rng.random_range(0.0..0.1) } else { 0.0 };
    let eps_b = if rng.random_bool(0.8) { rng.random_range(0.0..0.1) } else { 0.0 };
    let f_hat = a.germ().clone().plus(random_germ(rng).scaled(eps_f));
    let bases: Vec<FunctionSpec> = a
        .levels()
        .prefix()
        .iter()
        .map(|l| {
            let moved = l.base.clone().plus(random_polynomial(rng, 5).scaled(eps_b));
            endpoint_corrected(moved, &f_hat, &p)
        })
        .collect();
    let b = a.modified(|cfg| {
        cfg.levels = cfg.levels.with_bases(&bases)?;
        cfg.germ = f_hat;
        cfg.ordinates = None;
        Ok(())
    })?;
    Ok((a, b))
}

/// Random `(t, s, θ, φ)` satisfying `1 - ‖α‖∞ - ‖t‖∞‖θ‖∞ > 0` and the
/// end-point conditions on `φ`.
pub fn random_perturbation(rng: &mut impl Rng, problem: &Problem) -> PerturbationSpec {
    let n = problem.partition().intervals();
    let p = problem.partition();
    let alpha = problem.alpha_sup();
    let levels = rng.random_range(1..=2);
    let thetas: Vec<Vec<FunctionSpec>> = (0..levels)
        .map(|_| (0..n).map(|_| random_scaling(rng, 1.0, false)).collect())
        .collect();
    let theta_sup = thetas
        .iter()
        .flatten()
        .map(|th| norms::sup_norm(th, problem.grid()).unwrap_or(1.0))
        .fold(0.0, f64::max)
        .max(1e-3);
    let t_max = (0.9 * (1.0 - alpha) / theta_sup).min(0.9);
    let mut out = Vec::with_capacity(levels);
    for theta in thetas {
        let t = (0..n).map(|_| rng.random_range(-t_max..=t_max)).collect();
        let s = (0..n).map(|_| rng.random_range(-0.5..=0.5)).collect();
        let phi = (0..n)
            .map(|_| endpoint_vanishing(random_germ(rng), p))
            .collect();
        out.push(PerturbationLevel { t, s, theta, phi });
    }
    PerturbationSpec::new(out).expect("at least one level")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = run(8, 11, |rng, _| rng.random());
        let b: Vec<f64> = run(8, 11, |rng, _| rng.random());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn corrected_functions_match_end_points() {
        let mut rng = trial_rng(1, 0);
        let p = random_partition(&mut rng, 4, -1.0, 2.0);
        let f = random_germ(&mut rng);
        let b = random_base(&mut rng, &f, &p);
        assert!((b.eval(-1.0) - f.eval(-1.0)).abs() < 1e-12);
        assert!((b.eval(2.0) - f.eval(2.0)).abs() < 1e-12);
        let phi = endpoint_vanishing(random_germ(&mut rng), &p);
        assert!(phi.eval(-1.0).abs() < 1e-12 && phi.eval(2.0).abs() < 1e-12);
    }

    #[test]
    fn random_problems_validate() {
        for k in 0..20 {
            let mut rng = trial_rng(5, k);
            let p = random_problem(&mut rng, &RandomProblemOptions::default()).unwrap();
            assert!(p.alpha_sup() < 0.8);
            let spec = random_perturbation(&mut rng, &p);
            crate::ifs::PerturbedProblem::new(&p, &spec).unwrap();
        }
    }
}
