//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p nsfif-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use nsfif::bounds::{self, ORACLE_DEPTH};
use nsfif::depend;
use nsfif::export;
use nsfif::ifs::PerturbedProblem;
use nsfif::norms;
use nsfif::trials::{self, RandomProblemOptions};
use nsfif::{
    DepthPolicy, FunctionSpec, Level, LevelSequence, Mode, Partition, PerturbationSpec, Problem,
    ProblemConfig, Result, SampledFunction, Strategy,
};
use rand::Rng;

const SEED: u64 = 20_240_917;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn running(alpha: f64, grid: usize) -> Problem {
    let p = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
    let levels = LevelSequence::stationary(Level::uniform(
        FunctionSpec::constant(alpha),
        2,
        FunctionSpec::polynomial([0.0, 0.0, 1.0]),
    ));
    Problem::new(ProblemConfig::new(p, FunctionSpec::polynomial([0.0, 1.0]), levels).with_grid(grid))
        .unwrap()
}

fn criterion_configs() -> Vec<Problem> {
    trials::run(20, SEED, |rng, _| {
        trials::random_problem(rng, &RandomProblemOptions::default()).unwrap()
    })
}

fn c1_interpolation() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst_series = 0.0_f64;
    let mut worst_traj = 0.0_f64;
    for p in criterion_configs() {
        worst_series = worst_series.max(p.interpolant(Strategy::Series)?.knot_residual()?);
        worst_traj = worst_traj.max(p.interpolant(Strategy::Trajectory)?.knot_residual()?);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_series <= 1e-8 && worst_traj <= 1e-8 && secs < 10.0,
        format!(
            "20 configs, max knot residual series {worst_series:.3e}, trajectory {worst_traj:.3e} (tol 1e-8), {secs:.2} s (limit 10 s)"
        ),
    )
}

fn c2_degenerate() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for p in criterion_configs().iter().take(10) {
        let n = p.partition().intervals();
        let zero = p.with_levels(p.levels().with_scalings(&[vec![FunctionSpec::constant(0.0); n]])?)?;
        let same = p.with_levels(p.levels().with_bases(&[p.germ().clone()])?)?;
        for q in [&zero, &same] {
            let f = q.germ_samples();
            for strategy in [Strategy::Series, Strategy::Trajectory] {
                worst = worst.max(q.interpolant(strategy)?.on_grid().sup_distance(&f)?);
            }
        }
    }
    outcome(
        worst == 0.0,
        format!("alpha = 0 and b = f on 10 configs, both evaluators: max |f^a - f| = {worst:e} (must be exactly 0)"),
    )
}

fn c3_hand_traced() -> Result<Outcome> {
    let p = running(0.4, 1025);
    let s1 = (p.series_eval(0.25, 40)? - 0.35).abs();
    let s2 = (p.series_eval(0.75, 40)? - 0.85).abs();
    let tr = p.backward_trajectory(&p.germ_samples(), 30)?;
    let t1 = (tr.eval(0.25)? - 0.35).abs();
    let t2 = (tr.eval(0.75)? - 0.85).abs();
    outcome(
        s1.max(s2) <= 1e-9 && t1.max(t2) <= 1e-6,
        format!(
            "series errors {s1:.2e}, {s2:.2e} (tol 1e-9); trajectory errors {t1:.2e}, {t2:.2e} (tol 1e-6, M = 1025)"
        ),
    )
}

fn c4_stationary() -> Result<Outcome> {
    let opts = RandomProblemOptions {
        max_prefix: 1,
        cap: 0.45,
        ..RandomProblemOptions::default()
    };
    let configs: Vec<Problem> = trials::run(10, SEED + 4, |rng, _| trials::random_problem(rng, &opts).unwrap());
    let mut worst = 0.0_f64;
    for p in &configs {
        let fp = p.stationary_fixed_point()?.on_grid();
        let tr = p.backward_trajectory(&p.germ_samples(), 30)?.on_grid();
        worst = worst.max(fp.sup_distance(&tr)?);
    }
    outcome(
        worst <= 1e-8,
        format!("10 stationary configs (|alpha| < 0.45): max sup |depth-30 trajectory - fixed point| = {worst:.3e} (tol 1e-8)"),
    )
}

fn c5_geometric() -> Result<Outcome> {
    let mut worst_excess = f64::NEG_INFINITY;
    let mut checked = 0usize;
    for p in criterion_configs() {
        let inc = p.trajectory_increments(20)?;
        let limit = p.alpha_sup() + 0.05;
        for k in 1..inc.len() {
            if inc[k - 1] < 1e-13 {
                continue;
            }
            checked += 1;
            worst_excess = worst_excess.max(inc[k] / inc[k - 1] - limit);
        }
    }
    outcome(
        worst_excess <= 0.0,
        format!(
            "{checked} successive-depth ratios over 20 configs: max(ratio - (|alpha| + 0.05)) = {worst_excess:.4}"
        ),
    )
}

fn campaign_line(reports: &[bounds::BoundReport]) -> (bool, String) {
    let violations = reports.iter().filter(|r| !r.pass).count();
    let tightest = reports
        .iter()
        .filter(|r| r.predicted > 0.0)
        .map(|r| r.observed / r.predicted)
        .fold(0.0, f64::max);
    (
        violations == 0,
        format!(
            "{} trials, {violations} violations, max observed/predicted = {tightest:.4}",
            reports.len()
        ),
    )
}

fn c6_error() -> Result<Outcome> {
    let results = trials::run(100, SEED + 6, |rng, _| -> Result<_> {
        let base = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let q = trials::random_operator_problem(rng, &base)?;
        let j = rng.random_range(1..=q.levels().prefix_len());
        Ok((bounds::error_bound_own(&q)?, bounds::corollary_bound_own(&q, j)?))
    });
    let mut err = Vec::new();
    let mut cor = Vec::new();
    for r in results {
        let (a, b) = r?;
        err.push(a);
        cor.push(b);
    }
    let (pe, de) = campaign_line(&err);
    let (pc, dc) = campaign_line(&cor);
    outcome(pe && pc, format!("error: {de}; corollary: {dc}"))
}

fn c7_stability() -> Result<Outcome> {
    let reports = trials::run(100, SEED + 7, |rng, _| -> Result<_> {
        let base = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let (a, b) = trials::random_stability_pair(rng, &base)?;
        bounds::stability_bound(&a, &b)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (pass, detail) = campaign_line(&reports);
    outcome(pass, detail)
}

fn c8_sensitivity() -> Result<Outcome> {
    let reports = trials::run(100, SEED + 8, |rng, _| -> Result<_> {
        let p = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let spec = trials::random_perturbation(rng, &p);
        bounds::sensitivity_bound(&p, &spec)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (pass, detail) = campaign_line(&reports);
    let mut zero_worst = 0.0_f64;
    for p in criterion_configs().iter().take(5) {
        let r = bounds::sensitivity_bound(p, &PerturbationSpec::zero())?;
        zero_worst = zero_worst.max(r.observed);
        let pp = PerturbedProblem::new(p, &PerturbationSpec::zero())?;
        let a = pp.trajectory(ORACLE_DEPTH)?;
        let b = p.backward_trajectory(&p.germ_samples(), ORACLE_DEPTH)?.on_grid();
        zero_worst = zero_worst.max(a.sup_distance(&b)?);
    }
    outcome(
        pass && zero_worst == 0.0,
        format!("{detail}; t = s = 0 observed {zero_worst:e} (must be exactly 0)"),
    )
}

fn c9_dependence() -> Result<Outcome> {
    let base = trials::run(50, SEED + 91, |rng, _| -> Result<_> {
        let p = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let f = p.germ().clone();
        let levels = p.levels().prefix_len();
        let a: Vec<FunctionSpec> = (0..levels).map(|_| trials::random_base(rng, &f, p.partition())).collect();
        let b: Vec<FunctionSpec> = (0..levels).map(|_| trials::random_base(rng, &f, p.partition())).collect();
        depend::base_dependence(&p, &a, &b)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let base_excess = base
        .iter()
        .map(|r| r.observed - r.predicted)
        .fold(f64::NEG_INFINITY, f64::max);
    let base_ok = base.iter().all(|r| r.pass);

    let scaling = trials::run(50, SEED + 92, |rng, _| -> Result<_> {
        let p = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let n = p.partition().intervals();
        let cap = rng.random_range(0.3..0.9);
        let levels = p.levels().prefix_len();
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<FunctionSpec>> {
            (0..levels)
                .map(|_| (0..n).map(|_| trials::random_scaling(rng, cap, false)).collect())
                .collect()
        };
        let a = draw(rng);
        let b = draw(rng);
        depend::scaling_dependence(&p, &a, &b, cap)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let scaling_ok = scaling.iter().all(|r| r.pass);
    let scaling_excess = scaling
        .iter()
        .map(|r| r.observed - r.predicted)
        .fold(f64::NEG_INFINITY, f64::max);

    let witnesses = trials::run(10, SEED + 93, |rng, _| -> Result<_> {
        let p = trials::random_problem(rng, &RandomProblemOptions::default())?;
        let knots = p.partition().knots();
        let spacing = knots.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let n = knots.len();
        let moved: Vec<f64> = knots
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                if k == 0 || k == n - 1 {
                    x
                } else {
                    x + rng.random_range(-0.1..0.1) * spacing
                }
            })
            .collect();
        depend::partition_continuity(&p, p.partition(), &Partition::new(moved)?, 4)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let decreasing = witnesses.iter().filter(|w| w.decreasing).count();
    let offenders: Vec<String> = witnesses
        .iter()
        .filter(|w| !w.decreasing)
        .map(|w| w.observed.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" > "))
        .collect();

    outcome(
        base_ok && scaling_ok && decreasing == witnesses.len(),
        format!(
            "base: 50 pairs, max(ratio - a/(1-a)) = {base_excess:.3e} (slack 1e-4); scaling: 50 pairs, max(observed - predicted) = {scaling_excess:.3e}; partition: {decreasing}/10 witnesses strictly decreasing{}"
        , if offenders.is_empty() { String::new() } else { format!(" (non-monotone: {})", offenders.join(", ")) }),
    )
}

fn lip_problem(rng: &mut rand_chacha::ChaCha8Rng) -> Option<(Problem, f64)> {
    let n = rng.random_range(2..=4);
    let p = trials::random_partition(rng, n, 0.0, 1.0);
    let d = [1.0, 0.75, 0.5][rng.random_range(0..3)];
    let a_min = p.affine_maps().slopes().iter().cloned().fold(f64::INFINITY, f64::min);
    let cap = 0.45 * a_min.powf(d);
    let f = trials::random_germ(rng);
    let scaling: Vec<FunctionSpec> = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                FunctionSpec::constant(rng.random_range(-cap..cap))
            } else {
                let amp = rng.random_range(0.0..cap / 4.0);
                FunctionSpec::sinusoid(amp, rng.random_range(0.5..2.0), rng.random_range(0.0..6.0), 0.5 * cap)
            }
        })
        .collect();
    let levels = LevelSequence::stationary(Level::new(scaling, trials::random_base(rng, &f, &p)));
    let cfg = ProblemConfig::new(p, f, levels)
        .with_grid(513)
        .with_exponent(d)
        .with_mode(Mode::Lipschitz);
    let problem = Problem::new(cfg).ok()?;
    let ratio = norms::lip_ratios(&problem)
        .ok()?
        .into_iter()
        .fold(0.0, f64::max);
    Some((problem, ratio))
}

fn c10_lipschitz() -> Result<Outcome> {
    let mut configs = Vec::new();
    let mut k = 0;
    while configs.len() < 5 && k < 200 {
        if let Some(c) = lip_problem(&mut trials::trial_rng(SEED + 10, k)) {
            configs.push(c);
        }
        k += 1;
    }
    let mut checked = 0usize;
    let mut worst_excess = f64::NEG_INFINITY;
    for (idx, (p, ratio)) in configs.iter().enumerate() {
        let pairs = trials::run(10, SEED + 100 + idx as u64, |rng, _| -> Result<_> {
            let part = p.partition();
            let perturb = |rng: &mut rand_chacha::ChaCha8Rng| -> SampledFunction {
                let h = trials::endpoint_vanishing(trials::random_germ(rng), part);
                let g = p.germ().clone().plus(h);
                p.grid().sample(&g)
            };
            loop {
                let g1 = perturb(rng);
                let g2 = perturb(rng);
                match norms::rb_contraction_ratio(p, 1, &g1, &g2) {
                    Err(nsfif::Error::DegeneratePair(_)) => continue,
                    other => return other,
                }
            }
        });
        for r in pairs {
            let observed = r?;
            checked += 1;
            worst_excess = worst_excess.max(observed - (2.0 * ratio + 0.05));
        }
    }
    outcome(
        checked == 50 && worst_excess <= 0.0,
        format!(
            "{} configs passing the 1/2 condition, {checked} sampled pairs: max(observed - (2 ratio + 0.05)) = {worst_excess:.4}",
            configs.len()
        ),
    )
}

fn c11_performance() -> Result<Outcome> {
    let dir = tempfile::tempdir().map_err(nsfif::Error::from)?;
    let knots = vec![0.0, 0.15, 0.3, 0.5, 0.65, 0.8, 1.0];
    let f = FunctionSpec::sinusoid(1.0, 3.0, 0.2, 0.0);
    let b = trials::endpoint_corrected(FunctionSpec::polynomial([0.2, -0.5, 0.3, 0.1]), &f, &Partition::new(knots.clone())?);
    let levels = LevelSequence::stationary(Level::uniform(FunctionSpec::sinusoid(0.2, 2.0, 0.0, 0.3), 6, b));
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        let cfg = ProblemConfig::new(Partition::new(knots.clone())?, f.clone(), levels.clone())
            .with_grid(4097)
            .with_depth(DepthPolicy::Fixed(30));
        let problem = Problem::new(cfg)?;
        let it = problem.interpolant(Strategy::Trajectory)?;
        export::write_curve(&dir.path().join("curve.csv"), &it)?;
        best = best.min(start.elapsed().as_secs_f64());
    }
    outcome(
        best < 1.0,
        format!("M = 4097, depth 30, N = 6: build + curve export {:.1} ms (limit 1 s)", best * 1e3),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("interpolation property", c1_interpolation),
        ("degenerate identities", c2_degenerate),
        ("hand-traced oracle", c3_hand_traced),
        ("stationary consistency", c4_stationary),
        ("geometric convergence", c5_geometric),
        ("error and corollary bounds", c6_error),
        ("stability bound", c7_stability),
        ("sensitivity bound", c8_sensitivity),
        ("dependence constants", c9_dependence),
        ("Lipschitz-mode certificate", c10_lipschitz),
        ("performance", c11_performance),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
