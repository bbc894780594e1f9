//! Continuous dependence of the interpolant on the base sequence, the
//! scaling sequence and the partition, and the admissible weight θ of the
//! product metric used for the partition result.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{BoundReport, BASE_TOLERANCE, ORACLE_DEPTH};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::norms::{self, DEFAULT_SLACK};
use crate::partition::Partition;
use crate::problem::{Problem, ENDPOINT_TOLERANCE};
use crate::sampled::Grid;

/// Slack added to the base-dependence constant.
pub const BASE_DEPENDENCE_SLACK: f64 = 1e-4;

/// Number of `y` samples per node when measuring map displacement.
const DISPLACEMENT_Y_SAMPLES: usize = 9;

fn inputs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Observed Lipschitz ratio of `b ↦ f^α_b` against `‖α‖∞/(1-‖α‖∞)`.
pub fn base_dependence(
    problem: &Problem,
    bases_a: &[FunctionSpec],
    bases_b: &[FunctionSpec],
) -> Result<BoundReport> {
    let a = problem.with_levels(problem.levels().with_bases(bases_a)?)?;
    let b = problem.with_levels(problem.levels().with_bases(bases_b)?)?;
    let levels = a.levels().prefix_len().max(b.levels().prefix_len());
    let grid = problem.grid();
    let mut den = 0.0_f64;
    for r in 1..=levels {
        let da = grid.sample(a.levels().base(r));
        let db = grid.sample(b.levels().base(r));
        den = den.max(da.sup_distance(&db)?);
    }
    let num = a
        .series_on_grid(ORACLE_DEPTH)
        .sup_distance(&b.series_on_grid(ORACLE_DEPTH))?;
    let alpha = problem.alpha_sup();
    let ratio = if den < 1e-12 {
        if num > 1e-12 {
            return Err(Error::DegeneratePair(1e-12));
        }
        0.0
    } else {
        num / den
    };
    let tails = a.series_tail_bound(ORACLE_DEPTH) + b.series_tail_bound(ORACLE_DEPTH);
    let tolerance = BASE_DEPENDENCE_SLACK + if den > 0.0 { tails / den } else { 0.0 };
    Ok(BoundReport::new(
        "base_dependence",
        alpha / (1.0 - alpha),
        ratio,
        tolerance,
        inputs(&[("alpha", alpha), ("base_distance", den), ("interpolant_distance", num)]),
    ))
}

/// `‖f^α - f^β‖∞ ≤ ‖α - β‖∞ · sup_r ‖f - b_r‖∞ / (1 - s)²` for scaling
/// sequences bounded by the cap `s`.
pub fn scaling_dependence(
    problem: &Problem,
    scalings_a: &[Vec<FunctionSpec>],
    scalings_b: &[Vec<FunctionSpec>],
    cap: f64,
) -> Result<BoundReport> {
    let a = problem.with_levels(problem.levels().with_scalings(scalings_a)?)?;
    let b = problem.with_levels(problem.levels().with_scalings(scalings_b)?)?;
    for q in [&a, &b] {
        if q.alpha_sup() > cap {
            return Err(Error::CapViolated {
                norm: q.alpha_sup(),
                cap,
            });
        }
    }
    if !(cap < 1.0) {
        return Err(Error::CapViolated { norm: cap, cap: 1.0 });
    }
    let n = problem.partition().intervals();
    let levels = a.levels().prefix_len().max(b.levels().prefix_len());
    let grid = problem.grid();
    let mut diff = 0.0_f64;
    for r in 1..=levels {
        for i in 0..n {
            let (sa, sb) = (a.levels().scaling(i, r), b.levels().scaling(i, r));
            diff = diff.max(norms::sup_norm(&|x: f64| sa.eval(x) - sb.eval(x), grid)?);
        }
    }
    let gap = a.base_gap();
    let predicted = diff * gap / ((1.0 - cap) * (1.0 - cap));
    let observed = a
        .series_on_grid(ORACLE_DEPTH)
        .sup_distance(&b.series_on_grid(ORACLE_DEPTH))?;
    Ok(BoundReport::new(
        "scaling_dependence",
        predicted,
        observed,
        BASE_TOLERANCE + a.series_tail_bound(ORACLE_DEPTH) + b.series_tail_bound(ORACLE_DEPTH),
        inputs(&[("scaling_distance", diff), ("base_gap", gap), ("cap", cap)]),
    ))
}

/// Lipschitz constants and the admissible metric weight θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEstimate {
    pub theta: f64,
    /// Upper limit `(1-A)/(R k_α + A k_f + ‖α‖∞ k_b + ‖b‖∞ k_α)`.
    pub limit: f64,
    pub k_f: f64,
    pub k_b: f64,
    pub k_alpha: f64,
    pub r_bound: f64,
    pub a_max: f64,
    /// True when every constant vanished and θ fell back to 1.
    pub degenerate: bool,
}

/// Half the admissible limit for θ; the Lipschitz constants are grid
/// estimates inflated by `slack`.
pub fn compute_theta_with_slack(problem: &Problem, slack: f64) -> Result<ThetaEstimate> {
    let grid = problem.grid();
    let inflate = 1.0 + slack;
    let k_f = norms::lip_seminorm(problem.germ(), 1.0, grid)? * inflate;
    let mut k_b = 0.0_f64;
    let mut k_alpha = 0.0_f64;
    for level in problem.levels().prefix() {
        k_b = k_b.max(norms::lip_seminorm(&level.base, 1.0, grid)?);
        for a in &level.scaling {
            k_alpha = k_alpha.max(norms::lip_seminorm(a, 1.0, grid)?);
        }
    }
    let (k_b, k_alpha) = (k_b * inflate, k_alpha * inflate);
    let a_max = problem.maps().max_slope();
    let r_bound = problem.value_bound();
    let alpha = problem.alpha_sup();
    let den = r_bound * k_alpha + a_max * k_f + alpha * k_b + problem.base_sup() * k_alpha;
    if den <= 0.0 {
        return Ok(ThetaEstimate {
            theta: 1.0,
            limit: f64::INFINITY,
            k_f,
            k_b,
            k_alpha,
            r_bound,
            a_max,
            degenerate: true,
        });
    }
    let limit = (1.0 - a_max) / den;
    Ok(ThetaEstimate {
        theta: 0.5 * limit,
        limit,
        k_f,
        k_b,
        k_alpha,
        r_bound,
        a_max,
        degenerate: false,
    })
}

pub fn compute_theta(problem: &Problem) -> Result<ThetaEstimate> {
    compute_theta_with_slack(problem, DEFAULT_SLACK)
}

/// Outcome of comparing interpolants on two partitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    /// `‖Δ - Δ̃‖₂` over interior knots.
    pub distance: f64,
    /// Sup difference of the interpolants on a shared uniform grid.
    pub observed: f64,
    /// Map displacement `μ(W^Δ, W^Δ̃)` against `2(1 + θ k_f)‖Δ - Δ̃‖₂`.
    pub displacement: BoundReport,
    pub theta: ThetaEstimate,
}

fn check_pair(a: &Partition, b: &Partition) -> Result<()> {
    if a.knots().len() != b.knots().len() {
        return Err(Error::KnotCountMismatch(a.knots().len(), b.knots().len()));
    }
    let residual = (a.start() - b.start()).abs().max((a.end() - b.end()).abs());
    if residual > ENDPOINT_TOLERANCE {
        return Err(Error::EndpointMismatch {
            level: 0,
            what: "partition end point".into(),
            at: b.start(),
            residual,
        });
    }
    Ok(())
}

/// Interpolants of `problem`'s germ and levels built on `delta_a` and
/// `delta_b`.
pub fn partition_dependence(
    problem: &Problem,
    delta_a: &Partition,
    delta_b: &Partition,
) -> Result<PartitionReport> {
    check_pair(delta_a, delta_b)?;
    let distance = delta_a.interior_distance(delta_b)?;
    let pa = problem.with_partition(delta_a.clone())?;
    let pb = problem.with_partition(delta_b.clone())?;
    let common = Grid::uniform(delta_a.start(), delta_a.end(), problem.grid().len())?;
    let observed = pa
        .series_on(&common, ORACLE_DEPTH)?
        .sup_distance(&pb.series_on(&common, ORACLE_DEPTH)?)?;

    let theta = compute_theta(&pa)?;
    let radius = pa.value_bound().max(pb.value_bound());
    let germ = problem.germ();
    let (ma, mb) = (delta_a.affine_maps(), delta_b.affine_maps());
    let levels = problem.levels();
    let mut mu = 0.0_f64;
    for i in 0..delta_a.intervals() {
        for &x in common.points() {
            let (la, lb) = (ma.forward(i, x), mb.forward(i, x));
            // Scaling and base terms do not depend on the partition, so the
            // vertical difference reduces to the germ term.
            let alpha = levels.scaling(i, 1).eval(x);
            let b = levels.base(1).eval(x);
            for k in 0..DISPLACEMENT_Y_SAMPLES {
                let y = -radius + 2.0 * radius * k as f64 / (DISPLACEMENT_Y_SAMPLES - 1) as f64;
                let fa = alpha * y + germ.eval(la) - alpha * b;
                let fb = alpha * y + germ.eval(lb) - alpha * b;
                mu = mu.max((la - lb).abs() + theta.theta * (fa - fb).abs());
            }
        }
    }
    let predicted = 2.0 * (1.0 + theta.theta * theta.k_f) * distance;
    let displacement = BoundReport::new(
        "partition_displacement",
        predicted,
        mu,
        1e-12,
        inputs(&[
            ("distance", distance),
            ("theta", theta.theta),
            ("k_f", theta.k_f),
            ("interpolant_distance", observed),
        ]),
    );
    Ok(PartitionReport {
        distance,
        observed,
        displacement,
        theta,
    })
}

/// Observed interpolant differences along `Δ + (Δ̃ - Δ)/2^k`,
/// `k = 0..steps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityWitness {
    pub distances: Vec<f64>,
    pub observed: Vec<f64>,
    /// True when `observed` is strictly decreasing.
    pub decreasing: bool,
}

pub fn partition_continuity(
    problem: &Problem,
    base: &Partition,
    target: &Partition,
    steps: usize,
) -> Result<ContinuityWitness> {
    check_pair(base, target)?;
    let mut distances = Vec::with_capacity(steps);
    let mut observed = Vec::with_capacity(steps);
    for k in 0..steps {
        let w = 0.5_f64.powi(k as i32);
        let knots: Vec<f64> = base
            .knots()
            .iter()
            .zip(target.knots())
            .map(|(a, b)| a + w * (b - a))
            .collect();
        let moved = Partition::new(knots)?;
        let rep = partition_dependence(problem, base, &moved)?;
        distances.push(rep.distance);
        observed.push(rep.observed);
    }
    let decreasing = observed.windows(2).all(|w| w[1] < w[0]);
    Ok(ContinuityWitness {
        distances,
        observed,
        decreasing,
    })
}
