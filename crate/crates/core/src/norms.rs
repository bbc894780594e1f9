//! Grid estimates of the sup norm, the Hölder seminorm `Lip_d` and the norm
//! `‖g‖_d = max(‖g‖∞, Lip_d(g))`.
//!
//! All estimates are one-sided: a finite grid can only under-report a
//! supremum. Hypothesis checks built on them inflate the estimate by a
//! relative slack (default [`DEFAULT_SLACK`]).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::problem::Problem;
use crate::sampled::{Grid, SampledFunction};

/// Relative inflation applied to grid estimates in hypothesis checks.
pub const DEFAULT_SLACK: f64 = 0.05;

/// Grids larger than this are subsampled for the pairwise seminorm.
pub const FULL_PAIR_LIMIT: usize = 2049;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub sup_norm: f64,
    pub lip_d: f64,
    pub d: f64,
    pub grid_size: usize,
    pub norm_d: f64,
}

impl NormEstimate {
    pub fn of(g: &impl RealFunction, d: f64, grid: &Grid) -> Result<Self> {
        let values: Vec<f64> = grid.points().iter().map(|&x| g.value(x)).collect();
        Self::of_values(grid.points(), &values, d)
    }

    pub fn of_sampled(g: &SampledFunction, d: f64) -> Result<Self> {
        Self::of_values(g.grid().points(), g.values(), d)
    }

    pub fn of_values(points: &[f64], values: &[f64], d: f64) -> Result<Self> {
        let sup_norm = sup_norm_values(values)?;
        let lip_d = lip_seminorm_values(points, values, d)?;
        Ok(Self {
            sup_norm,
            lip_d,
            d,
            grid_size: points.len(),
            norm_d: sup_norm.max(lip_d),
        })
    }
}

pub fn sup_norm(g: &impl RealFunction, grid: &Grid) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid { required: 1, got: 0 });
    }
    Ok(grid
        .points()
        .iter()
        .map(|&x| g.value(x).abs())
        .fold(0.0, f64::max))
}

pub fn sup_norm_values(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyGrid { required: 1, got: 0 });
    }
    Ok(values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

pub fn lip_seminorm(g: &impl RealFunction, d: f64, grid: &Grid) -> Result<f64> {
    let values: Vec<f64> = grid.points().iter().map(|&x| g.value(x)).collect();
    lip_seminorm_values(grid.points(), &values, d)
}

/// Largest difference quotient `|g(x)-g(y)| / |x-y|^d` over grid pairs.
///
/// For `d = 1` the maximum over all pairs is attained by neighbouring nodes
/// (every chord slope averages the cell slopes beneath it), so only
/// neighbours are scanned. For `d < 1` every pair is scanned up to
/// [`FULL_PAIR_LIMIT`] nodes; beyond that a strided subset of nodes is
/// paired and all neighbouring pairs are added.
pub fn lip_seminorm_values(points: &[f64], values: &[f64], d: f64) -> Result<f64> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::BadExponent(d));
    }
    if points.len() < 2 || values.len() != points.len() {
        return Err(Error::EmptyGrid {
            required: 2,
            got: points.len().min(values.len()),
        });
    }
    let neighbours = points
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| (v[1] - v[0]).abs() / (x[1] - x[0]).powf(d))
        .fold(0.0, f64::max);
    if d == 1.0 {
        return Ok(neighbours);
    }
    let m = points.len();
    let index: Vec<usize> = if m <= FULL_PAIR_LIMIT {
        (0..m).collect()
    } else {
        let stride = (m - 1).div_ceil(FULL_PAIR_LIMIT - 1);
        let mut idx: Vec<usize> = (0..m).step_by(stride).collect();
        if *idx.last().unwrap() != m - 1 {
            idx.push(m - 1);
        }
        idx
    };
    let pairs = index
        .par_iter()
        .enumerate()
        .map(|(a, &i)| {
            index[a + 1..]
                .iter()
                .map(|&j| (values[j] - values[i]).abs() / (points[j] - points[i]).powf(d))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(neighbours.max(pairs))
}

pub fn norm_d(g: &impl RealFunction, d: f64, grid: &Grid) -> Result<f64> {
    Ok(NormEstimate::of(g, d, grid)?.norm_d)
}

/// Per-level maxima of `‖α_{i,r}‖_d / a_i^d` over the explicit prefix.
pub fn lip_ratios(problem: &Problem) -> Result<Vec<f64>> {
    let d = problem.exponent();
    let slopes = problem.maps().slopes();
    let grid = problem.grid();
    problem
        .levels()
        .prefix()
        .iter()
        .map(|level| {
            level
                .scaling
                .iter()
                .zip(slopes)
                .map(|(alpha, a)| Ok(norm_d(alpha, d, grid)? / a.powf(d)))
                .try_fold(0.0_f64, |acc, r: Result<f64>| Ok(acc.max(r?)))
        })
        .collect()
}

/// Reports the Lipschitz-space contraction hypothesis
/// `max_i ‖α_{i,r}‖_d / a_i^d < 1/2`.
///
/// `observed` is the largest ratio inflated by `slack`; `predicted` is the
/// threshold 1/2. The RB contraction factor `2·ratio` is listed in the
/// inputs.
pub fn check_lip_hypothesis(problem: &Problem, slack: f64) -> Result<BoundReport> {
    let ratios = lip_ratios(problem)?;
    let ratio = ratios.iter().copied().fold(0.0, f64::max);
    let inflated = ratio * (1.0 + slack);
    let mut inputs = BTreeMap::new();
    inputs.insert("ratio".into(), ratio);
    inputs.insert("contraction_factor".into(), 2.0 * ratio);
    inputs.insert("slack".into(), slack);
    inputs.insert("d".into(), problem.exponent());
    inputs.insert("grid".into(), problem.grid().len() as f64);
    Ok(BoundReport::strict("lip_hypothesis", 0.5, inflated, inputs))
}

/// Observed `‖T g1 - T g2‖_d / ‖g1 - g2‖_d` for one RB operator.
pub fn rb_contraction_ratio(
    problem: &Problem,
    level: usize,
    g1: &SampledFunction,
    g2: &SampledFunction,
) -> Result<f64> {
    let d = problem.exponent();
    let t1 = problem.apply_rb(g1, level)?;
    let t2 = problem.apply_rb(g2, level)?;
    let num = NormEstimate::of_sampled(&t1.difference(&t2)?, d)?.norm_d;
    let den = NormEstimate::of_sampled(&g1.difference(g2)?, d)?.norm_d;
    if den < 1e-12 {
        return Err(Error::DegeneratePair(1e-12));
    }
    Ok(num / den)
}
