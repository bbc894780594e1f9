//! Evaluators of the interpolant: backward trajectories of RB operators on
//! sampled functions, the truncated self-referential series, and the
//! stationary fixed-point iteration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{DepthPolicy, Problem, ENDPOINT_TOLERANCE};
use crate::sampled::{Grid, SampledFunction};

/// Hard cap on series terms and trajectory levels.
pub const MAX_DEPTH: usize = 64;

/// Stopping threshold of the stationary iteration.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;

/// Iteration cap of the stationary solver.
pub const FIXED_POINT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Trajectory,
    Series,
}

/// RB update at one node: `f(x) + α (g - b)`.
#[inline(always)]
pub(crate) fn rb_kernel(fx: f64, alpha: f64, g: f64, b: f64) -> f64 {
    fx + alpha * (g - b)
}

/// Smallest depth `k` with `α^{k+1}/(1-α) · gap ≤ eps`, capped at
/// [`MAX_DEPTH`].
pub fn depth_for_tolerance(alpha: f64, gap: f64, eps: f64) -> usize {
    if alpha <= 0.0 || gap <= 0.0 {
        return 0;
    }
    (0..MAX_DEPTH)
        .find(|&k| tail_bound(alpha, gap, k) <= eps)
        .unwrap_or(MAX_DEPTH)
}

/// Geometric tail `α^{k+1}/(1-α) · gap` of the series after `k` terms.
pub fn tail_bound(alpha: f64, gap: f64, k: usize) -> f64 {
    if alpha <= 0.0 || gap <= 0.0 {
        return 0.0;
    }
    alpha.powi(k as i32 + 1) / (1.0 - alpha) * gap
}

/// An evaluable interpolant produced by one of the strategies.
#[derive(Debug, Clone)]
pub struct Interpolant<'a> {
    problem: &'a Problem,
    strategy: Strategy,
    depth: usize,
    samples: Option<SampledFunction>,
}

impl<'a> Interpolant<'a> {
    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Cached grid values (trajectory and fixed-point interpolants).
    pub fn samples(&self) -> Option<&SampledFunction> {
        self.samples.as_ref()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.samples {
            Some(s) => {
                self.problem.partition().locate(x)?;
                Ok(s.interpolate(x))
            }
            None => self.problem.series_eval(x, self.depth),
        }
    }

    /// Values on the problem grid.
    pub fn on_grid(&self) -> SampledFunction {
        match &self.samples {
            Some(s) => s.clone(),
            None => self.problem.series_on_grid(self.depth),
        }
    }

    /// Largest knot residual `|f^α(x_i) - y_i|`.
    pub fn knot_residual(&self) -> Result<f64> {
        let ys = self.problem.targets();
        let mut worst = 0.0_f64;
        for (&x, y) in self.problem.partition().knots().iter().zip(ys) {
            worst = worst.max((self.eval(x)? - y).abs());
        }
        Ok(worst)
    }
}

impl Problem {
    /// Depth selected by the configured policy (at least 1).
    pub fn depth(&self) -> usize {
        match self.config().depth {
            DepthPolicy::Fixed(k) => k.clamp(1, MAX_DEPTH),
            DepthPolicy::Tolerance(eps) => {
                depth_for_tolerance(self.alpha_sup(), self.base_gap(), eps).max(1)
            }
        }
    }

    /// Truncation bound of the series after `depth` terms.
    pub fn series_tail_bound(&self, depth: usize) -> f64 {
        tail_bound(self.alpha_sup(), self.base_gap(), depth)
    }

    fn check_sampled(&self, g: &SampledFunction) -> Result<()> {
        if !g.grid().same_as(self.grid()) {
            return Err(Error::GridMismatch);
        }
        let v = g.values();
        let f = &self.plan.germ;
        let last = v.len() - 1;
        for (k, what, at) in [
            (0, "seed at x_0", self.partition().start()),
            (last, "seed at x_N", self.partition().end()),
        ] {
            let residual = (v[k] - f[k]).abs();
            if !(residual <= ENDPOINT_TOLERANCE) {
                return Err(Error::EndpointMismatch {
                    level: 0,
                    what: what.into(),
                    at,
                    residual,
                });
            }
        }
        Ok(())
    }

    /// One RB operator `T^{α_r}` applied to grid samples.
    pub fn apply_rb(&self, g: &SampledFunction, level: usize) -> Result<SampledFunction> {
        self.check_sampled(g)?;
        Ok(self.apply_rb_unchecked(g, level))
    }

    pub(crate) fn apply_rb_unchecked(&self, g: &SampledFunction, level: usize) -> SampledFunction {
        let t = self.table(level);
        let plan = &self.plan;
        let values = (0..plan.germ.len())
            .map(|k| {
                let (c, w) = plan.cell[k];
                rb_kernel(plan.germ[k], t.alpha[k], g.at_cell(c, w), t.base[k])
            })
            .collect();
        SampledFunction::from_parts(self.grid().clone(), values)
    }

    /// `T^{α_1} ∘ … ∘ T^{α_R} g`.
    pub fn backward_trajectory(&self, seed: &SampledFunction, depth: usize) -> Result<Interpolant<'_>> {
        if depth == 0 {
            return Err(Error::DepthZero);
        }
        self.check_sampled(seed)?;
        let mut g = seed.clone();
        for r in (1..=depth).rev() {
            g = self.apply_rb_unchecked(&g, r);
        }
        Ok(Interpolant {
            problem: self,
            strategy: Strategy::Trajectory,
            depth,
            samples: Some(g),
        })
    }

    /// Series partial sum through `depth` terms at `x`.
    pub fn series_eval(&self, x: f64, depth: usize) -> Result<f64> {
        self.series_eval_from(x, depth, 1)
    }

    /// Series of the shifted sequence `r ↦ (α_{r+first-1}, b_{r+first-1})`.
    pub fn series_eval_from(&self, x: f64, depth: usize, first: usize) -> Result<f64> {
        self.partition().locate(x)?;
        Ok(self.series_unchecked(x, depth, first.max(1)))
    }

    pub(crate) fn series_unchecked(&self, x: f64, depth: usize, first: usize) -> f64 {
        let f = self.germ();
        let p = self.partition();
        let maps = self.maps();
        let levels = self.levels();
        let mut sum = f.eval(x);
        let mut z = x;
        let mut weight = 1.0;
        for j in 0..depth {
            let r = first + j;
            let i = p.locate_unchecked(z);
            z = maps.inverse(i, z);
            weight *= levels.scaling(i, r).eval(z);
            if weight == 0.0 {
                break;
            }
            sum += weight * (f.eval(z) - levels.base(r).eval(z));
        }
        sum
    }

    /// Series values at every grid node.
    pub fn series_on_grid(&self, depth: usize) -> SampledFunction {
        let values = self
            .grid()
            .points()
            .par_iter()
            .map(|&x| self.series_unchecked(x, depth, 1))
            .collect();
        SampledFunction::from_parts(self.grid().clone(), values)
    }

    /// Series values on an arbitrary grid inside the domain.
    pub fn series_on(&self, grid: &Grid, depth: usize) -> Result<SampledFunction> {
        if grid.start() < self.partition().start() || grid.end() > self.partition().end() {
            return Err(Error::OutOfDomain {
                x: grid.start(),
                lo: self.partition().start(),
                hi: self.partition().end(),
            });
        }
        let values = grid
            .points()
            .par_iter()
            .map(|&x| self.series_unchecked(x, depth, 1))
            .collect();
        Ok(SampledFunction::from_parts(grid.clone(), values))
    }

    /// Interpolant for the configured depth policy.
    pub fn interpolant(&self, strategy: Strategy) -> Result<Interpolant<'_>> {
        let depth = self.depth();
        match strategy {
            Strategy::Trajectory => self.backward_trajectory(&self.germ_samples(), depth),
            Strategy::Series => Ok(Interpolant {
                problem: self,
                strategy,
                depth,
                samples: None,
            }),
        }
    }

    /// Single-point evaluation under the configured depth policy.
    pub fn eval_interpolant(&self, x: f64, strategy: Strategy) -> Result<f64> {
        match strategy {
            Strategy::Series => self.series_eval(x, self.depth()),
            Strategy::Trajectory => self.interpolant(strategy)?.eval(x),
        }
    }

    /// Banach iteration of the single RB operator of a stationary sequence,
    /// started at the germ.
    pub fn stationary_fixed_point(&self) -> Result<Interpolant<'_>> {
        if !self.levels().is_stationary() {
            return Err(Error::NotStationary);
        }
        let mut g = self.germ_samples();
        let mut change = f64::INFINITY;
        for iteration in 1..=FIXED_POINT_MAX_ITER {
            let next = self.apply_rb_unchecked(&g, 1);
            change = next.sup_distance(&g)?;
            g = next;
            if change <= FIXED_POINT_TOLERANCE {
                return Ok(Interpolant {
                    problem: self,
                    strategy: Strategy::Trajectory,
                    depth: iteration,
                    samples: Some(g),
                });
            }
        }
        Err(Error::NoConvergence {
            iterations: FIXED_POINT_MAX_ITER,
            change,
        })
    }

    /// Sup differences `‖ψ_{k+1} - ψ_k‖∞` for `k = 1..depth`, seeded at
    /// the germ.
    pub fn trajectory_increments(&self, depth: usize) -> Result<Vec<f64>> {
        let seed = self.germ_samples();
        let mut prev = self.backward_trajectory(&seed, 1)?.on_grid();
        let mut out = Vec::with_capacity(depth);
        for k in 2..=depth + 1 {
            let next = self.backward_trajectory(&seed, k)?.on_grid();
            out.push(next.sup_distance(&prev)?);
            prev = next;
        }
        Ok(out)
    }
}
