//! IFS map algebra: interval location, address chains of the inverse maps,
//! the vertical maps `F_{i,r}`, and the perturbed maps `T_{i,r}`.
//!
//! Interval indices are zero-based throughout; levels are one-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::norms;
use crate::partition::Partition;
use crate::problem::{Problem, ENDPOINT_TOLERANCE};
use crate::rb::{rb_kernel, Interpolant, Strategy};
use crate::sampled::SampledFunction;

/// Zero-based interval holding `x`; interior knots go to the right.
pub fn locate_interval(x: f64, p: &Partition) -> Result<usize> {
    p.locate(x)
}

/// Points `z_0 = x, z_j = Q_{i_j}(z_{j-1})` and the intervals selected on
/// the way.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AddressChain {
    pub start: f64,
    pub indices: Vec<usize>,
    /// `z_0, …, z_k`.
    pub points: Vec<f64>,
}

impl AddressChain {
    pub fn depth(&self) -> usize {
        self.indices.len()
    }

    pub fn terminal(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// `l_{i_1}(l_{i_2}(… l_{i_k}(z_k)))`.
    pub fn recompose(&self, p: &Partition) -> f64 {
        let maps = p.affine_maps();
        self.indices
            .iter()
            .rev()
            .fold(self.terminal(), |z, &i| maps.forward(i, z))
    }
}

pub fn decompose_address(x: f64, p: &Partition, depth: usize) -> Result<AddressChain> {
    p.locate(x)?;
    let maps = p.affine_maps();
    let mut indices = Vec::with_capacity(depth);
    let mut points = Vec::with_capacity(depth + 1);
    points.push(x);
    let mut z = x;
    for _ in 0..depth {
        let i = p.locate_unchecked(z);
        z = maps.inverse(i, z);
        indices.push(i);
        points.push(z);
    }
    Ok(AddressChain {
        start: x,
        indices,
        points,
    })
}

fn check_interval(problem: &Problem, i: usize) -> Result<()> {
    let n = problem.partition().intervals();
    if i >= n {
        return Err(Error::BadInterval {
            index: i,
            intervals: n,
        });
    }
    Ok(())
}

/// `F_{i,r}(x, y) = α_{i,r}(x) y + f(l_i(x)) - α_{i,r}(x) b_r(x)`.
pub fn apply_f(problem: &Problem, i: usize, r: usize, x: f64, y: f64) -> Result<f64> {
    check_interval(problem, i)?;
    problem.partition().locate(x)?;
    let alpha = problem.levels().scaling(i, r).eval(x);
    let lx = problem.maps().forward(i, x);
    Ok(alpha * y + problem.germ().eval(lx) - alpha * problem.levels().base(r).eval(x))
}

/// The RB integrand on `I_i`: `f(x) + α_{i,r}(Q_i x) (y - b_r(Q_i x))`,
/// with `y` standing for `g(Q_i x)`.
pub fn rb_integrand(problem: &Problem, i: usize, r: usize, x: f64, y: f64) -> Result<f64> {
    let u = preimage(problem, i, x)?;
    let lv = problem.levels();
    Ok(rb_kernel(
        problem.germ().eval(x),
        lv.scaling(i, r).eval(u),
        y,
        lv.base(r).eval(u),
    ))
}

fn preimage(problem: &Problem, i: usize, x: f64) -> Result<f64> {
    check_interval(problem, i)?;
    let (lo, hi) = problem.partition().subinterval(i);
    if !(x >= lo && x <= hi) {
        return Err(Error::OutOfDomain { x, lo, hi });
    }
    Ok(problem.maps().inverse(i, x))
}

/// Perturbed update at one node:
/// `f(x) + (α + t θ)(g - b) + s φ`.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
pub(crate) fn perturbed_kernel(
    fx: f64,
    alpha: f64,
    t: f64,
    theta: f64,
    g: f64,
    b: f64,
    s: f64,
    phi: f64,
) -> f64 {
    fx + (alpha + t * theta) * (g - b) + s * phi
}

/// Perturbation parameters of one level, one entry per interval. Single
/// entries are broadcast to every interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationLevel {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub theta: Vec<FunctionSpec>,
    pub phi: Vec<FunctionSpec>,
}

impl PerturbationLevel {
    pub fn uniform(t: f64, s: f64, theta: FunctionSpec, phi: FunctionSpec) -> Self {
        Self {
            t: vec![t],
            s: vec![s],
            theta: vec![theta],
            phi: vec![phi],
        }
    }

    fn broadcast(&mut self, n: usize) -> Result<()> {
        fn fill<T: Clone>(v: &mut Vec<T>, n: usize, what: &str) -> Result<()> {
            if v.len() == 1 {
                *v = vec![v[0].clone(); n];
            }
            if v.len() != n {
                return Err(Error::Config(format!(
                    "perturbation {what} has {} entries for {n} intervals",
                    v.len()
                )));
            }
            Ok(())
        }
        fill(&mut self.t, n, "t")?;
        fill(&mut self.s, n, "s")?;
        fill(&mut self.theta, n, "theta")?;
        fill(&mut self.phi, n, "phi")
    }
}

/// Per-level perturbation `(t, s, θ, φ)` with a repeat-last tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerturbationSpec {
    levels: Vec<PerturbationLevel>,
}

impl PerturbationSpec {
    pub fn new(levels: Vec<PerturbationLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyLevels);
        }
        Ok(Self { levels })
    }

    pub fn stationary(level: PerturbationLevel) -> Self {
        Self {
            levels: vec![level],
        }
    }

    /// The all-zero perturbation.
    pub fn zero() -> Self {
        Self::stationary(PerturbationLevel::uniform(
            0.0,
            0.0,
            FunctionSpec::constant(0.0),
            FunctionSpec::constant(0.0),
        ))
    }

    pub fn level(&self, r: usize) -> &PerturbationLevel {
        &self.levels[r.clamp(1, self.levels.len()) - 1]
    }

    pub fn prefix(&self) -> &[PerturbationLevel] {
        &self.levels
    }
}

/// Sup norms of a perturbation on the problem grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationNorms {
    pub t: f64,
    pub s: f64,
    pub theta: f64,
    pub phi: f64,
    /// `sup_r max_i ‖α_{i,r} + t_{i,r} θ_{i,r}‖∞`.
    pub effective_scaling: f64,
}

/// Data of one level evaluated at the preimages of the grid nodes.
#[derive(Debug, Clone)]
struct PerturbedTable {
    t: Vec<f64>,
    theta: Vec<f64>,
    s: Vec<f64>,
    phi: Vec<f64>,
}

/// A problem together with a validated perturbation of its maps.
#[derive(Debug, Clone)]
pub struct PerturbedProblem<'a> {
    problem: &'a Problem,
    spec: PerturbationSpec,
    norms: PerturbationNorms,
    tables: Vec<PerturbedTable>,
}

impl<'a> PerturbedProblem<'a> {
    pub fn new(problem: &'a Problem, spec: &PerturbationSpec) -> Result<Self> {
        let n = problem.partition().intervals();
        let mut spec = spec.clone();
        for level in &mut spec.levels {
            level.broadcast(n)?;
        }
        let grid = problem.grid();
        let (x0, xn) = (problem.partition().start(), problem.partition().end());
        let depth = spec.levels.len().max(problem.levels().prefix_len());
        let mut norms = PerturbationNorms {
            t: 0.0,
            s: 0.0,
            theta: 0.0,
            phi: 0.0,
            effective_scaling: 0.0,
        };
        for (r, level) in spec.levels.iter().enumerate() {
            for i in 0..n {
                let (t, s) = (level.t[i], level.s[i]);
                if !(t.abs() < 1.0 && s.abs() < 1.0) {
                    return Err(Error::PerturbationTooLarge(format!(
                        "level {}, interval {i}: |t| and |s| must be below 1 (t = {t}, s = {s})",
                        r + 1
                    )));
                }
                level.theta[i].check()?;
                level.phi[i].check()?;
                let phi = &level.phi[i];
                let residual = phi.eval(x0).abs().max(phi.eval(xn).abs());
                if !(residual <= ENDPOINT_TOLERANCE) {
                    return Err(Error::EndpointMismatch {
                        level: r + 1,
                        what: format!("phi on interval {i}"),
                        at: if phi.eval(x0).abs() > ENDPOINT_TOLERANCE { x0 } else { xn },
                        residual,
                    });
                }
                norms.t = norms.t.max(t.abs());
                norms.s = norms.s.max(s.abs());
                norms.theta = norms.theta.max(norms::sup_norm(&level.theta[i], grid)?);
                norms.phi = norms.phi.max(norms::sup_norm(phi, grid)?);
            }
        }
        for r in 1..=depth {
            let level = &spec.levels[r.min(spec.levels.len()) - 1];
            for i in 0..n {
                let alpha = problem.levels().scaling(i, r);
                let t = level.t[i];
                let eff = norms::sup_norm(&|x: f64| alpha.eval(x) + t * level.theta[i].eval(x), grid)?;
                norms.effective_scaling = norms.effective_scaling.max(eff);
            }
        }
        if !(norms.effective_scaling < 1.0) {
            return Err(Error::PerturbationTooLarge(format!(
                "perturbed scaling has sup norm {} >= 1",
                norms.effective_scaling
            )));
        }
        let plan = &problem.plan;
        let tables = (1..=depth)
            .map(|r| {
                let level = &spec.levels[r.min(spec.levels.len()) - 1];
                let pick = |k: usize| plan.interval[k];
                let m = plan.germ.len();
                PerturbedTable {
                    t: (0..m).map(|k| level.t[pick(k)]).collect(),
                    s: (0..m).map(|k| level.s[pick(k)]).collect(),
                    theta: (0..m)
                        .map(|k| level.theta[pick(k)].eval(plan.preimage[k]))
                        .collect(),
                    phi: (0..m)
                        .map(|k| level.phi[pick(k)].eval(plan.preimage[k]))
                        .collect(),
                }
            })
            .collect();
        Ok(Self {
            problem,
            spec,
            norms,
            tables,
        })
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn spec(&self) -> &PerturbationSpec {
        &self.spec
    }

    pub fn norms(&self) -> PerturbationNorms {
        self.norms
    }

    /// `T_{i,r}(x, y)` for `x ∈ I_i`, with `y` standing for `g(Q_i x)`.
    pub fn apply_t(&self, i: usize, r: usize, x: f64, y: f64) -> Result<f64> {
        let u = preimage(self.problem, i, x)?;
        let lv = self.problem.levels();
        let p = self.spec.level(r);
        Ok(perturbed_kernel(
            self.problem.germ().eval(x),
            lv.scaling(i, r).eval(u),
            p.t[i],
            p.theta[i].eval(u),
            y,
            lv.base(r).eval(u),
            p.s[i],
            p.phi[i].eval(u),
        ))
    }

    fn apply_level(&self, g: &SampledFunction, r: usize) -> SampledFunction {
        let base = self.problem.table(r);
        let pert = &self.tables[r.clamp(1, self.tables.len()) - 1];
        let plan = &self.problem.plan;
        let values = (0..plan.germ.len())
            .map(|k| {
                let (c, w) = plan.cell[k];
                perturbed_kernel(
                    plan.germ[k],
                    base.alpha[k],
                    pert.t[k],
                    pert.theta[k],
                    g.at_cell(c, w),
                    base.base[k],
                    pert.s[k],
                    pert.phi[k],
                )
            })
            .collect();
        SampledFunction::from_parts(self.problem.grid().clone(), values)
    }

    /// Backward trajectory of the perturbed operators, seeded at the germ.
    pub fn trajectory(&self, depth: usize) -> Result<SampledFunction> {
        if depth == 0 {
            return Err(Error::DepthZero);
        }
        let mut g = self.problem.germ_samples();
        for r in (1..=depth).rev() {
            g = self.apply_level(&g, r);
        }
        Ok(g)
    }

    /// Series of the perturbed system at `x`:
    /// `f(x) + Σ_j W_j (f - b_j)(z_j) + W_{j-1} s_j φ_j(z_j)` with
    /// `W_j = Π_{m ≤ j} (α + t θ)(z_m)`.
    pub fn series_eval(&self, x: f64, depth: usize) -> Result<f64> {
        let p = self.problem.partition();
        p.locate(x)?;
        let f = self.problem.germ();
        let maps = self.problem.maps();
        let lv = self.problem.levels();
        let mut z = x;
        let mut weight = 1.0;
        let mut sum = f.eval(x);
        for r in 1..=depth {
            let i = p.locate_unchecked(z);
            z = maps.inverse(i, z);
            let pl = self.spec.level(r);
            sum += weight * pl.s[i] * pl.phi[i].eval(z);
            weight *= lv.scaling(i, r).eval(z) + pl.t[i] * pl.theta[i].eval(z);
            sum += weight * (f.eval(z) - lv.base(r).eval(z));
        }
        Ok(sum)
    }

    /// Unperturbed trajectory at the same depth, for comparisons.
    pub fn reference(&self, depth: usize) -> Result<Interpolant<'a>> {
        let it = self
            .problem
            .backward_trajectory(&self.problem.germ_samples(), depth)?;
        debug_assert_eq!(it.strategy(), Strategy::Trajectory);
        Ok(it)
    }
}
