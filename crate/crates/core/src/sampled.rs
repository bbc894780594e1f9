//! Evaluation grids and functions sampled on them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::partition::Partition;

/// Sorted abscissas covering `[x_0, x_N]`.
///
/// Grids built for a partition contain every knot exactly: knots that fall
/// within round-off of a uniform node replace that node, the remaining ones
/// are inserted.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Arc<[f64]>,
}

impl Grid {
    pub fn uniform(start: f64, end: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::EmptyGrid { required: 2, got: m });
        }
        let cells = (m - 1) as f64;
        let points: Vec<f64> = (0..m)
            .map(|k| {
                let t = k as f64 / cells;
                start * (1.0 - t) + end * t
            })
            .collect();
        Ok(Self {
            points: points.into(),
        })
    }

    /// Uniform grid of `m` nodes over the partition's interval with all
    /// knots present.
    pub fn for_partition(partition: &Partition, m: usize) -> Result<Self> {
        let required = partition.intervals() + 1;
        if m < required.max(2) {
            return Err(Error::EmptyGrid { required, got: m });
        }
        let base = Self::uniform(partition.start(), partition.end(), m)?;
        let mut points = base.points.to_vec();
        let h = partition.width() / (m - 1) as f64;
        let mut extra = Vec::new();
        for &knot in partition.knots() {
            let k = ((knot - partition.start()) / h).round() as usize;
            let k = k.min(m - 1);
            if (points[k] - knot).abs() <= 1e-9 * h {
                points[k] = knot;
            } else {
                extra.push(knot);
            }
        }
        points.extend(extra);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(Self {
            points: points.into(),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Largest spacing between neighbouring nodes.
    pub fn max_cell(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Cell index `k` and weight `w` with `x = (1-w) p[k] + w p[k+1]`.
    /// Points outside the grid are clamped to the nearest end.
    #[inline]
    pub fn cell(&self, x: f64) -> (usize, f64) {
        let p = &self.points;
        let last = p.len() - 1;
        if x <= p[0] {
            return (0, 0.0);
        }
        if x >= p[last] {
            return (last - 1, 1.0);
        }
        let k = p.partition_point(|&n| n <= x) - 1;
        let w = (x - p[k]) / (p[k + 1] - p[k]);
        (k, w)
    }

    pub fn sample(&self, f: &impl RealFunction) -> SampledFunction {
        SampledFunction {
            grid: self.clone(),
            values: self.points.iter().map(|&x| f.value(x)).collect(),
        }
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

/// Values of a function on a [`Grid`], read off-grid by linear
/// interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadFunction("sampled values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at_cell(&self, k: usize, w: f64) -> f64 {
        let v = &self.values;
        if w == 0.0 {
            v[k]
        } else if w == 1.0 {
            v[k + 1]
        } else {
            v[k] + w * (v[k + 1] - v[k])
        }
    }

    pub fn interpolate(&self, x: f64) -> f64 {
        let (k, w) = self.grid.cell(x);
        self.at_cell(k, w)
    }

    /// Pointwise `self - other` on a shared grid.
    pub fn difference(&self, other: &SampledFunction) -> Result<SampledFunction> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_parts(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// `max_k |self_k - other_k|` on a shared grid.
    pub fn sup_distance(&self, other: &SampledFunction) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl RealFunction for SampledFunction {
    fn value(&self, x: f64) -> f64 {
        self.interpolate(x)
    }
}
