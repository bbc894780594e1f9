//! Knot partitions of the base interval and the affine maps onto their
//! subintervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing knot vector `x_0 < x_1 < … < x_N` with `N >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    /// Validates `knots` and builds the partition.
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if let Some(index) = knots.iter().position(|k| !k.is_finite()) {
            return Err(Error::NonFiniteKnot { index });
        }
        if knots.len() < 3 {
            return Err(Error::TooFewKnots(knots.len()));
        }
        for (index, pair) in knots.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonMonotoneKnots {
                    index: index + 1,
                    value: pair[1],
                });
            }
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of subintervals `N`.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn width(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start() && x <= self.end()
    }

    /// Closed subinterval `I_i = [x_i, x_{i+1}]` for zero-based `i`.
    pub fn subinterval(&self, i: usize) -> (f64, f64) {
        (self.knots[i], self.knots[i + 1])
    }

    /// Zero-based index of the subinterval holding `x`.
    ///
    /// Interior knots belong to the interval on their right; the right end
    /// point `x_N` belongs to the last interval.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                lo: self.start(),
                hi: self.end(),
            });
        }
        Ok(self.locate_unchecked(x))
    }

    #[inline]
    pub(crate) fn locate_unchecked(&self, x: f64) -> usize {
        let at_or_below = self.knots.partition_point(|&k| k <= x);
        at_or_below.clamp(1, self.intervals()) - 1
    }

    pub fn affine_maps(&self) -> AffineMapSet {
        AffineMapSet::new(self)
    }

    /// Euclidean distance between the interior knots of two partitions
    /// sharing end points and knot count.
    pub fn interior_distance(&self, other: &Partition) -> Result<f64> {
        if self.knots.len() != other.knots.len() {
            return Err(Error::KnotCountMismatch(self.knots.len(), other.knots.len()));
        }
        if self.start() != other.start() || self.end() != other.end() {
            return Err(Error::EndpointMismatch {
                level: 0,
                what: "partition end point".into(),
                at: other.start(),
                residual: (self.start() - other.start())
                    .abs()
                    .max((self.end() - other.end()).abs()),
            });
        }
        let n = self.knots.len();
        Ok(self.knots[1..n - 1]
            .iter()
            .zip(&other.knots[1..n - 1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            knots: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Partition::new(raw.knots).map_err(serde::de::Error::custom)
    }
}

/// The maps `l_i(x) = a_i x + e_i` sending `I` onto `I_i`, with their
/// inverses `Q_i`.
///
/// Evaluation uses the barycentric form so that `l_i(x_0) = x_{i-1}` and
/// `l_i(x_N) = x_i` hold bit-for-bit, and likewise for `Q_i` at knots.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMapSet {
    knots: Vec<f64>,
    slopes: Vec<f64>,
    offsets: Vec<f64>,
}

impl AffineMapSet {
    pub fn new(partition: &Partition) -> Self {
        let k = partition.knots();
        let (x0, xn) = (partition.start(), partition.end());
        let w = xn - x0;
        let slopes = k.windows(2).map(|p| (p[1] - p[0]) / w).collect();
        let offsets = k.windows(2).map(|p| (xn * p[0] - x0 * p[1]) / w).collect();
        Self {
            knots: k.to_vec(),
            slopes,
            offsets,
        }
    }

    /// Contraction factors `a_i`.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Translations `e_i`.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// `A = max_i a_i`.
    pub fn max_slope(&self) -> f64 {
        self.slopes.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    /// Forward map `l_i` (zero-based `i`).
    #[inline]
    pub fn forward(&self, i: usize, x: f64) -> f64 {
        let (x0, xn) = (self.knots[0], self.knots[self.knots.len() - 1]);
        let t = (x - x0) / (xn - x0);
        self.knots[i] * (1.0 - t) + self.knots[i + 1] * t
    }

    /// Inverse map `Q_i = l_i^{-1}`, clamped into `I`.
    #[inline]
    pub fn inverse(&self, i: usize, z: f64) -> f64 {
        let (x0, xn) = (self.knots[0], self.knots[self.knots.len() - 1]);
        let (lo, hi) = (self.knots[i], self.knots[i + 1]);
        let u = (z - lo) / (hi - lo);
        (x0 * (1.0 - u) + xn * u).clamp(x0, xn)
    }
}
