//! Real functions on the base interval drawn from a closed family of
//! specifications.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can be evaluated at a real point.
pub trait RealFunction {
    fn value(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> RealFunction for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Host-supplied function, available to library callers only.
#[derive(Clone)]
pub struct HostFunction {
    name: String,
    inner: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl HostFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            inner: Arc::new(f),
        }
    }
}

impl fmt::Debug for HostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HostFunction({})", self.name)
    }
}

impl PartialEq for HostFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

/// One weighted term of a [`FunctionSpec::Combination`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub weight: f64,
    pub function: FunctionSpec,
}

/// Evaluable function specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    /// Straight line through `start` and `end`.
    LinearEndpoint {
        start: [f64; 2],
        end: [f64; 2],
    },
    /// `Σ coeffs[k] x^k`.
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `offset + amplitude · sin(frequency · x + phase)`.
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    /// Samples on a uniform grid over `[start, end]`, linearly interpolated
    /// and held constant outside.
    Sampled {
        start: f64,
        end: f64,
        values: Vec<f64>,
    },
    /// Linear interpolant through `(xs[k], ys[k])` on arbitrary nodes.
    PiecewiseLinear {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    /// `Σ weight_k · function_k`.
    Combination {
        terms: Vec<Term>,
    },
    #[serde(skip)]
    Host(HostFunction),
}

impl FunctionSpec {
    pub fn constant(value: f64) -> Self {
        FunctionSpec::Constant { value }
    }

    pub fn line(start: (f64, f64), end: (f64, f64)) -> Self {
        FunctionSpec::LinearEndpoint {
            start: [start.0, start.1],
            end: [end.0, end.1],
        }
    }

    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Self {
        FunctionSpec::Polynomial {
            coeffs: coeffs.into(),
        }
    }

    pub fn sinusoid(amplitude: f64, frequency: f64, phase: f64, offset: f64) -> Self {
        FunctionSpec::Sinusoid {
            amplitude,
            frequency,
            phase,
            offset,
        }
    }

    pub fn host(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FunctionSpec::Host(HostFunction::new(name, f))
    }

    /// `Σ w_k g_k`.
    pub fn combination(terms: impl IntoIterator<Item = (f64, FunctionSpec)>) -> Self {
        FunctionSpec::Combination {
            terms: terms
                .into_iter()
                .map(|(weight, function)| Term { weight, function })
                .collect(),
        }
    }

    /// `self + other`.
    pub fn plus(self, other: FunctionSpec) -> Self {
        Self::combination([(1.0, self), (1.0, other)])
    }

    /// `self - other`.
    pub fn minus(self, other: FunctionSpec) -> Self {
        Self::combination([(1.0, self), (-1.0, other)])
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::combination([(factor, self)])
    }

    /// Checks the structural invariants of the specification.
    pub fn check(&self) -> Result<()> {
        match self {
            FunctionSpec::Sampled { start, end, values } => {
                if values.len() < 2 {
                    return Err(Error::BadFunction(
                        "sampled family needs at least 2 values".into(),
                    ));
                }
                if !(end > start) {
                    return Err(Error::BadFunction(format!(
                        "sampled domain [{start}, {end}] is empty"
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::BadFunction("sampled values must be finite".into()));
                }
            }
            FunctionSpec::PiecewiseLinear { xs, ys } => {
                if xs.len() != ys.len() || xs.len() < 2 {
                    return Err(Error::BadFunction(
                        "piecewise-linear needs at least 2 matching nodes".into(),
                    ));
                }
                if xs.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::BadFunction(
                        "piecewise-linear nodes must be strictly increasing".into(),
                    ));
                }
            }
            FunctionSpec::LinearEndpoint { start, end } => {
                if start[0] == end[0] {
                    return Err(Error::BadFunction("line end points coincide".into()));
                }
            }
            FunctionSpec::Combination { terms } => {
                for t in terms {
                    t.function.check()?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::Constant { value } => *value,
            FunctionSpec::LinearEndpoint { start, end } => {
                let t = (x - start[0]) / (end[0] - start[0]);
                start[1] * (1.0 - t) + end[1] * t
            }
            FunctionSpec::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            FunctionSpec::Sinusoid {
                amplitude,
                frequency,
                phase,
                offset,
            } => offset + amplitude * (frequency * x + phase).sin(),
            FunctionSpec::Sampled { start, end, values } => {
                let cells = (values.len() - 1) as f64;
                let pos = ((x - start) / (end - start) * cells).clamp(0.0, cells);
                let k = (pos.floor() as usize).min(values.len() - 2);
                let w = pos - k as f64;
                values[k] + w * (values[k + 1] - values[k])
            }
            FunctionSpec::PiecewiseLinear { xs, ys } => {
                if x <= xs[0] {
                    return ys[0];
                }
                let last = xs.len() - 1;
                if x >= xs[last] {
                    return ys[last];
                }
                let k = xs.partition_point(|&n| n <= x) - 1;
                let w = (x - xs[k]) / (xs[k + 1] - xs[k]);
                ys[k] + w * (ys[k + 1] - ys[k])
            }
            FunctionSpec::Combination { terms } => terms
                .iter()
                .map(|t| t.weight * t.function.eval(x))
                .sum(),
            FunctionSpec::Host(h) => (h.inner)(x),
        }
    }
}

impl RealFunction for FunctionSpec {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_evaluate() {
        assert_eq!(FunctionSpec::constant(0.4).eval(0.3), 0.4);
        let l = FunctionSpec::line((0.0, 1.0), (2.0, 3.0));
        assert_eq!(l.eval(0.0), 1.0);
        assert_eq!(l.eval(2.0), 3.0);
        assert_eq!(l.eval(1.0), 2.0);
        let p = FunctionSpec::polynomial([1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        let s = FunctionSpec::sinusoid(0.1, std::f64::consts::PI, 0.0, 0.15);
        assert!((s.eval(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sampled_interpolates_linearly() {
        let s = FunctionSpec::Sampled {
            start: 0.0,
            end: 1.0,
            values: vec![0.0, 1.0, 0.0],
        };
        s.check().unwrap();
        assert_eq!(s.eval(0.25), 0.5);
        assert_eq!(s.eval(0.5), 1.0);
        assert_eq!(s.eval(1.0), 0.0);
        assert_eq!(s.eval(-1.0), 0.0);
        let bad = FunctionSpec::Sampled {
            start: 0.0,
            end: 1.0,
            values: vec![1.0],
        };
        assert!(bad.check().is_err());
    }

    #[test]
    fn piecewise_linear_nodes() {
        let p = FunctionSpec::PiecewiseLinear {
            xs: vec![0.0, 0.25, 1.0],
            ys: vec![0.0, 1.0, 4.0],
        };
        assert_eq!(p.eval(0.25), 1.0);
        assert_eq!(p.eval(0.625), 2.5);
        assert_eq!(p.eval(1.0), 4.0);
    }

    #[test]
    fn combination_and_host() {
        let x = FunctionSpec::polynomial([0.0, 1.0]);
        let sq = FunctionSpec::polynomial([0.0, 0.0, 1.0]);
        let diff = x.clone().minus(sq.clone());
        assert_eq!(diff.eval(0.5), 0.25);
        let h = FunctionSpec::host("cube", |x| x * x * x);
        assert_eq!(h.eval(2.0), 8.0);
        assert_eq!(h, h.clone());
        assert_ne!(h, FunctionSpec::host("cube", |x| x * x * x));
    }

    #[test]
    fn serde_shape() {
        let s: FunctionSpec =
            serde_json::from_str(r#"{"family":"polynomial","coeffs":[0,0,1]}"#).unwrap();
        assert_eq!(s, FunctionSpec::polynomial([0.0, 0.0, 1.0]));
        let back = serde_json::to_string(&FunctionSpec::constant(0.5)).unwrap();
        assert_eq!(back, r#"{"family":"constant","value":0.5}"#);
        assert!(serde_json::to_string(&FunctionSpec::host("h", |x| x)).is_err());
    }
}
