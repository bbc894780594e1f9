//! Per-level scaling vectors and base functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;

/// Scaling functions `α_{·,r}` (one per subinterval) and base `b_r` of one
/// level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub scaling: Vec<FunctionSpec>,
    pub base: FunctionSpec,
}

impl Level {
    pub fn new(scaling: Vec<FunctionSpec>, base: FunctionSpec) -> Self {
        Self { scaling, base }
    }

    /// Same scaling function on all `intervals` subintervals.
    pub fn uniform(scaling: FunctionSpec, intervals: usize, base: FunctionSpec) -> Self {
        Self {
            scaling: vec![scaling; intervals],
            base,
        }
    }

    /// Replaces single-function scaling vectors by `intervals` copies.
    pub(crate) fn broadcast(&mut self, intervals: usize) {
        if self.scaling.len() == 1 && intervals > 1 {
            let s = self.scaling[0].clone();
            self.scaling = vec![s; intervals];
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Scaling {
            PerInterval(Vec<FunctionSpec>),
            Shared(FunctionSpec),
        }
        #[derive(Deserialize)]
        struct Raw {
            scaling: Scaling,
            base: FunctionSpec,
        }
        let raw = Raw::deserialize(deserializer)?;
        let scaling = match raw.scaling {
            Scaling::PerInterval(v) => v,
            Scaling::Shared(s) => vec![s],
        };
        Ok(Level {
            scaling,
            base: raw.base,
        })
    }
}

/// Finite prefix of levels `r = 1..=R`; levels beyond the prefix repeat the
/// last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelSequence {
    levels: Vec<Level>,
}

impl LevelSequence {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyLevels);
        }
        Ok(Self { levels })
    }

    /// A single level used for every `r`.
    pub fn stationary(level: Level) -> Self {
        Self {
            levels: vec![level],
        }
    }

    /// Level `r` (one-based); `r = 0` is treated as level 1.
    pub fn level(&self, r: usize) -> &Level {
        let idx = r.clamp(1, self.levels.len()) - 1;
        &self.levels[idx]
    }

    pub fn scaling(&self, i: usize, r: usize) -> &FunctionSpec {
        &self.level(r).scaling[i]
    }

    pub fn base(&self, r: usize) -> &FunctionSpec {
        &self.level(r).base
    }

    /// Explicit prefix length.
    pub fn prefix_len(&self) -> usize {
        self.levels.len()
    }

    pub fn prefix(&self) -> &[Level] {
        &self.levels
    }

    /// True when every level of the prefix is identical.
    pub fn is_stationary(&self) -> bool {
        self.levels.windows(2).all(|w| w[0] == w[1])
    }

    /// The sequence `r ↦ level(r + by)`.
    pub fn shifted(&self, by: usize) -> Self {
        let start = by.min(self.levels.len() - 1);
        Self {
            levels: self.levels[start..].to_vec(),
        }
    }

    /// Same scaling functions, bases replaced by `bases` (repeat-last on
    /// both sides).
    pub fn with_bases(&self, bases: &[FunctionSpec]) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::EmptyLevels);
        }
        let len = self.levels.len().max(bases.len());
        Ok(Self {
            levels: (1..=len)
                .map(|r| Level {
                    scaling: self.level(r).scaling.clone(),
                    base: bases[r.min(bases.len()) - 1].clone(),
                })
                .collect(),
        })
    }

    /// Same bases, scaling vectors replaced by `scalings`.
    pub fn with_scalings(&self, scalings: &[Vec<FunctionSpec>]) -> Result<Self> {
        if scalings.is_empty() {
            return Err(Error::EmptyLevels);
        }
        let len = self.levels.len().max(scalings.len());
        Ok(Self {
            levels: (1..=len)
                .map(|r| Level {
                    scaling: scalings[r.min(scalings.len()) - 1].clone(),
                    base: self.level(r).base.clone(),
                })
                .collect(),
        })
    }

    pub(crate) fn levels_mut(&mut self) -> &mut [Level] {
        &mut self.levels
    }

    /// True when both sequences use the same scaling functions at every
    /// level (comparing as far as the longer prefix).
    pub fn same_scaling(&self, other: &LevelSequence) -> bool {
        let len = self.prefix_len().max(other.prefix_len());
        (1..=len).all(|r| self.level(r).scaling == other.level(r).scaling)
    }
}
