use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::symbols::step;

/// Smallest accepted base grid.
pub const MIN_BASE_SIZE: usize = 4;
/// Supported range for the number of nested grids.
pub const MIN_LEVELS: usize = 2;
pub const MAX_LEVELS: usize = 8;

/// Nested matrix sizes `n_k = 2^(k-1) (n_1 + 1) - 1`, `k = 1..=alpha`.
///
/// Node `j_1` of the base grid coincides with node `j_k = 2^(k-1) j_1` of
/// grid `k`, so every base node carries `alpha` samples at decreasing steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtrapolationGrid {
    base: usize,
    levels: usize,
}

impl ExtrapolationGrid {
    pub fn new(base: usize, levels: usize) -> Result<Self> {
        if !(MIN_LEVELS..=MAX_LEVELS).contains(&levels) {
            return Err(Error::InvalidGrid(format!(
                "alpha = {levels} must lie in {MIN_LEVELS}..={MAX_LEVELS}"
            )));
        }
        if base < MIN_BASE_SIZE {
            return Err(Error::InvalidGrid(format!(
                "n1 = {base} must be at least {MIN_BASE_SIZE}"
            )));
        }
        Ok(Self { base, levels })
    }

    /// `n_1`.
    pub fn base_size(&self) -> usize {
        self.base
    }

    /// `alpha`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `n_k` for `k` in `1..=alpha`.
    pub fn size(&self, k: usize) -> usize {
        debug_assert!((1..=self.levels).contains(&k));
        (1usize << (k - 1)) * (self.base + 1) - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        (1..=self.levels).map(|k| self.size(k)).collect()
    }

    /// `h_k = 1 / (n_k + 1)`.
    pub fn step(&self, k: usize) -> f64 {
        step(self.size(k))
    }

    pub fn steps(&self) -> Vec<f64> {
        (1..=self.levels).map(|k| self.step(k)).collect()
    }

    /// `j_k = 2^(k-1) j_1`.
    pub fn index(&self, j1: usize, k: usize) -> usize {
        (1usize << (k - 1)) * j1
    }

    /// Base node `theta_{j, n_1} = j pi / (n_1 + 1)` for `j` in `0..=n_1+1`.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 * PI / (self.base as f64 + 1.0)
    }

    /// Number of base nodes including both endpoints.
    pub fn node_count(&self) -> usize {
        self.base + 2
    }
}
