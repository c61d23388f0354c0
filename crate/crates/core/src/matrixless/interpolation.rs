//! Local Lagrange interpolation on the uniform base grid.
//!
//! Positions are measured in node units: `x = theta (n_1 + 1) / pi`, so node
//! `i` sits at `x = i`.

use std::f64::consts::PI;

/// A point on the base grid expressed as `x = num / den` node units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct GridPosition {
    num: u128,
    den: u128,
}

impl GridPosition {
    /// Position of `theta_{j,n} = j pi / (n + 1)` on a base grid with
    /// `base_intervals = n_1 + 1`.
    pub(crate) fn of_index(j: usize, n: usize, base_intervals: usize) -> Self {
        Self {
            num: j as u128 * base_intervals as u128,
            den: n as u128 + 1,
        }
    }

    /// The node this position coincides with, if any.
    pub(crate) fn node(&self) -> Option<usize> {
        self.num.is_multiple_of(self.den).then(|| (self.num / self.den) as usize)
    }

    /// First node of the `points` nodes closest to this position, with ties
    /// resolved towards the left, clamped to `0..=node_count-points`.
    pub(crate) fn stencil_start(&self, points: usize, node_count: usize) -> usize {
        // ceil(x - points/2) = ceil((2 num - points den) / (2 den))
        let top = 2 * self.num as i128 - points as i128 * self.den as i128;
        let bottom = 2 * self.den as i128;
        let start = top.div_euclid(bottom) + i128::from(top.rem_euclid(bottom) != 0);
        start.clamp(0, (node_count - points) as i128) as usize
    }

    /// Offset of the position from `start`, in node units.
    pub(crate) fn offset_from(&self, start: usize) -> f64 {
        let shifted = self.num as i128 - start as i128 * self.den as i128;
        shifted as f64 / self.den as f64
    }
}

/// Number of interpolation nodes used for coefficient `k` with `alpha`
/// levels: `alpha - k + 5`, capped by the available nodes.
pub fn stencil_size(alpha: usize, k: usize, node_count: usize) -> usize {
    (alpha + 5 - k).min(node_count)
}

/// Evaluates the Lagrange polynomial through `(i, values[i])`,
/// `i = 0..values.len()`, at `t`.
pub fn lagrange_unit_nodes(values: &[f64], t: f64) -> f64 {
    let p = values.len();
    let mut total = 0.0;
    for (i, &yi) in values.iter().enumerate() {
        let mut basis = 1.0;
        for m in 0..p {
            if m != i {
                basis *= (t - m as f64) / (i as f64 - m as f64);
            }
        }
        total += yi * basis;
    }
    total
}

/// Interpolates samples `values[i]` at nodes `i pi / (node_count - 1)` with
/// the `points` nodes closest to `theta`.
pub fn interpolate_local(values: &[f64], points: usize, theta: f64) -> f64 {
    let node_count = values.len();
    let points = points.clamp(1, node_count);
    let intervals = (node_count - 1) as f64;
    let x = (theta / PI * intervals).clamp(0.0, intervals);
    let nearest = x.round();
    if (x - nearest).abs() <= 8.0 * f64::EPSILON * intervals {
        return values[nearest as usize];
    }
    let start = ((x - 0.5 * points as f64).ceil().max(0.0) as usize).min(node_count - points);
    lagrange_unit_nodes(&values[start..start + points], x - start as f64)
}

/// Interpolates at `theta_{j,n}` using exact rational node arithmetic.
pub(crate) fn interpolate_at_index(values: &[f64], points: usize, j: usize, n: usize) -> f64 {
    let node_count = values.len();
    let points = points.clamp(1, node_count);
    let pos = GridPosition::of_index(j, n, node_count - 1);
    if let Some(i) = pos.node() {
        return values[i];
    }
    let start = pos.stencil_start(points, node_count);
    lagrange_unit_nodes(&values[start..start + points], pos.offset_from(start))
}
