//! Kozachenko–Leonenko k-nearest-neighbour differential entropy.
//!
//! Ĥ = ψ(n) − ψ(k) + ln c_d + (d/n)·Σ ln ε_i
//!
//! where ε_i is the distance from point i to its k-th nearest neighbour and
//! c_d the volume of the unit ball of the chosen metric.

use alloc::vec::Vec;

use crate::error::{param_err, Error, Result};
use crate::kdtree::KdTree;
use crate::special::{digamma, ln_unit_ball_chebyshev, ln_unit_ball_euclidean};

/// Smallest neighbour distance fed to the logarithm.
pub const MIN_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Metric {
    /// L∞; unit ball volume 2^d.
    #[default]
    Chebyshev,
    Euclidean,
}

impl Metric {
    pub fn ln_unit_ball(self, d: usize) -> f64 {
        match self {
            Metric::Chebyshev => ln_unit_ball_chebyshev(d),
            Metric::Euclidean => ln_unit_ball_euclidean(d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EstimateMethod {
    KnnKl,
    Analytic,
    Quadrature,
}

/// An entropy value in nats together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyEstimate {
    pub value: f64,
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub method: EstimateMethod,
    /// Number of k-th neighbour distances raised to [`MIN_DISTANCE`].
    pub floored: usize,
}

impl EntropyEstimate {
    pub fn bits(&self) -> f64 {
        self.value / core::f64::consts::LN_2
    }

    pub(crate) fn negated(mut self) -> Self {
        self.value = -self.value;
        self
    }
}

/// Validates a row-major point set and returns the k-th neighbour distance
/// of every point.
fn kth_distances(points: &[f64], dim: usize, k: usize, metric: Metric) -> Result<Vec<f64>> {
    if dim == 0 || !points.len().is_multiple_of(dim) {
        return Err(Error::Shape(alloc::format!(
            "{} values do not form rows of dimension {dim}",
            points.len()
        )));
    }
    let n = points.len() / dim;
    if k == 0 || k >= n {
        return Err(param_err!("need 1 <= k < n, got k = {k}, n = {n}"));
    }
    if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos / dim,
            column: pos % dim,
            value: points[pos],
        });
    }
    if points.chunks_exact(dim).all(|p| p == &points[..dim]) {
        return Err(Error::Degenerate("all points are identical".into()));
    }
    let tree = KdTree::new(points, dim);
    Ok((0..n)
        .map(|i| tree.kth_neighbor_distance(i, k, metric))
        .collect())
}

/// Kozachenko–Leonenko estimate over `n = points.len() / dim` row-major points.
///
/// Coincident points are allowed; their zero distances are floored at
/// [`MIN_DISTANCE`] and counted in [`EntropyEstimate::floored`].
pub fn knn_entropy(
    points: &[f64],
    dim: usize,
    k: usize,
    metric: Metric,
) -> Result<EntropyEstimate> {
    let eps = kth_distances(points, dim, k, metric)?;
    let n = eps.len();
    let floored = eps.iter().filter(|&&e| e < MIN_DISTANCE).count();
    let sum_ln: f64 = eps.iter().map(|&e| libm::log(e.max(MIN_DISTANCE))).sum();
    let d = dim as f64;
    let value =
        digamma(n as f64) - digamma(k as f64) + metric.ln_unit_ball(dim) + d * sum_ln / n as f64;
    Ok(EntropyEstimate {
        value,
        k,
        n,
        d: dim,
        method: EstimateMethod::KnnKl,
        floored,
    })
}

/// Kozachenko–Leonenko estimate for points known to lie in the box
/// `[lo, hi]^dim`, Chebyshev metric.
///
/// Each neighbour cube `[u − ε, u + ε]` is clipped to the support before its
/// volume enters the estimate, which removes the upward bias that points
/// near the faces otherwise pick up. Away from the faces the clipped volume
/// is `(2ε)^d` and the estimate coincides with [`knn_entropy`].
pub fn knn_entropy_bounded(
    points: &[f64],
    dim: usize,
    k: usize,
    lo: f64,
    hi: f64,
) -> Result<EntropyEstimate> {
    if !(lo < hi) {
        return Err(param_err!("empty support [{lo}, {hi}]"));
    }
    let eps = kth_distances(points, dim, k, Metric::Chebyshev)?;
    if let Some(pos) = points.iter().position(|&v| v < lo || v > hi) {
        return Err(param_err!(
            "value {} at row {}, column {} outside [{lo}, {hi}]",
            points[pos],
            pos / dim,
            pos % dim
        ));
    }
    let n = eps.len();
    let mut floored = 0;
    let mut lengths = alloc::vec![0.0; dim];
    let mut sum_ln = 0.0;
    for (i, &e) in eps.iter().enumerate() {
        if e < MIN_DISTANCE {
            floored += 1;
        }
        let e = e.max(MIN_DISTANCE);
        for (len, &u) in lengths.iter_mut().zip(&points[i * dim..(i + 1) * dim]) {
            *len = (u + e).min(hi) - (u - e).max(lo);
        }
        // sorted so the sum does not depend on column order
        lengths.sort_unstable_by(f64::total_cmp);
        sum_ln += lengths.iter().map(|&l| libm::log(l)).sum::<f64>();
    }
    let value = digamma(n as f64) - digamma(k as f64) + sum_ln / n as f64;
    Ok(EntropyEstimate {
        value,
        k,
        n,
        d: dim,
        method: EstimateMethod::KnnKl,
        floored,
    })
}
