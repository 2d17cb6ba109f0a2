//! Midpoint-rule discretisation of the positional Boltzmann density for two
//! or three particles on a periodic line.

use alloc::vec::Vec;

use crate::ensemble::{BoxSpec, PotentialSpec};
use crate::error::{param_err, Error, Result};

/// Smallest accepted grid resolution per axis.
pub const MIN_GRID: usize = 64;
/// Largest resolution per axis for three-particle grids.
pub const MAX_GRID_3: usize = 128;

/// Normalised density on a regular grid over `slots` particle positions,
/// one periodic axis of length `side_length` per slot. Values are stored
/// row-major with slot 0 varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    slots: usize,
    grid_points: usize,
    side_length: f64,
    values: Vec<f64>,
}

impl DensityGrid {
    /// Normalises `weights` so that `Σ values · cell_measure = 1`.
    pub fn from_weights(
        slots: usize,
        grid_points: usize,
        side_length: f64,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if slots == 0 || grid_points == 0 || weights.len() != grid_points.pow(slots as u32) {
            return Err(param_err!(
                "weights do not match a {grid_points}^{slots} grid"
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Degenerate(
                "Boltzmann weights are not finite and non-negative".into(),
            ));
        }
        let mut grid = Self {
            slots,
            grid_points,
            side_length,
            values: weights,
        };
        let total: f64 = grid.values.iter().sum::<f64>() * grid.cell_measure();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Degenerate("density does not normalise".into()));
        }
        grid.values.iter_mut().for_each(|v| *v /= total);
        Ok(grid)
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_length(&self) -> f64 {
        self.side_length / self.grid_points as f64
    }

    pub fn cell_measure(&self) -> f64 {
        libm::pow(self.cell_length(), self.slots as f64)
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    /// Marginal density of one slot.
    pub fn slot_marginal(&self, slot: usize) -> Vec<f64> {
        let m = self.grid_points;
        let stride = m.pow((self.slots - 1 - slot) as u32);
        let mut marg = alloc::vec![0.0; m];
        for (idx, v) in self.values.iter().enumerate() {
            marg[(idx / stride) % m] += v;
        }
        let other = libm::pow(self.cell_length(), (self.slots - 1) as f64);
        marg.iter_mut().for_each(|v| *v *= other);
        marg
    }
}

/// Exact discretised `exp(−β V)` for `particles ∈ {2, 3}` on a 1D periodic
/// box, evaluated at cell midpoints.
pub fn grid_boltzmann(
    potential: &PotentialSpec,
    beta: f64,
    sim_box: &BoxSpec,
    particles: usize,
    grid_m: usize,
) -> Result<DensityGrid> {
    potential.validate()?;
    sim_box.validate()?;
    if sim_box.dimension != 1 {
        return Err(param_err!("grid oracle supports 1D boxes only"));
    }
    if !(2..=3).contains(&particles) {
        return Err(param_err!(
            "grid oracle supports 2 or 3 particles, got {particles}"
        ));
    }
    if grid_m < MIN_GRID {
        return Err(param_err!(
            "grid_m must be at least {MIN_GRID}, got {grid_m}"
        ));
    }
    if particles == 3 && grid_m > MAX_GRID_3 {
        return Err(param_err!(
            "three-particle grids are capped at {MAX_GRID_3} points per axis"
        ));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(param_err!(
            "beta must be finite and non-negative, got {beta}"
        ));
    }

    // Midpoints differ by whole cells, so every pair factor is a function of
    // the index offset alone.
    let m = grid_m;
    let h = sim_box.side_length / m as f64;
    let factor: Vec<f64> = (0..m)
        .map(|k| {
            let r = k.min(m - k) as f64 * h;
            libm::exp(-beta * potential.pair_energy(r, sim_box.side_length))
        })
        .collect();
    if factor.iter().any(|f| !f.is_finite()) {
        return Err(Error::Degenerate(
            "potential diverges to -inf; the Boltzmann factor is not integrable".into(),
        ));
    }
    let offset = |a: usize, b: usize| factor[(a + m - b) % m];

    let weights: Vec<f64> = if particles == 2 {
        (0..m * m).map(|idx| offset(idx / m, idx % m)).collect()
    } else {
        (0..m * m * m)
            .map(|idx| {
                let (i, j, k) = (idx / (m * m), (idx / m) % m, idx % m);
                offset(i, j) * offset(i, k) * offset(j, k)
            })
            .collect()
    };
    DensityGrid::from_weights(particles, m, sim_box.side_length, weights)
}

/// −Σ p·ln(p / Π marginals)·cell_measure: the copula entropy of the gridded
/// positions (−KL divergence from the product of marginals). Empty cells
/// contribute zero.
pub fn grid_correlation_entropy(grid: &DensityGrid) -> f64 {
    let m = grid.grid_points;
    let marginals: Vec<Vec<f64>> = (0..grid.slots).map(|s| grid.slot_marginal(s)).collect();
    let mut acc = 0.0;
    for (idx, &p) in grid.values.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let mut rest = idx;
        let mut prod = 1.0;
        for s in (0..grid.slots).rev() {
            prod *= marginals[s][rest % m];
            rest /= m;
        }
        acc += p * libm::log(p / prod);
    }
    -acc * grid.cell_measure()
}

/// Integrates out every slot not listed in `keep`. Slots keep their
/// relative order.
pub fn grid_marginalize(grid: &DensityGrid, keep: &[usize]) -> Result<DensityGrid> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(param_err!("keep must name at least one slot"));
    }
    if let Some(&bad) = keep.iter().find(|&&s| s >= grid.slots) {
        return Err(param_err!(
            "slot {bad} out of range for a {}-slot grid",
            grid.slots
        ));
    }
    if keep.len() == grid.slots {
        return Ok(grid.clone());
    }
    let m = grid.grid_points;
    let out_len = m.pow(keep.len() as u32);
    let mut out = alloc::vec![0.0; out_len];
    for (idx, &p) in grid.values.iter().enumerate() {
        let mut out_idx = 0;
        for &s in &keep {
            let stride = m.pow((grid.slots - 1 - s) as u32);
            out_idx = out_idx * m + (idx / stride) % m;
        }
        out[out_idx] += p;
    }
    let dropped = libm::pow(grid.cell_length(), (grid.slots - keep.len()) as f64);
    out.iter_mut().for_each(|v| *v *= dropped);
    DensityGrid::from_weights(keep.len(), m, grid.side_length, out)
}

/// Grid correlation entropy at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridConvergence {
    pub value: f64,
    pub grid_m: usize,
    pub other_value: f64,
    pub other_grid_m: usize,
    /// |value − other_value|
    pub delta: f64,
}

/// Evaluates the grid correlation entropy at `grid_m` and at `2·grid_m`, or
/// at `grid_m / 2` when doubling would break the three-particle cap.
pub fn grid_convergence(
    potential: &PotentialSpec,
    beta: f64,
    sim_box: &BoxSpec,
    particles: usize,
    grid_m: usize,
) -> Result<GridConvergence> {
    let value = grid_correlation_entropy(&grid_boltzmann(
        potential, beta, sim_box, particles, grid_m,
    )?);
    let other_grid_m = if particles == 3 && 2 * grid_m > MAX_GRID_3 {
        grid_m / 2
    } else {
        2 * grid_m
    };
    let other = if other_grid_m >= MIN_GRID {
        grid_correlation_entropy(&grid_boltzmann(
            potential,
            beta,
            sim_box,
            particles,
            other_grid_m,
        )?)
    } else {
        return Err(param_err!(
            "no second resolution available for grid_m = {grid_m}"
        ));
    };
    Ok(GridConvergence {
        value,
        grid_m,
        other_value: other,
        other_grid_m,
        delta: (value - other).abs(),
    })
}
