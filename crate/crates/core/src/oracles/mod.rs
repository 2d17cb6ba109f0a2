//! Independent truth sources: Gaussian closed forms and midpoint-rule
//! quadrature of small periodic Boltzmann densities.

mod gaussian;
mod grid;

pub use gaussian::{cholesky, gaussian_ce, gaussian_entropy, sample_gaussian, CorrelationMatrix};
pub use grid::{
    grid_boltzmann, grid_convergence, grid_correlation_entropy, grid_marginalize, DensityGrid,
    GridConvergence, MAX_GRID_3, MIN_GRID,
};
