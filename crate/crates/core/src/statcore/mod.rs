//! Domain types, closed-form pair factors and the N-particle Kähler machinery.

pub mod factor;
pub mod kahler;
mod types;

pub use factor::{
    kahler_slope, relative_kahler, rho_kahler_slope, symplectic_factor, symplectic_factor_slope,
    FERMION_SERIES_RHO,
};
pub use kahler::{
    berry_connection, kahler_potential, permutation_sum, potential_expectation, potential_gradient,
    symplectic_matrix, Limits, SymplecticMatrix,
};
pub use types::{
    cm_relative_transform, NBodyState, PhasePoint, PotentialShape, QuadraticPotential,
    Statistics, TwoBodyState,
};
