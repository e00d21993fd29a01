//! Classical equations of motion for particles that keep a memory of their
//! exchange statistics.
//!
//! Identical bosons and fermions are described by symmetrized coherent
//! states. Projecting the quantum action onto that manifold leaves the
//! Hamiltonian untouched but changes the symplectic form, and with it the
//! Poisson brackets and the flow. The crate is organised bottom-up:
//!
//! - [`statcore`]: statistics, coordinates, closed-form two-particle
//!   symplectic factors and the general N-particle Kähler machinery built on
//!   permutation sums.
//! - [`integrator`]: adaptive Dormand–Prince integration of complex flows with
//!   conserved-quantity monitors, dense output and event location.
//! - [`dynamics`]: the 1D inverted oscillator and lowest-Landau-level
//!   scenarios together with their post-processing.
//! - [`chaos`]: Lyapunov estimates for N-particle guiding-center motion.
//! - [`qoracle`]: a truncated Fock-space reference for coherent and cat states.
//!
//! All quantities are dimensionless (`ħ = ℓ = 1`).

pub mod chaos;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod qoracle;
pub mod statcore;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
