//! Truncated Fock-space reference for a single relative mode.
//!
//! States are coefficient vectors over `|0⟩ … |cutoff−1⟩`. The quadratic
//! Hamiltonian `Ĥ = U K̂₀ + (V/2)(K̂₊ + K̂₋)` couples `n` to `n ± 2` only, so
//! evolution keeps parity and cat states stay cat states.

mod compare;
mod ehrenfest;
mod evolve;
mod fock;
mod su11;

pub use compare::{
    bracket_map_check, estimate_period, quantum_vs_classical_rho, BracketReport, RhoComparison,
};
pub use ehrenfest::{analytic_k, ehrenfest_solve, KTriple};
pub use evolve::{evolve, evolve_sampled, hamiltonian_matrix, EvolveConfig};
pub use fock::{
    make_cat, make_coherent, manifold_state, FockState, DEFAULT_CUTOFF, MAX_CUTOFF, TAIL_TOL,
    TAIL_WINDOW,
};
pub use su11::Su11Triple;
