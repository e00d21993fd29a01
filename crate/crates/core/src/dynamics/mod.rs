//! Scenarios and trajectory post-processing.
//!
//! * [`iho`]: relative motion of a pair scattering off an inverted oscillator.
//! * [`lll`]: guiding centers in a quadratic potential, for two or N particles.
//! * [`levelset`]: `ρ(φ)` curves of constant relative energy.
//! * [`phase`]: Berry line integral and dynamical phase of closed orbits.
//! * [`survival`]: time spent below a position level.

pub mod iho;
pub mod levelset;
pub mod lll;
pub mod phase;
pub mod survival;

pub use iho::{
    classify, iho_energy, iho_flow, iho_state_energy, log_slope, seed_momentum, ClassifiedOutcome,
    IhoRun, OutcomeKind, ScenarioIHO, JITTER,
};
pub use levelset::{enclosed_area, rtheta_levelset, LevelPoint};
pub use lll::{
    cm_energy, individual_coordinates, lll_nbody_flow, lll_two_body_flow, relative_energy,
    relative_flow, ScenarioLLL,
};
pub use phase::{closed_relative_orbit, geometric_phase, GeometricPhase};
pub use survival::{survival_function, survival_function_of};
