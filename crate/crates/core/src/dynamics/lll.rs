//! Guiding centers in the quadratic potential `u x² + v y²`.
//!
//! For a pair the center of mass `Z` and relative coordinate `z` decouple:
//! `Ż = −(i/2)(U Z + V Z̄)` and `ż = −(i/2)(U z + V z̄ / f)`. For N particles
//! the flow is `ż_i = −i Σ_j (f⁻¹)_{ij} ∂_{z̄_j} V`, solved against the
//! symplectic matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, Monitor, Trajectory};
use crate::statcore::{
    rho_kahler_slope, symplectic_factor, Limits, NBodyState, QuadraticPotential, Statistics,
    TwoBodyState,
};

const MINUS_HALF_I: Complex64 = Complex64::new(0.0, -0.5);

/// Relative-coordinate velocity.
pub fn relative_flow(s: Statistics, pot: &QuadraticPotential, z: Complex64) -> Result<Complex64> {
    let (big_u, big_v) = (pot.isotropic(), pot.anisotropic());
    if big_v == 0.0 {
        return Ok(MINUS_HALF_I * big_u * z);
    }
    let f = symplectic_factor(s, z.norm_sqr())?;
    let f_min = Limits::default().f_min;
    if !(f >= f_min) {
        return Err(Error::Singular {
            min_eigenvalue: f,
            threshold: f_min,
        });
    }
    Ok(MINUS_HALF_I * (big_u * z + big_v * z.conj() / f))
}

/// `(Ż, ż)` for a pair.
pub fn lll_two_body_flow(
    s: Statistics,
    pot: &QuadraticPotential,
    state: &TwoBodyState,
) -> Result<(Complex64, Complex64)> {
    let cm = MINUS_HALF_I * (pot.isotropic() * state.cm + pot.anisotropic() * state.cm.conj());
    Ok((cm, relative_flow(s, pot, state.rel)?))
}

/// Velocities of all N particles.
pub fn lll_nbody_flow(
    s: Statistics,
    pot: &QuadraticPotential,
    state: &NBodyState,
) -> Result<Vec<Complex64>> {
    lll_nbody_flow_with(&Limits::default(), s, pot, state)
}

pub fn lll_nbody_flow_with(
    limits: &Limits,
    s: Statistics,
    pot: &QuadraticPotential,
    state: &NBodyState,
) -> Result<Vec<Complex64>> {
    let (f, grad) = limits.flow_terms(state, s, pot)?;
    let x = f.solve(&grad)?;
    Ok(x.into_iter().map(|g| Complex64::new(0.0, -1.0) * g).collect())
}

/// Centre-of-mass energy `(U/2)|Z|² + (V/2) Re Z²`.
pub fn cm_energy(pot: &QuadraticPotential, cm: Complex64) -> f64 {
    pot.classical_energy(cm)
}

/// Relative energy `(U/2) ρ K'(ρ) + (V/2) Re z²`.
pub fn relative_energy(s: Statistics, pot: &QuadraticPotential, z: Complex64) -> Result<f64> {
    let occ = rho_kahler_slope(s, z.norm_sqr())?;
    Ok(0.5 * pot.isotropic() * occ + 0.5 * pot.anisotropic() * (z * z).re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioLLL {
    pub statistics: Statistics,
    pub pot: QuadraticPotential,
    pub initial: NBodyState,
}

impl ScenarioLLL {
    pub fn new(statistics: Statistics, pot: QuadraticPotential, initial: NBodyState) -> Self {
        Self {
            statistics,
            pot,
            initial,
        }
    }

    /// Pair evolution in `[Z, z]` with total, CM and relative energy monitors.
    pub fn run_two_body(&self, cfg: &IntegratorConfig) -> Result<Trajectory> {
        if self.initial.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "two-body run needs 2 particles, got {}",
                self.initial.len()
            )));
        }
        let (s, pot) = (self.statistics, self.pot);
        let start = self.initial.two_body();
        let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
            let (a, b) = lll_two_body_flow(s, &pot, &TwoBodyState::new(y[0], y[1]))?;
            dy[0] = a;
            dy[1] = b;
            Ok(())
        };
        let rel = move |y: &[Complex64]| relative_energy(s, &pot, y[1]).unwrap_or(f64::NAN);
        let monitors = [
            Monitor::new("energy", move |_t, y: &[Complex64]| cm_energy(&pot, y[0]) + rel(y)),
            Monitor::new("cm_energy", move |_t, y: &[Complex64]| cm_energy(&pot, y[0])),
            Monitor::new("relative_energy", move |_t, y: &[Complex64]| rel(y)),
        ];
        integrate(flow, &[start.cm, start.rel], cfg, &monitors, &[])
    }

    /// N-particle evolution in individual coordinates with an energy monitor.
    pub fn run(&self, cfg: &IntegratorConfig) -> Result<Trajectory> {
        let (s, pot) = (self.statistics, self.pot);
        let limits = Limits::default();
        let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
            let state = NBodyState::new(y.to_vec())?;
            dy.copy_from_slice(&lll_nbody_flow_with(&limits, s, &pot, &state)?);
            Ok(())
        };
        let energy = Monitor::new("energy", move |_t, y: &[Complex64]| {
            NBodyState::new(y.to_vec())
                .and_then(|st| limits.potential_expectation(&st, s, &pot, false))
                .unwrap_or(f64::NAN)
        });
        integrate(flow, self.initial.coords(), cfg, &[energy], &[])
    }
}

/// Maps a `[Z, z]` trajectory to the particle trajectories `z1(t)`, `z2(t)`.
pub fn individual_coordinates(traj: &Trajectory) -> (Trajectory, Trajectory) {
    let split = |sign: f64| {
        traj.map_linear(move |y| {
            vec![(y[0] + sign * y[1]) * std::f64::consts::FRAC_1_SQRT_2]
        })
    };
    (split(1.0), split(-1.0))
}
