//! Phases accumulated along a closed relative orbit.
//!
//! The Berry part is `∮(A_z ż + A_z̄ ż̄) dt` with `A_z̄ = −(i/2) ∂_z̄ 𝕂`. For a
//! relative coordinate `∂_z̄ 𝕂 = z K'(ρ)`, so the integrand reduces to
//! `−K'(ρ) Im(z̄ ż)`. Counterclockwise orbits (increasing `arg z`) therefore
//! give a negative Berry phase. The dynamical part is `−∫ V dt`.

use num_complex::Complex64;

use crate::dynamics::lll::{relative_energy, relative_flow};
use crate::error::{Error, Result};
use crate::integrator::{integrate, Direction, Event, IntegratorConfig, Trajectory};
use crate::statcore::{kahler_slope, QuadraticPotential, Statistics};

/// Largest `|z(T) − z(0)|` accepted as closed.
pub const CLOSURE_TOL: f64 = 1e-6;
const SIMPSON_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricPhase {
    pub aa_phase: f64,
    pub dynamic_phase: f64,
    pub period: f64,
}

/// Integrates the relative flow from `z0` until it first returns to
/// `arg z0`, or to `cfg.t_end`.
pub fn closed_relative_orbit(
    s: Statistics,
    pot: &QuadraticPotential,
    z0: Complex64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let pot = *pot;
    let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
        dy[0] = relative_flow(s, &pot, y[0])?;
        Ok(())
    };
    let v0 = relative_flow(s, &pot, z0)?;
    let turning = (z0.conj() * v0).im;
    if z0 == Complex64::new(0.0, 0.0) || turning == 0.0 {
        return integrate(flow, &[z0], cfg, &[], &[]);
    }
    let direction = if turning > 0.0 {
        Direction::Rising
    } else {
        Direction::Falling
    };
    let anchor = z0.conj();
    let ret = Event::new("return", direction, move |_t, y: &[Complex64]| (y[0] * anchor).im).terminal();
    integrate(flow, &[z0], cfg, &[], &[ret])
}

/// Berry and dynamical phases over the whole span of `traj`.
pub fn geometric_phase(
    traj: &Trajectory,
    s: Statistics,
    pot: &QuadraticPotential,
) -> Result<GeometricPhase> {
    let gap = (traj.final_state()[0] - traj.states[0][0]).norm();
    if !(gap <= CLOSURE_TOL) {
        return Err(Error::OpenOrbit { gap });
    }
    let (t0, t1) = (traj.t_start(), traj.t_final());
    let berry = |t: f64| -> Result<f64> {
        let z = traj.sample(t).expect("inside span")[0];
        let dz = traj.sample_derivative(t).expect("inside span")[0];
        if z == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        Ok(-kahler_slope(s, z.norm_sqr())? * (z.conj() * dz).im)
    };
    let potential = |t: f64| -> Result<f64> {
        let z = traj.sample(t).expect("inside span")[0];
        relative_energy(s, pot, z).map(|e| -e)
    };
    let start = (2 * traj.len()).max(2);
    Ok(GeometricPhase {
        aa_phase: simpson(berry, t0, t1, start)?,
        dynamic_phase: simpson(potential, t0, t1, start)?,
        period: t1 - t0,
    })
}

/// Composite Simpson, doubling the panel count until two estimates agree.
fn simpson(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, start: usize) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let rule = |n: usize| -> Result<f64> {
        let h = (b - a) / n as f64;
        let mut acc = f(a)? + f(b)?;
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h)?;
        }
        Ok(acc * h / 3.0)
    };
    let mut n = start + start % 2;
    let mut prev = rule(n)?;
    while n < MAX_PANELS {
        n *= 2;
        let cur = rule(n)?;
        if (cur - prev).abs() <= SIMPSON_TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        what: "phase quadrature",
        iterations: n,
    })
}
