//! Closed-form relative-coordinate quantities for a particle pair.
//!
//! With `ρ = z z̄` of the relative coordinate the Kähler potentials are
//! `ρ` (distinguishable), `ln cosh ρ` (bosons) and `ln sinh ρ` (fermions).
//! The symplectic factor is `f = d(ρ K')/dρ`.

use crate::error::{Error, Result};
use crate::statcore::Statistics;

/// Below this `ρ` the fermionic factor switches to its series.
pub const FERMION_SERIES_RHO: f64 = 1e-3;

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be finite, got {rho}")));
    }
    if rho < 0.0 {
        return Err(Error::Domain(format!("rho must be non-negative, got {rho}")));
    }
    Ok(())
}

fn sech2(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

fn cosech2(x: f64) -> f64 {
    let s = x.sinh();
    1.0 / (s * s)
}

/// `f_{z̄z}(ρ)`: `tanh ρ + ρ sech²ρ`, `coth ρ − ρ cosech²ρ` or `1`.
pub fn symplectic_factor(s: Statistics, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match s {
        Statistics::Distinguishable => 1.0,
        Statistics::Boson => rho.tanh() + rho * sech2(rho),
        Statistics::Fermion => {
            if rho < FERMION_SERIES_RHO {
                let r2 = rho * rho;
                rho * (2.0 / 3.0 - 4.0 / 45.0 * r2)
            } else {
                1.0 / rho.tanh() - rho * cosech2(rho)
            }
        }
    })
}

/// `df/dρ`, used when seeding momenta self-consistently.
pub fn symplectic_factor_slope(s: Statistics, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match s {
        Statistics::Distinguishable => 0.0,
        Statistics::Boson => 2.0 * sech2(rho) * (1.0 - rho * rho.tanh()),
        Statistics::Fermion => {
            if rho < FERMION_SERIES_RHO {
                2.0 / 3.0 - 4.0 / 15.0 * rho * rho
            } else {
                2.0 * cosech2(rho) * (rho / rho.tanh() - 1.0)
            }
        }
    })
}

/// `dK/dρ`: `1`, `tanh ρ` or `coth ρ`.
///
/// Fermions diverge at `ρ = 0`; callers that need a finite quantity should
/// use [`rho_kahler_slope`].
pub fn kahler_slope(s: Statistics, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match s {
        Statistics::Distinguishable => 1.0,
        Statistics::Boson => rho.tanh(),
        Statistics::Fermion => 1.0 / rho.tanh(),
    })
}

/// `ρ K'(ρ)`, the relative-sector occupation `⟨a†a⟩` of the pair state.
/// Finite at the origin for all statistics.
pub fn rho_kahler_slope(s: Statistics, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match s {
        Statistics::Distinguishable => rho,
        Statistics::Boson => rho * rho.tanh(),
        Statistics::Fermion => {
            if rho < 1e-4 {
                1.0 + rho * rho / 3.0
            } else {
                rho / rho.tanh()
            }
        }
    })
}

/// Relative-coordinate Kähler potential with the additive constants dropped.
pub fn relative_kahler(s: Statistics, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match s {
        Statistics::Distinguishable => rho,
        // ln cosh ρ and ln sinh ρ, rewritten to stay finite for large ρ.
        Statistics::Boson => rho + (0.5 * (1.0 + (-2.0 * rho).exp())).ln(),
        Statistics::Fermion => {
            if rho == 0.0 {
                return Err(Error::Coincidence { value: 0.0 });
            }
            rho + (0.5 * (-(-2.0 * rho).exp_m1())).ln()
        }
    })
}
