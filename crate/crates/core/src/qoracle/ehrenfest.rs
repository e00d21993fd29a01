use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{integrate_sampled, IntegratorConfig};
use crate::statcore::QuadraticPotential;

/// Quadratic moments `K_c = Re z²`, `K_s = Im z²`, `K₀ = ρ/2` (classical), or
/// their operator expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KTriple {
    pub kc: f64,
    pub ks: f64,
    pub k0: f64,
}

impl KTriple {
    /// `ρ = 2K₀` classically; quantum callers subtract the ½ themselves.
    pub fn rho(&self) -> f64 {
        2.0 * self.k0
    }

    pub fn max_abs_diff(&self, other: &KTriple) -> f64 {
        (self.kc - other.kc)
            .abs()
            .max((self.ks - other.ks).abs())
            .max((self.k0 - other.k0).abs())
    }
}

/// Integrates `K̇_c = U K_s`, `K̇_s = −U K_c − 2V K₀`, `K̇₀ = −(V/2) K_s` from
/// `ρ(0) = rho0`, `θ(0) = theta0` (with `θ = 2 arg z`). The quantum branch
/// starts from `K₀ = ½(ρ0 + ½)`.
pub fn ehrenfest_solve(
    pot: &QuadraticPotential,
    rho0: f64,
    theta0: f64,
    quantum: bool,
    times: &[f64],
) -> Result<Vec<KTriple>> {
    if !(rho0 >= 0.0 && rho0.is_finite() && theta0.is_finite()) {
        return Err(Error::InvalidParameter("rho0 must be ≥ 0 and theta0 finite".into()));
    }
    let (big_u, big_v) = (pot.isotropic(), pot.anisotropic());
    let k0 = if quantum { 0.5 * (rho0 + 0.5) } else { 0.5 * rho0 };
    let start = [
        Complex64::new(rho0 * theta0.cos(), 0.0),
        Complex64::new(rho0 * theta0.sin(), 0.0),
        Complex64::new(k0, 0.0),
    ];
    let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
        dy[0] = y[1] * big_u;
        dy[1] = -(y[0] * big_u) - y[2] * (2.0 * big_v);
        dy[2] = y[1] * (-0.5 * big_v);
        Ok(())
    };
    let cfg = IntegratorConfig::default().with_tolerances(1e-12, 1e-14);
    let states = integrate_sampled(flow, 0.0, &start, times, &cfg)?;
    Ok(states
        .into_iter()
        .map(|y| KTriple {
            kc: y[0].re,
            ks: y[1].re,
            k0: y[2].re,
        })
        .collect())
}

/// Closed-form solution for `ρ(0) = l²`, `θ(0) = π/2` in the oscillatory
/// regime `ω² = U² − V² > 0`.
pub fn analytic_k(pot: &QuadraticPotential, l2: f64, quantum: bool, t: f64) -> Result<KTriple> {
    let (big_u, big_v) = (pot.isotropic(), pot.anisotropic());
    let w = pot.frequency().ok_or_else(|| {
        Error::InvalidParameter("closed form needs U² > V²".into())
    })?;
    let shifted = if quantum { l2 + 0.5 } else { l2 };
    let (s, c) = (w * t).sin_cos();
    let r = big_v / w;
    Ok(KTriple {
        kc: big_u * l2 / w * s + big_u * big_v / (w * w) * shifted * (c - 1.0),
        ks: l2 * c - r * shifted * s,
        k0: -0.5 * r * l2 * s - 0.5 * r * r * shifted * c + 0.5 * shifted * (1.0 + r * r),
    })
}
