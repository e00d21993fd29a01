//! Constant-energy curves of the relative motion in `ρ = r²`, `φ = 2θ`.
//!
//! The relative energy in these coordinates is
//! `(U/2) ρ K'(ρ) + (V/2) ρ cos φ`; at each angle the curve is the outermost
//! root in `ρ`, found by scanning for a bracket and bisecting.

use crate::error::{Error, Result};
use crate::statcore::{rho_kahler_slope, PotentialShape, QuadraticPotential, Statistics};

const BISECT_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPoint {
    pub rho: f64,
    pub phi: f64,
}

impl LevelPoint {
    /// Position `(x, y)` of the relative coordinate.
    pub fn cartesian(&self) -> (f64, f64) {
        let (r, theta) = (self.rho.sqrt(), 0.5 * self.phi);
        (r * theta.cos(), r * theta.sin())
    }
}

fn level_energy(s: Statistics, pot: &QuadraticPotential, rho: f64, phi: f64) -> Result<f64> {
    Ok(0.5 * pot.isotropic() * rho_kahler_slope(s, rho)? + 0.5 * pot.anisotropic() * rho * phi.cos())
}

/// Samples the curve at `n` angles `φ_k = 2πk/n`.
pub fn rtheta_levelset(
    s: Statistics,
    pot: &QuadraticPotential,
    energy: f64,
    n: usize,
) -> Result<Vec<LevelPoint>> {
    if pot.shape() != PotentialShape::Trap {
        return Err(Error::InvalidParameter(
            "level sets need a confining trap (u > 0, v > 0)".into(),
        ));
    }
    if !energy.is_finite() || n == 0 {
        return Err(Error::InvalidParameter("energy must be finite and n ≥ 1".into()));
    }
    (0..n)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            solve_angle(s, pot, energy, phi).map(|rho| LevelPoint { rho, phi })
        })
        .collect()
}

fn solve_angle(s: Statistics, pot: &QuadraticPotential, energy: f64, phi: f64) -> Result<f64> {
    let h = |rho: f64| level_energy(s, pot, rho, phi).map(|e| e - energy);
    // The energy grows like ((U + V cos φ)/2) ρ, so a finite upper end exists.
    let slope = 0.5 * (pot.isotropic() + pot.anisotropic() * phi.cos());
    let mut hi = (2.0 * energy.abs() / slope).max(1.0);
    while h(hi)? <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoSolution { phi });
        }
    }
    let mut bracket = None;
    let mut prev = h(0.0)?;
    for k in 1..=SCAN_POINTS {
        let rho = hi * k as f64 / SCAN_POINTS as f64;
        let cur = h(rho)?;
        if prev <= 0.0 && cur > 0.0 {
            bracket = Some((hi * (k - 1) as f64 / SCAN_POINTS as f64, rho));
        }
        prev = cur;
    }
    let (mut lo, mut up) = bracket.ok_or(Error::NoSolution { phi })?;
    while up - lo > BISECT_TOL {
        let mid = 0.5 * (lo + up);
        if h(mid)? <= 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Ok(0.5 * (lo + up))
}

/// Area enclosed in the `(x, y)` plane. `θ` runs over `[0, 2π)` while `φ`
/// covers `[0, 2π)` twice, so `½∮r² dθ = ½∫₀^{2π} ρ dφ`.
pub fn enclosed_area(curve: &[LevelPoint]) -> f64 {
    let n = curve.len() as f64;
    curve.iter().map(|p| p.rho).sum::<f64>() * std::f64::consts::PI / n
}
