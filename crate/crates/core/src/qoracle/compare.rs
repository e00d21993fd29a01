use num_complex::Complex64;

use crate::dynamics::relative_flow;
use crate::error::Result;
use crate::integrator::{integrate_sampled, IntegratorConfig};
use crate::qoracle::evolve::{evolve_sampled, EvolveConfig};
use crate::qoracle::fock::{manifold_state, FockState};
use crate::statcore::{symplectic_factor, QuadraticPotential, Statistics};

/// Two sides of `{F, G} = ⟨[F̂, Ĝ]⟩/i` for `F = ⟨x̂⟩`, `G = ⟨p̂⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketReport {
    /// `⟨[x̂, p̂]⟩ / i`.
    pub commutator: f64,
    /// Poisson bracket of the expectation functions on the state manifold.
    pub bracket: f64,
}

impl BracketReport {
    pub fn discrepancy(&self) -> f64 {
        (self.commutator - self.bracket).abs()
    }
}

const BRACKET_STEP: f64 = 1e-4;

/// Compares the commutator and the manifold bracket at the state
/// parameterized by `z` (coherent for distinguishable, cat otherwise).
pub fn bracket_map_check(s: Statistics, z: Complex64, cutoff: usize) -> Result<BracketReport> {
    let state = manifold_state(s, z, cutoff)?;
    let commutator = commutator_xp(&state);

    let moments = |w: Complex64| -> Result<(f64, f64)> {
        let st = manifold_state(s, w, cutoff)?;
        Ok((st.mean_x(), st.mean_p()))
    };
    let h = BRACKET_STEP;
    let (fx_p, gx_p) = moments(z + h)?;
    let (fx_m, gx_m) = moments(z - h)?;
    let (fy_p, gy_p) = moments(z + Complex64::new(0.0, h))?;
    let (fy_m, gy_m) = moments(z - Complex64::new(0.0, h))?;
    let d = |p: f64, m: f64| (p - m) / (2.0 * h);
    let (fx, fy, gx, gy) = (d(fx_p, fx_m), d(fy_p, fy_m), d(gx_p, gx_m), d(gy_p, gy_m));
    // ∂_z = ½(∂_x − i∂_y), ∂_z̄ = ½(∂_x + i∂_y)
    let dz = |x: f64, y: f64| Complex64::new(0.5 * x, -0.5 * y);
    let dzb = |x: f64, y: f64| Complex64::new(0.5 * x, 0.5 * y);
    let f = symplectic_factor(s, z.norm_sqr())?;
    let poisson = Complex64::new(0.0, -1.0 / f);
    let value = poisson * (dz(fx, fy) * dzb(gx, gy) - dzb(fx, fy) * dz(gx, gy));
    Ok(BracketReport {
        commutator,
        bracket: value.re,
    })
}

/// `⟨[x̂, p̂]⟩/i` evaluated with the truncated ladder operators.
fn commutator_xp(state: &FockState) -> f64 {
    let c = state.coeffs();
    let n = c.len();
    let a = |v: &[Complex64]| -> Vec<Complex64> {
        (0..n)
            .map(|k| if k + 1 < n { v[k + 1] * ((k + 1) as f64).sqrt() } else { Complex64::new(0.0, 0.0) })
            .collect()
    };
    let ad = |v: &[Complex64]| -> Vec<Complex64> {
        (0..n)
            .map(|k| if k > 0 { v[k - 1] * (k as f64).sqrt() } else { Complex64::new(0.0, 0.0) })
            .collect()
    };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let x = |v: &[Complex64]| -> Vec<Complex64> {
        a(v).iter().zip(ad(v)).map(|(p, q)| (p + q) * r).collect()
    };
    let p = |v: &[Complex64]| -> Vec<Complex64> {
        a(v).iter()
            .zip(ad(v))
            .map(|(p, q)| (p - q) * Complex64::new(0.0, -r))
            .collect()
    };
    let xp = x(&p(c));
    let px = p(&x(c));
    let value: Complex64 = c
        .iter()
        .zip(xp.iter().zip(&px))
        .map(|(ci, (u, w))| ci.conj() * (u - w))
        .sum();
    (value / Complex64::new(0.0, 1.0)).re
}

/// `ρ_qm(t) = ⟨a†a⟩` under unitary evolution and `ρ_cl(t) = |z(t)|²` under
/// the classical relative flow, on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoComparison {
    pub times: Vec<f64>,
    pub rho_qm: Vec<f64>,
    pub rho_cl: Vec<f64>,
}

pub fn quantum_vs_classical_rho(
    s: Statistics,
    pot: &QuadraticPotential,
    z0: Complex64,
    t_end: f64,
    dt: f64,
    cutoff: usize,
) -> Result<RhoComparison> {
    let n = (t_end / dt + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();

    let state = manifold_state(s, z0, cutoff)?;
    let evolved = evolve_sampled(&state, pot, &times, &EvolveConfig::default())?;
    // ⟨½(aa† + a†a)⟩ − ½ = ⟨a†a⟩
    let rho_qm = evolved.iter().map(|st| st.mean_number()).collect();

    let pot_c = *pot;
    let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
        dy[0] = relative_flow(s, &pot_c, y[0])?;
        Ok(())
    };
    let cfg = IntegratorConfig::default().with_tolerances(1e-11, 1e-13);
    let rho_cl = integrate_sampled(flow, 0.0, &[z0], &times, &cfg)?
        .into_iter()
        .map(|y| y[0].norm_sqr())
        .collect();
    Ok(RhoComparison {
        times,
        rho_qm,
        rho_cl,
    })
}

/// Mean spacing of successive local maxima, refined by a parabola through
/// each peak and its neighbours.
pub fn estimate_period(times: &[f64], values: &[f64]) -> Option<f64> {
    let range = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(range > 1e-9) {
        return None;
    }
    let mut peaks = Vec::new();
    for k in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[k - 1], values[k], values[k + 1]);
        if b > a && b >= c {
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let h = times[k + 1] - times[k];
            peaks.push(times[k] + shift * h);
        }
    }
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}
