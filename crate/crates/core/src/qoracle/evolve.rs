use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, Stepper};
use crate::qoracle::fock::{FockState, MAX_CUTOFF};
use crate::statcore::QuadraticPotential;

/// Tolerances of the coefficient ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cutoff doubling stops here.
    pub max_cutoff: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_cutoff: MAX_CUTOFF,
        }
    }
}

/// Banded `Ĥ`: diagonal `(U/2)(n + ½)` and `(V/4)√((n+1)(n+2))` on `n ↔ n+2`.
#[derive(Debug, Clone)]
struct Banded {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Banded {
    fn new(pot: &QuadraticPotential, cutoff: usize) -> Self {
        let (big_u, big_v) = (pot.isotropic(), pot.anisotropic());
        let diag = (0..cutoff).map(|n| 0.5 * big_u * (n as f64 + 0.5)).collect();
        let off = (0..cutoff.saturating_sub(2))
            .map(|n| 0.25 * big_v * (((n + 1) * (n + 2)) as f64).sqrt())
            .collect();
        Self { diag, off }
    }

    /// `dy = −i Ĥ y`.
    fn apply(&self, y: &[Complex64], dy: &mut [Complex64]) {
        let n = y.len();
        for k in 0..n {
            let mut acc = y[k] * self.diag[k];
            if k >= 2 {
                acc += y[k - 2] * self.off[k - 2];
            }
            if k + 2 < n {
                acc += y[k + 2] * self.off[k];
            }
            dy[k] = Complex64::new(acc.im, -acc.re);
        }
    }
}

/// Dense `Ĥ` for the given cutoff (real symmetric).
pub fn hamiltonian_matrix(pot: &QuadraticPotential, cutoff: usize) -> nalgebra::DMatrix<f64> {
    let h = Banded::new(pot, cutoff);
    let mut m = nalgebra::DMatrix::zeros(cutoff, cutoff);
    for k in 0..cutoff {
        m[(k, k)] = h.diag[k];
        if k + 2 < cutoff {
            m[(k, k + 2)] = h.off[k];
            m[(k + 2, k)] = h.off[k];
        }
    }
    m
}

fn evolve_fixed(
    state: &FockState,
    pot: &QuadraticPotential,
    times: &[f64],
    cfg: &EvolveConfig,
) -> Result<Vec<FockState>> {
    let h = Banded::new(pot, state.cutoff());
    let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
        h.apply(y, dy);
        Ok(())
    };
    let span = times.last().copied().unwrap_or(0.0).max(1e-12);
    let icfg = IntegratorConfig::default()
        .with_tolerances(cfg.rel_tol, cfg.abs_tol)
        .with_t_end(span);
    let mut stepper = Stepper::new(flow, 0.0, state.coeffs(), icfg)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < stepper.t() {
            return Err(Error::InvalidParameter("evolution times must be increasing and ≥ 0".into()));
        }
        stepper.advance_to(t)?;
        let s = FockState::from_raw(stepper.state().to_vec());
        s.check_tail()?;
        out.push(s);
    }
    Ok(out)
}

/// `e^{−iĤt}|ψ⟩` at each time, doubling the cutoff while the tail guard trips.
pub fn evolve_sampled(
    state: &FockState,
    pot: &QuadraticPotential,
    times: &[f64],
    cfg: &EvolveConfig,
) -> Result<Vec<FockState>> {
    let mut current = state.clone();
    loop {
        match evolve_fixed(&current, pot, times, cfg) {
            Err(Error::TailMass { mass, cutoff }) => {
                if 2 * cutoff > cfg.max_cutoff {
                    return Err(Error::TailMass { mass, cutoff });
                }
                current = current.with_cutoff(2 * cutoff)?;
            }
            other => return other,
        }
    }
}

/// `e^{−iĤt}|ψ⟩`.
pub fn evolve(state: &FockState, pot: &QuadraticPotential, t: f64) -> Result<FockState> {
    let mut v = evolve_sampled(state, pot, &[t], &EvolveConfig::default())?;
    Ok(v.pop().expect("one sample"))
}
