//! Lyapunov exponents of N-particle guiding-center flows from pairs of
//! nearby trajectories.
//!
//! `benettin` rescales the separation back to its initial size every
//! `renorm_interval` and averages the logarithmic stretch factors. `naive`
//! evaluates `(1/t) ln(Δ(t)/Δ(0))` on the raw pair. The separation is
//! Euclidean in the 2N real coordinates.

use num_complex::Complex64;

use crate::dynamics::lll::lll_nbody_flow_with;
use crate::error::{Error, Result};
use crate::integrator::{integrate_sampled, IntegratorConfig, Stepper};
use crate::statcore::{Limits, NBodyState, QuadraticPotential, Statistics};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyapunovMode {
    Benettin,
    Naive,
}

impl std::str::FromStr for LyapunovMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "benettin" => Ok(LyapunovMode::Benettin),
            "naive" => Ok(LyapunovMode::Naive),
            other => Err(Error::InvalidParameter(format!("unknown Lyapunov mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovRun {
    pub base_ics: NBodyState,
    /// Relative change of the perturbed particle's radius.
    pub perturbation: f64,
    pub perturbed_particle: usize,
    pub renorm_interval: f64,
    pub t_end: f64,
    pub mode: LyapunovMode,
    pub integrator: IntegratorConfig,
}

impl LyapunovRun {
    pub fn new(base_ics: NBodyState) -> Self {
        Self {
            base_ics,
            perturbation: 0.012,
            perturbed_particle: 0,
            renorm_interval: 1.0,
            t_end: 2000.0,
            mode: LyapunovMode::Benettin,
            integrator: IntegratorConfig::default(),
        }
    }

    pub fn with_mode(mut self, mode: LyapunovMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_perturbation(mut self, perturbation: f64) -> Self {
        self.perturbation = perturbation;
        self
    }

    /// Partner initial condition: one particle's radius scaled by `1 + ε`.
    pub fn partner_ics(&self) -> Result<NBodyState> {
        let mut zs = self.base_ics.coords().to_vec();
        let k = self.perturbed_particle;
        if k >= zs.len() {
            return Err(Error::InvalidParameter(format!(
                "perturbed particle {k} out of range for {} particles",
                zs.len()
            )));
        }
        zs[k] *= 1.0 + self.perturbation;
        NBodyState::new(zs)
    }

    fn validate(&self) -> Result<()> {
        if !(self.perturbation > 0.0 && self.perturbation.is_finite()) {
            return Err(Error::InvalidParameter("perturbation must be positive".into()));
        }
        if !(self.renorm_interval > 0.0 && self.t_end >= self.renorm_interval) {
            return Err(Error::InvalidParameter(
                "need 0 < renorm_interval ≤ t_end".into(),
            ));
        }
        Ok(())
    }
}

/// Particles on a circle of radius `r` at 90°, 210°, 330°.
pub fn default_ics(r: f64) -> NBodyState {
    let zs = [90.0f64, 210.0, 330.0]
        .iter()
        .map(|deg| Complex64::from_polar(r, deg.to_radians()))
        .collect();
    NBodyState::new(zs).expect("finite")
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    /// `(t, λ(t))` at every renormalization (or sampling) time.
    pub series: Vec<(f64, f64)>,
    pub mode: LyapunovMode,
}

fn separation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Mean of the final quarter of the series.
fn tail_mean(series: &[(f64, f64)]) -> f64 {
    let start = series.len() - series.len().div_ceil(4);
    let tail = &series[start..];
    tail.iter().map(|p| p.1).sum::<f64>() / tail.len() as f64
}

pub fn lyapunov_estimate(
    s: Statistics,
    pot: &QuadraticPotential,
    run: &LyapunovRun,
) -> Result<LyapunovEstimate> {
    run.validate()?;
    let partner = run.partner_ics()?;
    let d0 = separation(run.base_ics.coords(), partner.coords());
    if d0 == 0.0 {
        return Err(Error::ZeroSeparation);
    }
    let pot = *pot;
    let limits = Limits::default();
    let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
        let state = NBodyState::new(y.to_vec())?;
        dy.copy_from_slice(&lll_nbody_flow_with(&limits, s, &pot, &state)?);
        Ok(())
    };
    let cfg = run.integrator.with_t_end(run.t_end);
    let n = (run.t_end / run.renorm_interval + 1e-9).floor() as usize;
    let times: Vec<f64> = (1..=n).map(|k| k as f64 * run.renorm_interval).collect();

    let series = match run.mode {
        LyapunovMode::Naive => {
            let (a, b) = rayon::join(
                || integrate_sampled(flow, 0.0, run.base_ics.coords(), &times, &cfg),
                || integrate_sampled(flow, 0.0, partner.coords(), &times, &cfg),
            );
            let (a, b) = (a?, b?);
            times
                .iter()
                .zip(a.iter().zip(&b))
                .map(|(t, (x, y))| (*t, (separation(x, y) / d0).ln() / t))
                .collect::<Vec<_>>()
        }
        LyapunovMode::Benettin => {
            let mut base = Stepper::new(flow, 0.0, run.base_ics.coords(), cfg)?;
            let mut other = Stepper::new(flow, 0.0, partner.coords(), cfg)?;
            let mut log_sum = 0.0;
            let mut out = Vec::with_capacity(times.len());
            for &t in &times {
                let (ra, rb) = rayon::join(|| base.advance_to(t), || other.advance_to(t));
                ra?;
                rb?;
                let d = separation(base.state(), other.state());
                if !(d > 0.0 && d.is_finite()) {
                    return Err(Error::ZeroSeparation);
                }
                log_sum += (d / d0).ln();
                out.push((t, log_sum / t));
                let scale = d0 / d;
                let rescaled: Vec<Complex64> = base
                    .state()
                    .iter()
                    .zip(other.state())
                    .map(|(x, y)| x + (y - x) * scale)
                    .collect();
                other.reset(&rescaled)?;
            }
            out
        }
    };
    if series.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::NonFinite("Lyapunov series"));
    }
    Ok(LyapunovEstimate {
        lambda: tail_mean(&series),
        series,
        mode: run.mode,
    })
}
