//! Pair scattering off the inverted oscillator `H = ½(p² − x²)` in the
//! relative coordinate `z = x + ip`.
//!
//! The flow is `ż = −i z̄ / f(|z|²)`, i.e. `ẋ = −p/f`, `ṗ = −x/f`, so the
//! momentum that produces a given initial velocity is `p = −f ẋ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, Monitor, Trajectory};
use crate::statcore::{symplectic_factor, symplectic_factor_slope, Limits, Statistics};

/// A sign flip only counts once the value is beyond this magnitude.
pub const JITTER: f64 = 1e-9;

const SEED_DAMPING: f64 = 0.5;
const SEED_ITERATIONS: usize = 50;
const SEED_TOL: f64 = 1e-12;

fn factor_checked(s: Statistics, z: Complex64, f_min: f64) -> Result<f64> {
    let f = symplectic_factor(s, z.norm_sqr())?;
    if !(f >= f_min) {
        return Err(Error::Singular {
            min_eigenvalue: f,
            threshold: f_min,
        });
    }
    Ok(f)
}

/// `ż = −i z̄ / f(|z|²)`.
pub fn iho_flow(s: Statistics, z: Complex64) -> Result<Complex64> {
    let f = factor_checked(s, z, Limits::default().f_min)?;
    Ok(Complex64::new(0.0, -1.0) * z.conj() / f)
}

/// Momentum `p` solving `p = −f(x0² + p²) ẋ0`.
///
/// Damped fixed-point iteration, followed by Newton steps on the same
/// equation to reach the tolerance when the damped map contracts slowly.
pub fn seed_momentum(s: Statistics, x0: f64, xdot0: f64) -> Result<f64> {
    if !(x0.is_finite() && xdot0.is_finite()) {
        return Err(Error::NonFinite("initial position or velocity"));
    }
    let residual = |p: f64| -> Result<f64> { Ok(p + symplectic_factor(s, x0 * x0 + p * p)? * xdot0) };
    let mut p = -xdot0;
    for _ in 0..SEED_ITERATIONS {
        let target = -symplectic_factor(s, x0 * x0 + p * p)? * xdot0;
        let next = SEED_DAMPING * p + (1.0 - SEED_DAMPING) * target;
        let done = (next - p).abs() <= SEED_TOL * p.abs().max(1.0);
        p = next;
        if done {
            break;
        }
    }
    for _ in 0..20 {
        let g = residual(p)?;
        if g.abs() <= 1e-15 * p.abs().max(1.0) {
            break;
        }
        let dg = 1.0 + symplectic_factor_slope(s, x0 * x0 + p * p)? * 2.0 * p * xdot0;
        if dg == 0.0 || !dg.is_finite() {
            break;
        }
        p -= g / dg;
    }
    let g = residual(p)?;
    if !(g.abs() <= SEED_TOL * p.abs().max(1.0)) {
        return Err(Error::NoConvergence {
            what: "initial momentum",
            iterations: SEED_ITERATIONS,
        });
    }
    Ok(p)
}

/// `E = ½(p² − x²)` at the state `z = x + ip`.
pub fn iho_state_energy(z: Complex64) -> f64 {
    0.5 * (z.im * z.im - z.re * z.re)
}

/// `E = ½(f² ẋ² − x²)` with `f` evaluated self-consistently.
pub fn iho_energy(s: Statistics, x: f64, xdot: f64) -> Result<f64> {
    let p = seed_momentum(s, x, xdot)?;
    Ok(0.5 * (p * p - x * x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    /// Position keeps its sign; the velocity flips at the turning point.
    Reflect,
    /// Velocity keeps its sign; the particles pass through each other.
    PassThrough,
}

impl OutcomeKind {
    pub fn name(self) -> &'static str {
        match self {
            OutcomeKind::Reflect => "reflect",
            OutcomeKind::PassThrough => "pass_through",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifiedOutcome {
    pub kind: OutcomeKind,
    pub closest_approach: f64,
    pub turning_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioIHO {
    pub statistics: Statistics,
    pub x0: f64,
    pub xdot0: f64,
}

#[derive(Debug, Clone)]
pub struct IhoRun {
    pub scenario: ScenarioIHO,
    pub initial: Complex64,
    pub energy: f64,
    pub trajectory: Trajectory,
    pub outcome: ClassifiedOutcome,
}

impl ScenarioIHO {
    pub fn new(statistics: Statistics, x0: f64, xdot0: f64) -> Self {
        Self {
            statistics,
            x0,
            xdot0,
        }
    }

    /// The three initial conditions of the scattering study.
    pub fn paper_grid(statistics: Statistics) -> [ScenarioIHO; 3] {
        [-0.3, -0.8, -1.3].map(|v| ScenarioIHO::new(statistics, 0.7, v))
    }

    pub fn initial_state(&self) -> Result<Complex64> {
        let p = seed_momentum(self.statistics, self.x0, self.xdot0)?;
        Ok(Complex64::new(self.x0, p))
    }

    pub fn energy(&self) -> Result<f64> {
        iho_energy(self.statistics, self.x0, self.xdot0)
    }

    /// Integrates over `[0, cfg.t_end]` with an energy monitor.
    pub fn run(&self, cfg: &IntegratorConfig) -> Result<IhoRun> {
        let z0 = self.initial_state()?;
        let s = self.statistics;
        let flow = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
            dy[0] = iho_flow(s, y[0])?;
            Ok(())
        };
        let energy = Monitor::new("energy", |_t, y: &[Complex64]| iho_state_energy(y[0]));
        let trajectory = integrate(flow, &[z0], cfg, &[energy], &[])?;
        let outcome = classify(&trajectory)?;
        Ok(IhoRun {
            scenario: *self,
            initial: z0,
            energy: iho_state_energy(z0),
            trajectory,
            outcome,
        })
    }
}

fn flips(values: impl Iterator<Item = f64>) -> bool {
    let mut reference = 0.0;
    for v in values {
        if v.abs() <= JITTER {
            continue;
        }
        if reference == 0.0 {
            reference = v.signum();
        } else if v.signum() != reference {
            return true;
        }
    }
    false
}

/// Classifies a relative-coordinate trajectory (`x = Re z`, `ẋ = Re ż`).
pub fn classify(traj: &Trajectory) -> Result<ClassifiedOutcome> {
    let x_flips = flips(traj.states.iter().map(|y| y[0].re));
    let v_flips = flips(traj.derivatives.iter().map(|d| d[0].re));
    let kind = match (x_flips, v_flips) {
        (false, true) => OutcomeKind::Reflect,
        (true, false) => OutcomeKind::PassThrough,
        (true, true) => {
            return Err(Error::Unclassified(
                "both position and velocity change sign".into(),
            ))
        }
        (false, false) => {
            return Err(Error::Unclassified(
                "neither position nor velocity changes sign".into(),
            ))
        }
    };
    let turning_time = match kind {
        OutcomeKind::Reflect => turning_time(traj),
        OutcomeKind::PassThrough => None,
    };
    let mut closest = traj
        .states
        .iter()
        .map(|y| y[0].re.abs())
        .fold(f64::INFINITY, f64::min);
    match (kind, turning_time) {
        (OutcomeKind::PassThrough, _) => closest = 0.0,
        (OutcomeKind::Reflect, Some(t)) => {
            if let Some(y) = traj.sample(t) {
                closest = closest.min(y[0].re.abs());
            }
        }
        _ => {}
    }
    Ok(ClassifiedOutcome {
        kind,
        closest_approach: closest,
        turning_time,
    })
}

/// First zero of `ẋ`, by bisection on the dense derivative.
fn turning_time(traj: &Trajectory) -> Option<f64> {
    let v0 = traj.derivatives[0][0].re;
    let k = traj
        .derivatives
        .iter()
        .position(|d| d[0].re.abs() > JITTER && d[0].re.signum() != v0.signum())?;
    let (mut lo, mut hi) = (traj.times[k.saturating_sub(1)], traj.times[k]);
    let speed = |t: f64| traj.sample_derivative(t).map(|d| d[0].re).unwrap_or(0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if speed(mid).signum() == v0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Least-squares slope of `ln|x(t)|` over `[t_a, t_b]` on a grid of step `dt`.
pub fn log_slope(traj: &Trajectory, t_a: f64, t_b: f64, dt: f64) -> Option<f64> {
    let n = ((t_b - t_a) / dt).round() as usize;
    let pts: Vec<(f64, f64)> = (0..=n)
        .filter_map(|k| {
            let t = t_a + k as f64 * dt;
            let x = traj.sample(t.min(t_b))?[0].re.abs();
            (x > 0.0).then(|| (t, x.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (st, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mt, my) = (st / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| {
        (a.0 + (p.0 - mt) * (p.1 - my), a.1 + (p.0 - mt).powi(2))
    });
    Some(num / den)
}
