//! Adaptive Dormand–Prince 5(4) integration of complex first-order flows.
//!
//! States are slices of [`Complex64`]; real systems embed with zero imaginary
//! parts. Every accepted step stores the state and its derivative so the
//! [`Trajectory`] can be evaluated anywhere by cubic Hermite interpolation.
//! Monitors are sampled at every accepted step and sign-change events are
//! located by bisection on that interpolant.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A right-hand side `dy = F(t, y)`.
pub trait Flow {
    fn eval(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) -> Result<()>;
}

impl<F> Flow for F
where
    F: Fn(f64, &[Complex64], &mut [Complex64]) -> Result<()>,
{
    fn eval(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) -> Result<()> {
        self(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub max_step: f64,
    /// Zero selects the starting step automatically.
    pub initial_step: f64,
    pub max_steps: usize,
    /// Bisection tolerance for event times.
    pub event_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            t_end: 10.0,
            max_step: f64::INFINITY,
            initial_step: 0.0,
            max_steps: 10_000_000,
            event_tol: 1e-10,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !(positive(self.rel_tol) && positive(self.abs_tol)) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if !(positive(self.t_end) && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter("t_end must be positive and finite".into()));
        }
        if !positive(self.max_step) {
            return Err(Error::InvalidParameter("max_step must be positive".into()));
        }
        if !(self.initial_step >= 0.0) {
            return Err(Error::InvalidParameter("initial_step must be non-negative".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
        }
        if !positive(self.event_tol) {
            return Err(Error::InvalidParameter("event_tol must be positive".into()));
        }
        Ok(())
    }
}

/// A named scalar function recorded at every accepted step.
pub struct Monitor<'a> {
    pub name: String,
    f: Box<dyn Fn(f64, &[Complex64]) -> f64 + 'a>,
}

impl<'a> Monitor<'a> {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, &[Complex64]) -> f64 + 'a) -> Self {
        Self {
            name: name.into(),
            f: Box::new(f),
        }
    }

    pub fn eval(&self, t: f64, y: &[Complex64]) -> f64 {
        (self.f)(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Either,
}

/// A sign-change detector `g(t, y)`.
pub struct Event<'a> {
    pub name: String,
    pub direction: Direction,
    /// Stop the integration at the first crossing.
    pub terminal: bool,
    g: Box<dyn Fn(f64, &[Complex64]) -> f64 + 'a>,
}

impl<'a> Event<'a> {
    pub fn new(
        name: impl Into<String>,
        direction: Direction,
        g: impl Fn(f64, &[Complex64]) -> f64 + 'a,
    ) -> Self {
        Self {
            name: name.into(),
            direction,
            terminal: false,
            g: Box::new(g),
        }
    }

    pub fn terminal(mut self) -> Self {
        self.terminal = true;
        self
    }

    fn crossed(&self, before: f64, after: f64) -> bool {
        let rising = before < 0.0 && after >= 0.0;
        let falling = before > 0.0 && after <= 0.0;
        match self.direction {
            Direction::Rising => rising,
            Direction::Falling => falling,
            Direction::Either => rising || falling,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventHit {
    /// Index into the event list passed to [`integrate`].
    pub event: usize,
    pub t: f64,
    pub state: Vec<Complex64>,
}

/// Accepted steps of an integration with their derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub derivatives: Vec<Vec<Complex64>>,
    pub monitor_names: Vec<String>,
    /// `conserved_log[k][m]`: monitor `m` at sample `k`.
    pub conserved_log: Vec<Vec<f64>>,
    pub events: Vec<EventHit>,
    /// Index of the terminal event that ended the run, if any.
    pub terminated_by: Option<usize>,
}

/// Cubic Hermite basis on one step.
fn hermite(theta: f64, h: f64) -> [f64; 4] {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    [
        2.0 * t3 - 3.0 * t2 + 1.0,
        (t3 - 2.0 * t2 + theta) * h,
        -2.0 * t3 + 3.0 * t2,
        (t3 - t2) * h,
    ]
}

fn hermite_slope(theta: f64, h: f64) -> [f64; 4] {
    let t2 = theta * theta;
    [
        (6.0 * t2 - 6.0 * theta) / h,
        3.0 * t2 - 4.0 * theta + 1.0,
        (-6.0 * t2 + 6.0 * theta) / h,
        3.0 * t2 - 2.0 * theta,
    ]
}

struct Node<'a> {
    t: f64,
    y: &'a [Complex64],
    dy: &'a [Complex64],
}

fn interpolate(a: &Node, b: &Node, t: f64) -> Vec<Complex64> {
    let h = b.t - a.t;
    if h == 0.0 {
        return a.y.to_vec();
    }
    let w = hermite((t - a.t) / h, h);
    (0..a.y.len())
        .map(|i| a.y[i] * w[0] + a.dy[i] * w[1] + b.y[i] * w[2] + b.dy[i] * w[3])
        .collect()
}

fn interpolate_slope(a: &Node, b: &Node, t: f64) -> Vec<Complex64> {
    let h = b.t - a.t;
    if h == 0.0 {
        return a.dy.to_vec();
    }
    let w = hermite_slope((t - a.t) / h, h);
    (0..a.y.len())
        .map(|i| a.y[i] * w[0] + a.dy[i] * w[1] + b.y[i] * w[2] + b.dy[i] * w[3])
        .collect()
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_final(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one sample")
    }

    pub fn final_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory has at least one sample")
    }

    fn node(&self, k: usize) -> Node<'_> {
        Node {
            t: self.times[k],
            y: &self.states[k],
            dy: &self.derivatives[k],
        }
    }

    /// Index `k` of the step `[t_k, t_{k+1}]` containing `t`.
    fn locate(&self, t: f64) -> Option<usize> {
        if self.times.len() < 2 || t < self.t_start() || t > self.t_final() {
            return None;
        }
        let k = self.times.partition_point(|&s| s <= t);
        Some(k.saturating_sub(1).min(self.times.len() - 2))
    }

    /// Dense-output state at `t`.
    pub fn sample(&self, t: f64) -> Option<Vec<Complex64>> {
        if self.times.len() == 1 && t == self.times[0] {
            return Some(self.states[0].clone());
        }
        let k = self.locate(t)?;
        Some(interpolate(&self.node(k), &self.node(k + 1), t))
    }

    /// Dense-output derivative at `t`.
    pub fn sample_derivative(&self, t: f64) -> Option<Vec<Complex64>> {
        if self.times.len() == 1 && t == self.times[0] {
            return Some(self.derivatives[0].clone());
        }
        let k = self.locate(t)?;
        Some(interpolate_slope(&self.node(k), &self.node(k + 1), t))
    }

    /// Uniform grid `t_start, t_start + dt, …` up to the final time.
    pub fn grid(&self, dt: f64) -> Vec<f64> {
        let t0 = self.t_start();
        let span = self.t_final() - t0;
        let n = (span / dt + 1e-9).floor() as usize;
        (0..=n).map(|k| t0 + k as f64 * dt).collect()
    }

    /// States on [`Trajectory::grid`].
    pub fn resample(&self, dt: f64) -> Vec<(f64, Vec<Complex64>)> {
        self.grid(dt)
            .into_iter()
            .filter_map(|t| self.sample(t).map(|y| (t, y)))
            .collect()
    }

    /// Cubic coefficients `c0 + c1 s + c2 s² + c3 s³` in `s = t − t_k` of one
    /// real scalar `pick(y)` over step `k`.
    pub fn segment_cubic(&self, k: usize, pick: impl Fn(&[Complex64]) -> f64) -> [f64; 4] {
        let h = self.times[k + 1] - self.times[k];
        let y0 = pick(&self.states[k]);
        let y1 = pick(&self.states[k + 1]);
        let d0 = pick(&self.derivatives[k]);
        let d1 = pick(&self.derivatives[k + 1]);
        let c2 = (3.0 * (y1 - y0) / h - 2.0 * d0 - d1) / h;
        let c3 = (d0 + d1 - 2.0 * (y1 - y0) / h) / (h * h);
        [y0, d0, c2, c3]
    }

    /// Applies a pointwise linear map to states and derivatives.
    pub fn map_linear(&self, map: impl Fn(&[Complex64]) -> Vec<Complex64>) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(|y| map(y)).collect(),
            derivatives: self.derivatives.iter().map(|y| map(y)).collect(),
            monitor_names: self.monitor_names.clone(),
            conserved_log: self.conserved_log.clone(),
            events: self
                .events
                .iter()
                .map(|e| EventHit {
                    event: e.event,
                    t: e.t,
                    state: map(&e.state),
                })
                .collect(),
            terminated_by: self.terminated_by,
        }
    }

    /// Largest `|m(t) − m(0)| / |m(0)|` of monitor `m` over the run.
    pub fn relative_drift(&self, m: usize) -> f64 {
        let first = self.conserved_log[0][m];
        let scale = first.abs().max(f64::MIN_POSITIVE);
        self.conserved_log
            .iter()
            .map(|row| (row[m] - first).abs() / scale)
            .fold(0.0, f64::max)
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn all_finite(y: &[Complex64]) -> bool {
    y.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Step-by-step driver; owns the current state and its derivative.
pub struct Stepper<F: Flow> {
    flow: F,
    cfg: IntegratorConfig,
    t: f64,
    y: Vec<Complex64>,
    dy: Vec<Complex64>,
    h: f64,
    attempts: usize,
    k: [Vec<Complex64>; 7],
    scratch: Vec<Complex64>,
}

/// State before and after one accepted step.
pub struct StepRecord {
    pub t_prev: f64,
    pub y_prev: Vec<Complex64>,
    pub dy_prev: Vec<Complex64>,
}

impl<F: Flow> Stepper<F> {
    pub fn new(flow: F, t0: f64, y0: &[Complex64], cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if !all_finite(y0) {
            return Err(Error::NonFiniteState { t: t0 });
        }
        let n = y0.len();
        let mut dy = vec![Complex64::new(0.0, 0.0); n];
        flow.eval(t0, y0, &mut dy)?;
        if !all_finite(&dy) {
            return Err(Error::NonFiniteState { t: t0 });
        }
        let mut s = Self {
            flow,
            cfg,
            t: t0,
            y: y0.to_vec(),
            dy,
            h: 0.0,
            attempts: 0,
            k: std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]),
            scratch: vec![Complex64::new(0.0, 0.0); n],
        };
        s.h = if cfg.initial_step > 0.0 {
            cfg.initial_step
        } else {
            s.starting_step()?
        };
        Ok(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[Complex64] {
        &self.y
    }

    pub fn derivative(&self) -> &[Complex64] {
        &self.dy
    }

    pub fn flow(&self) -> &F {
        &self.flow
    }

    /// Replaces the state at the current time (e.g. after a renormalization).
    pub fn reset(&mut self, y: &[Complex64]) -> Result<()> {
        if !all_finite(y) {
            return Err(Error::NonFiniteState { t: self.t });
        }
        self.y.copy_from_slice(y);
        self.flow.eval(self.t, &self.y, &mut self.dy)?;
        Ok(())
    }

    fn scale(&self, a: Complex64, b: Complex64) -> f64 {
        self.cfg.abs_tol + self.cfg.rel_tol * a.norm().max(b.norm())
    }

    fn rms(&self, v: &[Complex64], against: &[Complex64]) -> f64 {
        let n = v.len().max(1) as f64;
        let s: f64 = v
            .iter()
            .zip(against)
            .map(|(e, y)| (e.norm() / self.scale(*y, *y)).powi(2))
            .sum();
        (s / n).sqrt()
    }

    /// Starting step after Hairer, Nørsett & Wanner (II.4).
    fn starting_step(&mut self) -> Result<f64> {
        let d0 = self.rms(&self.y, &self.y);
        let d1 = self.rms(&self.dy, &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.cfg.max_step).min(self.cfg.t_end.abs().max(1e-12));
        for i in 0..self.y.len() {
            self.scratch[i] = self.y[i] + self.dy[i] * h0;
        }
        let mut f1 = vec![Complex64::new(0.0, 0.0); self.y.len()];
        self.flow.eval(self.t + h0, &self.scratch, &mut f1)?;
        let diff: Vec<Complex64> = f1.iter().zip(&self.dy).map(|(a, b)| a - b).collect();
        let d2 = self.rms(&diff, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1).min(self.cfg.max_step))
    }

    /// One Dormand–Prince trial of size `h`; returns the error norm.
    fn trial(&mut self, h: f64) -> Result<f64> {
        let n = self.y.len();
        self.k[0].copy_from_slice(&self.dy);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, a) in A[s].iter().enumerate().take(s) {
                    if *a != 0.0 {
                        acc += self.k[j][i] * *a;
                    }
                }
                self.scratch[i] = self.y[i] + acc * h;
            }
            let (head, tail) = self.k.split_at_mut(s);
            let _ = head;
            self.flow.eval(self.t + C[s] * h, &self.scratch, &mut tail[0])?;
        }
        // Stage 7 is evaluated at the fifth-order solution (FSAL), which
        // `scratch` holds after the loop.
        let mut err = 0.0;
        for i in 0..n {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, w) in E.iter().enumerate() {
                if *w != 0.0 {
                    e += self.k[j][i] * *w;
                }
            }
            let e = e * h;
            let sc = self.scale(self.y[i], self.scratch[i]);
            err += (e.norm() / sc).powi(2);
        }
        Ok((err / n.max(1) as f64).sqrt())
    }

    /// Takes one accepted step ending no later than `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<StepRecord> {
        let mut rejected = false;
        loop {
            self.attempts += 1;
            if self.attempts > self.cfg.max_steps {
                return Err(Error::MaxSteps(self.cfg.max_steps));
            }
            let remaining = t_limit - self.t;
            let mut h = self.h.min(self.cfg.max_step);
            let mut clamped = false;
            if h >= remaining {
                h = remaining;
                clamped = true;
            } else if h > 0.5 * remaining && h < remaining {
                // Avoid leaving a sliver before the limit.
                h = 0.5 * remaining;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: self.t, h });
            }
            let err = self.trial(h)?;
            let finite = err.is_finite() && all_finite(&self.scratch) && all_finite(&self.k[6]);
            if finite && err <= 1.0 {
                let factor = if err == 0.0 {
                    10.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
                };
                let factor = if rejected { factor.min(1.0) } else { factor };
                let record = StepRecord {
                    t_prev: self.t,
                    y_prev: self.y.clone(),
                    dy_prev: self.dy.clone(),
                };
                self.t = if clamped { t_limit } else { self.t + h };
                self.y.copy_from_slice(&self.scratch);
                self.dy.copy_from_slice(&self.k[6]);
                if !clamped || factor < 1.0 {
                    self.h = h * factor;
                }
                return Ok(record);
            }
            rejected = true;
            let factor = if finite {
                (0.9 * err.powf(-0.2)).clamp(0.2, 1.0)
            } else {
                0.2
            };
            self.h = h * factor;
        }
    }

    /// Steps until exactly `t_target`.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target {
            self.step(t_target)?;
        }
        Ok(())
    }
}

/// Integrates over `[0, cfg.t_end]`.
pub fn integrate<F: Flow>(
    flow: F,
    initial: &[Complex64],
    cfg: &IntegratorConfig,
    monitors: &[Monitor],
    events: &[Event],
) -> Result<Trajectory> {
    integrate_span(flow, 0.0, initial, cfg.t_end, cfg, monitors, events)
}

/// Integrates over `[t0, t1]`, recording every accepted step.
pub fn integrate_span<F: Flow>(
    flow: F,
    t0: f64,
    initial: &[Complex64],
    t1: f64,
    cfg: &IntegratorConfig,
    monitors: &[Monitor],
    events: &[Event],
) -> Result<Trajectory> {
    let mut stepper = Stepper::new(flow, t0, initial, IntegratorConfig { t_end: t1 - t0, ..*cfg })?;
    let record = |t: f64, y: &[Complex64]| -> Vec<f64> { monitors.iter().map(|m| m.eval(t, y)).collect() };
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![initial.to_vec()],
        derivatives: vec![stepper.derivative().to_vec()],
        monitor_names: monitors.iter().map(|m| m.name.clone()).collect(),
        conserved_log: vec![record(t0, initial)],
        events: Vec::new(),
        terminated_by: None,
    };
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.g)(t0, initial)).collect();

    while stepper.t() < t1 {
        let rec = stepper.step(t1)?;
        let (t_new, y_new, dy_new) = (stepper.t(), stepper.state(), stepper.derivative());
        if !all_finite(y_new) {
            return Err(Error::NonFiniteState { t: t_new });
        }
        let a = Node {
            t: rec.t_prev,
            y: &rec.y_prev,
            dy: &rec.dy_prev,
        };
        let b = Node {
            t: t_new,
            y: y_new,
            dy: dy_new,
        };

        let mut earliest_terminal: Option<(f64, usize)> = None;
        let mut hits = Vec::new();
        for (idx, ev) in events.iter().enumerate() {
            let g_new = (ev.g)(t_new, y_new);
            if ev.crossed(g_prev[idx], g_new) {
                let t_hit = bisect_event(ev, &a, &b, g_prev[idx], cfg.event_tol);
                hits.push((t_hit, idx));
                if ev.terminal && earliest_terminal.is_none_or(|(t, _)| t_hit < t) {
                    earliest_terminal = Some((t_hit, idx));
                }
            }
            g_prev[idx] = g_new;
        }
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (t_hit, idx) in hits {
            if earliest_terminal.is_some_and(|(t, _)| t_hit > t) {
                continue;
            }
            traj.events.push(EventHit {
                event: idx,
                t: t_hit,
                state: interpolate(&a, &b, t_hit),
            });
        }

        if let Some((t_stop, idx)) = earliest_terminal {
            let y_stop = interpolate(&a, &b, t_stop);
            let dy_stop = interpolate_slope(&a, &b, t_stop);
            if t_stop > rec.t_prev {
                traj.conserved_log.push(record(t_stop, &y_stop));
                traj.times.push(t_stop);
                traj.states.push(y_stop);
                traj.derivatives.push(dy_stop);
            }
            traj.terminated_by = Some(idx);
            return Ok(traj);
        }

        traj.conserved_log.push(record(t_new, y_new));
        traj.times.push(t_new);
        traj.states.push(y_new.to_vec());
        traj.derivatives.push(dy_new.to_vec());
    }
    Ok(traj)
}

fn bisect_event(ev: &Event, a: &Node, b: &Node, g_a: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a.t, b.t);
    let mut g_lo = g_a;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = (ev.g)(mid, &interpolate(a, b, mid));
        if ev.crossed(g_lo, g_mid) {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    hi
}

/// States at the given increasing times; steps land exactly on each time.
pub fn integrate_sampled<F: Flow>(
    flow: F,
    t0: f64,
    initial: &[Complex64],
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<Vec<Complex64>>> {
    let t_last = times.last().copied().unwrap_or(t0);
    let span = (t_last - t0).max(f64::MIN_POSITIVE);
    let mut stepper = Stepper::new(flow, t0, initial, IntegratorConfig { t_end: span, ..*cfg })?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < stepper.t() {
            return Err(Error::InvalidParameter("sample times must be increasing".into()));
        }
        stepper.advance_to(t)?;
        out.push(stepper.state().to_vec());
    }
    Ok(out)
}
