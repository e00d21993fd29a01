//! One scenario run: trajectory table plus scalar summary.

use statdyn::chaos::{default_ics, lyapunov_estimate, LyapunovRun};
use statdyn::dynamics::{
    closed_relative_orbit, cm_energy, enclosed_area, geometric_phase, iho_state_energy,
    relative_energy, rtheta_levelset, ScenarioIHO, ScenarioLLL,
};
use statdyn::integrator::Trajectory;
use statdyn::qoracle::{estimate_period, quantum_vs_classical_rho};
use statdyn::statcore::{Limits, NBodyState, TwoBodyState};
use statdyn::Complex64;

use crate::config::{Config, ScenarioKind};
use crate::error::CliError;
use crate::output::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub table: Table,
    pub summary: Vec<(&'static str, Cell)>,
}

impl ScenarioOutput {
    pub fn summary_json(&self) -> serde_json::Value {
        let map = self
            .summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }
}

/// Summary keys reported for each scenario, in column order.
pub fn summary_keys(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::Iho => &["energy", "kind", "closest_approach", "turning_time", "energy_drift"],
        ScenarioKind::Lll2 => &["energy", "cm_energy", "energy_drift", "cm_energy_drift", "t_final"],
        ScenarioKind::Llln => &["energy", "energy_drift", "t_final"],
        ScenarioKind::Lyapunov => &["lambda", "mode", "t_final"],
        ScenarioKind::QuantumCompare => &["period_qm", "period_cl", "max_abs_diff"],
        ScenarioKind::Phase => &["energy", "period", "aa_phase", "dynamic_phase"],
        ScenarioKind::Levelset => &["energy", "area", "rho_min", "rho_max"],
    }
}

pub fn run(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    log::info!("running {} ({})", cfg.scenario.name(), cfg.statistics);
    let out = match cfg.scenario {
        ScenarioKind::Iho => run_iho(cfg),
        ScenarioKind::Lll2 => run_lll2(cfg),
        ScenarioKind::Llln => run_llln(cfg),
        ScenarioKind::Lyapunov => run_lyapunov(cfg),
        ScenarioKind::QuantumCompare => run_qcompare(cfg),
        ScenarioKind::Phase => run_phase(cfg),
        ScenarioKind::Levelset => run_levelset(cfg),
    }?;
    debug_assert_eq!(
        out.summary.iter().map(|p| p.0).collect::<Vec<_>>(),
        summary_keys(cfg.scenario)
    );
    Ok(out)
}

fn c(z: Complex64) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

fn derivative_at(traj: &Trajectory, t: f64) -> Vec<Complex64> {
    traj.sample_derivative(t).expect("grid lies inside the span")
}

fn run_iho(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let s = cfg.statistics()?;
    let (x0, xdot0) = (cfg.initial.x0.unwrap(), cfg.initial.xdot0.unwrap());
    let run = ScenarioIHO::new(s, x0, xdot0).run(&cfg.integrator_config())?;
    let traj = &run.trajectory;
    let mut table = Table::new(&["t", "x", "p", "xdot", "E"]);
    for (t, y) in traj.resample(cfg.integrator.dt) {
        let z = y[0];
        let xdot = derivative_at(traj, t)[0].re;
        table.push(vec![t.into(), z.re.into(), z.im.into(), xdot.into(), iho_state_energy(z).into()]);
    }
    let o = run.outcome;
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("energy", run.energy.into()),
            ("kind", o.kind.name().into()),
            ("closest_approach", o.closest_approach.into()),
            ("turning_time", o.turning_time.into()),
            ("energy_drift", traj.relative_drift(0).into()),
        ],
    })
}

fn nbody(cfg: &Config) -> Result<NBodyState, CliError> {
    Ok(NBodyState::new(cfg.particles().expect("validated"))?)
}

fn run_lll2(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let traj = ScenarioLLL::new(s, pot, nbody(cfg)?).run_two_body(&cfg.integrator_config())?;
    let mut table = Table::new(&[
        "t", "Z_re", "Z_im", "z_re", "z_im", "z1_re", "z1_im", "z2_re", "z2_im", "E", "E_cm",
    ]);
    for (t, y) in traj.resample(cfg.integrator.dt) {
        let pair = TwoBodyState::new(y[0], y[1]);
        let (z1, z2) = pair.individual();
        let e_cm = cm_energy(&pot, pair.cm);
        let e = e_cm + relative_energy(s, &pot, pair.rel)?;
        let mut row = vec![Cell::Num(t)];
        for z in [pair.cm, pair.rel, z1, z2] {
            row.extend(c(z));
        }
        row.extend([e.into(), e_cm.into()]);
        table.push(row);
    }
    let first = &traj.conserved_log[0];
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("energy", first[0].into()),
            ("cm_energy", first[1].into()),
            ("energy_drift", traj.relative_drift(0).into()),
            ("cm_energy_drift", traj.relative_drift(1).into()),
            ("t_final", traj.t_final().into()),
        ],
    })
}

fn run_llln(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let initial = nbody(cfg)?;
    let n = initial.len();
    let traj = ScenarioLLL::new(s, pot, initial).run(&cfg.integrator_config())?;
    let mut names = vec!["t".to_string()];
    for i in 1..=n {
        names.push(format!("z{i}_re"));
        names.push(format!("z{i}_im"));
    }
    names.push("E".into());
    let mut table = Table {
        columns: names,
        rows: Vec::new(),
    };
    let limits = Limits::default();
    for (t, y) in traj.resample(cfg.integrator.dt) {
        let e = limits.potential_expectation(&NBodyState::new(y.clone())?, s, &pot, false)?;
        let mut row = vec![Cell::Num(t)];
        for z in y {
            row.extend(c(z));
        }
        row.push(e.into());
        table.push(row);
    }
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("energy", traj.conserved_log[0][0].into()),
            ("energy_drift", traj.relative_drift(0).into()),
            ("t_final", traj.t_final().into()),
        ],
    })
}

fn run_lyapunov(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let l = &cfg.lyapunov;
    let ics = match cfg.particles() {
        Some(_) => nbody(cfg)?,
        None => default_ics(l.radius),
    };
    let mut run = LyapunovRun::new(ics)
        .with_mode(cfg.lyapunov_mode()?)
        .with_t_end(cfg.t_end())
        .with_perturbation(l.perturbation);
    run.renorm_interval = l.renorm_interval;
    run.perturbed_particle = l.particle;
    run.integrator = cfg.integrator_config();
    let est = lyapunov_estimate(s, &pot, &run)?;
    let mut table = Table::new(&["t", "lambda"]);
    for &(t, lam) in &est.series {
        table.push(vec![t.into(), lam.into()]);
    }
    let t_final = est.series.last().map(|p| p.0);
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("lambda", est.lambda.into()),
            ("mode", l.mode.as_str().into()),
            ("t_final", t_final.into()),
        ],
    })
}

fn run_qcompare(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let cmp = quantum_vs_classical_rho(s, &pot, cfg.z0()?, cfg.t_end(), cfg.integrator.dt, cfg.quantum.cutoff)?;
    let mut table = Table::new(&["t", "rho_qm", "rho_cl"]);
    let mut max_diff = 0.0f64;
    for ((&t, &q), &cl) in cmp.times.iter().zip(&cmp.rho_qm).zip(&cmp.rho_cl) {
        max_diff = max_diff.max((q - cl).abs());
        table.push(vec![t.into(), q.into(), cl.into()]);
    }
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("period_qm", estimate_period(&cmp.times, &cmp.rho_qm).into()),
            ("period_cl", estimate_period(&cmp.times, &cmp.rho_cl).into()),
            ("max_abs_diff", max_diff.into()),
        ],
    })
}

fn run_phase(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let z0 = cfg.z0()?;
    let traj = closed_relative_orbit(s, &pot, z0, &cfg.integrator_config())?;
    let phase = geometric_phase(&traj, s, &pot)?;
    let mut table = Table::new(&["t", "x", "y"]);
    for (t, y) in traj.resample(cfg.integrator.dt) {
        table.push(vec![t.into(), y[0].re.into(), y[0].im.into()]);
    }
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("energy", relative_energy(s, &pot, z0)?.into()),
            ("period", phase.period.into()),
            ("aa_phase", phase.aa_phase.into()),
            ("dynamic_phase", phase.dynamic_phase.into()),
        ],
    })
}

fn run_levelset(cfg: &Config) -> Result<ScenarioOutput, CliError> {
    let (s, pot) = (cfg.statistics()?, cfg.potential()?);
    let energy = match cfg.levelset.energy {
        Some(e) => e,
        None => relative_energy(s, &pot, cfg.z0()?)?,
    };
    let curve = rtheta_levelset(s, &pot, energy, cfg.levelset.angles)?;
    let mut table = Table::new(&["phi", "rho", "x", "y"]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &curve {
        let (x, y) = p.cartesian();
        lo = lo.min(p.rho);
        hi = hi.max(p.rho);
        table.push(vec![p.phi.into(), p.rho.into(), x.into(), y.into()]);
    }
    Ok(ScenarioOutput {
        table,
        summary: vec![
            ("energy", energy.into()),
            ("area", enclosed_area(&curve).into()),
            ("rho_min", lo.into()),
            ("rho_max", hi.into()),
        ],
    })
}
