use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{Config, ScenarioKind};
use crate::error::CliError;
use crate::output::svg_plot;
use crate::scenario::{self, ScenarioOutput};
use crate::sweep;

#[derive(Debug, Parser)]
#[command(name = "statdyn", version, about = "Classical dynamics with exchange-statistics symplectic forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenario named in the config.
    Run(RunArgs),
    /// Run the config's [sweep] grid and write a summary table.
    Sweep(RunArgs),
    /// Lyapunov estimate, whatever scenario the config names.
    Lyapunov(RunArgs),
    /// Quantum versus classical relative occupation.
    Qcompare(RunArgs),
    /// Parse and check a config without running it.
    ValidateConfig(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Reserved; every algorithm is deterministic. Recorded in the metadata.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
}

fn load(path: &Path, force: Option<ScenarioKind>) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = Config::parse(&text)?;
    if let Some(kind) = force {
        cfg.scenario = kind;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn metadata(
    command: &str,
    cfg: &Config,
    seed: Option<u64>,
    started: Instant,
    extra: serde_json::Value,
) -> serde_json::Value {
    let ic = cfg.integrator_config();
    let finite = |x: f64| if x.is_finite() { json!(x) } else { json!(null) };
    let mut m = json!({
        "command": command,
        "version": statdyn::VERSION,
        "cli_version": env!("CARGO_PKG_VERSION"),
        "scenario": cfg.scenario.name(),
        "statistics": cfg.statistics,
        "config_hash": cfg.hash(),
        "config": cfg,
        "integrator": {
            "method": "dormand-prince 5(4)",
            "rel_tol": ic.rel_tol,
            "abs_tol": ic.abs_tol,
            "t_end": ic.t_end,
            "max_step": finite(ic.max_step),
            "initial_step": ic.initial_step,
            "max_steps": ic.max_steps,
            "event_tol": ic.event_tol,
            "dt": cfg.integrator.dt,
        },
        "seed": seed,
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (m.as_object_mut(), extra) {
        obj.extend(more);
    }
    m
}

fn write_run(args: &RunArgs, command: &str, cfg: &Config, out: &ScenarioOutput, started: Instant) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let csv = args.out.join(&cfg.output.csv);
    out.table.write_csv(&csv, &cfg.hash())?;
    if let Some(plot) = &cfg.output.plot {
        let cols = if cfg.output.plot_columns.is_empty() {
            out.table.columns.iter().skip(1).take(1).cloned().collect()
        } else {
            cfg.output.plot_columns.clone()
        };
        write(&args.out.join(plot), &svg_plot(&out.table, &cols)?)?;
    }
    let meta = metadata(
        command,
        cfg,
        args.seed,
        started,
        json!({
            "csv": cfg.output.csv,
            "columns": out.table.columns,
            "rows": out.table.rows.len(),
            "summary": out.summary_json(),
        }),
    );
    write(
        &args.out.join(&cfg.output.metadata),
        &(serde_json::to_string_pretty(&meta).expect("json") + "\n"),
    )
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    match &cli.command {
        Command::Run(a) | Command::Lyapunov(a) | Command::Qcompare(a) => {
            let (name, force) = match &cli.command {
                Command::Lyapunov(_) => ("lyapunov", Some(ScenarioKind::Lyapunov)),
                Command::Qcompare(_) => ("qcompare", Some(ScenarioKind::QuantumCompare)),
                _ => ("run", None),
            };
            let cfg = load(&a.config, force)?;
            let out = scenario::run(&cfg)?;
            write_run(a, name, &cfg, &out, started)
        }
        Command::Sweep(a) => {
            let cfg = load(&a.config, None)?;
            let summary_name = cfg
                .sweep
                .as_ref()
                .map_or_else(|| "summary.csv".to_string(), |s| s.summary.clone());
            let table = sweep::sweep(&cfg, a.jobs as usize)?;
            ensure_dir(&a.out)?;
            table.write_csv(&a.out.join(&summary_name), &cfg.hash())?;
            let failed = table.rows.iter().filter(|r| r.last() != Some(&crate::output::Cell::Empty)).count();
            let meta = metadata(
                "sweep",
                &cfg,
                a.seed,
                started,
                json!({
                    "csv": summary_name,
                    "columns": table.columns,
                    "rows": table.rows.len(),
                    "failed_cells": failed,
                    "jobs": a.jobs,
                }),
            );
            write(
                &a.out.join(&cfg.output.metadata),
                &(serde_json::to_string_pretty(&meta).expect("json") + "\n"),
            )
        }
        Command::ValidateConfig(a) => {
            let cfg = load(&a.config, None)?;
            let report = json!({
                "valid": true,
                "scenario": cfg.scenario.name(),
                "config_hash": cfg.hash(),
                "sweep_cells": sweep::grid(&cfg)?.len(),
            });
            println!("{report}");
            Ok(())
        }
    }
}
