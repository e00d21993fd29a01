//! Cartesian parameter sweeps.

use rayon::prelude::*;

use crate::config::{AxisValue, Config};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::scenario::{self, summary_keys};

/// Cells in row-major order, the last axis varying fastest. An absent grid or
/// any empty axis yields no cells.
pub fn grid(cfg: &Config) -> Result<Vec<Vec<(String, AxisValue)>>, CliError> {
    let axes = match &cfg.sweep {
        Some(s) if !s.axis.is_empty() => &s.axis,
        _ => return Ok(Vec::new()),
    };
    let mut cells: Vec<Vec<(String, AxisValue)>> = vec![Vec::new()];
    for axis in axes {
        let points = axis.points()?;
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                points.iter().map(move |p| {
                    let mut c = prefix.clone();
                    c.push((axis.parameter.clone(), p.clone()));
                    c
                })
            })
            .collect();
    }
    Ok(cells)
}

fn run_cell(base: &Config, cell: &[(String, AxisValue)]) -> Result<Vec<Cell>, CliError> {
    let mut cfg = base.clone();
    for (name, value) in cell {
        cfg = cfg.with_parameter(name, value)?;
    }
    cfg.sweep = None;
    cfg.validate()?;
    let out = scenario::run(&cfg)?;
    Ok(out.summary.into_iter().map(|p| p.1).collect())
}

/// One summary row per cell; failures land in the `error` column.
pub fn sweep(cfg: &Config, jobs: usize) -> Result<Table, CliError> {
    let cells = grid(cfg)?;
    let keys = summary_keys(cfg.scenario);
    let mut columns = vec!["cell".to_string()];
    if let Some(s) = &cfg.sweep {
        columns.extend(s.axis.iter().map(|a| a.parameter.clone()));
    }
    columns.extend(keys.iter().map(|k| k.to_string()));
    columns.push("error".into());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<Cell>, CliError>> =
        pool.install(|| cells.par_iter().map(|c| run_cell(cfg, c)).collect());

    let mut table = Table {
        columns,
        rows: Vec::with_capacity(cells.len()),
    };
    for (i, (cell, result)) in cells.iter().zip(results).enumerate() {
        let mut row = vec![Cell::Int(i as i64)];
        row.extend(cell.iter().map(|(_, v)| match v {
            AxisValue::Number(x) => Cell::Num(*x),
            AxisValue::Label(l) => Cell::Text(l.clone()),
        }));
        match result {
            Ok(values) => {
                row.extend(values);
                row.push(Cell::Empty);
            }
            Err(e) => {
                log::warn!("sweep cell {i} failed: {e}");
                row.extend(keys.iter().map(|_| Cell::Empty));
                row.push(Cell::Text(format!("{}: {e}", e.category())));
            }
        }
        table.push(row);
    }
    Ok(table)
}
