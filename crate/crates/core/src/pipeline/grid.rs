use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{ensure_dir, run_pipeline, write_file, Regime, RunConfig};
use crate::eval::ComparisonRow;
use crate::models::ModelKind;
use crate::{Error, Result};

/// Models × regimes × dimensions over one dataset.
///
/// Each cell starts from the model's defaults, then applies `overrides`
/// (config `key=value` pairs), then the cell's model, regime and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub triples: PathBuf,
    pub types: Option<PathBuf>,
    pub constraints: Option<PathBuf>,
    pub out: PathBuf,
    pub models: Vec<ModelKind>,
    pub regimes: Vec<Regime>,
    pub dims: Vec<usize>,
    pub overrides: Vec<(String, String)>,
    /// Cells run concurrently; 0 means one per available core.
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCell {
    pub model: ModelKind,
    pub regime: Regime,
    pub dim: usize,
}

impl GridCell {
    pub fn dir_name(&self) -> String {
        format!("{}-{}-d{}", self.model, self.regime, self.dim)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFailure {
    pub cell: GridCell,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridOutcome {
    /// Successful cells in grid order.
    pub rows: Vec<ComparisonRow>,
    pub failures: Vec<GridFailure>,
}

impl GridSpec {
    pub fn cells(&self) -> Vec<GridCell> {
        let mut cells = Vec::new();
        for &dim in &self.dims {
            for &model in &self.models {
                for &regime in &self.regimes {
                    cells.push(GridCell { model, regime, dim });
                }
            }
        }
        cells
    }

    pub fn cell_config(&self, cell: &GridCell) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(cell.model, cell.regime, &self.triples, self.out.join("cells").join(cell.dir_name()));
        cfg.types = self.types.clone();
        cfg.constraints = self.constraints.clone();
        for (k, v) in &self.overrides {
            if !matches!(k.as_str(), "model" | "regime" | "dim" | "out" | "triples" | "types" | "constraints") {
                cfg.set(k, v)?;
            }
        }
        cfg.hyperparams.dim = cell.dim;
        Ok(cfg)
    }
}

/// Runs every cell (prepare, train, evaluate in its own directory under
/// `out/cells/`). A failing cell is recorded and the grid continues.
/// Writes `grid.csv`, `grid.md` and, if any cell failed, `grid_failures.csv`.
pub fn cmd_grid(spec: &GridSpec) -> Result<GridOutcome> {
    let cells = spec.cells();
    if cells.is_empty() {
        return Err(Error::Config("the grid has no cells".into()));
    }
    ensure_dir(&spec.out)?;
    let workers = match spec.workers {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        w => w,
    }
    .min(cells.len());

    let results: Mutex<Vec<Option<Result<ComparisonRow, String>>>> = Mutex::new(vec![None; cells.len()]);
    let next = AtomicUsize::new(0);
    let run_cell = |cell: &GridCell| -> Result<ComparisonRow> {
        let cfg = spec.cell_config(cell)?;
        let report = run_pipeline(&cfg)?;
        Ok(ComparisonRow::from_report(&cfg.dataset_name(), &report))
    };
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                log::info!("grid cell {}", cell.dir_name());
                let outcome = run_cell(cell).map_err(|e| e.to_string());
                if let Err(msg) = &outcome {
                    log::warn!("grid cell {} failed: {msg}", cell.dir_name());
                }
                results.lock().expect("no panics while holding the lock")[i] = Some(outcome);
            });
        }
    });

    let mut outcome = GridOutcome::default();
    for (cell, result) in cells.iter().zip(results.into_inner().expect("workers joined")) {
        match result.expect("every cell visited") {
            Ok(row) => outcome.rows.push(row),
            Err(message) => outcome.failures.push(GridFailure { cell: *cell, message }),
        }
    }

    let mut csv = format!("{}\n", ComparisonRow::HEADER);
    for row in &outcome.rows {
        writeln!(csv, "{}", row.to_csv()).expect("writing to a String");
    }
    write_file(&spec.out.join("grid.csv"), csv)?;
    write_file(&spec.out.join("grid.md"), paper_table(spec, &outcome.rows))?;
    if !outcome.failures.is_empty() {
        let mut text = String::from("model,regime,d,error\n");
        for f in &outcome.failures {
            let message = f.message.replace(['\n', ','], " ");
            writeln!(text, "{},{},{},{message}", f.cell.model, f.cell.regime, f.cell.dim).expect("writing to a String");
        }
        write_file(&spec.out.join("grid_failures.csv"), text)?;
    }
    Ok(outcome)
}

/// Holdout AUPRC with one row per model and dimension and one column per
/// regime.
fn paper_table(spec: &GridSpec, rows: &[ComparisonRow]) -> String {
    let mut out = String::from("| model | d |");
    for r in &spec.regimes {
        write!(out, " {r} |").expect("writing to a String");
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---|".repeat(spec.regimes.len()));
    out.push('\n');
    for &dim in &spec.dims {
        for &model in &spec.models {
            write!(out, "| {model} | {dim} |").expect("writing to a String");
            for regime in &spec.regimes {
                let cell = rows
                    .iter()
                    .find(|r| r.model == model.as_str() && r.regime == regime.as_str() && r.d == dim)
                    .map_or_else(|| "failed".to_string(), |r| format!("{:.3}", r.auprc));
                write!(out, " {cell} |").expect("writing to a String");
            }
            out.push('\n');
        }
    }
    out
}
