//! Configuration parsing, result files and the commands behind the `floquet`
//! binary.
//!
//! Heating CSV columns: `n` (period index), `t = nT`, `E`, `sigma_E`,
//! `norm` (`||ψ||`, not squared), `gates` (two-qubit gates applied so far).

mod config;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::{
    benchmark_period, fit_cost_scaling, precision_fidelity_error, run_echo, run_heating, BenchReport, CostScaling,
    EchoReport, MAX_REFERENCE_QUBITS,
};

pub use config::{
    parse_config, Command, OmegaList, PartialConfig, RunConfig, CONFIG_KEYS, DEFAULT_BENCH_OMEGA, DEFAULT_ECHO_PERIODS,
    DEFAULT_EXCLUDE,
};
pub use output::{
    emit_series, fit_command, manifest_path, read_manifest, read_series_csv, series_csv, series_stem, write_atomic,
    write_json, EmittedSeries, FitOutcome, Manifest, RateRow, SeriesTable, CSV_HEADER, SOFTWARE, VERSION,
};

/// What a command wrote, and whether it fully succeeded.
#[derive(Clone, Debug, Default)]
pub struct CommandOutcome {
    pub files: Vec<PathBuf>,
    /// One human-readable line per result.
    pub summary: Vec<String>,
    /// Output was written but some inputs failed (e.g. unthermalized series).
    pub partial_failure: bool,
}

#[derive(Serialize)]
struct EchoEntry {
    omega: f64,
    report: EchoReport,
    /// Single vs double fidelity error after `2 n` periods (small chains only).
    direct_error: Option<f64>,
}

#[derive(Serialize)]
struct EchoFile<'a> {
    software: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    echoes: Vec<EchoEntry>,
}

#[derive(Serialize)]
struct BenchFile<'a> {
    software: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    reports: Vec<BenchReport>,
    scaling: Option<CostScaling>,
}

/// Runs one command end to end. Experiments run one after another.
pub fn run_command(config: &RunConfig) -> Result<CommandOutcome> {
    let mut out = CommandOutcome::default();
    match config.command {
        Command::Heat => {
            for hc in config.heating_configs() {
                let start = Instant::now();
                match run_heating(&hc) {
                    Ok(series) => {
                        let files = emit_series(
                            &series,
                            &config.output,
                            Some(config),
                            start.elapsed().as_secs_f64(),
                            config.force,
                        )?;
                        let last = series.records.last().expect("t = 0 is always recorded");
                        out.summary.push(format!(
                            "omega {}: {} records, E(0) = {:.6}, E(t_max) = {:.6}",
                            hc.omega,
                            series.records.len(),
                            series.records[0].energy,
                            last.energy
                        ));
                        out.files.push(files.csv);
                        out.files.push(files.manifest);
                    }
                    Err(Error::NormDrift { norm, period, partial }) => {
                        // Keep what was recorded before the abort.
                        emit_series(
                            &partial,
                            &config.output,
                            Some(config),
                            start.elapsed().as_secs_f64(),
                            config.force,
                        )?;
                        return Err(Error::NormDrift { norm, period, partial });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Command::Echo => {
            let mut echoes = Vec::new();
            for hc in config.heating_configs() {
                for &n in &config.echo_periods {
                    let report = run_echo(&hc, n)?;
                    let direct_error = if hc.num_qubits <= MAX_REFERENCE_QUBITS {
                        Some(precision_fidelity_error(&hc, 2 * n)?)
                    } else {
                        None
                    };
                    out.summary.push(format!(
                        "omega {} n {}: |1 - overlap| = {:.3e}, dE/E = {:.3e}{}",
                        hc.omega,
                        n,
                        report.overlap_error,
                        report.energy_rel_error,
                        direct_error.map(|d| format!(", direct = {d:.3e}")).unwrap_or_default()
                    ));
                    echoes.push(EchoEntry {
                        omega: hc.omega,
                        report,
                        direct_error,
                    });
                }
            }
            let path = config.output.join(format!(
                "echo_L{}_Ng{}_seed{}_{}.json",
                config.num_qubits.unwrap_or(0),
                config.num_global,
                config.seed,
                config.precision
            ));
            write_json(
                &path,
                &EchoFile {
                    software: SOFTWARE,
                    version: VERSION,
                    config,
                    echoes,
                },
                config.force,
            )?;
            out.files.push(path);
        }
        Command::Bench => {
            let sizes = if config.sizes.is_empty() {
                vec![config.num_qubits.expect("validated")]
            } else {
                config.sizes.clone()
            };
            let mut reports = Vec::new();
            for l in sizes {
                let report = benchmark_period(&config.heating_config(l, config.omega[0]), config.repetitions)?;
                out.summary.push(format!(
                    "L {}: mean {:.4e} s, min {:.4e} s, max {:.4e} s per period",
                    l, report.mean, report.min, report.max
                ));
                reports.push(report);
            }
            let scaling = if reports.len() >= 2 {
                let s = fit_cost_scaling(&reports)?;
                out.summary
                    .push(format!("t ~ c L 2^L with c = {:.4e} s", s.coefficient));
                Some(s)
            } else {
                None
            };
            let path = config.output.join(format!(
                "bench_Ng{}_q{}_{}.json",
                config.num_global, config.fusion, config.precision
            ));
            write_json(
                &path,
                &BenchFile {
                    software: SOFTWARE,
                    version: VERSION,
                    config,
                    reports,
                    scaling,
                },
                config.force,
            )?;
            out.files.push(path);
        }
        Command::Fit => {
            let outcome = fit_command(&config.inputs, &config.exclude, &config.output, config.force)?;
            for row in &outcome.rows {
                match (&row.rate, &row.failure) {
                    (Some(r), _) => out.summary.push(format!(
                        "{}: omega {:.4}, Gamma {:.4e}",
                        row.file.display(),
                        row.omega.unwrap_or(f64::NAN),
                        r.gamma
                    )),
                    (None, Some(f)) => out.summary.push(format!("{}: FAILED {f}", row.file.display())),
                    (None, None) => {}
                }
            }
            match (&outcome.fit, &outcome.fit_error) {
                (Some(f), _) => out.summary.push(format!(
                    "ln Gamma = a omega + b: a = {:.4} ± {:.4}, b = {:.4} ± {:.4} (OLS standard errors), R^2 = {:.4}",
                    f.slope, f.slope_stderr, f.intercept, f.intercept_stderr, f.r_squared
                )),
                (None, Some(e)) => out.summary.push(format!("no fit: {e}")),
                (None, None) => {}
            }
            out.partial_failure = !outcome.all_thermalized() || outcome.fit.is_none();
            out.files.push(config.output.join("rates.dat"));
            out.files.push(config.output.join("fit.json"));
        }
    }
    Ok(out)
}

/// Process exit status for an error: 1 validation, 2 runtime, 3 I/O.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Config { .. }
        | Error::Layout(_)
        | Error::Model(_)
        | Error::Gate(_)
        | Error::Dimension(_)
        | Error::Swap(_) => 1,
        Error::Io { .. } | Error::Format { .. } | Error::Exists { .. } => 3,
        _ => 2,
    }
}
