use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{extract_rate, fit_rates, HeatingConfig, ObservableSeries, RateExtraction, RateFit};
use crate::model::EnsembleManifest;
use crate::state::Precision;

use super::config::RunConfig;

pub const CSV_HEADER: &str = "n,t,E,sigma_E,norm,gates";
pub const SOFTWARE: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes `bytes` to a temporary sibling and renames it over `path`.
/// An existing `path` is an error unless `force` is set.
pub fn write_atomic(path: &Path, bytes: &[u8], force: bool) -> Result<()> {
    if !force && path.exists() {
        return Err(Error::Exists { path: path.into() });
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// File stem shared by a run's CSV and manifest.
pub fn series_stem(config: &HeatingConfig) -> String {
    format!(
        "heat_L{}_Ng{}_w{}_seed{}_{}",
        config.num_qubits, config.num_global, config.omega, config.seed, config.precision
    )
}

/// Floats use the shortest representation that reads back exactly.
pub fn series_csv(series: &ObservableSeries) -> String {
    let mut out = String::with_capacity(64 * (series.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &series.records {
        writeln!(
            out,
            "{},{:?},{:?},{:?},{:?},{}",
            r.period, r.time, r.energy, r.sigma_energy, r.norm, r.gates
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub software: String,
    pub version: String,
    /// Full command configuration, when the run came from one.
    pub config: Option<RunConfig>,
    pub run: HeatingConfig,
    pub ensemble: EnsembleManifest,
    pub precision: Precision,
    pub records: usize,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedSeries {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<stem>.csv` and `<stem>.manifest.json` into `dir`.
pub fn emit_series(
    series: &ObservableSeries,
    dir: &Path,
    config: Option<&RunConfig>,
    wall_time_s: f64,
    force: bool,
) -> Result<EmittedSeries> {
    let stem = series_stem(&series.config);
    let csv = dir.join(format!("{stem}.csv"));
    let manifest_path = manifest_path(&csv);
    let manifest = Manifest {
        software: SOFTWARE.into(),
        version: VERSION.into(),
        config: config.cloned(),
        run: series.config.clone(),
        ensemble: series.ensemble.clone(),
        precision: series.config.precision,
        records: series.records.len(),
        wall_time_s,
    };
    if !force {
        for p in [&csv, &manifest_path] {
            if p.exists() {
                return Err(Error::Exists { path: p.clone() });
            }
        }
    }
    write_atomic(&csv, series_csv(series).as_bytes(), force)?;
    write_json(&manifest_path, &manifest, force)?;
    Ok(EmittedSeries {
        csv,
        manifest: manifest_path,
    })
}

pub fn write_json(path: &Path, value: &impl Serialize, force: bool) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serialises");
    text.push('\n');
    write_atomic(path, text.as_bytes(), force)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.into(),
        reason: e.to_string(),
    })
}

/// The columns of a heating CSV that rate extraction needs.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub periods: Vec<u64>,
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
}

impl SeriesTable {
    /// `ω = 2π n / t`, from the last record.
    pub fn omega(&self) -> Option<f64> {
        let i = self.periods.iter().rposition(|&n| n > 0)?;
        Some(std::f64::consts::TAU * self.periods[i] as f64 / self.times[i])
    }
}

pub fn read_series_csv(path: &Path) -> Result<SeriesTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, reason: String| Error::Format {
        path: path.into(),
        reason: format!("line {line}: {reason}"),
    };
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(bad(1, format!("expected header `{CSV_HEADER}`")));
    }
    let mut table = SeriesTable {
        periods: Vec::new(),
        times: Vec::new(),
        energies: Vec::new(),
    };
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(bad(i + 2, format!("expected 6 columns, found {}", cols.len())));
        }
        let num = |c: &str| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| bad(i + 2, format!("`{c}` is not a number")))
        };
        table.periods.push(
            cols[0]
                .trim()
                .parse()
                .map_err(|_| bad(i + 2, format!("`{}` is not a period index", cols[0])))?,
        );
        table.times.push(num(cols[1])?);
        table.energies.push(num(cols[2])?);
    }
    Ok(table)
}

/// One input of the fit command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub file: PathBuf,
    pub omega: Option<f64>,
    pub rate: Option<RateExtraction>,
    /// Why no rate was extracted.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    /// Sorted by ω; failures last.
    pub rows: Vec<RateRow>,
    /// Indices into the ω-sorted successful rows.
    pub exclude: Vec<usize>,
    pub fit: Option<RateFit>,
    pub fit_error: Option<String>,
    /// Slope and intercept errors are ordinary least-squares standard errors.
    pub stderr_kind: String,
}

impl FitOutcome {
    pub fn all_thermalized(&self) -> bool {
        self.rows.iter().all(|r| r.failure.is_none())
    }
}

/// `x.csv` -> `x.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

/// Extracts a rate from every CSV, fits `ln Γ = a ω + b` and writes
/// `rates.dat` (columns ω, Γ, ln Γ, t1, t2) and `fit.json` into `dir`.
/// `ω` comes from the run's manifest when present, else from `2π n / t`.
/// Files that fail are listed in both outputs.
pub fn fit_command(inputs: &[PathBuf], exclude: &[usize], dir: &Path, force: bool) -> Result<FitOutcome> {
    let mut rows: Vec<RateRow> = inputs
        .iter()
        .map(|file| {
            let attempt = read_series_csv(file).and_then(|t| {
                let omega = match read_manifest(&manifest_path(file)) {
                    Ok(m) => m.run.omega,
                    Err(_) => t.omega().ok_or_else(|| Error::Fit("no record past t = 0".into()))?,
                };
                Ok((omega, extract_rate(&t.times, &t.energies)))
            });
            match attempt {
                Ok((omega, Ok(rate))) => RateRow {
                    file: file.clone(),
                    omega: Some(omega),
                    rate: Some(rate),
                    failure: None,
                },
                Ok((omega, Err(e))) => RateRow {
                    file: file.clone(),
                    omega: Some(omega),
                    rate: None,
                    failure: Some(e.to_string()),
                },
                Err(e) => RateRow {
                    file: file.clone(),
                    omega: None,
                    rate: None,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.rate.is_none(), a.omega.unwrap_or(f64::INFINITY))
            .partial_cmp(&(b.rate.is_none(), b.omega.unwrap_or(f64::INFINITY)))
            .unwrap()
    });

    let points: Vec<(f64, f64)> = rows.iter().filter_map(|r| Some((r.omega?, r.rate?.gamma))).collect();
    let (fit, fit_error) = match fit_rates(&points, exclude) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let outcome = FitOutcome {
        rows,
        exclude: exclude.to_vec(),
        fit,
        fit_error,
        stderr_kind: "ols".into(),
    };

    let mut table = String::from("# omega gamma ln_gamma t1 t2 file\n");
    let mut ok_index = 0;
    for row in &outcome.rows {
        match (row.omega, row.rate) {
            (Some(w), Some(r)) => {
                let mark = if exclude.contains(&ok_index) {
                    "  # excluded"
                } else {
                    ""
                };
                writeln!(
                    table,
                    "{w:?} {:?} {:?} {:?} {:?} {}{mark}",
                    r.gamma,
                    r.gamma.ln(),
                    r.t1,
                    r.t2,
                    row.file.display()
                )
                .unwrap();
                ok_index += 1;
            }
            _ => writeln!(
                table,
                "# failed: {} ({})",
                row.file.display(),
                row.failure.as_deref().unwrap_or("unknown")
            )
            .unwrap(),
        }
    }
    write_atomic(&dir.join("rates.dat"), table.as_bytes(), force)?;
    write_json(&dir.join("fit.json"), &outcome, force)?;
    Ok(outcome)
}
