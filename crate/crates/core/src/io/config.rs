use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{HeatingConfig, DEFAULT_MAX_BONDS, DEFAULT_REPETITIONS, DEFAULT_STRIDE, DEFAULT_T_DENSE};
use crate::state::{Precision, ShardLayout, MAX_FUSION_WINDOW, MAX_QUBITS, MIN_FUSION_WINDOW};

/// Keys accepted in a config file, spelled as on the command line.
pub const CONFIG_KEYS: &[&str] = &[
    "L",
    "Ng",
    "seed",
    "max_bonds",
    "omega",
    "t_max",
    "t_dense",
    "stride",
    "precision",
    "fusion",
    "output",
    "echo_periods",
    "repetitions",
    "sizes",
    "exclude",
    "inputs",
    "force",
];

pub const DEFAULT_EXCLUDE: [usize; 2] = [0, 1];
pub const DEFAULT_ECHO_PERIODS: u64 = 10;
/// Drive frequency used by `bench` when none is given.
pub const DEFAULT_BENCH_OMEGA: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Heat,
    Echo,
    Bench,
    Fit,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Heat => "heat",
            Command::Echo => "echo",
            Command::Bench => "bench",
            Command::Fit => "fit",
        })
    }
}

/// Drive frequencies: `4`, `5,5.5,6` or an inclusive range `5:8:0.5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OmegaRepr", into = "Vec<f64>")]
pub struct OmegaList(pub Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum OmegaRepr {
    One(f64),
    Many(Vec<f64>),
    Text(String),
}

impl TryFrom<OmegaRepr> for OmegaList {
    type Error = String;

    fn try_from(r: OmegaRepr) -> std::result::Result<Self, String> {
        match r {
            OmegaRepr::One(w) => Ok(OmegaList(vec![w])),
            OmegaRepr::Many(ws) => Ok(OmegaList(ws)),
            OmegaRepr::Text(s) => s.parse(),
        }
    }
}

impl From<OmegaList> for Vec<f64> {
    fn from(o: OmegaList) -> Self {
        o.0
    }
}

impl FromStr for OmegaList {
    type Err = String;

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts[..] {
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(format!("bad range `{s}`: need start <= stop and step > 0"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                Ok(OmegaList((0..=count).map(|i| start + i as f64 * step).collect()))
            }
            [_] => Ok(OmegaList(s.split(',').map(num).collect::<std::result::Result<_, _>>()?)),
            _ => Err(format!("`{s}`: expected a list `a,b,c` or a range `start:stop:step`")),
        }
    }
}

/// Values from a config file or flags; unset fields fall back to defaults.
#[derive(Clone, Debug, Default, PartialEq, clap::Args)]
pub struct PartialConfig {
    /// Chain length.
    #[arg(long = "L")]
    pub num_qubits: Option<usize>,
    /// Global qubits; 2^Ng shards.
    #[arg(long = "Ng")]
    pub num_global: Option<usize>,
    #[arg(long = "seed")]
    pub seed: Option<u64>,
    #[arg(long = "max_bonds")]
    pub max_bonds: Option<usize>,
    /// `4`, `5,5.5,6` or `5:8:0.5`.
    #[arg(long = "omega")]
    pub omega: Option<OmegaList>,
    #[arg(long = "t_max")]
    pub t_max: Option<f64>,
    #[arg(long = "t_dense")]
    pub t_dense: Option<f64>,
    #[arg(long = "stride")]
    pub stride: Option<u64>,
    /// single or double.
    #[arg(long = "precision")]
    pub precision: Option<Precision>,
    /// Fusion window q (2 disables fusion).
    #[arg(long = "fusion")]
    pub fusion: Option<usize>,
    #[arg(long = "output")]
    pub output: Option<PathBuf>,
    /// Echo lengths in periods, comma separated.
    #[arg(long = "echo_periods", value_delimiter = ',')]
    pub echo_periods: Option<Vec<u64>>,
    #[arg(long = "repetitions")]
    pub repetitions: Option<usize>,
    /// Chain lengths to benchmark, comma separated.
    #[arg(long = "sizes", value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Indices (in ω order) of rates left out of the fit.
    #[arg(long = "exclude", value_delimiter = ',', num_args = 0..)]
    pub exclude: Option<Vec<usize>>,
    /// Heating CSVs to fit.
    #[arg(long = "inputs", value_delimiter = ',')]
    pub inputs: Option<Vec<PathBuf>>,
    /// Overwrite existing result files.
    #[arg(long = "force")]
    pub force: bool,
}

impl PartialConfig {
    /// Parses a flat TOML file. Tables and unknown keys are rejected.
    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("<file>", e.message().to_string()))?;
        for (key, value) in &table {
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::config(key.clone(), "unknown key"));
            }
            let nested = match value {
                toml::Value::Table(_) => true,
                toml::Value::Array(items) => items.iter().any(|v| v.is_table() || v.is_array()),
                _ => false,
            };
            if nested {
                return Err(Error::config(
                    key.clone(),
                    "nested values are not allowed; use a flat file",
                ));
            }
        }
        let mut out = PartialConfig::default();
        for (key, value) in table {
            out.set(&key, value)?;
        }
        Ok(out)
    }

    fn set(&mut self, key: &str, value: toml::Value) -> Result<()> {
        fn get<T: serde::de::DeserializeOwned>(key: &str, value: toml::Value) -> Result<T> {
            value
                .try_into()
                .map_err(|e: toml::de::Error| Error::config(key, e.message().to_string()))
        }
        match key {
            "L" => self.num_qubits = Some(get(key, value)?),
            "Ng" => self.num_global = Some(get(key, value)?),
            "seed" => self.seed = Some(get(key, value)?),
            "max_bonds" => self.max_bonds = Some(get(key, value)?),
            "omega" => self.omega = Some(get(key, value)?),
            "t_max" => self.t_max = Some(get(key, value)?),
            "t_dense" => self.t_dense = Some(get(key, value)?),
            "stride" => self.stride = Some(get(key, value)?),
            "precision" => self.precision = Some(get(key, value)?),
            "fusion" => self.fusion = Some(get(key, value)?),
            "output" => self.output = Some(get(key, value)?),
            "echo_periods" => self.echo_periods = Some(get(key, value)?),
            "repetitions" => self.repetitions = Some(get(key, value)?),
            "sizes" => self.sizes = Some(get(key, value)?),
            "exclude" => self.exclude = Some(get(key, value)?),
            "inputs" => self.inputs = Some(get(key, value)?),
            "force" => self.force = get(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overridden_by(self, flags: PartialConfig) -> Self {
        Self {
            num_qubits: flags.num_qubits.or(self.num_qubits),
            num_global: flags.num_global.or(self.num_global),
            seed: flags.seed.or(self.seed),
            max_bonds: flags.max_bonds.or(self.max_bonds),
            omega: flags.omega.or(self.omega),
            t_max: flags.t_max.or(self.t_max),
            t_dense: flags.t_dense.or(self.t_dense),
            stride: flags.stride.or(self.stride),
            precision: flags.precision.or(self.precision),
            fusion: flags.fusion.or(self.fusion),
            output: flags.output.or(self.output),
            echo_periods: flags.echo_periods.or(self.echo_periods),
            repetitions: flags.repetitions.or(self.repetitions),
            sizes: flags.sizes.or(self.sizes),
            exclude: flags.exclude.or(self.exclude),
            inputs: flags.inputs.or(self.inputs),
            force: flags.force || self.force,
        }
    }
}

/// A validated configuration for one CLI command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub num_qubits: Option<usize>,
    #[serde(rename = "Ng")]
    pub num_global: usize,
    pub seed: u64,
    pub max_bonds: usize,
    pub omega: Vec<f64>,
    pub t_max: f64,
    pub t_dense: f64,
    pub stride: u64,
    pub precision: Precision,
    pub fusion: usize,
    pub output: PathBuf,
    pub echo_periods: Vec<u64>,
    pub repetitions: usize,
    pub sizes: Vec<usize>,
    pub exclude: Vec<usize>,
    pub inputs: Vec<PathBuf>,
    pub force: bool,
}

/// Applies defaults and checks constraints, naming the offending field.
pub fn parse_config(command: Command, file: Option<&Path>, flags: PartialConfig) -> Result<RunConfig> {
    let base = match file {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    RunConfig::resolve(command, base.overridden_by(flags))
}

impl RunConfig {
    pub fn resolve(command: Command, p: PartialConfig) -> Result<Self> {
        let required = |field: &str| Error::config(field, format!("required by `{command}`"));
        let num_qubits = p.num_qubits;
        let sizes = p.sizes.unwrap_or_default();
        let omega = match (p.omega, command) {
            (Some(o), _) => o.0,
            (None, Command::Bench) => vec![DEFAULT_BENCH_OMEGA],
            (None, Command::Fit) => Vec::new(),
            (None, _) => return Err(required("omega")),
        };
        let t_max = match (p.t_max, command) {
            (Some(t), _) => t,
            (None, Command::Heat) => return Err(required("t_max")),
            (None, _) => 0.0,
        };
        let needs_chain = match command {
            Command::Heat | Command::Echo => true,
            Command::Bench => sizes.is_empty(),
            Command::Fit => false,
        };
        if needs_chain && num_qubits.is_none() {
            return Err(required("L"));
        }
        let longest = num_qubits.into_iter().chain(sizes.iter().copied()).max().unwrap_or(0);
        let config = RunConfig {
            command,
            num_qubits,
            num_global: p.num_global.unwrap_or(0),
            seed: p.seed.unwrap_or(0),
            max_bonds: p.max_bonds.unwrap_or(DEFAULT_MAX_BONDS.max(longest.saturating_sub(1))),
            omega,
            t_max,
            t_dense: p.t_dense.unwrap_or(DEFAULT_T_DENSE),
            stride: p.stride.unwrap_or(DEFAULT_STRIDE),
            precision: p.precision.unwrap_or(Precision::Single),
            fusion: p.fusion.unwrap_or(MIN_FUSION_WINDOW),
            output: p.output.unwrap_or_else(|| PathBuf::from(".")),
            echo_periods: p.echo_periods.unwrap_or_else(|| vec![DEFAULT_ECHO_PERIODS]),
            repetitions: p.repetitions.unwrap_or(DEFAULT_REPETITIONS),
            sizes,
            exclude: p.exclude.unwrap_or_else(|| DEFAULT_EXCLUDE.to_vec()),
            inputs: p.inputs.unwrap_or_default(),
            force: p.force,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for l in self.num_qubits.iter().chain(&self.sizes) {
            if *l == 0 || *l > MAX_QUBITS {
                return Err(Error::config("L", format!("must be in 1..={MAX_QUBITS}, got {l}")));
            }
            if l % 2 == 1 {
                return Err(Error::config("L", format!("chain length must be even, got {l}")));
            }
            if self.num_global > *l {
                return Err(Error::config("Ng", format!("Ng = {} exceeds L = {l}", self.num_global)));
            }
            if ShardLayout::new(*l, self.num_global).is_err() {
                return Err(Error::config(
                    "Ng",
                    format!("no valid layout for L = {l}, Ng = {}", self.num_global),
                ));
            }
            if self.max_bonds + 1 < *l {
                return Err(Error::config(
                    "max_bonds",
                    format!("L = {l} needs at least {} bonds", l - 1),
                ));
            }
        }
        if self.seed > i64::MAX as u64 {
            return Err(Error::config("seed", "must fit in a signed 64-bit integer"));
        }
        if self.max_bonds == 0 {
            return Err(Error::config("max_bonds", "must be at least 1"));
        }
        if self.command != Command::Fit && self.omega.is_empty() {
            return Err(Error::config("omega", "empty list"));
        }
        if let Some(w) = self.omega.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::config("omega", format!("must be positive, got {w}")));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::config("t_max", "must be a finite time >= 0"));
        }
        if !(self.t_dense.is_finite() && self.t_dense >= 0.0) {
            return Err(Error::config("t_dense", "must be a finite time >= 0"));
        }
        if self.stride == 0 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if !(MIN_FUSION_WINDOW..=MAX_FUSION_WINDOW).contains(&self.fusion) {
            return Err(Error::config(
                "fusion",
                format!("must be in {MIN_FUSION_WINDOW}..={MAX_FUSION_WINDOW}"),
            ));
        }
        match self.command {
            Command::Echo if self.echo_periods.is_empty() => return Err(Error::config("echo_periods", "empty list")),
            Command::Bench if self.repetitions < crate::experiment::MIN_REPETITIONS => {
                return Err(Error::config(
                    "repetitions",
                    format!("at least {} are needed", crate::experiment::MIN_REPETITIONS),
                ))
            }
            Command::Fit if self.inputs.is_empty() => return Err(Error::config("inputs", "no CSV files given")),
            _ => {}
        }
        Ok(())
    }

    /// One heating config per drive frequency.
    pub fn heating_configs(&self) -> Vec<HeatingConfig> {
        let l = self.num_qubits.unwrap_or(0);
        self.omega.iter().map(|&omega| self.heating_config(l, omega)).collect()
    }

    pub(crate) fn heating_config(&self, num_qubits: usize, omega: f64) -> HeatingConfig {
        HeatingConfig {
            num_qubits,
            num_global: self.num_global,
            seed: self.seed,
            max_bonds: self.max_bonds,
            omega,
            t_max: self.t_max,
            t_dense: self.t_dense,
            stride: self.stride,
            precision: self.precision,
            fusion: self.fusion,
        }
    }

    /// Flat TOML that parses back to this config.
    pub fn to_toml(&self) -> String {
        let mut table = toml::Table::try_from(self).expect("flat config serialises");
        table.remove("command");
        toml::to_string(&table).expect("flat config serialises")
    }
}
