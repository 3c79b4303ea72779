use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    build_circuit, build_ensemble, energy_and_variance, initial_state, EnsembleManifest, FloquetCircuit, Propagator,
};
use crate::state::{Precision, Real, ShardLayout, ShardedState, Workspace};

/// Runs abort once `| ||ψ|| - 1 |` exceeds this.
pub const NORM_ABORT: f64 = 1e-2;

/// Bonds sampled by default: enough for chains up to 40 qubits.
pub const DEFAULT_MAX_BONDS: usize = 39;
pub const DEFAULT_T_DENSE: f64 = 100.0;
pub const DEFAULT_STRIDE: u64 = 10;

/// Slack when converting times to period counts, so that `t = n T` computed
/// in floating point still counts as `n` periods.
const PERIOD_SLACK: f64 = 1e-9;

/// Everything that determines a heating run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatingConfig {
    pub num_qubits: usize,
    pub num_global: usize,
    pub seed: u64,
    pub max_bonds: usize,
    pub omega: f64,
    pub t_max: f64,
    /// Record every period up to this time...
    pub t_dense: f64,
    /// ...then every `stride` periods.
    pub stride: u64,
    pub precision: Precision,
    pub fusion: usize,
}

impl HeatingConfig {
    pub fn new(num_qubits: usize, omega: f64, t_max: f64) -> Self {
        Self {
            num_qubits,
            num_global: 0,
            seed: 0,
            max_bonds: DEFAULT_MAX_BONDS.max(num_qubits.saturating_sub(1)),
            omega,
            t_max,
            t_dense: DEFAULT_T_DENSE,
            stride: DEFAULT_STRIDE,
            precision: Precision::Single,
            fusion: 2,
        }
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        ShardLayout::new(self.num_qubits, self.num_global)?;
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::config("t_max", "must be a finite time >= 0"));
        }
        if !(self.t_dense.is_finite() && self.t_dense >= 0.0) {
            return Err(Error::config("t_dense", "must be a finite time >= 0"));
        }
        if self.stride == 0 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::config("omega", "must be positive"));
        }
        Ok(())
    }

    pub fn schedule(&self) -> RecordSchedule {
        RecordSchedule::new(self.t_dense, self.t_max, self.period(), self.stride)
    }

    pub(crate) fn prepare(&self) -> Result<(EnsembleManifest, FloquetCircuit, Propagator, ShardLayout)> {
        self.validate()?;
        let ensemble = build_ensemble(self.seed, self.max_bonds)?;
        let circuit = build_circuit(&ensemble, self.num_qubits, self.omega)?;
        let propagator = circuit.propagator(self.fusion)?;
        let layout = ShardLayout::new(self.num_qubits, self.num_global)?;
        Ok((ensemble.manifest(), circuit, propagator, layout))
    }
}

/// Period indices at which observables are recorded: every period up to
/// `t_dense`, then every `stride`-th period up to `t_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecordSchedule {
    pub dense_periods: u64,
    pub sparse_records: u64,
    pub stride: u64,
}

impl RecordSchedule {
    /// `t_dense` is capped at `t_max`.
    pub fn new(t_dense: f64, t_max: f64, period: f64, stride: u64) -> Self {
        let t_dense = t_dense.min(t_max);
        let dense_periods = (t_dense / period + PERIOD_SLACK).floor() as u64;
        let sparse_records = ((t_max - t_dense) / (stride as f64 * period) + PERIOD_SLACK).floor() as u64;
        Self {
            dense_periods,
            sparse_records,
            stride,
        }
    }

    pub fn len(&self) -> usize {
        (self.dense_periods + self.sparse_records + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.dense_periods).chain((1..=self.sparse_records).map(move |j| self.dense_periods + j * self.stride))
    }

    pub fn final_period(&self) -> u64 {
        self.dense_periods + self.sparse_records * self.stride
    }
}

/// One row of a heating run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub period: u64,
    pub time: f64,
    pub energy: f64,
    pub sigma_energy: f64,
    pub norm: f64,
    /// Two-qubit gates applied so far, `(L - 1) n`.
    pub gates: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub config: HeatingConfig,
    pub ensemble: EnsembleManifest,
    pub records: Vec<Record>,
}

impl ObservableSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }
}

/// Evolves the odd-bond ground state under `U_F` and records `E`, `σ_E` and
/// the norm on the configured schedule.
pub fn run_heating(config: &HeatingConfig) -> Result<ObservableSeries> {
    match config.precision {
        Precision::Single => run_typed::<f32>(config),
        Precision::Double => run_typed::<f64>(config),
    }
}

fn run_typed<T: Real>(config: &HeatingConfig) -> Result<ObservableSeries> {
    let (ensemble, circuit, propagator, layout) = config.prepare()?;
    let mut psi: ShardedState<T> = initial_state(&circuit, layout)?;
    let mut workspace = Workspace::new(layout);
    let period = circuit.period();
    let mut series = ObservableSeries {
        config: config.clone(),
        ensemble,
        records: Vec::with_capacity(config.schedule().len()),
    };

    let mut n = 0u64;
    for target in config.schedule().periods() {
        while n < target {
            propagator.apply_period(&mut psi)?;
            n += 1;
        }
        let stats = energy_and_variance(&psi, &circuit, &mut workspace)?;
        let norm = psi.norm_sqr().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_ABORT {
            return Err(Error::NormDrift {
                norm,
                period: n,
                partial: Box::new(series),
            });
        }
        series.records.push(Record {
            period: n,
            time: n as f64 * period,
            energy: stats.energy,
            sigma_energy: stats.sigma,
            norm,
            gates: circuit.gates_per_period() * n,
        });
    }
    Ok(series)
}
