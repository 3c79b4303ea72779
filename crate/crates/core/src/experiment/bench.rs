use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::heating::HeatingConfig;
use crate::error::{Error, Result};
use crate::model::initial_state;
use crate::state::{Precision, Real, ShardedState};

pub const MIN_REPETITIONS: usize = 10;
pub const DEFAULT_REPETITIONS: usize = 100;

/// Wall time of one Floquet period, in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub num_qubits: usize,
    pub num_global: usize,
    pub fusion: usize,
    pub precision: Precision,
    pub repetitions: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Times `repetitions` consecutive periods on the initial state of the
/// config's chain. `omega`, `t_max` and the schedule are ignored.
pub fn benchmark_period(config: &HeatingConfig, repetitions: usize) -> Result<BenchReport> {
    if repetitions < MIN_REPETITIONS {
        return Err(Error::config(
            "repetitions",
            format!("at least {MIN_REPETITIONS} are needed"),
        ));
    }
    let samples = match config.precision {
        Precision::Single => time_periods::<f32>(config, repetitions)?,
        Precision::Double => time_periods::<f64>(config, repetitions)?,
    };
    Ok(BenchReport {
        num_qubits: config.num_qubits,
        num_global: config.num_global,
        fusion: config.fusion,
        precision: config.precision,
        repetitions,
        mean: samples.iter().sum::<f64>() / repetitions as f64,
        min: samples.iter().copied().fold(f64::INFINITY, f64::min),
        max: samples.iter().copied().fold(0.0, f64::max),
    })
}

fn time_periods<T: Real>(config: &HeatingConfig, repetitions: usize) -> Result<Vec<f64>> {
    let (_, circuit, propagator, layout) = config.prepare()?;
    let mut psi: ShardedState<T> = initial_state(&circuit, layout)?;
    // One untimed period to fault in the allocation.
    propagator.apply_period(&mut psi)?;
    (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            propagator.apply_period(&mut psi)?;
            Ok(start.elapsed().as_secs_f64())
        })
        .collect()
}

/// `t(L) ≈ c L 2^L` fitted to benchmark means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostScaling {
    pub coefficient: f64,
    /// `(L, t / (c L 2^L) - 1)` per report.
    pub deviations: Vec<(usize, f64)>,
}

/// Fits `c` by least squares on `ln t - ln(L 2^L)`.
pub fn fit_cost_scaling(reports: &[BenchReport]) -> Result<CostScaling> {
    if reports.is_empty() {
        return Err(Error::Fit("no benchmark reports".into()));
    }
    let model = |l: usize| l as f64 * 2f64.powi(l as i32);
    let log_c = reports
        .iter()
        .map(|r| r.mean.ln() - model(r.num_qubits).ln())
        .sum::<f64>()
        / reports.len() as f64;
    let coefficient = log_c.exp();
    Ok(CostScaling {
        coefficient,
        deviations: reports
            .iter()
            .map(|r| (r.num_qubits, r.mean / (coefficient * model(r.num_qubits)) - 1.0))
            .collect(),
    })
}
