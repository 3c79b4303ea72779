//! Heating runs, rate extraction and fitting, echo audits and benchmarks.

mod bench;
mod echo;
mod heating;
mod rates;

pub use bench::{benchmark_period, fit_cost_scaling, BenchReport, CostScaling, DEFAULT_REPETITIONS, MIN_REPETITIONS};
pub use echo::{precision_fidelity_error, run_echo, spearman_correlation, EchoReport, MAX_REFERENCE_QUBITS};
pub use heating::{
    run_heating, HeatingConfig, ObservableSeries, Record, RecordSchedule, DEFAULT_MAX_BONDS, DEFAULT_STRIDE,
    DEFAULT_T_DENSE, NORM_ABORT,
};
pub use rates::{extract_rate, fit_rates, RateExtraction, RateFit};
