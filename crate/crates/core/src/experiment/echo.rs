use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::heating::{HeatingConfig, ObservableSeries, NORM_ABORT};
use crate::error::{Error, Result};
use crate::model::{energy_and_variance, initial_state, EnsembleManifest};
use crate::state::{Precision, Real, ShardedState, Workspace};

/// Largest chain for which a double-precision reference is affordable in
/// [`precision_fidelity_error`].
pub const MAX_REFERENCE_QUBITS: usize = 12;

/// How far `U_F^{-n} U_F^n ψ₀` lands from `ψ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EchoReport {
    pub periods: u64,
    /// `t_f = n T`.
    pub t_f: f64,
    pub precision: Precision,
    /// `|1 - <ψ₀|ψ'> / <ψ₀|ψ₀>|`; the denominator only strips the rounding
    /// of the initial norm.
    pub overlap_error: f64,
    pub energy_rel_error: f64,
    pub sigma_rel_error: f64,
}

/// Runs `periods` periods forward and the same number backward, then
/// compares with the initial state. Uses the config's precision and layout.
pub fn run_echo(config: &HeatingConfig, periods: u64) -> Result<EchoReport> {
    match config.precision {
        Precision::Single => echo_typed::<f32>(config, periods),
        Precision::Double => echo_typed::<f64>(config, periods),
    }
}

fn echo_typed<T: Real>(config: &HeatingConfig, periods: u64) -> Result<EchoReport> {
    let (ensemble, circuit, propagator, layout) = config.prepare()?;
    let mut workspace = Workspace::<T>::new(layout);
    let mut psi: ShardedState<T> = initial_state(&circuit, layout)?;
    let before = energy_and_variance(&psi, &circuit, &mut workspace)?;

    let mut psi0 = workspace.acquire()?;
    psi0.copy_from(&psi)?;
    let evolved = (|| {
        for _ in 0..periods {
            propagator.apply_period(&mut psi)?;
        }
        for _ in 0..periods {
            propagator.apply_period_adjoint(&mut psi)?;
        }
        psi.align_to(psi0.order());
        Ok::<_, Error>(psi.inner_product(&psi0)?.conj() / psi0.norm_sqr())
    })();
    workspace.release(psi0);
    let overlap: Complex64 = evolved?;

    let norm = psi.norm_sqr().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > NORM_ABORT {
        return Err(drift(config, ensemble, norm, 2 * periods));
    }
    let after = energy_and_variance(&psi, &circuit, &mut workspace)?;
    Ok(EchoReport {
        periods,
        t_f: periods as f64 * circuit.period(),
        precision: T::PRECISION,
        overlap_error: (Complex64::new(1.0, 0.0) - overlap).norm(),
        energy_rel_error: relative(after.energy, before.energy),
        sigma_rel_error: relative(after.sigma, before.sigma),
    })
}

fn drift(config: &HeatingConfig, ensemble: EnsembleManifest, norm: f64, period: u64) -> Error {
    Error::NormDrift {
        norm,
        period,
        partial: Box::new(ObservableSeries {
            config: config.clone(),
            ensemble,
            records: Vec::new(),
        }),
    }
}

fn relative(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        ((value - reference) / reference).abs()
    }
}

/// `|1 - <ψ_double|ψ_single> / <ψ_single|ψ_single>_0|` after `periods`
/// periods, normalised like [`EchoReport::overlap_error`], for chains of at
/// most [`MAX_REFERENCE_QUBITS`] qubits. Compare an echo over `n` periods
/// with this at `2n`.
pub fn precision_fidelity_error(config: &HeatingConfig, periods: u64) -> Result<f64> {
    if config.num_qubits > MAX_REFERENCE_QUBITS {
        return Err(Error::config(
            "L",
            format!("double-precision reference limited to L <= {MAX_REFERENCE_QUBITS}"),
        ));
    }
    let (single, initial_norm) = evolve_canonical::<f32>(config, periods)?;
    let (double, _) = evolve_canonical::<f64>(config, periods)?;
    let overlap: Complex64 = double.iter().zip(&single).map(|(d, s)| d.conj() * f32::widen(*s)).sum();
    Ok((Complex64::new(1.0, 0.0) - overlap / initial_norm).norm())
}

/// Final canonical amplitudes and the initial `<ψ|ψ>`.
fn evolve_canonical<T: Real>(config: &HeatingConfig, periods: u64) -> Result<(Vec<num_complex::Complex<T>>, f64)> {
    let (_, circuit, propagator, layout) = config.prepare()?;
    let mut psi: ShardedState<T> = initial_state(&circuit, layout)?;
    let initial_norm = psi.norm_sqr();
    for _ in 0..periods {
        propagator.apply_period(&mut psi)?;
    }
    Ok((psi.to_amplitudes(), initial_norm))
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman_correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mean) * (b - mean)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mean).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - mean).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}
