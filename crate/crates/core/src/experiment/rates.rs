use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heating rate read off one energy curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateExtraction {
    /// `Γ = 1 / (t₂ - t₁)`.
    pub gamma: f64,
    /// First time with `E(t)/E(0) = e^-1`.
    pub t1: f64,
    /// First time with `E(t)/E(0) = e^-2`.
    pub t2: f64,
    /// The ratio climbed back above a threshold after first crossing it.
    pub non_monotone: bool,
}

/// Extracts `Γ` from `E(t)`, `times[0]` being the `t = 0` record.
///
/// Crossings are interpolated linearly in `E` against `ln t`; the first
/// interval, which starts at `t = 0`, is interpolated linearly in `t`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
pub fn extract_rate(times: &[f64], energies: &[f64]) -> Result<RateExtraction> {
    if times.len() != energies.len() {
        return Err(Error::Fit(format!(
            "{} times but {} energies",
            times.len(),
            energies.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::Fit("need at least two records".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Fit("times must be strictly increasing".into()));
    }
    let e0 = energies[0];
    if e0 == 0.0 || !e0.is_finite() {
        return Err(Error::Fit(format!("E(0) = {e0}; the ratio E/E(0) is undefined")));
    }
    let ratios: Vec<f64> = energies.iter().map(|e| e / e0).collect();
    let t_max = *times.last().unwrap();

    let (t1, bounce1) = crossing(times, &ratios, 1).ok_or(Error::NotThermalized { level: 1, t_max })?;
    let (t2, bounce2) = crossing(times, &ratios, 2).ok_or(Error::NotThermalized { level: 2, t_max })?;
    let non_monotone = bounce1 || bounce2;
    if non_monotone {
        log::warn!("E(t)/E(0) is not monotone through the e^-1 / e^-2 crossings");
    }
    if !(t2 > t1) {
        return Err(Error::Fit(format!("crossings out of order: t1 = {t1}, t2 = {t2}")));
    }
    Ok(RateExtraction {
        gamma: 1.0 / (t2 - t1),
        t1,
        t2,
        non_monotone,
    })
}

/// First time the ratio reaches `e^-level`, and whether it later rises above it.
fn crossing(times: &[f64], ratios: &[f64], level: u32) -> Option<(f64, bool)> {
    let threshold = (-(level as f64)).exp();
    let j = (1..ratios.len()).find(|&j| ratios[j] <= threshold)?;
    let (r0, r1) = (ratios[j - 1], ratios[j]);
    let f = if r1 == r0 { 1.0 } else { (threshold - r0) / (r1 - r0) };
    let (ta, tb) = (times[j - 1], times[j]);
    let t = if ta > 0.0 {
        (ta.ln() + f * (tb.ln() - ta.ln())).exp()
    } else {
        ta + f * (tb - ta)
    };
    let bounce = ratios[j + 1..].iter().any(|&r| r > threshold);
    Some((t, bounce))
}

/// Least-squares line `ln Γ = a ω + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `a`.
    pub slope: f64,
    /// `b`.
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub residual_sum_squares: f64,
    pub r_squared: f64,
    /// `(ω, Γ)` pairs that entered the fit.
    pub used: Vec<(f64, f64)>,
    pub excluded: Vec<(f64, f64)>,
}

/// Fits `ln Γ` against `ω` by ordinary least squares. `exclude` holds
/// indices into `points`.
pub fn fit_rates(points: &[(f64, f64)], exclude: &[usize]) -> Result<RateFit> {
    if let Some(&bad) = exclude.iter().find(|&&i| i >= points.len()) {
        return Err(Error::Fit(format!(
            "exclusion index {bad} out of range for {} points",
            points.len()
        )));
    }
    let (excluded, used): (Vec<_>, Vec<_>) = points.iter().enumerate().partition(|(i, _)| exclude.contains(i));
    let used: Vec<(f64, f64)> = used.into_iter().map(|(_, &p)| p).collect();
    let excluded: Vec<(f64, f64)> = excluded.into_iter().map(|(_, &p)| p).collect();
    if used.len() < 3 {
        return Err(Error::Fit(format!(
            "{} points left after exclusion; at least 3 are needed",
            used.len()
        )));
    }
    if let Some(&(w, g)) = used.iter().find(|(_, g)| !(*g > 0.0 && g.is_finite())) {
        return Err(Error::Fit(format!("non-positive rate Γ = {g} at ω = {w}")));
    }

    let n = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let x_bar = xs.iter().sum::<f64>() / n;
    let y_bar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_bar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_bar) * (y - y_bar)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all frequencies coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let s2 = rss / (n - 2.0);
    Ok(RateFit {
        slope,
        intercept,
        slope_stderr: (s2 / sxx).sqrt(),
        intercept_stderr: (s2 * (1.0 / n + x_bar * x_bar / sxx)).sqrt(),
        residual_sum_squares: rss,
        r_squared: if syy > 0.0 { 1.0 - rss / syy } else { 1.0 },
        used,
        excluded,
    })
}
