//! Extracts heating rates over a small frequency grid and fits
//! ln Gamma = a omega + b.

use floquet_shard::experiment::{extract_rate, fit_rates, run_heating, HeatingConfig};

fn main() -> floquet_shard::Result<()> {
    let mut points = Vec::new();
    for omega in [2.5, 3.0, 3.5, 4.0, 4.5] {
        let series = run_heating(&HeatingConfig::new(12, omega, 300.0))?;
        match extract_rate(&series.times(), &series.energies()) {
            Ok(r) => {
                println!("omega {omega}: Gamma {:.4e}", r.gamma);
                points.push((omega, r.gamma));
            }
            Err(e) => println!("omega {omega}: {e}"),
        }
    }
    let fit = fit_rates(&points, &[])?;
    println!(
        "a = {:.3} +- {:.3}, b = {:.3} +- {:.3}, R^2 = {:.3}",
        fit.slope, fit.slope_stderr, fit.intercept, fit.intercept_stderr, fit.r_squared
    );
    Ok(())
}
