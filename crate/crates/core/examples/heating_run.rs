//! Runs one heating trajectory and prints energy and its spread on a
//! logarithmic subset of the records.

use floquet_shard::experiment::{extract_rate, run_heating, HeatingConfig};

fn main() -> floquet_shard::Result<()> {
    let mut config = HeatingConfig::new(12, 3.0, 500.0);
    config.num_global = 2;
    let series = run_heating(&config)?;

    println!("{:>8} {:>10} {:>10} {:>12}", "t", "E", "sigma_E", "norm");
    let mut next = 0.0;
    for r in &series.records {
        if r.time >= next {
            println!(
                "{:>8.2} {:>10.4} {:>10.4} {:>12.9}",
                r.time, r.energy, r.sigma_energy, r.norm
            );
            next = (r.time * 1.5).max(r.time + config.period());
        }
    }
    let rate = extract_rate(&series.times(), &series.energies())?;
    println!("Gamma = {:.4} (t1 {:.3}, t2 {:.3})", rate.gamma, rate.t1, rate.t2);
    Ok(())
}
