//! Times one Floquet period for a few chain lengths and fits t = c L 2^L.

use floquet_shard::experiment::{benchmark_period, fit_cost_scaling, HeatingConfig};

fn main() -> floquet_shard::Result<()> {
    let mut reports = Vec::new();
    for l in [12, 14, 16, 18] {
        let r = benchmark_period(&HeatingConfig::new(l, 8.0, 0.0), 20)?;
        println!("L {l}: mean {:.3e} s (min {:.3e}, max {:.3e})", r.mean, r.min, r.max);
        reports.push(r);
    }
    let scaling = fit_cost_scaling(&reports)?;
    println!("c = {:.3e} s", scaling.coefficient);
    for (l, d) in scaling.deviations {
        println!("  L {l}: {:+.1}%", 100.0 * d);
    }
    Ok(())
}
