//! Forward-then-backward evolution in single and double precision, next to
//! the direct single-vs-double fidelity error.

use floquet_shard::experiment::{precision_fidelity_error, run_echo, HeatingConfig};
use floquet_shard::Precision;

fn main() -> floquet_shard::Result<()> {
    let single = HeatingConfig::new(10, 8.0, 0.0);
    let mut double = single.clone();
    double.precision = Precision::Double;

    println!("{:>6} {:>12} {:>12} {:>14}", "n", "single", "double", "direct(2n)");
    for n in [1u64, 10, 100, 1000] {
        println!(
            "{:>6} {:>12.3e} {:>12.3e} {:>14.3e}",
            n,
            run_echo(&single, n)?.overlap_error,
            run_echo(&double, n)?.overlap_error,
            precision_fidelity_error(&single, 2 * n)?
        );
    }
    Ok(())
}
