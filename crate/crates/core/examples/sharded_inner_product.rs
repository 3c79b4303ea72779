//! Builds the same product state with different shard counts and checks that
//! norms and inner products agree.

use floquet_shard::{ShardLayout, ShardedState};
use num_complex::Complex64;

fn main() -> floquet_shard::Result<()> {
    let l = 10;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
    let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    // |+i> on every qubit except a |1> on qubit 3; factors go by pairs.
    let single = |q: usize| if q == 3 { one } else { plus };
    let factors: Vec<Vec<Complex64>> = (0..l / 2)
        .map(|p| {
            let (a, b) = (single(2 * p + 1), single(2 * p + 2));
            vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
        })
        .collect();

    for ng in 0..=3 {
        let layout = ShardLayout::new(l, ng)?;
        let psi = ShardedState::<f64>::product_state(layout, &factors)?;
        let e = ShardedState::<f64>::basis_state(layout, "0010000000")?;
        println!(
            "Ng {ng}: {} shards of {} amplitudes, <psi|psi> = {:.15}, <e|psi> = {:.6}",
            layout.shard_count(),
            layout.local_len(),
            psi.norm_sqr(),
            e.inner_product(&psi)?
        );
    }
    Ok(())
}
