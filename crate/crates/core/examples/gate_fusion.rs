//! Merges a layer of bond gates into wider blocks and checks that one period
//! gives the same state either way.

use floquet_shard::model::{build_circuit, build_ensemble, initial_state};
use floquet_shard::state::fuse_layer;
use floquet_shard::{ShardLayout, ShardedState};

fn main() -> floquet_shard::Result<()> {
    let l = 12;
    let circuit = build_circuit(&build_ensemble(0, 39)?, l, 5.0)?;
    let layout = ShardLayout::new(l, 2)?;

    let mut reference: ShardedState<f64> = initial_state(&circuit, layout)?;
    circuit.propagator(2)?.apply_period(&mut reference)?;
    reference.canonicalize();

    for q in [2, 4, 6] {
        let fused = fuse_layer(circuit.even_layer(), q)?;
        let mut psi: ShardedState<f64> = initial_state(&circuit, layout)?;
        circuit.propagator(q)?.apply_period(&mut psi)?;
        psi.canonicalize();
        let overlap = psi.inner_product(&reference)?;
        println!(
            "q {q}: even layer {} -> {} blocks, |1 - <ref|psi>| = {:.2e}",
            circuit.even_layer().len(),
            fused.len(),
            (1.0 - overlap).norm()
        );
    }
    Ok(())
}
