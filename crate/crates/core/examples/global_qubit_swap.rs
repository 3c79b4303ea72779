//! A gate on a global qubit forces an exchange of amplitudes between shards.
//! The logical state is unaffected; only the storage order changes.

use floquet_shard::linalg::ComplexMatrix;
use floquet_shard::state::GateBlock;
use floquet_shard::{ShardLayout, ShardedState};

fn main() -> floquet_shard::Result<()> {
    let layout = ShardLayout::new(4, 2)?;
    let mut psi = ShardedState::<f64>::basis_state(layout, "0000")?;
    let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])?;
    let xx = GateBlock::unitary(vec![1, 2], x.kron(&x))?;

    psi.apply_gate(&xx)?;
    println!("after XX on qubits 1,2 (both global):");
    for (s, shard) in psi.shards().iter().enumerate() {
        println!("  shard {s}: {:?}", shard.iter().map(|z| z.re).collect::<Vec<_>>());
    }
    for q in 0..4 {
        println!("  qubit {} stored in slot {}", q + 1, psi.order().slot_of(q) + 1);
    }

    psi.canonicalize();
    println!("canonical: amplitude of |1100> = {}", psi.amplitude(0b1100));

    // Explicit exchange of global slot 1 with local slot 4.
    psi.swap_global_local(&[(1, 4)])?;
    println!(
        "after swapping slots 1 and 4, |1100> still reads {}",
        psi.amplitude(0b1100)
    );
    Ok(())
}
