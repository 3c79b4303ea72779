//! Draws a seeded ensemble of GUE bond Hamiltonians and prints its
//! fingerprint and the spectrum of the first bond.

use floquet_shard::linalg::eigh;
use floquet_shard::model::build_ensemble;

fn main() -> floquet_shard::Result<()> {
    let ensemble = build_ensemble(7, 39)?;
    let manifest = ensemble.manifest();
    println!(
        "seed {} with {} bonds, sha256 {}",
        manifest.seed, manifest.max_bonds, manifest.content_hash
    );

    let first = &ensemble.bonds()[0];
    let spectrum = eigh(first.matrix())?.eigenvalues;
    println!("bond {} spectrum {:.4?}", first.bond(), spectrum);
    println!(
        "trace {:.2e}, |H|_F {:.4}",
        first.matrix().trace().norm(),
        first.matrix().frobenius_norm()
    );

    // Same seed, same bonds.
    assert_eq!(build_ensemble(7, 39)?.manifest(), manifest);
    Ok(())
}
