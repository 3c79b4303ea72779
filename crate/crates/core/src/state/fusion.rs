use super::{kernel, GateBlock};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const MIN_FUSION_WINDOW: usize = 2;
pub const MAX_FUSION_WINDOW: usize = 12;

struct Pending {
    /// Sorted ascending.
    targets: Vec<usize>,
    members: Vec<usize>,
}

/// Multiplies gates that fit in a window of `window` consecutive qubits into
/// single blocks. The result applies the same operator as `gates` in order.
///
/// A gate joins an earlier block when every block after that one acts on
/// disjoint qubits, so it commutes past them. `window == 2` leaves the list
/// untouched.
pub fn fuse_layer(gates: &[GateBlock], window: usize) -> Result<Vec<GateBlock>> {
    if !(MIN_FUSION_WINDOW..=MAX_FUSION_WINDOW).contains(&window) {
        return Err(Error::Gate(format!(
            "fusion window {window} outside {MIN_FUSION_WINDOW}..={MAX_FUSION_WINDOW}"
        )));
    }
    if window == MIN_FUSION_WINDOW {
        return Ok(gates.to_vec());
    }

    let mut blocks: Vec<Pending> = Vec::new();
    for (gi, gate) in gates.iter().enumerate() {
        let latest_overlap = blocks
            .iter()
            .rposition(|b| gate.targets().iter().any(|t| b.targets.contains(t)));
        let start = latest_overlap.unwrap_or(0);
        let fits = |b: &Pending| {
            let lo = gate.span().0.min(b.targets[0]);
            let hi = gate.span().1.max(*b.targets.last().unwrap());
            hi - lo < window
        };
        match (start..blocks.len()).find(|&i| fits(&blocks[i])) {
            Some(i) => {
                let b = &mut blocks[i];
                for &t in gate.targets() {
                    if !b.targets.contains(&t) {
                        b.targets.push(t);
                    }
                }
                b.targets.sort_unstable();
                b.members.push(gi);
            }
            None => {
                let mut targets = gate.targets().to_vec();
                targets.sort_unstable();
                blocks.push(Pending {
                    targets,
                    members: vec![gi],
                });
            }
        }
    }

    Ok(blocks.into_iter().map(|b| build_block(gates, b)).collect())
}

fn build_block(gates: &[GateBlock], block: Pending) -> GateBlock {
    if let [only] = block.members[..] {
        return gates[only].clone();
    }
    let n = block.targets.len();
    let dim = 1usize << n;
    // Treat the row-major matrix as a 2n-qubit vector: row bits sit above
    // column bits, so a gate on row bits multiplies from the left.
    let mut entries = ComplexMatrix::identity(dim).as_slice().to_vec();
    let mut unitary = true;
    for &gi in &block.members {
        let gate = &gates[gi];
        unitary &= gate.is_unitary();
        let bits: Vec<usize> = gate
            .targets()
            .iter()
            .map(|t| {
                let pos = block.targets.iter().position(|u| u == t).unwrap();
                n + (n - 1 - pos)
            })
            .collect();
        kernel::apply_matrix::<f64>(&mut entries, &bits, gate.matrix().as_slice());
    }
    let matrix = ComplexMatrix::new(dim, entries).expect("power-of-two block");
    GateBlock::from_parts(block.targets, matrix, unitary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_unitary, sample_gue_bond, SeededRng};
    use crate::state::{ShardLayout, ShardedState};

    fn random_gates(pairs: &[[usize; 2]], seed: u64) -> Vec<GateBlock> {
        let mut rng = SeededRng::new(seed);
        pairs
            .iter()
            .map(|p| {
                let u = expm_unitary(&sample_gue_bond(&mut rng), 0.7).unwrap();
                GateBlock::unitary(p.to_vec(), u).unwrap()
            })
            .collect()
    }

    #[test]
    fn window_two_is_identity() {
        let gates = random_gates(&[[1, 2], [3, 4]], 1);
        assert_eq!(fuse_layer(&gates, 2).unwrap(), gates);
        assert!(fuse_layer(&gates, 1).is_err());
        assert!(fuse_layer(&gates, 13).is_err());
    }

    #[test]
    fn disjoint_pair_becomes_kronecker_product() {
        let gates = random_gates(&[[1, 2], [3, 4]], 2);
        let fused = fuse_layer(&gates, 4).unwrap();
        assert_eq!(fused.len(), 1);
        assert_eq!(fused[0].targets(), &[1, 2, 3, 4]);
        let want = gates[0].matrix().kron(gates[1].matrix());
        assert!(fused[0].matrix().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn overlapping_gates_multiply_in_order() {
        let gates = random_gates(&[[1, 2], [2, 3]], 3);
        let fused = fuse_layer(&gates, 3).unwrap();
        assert_eq!(fused.len(), 1);
        let id = ComplexMatrix::identity(2);
        let first = gates[0].matrix().kron(&id);
        let second = id.kron(gates[1].matrix());
        let want = second.matmul(&first);
        assert!(fused[0].matrix().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn fused_application_matches_sequential() {
        let pairs = [[2, 3], [4, 5], [6, 7], [1, 2], [3, 4], [5, 6], [7, 8]];
        let gates = random_gates(&pairs, 4);
        let layout = ShardLayout::new(8, 2).unwrap();
        let mut rng = SeededRng::new(9);
        let factors: Vec<Vec<num_complex::Complex64>> = (0..4)
            .map(|_| {
                let v: Vec<_> = (0..4).map(|_| rng.complex_normal()).collect();
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.into_iter().map(|z| z / n).collect()
            })
            .collect();
        let start = ShardedState::<f64>::product_state(layout, &factors).unwrap();
        let mut plain = start.clone();
        for g in &gates {
            plain.apply_gate(g).unwrap();
        }
        plain.canonicalize();
        for q in 3..=8 {
            let fused = fuse_layer(&gates, q).unwrap();
            assert!(fused.len() <= gates.len());
            assert!(fused.iter().all(|b| b.span().1 - b.span().0 < q));
            let mut s = start.clone();
            for g in &fused {
                s.apply_gate(g).unwrap();
            }
            s.canonicalize();
            let overlap = plain.inner_product(&s).unwrap();
            assert!((overlap - 1.0).norm() < 1e-12, "q = {q}: {overlap}");
        }
    }
}
