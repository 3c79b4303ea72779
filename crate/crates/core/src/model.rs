//! Random two-layer Floquet circuit on an open chain.
//!
//! Bond `k` couples qubits `k` and `k + 1` through a traceless Hermitian
//! 4x4 Hamiltonian `H_k` with Frobenius norm √2 (the energy unit). One
//! period applies `U_k = exp(-i H_k T)` on every even bond, then on every
//! odd bond. The energy observable is the time-averaged Hamiltonian
//! `H̄ = Σ_k H_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{eigh, expm_unitary, ground_state, sample_gue_bond, ComplexMatrix, SeededRng};
use crate::state::{fuse_layer, GateBlock, Real, ShardLayout, ShardedState, Workspace};

/// One two-qubit bond Hamiltonian, in units of J.
#[derive(Clone, Debug, PartialEq)]
pub struct BondHamiltonian {
    bond: usize,
    matrix: ComplexMatrix,
}

impl BondHamiltonian {
    /// Bond `k` acts on qubits `k, k + 1`. The matrix must be 4x4 Hermitian.
    pub fn new(bond: usize, matrix: ComplexMatrix) -> Result<Self> {
        if bond == 0 {
            return Err(Error::Model("bonds are numbered from 1".into()));
        }
        if matrix.dim() != 4 {
            return Err(Error::Model(format!(
                "bond Hamiltonian must be 4x4, got {}x{}",
                matrix.dim(),
                matrix.dim()
            )));
        }
        let asymmetry = matrix.hermiticity_defect();
        let norm = matrix.frobenius_norm();
        if asymmetry > crate::linalg::HERMITIAN_TOL * norm {
            return Err(Error::NotHermitian { asymmetry, norm });
        }
        Ok(Self { bond, matrix })
    }

    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn qubits(&self) -> [usize; 2] {
        [self.bond, self.bond + 1]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Frobenius norms of the single-qubit part `A⊗I + I⊗B` and of the
    /// remaining two-qubit interaction.
    pub fn interaction_split(&self) -> (f64, f64) {
        let h = &self.matrix;
        let mut a = ComplexMatrix::zeros(2);
        let mut b = ComplexMatrix::zeros(2);
        for x in 0..2 {
            for y in 0..2 {
                for k in 0..2 {
                    a[(x, y)] += h[(2 * x + k, 2 * y + k)] * 0.5;
                    b[(x, y)] += h[(2 * k + x, 2 * k + y)] * 0.5;
                }
            }
        }
        let id = ComplexMatrix::identity(2);
        // tr_2 and tr_1 both contain tr(H)/2 · I; remove it once.
        let shift = ComplexMatrix::identity(4).scaled(h.trace() * 0.25);
        let single = a.kron(&id).add(&id.kron(&b)).sub(&shift);
        (single.frobenius_norm(), h.sub(&single).frobenius_norm())
    }

    fn as_operator(&self) -> GateBlock {
        GateBlock::operator(self.qubits().to_vec(), self.matrix.clone()).expect("4x4 on two distinct qubits")
    }
}

/// Provenance record for a sampled bond list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub seed: u64,
    pub max_bonds: usize,
    /// SHA-256 over the bond matrices, little-endian `(re, im)` f64 pairs in row-major order.
    pub content_hash: String,
}

/// A single sample of bond Hamiltonians drawn from one seeded stream.
///
/// Bond `k` is always the `k`-th draw, so the list for a smaller `max_bonds`
/// is an exact prefix of the list for a larger one.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    seed: u64,
    bonds: Vec<BondHamiltonian>,
}

impl EnsembleSpec {
    pub fn from_bonds(seed: u64, bonds: Vec<BondHamiltonian>) -> Result<Self> {
        for (i, b) in bonds.iter().enumerate() {
            if b.bond() != i + 1 {
                return Err(Error::Model(format!(
                    "bond list entry {i} is labelled bond {}",
                    b.bond()
                )));
            }
        }
        Ok(Self { seed, bonds })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[BondHamiltonian] {
        &self.bonds
    }

    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for b in &self.bonds {
            for z in b.matrix.as_slice() {
                hasher.update(z.re.to_le_bytes());
                hasher.update(z.im.to_le_bytes());
            }
        }
        hasher.finalize().iter().map(|byte| format!("{byte:02x}")).collect()
    }

    pub fn manifest(&self) -> EnsembleManifest {
        EnsembleManifest {
            seed: self.seed,
            max_bonds: self.max_bonds(),
            content_hash: self.content_hash(),
        }
    }
}

pub fn build_ensemble(seed: u64, max_bonds: usize) -> Result<EnsembleSpec> {
    if max_bonds == 0 {
        return Err(Error::Model("max_bonds must be at least 1".into()));
    }
    let mut rng = SeededRng::new(seed);
    let bonds: Vec<BondHamiltonian> = (1..=max_bonds)
        .map(|k| BondHamiltonian {
            bond: k,
            matrix: sample_gue_bond(&mut rng),
        })
        .collect();
    for b in &bonds {
        let (single, interacting) = b.interaction_split();
        log::debug!(
            "bond {}: single-qubit norm {single:.3}, interaction norm {interacting:.3}",
            b.bond
        );
    }
    Ok(EnsembleSpec { seed, bonds })
}

/// The Floquet unitary of an `L`-qubit chain at frequency `ω`.
#[derive(Clone, Debug)]
pub struct FloquetCircuit {
    num_qubits: usize,
    period: f64,
    omega: f64,
    bonds: Vec<BondHamiltonian>,
    even_layer: Vec<GateBlock>,
    odd_layer: Vec<GateBlock>,
}

pub fn build_circuit(ensemble: &EnsembleSpec, num_qubits: usize, omega: f64) -> Result<FloquetCircuit> {
    if num_qubits < 2 || !num_qubits.is_multiple_of(2) {
        return Err(Error::Model(format!("L must be even and at least 2, got {num_qubits}")));
    }
    if num_qubits > ensemble.max_bonds() + 1 {
        return Err(Error::Model(format!(
            "L = {num_qubits} needs {} bonds, ensemble has {}",
            num_qubits - 1,
            ensemble.max_bonds()
        )));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Model(format!("omega must be positive, got {omega}")));
    }
    let period = std::f64::consts::TAU / omega;
    let bonds = ensemble.bonds()[..num_qubits - 1].to_vec();
    let gate = |b: &BondHamiltonian| -> Result<GateBlock> {
        GateBlock::unitary(b.qubits().to_vec(), expm_unitary(b.matrix(), period)?)
    };
    let even_layer = bonds
        .iter()
        .filter(|b| b.bond % 2 == 0)
        .map(gate)
        .collect::<Result<_>>()?;
    let odd_layer = bonds
        .iter()
        .filter(|b| b.bond % 2 == 1)
        .map(gate)
        .collect::<Result<_>>()?;
    Ok(FloquetCircuit {
        num_qubits,
        period,
        omega,
        bonds,
        even_layer,
        odd_layer,
    })
}

impl FloquetCircuit {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn bonds(&self) -> &[BondHamiltonian] {
        &self.bonds
    }

    pub fn even_layer(&self) -> &[GateBlock] {
        &self.even_layer
    }

    pub fn odd_layer(&self) -> &[GateBlock] {
        &self.odd_layer
    }

    /// Two-qubit gates per period, `L - 1`.
    pub fn gates_per_period(&self) -> u64 {
        (self.num_qubits - 1) as u64
    }

    /// One period in application order: even layer, then odd layer.
    pub fn period_gates(&self) -> Vec<GateBlock> {
        self.even_layer.iter().chain(&self.odd_layer).cloned().collect()
    }

    /// Gate sequence for one period (fused when `fusion > 2`) and its inverse.
    pub fn propagator(&self, fusion: usize) -> Result<Propagator> {
        let forward = fuse_layer(&self.period_gates(), fusion)?;
        let backward = forward.iter().rev().map(GateBlock::adjoint).collect();
        Ok(Propagator { forward, backward })
    }
}

/// Ready-to-apply gate lists for `U_F` and `U_F†`.
#[derive(Clone, Debug)]
pub struct Propagator {
    forward: Vec<GateBlock>,
    backward: Vec<GateBlock>,
}

impl Propagator {
    pub fn forward(&self) -> &[GateBlock] {
        &self.forward
    }

    pub fn apply_period<T: Real>(&self, state: &mut ShardedState<T>) -> Result<()> {
        self.forward.iter().try_for_each(|g| state.apply_gate(g))
    }

    pub fn apply_period_adjoint<T: Real>(&self, state: &mut ShardedState<T>) -> Result<()> {
        self.backward.iter().try_for_each(|g| state.apply_gate(g))
    }
}

/// Product of the odd-bond ground states, `⊗_{k odd} |gs(H_k)>`.
pub fn initial_state<T: Real>(circuit: &FloquetCircuit, layout: ShardLayout) -> Result<ShardedState<T>> {
    if layout.num_qubits() != circuit.num_qubits {
        return Err(Error::Model(format!(
            "layout has {} qubits, circuit has {}",
            layout.num_qubits(),
            circuit.num_qubits
        )));
    }
    let factors: Vec<Vec<Complex64>> = circuit
        .bonds
        .iter()
        .filter(|b| b.bond % 2 == 1)
        .map(|b| ground_state(b.matrix()))
        .collect::<Result<_>>()?;
    ShardedState::product_state(layout, &factors)
}

/// Lowest eigenvalue of each odd bond.
pub fn odd_bond_ground_energies(circuit: &FloquetCircuit) -> Result<Vec<f64>> {
    circuit
        .bonds
        .iter()
        .filter(|b| b.bond % 2 == 1)
        .map(|b| Ok(eigh(b.matrix())?.eigenvalues[0]))
        .collect()
}

/// `H̄ ψ`, accumulated bond by bond. The result is taken from `workspace`
/// (hand it back with [`Workspace::release`]); one more scratch state is
/// borrowed while it runs.
pub fn apply_hbar<T: Real>(
    psi: &ShardedState<T>,
    circuit: &FloquetCircuit,
    workspace: &mut Workspace<T>,
) -> Result<ShardedState<T>> {
    let mut phi = workspace.acquire()?;
    let mut scratch = match workspace.acquire() {
        Ok(s) => s,
        Err(e) => {
            workspace.release(phi);
            return Err(e);
        }
    };
    phi.copy_from(psi)?;
    phi.fill_zero();
    let one = Complex64::new(1.0, 0.0);
    let result = circuit.bonds.iter().try_for_each(|b| {
        scratch.copy_from(psi)?;
        scratch.apply_gate(&b.as_operator())?;
        scratch.align_to(psi.order());
        phi.axpy(one, &scratch)
    });
    workspace.release(scratch);
    match result {
        Ok(()) => Ok(phi),
        Err(e) => {
            workspace.release(phi);
            Err(e)
        }
    }
}

/// Mean and spread of `H̄` in a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyStats {
    pub energy: f64,
    pub sigma: f64,
    /// The raw variance came out negative and was clamped to zero.
    pub clamped: bool,
}

/// `E = Re<ψ|H̄ψ>`, `σ_E = sqrt(max(0, <H̄ψ|H̄ψ> - E²))`, on the raw
/// (unnormalised) state.
pub fn energy_and_variance<T: Real>(
    psi: &ShardedState<T>,
    circuit: &FloquetCircuit,
    workspace: &mut Workspace<T>,
) -> Result<EnergyStats> {
    let phi = apply_hbar(psi, circuit, workspace)?;
    let energy = psi.inner_product(&phi)?.re;
    let second = phi.norm_sqr();
    workspace.release(phi);
    let variance = second - energy * energy;
    let clamped = variance < 0.0;
    if clamped {
        log::warn!("negative energy variance {variance:e} clamped to zero");
    }
    Ok(EnergyStats {
        energy,
        sigma: variance.max(0.0).sqrt(),
        clamped,
    })
}
