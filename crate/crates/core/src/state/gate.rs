use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest `||U†U - I||_F` accepted for a gate flagged unitary. Gate
/// matrices are stored in double precision whatever the state precision.
pub const UNITARY_TOL: f64 = 1e-10;

/// A dense operator on an ordered list of qubits.
///
/// Qubits are 1-based, qubit 1 being the most significant bit of the
/// amplitude index. `targets[0]` is the most significant bit of the matrix
/// index. Non-unitary blocks carry Hamiltonian terms through the same
/// application kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct GateBlock {
    targets: Vec<usize>,
    matrix: ComplexMatrix,
    unitary: bool,
}

impl GateBlock {
    /// A unitary gate; rejects matrices further than [`UNITARY_TOL`] from unitary.
    pub fn unitary(targets: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_shape(&targets, &matrix)?;
        let deviation = matrix.unitarity_defect();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            targets,
            matrix,
            unitary: true,
        })
    }

    /// An arbitrary operator, e.g. one bond Hamiltonian.
    pub fn operator(targets: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_shape(&targets, &matrix)?;
        Ok(Self {
            targets,
            matrix,
            unitary: false,
        })
    }

    pub(crate) fn from_parts(targets: Vec<usize>, matrix: ComplexMatrix, unitary: bool) -> Self {
        debug_assert!(check_shape(&targets, &matrix).is_ok());
        Self {
            targets,
            matrix,
            unitary,
        }
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Conjugate transpose on the same targets.
    pub fn adjoint(&self) -> Self {
        Self {
            targets: self.targets.clone(),
            matrix: self.matrix.adjoint(),
            unitary: self.unitary,
        }
    }

    /// Smallest and largest target.
    pub fn span(&self) -> (usize, usize) {
        let lo = *self.targets.iter().min().expect("non-empty");
        let hi = *self.targets.iter().max().expect("non-empty");
        (lo, hi)
    }
}

fn check_shape(targets: &[usize], matrix: &ComplexMatrix) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::Gate("gate has no targets".into()));
    }
    if targets.contains(&0) {
        return Err(Error::Gate("qubit indices are 1-based; got 0".into()));
    }
    for (i, t) in targets.iter().enumerate() {
        if targets[..i].contains(t) {
            return Err(Error::Gate(format!("duplicate target qubit {t}")));
        }
    }
    if matrix.dim() != 1 << targets.len() {
        return Err(Error::Gate(format!(
            "{}x{} matrix on {} targets",
            matrix.dim(),
            matrix.dim(),
            targets.len()
        )));
    }
    Ok(())
}
