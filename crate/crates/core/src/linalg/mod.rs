//! Small dense complex linear algebra for bond operators and fused gate
//! blocks. Everything here runs in double precision, whatever precision the
//! state vector uses.

mod eigen;
mod gue;
mod matrix;

pub use eigen::{eigh, expm_unitary, ground_state, EigenDecomposition, GROUND_GAP_TOL, HERMITIAN_TOL};
pub use gue::{sample_gue_bond, SeededRng, BOND_NORM, DRAWS_PER_BOND};
pub use matrix::ComplexMatrix;
