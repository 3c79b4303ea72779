use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Minimum ground-state gap accepted by [`ground_state`].
pub const GROUND_GAP_TOL: f64 = 1e-8;

/// Spectral decomposition `H = V diag(λ) V†` with ascending `λ`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        let n = self.eigenvalues.len();
        (0..n).map(|r| self.eigenvectors[(r, j)]).collect()
    }

    /// Rebuilds `V f(λ) V†` for a scalar function of the spectrum.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, w) in weights.iter().enumerate() {
                    acc += v[(r, j)] * w * v[(c, j)].conj();
                }
                out[(r, c)] = acc;
            }
        }
        out
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let norm = h.frobenius_norm();
    let asymmetry = h.hermiticity_defect();
    if asymmetry > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian { asymmetry, norm });
    }
    let n = h.dim();
    // Feed the solver the exactly Hermitian part.
    let sym = DMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = eig.eigenvectors[(r, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(-i θ H)` for Hermitian `H`, via the spectral decomposition.
pub fn expm_unitary(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(eig.reconstruct_with(|lambda| Complex64::from_polar(1.0, -lambda * theta)))
}

/// Unit eigenvector of the lowest eigenvalue.
///
/// The phase is fixed so that the largest-magnitude component is real and
/// positive; ties go to the lowest index.
pub fn ground_state(h: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let eig = eigh(h)?;
    if eig.eigenvalues.len() > 1 {
        let (lowest, next) = (eig.eigenvalues[0], eig.eigenvalues[1]);
        if next - lowest <= GROUND_GAP_TOL {
            return Err(Error::DegenerateGround {
                lowest,
                next,
                gap_tol: GROUND_GAP_TOL,
            });
        }
    }
    let mut v = eig.eigenvector(0);
    let mut pivot = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[pivot].norm() {
            pivot = i;
        }
    }
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot].im = 0.0;
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn diagonal_spectrum() {
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, -1.0, 0.0]);
        let eig = eigh(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 0.0, 0.0, 1.0]);
        // Eigenvectors of a diagonal matrix are standard basis vectors up to phase.
        for j in 0..4 {
            let nonzero: Vec<usize> = (0..4).filter(|&r| eig.eigenvectors[(r, j)].norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 1);
            assert!((eig.eigenvectors[(nonzero[0], j)].norm() - 1.0).abs() < 1e-14);
        }
        assert!(eig.eigenvectors[(2, 0)].norm() > 0.999);
        assert!(eig.eigenvectors[(1, 3)].norm() > 0.999);
    }

    #[test]
    fn pauli_x_tensor_identity() {
        let h = pauli_x().kron(&ComplexMatrix::identity(2));
        let eig = eigh(&h).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        match eigh(&m) {
            Err(Error::NotHermitian { asymmetry, .. }) => {
                assert!((asymmetry - 2f64.sqrt()).abs() < 1e-15)
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn expm_of_zero_and_diagonal() {
        let zero = ComplexMatrix::zeros(4);
        let u = expm_unitary(&zero, 1.7).unwrap();
        assert!(u.distance(&ComplexMatrix::identity(4)) < 1e-15);

        let lambdas = [-0.5, 0.25, 1.0, 2.0];
        let theta = 0.7;
        let u = expm_unitary(&ComplexMatrix::from_real_diagonal(&lambdas), theta).unwrap();
        let want: Vec<Complex64> = lambdas
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * theta))
            .collect();
        assert!(u.distance(&ComplexMatrix::from_diagonal(&want)) < 1e-14);
    }

    #[test]
    fn ground_state_of_diagonal() {
        let h = ComplexMatrix::from_real_diagonal(&[-1.0, 0.0, 0.0, 1.0]);
        let g = ground_state(&h).unwrap();
        assert_eq!(g[0], Complex64::new(1.0, 0.0));
        assert!(g[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn ground_state_degenerate_zz() {
        let zz = pauli_z().kron(&pauli_z()).scaled(Complex64::new(-1.0, 0.0));
        match ground_state(&zz) {
            Err(Error::DegenerateGround { lowest, next, .. }) => {
                assert!((lowest + 1.0).abs() < 1e-14 && (next + 1.0).abs() < 1e-14)
            }
            other => panic!("expected degeneracy error, got {other:?}"),
        }
    }

    #[test]
    fn ground_state_phase_convention() {
        // Ground state of -X is (1,1)/sqrt2; both components tie, so index 0 is the pivot.
        let h = pauli_x().scaled(Complex64::new(-1.0, 0.0));
        let g = ground_state(&h).unwrap();
        assert!(g[0].im == 0.0 && g[0].re > 0.0);
        assert!((g[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((g[1] - g[0]).norm() < 1e-14);
    }
}
