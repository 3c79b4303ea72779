//! Dense reference implementations used as oracles. Nothing here goes
//! through the sharded kernel: operators are lifted with explicit Kronecker
//! products or index arithmetic and applied as plain matrices.
#![allow(dead_code)]

use floquet_shard::linalg::{ComplexMatrix, SeededRng};
use floquet_shard::model::FloquetCircuit;
use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `I_{2^(k-1)} ⊗ op ⊗ I_{2^(n-k-1)}` for a two-qubit `op` on `(k, k+1)`.
pub fn lift_bond(op: &ComplexMatrix, k: usize, n: usize) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << (k - 1));
    let right = ComplexMatrix::identity(1 << (n - k - 1));
    left.kron(op).kron(&right)
}

/// Full matrix of `op` acting on arbitrary 1-based `targets` (first target
/// is the most significant bit of `op`'s index), built entry by entry.
pub fn lift_general(op: &ComplexMatrix, targets: &[usize], n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let k = targets.len();
    let bit = |index: usize, qubit: usize| (index >> (n - qubit)) & 1;
    let sub = |index: usize| targets.iter().fold(0usize, |acc, &q| (acc << 1) | bit(index, q));
    let mask: usize = targets.iter().map(|&q| 1usize << (n - q)).sum();
    let mut m = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            if r & !mask == c & !mask {
                m[(r, c)] = op[(sub(r), sub(c))];
            }
        }
        debug_assert!(k <= n);
    }
    m
}

/// `exp(-iHθ)` by scaling and squaring a 40-term Taylor series.
pub fn taylor_expm(h: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let norm = h.frobenius_norm() * theta.abs();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let step = theta / f64::from(1u32 << squarings);
    let a = h.scaled(Complex64::new(0.0, -step));
    let dim = h.dim();
    let mut term = ComplexMatrix::identity(dim);
    let mut sum = ComplexMatrix::identity(dim);
    for j in 1..=40 {
        term = term.matmul(&a).scaled(Complex64::new(1.0 / j as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// `U_F = U_odd U_even`, each bond unitary from the Taylor oracle.
pub fn dense_floquet(circuit: &FloquetCircuit) -> ComplexMatrix {
    let n = circuit.num_qubits();
    let t = circuit.period();
    let layer = |parity: usize| {
        circuit
            .bonds()
            .iter()
            .filter(|b| b.bond() % 2 == parity)
            .fold(ComplexMatrix::identity(1 << n), |acc, b| {
                lift_bond(&taylor_expm(b.matrix(), t), b.bond(), n).matmul(&acc)
            })
    };
    layer(1).matmul(&layer(0))
}

pub fn dense_hbar(circuit: &FloquetCircuit) -> ComplexMatrix {
    let n = circuit.num_qubits();
    circuit.bonds().iter().fold(ComplexMatrix::zeros(1 << n), |acc, b| {
        acc.add(&lift_bond(b.matrix(), b.bond(), n))
    })
}

/// `(I_a ⊗ op ⊗ I_b) ψ` without forming the matrix: view `ψ` as an
/// `a × 4 × b` array and contract the middle index.
pub fn apply_bond_dense(op: &ComplexMatrix, k: usize, n: usize, psi: &[Complex64]) -> Vec<Complex64> {
    let b = 1usize << (n - k - 1);
    let a = 1usize << (k - 1);
    let mut out = vec![ZERO; psi.len()];
    for i in 0..a {
        for r in 0..4 {
            for c in 0..4 {
                let w = op[(r, c)];
                if w == ZERO {
                    continue;
                }
                for j in 0..b {
                    out[(i * 4 + r) * b + j] += w * psi[(i * 4 + c) * b + j];
                }
            }
        }
    }
    out
}

/// `H̄ ψ` through Kronecker-structured bond actions.
pub fn apply_hbar_dense(circuit: &FloquetCircuit, psi: &[Complex64]) -> Vec<Complex64> {
    let n = circuit.num_qubits();
    let mut out = vec![ZERO; psi.len()];
    for bond in circuit.bonds() {
        for (o, v) in out.iter_mut().zip(apply_bond_dense(bond.matrix(), bond.bond(), n, psi)) {
            *o += v;
        }
    }
    out
}

/// `tr(H̄²) / 2^L`, summing `||H̄ e_b||²` over basis columns.
pub fn infinite_temperature_variance(circuit: &FloquetCircuit) -> f64 {
    let dim = 1usize << circuit.num_qubits();
    let mut e = vec![ZERO; dim];
    let mut total = 0.0;
    for col in 0..dim {
        e[col] = ONE;
        total += norm_sqr(&apply_hbar_dense(circuit, &e));
        e[col] = ZERO;
    }
    total / dim as f64
}

/// `exp(-iHt) ψ` by Taylor steps with `||H|| dt <= 0.25` (`H` given by its action).
pub fn taylor_propagate(
    apply_h: impl Fn(&[Complex64]) -> Vec<Complex64>,
    h_norm: f64,
    psi: &[Complex64],
    t: f64,
) -> Vec<Complex64> {
    let steps = ((h_norm * t.abs()) / 0.25).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut state = psi.to_vec();
    for _ in 0..steps {
        let mut term = state.clone();
        let mut sum = state.clone();
        for j in 1..=30 {
            let applied = apply_h(&term);
            let factor = Complex64::new(0.0, -dt / j as f64);
            term = applied.into_iter().map(|z| z * factor).collect();
            for (s, x) in sum.iter_mut().zip(&term) {
                *s += x;
            }
            if norm_sqr(&term) < 1e-40 {
                break;
            }
        }
        state = sum;
    }
    state
}

pub fn matvec(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let dim = m.dim();
    (0..dim).map(|r| (0..dim).map(|c| m[(r, c)] * v[c]).sum()).collect()
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = SeededRng::new(seed);
    let v: Vec<Complex64> = (0..1usize << n).map(|_| rng.complex_normal()).collect();
    let norm = norm_sqr(&v).sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_unit_vector(len: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..len).map(|_| rng.complex_normal()).collect();
    let norm = norm_sqr(&v).sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-ish 4x4 unitary: exponential of a sampled bond.
pub fn random_two_qubit_unitary(rng: &mut SeededRng) -> ComplexMatrix {
    taylor_expm(&floquet_shard::linalg::sample_gue_bond(rng), 1.3)
}

pub fn widen(v: &[num_complex::Complex<f32>]) -> Vec<Complex64> {
    v.iter().map(|z| Complex64::new(z.re as f64, z.im as f64)).collect()
}

pub fn narrow(v: &[Complex64]) -> Vec<num_complex::Complex<f32>> {
    v.iter()
        .map(|z| num_complex::Complex::new(z.re as f32, z.im as f32))
        .collect()
}
