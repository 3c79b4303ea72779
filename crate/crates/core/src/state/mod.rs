//! The distributed wavefunction.
//!
//! A `2^L` amplitude vector split over `2^Ng` shards by the value of the
//! leading `Ng` qubits. Each shard is driven by its own task; shards interact
//! only through [`collective`]: a fixed-order all-reduce for scalars and
//! pairwise block exchange for moving amplitudes between shards.
//!
//! Gates on local qubits run independently on every shard. A gate touching a
//! global qubit first swaps that qubit with a free local one (a block
//! exchange), then runs locally. The swap is not undone: the state keeps a
//! [`QubitOrder`] recording where each logical qubit lives, and only
//! operations that need the canonical order pay to restore it.

pub mod collective;
mod dump;
mod fusion;
mod gate;
mod kernel;
mod layout;
mod precision;
mod workspace;

use num_complex::{Complex, Complex64};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub use dump::{read_dump, DUMP_HEADER_LEN};
pub use fusion::{fuse_layer, MAX_FUSION_WINDOW, MIN_FUSION_WINDOW};
pub use gate::{GateBlock, UNITARY_TOL};
pub use layout::{QubitOrder, ShardLayout, MAX_QUBITS};
pub use precision::{Precision, Real};
pub use workspace::{Workspace, SCRATCH_STATES};

/// Tolerance on the norm of each factor passed to [`ShardedState::product_state`].
pub const FACTOR_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ShardedState<T: Real> {
    layout: ShardLayout,
    order: QubitOrder,
    shards: Vec<Vec<Complex<T>>>,
}

impl<T: Real> ShardedState<T> {
    pub fn zeros(layout: ShardLayout) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self {
            layout,
            order: QubitOrder::identity(layout.num_qubits()),
            shards: vec![vec![zero; layout.local_len()]; layout.shard_count()],
        }
    }

    /// Computational basis state from a string of `0`/`1`, qubit 1 first.
    pub fn basis_state(layout: ShardLayout, bits: &str) -> Result<Self> {
        if bits.len() != layout.num_qubits() {
            return Err(Error::Dimension(format!(
                "bitstring has {} bits, layout has {} qubits",
                bits.len(),
                layout.num_qubits()
            )));
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(Error::Dimension(format!("invalid bit character {other:?}"))),
                };
        }
        let mut state = Self::zeros(layout);
        let local = layout.num_local();
        state.shards[index >> local][index & (layout.local_len() - 1)] = Complex::new(T::one(), T::zero());
        Ok(state)
    }

    /// Product of two-qubit factors on pairs (1,2), (3,4), …, (L-1,L).
    ///
    /// Each factor is a unit 4-vector indexed by the pair's two bits, the
    /// lower-numbered qubit being the more significant one.
    pub fn product_state(layout: ShardLayout, factors: &[Vec<Complex64>]) -> Result<Self> {
        let n = layout.num_qubits();
        if !n.is_multiple_of(2) {
            return Err(Error::Dimension(format!("pair product state needs even L, got {n}")));
        }
        if factors.len() != n / 2 {
            return Err(Error::Dimension(format!(
                "{} factors for {} qubit pairs",
                factors.len(),
                n / 2
            )));
        }
        for (p, f) in factors.iter().enumerate() {
            if f.len() != 4 {
                return Err(Error::Dimension(format!("factor {p} has length {}", f.len())));
            }
            let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > FACTOR_NORM_TOL {
                return Err(Error::Dimension(format!("factor {p} has norm {norm}, expected 1")));
            }
        }
        let local = layout.num_local();
        let mut state = Self::zeros(layout);
        state.shards.par_iter_mut().enumerate().for_each(|(s, shard)| {
            for (i, amp) in shard.iter_mut().enumerate() {
                let index = (s << local) | i;
                let mut z = Complex64::new(1.0, 0.0);
                for (p, f) in factors.iter().enumerate() {
                    z *= f[(index >> (n - 2 - 2 * p)) & 3];
                }
                *amp = T::complex(z);
            }
        });
        Ok(state)
    }

    /// Builds a state from amplitudes in canonical order.
    pub fn from_amplitudes(layout: ShardLayout, amplitudes: &[Complex<T>]) -> Result<Self> {
        if amplitudes.len() != layout.total_len() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a {}-qubit layout",
                amplitudes.len(),
                layout.num_qubits()
            )));
        }
        Ok(Self {
            layout,
            order: QubitOrder::identity(layout.num_qubits()),
            shards: amplitudes.chunks_exact(layout.local_len()).map(<[_]>::to_vec).collect(),
        })
    }

    pub fn layout(&self) -> ShardLayout {
        self.layout
    }

    pub fn order(&self) -> &QubitOrder {
        &self.order
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    /// Raw shard contents in physical order.
    pub fn shards(&self) -> &[Vec<Complex<T>>] {
        &self.shards
    }

    /// Amplitude of a logical basis index (qubit 1 = most significant bit).
    pub fn amplitude(&self, logical: usize) -> Complex<T> {
        let n = self.layout.num_qubits();
        let phys = self.order.physical_index(logical, n);
        let local = self.layout.num_local();
        self.shards[phys >> local][phys & (self.layout.local_len() - 1)]
    }

    /// All amplitudes in canonical logical order.
    pub fn to_amplitudes(&self) -> Vec<Complex<T>> {
        (0..self.layout.total_len()).map(|b| self.amplitude(b)).collect()
    }

    /// Copies `other` into `self`, reusing the allocation.
    pub fn copy_from(&mut self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        self.order = other.order.clone();
        for (dst, src) in self.shards.iter_mut().zip(&other.shards) {
            dst.copy_from_slice(src);
        }
        Ok(())
    }

    pub fn fill_zero(&mut self) {
        let zero = Complex::new(T::zero(), T::zero());
        self.shards.par_iter_mut().for_each(|s| s.fill(zero));
    }

    /// Applies a gate in place.
    ///
    /// Global targets are first swapped into free local slots. When the
    /// gate has more targets than there are free local slots, the shards
    /// sharing all non-target global bits pool their blocks, apply the gate
    /// on the combined block and take back their own part.
    pub fn apply_gate(&mut self, gate: &GateBlock) -> Result<()> {
        let n = self.layout.num_qubits();
        if let Some(&t) = gate.targets().iter().find(|&&t| t > n) {
            return Err(Error::Gate(format!("target qubit {t} outside 1..={n}")));
        }
        let matrix = to_precision::<T>(gate.matrix());
        let mut slots: Vec<usize> = gate.targets().iter().map(|&t| self.order.slot_of(t - 1)).collect();
        let global: Vec<usize> = slots
            .iter()
            .copied()
            .filter(|&s| self.layout.is_global_slot(s))
            .collect();
        if !global.is_empty() {
            // Free local slots, least significant first.
            let free: Vec<usize> = (self.layout.num_global()..n)
                .rev()
                .filter(|s| !slots.contains(s))
                .collect();
            if free.len() < global.len() {
                self.apply_pooled(&slots, &matrix);
                return Ok(());
            }
            for (&g, &l) in global.iter().zip(&free) {
                self.exchange_slots(g, l);
            }
            slots = gate.targets().iter().map(|&t| self.order.slot_of(t - 1)).collect();
        }
        let bits: Vec<usize> = slots.iter().map(|&s| self.layout.local_bit(s)).collect();
        self.shards
            .par_iter_mut()
            .for_each(|shard| kernel::apply_matrix(shard, &bits, &matrix));
        Ok(())
    }

    fn apply_pooled(&mut self, slots: &[usize], matrix: &[Complex<T>]) {
        let layout = self.layout;
        let local = layout.num_local();
        let global_bits: Vec<usize> = slots
            .iter()
            .filter(|&&s| layout.is_global_slot(s))
            .map(|&s| layout.shard_bit(s))
            .collect();
        let m = global_bits.len();
        // Pooled index: member pattern (first global target most significant)
        // above the in-shard index.
        let mut next_global = 0;
        let bits: Vec<usize> = slots
            .iter()
            .map(|&s| {
                if layout.is_global_slot(s) {
                    next_global += 1;
                    local + (m - next_global)
                } else {
                    layout.local_bit(s)
                }
            })
            .collect();
        let mask: usize = global_bits.iter().map(|b| 1 << b).sum();
        for base in (0..layout.shard_count()).filter(|s| s & mask == 0) {
            let members: Vec<usize> = (0..1usize << m)
                .map(|p| {
                    base | global_bits
                        .iter()
                        .enumerate()
                        .map(|(j, &b)| ((p >> (m - 1 - j)) & 1) << b)
                        .sum::<usize>()
                })
                .collect();
            let mut pooled = Vec::with_capacity(layout.local_len() << m);
            for &s in &members {
                pooled.extend_from_slice(&self.shards[s]);
            }
            kernel::apply_matrix(&mut pooled, &bits, matrix);
            for (&s, part) in members.iter().zip(pooled.chunks_exact(layout.local_len())) {
                self.shards[s].copy_from_slice(part);
            }
        }
    }

    /// Exchanges the roles of global and local slots (1-based slot numbers).
    ///
    /// The logical state is unchanged; only where amplitudes live moves.
    pub fn swap_global_local(&mut self, pairs: &[(usize, usize)]) -> Result<()> {
        let n = self.layout.num_qubits();
        let ng = self.layout.num_global();
        let mut seen = Vec::new();
        let mut resolved = Vec::new();
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::Swap(format!("slot pair ({a}, {b}) outside 1..={n}")));
            }
            let (g, l) = if a <= ng { (a, b) } else { (b, a) };
            if g > ng || l <= ng {
                return Err(Error::Swap(format!(
                    "pair ({a}, {b}) must join one global slot (<= {ng}) and one local slot"
                )));
            }
            if seen.contains(&g) || seen.contains(&l) {
                return Err(Error::Swap(format!("slot pairs overlap at ({a}, {b})")));
            }
            seen.extend([g, l]);
            resolved.push((g - 1, l - 1));
        }
        for (g, l) in resolved {
            self.exchange_slots(g, l);
        }
        Ok(())
    }

    fn exchange_slots(&mut self, global_slot: usize, local_slot: usize) {
        collective::exchange_blocks(
            &mut self.shards,
            self.layout.shard_bit(global_slot),
            self.layout.local_bit(local_slot),
        );
        self.order.swap_slots(global_slot, local_slot);
    }

    /// Restores the identity qubit order.
    pub fn canonicalize(&mut self) {
        self.align_to(&QubitOrder::identity(self.layout.num_qubits()));
    }

    /// Moves amplitudes so that `self.order() == target`.
    pub fn align_to(&mut self, target: &QubitOrder) {
        if &self.order == target {
            return;
        }
        let layout = self.layout;
        for g in 0..layout.num_global() {
            let want = target.qubit_at(g);
            let cur = self.order.slot_of(want);
            if cur == g {
                continue;
            }
            if layout.is_global_slot(cur) {
                collective::exchange_shards(&mut self.shards, layout.shard_bit(g), layout.shard_bit(cur));
                self.order.swap_slots(g, cur);
            } else {
                self.exchange_slots(g, cur);
            }
        }
        if &self.order != target {
            self.permute_local(target);
        }
    }

    fn permute_local(&mut self, target: &QubitOrder) {
        let layout = self.layout;
        // For every local bit of the current layout, the bit it moves to.
        let moves: Vec<(usize, usize)> = (layout.num_global()..layout.num_qubits())
            .map(|slot| {
                let q = self.order.qubit_at(slot);
                (layout.local_bit(slot), layout.local_bit(target.slot_of(q)))
            })
            .collect();
        self.shards.par_iter_mut().for_each(|shard| {
            let src = shard.clone();
            for (i, &z) in src.iter().enumerate() {
                let j: usize = moves.iter().map(|&(from, to)| ((i >> from) & 1) << to).sum();
                shard[j] = z;
            }
        });
        self.order = target.clone();
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout || self.order != other.order {
            return Err(Error::LayoutMismatch);
        }
        Ok(())
    }

    /// `<self|other>`: per-shard partial sums in double precision, then a
    /// fixed-order all-reduce.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let partials: Vec<Complex64> = self
            .shards
            .par_iter()
            .zip(other.shards.par_iter())
            .map(|(a, b)| collective::local_dot(a, b))
            .collect();
        Ok(collective::all_reduce_sum(&partials))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner_product(self).expect("same state").re
    }

    /// `self += alpha * other`, shard by shard.
    pub fn axpy(&mut self, alpha: Complex64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        let a = T::complex(alpha);
        self.shards
            .par_iter_mut()
            .zip(other.shards.par_iter())
            .for_each(|(dst, src)| {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = *d + a * s;
                }
            });
        Ok(())
    }

    /// Little-endian dump in canonical order; see [`read_dump`].
    pub fn write_dump(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        dump::write(self, out)
    }
}

pub(crate) fn to_precision<T: Real>(m: &ComplexMatrix) -> Vec<Complex<T>> {
    m.as_slice().iter().map(|&z| T::complex(z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(l: usize, ng: usize) -> ShardLayout {
        ShardLayout::new(l, ng).unwrap()
    }

    fn one() -> Complex<f64> {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn basis_state_placement() {
        let s = ShardedState::<f32>::basis_state(layout(4, 2), "0000").unwrap();
        assert_eq!(s.shards()[0][0], Complex::new(1.0, 0.0));
        assert!(s.shards()[1..].iter().flatten().all(|z| z.norm() == 0.0));

        let s = ShardedState::<f64>::basis_state(layout(4, 2), "1010").unwrap();
        assert_eq!(s.shards()[2][2], one());
        assert_eq!(s.norm_sqr(), 1.0);
        assert!(ShardedState::<f64>::basis_state(layout(4, 2), "101").is_err());
    }

    #[test]
    fn product_of_basis_factors_is_basis_state() {
        let e0 = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let l = layout(6, 1);
        let p = ShardedState::<f64>::product_state(l, &vec![e0.clone(); 3]).unwrap();
        let b = ShardedState::<f64>::basis_state(l, "000000").unwrap();
        assert_eq!(p, b);

        let mut bad = e0.clone();
        bad[1] = Complex64::new(0.01, 0.0);
        assert!(ShardedState::<f64>::product_state(l, &[e0.clone(), e0.clone(), bad]).is_err());
        assert!(ShardedState::<f64>::product_state(layout(5, 0), &[e0.clone(), e0]).is_err());
    }

    #[test]
    fn xx_on_global_qubits() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let xx = GateBlock::unitary(vec![1, 2], x.kron(&x)).unwrap();
        let mut s = ShardedState::<f64>::basis_state(layout(6, 2), "000000").unwrap();
        s.apply_gate(&xx).unwrap();
        assert_eq!(s.amplitude(0b110000), one());
        assert!(!s.order().is_identity());
        s.canonicalize();
        assert!(s.order().is_identity());
        assert_eq!(s.shards()[3][0], one());
    }

    #[test]
    fn pooled_path_when_locals_run_out() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let xx = GateBlock::unitary(vec![1, 2], x.kron(&x)).unwrap();
        let mut s = ShardedState::<f64>::basis_state(layout(3, 3), "001").unwrap();
        s.apply_gate(&xx).unwrap();
        assert_eq!(s.amplitude(0b111), one());
        assert!(s.order().is_identity());
    }

    #[test]
    fn gate_errors() {
        let mut s = ShardedState::<f64>::zeros(layout(3, 0));
        let g = GateBlock::unitary(vec![2, 4], ComplexMatrix::identity(4)).unwrap();
        assert!(matches!(s.apply_gate(&g), Err(Error::Gate(_))));
    }

    #[test]
    fn swap_pair_validation() {
        let mut s = ShardedState::<f32>::zeros(layout(4, 2));
        assert!(s.swap_global_local(&[(1, 2)]).is_err());
        assert!(s.swap_global_local(&[(3, 4)]).is_err());
        assert!(s.swap_global_local(&[(1, 3), (2, 3)]).is_err());
        assert!(s.swap_global_local(&[(1, 5)]).is_err());
        assert!(s.swap_global_local(&[(4, 2)]).is_ok());
    }

    #[test]
    fn swap_keeps_logical_amplitudes() {
        let mut s = ShardedState::<f64>::basis_state(layout(4, 2), "1010").unwrap();
        s.swap_global_local(&[(1, 3)]).unwrap();
        // Qubits 1 and 3 are both 1, so the physical index is unchanged here;
        // swap a pair with differing bits too.
        s.swap_global_local(&[(2, 3)]).unwrap();
        assert_eq!(s.amplitude(0b1010), one());
        assert_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn orthogonal_basis_states() {
        let l = layout(5, 2);
        let a = ShardedState::<f32>::basis_state(l, "01101").unwrap();
        let b = ShardedState::<f32>::basis_state(l, "01100").unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(a.inner_product(&a).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mismatched_layouts_rejected() {
        let a = ShardedState::<f32>::zeros(layout(4, 1));
        let mut b = ShardedState::<f32>::zeros(layout(4, 2));
        assert!(matches!(a.inner_product(&b), Err(Error::LayoutMismatch)));
        assert!(matches!(
            b.axpy(Complex64::new(1.0, 0.0), &a),
            Err(Error::LayoutMismatch)
        ));
    }
}
