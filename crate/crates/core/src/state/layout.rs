use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register this crate will allocate.
pub const MAX_QUBITS: usize = 40;

/// Partition of a `2^L` amplitude vector over `2^Ng` shards.
///
/// Shard `s` holds every amplitude whose leading `Ng` bits (qubit 1 is the
/// most significant) spell `s` in binary; the remaining `L - Ng` bits index
/// the amplitude inside the shard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardLayout {
    num_qubits: usize,
    num_global: usize,
}

impl ShardLayout {
    pub fn new(num_qubits: usize, num_global: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Layout(format!("L = {num_qubits} outside 1..={MAX_QUBITS}")));
        }
        if num_global > num_qubits {
            return Err(Error::Layout(format!("Ng = {num_global} exceeds L = {num_qubits}")));
        }
        Ok(Self { num_qubits, num_global })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_global(&self) -> usize {
        self.num_global
    }

    pub fn num_local(&self) -> usize {
        self.num_qubits - self.num_global
    }

    pub fn shard_count(&self) -> usize {
        1 << self.num_global
    }

    pub fn local_len(&self) -> usize {
        1 << self.num_local()
    }

    pub fn total_len(&self) -> usize {
        1 << self.num_qubits
    }

    /// Whether a physical slot (0-based, 0 = most significant) is global.
    pub(crate) fn is_global_slot(&self, slot: usize) -> bool {
        slot < self.num_global
    }

    /// Bit of the shard index carrying a global slot.
    pub(crate) fn shard_bit(&self, slot: usize) -> usize {
        debug_assert!(self.is_global_slot(slot));
        self.num_global - 1 - slot
    }

    /// Bit of the in-shard index carrying a local slot.
    pub(crate) fn local_bit(&self, slot: usize) -> usize {
        debug_assert!(!self.is_global_slot(slot));
        self.num_qubits - 1 - slot
    }
}

/// Which physical slot each logical qubit currently occupies.
///
/// Starts as the identity. Gates on global qubits swap them into local
/// slots and leave them there until something needs the canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitOrder {
    slot_of: Vec<usize>,
    qubit_at: Vec<usize>,
}

impl QubitOrder {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            slot_of: (0..num_qubits).collect(),
            qubit_at: (0..num_qubits).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slot_of.iter().enumerate().all(|(q, &s)| q == s)
    }

    /// Physical slot of a 0-based logical qubit.
    pub fn slot_of(&self, qubit: usize) -> usize {
        self.slot_of[qubit]
    }

    /// Logical qubit stored in a physical slot.
    pub fn qubit_at(&self, slot: usize) -> usize {
        self.qubit_at[slot]
    }

    pub(crate) fn swap_slots(&mut self, a: usize, b: usize) {
        let (qa, qb) = (self.qubit_at[a], self.qubit_at[b]);
        self.qubit_at.swap(a, b);
        self.slot_of[qa] = b;
        self.slot_of[qb] = a;
    }

    /// Maps a canonical (logical) index to the physical index under this order.
    pub(crate) fn physical_index(&self, logical: usize, num_qubits: usize) -> usize {
        let mut phys = 0;
        for q in 0..num_qubits {
            let bit = (logical >> (num_qubits - 1 - q)) & 1;
            phys |= bit << (num_qubits - 1 - self.slot_of[q]);
        }
        phys
    }
}
