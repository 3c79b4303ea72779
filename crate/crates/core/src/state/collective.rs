//! The two cross-shard operations: a deterministic all-reduce and pairwise
//! block exchange. Shards never touch each other's memory any other way.

use num_complex::{Complex, Complex64};
use rayon::prelude::*;

use super::precision::Real;

/// Chunk length for the in-shard partial sums of an inner product.
pub(crate) const REDUCE_CHUNK: usize = 4096;

/// Sums values with a fixed binary tree over their indices:
/// `((v0 + v1) + (v2 + v3)) + ...`. The association order depends only on
/// the number of values, so every caller sees identical bits.
pub fn tree_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let half = n.next_power_of_two() / 2;
            tree_sum(&values[..half]) + tree_sum(&values[half..])
        }
    }
}

/// All-reduce of one partial value per shard. Every shard receives the
/// same scalar; in-process that is just the returned value.
pub fn all_reduce_sum(partials: &[Complex64]) -> Complex64 {
    tree_sum(partials)
}

/// `sum_i conj(a_i) b_i` accumulated in double precision over fixed chunks.
pub(crate) fn local_dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let partials: Vec<Complex64> = a
        .par_chunks(REDUCE_CHUNK)
        .zip(b.par_chunks(REDUCE_CHUNK))
        .map(|(x, y)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, q) in x.iter().zip(y) {
                acc += T::widen(*p).conj() * T::widen(*q);
            }
            acc
        })
        .collect();
    tree_sum(&partials)
}

/// Swaps the roles of one global slot and one local slot.
///
/// Shards `s` and `s | 1 << shard_bit` (with the bit clear in `s`) trade
/// equal halves: the entries of `s` whose `local_bit` is set go to the
/// partner's entries with that bit clear, and vice versa. Applying it twice
/// restores every shard bit-exactly.
pub(crate) fn exchange_blocks<T: Real>(shards: &mut [Vec<Complex<T>>], shard_bit: usize, local_bit: usize) {
    let stride = 1usize << shard_bit;
    let block = 1usize << local_bit;
    shards.par_chunks_mut(2 * stride).for_each(|group| {
        let (lower, upper) = group.split_at_mut(stride);
        for (a, b) in lower.iter_mut().zip(upper.iter_mut()) {
            for (ca, cb) in a.chunks_exact_mut(2 * block).zip(b.chunks_exact_mut(2 * block)) {
                ca[block..].swap_with_slice(&mut cb[..block]);
            }
        }
    });
}

/// Swaps two global slots by exchanging whole shards between partners.
pub(crate) fn exchange_shards<T>(shards: &mut [Vec<T>], bit_a: usize, bit_b: usize) {
    let (ma, mb) = (1usize << bit_a, 1usize << bit_b);
    for s in 0..shards.len() {
        if s & ma != 0 && s & mb == 0 {
            shards.swap(s, s ^ ma ^ mb);
        }
    }
}
