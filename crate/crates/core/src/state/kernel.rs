//! In-place application of a dense `2^k x 2^k` matrix to `k` bits of an
//! amplitude array.
//!
//! `bits[j]` is the array bit carrying the j-th gate target; target 0 is the
//! most significant bit of the matrix index. Each output amplitude depends
//! only on its own group of `2^k` inputs, so the result does not depend on
//! how groups are scheduled across threads.

use num_complex::Complex;
use rayon::prelude::*;

use super::precision::Real;

/// Below this many amplitudes per chunk the kernel stays on one thread.
const PAR_CHUNK: usize = 1 << 14;

pub(crate) fn apply_matrix<T: Real>(data: &mut [Complex<T>], bits: &[usize], matrix: &[Complex<T>]) {
    let k = bits.len();
    let dim = 1usize << k;
    assert_eq!(matrix.len(), dim * dim, "matrix does not match target count");
    assert!(data.len() >= dim && data.len().is_power_of_two());
    let top = *bits.iter().max().expect("at least one target");
    assert!(1usize << top < data.len(), "target bit outside array");

    let mut sorted = bits.to_vec();
    sorted.sort_unstable();
    let offsets: Vec<usize> = (0..dim)
        .map(|alpha| {
            bits.iter()
                .enumerate()
                .map(|(j, &b)| ((alpha >> (k - 1 - j)) & 1) << b)
                .sum()
        })
        .collect();

    // Chunks aligned to twice the highest target bit are independent.
    let chunk = (1usize << (top + 1)).max(PAR_CHUNK).min(data.len());
    let run = |block: &mut [Complex<T>]| match k {
        1 => apply_one(block, &sorted, &offsets, matrix),
        2 => apply_two(block, &sorted, &offsets, matrix),
        _ => apply_general(block, &sorted, &offsets, matrix),
    };
    if data.len() > chunk {
        data.par_chunks_mut(chunk).for_each(run);
    } else {
        run(data);
    }
}

#[inline]
fn group_base(mut g: usize, sorted_bits: &[usize]) -> usize {
    for &b in sorted_bits {
        g = ((g >> b) << (b + 1)) | (g & ((1 << b) - 1));
    }
    g
}

fn apply_one<T: Real>(data: &mut [Complex<T>], sorted: &[usize], off: &[usize], m: &[Complex<T>]) {
    let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
    for g in 0..data.len() >> 1 {
        let base = group_base(g, sorted);
        let (i0, i1) = (base + off[0], base + off[1]);
        let (a0, a1) = (data[i0], data[i1]);
        data[i0] = m00 * a0 + m01 * a1;
        data[i1] = m10 * a0 + m11 * a1;
    }
}

fn apply_two<T: Real>(data: &mut [Complex<T>], sorted: &[usize], off: &[usize], m: &[Complex<T>]) {
    let mm: [Complex<T>; 16] = m.try_into().expect("4x4 matrix");
    for g in 0..data.len() >> 2 {
        let base = group_base(g, sorted);
        let idx = [base + off[0], base + off[1], base + off[2], base + off[3]];
        let a = [data[idx[0]], data[idx[1]], data[idx[2]], data[idx[3]]];
        for r in 0..4 {
            let row = &mm[4 * r..4 * r + 4];
            data[idx[r]] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
        }
    }
}

fn apply_general<T: Real>(data: &mut [Complex<T>], sorted: &[usize], off: &[usize], m: &[Complex<T>]) {
    let dim = off.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut input = vec![zero; dim];
    for g in 0..data.len() >> sorted.len() {
        let base = group_base(g, sorted);
        for (x, &o) in input.iter_mut().zip(off) {
            *x = data[base + o];
        }
        for (r, &o) in off.iter().enumerate() {
            let row = &m[r * dim..(r + 1) * dim];
            let mut acc = zero;
            for (a, x) in row.iter().zip(&input) {
                acc = acc + a * x;
            }
            data[base + o] = acc;
        }
    }
}
