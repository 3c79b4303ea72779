//! Amplitude dump: `L: u32`, `Ng: u32`, precision tag `u32` (32 or 64), then
//! `2^L` amplitudes in canonical order as `(re, im)` pairs, all
//! little-endian. Meant for oracle comparisons on small registers.

use std::io::{Read, Write};

use num_complex::Complex;

use super::{Precision, Real, ShardLayout, ShardedState};
use crate::error::{Error, Result};

pub const DUMP_HEADER_LEN: usize = 12;

pub(super) fn write<T: Real>(state: &ShardedState<T>, out: &mut impl Write) -> std::io::Result<()> {
    let layout = state.layout();
    let mut buf = Vec::with_capacity(DUMP_HEADER_LEN + 2 * T::BYTES * layout.total_len());
    buf.extend_from_slice(&(layout.num_qubits() as u32).to_le_bytes());
    buf.extend_from_slice(&(layout.num_global() as u32).to_le_bytes());
    buf.extend_from_slice(&T::PRECISION.tag().to_le_bytes());
    for z in state.to_amplitudes() {
        z.re.write_le(&mut buf);
        z.im.write_le(&mut buf);
    }
    out.write_all(&buf)
}

/// Reads a dump written with precision `T`; the state comes back in
/// canonical order with the recorded `Ng`.
pub fn read_dump<T: Real>(input: &mut impl Read) -> Result<ShardedState<T>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|e| Error::io("<dump>", e))?;
    let bad = |reason: String| Error::Format {
        path: "<dump>".into(),
        reason,
    };
    if bytes.len() < DUMP_HEADER_LEN {
        return Err(bad("truncated header".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap());
    let (l, ng, tag) = (word(0) as usize, word(1) as usize, word(2));
    match Precision::from_tag(tag) {
        Some(p) if p == T::PRECISION => {}
        _ => return Err(bad(format!("precision tag {tag} does not match {}", T::PRECISION))),
    }
    let layout = ShardLayout::new(l, ng)?;
    let body = &bytes[DUMP_HEADER_LEN..];
    if body.len() != 2 * T::BYTES * layout.total_len() {
        return Err(bad(format!(
            "expected {} amplitude bytes, found {}",
            2 * T::BYTES * layout.total_len(),
            body.len()
        )));
    }
    let amps: Vec<Complex<T>> = body
        .chunks_exact(2 * T::BYTES)
        .map(|c| Complex::new(T::read_le(&c[..T::BYTES]), T::read_le(&c[T::BYTES..])))
        .collect();
    ShardedState::from_amplitudes(layout, &amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let layout = ShardLayout::new(3, 1).unwrap();
        let s = ShardedState::<f32>::basis_state(layout, "011").unwrap();
        let mut buf = Vec::new();
        s.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 12 + 8 * 8);
        assert_eq!(&buf[..12], &[3, 0, 0, 0, 1, 0, 0, 0, 32, 0, 0, 0]);
        // amplitude index 3 -> real part 1.0f32
        assert_eq!(&buf[12 + 3 * 8..12 + 3 * 8 + 4], &1.0f32.to_le_bytes());
        let back: ShardedState<f32> = read_dump(&mut buf.as_slice()).unwrap();
        assert_eq!(back, s);
        assert!(read_dump::<f64>(&mut buf.as_slice()).is_err());
    }
}
