use super::{Real, ShardLayout, ShardedState};
use crate::error::{Error, Result};

/// Scratch states a driver-level operation may hold besides the primary
/// state, so three full wavefunctions bound peak memory.
pub const SCRATCH_STATES: usize = 2;

/// Bounded pool of scratch states sharing one layout.
///
/// Released states are kept and handed out again, so repeated observables
/// along a run do not reallocate.
#[derive(Debug)]
pub struct Workspace<T: Real> {
    layout: ShardLayout,
    capacity: usize,
    outstanding: usize,
    pool: Vec<ShardedState<T>>,
}

impl<T: Real> Workspace<T> {
    pub fn new(layout: ShardLayout) -> Self {
        Self::with_capacity(layout, SCRATCH_STATES)
    }

    pub fn with_capacity(layout: ShardLayout, capacity: usize) -> Self {
        Self {
            layout,
            capacity,
            outstanding: 0,
            pool: Vec::new(),
        }
    }

    pub fn layout(&self) -> ShardLayout {
        self.layout
    }

    pub fn available(&self) -> usize {
        self.capacity - self.outstanding
    }

    /// Hands out a scratch state. Its contents are unspecified.
    pub fn acquire(&mut self) -> Result<ShardedState<T>> {
        if self.outstanding == self.capacity {
            return Err(Error::ScratchExhausted {
                capacity: self.capacity,
            });
        }
        self.outstanding += 1;
        Ok(self.pool.pop().unwrap_or_else(|| ShardedState::zeros(self.layout)))
    }

    pub fn release(&mut self, state: ShardedState<T>) {
        debug_assert_eq!(state.layout(), self.layout);
        debug_assert!(self.outstanding > 0);
        self.outstanding -= 1;
        self.pool.push(state);
    }
}
