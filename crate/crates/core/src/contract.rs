//! The operation contract shared by every fillable-array backend.
//!
//! Indices are 1-based, `i` in `[1, n]`. An entry that has been neither
//! filled nor written since construction reads as 0.

use crate::arena::{CostMeter, WordArena};

/// A linear-time switch to naive mode, reported by backends that have one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConversionEvent {
    /// Blocks still in linked-list mode when the conversion started.
    pub remaining_blocks: usize,
}

pub trait FillableArray {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn read(&mut self, i: usize) -> u64;

    fn write(&mut self, i: usize, value: u64);

    fn fill(&mut self, value: u64);

    fn meter(&self) -> &CostMeter;

    /// Closes the access window of the operation just performed.
    fn end_op(&mut self) -> u64;

    /// The backing arena, for backends that live in one.
    fn arena(&self) -> Option<&WordArena> {
        None
    }

    /// Conversion events since the last drain.
    fn drain_events(&mut self) -> Vec<ConversionEvent> {
        Vec::new()
    }
}

#[inline]
pub(crate) fn check_index(i: usize, n: usize) {
    assert!(i >= 1 && i <= n, "index {i} outside [1, {n}]");
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("{backend} backend needs n >= {min}, got {n}")]
    TooSmall {
        backend: &'static str,
        n: usize,
        min: usize,
    },
    #[error("permutation domain {perm_n} does not match arena length {n}")]
    DomainMismatch { n: usize, perm_n: u64 },
}
