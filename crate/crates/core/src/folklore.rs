//! Folklore fillable array with delete, living in a sub-range of an arena.
//!
//! Layout for a region of logical length `m` starting at `base`:
//!
//! ```text
//! base+0        numActive
//! base+1        Δ_last
//! base+2+3t     A[t]   value
//! base+3+3t     B[t]   holds slot t+1 of the written-index stack
//! base+4+3t     C[t]   1-based slot of t in B, valid iff B[C[t]] = t
//! ```
//!
//! The region uses exactly `3m + 2` words. Because the three arrays are
//! interleaved, dropping the last index releases the last three words.

use crate::arena::{CostMeter, WordArena};
use crate::contract::{check_index, FillableArray};

const NUM_ACTIVE: usize = 0;
const LAST_FILL: usize = 1;

/// Handle over `[base, base + 3m + 2)` of some arena. Carries no state of its
/// own besides the placement, which the owner must be able to recompute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FolkloreRegion {
    base: usize,
    len: usize,
}

impl FolkloreRegion {
    /// Words needed for a region of logical length `m`.
    pub const fn words_for(m: usize) -> usize {
        3 * m + 2
    }

    /// Places a region without touching memory. Call [`fill`](Self::fill)
    /// before any other operation.
    pub fn attach(arena: &WordArena, base: usize, m: usize) -> Self {
        assert!(
            base + Self::words_for(m) <= arena.len(),
            "folklore region [{base}, {}) overflows arena of {} words",
            base + Self::words_for(m),
            arena.len()
        );
        FolkloreRegion { base, len: m }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// One past the last word the region may touch.
    pub fn end(&self) -> usize {
        self.base + Self::words_for(self.len)
    }

    #[inline]
    fn a(&self, t: usize) -> usize {
        self.base + 2 + 3 * t
    }

    /// Word holding stack slot `slot` (1-based).
    #[inline]
    fn b_slot(&self, slot: usize) -> usize {
        self.base + 3 + 3 * (slot - 1)
    }

    #[inline]
    fn c(&self, t: usize) -> usize {
        self.base + 4 + 3 * t
    }

    /// Returns the stack slot of `t` if `t` was written since the last fill.
    #[inline]
    fn active_slot(&self, arena: &mut WordArena, t: usize) -> Option<(usize, usize)> {
        let slot = arena.load(self.c(t));
        let active = arena.load(self.base + NUM_ACTIVE);
        if slot >= 1 && slot <= active && arena.load(self.b_slot(slot as usize)) == t as u64 {
            Some((slot as usize, active as usize))
        } else {
            None
        }
    }

    pub fn fill(&self, arena: &mut WordArena, value: u64) {
        arena.store(self.base + NUM_ACTIVE, 0);
        arena.store(self.base + LAST_FILL, value);
    }

    pub fn read(&self, arena: &mut WordArena, t: usize) -> u64 {
        assert!(t < self.len, "folklore read {t} outside length {}", self.len);
        match self.active_slot(arena, t) {
            Some(_) => arena.load(self.a(t)),
            None => arena.load(self.base + LAST_FILL),
        }
    }

    pub fn write(&self, arena: &mut WordArena, t: usize, value: u64) {
        assert!(t < self.len, "folklore write {t} outside length {}", self.len);
        arena.store(self.a(t), value);
        if self.active_slot(arena, t).is_none() {
            let slot = arena.load(self.base + NUM_ACTIVE) + 1;
            arena.store(self.base + NUM_ACTIVE, slot);
            arena.store(self.b_slot(slot as usize), t as u64);
            arena.store(self.c(t), slot);
        }
    }

    /// Drops the last logical index. Afterwards the region occupies
    /// `3(m-1) + 2` words and nothing past that is written again.
    pub fn delete(&mut self, arena: &mut WordArena) {
        assert!(self.len >= 1, "folklore delete on empty region");
        let t = self.len - 1;
        if let Some((slot, active)) = self.active_slot(arena, t) {
            if slot != active {
                // Move the top of the stack into the freed slot. Both words
                // touched lie below the shrunken end.
                let moved = arena.load(self.b_slot(active));
                arena.store(self.b_slot(slot), moved);
                arena.store(self.c(moved as usize), slot as u64);
            }
            arena.store(self.base + NUM_ACTIVE, active as u64 - 1);
        }
        self.len -= 1;
    }

    /// Unmetered count of active indices, for audits.
    pub fn peek_active(&self, arena: &WordArena) -> u64 {
        arena.peek(self.base + NUM_ACTIVE)
    }
}

/// A standalone folklore array: the region spans an arena of `3n + 2` words.
#[derive(Debug, Clone)]
pub struct FolkloreArray {
    arena: WordArena,
    region: FolkloreRegion,
}

impl FolkloreArray {
    /// Attaches over `arena` (possibly garbage) and fills with 0.
    pub fn new(arena: WordArena, n: usize) -> Self {
        let mut s = Self::attach(arena, n);
        s.region.fill(&mut s.arena, 0);
        s
    }

    /// Attaches to an arena that already holds a live structure.
    pub fn attach(arena: WordArena, n: usize) -> Self {
        let region = FolkloreRegion::attach(&arena, 0, n);
        FolkloreArray { arena, region }
    }

    pub fn region(&self) -> FolkloreRegion {
        self.region
    }

    pub fn into_arena(self) -> WordArena {
        self.arena
    }
}

impl FillableArray for FolkloreArray {
    fn len(&self) -> usize {
        self.region.len()
    }

    fn read(&mut self, i: usize) -> u64 {
        check_index(i, self.region.len());
        self.region.read(&mut self.arena, i - 1)
    }

    fn write(&mut self, i: usize, value: u64) {
        check_index(i, self.region.len());
        self.region.write(&mut self.arena, i - 1, value)
    }

    fn fill(&mut self, value: u64) {
        self.region.fill(&mut self.arena, value)
    }

    fn meter(&self) -> &CostMeter {
        self.arena.meter()
    }

    fn end_op(&mut self) -> u64 {
        self.arena.op_boundary()
    }

    fn arena(&self) -> Option<&WordArena> {
        Some(&self.arena)
    }
}
