//! Plain array in an arena: O(1) read/write, O(n) fill, no redundancy used.
//! Baseline for comparisons and the fallback for small `n`.

use crate::arena::{CostMeter, WordArena};
use crate::contract::{check_index, FillableArray};

#[derive(Debug, Clone)]
pub struct TrivialArray {
    arena: WordArena,
}

impl TrivialArray {
    /// Zeroes the arena, which costs `n` stores.
    pub fn new(arena: WordArena) -> Self {
        let mut s = TrivialArray { arena };
        s.fill(0);
        s.arena.op_boundary();
        s
    }

    pub fn attach(arena: WordArena) -> Self {
        TrivialArray { arena }
    }

    pub fn into_arena(self) -> WordArena {
        self.arena
    }
}

impl FillableArray for TrivialArray {
    fn len(&self) -> usize {
        self.arena.len()
    }

    fn read(&mut self, i: usize) -> u64 {
        check_index(i, self.arena.len());
        self.arena.load(i - 1)
    }

    fn write(&mut self, i: usize, value: u64) {
        check_index(i, self.arena.len());
        self.arena.store(i - 1, value)
    }

    fn fill(&mut self, value: u64) {
        for w in 0..self.arena.len() {
            self.arena.store(w, value);
        }
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
