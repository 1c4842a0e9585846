//! Deterministic fillable array with one redundant bit and amortized O(1)
//! writes.
//!
//! In naive mode (mode bit set) word `i-1` holds `A[i]`. In linked-list mode
//! the arena starts with
//!
//! ```text
//! [0]                 Δ_last
//! [1]                 numActive
//! [2, 2+3h+2)         folklore region of h = ceil(n/50) list heads
//! [.., +4·(n/50))     node area, node slot s at node_base + 4s
//! [node_end, n)       unused
//! ```
//!
//! Block `j` holds indices `j·50+1 ..= (j+1)·50`; its list contains one
//! `(prev, next, i, value)` node per index written since the last fill.
//! Null links are the value `n`. The `n/50`-th distinct write after a fill
//! converts the whole arena back to naive mode in O(n), which is charged to
//! those writes.

use crate::arena::{CostMeter, WordArena};
use crate::contract::{check_index, BuildError, ConversionEvent, FillableArray};
use crate::folklore::FolkloreRegion;
use crate::lists::{Conversion, Lists, NODE_WORDS, VALUE};

pub const BLOCK_LEN: usize = 50;
pub const MIN_N: usize = 350;

const LAST_FILL: usize = 0;
const NUM_ACTIVE: usize = 1;
const HEADERS_BASE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    /// Number of blocks, `ceil(n / 50)`; the last one may be short.
    pub blocks: usize,
    /// Node capacity `floor(n / 50)`, which is also the conversion threshold.
    pub capacity: usize,
    pub node_base: usize,
    pub node_end: usize,
}

impl Layout {
    pub fn new(n: usize) -> Self {
        let blocks = n.div_ceil(BLOCK_LEN);
        let capacity = n / BLOCK_LEN;
        let node_base = HEADERS_BASE + FolkloreRegion::words_for(blocks);
        Layout {
            n,
            blocks,
            capacity,
            node_base,
            node_end: node_base + NODE_WORDS * capacity,
        }
    }

    /// First block whose index range lies entirely past the list structures.
    pub fn first_free_block(&self) -> usize {
        self.node_end.div_ceil(BLOCK_LEN)
    }
}

#[derive(Debug, Clone)]
pub struct AmortizedFillable {
    arena: WordArena,
    layout: Layout,
    lists: Lists,
    events: Vec<ConversionEvent>,
}

impl AmortizedFillable {
    /// Initializes over `arena`, whatever it holds, in O(1).
    pub fn new(arena: WordArena) -> Result<Self, BuildError> {
        let mut s = Self::attach(arena)?;
        s.fill(0);
        s.arena.op_boundary();
        Ok(s)
    }

    /// Resumes a structure already living in `arena`. Touches nothing.
    pub fn attach(arena: WordArena) -> Result<Self, BuildError> {
        let n = arena.len();
        if n < MIN_N {
            return Err(BuildError::TooSmall {
                backend: "amortized",
                n,
                min: MIN_N,
            });
        }
        let layout = Layout::new(n);
        let lists = Lists {
            headers: FolkloreRegion::attach(&arena, HEADERS_BASE, layout.blocks),
            null: n as u64,
            key_bias: 1,
            block_len: BLOCK_LEN,
        };
        Ok(AmortizedFillable {
            arena,
            layout,
            lists,
            events: Vec::new(),
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn into_arena(self) -> WordArena {
        self.arena
    }

    pub fn is_naive(&self) -> bool {
        self.arena.peek_mode_bit()
    }

    /// Unmetered count of active indices in linked-list mode.
    pub fn active_count(&self) -> u64 {
        self.arena.peek(NUM_ACTIVE)
    }

    fn convert(&mut self) {
        self.arena.set_mode_bit(true);
        let blank = self.arena.load(LAST_FILL);
        Conversion {
            lists: self.lists,
            blocks: self.layout.blocks,
            node_start: self.layout.node_base,
            count: self.layout.capacity,
            struct_end: self.layout.node_end,
            region_end: self.layout.n,
            blank,
        }
        .run(&mut self.arena);
        self.events.push(ConversionEvent {
            remaining_blocks: self.layout.blocks,
        });
    }

    /// Checks the linked-list mode invariants on a copy of the arena.
    /// Panics with a description on violation.
    pub fn audit(&self) {
        if self.arena.peek_mode_bit() {
            return;
        }
        let mut a = self.arena.clone();
        let n = self.layout.n as u64;
        let active = a.peek(NUM_ACTIVE) as usize;
        assert!(active < self.layout.capacity.max(1), "numActive {active} at capacity");
        let mut seen = 0usize;
        for block in 0..self.layout.blocks {
            let mut node = self.lists.head(&mut a, block);
            let mut prev = n;
            let mut len = 0;
            while node != n {
                let at = node as usize;
                assert!(
                    at >= self.layout.node_base
                        && at < self.layout.node_base + NODE_WORDS * active
                        && (at - self.layout.node_base).is_multiple_of(NODE_WORDS),
                    "node {at} outside allocated slots"
                );
                assert_eq!(a.peek(at), prev, "broken prev link at {at}");
                let key = a.peek(at + 2) as usize;
                assert_eq!((key - 1) / BLOCK_LEN, block, "index {key} in wrong block");
                len += 1;
                assert!(len <= BLOCK_LEN, "list {block} too long");
                prev = node;
                node = a.peek(at + 1);
            }
            seen += len;
        }
        assert_eq!(seen, active, "node count differs from numActive");
    }
}

impl FillableArray for AmortizedFillable {
    fn len(&self) -> usize {
        self.layout.n
    }

    fn read(&mut self, i: usize) -> u64 {
        check_index(i, self.layout.n);
        if self.arena.mode_bit() {
            return self.arena.load(i - 1);
        }
        let block = (i - 1) / BLOCK_LEN;
        match self.lists.find(&mut self.arena, block, i as u64) {
            Some(at) => self.arena.load(at + VALUE),
            None => self.arena.load(LAST_FILL),
        }
    }

    fn write(&mut self, i: usize, value: u64) {
        check_index(i, self.layout.n);
        if self.arena.mode_bit() {
            self.arena.store(i - 1, value);
            return;
        }
        let block = (i - 1) / BLOCK_LEN;
        if let Some(at) = self.lists.find(&mut self.arena, block, i as u64) {
            self.arena.store(at + VALUE, value);
            return;
        }
        let count = self.arena.load(NUM_ACTIVE) + 1;
        self.arena.store(NUM_ACTIVE, count);
        let at = self.layout.node_base + NODE_WORDS * (count as usize - 1);
        self.lists
            .push_front(&mut self.arena, block, at, i as u64, value);
        if count as usize == self.layout.capacity {
            self.convert();
        }
    }

    fn fill(&mut self, value: u64) {
        self.arena.set_mode_bit(false);
        self.lists.headers.fill(&mut self.arena, self.lists.null);
        self.arena.store(NUM_ACTIVE, 0);
        self.arena.store(LAST_FILL, value);
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

    fn drain_events(&mut self) -> Vec<ConversionEvent> {
        std::mem::take(&mut self.events)
    }
}
