// In-arena doubly linked lists of 4-word nodes, one list per block, with
// list heads kept in a folklore region. Shared by the amortized and
// randomized structures, which differ only in their null value and in how a
// node's key maps to its word position.

use crate::arena::WordArena;
use crate::folklore::FolkloreRegion;

pub(crate) const PREV: usize = 0;
pub(crate) const NEXT: usize = 1;
pub(crate) const KEY: usize = 2;
pub(crate) const VALUE: usize = 3;
pub(crate) const NODE_WORDS: usize = 4;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Lists {
    pub headers: FolkloreRegion,
    pub null: u64,
    /// Word position of a node with key `k` is `k - key_bias`.
    pub key_bias: u64,
    pub block_len: usize,
}

impl Lists {
    #[inline]
    pub fn dest(&self, key: u64) -> usize {
        (key - self.key_bias) as usize
    }

    #[inline]
    pub fn block_of_key(&self, key: u64) -> usize {
        self.dest(key) / self.block_len
    }

    #[inline]
    pub fn head(&self, arena: &mut WordArena, block: usize) -> u64 {
        self.headers.read(arena, block)
    }

    /// Address of the node holding `key` in `block`'s list.
    pub fn find(&self, arena: &mut WordArena, block: usize, key: u64) -> Option<usize> {
        let mut node = self.head(arena, block);
        while node != self.null {
            let at = node as usize;
            if arena.load(at + KEY) == key {
                return Some(at);
            }
            node = arena.load(at + NEXT);
        }
        None
    }

    /// Writes a fresh node at `at` and links it in front of `block`'s list.
    pub fn push_front(&self, arena: &mut WordArena, block: usize, at: usize, key: u64, value: u64) {
        let old = self.head(arena, block);
        arena.store(at + PREV, self.null);
        arena.store(at + NEXT, old);
        arena.store(at + KEY, key);
        arena.store(at + VALUE, value);
        if old != self.null {
            arena.store(old as usize + PREV, at as u64);
        }
        self.headers.write(arena, block, at as u64);
    }

    /// Detaches the head of `block`'s list and returns `(addr, key, value)`.
    pub fn pop_front(&self, arena: &mut WordArena, block: usize) -> Option<(usize, u64, u64)> {
        let head = self.head(arena, block);
        if head == self.null {
            return None;
        }
        let at = head as usize;
        let next = arena.load(at + NEXT);
        let key = arena.load(at + KEY);
        let value = arena.load(at + VALUE);
        if next != self.null {
            arena.store(next as usize + PREV, self.null);
        }
        self.headers.write(arena, block, next);
        Some((at, key, value))
    }

    /// Moves the node at `from` into the free slot `to`, repointing its
    /// neighbours (or its list head).
    pub fn relocate(&self, arena: &mut WordArena, from: usize, to: usize) {
        if from == to {
            return;
        }
        let prev = arena.load(from + PREV);
        let next = arena.load(from + NEXT);
        let key = arena.load(from + KEY);
        let value = arena.load(from + VALUE);
        arena.store(to + PREV, prev);
        arena.store(to + NEXT, next);
        arena.store(to + KEY, key);
        arena.store(to + VALUE, value);
        if prev == self.null {
            self.headers.write(arena, self.block_of_key(key), to as u64);
        } else {
            arena.store(prev as usize + NEXT, to as u64);
        }
        if next != self.null {
            arena.store(next as usize + PREV, to as u64);
        }
    }
}

/// Finishes a switch to naive mode for the word range `[0, region_end)`.
///
/// On entry the list structures (headers, nodes, bookkeeping) occupy
/// `[0, struct_end)` and the `count` live nodes sit contiguously from
/// `node_start`. `[struct_end, region_end)` is free. On exit every word in
/// `[0, region_end)` holds its naive value, with `blank` for entries not in
/// any list.
///
/// Procedure:
/// 1. blank the free range;
/// 2. for blocks lying wholly in the free range, from the last down, write
///    each node's value home and compact the node area;
/// 3. write surviving nodes whose home is in the free range directly, then
///    copy the rest into runs of three blank words, chained as a list;
/// 4. blank `[0, struct_end)`;
/// 5. walk the gap list writing values home;
/// 6. walk it again restoring blanks.
///
/// A free word whose naive value equals `blank` may be picked as a gap; the
/// last pass puts `blank` back, which is its correct value.
pub(crate) struct Conversion {
    pub lists: Lists,
    pub blocks: usize,
    pub node_start: usize,
    pub count: usize,
    pub struct_end: usize,
    pub region_end: usize,
    pub blank: u64,
}

impl Conversion {
    pub fn run(mut self, arena: &mut WordArena) {
        let lists = self.lists;
        let (struct_end, region_end, blank) = (self.struct_end, self.region_end, self.blank);
        assert!(struct_end <= region_end);

        for w in struct_end..region_end {
            arena.store(w, blank);
        }

        let first_free_block = struct_end.div_ceil(lists.block_len);
        for block in (first_free_block..self.blocks).rev() {
            while let Some((at, key, value)) = lists.pop_front(arena, block) {
                let dest = lists.dest(key);
                debug_assert!(dest >= struct_end && dest < region_end);
                arena.store(dest, value);
                let last = self.node_start + NODE_WORDS * (self.count - 1);
                lists.relocate(arena, last, at);
                self.count -= 1;
            }
        }

        let nodes = self.node_start..self.node_start + NODE_WORDS * self.count;
        for at in nodes.clone().step_by(NODE_WORDS) {
            let dest = lists.dest(arena.load(at + KEY));
            if dest >= struct_end {
                let value = arena.load(at + VALUE);
                arena.store(dest, value);
            }
        }

        let gap_null = region_end as u64;
        let mut head = gap_null;
        let mut tail: Option<usize> = None;
        let mut scan = struct_end;
        for at in nodes.step_by(NODE_WORDS) {
            let key = arena.load(at + KEY);
            if lists.dest(key) >= struct_end {
                continue;
            }
            let value = arena.load(at + VALUE);
            let mut run = 0;
            let gap = loop {
                assert!(scan < region_end, "conversion ran out of gaps");
                let blank_word = arena.load(scan) == blank;
                scan += 1;
                run = if blank_word { run + 1 } else { 0 };
                if run == 3 {
                    break scan - 3;
                }
            };
            arena.store(gap, gap_null);
            arena.store(gap + 1, key);
            arena.store(gap + 2, value);
            match tail {
                Some(t) => arena.store(t, gap as u64),
                None => head = gap as u64,
            }
            tail = Some(gap);
        }

        for w in 0..struct_end {
            arena.store(w, blank);
        }

        let mut g = head;
        while g != gap_null {
            let at = g as usize;
            let key = arena.load(at + 1);
            let value = arena.load(at + 2);
            arena.store(lists.dest(key), value);
            g = arena.load(at);
        }

        let mut g = head;
        while g != gap_null {
            let at = g as usize;
            g = arena.load(at);
            arena.store(at, blank);
            arena.store(at + 1, blank);
            arena.store(at + 2, blank);
        }
    }
}
