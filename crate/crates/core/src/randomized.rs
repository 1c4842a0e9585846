//! Randomized fillable array with one redundant bit: worst-case O(1)
//! read/fill and expected O(1) write.
//!
//! Entry `i` lives at word `F(i-1)` in naive mode, where `F` is a permutation
//! from [`crate::permutation`]. In linked-list mode the arena is laid out as
//!
//! ```text
//! G   [0, 5)               L start, N start, U start, NI start, Δ_last
//! L   [5, 5+3k+2)          folklore region of k list heads
//!     slack (< 7 words)
//! N   [N start, U start)   4-word nodes (prev, next, F-position, value)
//! U   [U start, NI start)  free
//! NI  [NI start, n)        blocks already converted to naive layout
//! ```
//!
//! Block `j` is the set of entries with `F(i-1)` in `[100j, 100j+100)`, and
//! `k = ceil(NI start / 100)` blocks are still in linked-list mode. Empty
//! links point at word 0. Every write is followed by a convert step that
//! moves the last 8 unconverted blocks into NI, unless free space is short
//! or `k <= 10`, in which case the remaining `k` blocks are converted at
//! once.

use crate::arena::{CostMeter, WordArena};
use crate::contract::{check_index, BuildError, ConversionEvent, FillableArray};
use crate::folklore::FolkloreRegion;
use crate::lists::{Conversion, Lists, NEXT, NODE_WORDS, PREV, VALUE};
use crate::permutation::Permutation;

pub const BLOCK_LEN: usize = 100;
/// Blocks converted after each linked-mode write.
pub const BLOCKS_PER_CONVERT: usize = 8;
/// Free space threshold `C_U = 95/100` of the unconverted words.
pub const FREE_NUM: usize = 95;
pub const FREE_DEN: usize = 100;
/// At or below this many unconverted blocks the rest is converted at once.
pub const TAIL_BLOCKS: usize = 10;
pub const MIN_N: usize = 12 * BLOCK_LEN;

const L_START: usize = 0;
const N_START: usize = 1;
const U_START: usize = 2;
const NI_START: usize = 3;
const LAST_FILL: usize = 4;
const G_WORDS: usize = 5;
const EMPTY: u64 = 0;

#[derive(Debug, Clone)]
pub struct RandomizedFillable {
    arena: WordArena,
    perm: Permutation,
    n: usize,
    events: Vec<ConversionEvent>,
}

fn headers_end(k: usize) -> usize {
    G_WORDS + FolkloreRegion::words_for(k)
}

impl RandomizedFillable {
    /// Initializes over `arena`, whatever it holds, in O(1).
    pub fn new(arena: WordArena, perm: Permutation) -> Result<Self, BuildError> {
        let mut s = Self::attach(arena, perm)?;
        s.fill(0);
        s.arena.op_boundary();
        Ok(s)
    }

    /// Resumes a structure already living in `arena` under the same
    /// permutation. Touches nothing.
    pub fn attach(arena: WordArena, perm: Permutation) -> Result<Self, BuildError> {
        let n = arena.len();
        if n < MIN_N {
            return Err(BuildError::TooSmall {
                backend: "randomized",
                n,
                min: MIN_N,
            });
        }
        if perm.n() != n as u64 {
            return Err(BuildError::DomainMismatch { n, perm_n: perm.n() });
        }
        Ok(RandomizedFillable {
            arena,
            perm,
            n,
            events: Vec::new(),
        })
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_arena(self) -> WordArena {
        self.arena
    }

    pub fn is_naive(&self) -> bool {
        self.arena.peek_mode_bit()
    }

    /// Unmetered count of blocks still in linked-list mode.
    pub fn remaining_blocks(&self) -> usize {
        self.arena.peek(NI_START).div_ceil(BLOCK_LEN as u64) as usize
    }

    fn total_blocks(&self) -> usize {
        self.n.div_ceil(BLOCK_LEN)
    }

    fn lists(&self, k: usize) -> Lists {
        Lists {
            headers: FolkloreRegion::attach(&self.arena, G_WORDS, k),
            null: EMPTY,
            key_bias: 0,
            block_len: BLOCK_LEN,
        }
    }

    #[inline]
    fn position(&self, i: usize) -> usize {
        self.perm.eval(i as u64 - 1) as usize
    }

    fn convert(&mut self) {
        let mut ni = self.arena.load(NI_START) as usize;
        let mut n_start = self.arena.load(N_START) as usize;
        let mut u_start = self.arena.load(U_START) as usize;
        let mut k = ni.div_ceil(BLOCK_LEN);
        let free = (n_start - headers_end(k)) + (ni - u_start);
        if k <= TAIL_BLOCKS || free * FREE_DEN <= k * BLOCK_LEN * FREE_NUM {
            self.full_convert(k, n_start, u_start, ni);
            return;
        }

        let blank = self.arena.load(LAST_FILL);
        for _ in 0..BLOCKS_PER_CONVERT {
            let block = k - 1;
            let new_ni = block * BLOCK_LEN;
            assert!(u_start <= new_ni, "node area would overlap converted block");
            for w in new_ni..ni {
                self.arena.store(w, blank);
            }
            let mut lists = self.lists(k);
            while let Some((at, pos, value)) = lists.pop_front(&mut self.arena, block) {
                self.arena.store(pos as usize, value);
                lists.relocate(&mut self.arena, u_start - NODE_WORDS, at);
                u_start -= NODE_WORDS;
            }
            lists.headers.delete(&mut self.arena);
            k -= 1;
            ni = new_ni;

            if n_start - headers_end(k) >= NODE_WORDS {
                if u_start > n_start {
                    lists.relocate(&mut self.arena, u_start - NODE_WORDS, n_start - NODE_WORDS);
                }
                n_start -= NODE_WORDS;
                u_start -= NODE_WORDS;
            }
        }
        self.arena.store(NI_START, ni as u64);
        self.arena.store(N_START, n_start as u64);
        self.arena.store(U_START, u_start as u64);
    }

    fn full_convert(&mut self, k: usize, n_start: usize, u_start: usize, ni: usize) {
        self.arena.set_mode_bit(true);
        let blank = self.arena.load(LAST_FILL);
        Conversion {
            lists: self.lists(k),
            blocks: k,
            node_start: n_start,
            count: (u_start - n_start) / NODE_WORDS,
            struct_end: u_start,
            region_end: ni,
            blank,
        }
        .run(&mut self.arena);
        self.events.push(ConversionEvent { remaining_blocks: k });
    }

    /// Checks region ordering, node-area contiguity and list integrity on a
    /// copy of the arena. Panics with a description on violation.
    pub fn audit(&self) {
        if self.arena.peek_mode_bit() {
            return;
        }
        let a = &self.arena;
        let ni = a.peek(NI_START) as usize;
        let n_start = a.peek(N_START) as usize;
        let u_start = a.peek(U_START) as usize;
        let k = ni.div_ceil(BLOCK_LEN);
        assert_eq!(a.peek(L_START) as usize, G_WORDS, "L start moved");
        assert!(ni == self.n || ni.is_multiple_of(BLOCK_LEN), "NI start {ni} off block boundary");
        assert!(k <= self.total_blocks());
        let l_end = headers_end(k);
        assert!(l_end <= n_start, "L overlaps N");
        assert!(n_start - l_end < 7, "front slack {} too large", n_start - l_end);
        assert!(n_start <= u_start && u_start <= ni, "N/U/NI out of order");
        assert_eq!((u_start - n_start) % NODE_WORDS, 0);

        let mut copy = self.arena.clone();
        let lists = self.lists(k);
        let mut seen = 0usize;
        for block in 0..k {
            let mut node = lists.head(&mut copy, block);
            let mut prev = EMPTY;
            while node != EMPTY {
                let at = node as usize;
                assert!(
                    at >= n_start && at < u_start && (at - n_start).is_multiple_of(NODE_WORDS),
                    "node {at} outside N"
                );
                assert_eq!(a.peek(at + PREV), prev, "broken prev link at {at}");
                let pos = a.peek(at + 2) as usize;
                assert_eq!(pos / BLOCK_LEN, block, "position {pos} in wrong block");
                assert!(pos < ni);
                seen += 1;
                assert!(seen <= (u_start - n_start) / NODE_WORDS, "cycle in lists");
                prev = node;
                node = a.peek(at + NEXT);
            }
        }
        assert_eq!(seen, (u_start - n_start) / NODE_WORDS, "unreachable nodes in N");
    }

    /// Unmetered view of the front slack between L and N.
    pub fn front_slack(&self) -> usize {
        let k = self.remaining_blocks();
        self.arena.peek(N_START) as usize - headers_end(k)
    }
}

impl FillableArray for RandomizedFillable {
    fn len(&self) -> usize {
        self.n
    }

    fn read(&mut self, i: usize) -> u64 {
        check_index(i, self.n);
        let pos = self.position(i);
        if self.arena.mode_bit() {
            return self.arena.load(pos);
        }
        let ni = self.arena.load(NI_START) as usize;
        if pos >= ni {
            return self.arena.load(pos);
        }
        let lists = self.lists(ni.div_ceil(BLOCK_LEN));
        match lists.find(&mut self.arena, pos / BLOCK_LEN, pos as u64) {
            Some(at) => self.arena.load(at + VALUE),
            None => self.arena.load(LAST_FILL),
        }
    }

    fn write(&mut self, i: usize, value: u64) {
        check_index(i, self.n);
        let pos = self.position(i);
        if self.arena.mode_bit() {
            self.arena.store(pos, value);
            return;
        }
        let ni = self.arena.load(NI_START) as usize;
        if pos >= ni {
            self.arena.store(pos, value);
        } else {
            let lists = self.lists(ni.div_ceil(BLOCK_LEN));
            let block = pos / BLOCK_LEN;
            match lists.find(&mut self.arena, block, pos as u64) {
                Some(at) => self.arena.store(at + VALUE, value),
                None => {
                    let at = self.arena.load(U_START) as usize;
                    assert!(at + NODE_WORDS <= ni, "node allocation would overlap NI");
                    lists.push_front(&mut self.arena, block, at, pos as u64, value);
                    self.arena.store(U_START, (at + NODE_WORDS) as u64);
                }
            }
        }
        self.convert();
    }

    fn fill(&mut self, value: u64) {
        let l_end = headers_end(self.total_blocks()) as u64;
        self.arena.set_mode_bit(false);
        self.arena.store(L_START, G_WORDS as u64);
        self.arena.store(N_START, l_end);
        self.arena.store(U_START, l_end);
        self.arena.store(NI_START, self.n as u64);
        self.arena.store(LAST_FILL, value);
        self.lists(self.total_blocks())
            .headers
            .fill(&mut self.arena, EMPTY);
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
