//! Simulated word-RAM memory.
//!
//! A [`WordArena`] is exactly `n` words of `w` bits plus a single mode bit.
//! Every structure in this crate keeps all of its persistent state in one
//! arena, so the redundancy of a structure is whatever [`Snapshot`] captures
//! beyond `n * w` bits: one bit.
//!
//! All word and mode-bit accesses go through [`WordArena::load`] and
//! [`WordArena::store`] (or the mode-bit accessors) and are counted by the
//! arena's [`CostMeter`]. The meter is instrumentation and is not part of a
//! snapshot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("arena must hold at least one word")]
    Empty,
    #[error("word width {w} is outside 1..=64")]
    WidthOutOfRange { w: u32 },
    #[error("word width {w} cannot hold link value {n} (need at least {need} bits)")]
    WidthTooSmall { n: usize, w: u32, need: u32 },
    #[error("snapshot byte length {got} does not match {expected} for n={n}, w={w}")]
    SnapshotLength {
        n: usize,
        w: u32,
        expected: usize,
        got: usize,
    },
}

/// Smallest word width the arena accepts for `n` words: `ceil(log2 n) + 2`.
pub fn min_width(n: usize) -> u32 {
    ceil_log2(n as u64) + 2
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Access counters for one arena.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostMeter {
    pub loads: u64,
    pub stores: u64,
    pub per_op_max: u64,
    pub current_op: u64,
}

impl CostMeter {
    pub fn total(&self) -> u64 {
        self.loads + self.stores
    }

    /// Closes the current operation window and returns its access count.
    pub fn op_boundary(&mut self) -> u64 {
        let cost = self.current_op;
        self.per_op_max = self.per_op_max.max(cost);
        self.current_op = 0;
        cost
    }

    pub fn reset(&mut self) {
        *self = CostMeter::default();
    }

    #[inline]
    pub(crate) fn count_load(&mut self) {
        self.loads += 1;
        self.current_op += 1;
    }

    #[inline]
    pub(crate) fn count_store(&mut self) {
        self.stores += 1;
        self.current_op += 1;
    }

    pub(crate) fn count_stores(&mut self, k: u64) {
        self.stores += k;
        self.current_op += k;
    }
}

#[derive(Debug, Clone)]
pub struct WordArena {
    words: Vec<u64>,
    width: u32,
    mode_bit: bool,
    meter: CostMeter,
}

impl WordArena {
    /// Creates an arena of `n` zero words of `w` bits with the mode bit clear.
    pub fn new(n: usize, w: u32) -> Result<Self, ArenaError> {
        if n == 0 {
            return Err(ArenaError::Empty);
        }
        if w == 0 || w > 64 {
            return Err(ArenaError::WidthOutOfRange { w });
        }
        let need = min_width(n);
        if w < need {
            return Err(ArenaError::WidthTooSmall { n, w, need });
        }
        Ok(WordArena {
            words: vec![0; n],
            width: w,
            mode_bit: false,
            meter: CostMeter::default(),
        })
    }

    /// Overwrites every word and the mode bit with pseudo-random garbage
    /// derived from `seed`. Unmetered.
    pub fn fill_garbage(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = self.max_value();
        for word in &mut self.words {
            *word = rng.gen::<u64>() & mask;
        }
        self.mode_bit = rng.gen();
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Largest storable word, `2^w - 1`.
    pub fn max_value(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn load(&mut self, idx: usize) -> u64 {
        assert!(
            idx < self.words.len(),
            "arena load out of range: {idx} >= {}",
            self.words.len()
        );
        self.meter.count_load();
        self.words[idx]
    }

    #[inline]
    pub fn store(&mut self, idx: usize, v: u64) {
        assert!(
            idx < self.words.len(),
            "arena store out of range: {idx} >= {}",
            self.words.len()
        );
        assert!(
            v <= self.max_value(),
            "value {v} does not fit in {} bits",
            self.width
        );
        self.meter.count_store();
        self.words[idx] = v;
    }

    #[inline]
    pub fn mode_bit(&mut self) -> bool {
        self.meter.count_load();
        self.mode_bit
    }

    #[inline]
    pub fn set_mode_bit(&mut self, bit: bool) {
        self.meter.count_store();
        self.mode_bit = bit;
    }

    /// Unmetered read for audits and tests.
    pub fn peek(&self, idx: usize) -> u64 {
        self.words[idx]
    }

    /// Unmetered mode-bit read for audits and tests.
    pub fn peek_mode_bit(&self) -> bool {
        self.mode_bit
    }

    /// Unmetered write for building adversarial test states.
    pub fn poke(&mut self, idx: usize, v: u64) {
        assert!(v <= self.max_value());
        self.words[idx] = v;
    }

    pub fn meter(&self) -> &CostMeter {
        &self.meter
    }

    pub fn meter_mut(&mut self) -> &mut CostMeter {
        &mut self.meter
    }

    pub fn op_boundary(&mut self) -> u64 {
        self.meter.op_boundary()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            width: self.width,
            words: self.words.clone(),
            mode_bit: self.mode_bit,
        }
    }

    /// Rebuilds an arena from a snapshot with a zeroed meter.
    pub fn restore(snapshot: Snapshot) -> Self {
        WordArena {
            words: snapshot.words,
            width: snapshot.width,
            mode_bit: snapshot.mode_bit,
            meter: CostMeter::default(),
        }
    }
}

/// The persistent state of an arena: `n` words and the mode bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    width: u32,
    words: Vec<u64>,
    mode_bit: bool,
}

impl Snapshot {
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn mode_bit(&self) -> bool {
        self.mode_bit
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Information content of the snapshot: `n * w + 1`.
    pub fn bit_len(&self) -> usize {
        self.words.len() * self.width as usize + 1
    }

    /// Packs the words (LSB first, `w` bits each) followed by the mode bit
    /// into `ceil(bit_len / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bit_len().div_ceil(8)];
        let mut pos = 0usize;
        for &word in &self.words {
            write_bits(&mut out, pos, word, self.width);
            pos += self.width as usize;
        }
        write_bits(&mut out, pos, self.mode_bit as u64, 1);
        out
    }

    pub fn from_bytes(n: usize, w: u32, bytes: &[u8]) -> Result<Self, ArenaError> {
        let expected = (n * w as usize + 1).div_ceil(8);
        if bytes.len() != expected {
            return Err(ArenaError::SnapshotLength {
                n,
                w,
                expected,
                got: bytes.len(),
            });
        }
        let mut words = Vec::with_capacity(n);
        let mut pos = 0usize;
        for _ in 0..n {
            words.push(read_bits(bytes, pos, w));
            pos += w as usize;
        }
        let mode_bit = read_bits(bytes, pos, 1) == 1;
        Ok(Snapshot {
            width: w,
            words,
            mode_bit,
        })
    }

    pub fn restore(self) -> WordArena {
        WordArena::restore(self)
    }
}

fn write_bits(out: &mut [u8], pos: usize, value: u64, bits: u32) {
    for b in 0..bits as usize {
        if (value >> b) & 1 == 1 {
            let p = pos + b;
            out[p / 8] |= 1 << (p % 8);
        }
    }
}

fn read_bits(bytes: &[u8], pos: usize, bits: u32) -> u64 {
    let mut v = 0u64;
    for b in 0..bits as usize {
        let p = pos + b;
        if (bytes[p / 8] >> (p % 8)) & 1 == 1 {
            v |= 1 << b;
        }
    }
    v
}
