//! Fillable arrays (read, write, and constant-time fill) that use `n` words
//! plus a single extra bit.
//!
//! Every structure lives in a [`WordArena`]: `n` words of `w` bits and one
//! mode bit, with all accesses metered so time bounds can be checked by
//! counting rather than timing.
//!
//! Backends, all implementing [`FillableArray`] with 1-based indices:
//!
//! - [`AmortizedFillable`]: deterministic, O(1) read/fill, amortized O(1)
//!   write.
//! - [`RandomizedFillable`]: O(1) read/fill, expected O(1) write, keyed by a
//!   [`Permutation`] from an almost pairwise independent family.
//! - [`FolkloreArray`]: the classic `3n + 2` word structure, also used
//!   internally as [`FolkloreRegion`] for list heads.
//! - [`TrivialArray`] and [`OracleArray`]: O(n) fill baselines.
//!
//! The [`harness`] module drives backends against the oracle, measures
//! access costs, and replays operation traces.

pub mod amortized;
pub mod arena;
pub mod contract;
pub mod folklore;
pub mod harness;
mod lists;
pub mod oracle;
pub mod permutation;
pub mod randomized;
pub mod trivial;

pub use amortized::AmortizedFillable;
pub use arena::{CostMeter, Snapshot, WordArena};
pub use contract::{BuildError, ConversionEvent, FillableArray};
pub use folklore::{FolkloreArray, FolkloreRegion};
pub use oracle::OracleArray;
pub use permutation::{FamilyParams, Permutation, PermutationSeed};
pub use randomized::RandomizedFillable;
pub use trivial::TrivialArray;
