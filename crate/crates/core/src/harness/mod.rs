//! Differential fuzzing, cost measurement, trace replay and permutation
//! statistics.
//!
//! The harness only talks to backends through [`FillableArray`], the cost
//! meter and the conversion-event hook. All randomness comes from explicit
//! seeds, so every report can be reproduced.

mod commands;
mod report;
mod trace;

pub use commands::{
    bench, fuzz, generate_ops, pairwise_deviation, perm_test, replay, replay_str, BenchConfig,
    Dist, FuzzConfig, Mix, PermReport, PermTestConfig,
};
pub use report::{CostStats, RunReport};
pub use trace::{OpTrace, TraceHeader};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arena::{ArenaError, WordArena};
use crate::contract::{BuildError, FillableArray};
use crate::folklore::{FolkloreArray, FolkloreRegion};
use crate::oracle::OracleArray;
use crate::permutation::{FamilyParams, Permutation, PermutationError};
use crate::{amortized, randomized, AmortizedFillable, RandomizedFillable, TrivialArray};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown backend `{0}` (expected oracle, folklore, amortized, randomized or trivial)")]
    UnknownBackend(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Oracle,
    Folklore,
    Amortized,
    Randomized,
    Trivial,
}

impl BackendKind {
    pub const ALL: [BackendKind; 5] = [
        BackendKind::Oracle,
        BackendKind::Folklore,
        BackendKind::Amortized,
        BackendKind::Randomized,
        BackendKind::Trivial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Oracle => "oracle",
            BackendKind::Folklore => "folklore",
            BackendKind::Amortized => "amortized",
            BackendKind::Randomized => "randomized",
            BackendKind::Trivial => "trivial",
        }
    }

    /// Smallest supported array length.
    pub fn min_n(self) -> usize {
        match self {
            BackendKind::Amortized => amortized::MIN_N,
            BackendKind::Randomized => randomized::MIN_N,
            _ => 1,
        }
    }

    /// Arena words used for an array of length `n`.
    pub fn arena_words(self, n: usize) -> usize {
        match self {
            BackendKind::Folklore => FolkloreRegion::words_for(n),
            _ => n,
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BackendKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BackendKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::UnknownBackend(s.to_string()))
    }
}

pub type DynFillable = Box<dyn FillableArray + Send>;

/// Everything needed to build or re-attach a backend.
#[derive(Debug, Clone)]
pub struct BackendSpec {
    pub kind: BackendKind,
    pub n: usize,
    pub w: u32,
    /// Required for the randomized backend.
    pub perm: Option<Permutation>,
}

impl BackendSpec {
    pub fn new(kind: BackendKind, n: usize, w: u32) -> Result<Self, HarnessError> {
        if n < kind.min_n() {
            return Err(BuildError::TooSmall {
                backend: kind.name(),
                n,
                min: kind.min_n(),
            }
            .into());
        }
        Ok(BackendSpec {
            kind,
            n,
            w,
            perm: None,
        })
    }

    pub fn with_perm(mut self, perm: Permutation) -> Self {
        self.perm = Some(perm);
        self
    }

    /// Parameters of the permutation family for this length.
    pub fn family(&self) -> Result<FamilyParams, HarnessError> {
        Ok(FamilyParams::new(self.n as u64)?)
    }

    /// Builds a fresh backend, optionally over a garbage-filled arena.
    pub fn build(&self, garbage: Option<u64>) -> Result<DynFillable, HarnessError> {
        if self.kind == BackendKind::Oracle {
            return Ok(Box::new(OracleArray::new(self.n)));
        }
        let mut arena = WordArena::new(self.kind.arena_words(self.n), self.w)?;
        if let Some(seed) = garbage {
            arena.fill_garbage(seed);
        }
        Ok(match self.kind {
            BackendKind::Oracle => unreachable!(),
            BackendKind::Folklore => Box::new(FolkloreArray::new(arena, self.n)),
            BackendKind::Amortized => Box::new(AmortizedFillable::new(arena)?),
            BackendKind::Randomized => Box::new(RandomizedFillable::new(arena, self.need_perm()?)?),
            BackendKind::Trivial => Box::new(TrivialArray::new(arena)),
        })
    }

    /// Re-attaches a backend to an arena restored from a snapshot.
    pub fn attach(&self, arena: WordArena) -> Result<DynFillable, HarnessError> {
        Ok(match self.kind {
            BackendKind::Oracle => {
                return Err(HarnessError::Invalid("the oracle has no arena".into()))
            }
            BackendKind::Folklore => Box::new(FolkloreArray::attach(arena, self.n)),
            BackendKind::Amortized => Box::new(AmortizedFillable::attach(arena)?),
            BackendKind::Randomized => {
                Box::new(RandomizedFillable::attach(arena, self.need_perm()?)?)
            }
            BackendKind::Trivial => Box::new(TrivialArray::attach(arena)),
        })
    }

    fn need_perm(&self) -> Result<Permutation, HarnessError> {
        self.perm
            .clone()
            .ok_or_else(|| HarnessError::Invalid("randomized backend needs a permutation".into()))
    }
}

/// One contract operation. `Read` may carry an expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Fill(u64),
    Write(usize, u64),
    Read(usize, Option<u64>),
}
