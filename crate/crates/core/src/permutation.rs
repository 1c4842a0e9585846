//! Almost pairwise independent permutations of `[0, n)`.
//!
//! One stage is a cyclic shift followed by an affine map on the prime-sized
//! prefix `[0, p)`:
//!
//! ```text
//! s = (x + r) mod n
//! π(x) = s                    if s >= p
//!        (a·s + b) mod p      otherwise
//! ```
//!
//! with `p` a prime in `[n - n^θ, n]`. A single stage is only
//! `O(n^θ / n)`-close to pairwise independent; composing [`STAGES`] of them
//! drives that below `1/n²` for θ = 2/3. Domains smaller than
//! [`SMALL_DOMAIN`] use a uniformly random table instead.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::ceil_log2;

/// Interval exponent θ as a rational `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

pub const THETA: Exponent = Exponent { num: 2, den: 3 };
/// δ target is `1/n^TARGET_EXPONENT`.
pub const TARGET_EXPONENT: u32 = 2;
/// `ceil(c / (1 - θ))` for c = 2, θ = 2/3.
pub const STAGES: usize = 6;
/// Below this size the family of all permutations is used.
pub const SMALL_DOMAIN: u64 = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("no prime in [{lo}, {hi}]")]
    NoPrime { lo: u64, hi: u64 },
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("{p} is not a prime in [{lo}, {n}]")]
    BadPrime { p: u64, lo: u64, n: u64 },
    #[error("invalid stage {stage}: {reason}")]
    BadStage { stage: usize, reason: &'static str },
    #[error("seed is {got} bytes, expected {expected}")]
    SeedLength { expected: usize, got: usize },
    #[error("table seed is not a permutation of [0, {n})")]
    BadTable { n: u64 },
}

// ---------------------------------------------------------------------------
// Primality

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
///
/// The seven bases are the known witness set covering all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `floor(n^(num/den))`, exact.
pub fn floor_pow(n: u64, e: Exponent) -> u64 {
    if n <= 1 {
        return n;
    }
    let target = (n as u128).checked_pow(e.num);
    // `t^den <= n^num`, with overflow meaning "too big".
    let fits = |t: u64| -> bool {
        match (target, (t as u128).checked_pow(e.den)) {
            (Some(lim), Some(v)) => v <= lim,
            (None, Some(_)) => true,
            (_, None) => false,
        }
    };
    let mut t = (n as f64).powf(e.num as f64 / e.den as f64) as u64;
    while t > 0 && !fits(t) {
        t -= 1;
    }
    while fits(t + 1) {
        t += 1;
    }
    t
}

/// Integer interval `[n - floor(n^θ), n]`, which is exactly the set of
/// integers in the real interval `[n - n^θ, n]`.
pub fn prime_interval(n: u64, theta: Exponent) -> (u64, u64) {
    (n - floor_pow(n, theta).min(n), n)
}

/// Finds a prime in `[n - n^θ, n]` by uniform sampling, falling back to a
/// downward scan after `64·ceil(log2 n)²` misses.
pub fn find_prime<R: Rng + ?Sized>(
    n: u64,
    theta: Exponent,
    rng: &mut R,
) -> Result<u64, PermutationError> {
    let (lo, hi) = prime_interval(n, theta);
    let lo = lo.max(2);
    if hi < lo {
        return Err(PermutationError::NoPrime { lo, hi });
    }
    let lg = ceil_log2(n).max(1) as u64;
    for _ in 0..64 * lg * lg {
        let candidate = rng.gen_range(lo..=hi);
        if is_prime(candidate) {
            return Ok(candidate);
        }
    }
    (lo..=hi)
        .rev()
        .find(|&c| is_prime(c))
        .ok_or(PermutationError::NoPrime { lo, hi })
}

// ---------------------------------------------------------------------------
// Family

/// Domain size and the prime the affine stages work modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    n: u64,
    p: u64,
}

impl FamilyParams {
    /// Parameters for domain `[0, n)`. The prime search is seeded from `n`
    /// alone, so a serialized seed plus `n` reproduces the permutation.
    pub fn new(n: u64) -> Result<Self, PermutationError> {
        if n == 0 {
            return Err(PermutationError::EmptyDomain);
        }
        if n < SMALL_DOMAIN {
            return Ok(FamilyParams { n, p: 0 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n ^ 0x9e37_79b9_7f4a_7c15);
        let p = find_prime(n, THETA, &mut rng)?;
        Ok(FamilyParams { n, p })
    }

    pub fn with_prime(n: u64, p: u64) -> Result<Self, PermutationError> {
        let (lo, _) = prime_interval(n, THETA);
        if !(lo..=n).contains(&p) || !is_prime(p) {
            return Err(PermutationError::BadPrime { p, lo, n });
        }
        Ok(FamilyParams { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The stage prime; 0 for small domains, which do not use one.
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_small(&self) -> bool {
        self.n < SMALL_DOMAIN
    }

    /// Seed size in bits: `ℓ·(ceil(log2 n) + 2·ceil(log2 p))`, or
    /// `n·ceil(log2 n)` for a table.
    pub fn seed_bits(&self) -> u64 {
        if self.is_small() {
            self.n * ceil_log2(self.n) as u64
        } else {
            STAGES as u64 * (ceil_log2(self.n) as u64 + 2 * ceil_log2(self.p) as u64)
        }
    }
}

/// One `(r, a, b)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stage {
    pub r: u64,
    pub a: u64,
    pub b: u64,
}

impl Stage {
    pub const IDENTITY: Stage = Stage { r: 0, a: 1, b: 0 };
}

/// Evaluates one stage on `x` in `[0, n)`.
#[inline]
pub fn eval_stage(n: u64, p: u64, stage: Stage, x: u64) -> u64 {
    debug_assert!(x < n);
    if n <= u32::MAX as u64 {
        let s = (x + stage.r) % n;
        return if s >= p { s } else { (stage.a * s + stage.b) % p };
    }
    let s = ((x as u128 + stage.r as u128) % n as u128) as u64;
    if s >= p {
        s
    } else {
        ((stage.a as u128 * s as u128 + stage.b as u128) % p as u128) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PermutationSeed {
    Stages([Stage; STAGES]),
    /// Explicit image table, for domains below [`SMALL_DOMAIN`].
    Table(Vec<u64>),
}

impl PermutationSeed {
    /// Little-endian `u64` fields: `r, a, b` per stage, or the table entries.
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            PermutationSeed::Stages(stages) => stages
                .iter()
                .flat_map(|s| [s.r, s.a, s.b])
                .flat_map(u64::to_le_bytes)
                .collect(),
            PermutationSeed::Table(t) => t.iter().copied().flat_map(u64::to_le_bytes).collect(),
        }
    }

    pub fn from_bytes(params: &FamilyParams, bytes: &[u8]) -> Result<Self, PermutationError> {
        let fields = if params.is_small() {
            params.n as usize
        } else {
            3 * STAGES
        };
        if bytes.len() != 8 * fields {
            return Err(PermutationError::SeedLength {
                expected: 8 * fields,
                got: bytes.len(),
            });
        }
        let words: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let seed = if params.is_small() {
            PermutationSeed::Table(words)
        } else {
            let mut stages = [Stage::IDENTITY; STAGES];
            for (s, w) in stages.iter_mut().zip(words.chunks_exact(3)) {
                *s = Stage {
                    r: w[0],
                    a: w[1],
                    b: w[2],
                };
            }
            PermutationSeed::Stages(stages)
        };
        seed.validate(params)?;
        Ok(seed)
    }

    pub fn validate(&self, params: &FamilyParams) -> Result<(), PermutationError> {
        match self {
            PermutationSeed::Stages(stages) => {
                if params.is_small() {
                    return Err(PermutationError::BadTable { n: params.n });
                }
                for (i, s) in stages.iter().enumerate() {
                    if s.r >= params.n {
                        return Err(PermutationError::BadStage {
                            stage: i,
                            reason: "shift out of range",
                        });
                    }
                    if s.a == 0 || s.a >= params.p {
                        return Err(PermutationError::BadStage {
                            stage: i,
                            reason: "multiplier out of range",
                        });
                    }
                    if s.b >= params.p {
                        return Err(PermutationError::BadStage {
                            stage: i,
                            reason: "offset out of range",
                        });
                    }
                }
                Ok(())
            }
            PermutationSeed::Table(t) => {
                let n = params.n;
                let mut seen = vec![false; n as usize];
                if t.len() as u64 != n {
                    return Err(PermutationError::BadTable { n });
                }
                for &y in t {
                    if y >= n || std::mem::replace(&mut seen[y as usize], true) {
                        return Err(PermutationError::BadTable { n });
                    }
                }
                Ok(())
            }
        }
    }
}

/// Draws a seed: independent uniform `(r, a, b)` per stage, or a
/// Fisher-Yates table for small domains.
pub fn sample_seed<R: Rng + ?Sized>(params: &FamilyParams, rng: &mut R) -> PermutationSeed {
    if params.is_small() {
        let mut table: Vec<u64> = (0..params.n).collect();
        table.shuffle(rng);
        return PermutationSeed::Table(table);
    }
    let mut stages = [Stage::IDENTITY; STAGES];
    for s in &mut stages {
        *s = Stage {
            r: rng.gen_range(0..params.n),
            a: rng.gen_range(1..params.p),
            b: rng.gen_range(0..params.p),
        };
    }
    PermutationSeed::Stages(stages)
}

/// A member of the family, ready to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    params: FamilyParams,
    seed: PermutationSeed,
}

impl Permutation {
    pub fn new(params: FamilyParams, seed: PermutationSeed) -> Result<Self, PermutationError> {
        seed.validate(&params)?;
        Ok(Permutation { params, seed })
    }

    pub fn sample<R: Rng + ?Sized>(params: FamilyParams, rng: &mut R) -> Self {
        let seed = sample_seed(&params, rng);
        Permutation { params, seed }
    }

    pub fn identity(params: FamilyParams) -> Self {
        let seed = if params.is_small() {
            PermutationSeed::Table((0..params.n).collect())
        } else {
            PermutationSeed::Stages([Stage::IDENTITY; STAGES])
        };
        Permutation { params, seed }
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn seed(&self) -> &PermutationSeed {
        &self.seed
    }

    pub fn n(&self) -> u64 {
        self.params.n
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        assert!(x < self.params.n, "permutation input {x} >= {}", self.params.n);
        match &self.seed {
            PermutationSeed::Stages(stages) => stages
                .iter()
                .fold(x, |y, &s| eval_stage(self.params.n, self.params.p, s, y)),
            PermutationSeed::Table(t) => t[x as usize],
        }
    }
}
