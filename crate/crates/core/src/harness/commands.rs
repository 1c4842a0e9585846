use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{CostStats, RunReport};
use super::trace::OpTrace;
use super::{BackendKind, BackendSpec, HarnessError, Op};
use crate::contract::FillableArray;
use crate::oracle::OracleArray;
use crate::permutation::{FamilyParams, Permutation, PermutationSeed};

/// Relative weights of write, read and fill operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mix {
    pub write: u32,
    pub read: u32,
    pub fill: u32,
}

impl Default for Mix {
    fn default() -> Self {
        Mix {
            write: 60,
            read: 35,
            fill: 5,
        }
    }
}

impl Mix {
    fn total(&self) -> u32 {
        self.write + self.read + self.fill
    }
}

impl FromStr for Mix {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::Invalid(format!("mix must be w:r:f, got `{s}`"));
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [write, read, fill] = parts[..] else {
            return Err(bad());
        };
        let mix = Mix { write, read, fill };
        if mix.total() == 0 {
            return Err(HarnessError::Invalid("mix weights are all zero".into()));
        }
        Ok(mix)
    }
}

/// Where generated writes land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dist {
    #[default]
    Uniform,
    /// Writes sweep `1, 2, ..., n` and wrap around.
    Sequential,
    /// Writes sweep indices in increasing order of their permuted position,
    /// so they pile into the lowest blocks. Falls back to `Sequential` when
    /// the backend has no permutation.
    LowBlock,
}

impl FromStr for Dist {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Dist::Uniform),
            "sequential" => Ok(Dist::Sequential),
            "lowblock" => Ok(Dist::LowBlock),
            _ => Err(HarnessError::Invalid(format!(
                "unknown dist `{s}` (expected uniform, sequential or lowblock)"
            ))),
        }
    }
}

fn random_value<R: Rng>(w: u32, rng: &mut R) -> u64 {
    if rng.gen_bool(0.5) {
        rng.gen_range(0..4)
    } else if w >= 64 {
        rng.gen()
    } else {
        rng.gen_range(0..1u64 << w)
    }
}

/// Draws `count` operations over indices `[1, n]` and values `< 2^w`. Half
/// the values are tiny so that written values often collide with filled ones.
pub fn generate_ops<R: Rng>(n: usize, w: u32, count: usize, mix: Mix, rng: &mut R) -> Vec<Op> {
    generate_with(n, w, count, mix, rng, |rng| rng.gen_range(1..=n))
}

fn generate_with<R: Rng>(
    n: usize,
    w: u32,
    count: usize,
    mix: Mix,
    rng: &mut R,
    mut write_index: impl FnMut(&mut R) -> usize,
) -> Vec<Op> {
    let total = mix.total();
    (0..count)
        .map(|_| {
            let roll = rng.gen_range(0..total);
            if roll < mix.write {
                let i = write_index(rng);
                Op::Write(i, random_value(w, rng))
            } else if roll < mix.write + mix.read {
                Op::Read(rng.gen_range(1..=n), None)
            } else {
                Op::Fill(random_value(w, rng))
            }
        })
        .collect()
}

/// Per-sequence rng: one ChaCha stream per sequence under a shared seed.
fn sequence_rng(seed: u64, seq: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(seq as u64);
    rng
}

fn with_sampled_perm<R: Rng>(
    spec: &BackendSpec,
    rng: &mut R,
) -> Result<BackendSpec, HarnessError> {
    let mut spec = spec.clone();
    if spec.kind == BackendKind::Randomized {
        spec.perm = Some(Permutation::sample(spec.family()?, rng));
    }
    Ok(spec)
}

/// Runs `ops` on `backend` and `oracle` in lockstep, recording per-op
/// access counts, conversions and disagreements into `report`.
/// `line_of(k)` names op `k` in expectation failures.
fn run_lockstep(
    backend: &mut dyn FillableArray,
    oracle: &mut OracleArray,
    ops: &[Op],
    report: &mut RunReport,
    mut latency: Option<&mut [CostStats; 3]>,
    line_of: impl Fn(usize) -> usize,
) {
    for (k, &op) in ops.iter().enumerate() {
        let start = latency.as_ref().map(|_| Instant::now());
        let got = match op {
            Op::Fill(v) => {
                backend.fill(v);
                None
            }
            Op::Write(i, v) => {
                backend.write(i, v);
                None
            }
            Op::Read(i, _) => Some(backend.read(i)),
        };
        let cost = backend.end_op();
        let slot = match op {
            Op::Read(..) => 0,
            Op::Write(..) => 1,
            Op::Fill(_) => 2,
        };
        if let (Some(lat), Some(start)) = (latency.as_deref_mut(), start) {
            lat[slot].record(start.elapsed().as_nanos() as u64);
        }
        [&mut report.reads, &mut report.writes, &mut report.fills][slot].record(cost);
        report
            .conversions
            .extend(backend.drain_events().iter().map(|e| e.remaining_blocks));
        match op {
            Op::Fill(v) => oracle.fill(v),
            Op::Write(i, v) => oracle.write(i, v),
            Op::Read(i, expected) => {
                let truth = oracle.read(i);
                let got = got.expect("read returns a value");
                if got != truth {
                    report.mismatches += 1;
                }
                if expected.is_some_and(|e| e != got) {
                    report.expectation_failures.push(line_of(k));
                }
            }
        }
        oracle.end_op();
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub backend: BackendKind,
    pub n: usize,
    pub w: u32,
    pub ops: usize,
    pub seqs: usize,
    pub seed: u64,
    /// Fill the arena with seeded garbage before construction.
    pub garbage: bool,
    pub mix: Mix,
}

impl FuzzConfig {
    pub fn new(backend: BackendKind, n: usize) -> Self {
        FuzzConfig {
            backend,
            n,
            w: 64,
            ops: 10_000,
            seqs: 100,
            seed: 0,
            garbage: false,
            mix: Mix::default(),
        }
    }
}

fn base_report(command: &str, spec: &BackendSpec, seqs: usize) -> RunReport {
    RunReport {
        command: command.into(),
        backend: spec.kind.name().into(),
        n: spec.n,
        w: spec.w,
        seqs,
        ..Default::default()
    }
}

/// Differential fuzzing against the oracle. Sequences run in parallel and
/// are merged in sequence order, so the report does not depend on
/// scheduling (apart from `wall_ms`).
pub fn fuzz(cfg: &FuzzConfig) -> Result<RunReport, HarnessError> {
    if cfg.seqs == 0 {
        return Err(HarnessError::Invalid("seqs must be positive".into()));
    }
    let spec = BackendSpec::new(cfg.backend, cfg.n, cfg.w)?;
    let start = Instant::now();
    let parts: Vec<RunReport> = (0..cfg.seqs)
        .into_par_iter()
        .map(|seq| -> Result<RunReport, HarnessError> {
            let mut rng = sequence_rng(cfg.seed, seq);
            let spec = with_sampled_perm(&spec, &mut rng)?;
            let garbage = cfg.garbage.then(|| rng.gen());
            let ops = generate_ops(cfg.n, cfg.w, cfg.ops, cfg.mix, &mut rng);
            let mut backend = spec.build(garbage)?;
            let mut oracle = OracleArray::new(cfg.n);
            let mut part = RunReport::default();
            run_lockstep(backend.as_mut(), &mut oracle, &ops, &mut part, None, |k| k + 1);
            Ok(part)
        })
        .collect::<Result<_, _>>()?;
    let mut report = base_report("fuzz", &spec, cfg.seqs);
    for part in &parts {
        report.merge(part);
    }
    report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub backend: BackendKind,
    pub n: usize,
    pub w: u32,
    pub ops: usize,
    pub seqs: usize,
    pub seed: u64,
    pub dist: Dist,
    pub garbage: bool,
    pub mix: Mix,
}

impl BenchConfig {
    pub fn new(backend: BackendKind, n: usize) -> Self {
        BenchConfig {
            backend,
            n,
            w: 64,
            ops: 10_000,
            seqs: 1,
            seed: 0,
            dist: Dist::Uniform,
            garbage: false,
            mix: Mix::default(),
        }
    }
}

/// Write order for `Dist::LowBlock`: indices sorted by permuted position.
fn low_block_order(perm: &Permutation) -> Vec<usize> {
    let n = perm.n() as usize;
    let mut by_pos = vec![0usize; n];
    for x in 0..n {
        by_pos[perm.eval(x as u64) as usize] = x + 1;
    }
    by_pos
}

/// Access-count and latency measurement. Sequences run one after another
/// so latencies are not skewed by contention; the oracle still shadows
/// every op.
pub fn bench(cfg: &BenchConfig) -> Result<RunReport, HarnessError> {
    if cfg.seqs == 0 {
        return Err(HarnessError::Invalid("seqs must be positive".into()));
    }
    let spec = BackendSpec::new(cfg.backend, cfg.n, cfg.w)?;
    let mut report = base_report("bench", &spec, cfg.seqs);
    let mut latency: [CostStats; 3] = Default::default();
    let start = Instant::now();
    for seq in 0..cfg.seqs {
        let mut rng = sequence_rng(cfg.seed, seq);
        let spec = with_sampled_perm(&spec, &mut rng)?;
        let garbage = cfg.garbage.then(|| rng.gen());
        let order: Option<Vec<usize>> = match (cfg.dist, &spec.perm) {
            (Dist::LowBlock, Some(perm)) => Some(low_block_order(perm)),
            _ => None,
        };
        let n = cfg.n;
        let mut cursor = 0usize;
        let ops = match cfg.dist {
            Dist::Uniform => generate_ops(n, cfg.w, cfg.ops, cfg.mix, &mut rng),
            Dist::Sequential | Dist::LowBlock => {
                generate_with(n, cfg.w, cfg.ops, cfg.mix, &mut rng, |_| {
                    let i = order.as_ref().map_or(cursor + 1, |o| o[cursor]);
                    cursor = (cursor + 1) % n;
                    i
                })
            }
        };
        let mut backend = spec.build(garbage)?;
        let mut oracle = OracleArray::new(n);
        let mut part = RunReport::default();
        run_lockstep(
            backend.as_mut(),
            &mut oracle,
            &ops,
            &mut part,
            Some(&mut latency),
            |k| k + 1,
        );
        report.merge(&part);
    }
    report.latency_ns = Some(latency);
    report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

/// Replays a trace file. `backend` overrides the trace header's backend.
pub fn replay(path: &Path, backend: Option<BackendKind>) -> Result<RunReport, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    replay_str(&text, backend)
}

/// Replays trace text. Traces run at `w = 64`. A randomized run uses the
/// header's `perm` seed bytes if present, otherwise a permutation drawn
/// from the header's `seed`. The report carries no timing, so replaying a
/// trace twice gives identical output.
pub fn replay_str(text: &str, backend: Option<BackendKind>) -> Result<RunReport, HarnessError> {
    let trace = OpTrace::parse(text)?;
    let h = &trace.header;
    let kind = backend.unwrap_or(h.backend);
    let mut spec = BackendSpec::new(kind, h.n, 64)?;
    if kind == BackendKind::Randomized {
        let params = spec.family()?;
        let perm = match &h.perm {
            Some(bytes) => {
                Permutation::new(params, PermutationSeed::from_bytes(&params, bytes)?)?
            }
            None => Permutation::sample(params, &mut ChaCha8Rng::seed_from_u64(h.seed)),
        };
        spec = spec.with_perm(perm);
    }
    let mut backend = spec.build(None)?;
    let mut oracle = OracleArray::new(h.n);
    let mut report = base_report("replay", &spec, 1);
    run_lockstep(
        backend.as_mut(),
        &mut oracle,
        &trace.ops,
        &mut report,
        None,
        |k| trace.line_of(k),
    );
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct PermTestConfig {
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    /// Largest accepted pointwise deviation.
    pub threshold: f64,
    /// The fixed input pair whose images are tallied.
    pub pair: (u64, u64),
    /// Use the identity member instead of sampling; a sanity path where
    /// every sample yields the same image pair.
    pub identity: bool,
}

impl PermTestConfig {
    pub fn new(n: u64, samples: u64) -> Self {
        PermTestConfig {
            n,
            samples,
            seed: 0,
            threshold: 0.01,
            pair: (0, 1),
            identity: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermReport {
    pub n: u64,
    pub p: u64,
    pub samples: u64,
    pub pair: (u64, u64),
    pub seed_bits: u64,
    pub bijectivity_failures: u64,
    pub deviation: f64,
    pub threshold: f64,
}

impl PermReport {
    pub fn passed(&self) -> bool {
        self.bijectivity_failures == 0 && self.deviation <= self.threshold
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command=perm-test");
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "p={}", self.p);
        let _ = writeln!(s, "samples={}", self.samples);
        let _ = writeln!(s, "pair={},{}", self.pair.0, self.pair.1);
        let _ = writeln!(s, "seed_bits={}", self.seed_bits);
        let _ = writeln!(s, "bijectivity_failures={}", self.bijectivity_failures);
        let _ = writeln!(s, "uniform_pair_probability={:.6e}", uniform_pair(self.n));
        let _ = writeln!(s, "deviation={:.6e}", self.deviation);
        let _ = writeln!(s, "threshold={}", self.threshold);
        let _ = writeln!(s, "result={}", if self.passed() { "pass" } else { "fail" });
        s
    }
}

fn uniform_pair(n: u64) -> f64 {
    1.0 / (n as f64 * (n as f64 - 1.0))
}

fn is_bijective(perm: &Permutation, seen: &mut [bool]) -> bool {
    seen.fill(false);
    for x in 0..perm.n() {
        let y = perm.eval(x);
        if y >= perm.n() || std::mem::replace(&mut seen[y as usize], true) {
            return false;
        }
    }
    true
}

/// Maximum over all ordered pairs `(y1, y2)` of `|freq − u|`, where `u` is
/// `1/(n(n−1))` for distinct pairs and 0 for `y1 == y2`. Pairs never
/// observed count as deviation `u`.
pub fn pairwise_deviation(n: u64, pairs: impl IntoIterator<Item = (u64, u64)>) -> f64 {
    let u = uniform_pair(n);
    let dense = n <= 4096;
    let mut grid = if dense { vec![0u64; (n * n) as usize] } else { Vec::new() };
    let mut sparse: HashMap<(u64, u64), u64> = HashMap::new();
    let mut total = 0u64;
    for (a, b) in pairs {
        total += 1;
        if dense {
            grid[(a * n + b) as usize] += 1;
        } else {
            *sparse.entry((a, b)).or_default() += 1;
        }
    }
    if total == 0 {
        return u;
    }
    let dev = |a: u64, b: u64, c: u64| {
        let target = if a == b { 0.0 } else { u };
        (c as f64 / total as f64 - target).abs()
    };
    if dense {
        (0..n * n)
            .map(|k| dev(k / n, k % n, grid[k as usize]))
            .fold(0.0, f64::max)
    } else {
        let observed_distinct = sparse.keys().filter(|(a, b)| a != b).count() as u64;
        let unobserved = if observed_distinct < n * (n - 1) { u } else { 0.0 };
        sparse
            .iter()
            .map(|(&(a, b), &c)| dev(a, b, c))
            .fold(unobserved, f64::max)
    }
}

/// Samples family members, checks each is a bijection, and estimates the
/// pairwise deviation for a fixed input pair.
pub fn perm_test(cfg: &PermTestConfig) -> Result<PermReport, HarnessError> {
    let (x1, x2) = cfg.pair;
    if cfg.n < 2 || x1 == x2 || x1 >= cfg.n || x2 >= cfg.n {
        return Err(HarnessError::Invalid(
            "perm-test needs n >= 2 and two distinct inputs below n".into(),
        ));
    }
    if cfg.samples == 0 {
        return Err(HarnessError::Invalid("samples must be positive".into()));
    }
    let params = FamilyParams::new(cfg.n)?;
    const CHUNK: u64 = 1 << 14;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<(u64, Vec<(u64, u64)>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = sequence_rng(cfg.seed, c as usize);
            let count = CHUNK.min(cfg.samples - c * CHUNK);
            let mut seen = vec![false; cfg.n as usize];
            let mut failures = 0;
            let mut images = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let perm = if cfg.identity {
                    Permutation::identity(params)
                } else {
                    Permutation::sample(params, &mut rng)
                };
                if !is_bijective(&perm, &mut seen) {
                    failures += 1;
                }
                images.push((perm.eval(x1), perm.eval(x2)));
            }
            (failures, images)
        })
        .collect();
    let bijectivity_failures = parts.iter().map(|(f, _)| f).sum();
    let deviation = pairwise_deviation(
        cfg.n,
        parts.into_iter().flat_map(|(_, images)| images),
    );
    Ok(PermReport {
        n: cfg.n,
        p: params.p(),
        samples: cfg.samples,
        pair: cfg.pair,
        seed_bits: params.seed_bits(),
        bijectivity_failures,
        deviation,
        threshold: cfg.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_parsing() {
        assert_eq!("60:35:5".parse::<Mix>().unwrap(), Mix::default());
        assert_eq!(
            "1:1:0".parse::<Mix>().unwrap(),
            Mix { write: 1, read: 1, fill: 0 }
        );
        assert!("1:2".parse::<Mix>().is_err());
        assert!("0:0:0".parse::<Mix>().is_err());
        assert!("a:b:c".parse::<Mix>().is_err());
    }

    #[test]
    fn generated_ops_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ops = generate_ops(50, 8, 2000, Mix::default(), &mut rng);
        for op in &ops {
            match *op {
                Op::Fill(v) => assert!(v < 256),
                Op::Write(i, v) => assert!((1..=50).contains(&i) && v < 256),
                Op::Read(i, e) => assert!((1..=50).contains(&i) && e.is_none()),
            }
        }
        let fills = ops.iter().filter(|o| matches!(o, Op::Fill(_))).count();
        assert!(fills > 40 && fills < 200, "{fills}");
    }

    #[test]
    fn deviation_of_exact_uniform_is_zero() {
        let n = 4;
        let pairs: Vec<(u64, u64)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        assert!(pairwise_deviation(n, pairs.iter().copied()) < 1e-15);
        // A single repeated pair: that cell is 1 − u off.
        let d = pairwise_deviation(n, std::iter::repeat_n((0, 1), 100));
        assert!((d - (1.0 - 1.0 / 12.0)).abs() < 1e-12);
        // Sparse path agrees on the unobserved-pair rule.
        let d = pairwise_deviation(5000, [(1, 2)]);
        assert!((d - (1.0 - uniform_pair(5000))).abs() < 1e-12);
    }

    #[test]
    fn identity_sanity_path() {
        let cfg = PermTestConfig {
            identity: true,
            ..PermTestConfig::new(10, 1000)
        };
        let r = perm_test(&cfg).unwrap();
        assert_eq!(r.bijectivity_failures, 0);
        assert!((r.deviation - (1.0 - 1.0 / 90.0)).abs() < 1e-12);
        assert!(!r.passed());
    }

    #[test]
    fn fuzz_is_deterministic_and_clean() {
        let mut cfg = FuzzConfig::new(BackendKind::Amortized, 400);
        cfg.ops = 2000;
        cfg.seqs = 4;
        cfg.seed = 3;
        let a = fuzz(&cfg).unwrap();
        let b = fuzz(&cfg).unwrap();
        assert_eq!(a.mismatches, 0);
        assert_eq!(a.ops(), 8000);
        assert_eq!(
            RunReport { wall_ms: None, ..a },
            RunReport { wall_ms: None, ..b }
        );
    }

    #[test]
    fn fuzz_rejects_small_n() {
        let cfg = FuzzConfig::new(BackendKind::Amortized, 349);
        assert!(matches!(fuzz(&cfg), Err(HarnessError::Build(_))));
    }

    #[test]
    fn lowblock_order_is_inverse_image_order() {
        let params = FamilyParams::new(1200).unwrap();
        let perm = Permutation::sample(params, &mut ChaCha8Rng::seed_from_u64(5));
        let order = low_block_order(&perm);
        for (pos, &i) in order.iter().enumerate() {
            assert_eq!(perm.eval(i as u64 - 1), pos as u64);
        }
    }
}
