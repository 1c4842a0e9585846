// Counting arena accesses instead of timing: fill is constant for the
// fillable arrays and linear for the baselines.

use fillable::harness::{bench, BackendKind, BenchConfig, Dist};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [1_000, 100_000] {
        for backend in [BackendKind::Trivial, BackendKind::Amortized, BackendKind::Randomized] {
            let n = n.max(backend.min_n());
            let cfg = BenchConfig {
                ops: 1000,
                dist: Dist::Sequential,
                ..BenchConfig::new(backend, n)
            };
            let r = bench(&cfg)?;
            println!(
                "{backend:>10} n={n:>6}: fill max {:>6}  read max {:>4}  write mean {:>8.2}",
                r.fills.max(),
                r.reads.max(),
                r.writes.mean()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cost example");
}
