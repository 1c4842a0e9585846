// Random operation sequences run against the oracle in lockstep.

use fillable::harness::{fuzz, BackendKind, FuzzConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (backend, n) in [(BackendKind::Amortized, 2000), (BackendKind::Randomized, 5000)] {
        let cfg = FuzzConfig {
            ops: 2000,
            seqs: 8,
            seed: 7,
            garbage: true,
            mix: "600:399:1".parse()?,
            ..FuzzConfig::new(backend, n)
        };
        let report = fuzz(&cfg)?;
        assert!(report.passed());
        println!(
            "{backend} n={n}: {} ops, {} mismatches, {} conversions, max read cost {}",
            report.ops(),
            report.mismatches,
            report.conversions.len(),
            report.reads.max()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fuzz example");
}
