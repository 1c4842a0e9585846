// Writing an operation trace and replaying it with expected values.

use fillable::harness::{replay_str, BackendKind, Op, OpTrace, TraceHeader};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let trace = OpTrace::new(
        TraceHeader { n: 400, backend: BackendKind::Amortized, seed: 1, perm: None },
        vec![
            Op::Read(5, Some(0)),
            Op::Fill(7),
            Op::Write(5, 9),
            Op::Read(5, Some(9)),
            Op::Read(6, Some(7)),
        ],
    );
    let text = trace.to_string();
    print!("{text}");
    let report = replay_str(&text, None)?;
    assert!(report.passed());
    // Replays carry no timing, so they are byte-identical.
    assert_eq!(report.render(), replay_str(&text, None)?.render());

    let wrong = text.replace("R 6 7", "R 6 8");
    let failed = replay_str(&wrong, Some(BackendKind::Trivial))?;
    println!("wrong expectation reported at lines {:?}", failed.expectation_failures);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("trace example");
}
