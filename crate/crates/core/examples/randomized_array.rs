// The randomized scheme: every write converts a few blocks, so no single
// write pays for a linear-time conversion in expectation.

use fillable::permutation::{FamilyParams, Permutation};
use fillable::{FillableArray, RandomizedFillable, WordArena};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 20_000;
    let perm = Permutation::sample(FamilyParams::new(n as u64)?, &mut ChaCha8Rng::seed_from_u64(1));
    let mut r = RandomizedFillable::new(WordArena::new(n, 64)?, perm)?;
    r.fill(3);
    r.end_op();
    println!("blocks in list mode after fill: {}", r.remaining_blocks());

    let mut i = 1;
    while !r.is_naive() {
        r.write(i, i as u64 * 10);
        let cost = r.end_op();
        if i % 10 == 0 {
            println!("write {i}: {cost} accesses, {} blocks left", r.remaining_blocks());
        }
        for ev in r.drain_events() {
            println!("write {i} finished with a full conversion at k={}", ev.remaining_blocks);
        }
        i += 1;
    }
    assert_eq!(r.read(1), 10);
    assert_eq!(r.read(n), 3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("randomized example");
}
