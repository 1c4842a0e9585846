// The deterministic scheme: O(1) read and fill, amortized O(1) write, in
// exactly n words plus one bit.

use fillable::{AmortizedFillable, FillableArray, WordArena};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    let mut a = AmortizedFillable::new(WordArena::new(n, 64)?)?;
    a.fill(7);
    println!("fill cost: {} accesses", a.end_op());

    // Writes go into per-block linked lists until floor(n/50) distinct
    // indices are written; that write converts the array to plain storage.
    let capacity = a.layout().capacity;
    for i in 1..=capacity {
        a.write(i * 37 % n + 1, i as u64);
        let cost = a.end_op();
        if let Some(ev) = a.drain_events().first() {
            println!("write {i} converted {} blocks in {cost} accesses", ev.remaining_blocks);
        }
    }
    assert!(a.is_naive());
    // Never-written entries still read the last fill value.
    assert_eq!(a.read(2), 7);
    println!("read(2) = {} in {} accesses", a.read(2), a.end_op());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("amortized example");
}
