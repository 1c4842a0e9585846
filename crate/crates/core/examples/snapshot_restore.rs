// The entire state is the n words plus the mode bit: a snapshot of
// exactly n*w + 1 bits restores the structure.

use fillable::{AmortizedFillable, FillableArray, Snapshot, WordArena};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, w) = (500, 12);
    let mut a = AmortizedFillable::new(WordArena::new(n, w)?)?;
    a.fill(9);
    for i in 1..=30 {
        a.write(i * 7, i as u64);
    }
    let snap = a.arena().expect("arena").snapshot();
    assert_eq!(snap.bit_len(), n * w as usize + 1);
    let bytes = snap.to_bytes();
    println!("snapshot: {} bits in {} bytes", snap.bit_len(), bytes.len());

    let restored = Snapshot::from_bytes(n, w, &bytes)?.restore();
    let mut b = AmortizedFillable::attach(restored)?;
    for i in 1..=n {
        assert_eq!(a.read(i), b.read(i));
    }
    println!("restored copy agrees on all {n} entries, naive mode: {}", b.is_naive());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("snapshot example");
}
