// The classic 3n+2 word fillable array, and shrinking it with `delete`.

use fillable::{FillableArray, FolkloreArray, FolkloreRegion, WordArena};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let mut arena = WordArena::new(FolkloreRegion::words_for(n), 16)?;
    // Whatever the memory held before, the structure ignores it.
    arena.fill_garbage(42);
    let mut a = FolkloreArray::new(arena, n);
    a.fill(7);
    a.write(3, 100);
    assert_eq!(a.read(3), 100);
    assert_eq!(a.read(4), 7);
    a.end_op();
    println!("folklore array: read(3)={} read(4)={}", a.read(3), a.read(4));

    // As a region inside a larger arena: dropping the last index releases
    // the last three words and never touches them again.
    let mut arena = a.into_arena();
    let mut region = FolkloreRegion::attach(&arena, 0, n);
    let tail = arena.peek(region.end() - 1);
    region.delete(&mut arena);
    region.write(&mut arena, 0, 5);
    assert_eq!(arena.peek(FolkloreRegion::words_for(n) - 1), tail);
    println!(
        "after delete: length {} using {} words, index 3 reads {}",
        region.len(),
        region.end(),
        region.read(&mut arena, 2)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("folklore example");
}
