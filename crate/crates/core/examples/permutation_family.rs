// The almost pairwise independent permutation family: prime selection,
// evaluation, seed serialization and a small pairwise test.

use fillable::harness::{perm_test, PermTestConfig};
use fillable::permutation::{find_prime, FamilyParams, Permutation, PermutationSeed, THETA};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    println!("prime for n=100: {}", find_prime(100, THETA, &mut rng)?);

    let params = FamilyParams::new(10_000)?;
    let perm = Permutation::sample(params, &mut rng);
    let images: Vec<u64> = (0..5).map(|x| perm.eval(x)).collect();
    println!("n=10000, p={}: F(0..5) = {images:?}", params.p());

    let bytes = perm.seed().to_bytes();
    let back = Permutation::new(params, PermutationSeed::from_bytes(&params, &bytes)?)?;
    assert_eq!(back, perm);
    println!("seed: {} bytes ({} bits of entropy)", bytes.len(), params.seed_bits());

    let report = perm_test(&PermTestConfig::new(10, 20_000))?;
    print!("{}", report.render());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("permutation example");
}
