//! Exhaustive ideal-membership claim check at p = 5, zero and random tails.

use mo8_quotients::obstruction::{ClaimBudget, random_decomposable_tail, verify_claim};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = ClaimBudget::default();
    let report = verify_claim(5, None, &budget)?;
    println!("zero tail: {} cells, passed {}, digest {}", report.cells.len(), report.passed, report.digest());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let tail = random_decomposable_tail(5, &mut rng, 3)?;
        let r = verify_claim(5, Some(tail), &budget)?;
        println!("tail {}: passed {}", r.tail, r.passed);
    }
    Ok(())
}
