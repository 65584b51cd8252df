//! The p-local presentation and where its indecomposables carry torsion.
//!
//! Usage: `cargo run --example hovey_presentation -- [p]`

use mo8_quotients::models::{critical_degree, hovey_torsion_degrees, mo8_indecomposable_profile, mo8_local_presentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u64 = std::env::args().nth(1).map_or(Ok(5), |s| s.parse())?;
    let top = critical_degree(p);
    let h = mo8_local_presentation(p, top, None)?;
    println!("p = {p}, critical index {}, relation {}", h.critical_index, h.ring.format(&h.relation));
    println!("torsion degrees through {top}: {:?}", hovey_torsion_degrees(p, top)?);
    for k in 2..=top / 4 {
        let d = 4 * k;
        let got = h.ring.indecomposable_quotient(d)?;
        let expected = mo8_indecomposable_profile(p, d)?;
        println!("degree {d:>3}: {got}{}", if got == expected { "" } else { "  (unexpected)" });
    }
    Ok(())
}
