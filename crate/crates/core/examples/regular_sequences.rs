//! Regularity with kernel witnesses, including p-torsion over Z_(p).

use std::sync::Arc;

use mo8_quotients::models::mo8_local_presentation;
use mo8_quotients::quotient::{GradedModule, SequenceSpec, is_regular_sequence, ring_module};

fn report(m: &GradedModule, entries: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let spec = SequenceSpec::parse(m.ring(), entries)?;
    let r = is_regular_sequence(m, &spec)?;
    match r.failure {
        None => println!("regular through degree {}", r.checked_through),
        Some(f) => println!(
            "fails at element {} ({}, degree {}): kernel class {} in degree {}",
            f.index, f.element, f.degree, f.witness.expression, f.witness.degree
        ),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = mo8_local_presentation(5, 60, None)?;
    let m = ring_module(&Arc::clone(&h.ring))?;
    let mut xs: Vec<String> = (4..15).map(|k| format!("x{k}")).collect();
    xs.push("y15".into());
    report(&m, &xs)?;
    *xs.last_mut().expect("nonempty") = "z15 - y15".into();
    report(&m, &xs)?;
    Ok(())
}
