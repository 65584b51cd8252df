//! Certificates for the canonical sequence and two modifications at p = 5.

use mo8_quotients::obstruction::{LocalSequence, NonIsoCertificate, theorem_certify, verify_certificate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let canonical = LocalSequence::canonical(5, 60);
    let mut scaled = canonical.clone();
    scaled.elements[3] = "5*x7".into();
    let mut torsion = canonical.clone();
    *torsion.elements.last_mut().expect("nonempty") = "y15 + z15".into();

    for seq in [canonical, scaled, torsion] {
        let cert = theorem_certify(&seq)?;
        println!(
            "{:?} branch, {:?} at degree {}, witness {:?}",
            cert.branch, cert.kind, cert.degree, cert.witness_expression
        );
        let back = NonIsoCertificate::from_json(&cert.to_json())?;
        let report = verify_certificate(&back)?;
        println!("  re-verified after JSON round trip: sound {}", report.sound);
    }
    Ok(())
}
