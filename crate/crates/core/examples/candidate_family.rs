//! Certify and re-verify every candidate of the structured family.
//!
//! Usage: `cargo run --release --example candidate_family -- [p]`

use std::collections::BTreeMap;

use mo8_quotients::obstruction::{candidate_family, certify_family, verify_certificate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u64 = std::env::args().nth(1).map_or(Ok(5), |s| s.parse())?;
    let family = candidate_family(p)?;
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for (c, cert) in family.iter().zip(certify_family(&family)) {
        let line = match cert {
            Ok(cert) => {
                let sound = verify_certificate(&cert)?.sound;
                *tally.entry(format!("{:?}/{:?}", cert.branch, cert.kind)).or_default() += 1;
                format!("{:?} {:?} at {}, sound {sound}", cert.branch, cert.kind, cert.degree)
            }
            Err(e) => format!("no certificate: {e}"),
        };
        println!("{:<40} {line}", c.label);
    }
    println!("{} candidates: {tally:?}", family.len());
    Ok(())
}
