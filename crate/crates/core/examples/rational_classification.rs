//! Rational shape checks and the certificates they lead to.

use mo8_quotients::obstruction::{RationalSequence, SequenceSource, classify_sequence, rational_witness, verify_certificate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound = 32;
    let cases: [&[&str]; 6] = [
        &["x4", "x5", "x6", "x7", "x8"],
        &["x2", "x4", "x5", "x6", "x7", "x8"],
        &["x4", "x6", "x7", "x8"],
        &["x4", "x5", "0@24", "x6", "x7", "x8"],
        &["x4", "x5", "x2*x4", "x7", "x8"],
        &["x4", "x5", "x5 + x2*x3", "x6", "x7", "x8"],
    ];
    for elements in cases {
        let seq = RationalSequence { bound, elements: elements.iter().map(|s| s.to_string()).collect() };
        let ring = seq.ring()?;
        let class = classify_sequence(&ring, &seq.parse(&ring)?, bound)?;
        print!("{:<40} {:?}", elements.join(", "), class.verdict);
        if let Some(case) = class.case {
            let cert = rational_witness(&SequenceSource::Rational(seq))?;
            let sound = verify_certificate(&cert)?.sound;
            print!(" {} at degree {:?}: {:?} certificate, sound {sound}", case.label(), class.degree, cert.kind);
        }
        println!();
    }
    Ok(())
}
