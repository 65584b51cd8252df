//! A presented graded ring: degree pieces, Hilbert function, ideal membership, indecomposables.

use mo8_quotients::coeffs::BaseRing;
use mo8_quotients::graded::{Generator, IdealSpan, PresentedRing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gens = vec![Generator::new("a", 4), Generator::new("b", 8), Generator::new("c", 12)];
    let base = BaseRing::local(5)?;
    let relation = PresentedRing::polynomial(base, gens.clone(), 36)?.parse("5*c - a*b")?;
    let ring = PresentedRing::new(base, gens, vec![relation], 36)?;

    for d in (4..=36).step_by(4) {
        println!(
            "degree {d:>2}: {} monomials, piece {}, indecomposables {}",
            ring.dimension(d)?,
            ring.profile(d)?,
            ring.indecomposable_quotient(d)?
        );
    }

    let ideal = IdealSpan::new(&ring, vec![ring.parse("a^2")?, ring.parse("b")?])?;
    for e in ["a^4 + 2*b^2", "a*b", "c", "5*c"] {
        println!("{e} in (a^2, b): {}", ideal.contains(&ring.parse(e)?)?);
    }
    if let Some(coeffs) = ring.ideal_membership(ideal.generators(), &ring.parse("a^2*c + 5*b*c")?)? {
        let parts: Vec<String> = coeffs.iter().map(|c| ring.format(c)).collect();
        println!("a^2*c + 5*b*c = ({}) * (a^2, b)", parts.join(", "));
    }
    Ok(())
}
