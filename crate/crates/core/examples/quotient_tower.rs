//! The three stage outcomes and a tower report.

use std::sync::Arc;

use mo8_quotients::coeffs::BaseRing;
use mo8_quotients::graded::{Generator, PresentedRing};
use mo8_quotients::quotient::{
    OrderPolicy, SeqElement, SequenceSpec, TowerReport, algebra_structure_criteria, quotient_by_element,
    quotient_by_sequence, ring_module,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Arc::new(PresentedRing::polynomial(
        BaseRing::Rational,
        vec![Generator::new("a", 8), Generator::new("b", 12)],
        32,
    )?);
    let m = ring_module(&ring)?;

    for entry in ["a", "0@8", "a^2"] {
        let x = SeqElement::parse(&ring, entry)?;
        let (_, stage) = quotient_by_element(&m, &x)?;
        println!("{entry:>4}: {:?}, degree 9 becomes {}", stage.status, stage.output.get(9));
    }
    let (truncated, _) = quotient_by_element(&m, &SeqElement::parse(&ring, "a^2")?)?;
    let (_, stage) = quotient_by_element(&truncated, &SeqElement::parse(&ring, "a")?)?;
    println!("a on R/(a^2): {:?}, degree 17 becomes {}", stage.status, stage.output.get(17));

    let spec = SequenceSpec::parse(&ring, &["b", "a", "a*b"])?;
    let tower = quotient_by_sequence(&m, &spec, OrderPolicy::Sort)?;
    for s in &tower.stages {
        println!("stage {} {} ({:?})", s.index, s.expression, s.status);
    }
    let criteria = algebra_structure_criteria(&tower);
    println!("low degrees vanish: {}, concentrated and regular: {}", criteria.low_degrees_vanish, criteria.concentrated_mod4_regular);
    println!("report digest {}", TowerReport::of(&tower).digest());
    Ok(())
}
