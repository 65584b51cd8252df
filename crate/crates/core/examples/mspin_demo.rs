//! A regular kernel sequence for a genus onto Q[delta, epsilon].

use mo8_quotients::cli::mspin_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = mspin_report(24)?;
    println!("sequence {:?}", report.sequence);
    println!("in kernel {}, regular {}", report.in_kernel, report.regularity.regular);
    println!("quotient {:?}", report.quotient_dimensions);
    println!("target   {:?}", report.target_hilbert);
    println!("matches {}", report.matches);
    Ok(())
}
