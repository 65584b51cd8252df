//! Invariant factors of integer matrices over Q, Z_(p) and F_p.

use mo8_quotients::coeffs::{BaseRing, Matrix, Scalar, membership, smith_normal_form};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows: &[&[i64]] = &[&[5, 10, 15], &[10, 55, 30], &[-5, 45, -15]];
    for base in [BaseRing::Rational, BaseRing::local(5)?, BaseRing::local(7)?, BaseRing::prime_field(5)?] {
        let a = Matrix::from_ints(base, rows);
        let snf = smith_normal_form(&a);
        let factors: Vec<String> = snf.invariant_factors().iter().map(ToString::to_string).collect();
        println!("{base:?}: invariant factors [{}], cokernel {}", factors.join(", "), snf.cokernel_profile());
    }

    let base = BaseRing::local(5)?;
    let a = Matrix::from_ints(base, &[&[5, 0], &[0, 1]]);
    for target in [[10, 3], [1, 0]] {
        let v: Vec<Scalar> = target.iter().map(|&c| Scalar::from_int(base, c)).collect();
        match membership(&a, &v)? {
            Some(coeffs) => println!("{target:?} = A * {:?}", coeffs.iter().map(ToString::to_string).collect::<Vec<_>>()),
            None => println!("{target:?} is not in the column span over Z_(5)"),
        }
    }
    Ok(())
}
