//! Property tests: invariant factors, stage laws, connectivity, order invariance over fields, truncation.

mod common;

use common::{NAMES, Poly, poly_string, polynomial_ring, random_degrees, random_poly, weighted_monomials};
use mo8_quotients::coeffs::{BaseRing, Matrix, Scalar, smith_normal_form};
use mo8_quotients::quotient::{
    OrderPolicy, SeqElement, SequenceSpec, StageStatus, check_connectivity_lemma, check_order_invariance,
    quotient_by_element, quotient_by_sequence, ring_module,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn base_of(tag: u8) -> BaseRing {
    match tag % 4 {
        0 => BaseRing::Rational,
        1 => BaseRing::Local(5),
        2 => BaseRing::Local(7),
        _ => BaseRing::PrimeField(5),
    }
}

fn matrix(base: BaseRing, entries: &[i64], cols: usize) -> Matrix {
    let rows: Vec<&[i64]> = entries.chunks(cols).collect();
    Matrix::from_ints(base, &rows)
}

/// Upper unitriangular times lower unitriangular: invertible over every base ring.
fn unimodular(base: BaseRing, n: usize, upper: &[i64], lower: &[i64]) -> Matrix {
    let mut u = Matrix::identity(base, n);
    let mut l = Matrix::identity(base, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, Scalar::from_int(base, upper[k % upper.len()]));
            l.set(j, i, Scalar::from_int(base, lower[k % lower.len()]));
            k += 1;
        }
    }
    u.mul(&l).unwrap()
}

/// A random ring, a random element sequence, all over `base`.
fn random_instance(seed: u64, base: BaseRing, max_len: usize) -> (std::sync::Arc<mo8_quotients::graded::PresentedRing>, Vec<SeqElement>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 2 * rng.gen_range(6..=10);
    let degrees = random_degrees(&mut rng, 3, &[4, 6, 8]);
    let ring = polynomial_ring(base, &degrees, bound);
    let len = rng.gen_range(1..=max_len);
    let mut xs = Vec::new();
    for _ in 0..len {
        let options: Vec<u32> = (4..=12).filter(|&d| !weighted_monomials(&degrees, d).is_empty()).collect();
        let d = *options.choose(&mut rng).unwrap();
        let f: Poly = if rng.gen_bool(0.15) { Poly::new() } else { random_poly(&mut rng, &degrees, d, (-3, 3), 0.7) };
        xs.push(SeqElement::parse(&ring, &format!("{}@{d}", poly_string(&NAMES, &f))).unwrap());
    }
    (ring, xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_factors_form_a_divisibility_chain(tag in 0u8..4, entries in prop::collection::vec(-30i64..30, 12)) {
        let base = base_of(tag);
        let snf = smith_normal_form(&matrix(base, &entries, 4));
        let factors = snf.invariant_factors();
        for pair in factors.windows(2) {
            prop_assert!(pair[0].divides(&pair[1]), "{} does not divide {}", pair[0], pair[1]);
        }
        prop_assert!(factors.iter().all(|f| !f.is_zero()));
    }

    #[test]
    fn cokernel_profile_is_invariant_under_unimodular_change(
        tag in 0u8..4,
        entries in prop::collection::vec(-12i64..12, 12),
        upper in prop::collection::vec(-4i64..4, 6),
        lower in prop::collection::vec(-4i64..4, 6),
    ) {
        let base = base_of(tag);
        let a = matrix(base, &entries, 4);
        let left = unimodular(base, 3, &upper, &lower);
        let right = unimodular(base, 4, &lower, &upper);
        let b = left.mul(&a).unwrap().mul(&right).unwrap();
        prop_assert_eq!(smith_normal_form(&a).cokernel_profile(), smith_normal_form(&b).cokernel_profile());
    }

    #[test]
    fn local_profiles_rationalize_to_rational_profiles(p in prop::sample::select(vec![5u64, 7, 11]), entries in prop::collection::vec(-40i64..40, 12)) {
        let local = smith_normal_form(&matrix(BaseRing::Local(p), &entries, 4)).cokernel_profile();
        let rational = smith_normal_form(&matrix(BaseRing::Rational, &entries, 4)).cokernel_profile();
        prop_assert_eq!(local.rationalized(), rational);
        prop_assert!(local.torsion.iter().all(|t| t % p == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stages_leave_low_degrees_unchanged(seed in any::<u64>(), tag in 0u8..4) {
        let (ring, xs) = random_instance(seed, base_of(tag), 3);
        let mut m = ring_module(&ring).unwrap();
        for x in &xs {
            prop_assert!(check_connectivity_lemma(&m, x).unwrap());
            m = quotient_by_element(&m, x).unwrap().0;
        }
    }

    #[test]
    fn field_stages_obey_the_dimension_law(seed in any::<u64>()) {
        let (ring, xs) = random_instance(seed, BaseRing::PrimeField(5), 3);
        let bound = ring.truncation();
        let mut m = ring_module(&ring).unwrap();
        for x in &xs {
            let (out, stage) = quotient_by_element(&m, x).unwrap();
            let d = x.degree;
            for k in 0..=bound {
                let shifted = if k > d { stage.kernel.get(k - d - 1).free_rank } else { 0 };
                prop_assert_eq!(out.profile(k).free_rank, stage.cokernel.get(k).free_rank + shifted);
            }
            if stage.status == StageStatus::ZeroSplit {
                for k in 0..=bound {
                    let shifted = if k > d { m.profile(k - d - 1) } else { Default::default() };
                    prop_assert_eq!(out.profile(k), m.profile(k).sum(&shifted));
                }
            }
            m = out;
        }
    }

    #[test]
    fn field_towers_are_order_invariant(seed in any::<u64>(), p in prop::sample::select(vec![5u64, 7])) {
        let (ring, xs) = random_instance(seed, BaseRing::PrimeField(p), 4);
        let report = check_order_invariance(&ring_module(&ring).unwrap(), &xs, 0, seed).unwrap();
        prop_assert!(report.agree, "{:?}", report.counterexample);
        prop_assert!(report.exhaustive);
    }

    #[test]
    fn raising_the_bound_keeps_lower_degrees(seed in any::<u64>(), tag in 0u8..4) {
        let (ring, xs) = random_instance(seed, base_of(tag), 3);
        let bound = ring.truncation();
        let entries: Vec<String> = xs.iter().map(|x| x.format(&ring)).collect();
        let run = |d: u32| {
            let r = std::sync::Arc::new(ring.truncated(d).unwrap());
            let spec = SequenceSpec::parse(&r, &entries).unwrap();
            quotient_by_sequence(&ring_module(&r).unwrap(), &spec, OrderPolicy::Sort).unwrap().final_profile()
        };
        prop_assert!(run(bound).agrees_through(&run(bound + 8), bound));
    }
}
