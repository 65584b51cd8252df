use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::NonIsoCertificate;
use super::source::LocalSequence;
use super::theorem::theorem_certify;
use crate::coeffs::Scalar;
use crate::error::Result;
use crate::graded::{PresentedRing, RingElement};
use crate::models::{HoveyPresentation, critical_degree, critical_index, tmf_model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modification {
    Canonical,
    KernelAdjusted,
    UnitScaling,
    DecomposableShift,
    PrimeMultiple,
    TorsionPair,
    Tail,
    RationalViolation,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub modification: Modification,
    pub sequence: LocalSequence,
}

struct Builder {
    prime: u64,
    top: u32,
    n: u32,
    free: PresentedRing,
    out: Vec<Candidate>,
}

impl Builder {
    fn new(prime: u64) -> Result<Self> {
        let top = critical_degree(prime);
        Ok(Builder { prime, top, n: critical_index(prime), free: HoveyPresentation::free_ring(prime, top)?, out: Vec::new() })
    }

    fn el(&self, s: &str) -> RingElement {
        self.free.parse(s).expect("candidate expression parses")
    }

    fn scalar(&self, c: i64) -> Scalar {
        Scalar::from_int(self.free.base(), c)
    }

    /// `x4, ..., x_{n-1}, y_n`.
    fn canonical(&self) -> Vec<RingElement> {
        let mut v: Vec<RingElement> = (4..self.n).map(|k| self.el(&format!("x{k}"))).collect();
        v.push(self.el(&format!("y{}", self.n)));
        v
    }

    /// Position of the degree-`4k` element in the canonical list.
    fn at(&self, k: u32) -> usize {
        (k - 4) as usize
    }

    fn decomposable(&self, rng: &mut ChaCha8Rng, k: u32) -> RingElement {
        let monomials: Vec<_> = self
            .free
            .monomials_of_degree(4 * k)
            .expect("degree in range")
            .into_iter()
            .filter(|m| m.total_exponent() >= 2)
            .collect();
        let m = monomials.choose(rng).expect("decomposables exist from degree 16").clone();
        RingElement::monomial(m, self.scalar(rng.gen_range(1..=3)))
    }

    fn push(&mut self, label: impl Into<String>, modification: Modification, xs: &[RingElement], tail: &str) {
        let elements = xs.iter().map(|x| self.free.format(x)).collect();
        self.push_raw(label, modification, elements, tail);
    }

    fn push_raw(&mut self, label: impl Into<String>, modification: Modification, elements: Vec<String>, tail: &str) {
        let sequence = LocalSequence { prime: self.prime, bound: self.top, tail: tail.into(), elements };
        self.out.push(Candidate { label: label.into(), modification, sequence });
    }
}

/// The single sequence `(x4, ..., x_{n-1}, y_n)` with zero tail.
pub fn canonical_family(prime: u64) -> Result<Vec<Candidate>> {
    let mut b = Builder::new(prime)?;
    let xs = b.canonical();
    b.push("canonical", Modification::Canonical, &xs, "0");
    Ok(b.out)
}

/// A structured family covering both branches and every modification type, at `D = 2(p + p^2)`.
pub fn candidate_family(prime: u64) -> Result<Vec<Candidate>> {
    let mut b = Builder::new(prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(prime);
    let (p, n) = (prime as i64, b.n);
    let canon = b.canonical();
    let last = canon.len() - 1;
    let pick = |rng: &mut ChaCha8Rng| rng.gen_range(4..n);

    b.push("canonical", Modification::Canonical, &canon, "0");

    let tmf = tmf_model(b.free.base(), b.top)?;
    let mut adjusted = Vec::new();
    for (i, x) in canon.iter().enumerate() {
        let image = tmf.full_sum(4 * (i as u32 + 4))?;
        adjusted.push(x.sub(&tmf.pull_back(&b.free, &image)?));
    }
    b.push("kernel-adjusted", Modification::KernelAdjusted, &adjusted, "0");

    for u in [2, -1, 3] {
        let s = b.scalar(u);
        let all: Vec<_> = canon.iter().map(|x| x.scale(&s)).collect();
        b.push(format!("scale all by {u}"), Modification::UnitScaling, &all, "0");
        let k = pick(&mut rng);
        let mut one = canon.clone();
        one[b.at(k)] = one[b.at(k)].scale(&s);
        b.push(format!("scale x{k} by {u}"), Modification::UnitScaling, &one, "0");
    }
    let mut top = canon.clone();
    top[last] = top[last].scale(&b.scalar(p + 1));
    b.push(format!("scale y{n} by {}", p + 1), Modification::UnitScaling, &top, "0");

    for k in [4, 5, 6, n - 1] {
        let mut xs = canon.clone();
        let d = b.decomposable(&mut rng, k);
        xs[b.at(k)] = xs[b.at(k)].add(&d);
        b.push(format!("shift x{k}"), Modification::DecomposableShift, &xs, "0");
    }
    let shifted: Vec<_> = (4..=n).map(|k| canon[b.at(k)].add(&b.decomposable(&mut rng, k))).collect();
    b.push("shift all", Modification::DecomposableShift, &shifted, "0");
    let mut xs = canon.clone();
    xs[last] = xs[last].add(&b.decomposable(&mut rng, n));
    b.push(format!("shift y{n}"), Modification::DecomposableShift, &xs, "0");

    let ps = b.scalar(p);
    let mut ks: Vec<u32> = vec![4, 5, 6, 7, n - 1];
    while ks.len() < 8 {
        let k = pick(&mut rng);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    for &k in &ks {
        let mut xs = canon.clone();
        xs[b.at(k)] = xs[b.at(k)].scale(&ps);
        b.push(format!("{p}*x{k}"), Modification::PrimeMultiple, &xs, "0");
    }
    for k in [5, n - 2] {
        let mut xs = canon.clone();
        xs[b.at(k)] = xs[b.at(k)].scale(&ps).add(&b.decomposable(&mut rng, k));
        b.push(format!("{p}*x{k} + decomposable"), Modification::PrimeMultiple, &xs, "0");
    }
    let mut xs = canon.clone();
    xs[b.at(6)] = xs[b.at(6)].scale(&b.scalar(p * p));
    b.push(format!("{}*x6", p * p), Modification::PrimeMultiple, &xs, "0");
    let mut xs: Vec<_> = canon.iter().map(|x| x.scale(&b.scalar(-2))).collect();
    xs[b.at(8)] = xs[b.at(8)].scale(&ps);
    b.push(format!("scaled, then {p}*x8"), Modification::PrimeMultiple, &xs, "0");

    let (y, z) = (format!("y{n}"), format!("z{n}"));
    let tops = [
        z.clone(),
        format!("2*{y} - {z}"),
        format!("{y} + {p}*{z}"),
        format!("{y} + {z}"),
        format!("{p}*{y} + {p}*{z}"),
        format!("{}*{y} - {p}*{z}", p + 1),
        format!("{z} + x2*x{}", n - 2),
        format!("{z} - {y}"),
    ];
    for t in &tops {
        let mut xs = canon.clone();
        xs[last] = b.el(t);
        b.push(format!("top {t}"), Modification::TorsionPair, &xs, "0");
    }

    let tails = [format!("{p}*x2*x{}", n - 2), format!("{p}*x3*x{}", n - 3), format!("-{p}*x4*x{}", n - 4)];
    for (i, tail) in tails.iter().enumerate() {
        b.push(format!("tail {tail}"), Modification::Tail, &canon, tail);
        let mut xs = canon.clone();
        xs[last] = b.el(&tops[i % 3]);
        b.push(format!("tail {tail}, top {}", tops[i % 3]), Modification::Tail, &xs, tail);
    }
    let mut xs = canon.clone();
    xs[b.at(5)] = xs[b.at(5)].scale(&ps);
    b.push(format!("tail {}, {p}*x5", tails[0]), Modification::Tail, &xs, &tails[0]);
    let mut xs = canon.clone();
    xs[last] = b.el(&format!("{z} - {y}"));
    b.push(format!("tail {}, top {z} - {y}", tails[1]), Modification::Tail, &xs, &tails[1]);

    let canon_strings: Vec<String> = canon.iter().map(|x| b.free.format(x)).collect();
    
    let mut e = canon_strings.clone();
    e.insert(0, "x2".into());
    b.push_raw("with x2", Modification::RationalViolation, e, "0");
    let mut e = canon_strings.clone();
    e.insert(0, "0@12".into());
    b.push_raw("with 0@12", Modification::RationalViolation, e, "0");
    for k in [5, n - 1] {
        let mut e = canon_strings.clone();
        e.remove(b.at(k));
        b.push_raw(format!("without x{k}"), Modification::RationalViolation, e, "0");
    }
    let mut e = canon_strings.clone();
    e[b.at(6)] = "x2*x4".into();
    b.push_raw("x6 replaced by x2*x4", Modification::RationalViolation, e, "0");
    let mut e = canon_strings.clone();
    e.push("0@20".into());
    b.push_raw("extra 0@20", Modification::RationalViolation, e, "0");
    let mut e = canon_strings.clone();
    e.insert(b.at(7), "2*x7".into());
    b.push_raw("x7 twice", Modification::RationalViolation, e, "0");
    let mut e = canon_strings.clone();
    e.insert(b.at(7), "x7 + x2*x5".into());
    b.push_raw("x7 and x7 + x2*x5", Modification::RationalViolation, e, "0");
    let mut e = canon_strings.clone();
    e[0] = "x2^2".into();
    b.push_raw("x4 replaced by x2^2", Modification::RationalViolation, e, "0");

    for i in 0..6 {
        let mut xs: Vec<_> = canon.iter().map(|x| x.scale(&b.scalar([1, 2, -1][i % 3]))).collect();
        let k = pick(&mut rng);
        xs[b.at(k)] = xs[b.at(k)].add(&b.decomposable(&mut rng, k));
        if i % 2 == 0 {
            let j = pick(&mut rng);
            xs[b.at(j)] = xs[b.at(j)].scale(&ps);
        }
        xs[last] = b.el(&tops[i % 5]).add(&b.decomposable(&mut rng, n));
        let tail = if i % 3 == 0 { tails[i % 3].as_str() } else { "0" };
        b.push(format!("mixed {}", i + 1), Modification::Mixed, &xs, tail);
    }
    Ok(b.out)
}

/// Certify each candidate independently, in parallel.
pub fn certify_family(candidates: &[Candidate]) -> Vec<Result<NonIsoCertificate>> {
    candidates.par_iter().map(|c| theorem_certify(&c.sequence)).collect()
}
