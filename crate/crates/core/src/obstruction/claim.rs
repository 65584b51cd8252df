use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coeffs::{Lattice, Scalar, SparseVec};
use crate::error::{Error, Result};
use crate::graded::{IdealSpan, PresentedRing, RingElement};
use crate::models::{HoveyPresentation, critical_degree, critical_index, mo8_local_presentation};

pub const CLAIM_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimBudget {
    /// Random combinations tested per cell, on top of the basis.
    pub samples_per_cell: usize,
    /// Stop after this many cells and mark the report partial.
    pub max_cells: Option<usize>,
    pub seed: u64,
}

impl Default for ClaimBudget {
    fn default() -> Self {
        ClaimBudget { samples_per_cell: 8, max_cells: None, seed: 0 }
    }
}

/// One `(i, deg y)` cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCell {
    pub index: u32,
    pub degree: u32,
    pub basis_size: usize,
    /// Basis elements and samples for which `y x_i` lay in the ideal.
    pub hypothesis_held: usize,
    pub samples: usize,
    /// Every `y` with `y x_i` in the ideal lies in the ideal (checked on the whole lattice).
    pub kernel_contained: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFailure {
    pub index: u32,
    pub degree: u32,
    pub element: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub schema_version: u32,
    pub prime: u64,
    pub tail: String,
    pub sequence: Vec<String>,
    pub cells: Vec<ClaimCell>,
    pub failures: Vec<ClaimFailure>,
    pub passed: bool,
    pub partial: bool,
}

impl ClaimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("report serializes")))
    }
}

/// Check `y x_i ∈ (x_4, ..., x_{i-1}, r) ⟹ y ∈ (x_4, ..., x_{i-1}, r)` in the polynomial ring `T`,
/// for `4 <= i <= n` and every degree with `deg(y x_i) <= 4n`, where `x_n = y_n`.
pub fn verify_claim(prime: u64, tail: Option<RingElement>, budget: &ClaimBudget) -> Result<ClaimReport> {
    let top = critical_degree(prime);
    let n = critical_index(prime);
    let h = mo8_local_presentation(prime, top, tail)?;
    let free = HoveyPresentation::free_ring(prime, top)?;
    let relation = h.relation.clone();
    let xs: Vec<RingElement> = (4..n)
        .map(|k| free.generator_named(&format!("x{k}")))
        .chain([free.generator_named(&format!("y{n}"))])
        .collect::<Result<_>>()?;
    let ideals: Vec<IdealSpan> = (4..=n)
        .map(|i| {
            let mut gens = xs[..(i - 4) as usize].to_vec();
            gens.push(relation.clone());
            IdealSpan::new(&free, gens)
        })
        .collect::<Result<_>>()?;

    let mut cells: Vec<(u32, u32)> =
        (4..=n).flat_map(|i| (0..=top - 4 * i).step_by(4).map(move |e| (i, e))).collect();
    let partial = budget.max_cells.is_some_and(|m| m < cells.len());
    if let Some(m) = budget.max_cells {
        cells.truncate(m);
    }
    let results: Vec<(ClaimCell, Vec<ClaimFailure>)> = cells
        .par_iter()
        .map(|&(i, e)| {
            let ideal = &ideals[(i - 4) as usize];
            let x = &xs[(i - 4) as usize];
            check_cell(&free, ideal, x, i, e, budget)
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let cells: Vec<ClaimCell> = results
        .into_iter()
        .map(|(c, f)| {
            failures.extend(f);
            c
        })
        .collect();
    let passed = cells.iter().all(|c| c.passed);
    Ok(ClaimReport {
        schema_version: CLAIM_SCHEMA_VERSION,
        prime,
        tail: h.ring.format(&h.tail),
        sequence: xs.iter().map(|x| free.format(x)).collect(),
        cells,
        failures,
        passed,
        partial,
    })
}

fn check_cell(
    ring: &PresentedRing,
    ideal: &IdealSpan,
    x: &RingElement,
    i: u32,
    e: u32,
    budget: &ClaimBudget,
) -> Result<(ClaimCell, Vec<ClaimFailure>)> {
    let base = ring.base();
    let t = e + 4 * i;
    let basis = ring.basis(e)?;
    let target = ideal.lattice(t)?;
    let source = ideal.lattice(e)?;
    let mut failures = Vec::new();
    let mut held = 0;

    let mut check = |y: RingElement| -> Result<()> {
        if target.contains(&ring.to_vector(&ring.mul(&y, x), t)?) {
            held += 1;
            if !source.contains(&ring.to_vector(&y, e)?) {
                failures.push(ClaimFailure { index: i, degree: e, element: ring.format(&y) });
            }
        }
        Ok(())
    };
    for m in basis.monomials() {
        check(ring.monomial_element(m.clone()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (u64::from(i) << 32) ^ u64::from(e));
    let samples = if basis.is_empty() { 0 } else { budget.samples_per_cell };
    for _ in 0..samples {
        let y = RingElement::from_terms(
            basis.monomials().iter().map(|m| (m.clone(), Scalar::from_int(base, rng.gen_range(-3..=3)))),
        );
        check(y)?;
    }

    // All y with y x in the ideal: split the graph of multiplication.
    let a_t = ring.dimension(t)?;
    let mut graph = target.extended(a_t + basis.len());
    for (j, m) in basis.monomials().iter().enumerate() {
        let image = ring.to_vector(&ring.mul(&ring.monomial_element(m.clone()), x), t)?;
        graph.insert(image.concat(a_t, &SparseVec::unit(base, j)));
    }
    let (_, kernel): (Lattice, Lattice) = graph.split_at(a_t);
    let kernel_contained = source.contains_lattice(&kernel);
    if !kernel_contained && failures.is_empty() {
        let v = kernel.basis().map(|(_, v)| v).find(|v| !source.contains(v)).ok_or_else(|| {
            Error::Consistency("kernel not contained yet every basis vector is".into())
        })?;
        failures.push(ClaimFailure { index: i, degree: e, element: ring.format(&ring.from_vector(v, e)?) });
    }
    let passed = failures.is_empty() && kernel_contained;
    Ok((
        ClaimCell { index: i, degree: e, basis_size: basis.len(), hypothesis_held: held, samples, kernel_contained, passed },
        failures,
    ))
}

/// A random decomposable tail of degree `2(p + p^2)` in the free ring, with small integer coefficients.
pub fn random_decomposable_tail(prime: u64, rng: &mut impl Rng, terms: usize) -> Result<RingElement> {
    let top = critical_degree(prime);
    let free = HoveyPresentation::free_ring(prime, top)?;
    let monomials: Vec<_> = free.monomials_of_degree(top)?.into_iter().filter(|m| m.total_exponent() >= 2).collect();
    let mut out = RingElement::zero();
    for _ in 0..terms {
        let m = monomials[rng.gen_range(0..monomials.len())].clone();
        let c = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
        out.add_term(m, Scalar::from_int(free.base(), c));
    }
    Ok(out)
}
