use std::collections::{BTreeMap, BTreeSet};

use super::matrix::{Matrix, smith_normal_form};
use super::profile::InvariantFactorProfile;
use super::scalar::{BaseRing, Scalar};

/// Sparse vector: sorted `(index, value)` pairs with no zero values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(ring: BaseRing, i: usize) -> Self {
        SparseVec { entries: vec![(i, ring.one())] }
    }

    /// Collect entries; duplicates are summed and zeros dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, x) in entries {
            if x.is_zero() {
                continue;
            }
            match map.get_mut(&i) {
                Some(y) => *y = &*y + &x,
                None => {
                    map.insert(i, x);
                }
            }
        }
        SparseVec { entries: map.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        Self::from_entries(v.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, ring: BaseRing, n: usize) -> Vec<Scalar> {
        let mut out = vec![ring.zero(); n];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let v = x + &(c * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        self.entries = out;
    }

    pub fn sub(&self, other: &SparseVec, ring: BaseRing) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(&-ring.one(), other);
        out
    }

    /// Shift every index by `offset`.
    pub fn offset(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (i + offset, x.clone())).collect() }
    }

    /// Entries with index in `range`, re-indexed from `range.start`.
    pub fn window(&self, range: std::ops::Range<usize>) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| range.contains(i))
                .map(|(i, x)| (i - range.start, x.clone()))
                .collect(),
        }
    }

    /// Concatenate with `other` placed after `self_dim` coordinates.
    pub fn concat(&self, self_dim: usize, other: &SparseVec) -> SparseVec {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, x)| (i + self_dim, x.clone())));
        SparseVec { entries }
    }
}

/// A submodule of a free module `R^dim`, held as a triangular basis keyed by leading index.
///
/// Pivots are normalized to canonical associates (`p^k` over `Local(p)`, `1` over fields).
/// Distinct leading indices make the basis independent, and membership is decided by
/// leading-entry reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ring: BaseRing,
    dim: usize,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Lattice {
    pub fn new(ring: BaseRing, dim: usize) -> Self {
        Lattice { ring, dim, pivots: BTreeMap::new() }
    }

    pub fn spanned_by(ring: BaseRing, dim: usize, gens: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut l = Lattice::new(ring, dim);
        for g in gens {
            l.insert(g);
        }
        l
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.pivots.iter().map(|(r, v)| (*r, v))
    }

    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.pivots.values().cloned().collect()
    }

    /// Add a generator. Returns true when the span grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|i| i < self.dim), "vector outside ambient");
        let mut grew = false;
        let mut v = v;
        {
            loop {
                let Some((r, a)) = v.leading() else { break };
                match self.pivots.get(&r) {
                    None => {
                        let inv = a.unit_part().inverse().expect("unit");
                        self.pivots.insert(r, v.scaled(&inv));
                        grew = true;
                        break;
                    }
                    Some(e) => {
                        let b = e.leading().expect("pivot is nonzero").1;
                        match a.checked_div(b) {
                            Some(c) => v.add_scaled(&-c, e),
                            None => {
                                // lower valuation than the current pivot: take its place
                                let old = self.pivots.remove(&r).expect("present");
                                let inv = a.unit_part().inverse().expect("unit");
                                self.pivots.insert(r, v.scaled(&inv));
                                grew = true;
                                v = old;
                            }
                        }
                    }
                }
            }
        }
        grew
    }

    /// Reduce `v` by leading entries; returns the remainder and the coefficient
    /// used for each basis vector (keyed by leading index).
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, BTreeMap<usize, Scalar>) {
        let mut v = v.clone();
        let mut coeffs = BTreeMap::new();
        while let Some((r, a)) = v.leading() {
            let Some(e) = self.pivots.get(&r) else { break };
            let b = e.leading().expect("pivot is nonzero").1;
            let Some(c) = a.checked_div(b) else { break };
            v.add_scaled(&-c.clone(), e);
            coeffs.insert(r, c);
        }
        (v, coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coefficients expressing `v` in the basis, keyed by leading index.
    pub fn coordinates(&self, v: &SparseVec) -> Option<BTreeMap<usize, Scalar>> {
        let (rem, coeffs) = self.reduce(v);
        rem.is_zero().then_some(coeffs)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.pivots.values().all(|v| self.contains(v))
    }

    pub fn same_span(&self, other: &Lattice) -> bool {
        self.dim == other.dim && self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    /// Profile of `R^dim / self`.
    pub fn quotient_profile(&self) -> InvariantFactorProfile {
        let units: BTreeSet<usize> = self
            .pivots
            .iter()
            .filter(|(_, v)| v.leading().is_some_and(|(_, x)| x.is_unit()))
            .map(|(r, _)| *r)
            .collect();
        let mut rest: Vec<SparseVec> = Vec::new();
        for (r, w) in &self.pivots {
            if units.contains(r) {
                continue;
            }
            let mut w = w.clone();
            let mut from = 0;
            loop {
                let hit = w.iter().find(|(i, _)| *i >= from && units.contains(i)).map(|(i, x)| (i, x.clone()));
                let Some((i, x)) = hit else { break };
                w.add_scaled(&-x, &self.pivots[&i]);
                from = i + 1;
            }
            rest.push(w);
        }
        let free_rank = self.dim - self.rank();
        if rest.is_empty() {
            return InvariantFactorProfile::free(free_rank);
        }
        let rows: BTreeSet<usize> = rest.iter().flat_map(|w| w.iter().map(|(i, _)| i)).collect();
        let index: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let compact: Vec<SparseVec> =
            rest.iter().map(|w| SparseVec::from_entries(w.iter().map(|(i, x)| (index[&i], x.clone())))).collect();
        let m = Matrix::from_columns(self.ring, rows.len(), &compact);
        let snf = smith_normal_form(&m);
        let mut p = InvariantFactorProfile::from_factors(self.ring, rows.len(), snf.invariant_factors());
        p.free_rank = free_rank;
        p
    }

    /// The same submodule inside `R^dim` for a larger `dim`.
    pub fn extended(&self, dim: usize) -> Lattice {
        assert!(dim >= self.dim, "cannot shrink ambient");
        Lattice { ring: self.ring, dim, pivots: self.pivots.clone() }
    }

    /// Split a lattice in `R^a ⊕ R^b` at `a`: the projection onto `R^a`, and the
    /// vectors vanishing on `R^a` (as a lattice in `R^b`).
    pub fn split_at(&self, a: usize) -> (Lattice, Lattice) {
        let mut top = Lattice::new(self.ring, a);
        let mut bottom = Lattice::new(self.ring, self.dim - a);
        for (r, v) in &self.pivots {
            if *r < a {
                top.pivots.insert(*r, v.window(0..a));
            } else {
                bottom.pivots.insert(r - a, v.window(a..self.dim));
            }
        }
        (top, bottom)
    }

    /// Coordinates of `v` against the basis in leading-index order.
    pub fn coordinate_vector(&self, v: &SparseVec) -> Option<SparseVec> {
        let coords = self.coordinates(v)?;
        let position: BTreeMap<usize, usize> = self.pivots.keys().enumerate().map(|(i, r)| (*r, i)).collect();
        Some(SparseVec::from_entries(coords.into_iter().map(|(r, c)| (position[&r], c))))
    }

    /// Profile of `self / inner`, for `inner ⊆ self`.
    pub fn relative_profile(&self, inner: &Lattice) -> Option<InvariantFactorProfile> {
        let mut rel = Lattice::new(self.ring, self.rank());
        for v in inner.pivots.values() {
            rel.insert(self.coordinate_vector(v)?);
        }
        Some(rel.quotient_profile())
    }

    /// Every basis vector has a unit pivot and the rank is full: the lattice is all of `R^dim`.
    pub fn is_everything(&self) -> bool {
        self.rank() == self.dim && self.pivots.values().all(|v| v.leading().is_some_and(|(_, x)| x.is_unit()))
    }

    /// `self ⊕ other` inside `R^(dim + other.dim)`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let mut pivots = self.pivots.clone();
        for (r, v) in &other.pivots {
            pivots.insert(r + self.dim, v.offset(self.dim));
        }
        Lattice { ring: self.ring, dim: self.dim + other.dim, pivots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z5: BaseRing = BaseRing::Local(5);

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|&(i, x)| (i, Scalar::from_int(Z5, x))))
    }

    #[test]
    fn swap_on_lower_valuation() {
        let mut l = Lattice::new(Z5, 2);
        l.insert(v(&[(0, 5)]));
        l.insert(v(&[(0, 1), (1, 5)]));
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&v(&[(0, 1), (1, 5)])));
        assert!(l.contains(&v(&[(0, 5)])));
        assert!(!l.contains(&v(&[(1, 5)])));
        assert!(l.contains(&v(&[(1, 25)])));
        assert_eq!(l.quotient_profile(), InvariantFactorProfile { free_rank: 0, torsion: vec![25] });
    }

    #[test]
    fn quotient_of_relation_pair() {
        // basis {y, z} modulo 5(z - y)
        let l = Lattice::spanned_by(Z5, 2, [v(&[(0, -5), (1, 5)])]);
        assert_eq!(l.quotient_profile(), InvariantFactorProfile { free_rank: 1, torsion: vec![5] });
    }

    #[test]
    fn coordinates_reproduce_vector() {
        let gens = [v(&[(0, 1), (2, 3)]), v(&[(1, 5), (2, 1)])];
        let l = Lattice::spanned_by(Z5, 3, gens);
        let target = v(&[(0, 2), (1, 10), (2, 8)]);
        let coords = l.coordinates(&target).unwrap();
        let mut sum = SparseVec::new();
        for (r, c) in &coords {
            let e = l.basis().find(|(k, _)| k == r).unwrap().1;
            sum.add_scaled(c, e);
        }
        assert_eq!(sum, target);
    }

    #[test]
    fn split_recovers_kernel_and_image() {
        // multiplication by 5 on Z_(5)^1 into Z_(5)^1 modulo nothing: graph vectors (5 ; 1)
        let mut l = Lattice::new(Z5, 2);
        l.insert(v(&[(0, 5), (1, 1)]));
        l.insert(v(&[(0, 25)]));
        let (image, kernel) = l.split_at(1);
        assert_eq!(image.quotient_profile(), InvariantFactorProfile { free_rank: 0, torsion: vec![5] });
        assert!(kernel.contains(&v(&[(0, 5)])));
        assert!(!kernel.contains(&v(&[(0, 1)])));
        let inner = Lattice::spanned_by(Z5, 1, [v(&[(0, 25)])]);
        assert_eq!(kernel.relative_profile(&inner).unwrap().torsion, vec![5]);
        assert!(!kernel.is_everything());
        assert!(Lattice::spanned_by(Z5, 1, [v(&[(0, 2)])]).is_everything());
    }
}
