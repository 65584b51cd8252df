use std::fmt;

use super::lattice::{Lattice, SparseVec};
use super::profile::InvariantFactorProfile;
use super::scalar::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single [`BaseRing`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ring: BaseRing, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    /// Build from rows; every entry must live over `ring`.
    pub fn from_rows(ring: BaseRing, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension(format!("ragged row of length {} (expected {c})", row.len())));
            }
            for x in row {
                if x.ring() != ring {
                    return Err(Error::MixedRings(ring, x.ring()));
                }
                data.push(x);
            }
        }
        Ok(Matrix { ring, rows: r, cols: c, data })
    }

    pub fn from_ints(ring: BaseRing, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(ring, x)).collect())
            .collect();
        Matrix::from_rows(ring, rows).expect("integer rows are well formed")
    }

    /// Matrix whose columns are the given sparse vectors, in an ambient of dimension `rows`.
    pub fn from_columns(ring: BaseRing, rows: usize, columns: &[SparseVec]) -> Matrix {
        let mut m = Matrix::zero(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> SparseVec {
        SparseVec::from_entries((0..self.rows).map(|i| (i, self.get(i, j).clone())))
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        if self.ring != rhs.ring {
            return Err(Error::MixedRings(self.ring, rhs.ring));
        }
        let mut out = Matrix::zero(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = &out.data[i * rhs.cols + j] + &(a * b);
                        out.data[i * rhs.cols + j] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.ring.zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let x = &self.data[r * self.cols + j];
            if !x.is_zero() {
                self.data[r * self.cols + j] = x * c;
            }
        }
    }

    fn scale_col(&mut self, col: usize, c: &Scalar) {
        for i in 0..self.rows {
            let x = &self.data[i * self.cols + col];
            if !x.is_zero() {
                self.data[i * self.cols + col] = x * c;
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &Scalar) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = &self.data[dst * self.cols + j] + &(c * s);
                self.data[dst * self.cols + j] = v;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &Scalar) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = &self.data[i * self.cols + dst] + &(c * s);
                self.data[i * self.cols + dst] = v;
            }
        }
    }

    /// Smith normal form with invertible transforms.
    pub fn smith(&self) -> SmithForm {
        smith_normal_form(self)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Output of [`smith_normal_form`]: `row_transform * A * col_transform = diag(factors)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them; nonzero ones first, each dividing the next.
    pub factors: Vec<Scalar>,
    pub rank: usize,
    pub row_transform: Matrix,
    pub row_inverse: Matrix,
    pub col_transform: Matrix,
    pub col_inverse: Matrix,
}

impl SmithForm {
    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> &[Scalar] {
        &self.factors[..self.rank]
    }

    pub fn diagonal(&self) -> Matrix {
        let (m, n) = (self.row_transform.rows(), self.col_transform.rows());
        let ring = self.row_transform.ring();
        let mut d = Matrix::zero(ring, m, n);
        for (i, f) in self.factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    pub fn cokernel_profile(&self) -> InvariantFactorProfile {
        InvariantFactorProfile::from_factors(self.row_transform.ring(), self.row_transform.rows(), self.invariant_factors())
    }

    /// Basis of the kernel of the original matrix.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        (self.rank..self.col_transform.cols()).map(|j| self.col_transform.column(j)).collect()
    }
}

/// Smith normal form over a PID.
///
/// Pivots are chosen by minimal valuation, then minimal absolute numerator,
/// then column-major position, so outputs are reproducible. Over `Local(p)` a
/// minimal-valuation pivot divides every remaining entry, so a single round of
/// row and column elimination per pivot suffices.
pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    let ring = a.ring;
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = Matrix::identity(ring, m);
    let mut pinv = Matrix::identity(ring, m);
    let mut q = Matrix::identity(ring, n);
    let mut qinv = Matrix::identity(ring, n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        let Some((pi, pj)) = find_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        pinv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);
        qinv.swap_rows(t, pj);

        let u = d.get(t, t).unit_part();
        let uinv = u.inverse().expect("unit part is invertible");
        d.scale_row(t, &uinv);
        p.scale_row(t, &uinv);
        pinv.scale_col(t, &u);
        let piv = d.get(t, t).clone();

        for i in t + 1..m {
            let x = d.get(i, t);
            if x.is_zero() {
                continue;
            }
            let c = x.checked_div(&piv).expect("minimal valuation pivot divides column");
            let neg = -&c;
            d.add_row(i, t, &neg);
            p.add_row(i, t, &neg);
            pinv.add_col(t, i, &c);
        }
        for j in t + 1..n {
            let x = d.get(t, j);
            if x.is_zero() {
                continue;
            }
            let c = x.checked_div(&piv).expect("minimal valuation pivot divides row");
            let neg = -&c;
            d.set(t, j, ring.zero());
            q.add_col(j, t, &neg);
            qinv.add_row(t, j, &c);
        }
        rank += 1;
    }

    let factors = (0..m.min(n)).map(|i| d.get(i, i).clone()).collect();
    SmithForm { factors, rank, row_transform: p, row_inverse: pinv, col_transform: q, col_inverse: qinv }
}

fn find_pivot(d: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((u32, num_bigint::BigInt), usize, usize)> = None;
    for j in t..d.cols {
        for i in t..d.rows {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            if x.is_ideal_pivot() {
                return Some((i, j));
            }
            let key = x.pivot_key().expect("nonzero");
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Profile of `ambient / column span` where `matrix` has one column per generator of the span.
pub fn cokernel_profile(matrix: &Matrix) -> InvariantFactorProfile {
    let mut lattice = Lattice::new(matrix.ring(), matrix.rows());
    for col in matrix.columns() {
        lattice.insert(col);
    }
    lattice.quotient_profile()
}

/// Solve `matrix * c = vector` over the base ring (not merely its fraction field).
pub fn membership(matrix: &Matrix, vector: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if vector.len() != matrix.rows() {
        return Err(Error::Dimension(format!("vector of length {} for {} rows", vector.len(), matrix.rows())));
    }
    if let Some(x) = vector.iter().find(|x| x.ring() != matrix.ring()) {
        return Err(Error::MixedRings(matrix.ring(), x.ring()));
    }
    let snf = matrix.smith();
    let pb = snf.row_transform.apply(vector)?;
    let ring = matrix.ring();
    let mut y = vec![ring.zero(); matrix.cols()];
    for (i, b) in pb.iter().enumerate() {
        if i < snf.rank {
            match b.checked_div(&snf.factors[i]) {
                Some(v) => y[i] = v,
                None => return Ok(None),
            }
        } else if !b.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.col_transform.apply(&y)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z5: BaseRing = BaseRing::Local(5);

    fn s(r: BaseRing, n: i64) -> Scalar {
        Scalar::from_int(r, n)
    }

    fn check_reconstruction(a: &Matrix) -> SmithForm {
        let snf = a.smith();
        let pa = snf.row_transform.mul(a).unwrap();
        assert_eq!(pa.mul(&snf.col_transform).unwrap(), snf.diagonal());
        let back = snf.row_inverse.mul(&snf.diagonal()).unwrap().mul(&snf.col_inverse).unwrap();
        assert_eq!(&back, a);
        snf
    }

    #[test]
    fn unit_entry_has_unit_factor() {
        let snf = check_reconstruction(&Matrix::from_ints(Z5, &[&[2]]));
        assert_eq!(snf.invariant_factors(), &[s(Z5, 1)]);
    }

    #[test]
    fn diagonal_input_is_kept() {
        let snf = check_reconstruction(&Matrix::from_ints(Z5, &[&[5, 0], &[0, 25]]));
        assert_eq!(snf.invariant_factors(), &[s(Z5, 5), s(Z5, 25)]);
    }

    #[test]
    fn hand_reduced_example() {
        // determinantal divisors: d1 = content = 5, d1*d2 = det = 50 - 25 = 25
        let snf = check_reconstruction(&Matrix::from_ints(Z5, &[&[5, 5], &[5, 10]]));
        assert_eq!(snf.invariant_factors(), &[s(Z5, 5), s(Z5, 5)]);
    }

    #[test]
    fn non_diagonal_valuations() {
        // det = p^2 and content 1, so the factors are 1, 25 even though the diagonal is (5, 5)
        let snf = check_reconstruction(&Matrix::from_ints(Z5, &[&[5, 0], &[1, 5]]));
        assert_eq!(snf.invariant_factors(), &[s(Z5, 1), s(Z5, 25)]);
    }

    #[test]
    fn cokernel_examples() {
        let q = BaseRing::Rational;
        assert_eq!(cokernel_profile(&Matrix::zero(q, 2, 2)), InvariantFactorProfile::free(2));
        let p = cokernel_profile(&Matrix::from_ints(Z5, &[&[5]]));
        assert_eq!(p, InvariantFactorProfile { free_rank: 0, torsion: vec![5] });
        let p = cokernel_profile(&Matrix::from_ints(Z5, &[&[1, 0], &[0, 5]]));
        assert_eq!(p, InvariantFactorProfile { free_rank: 0, torsion: vec![5] });
    }

    #[test]
    fn membership_examples() {
        let m = Matrix::from_ints(Z5, &[&[5]]);
        assert_eq!(membership(&m, &[s(Z5, 5)]).unwrap(), Some(vec![s(Z5, 1)]));
        assert_eq!(membership(&m, &[s(Z5, 1)]).unwrap(), None);
        let q = BaseRing::Rational;
        let m = Matrix::from_ints(q, &[&[5]]);
        let third = Scalar::from_ratio(q, 1.into(), 5.into()).unwrap();
        assert_eq!(membership(&m, &[s(q, 1)]).unwrap(), Some(vec![third]));
    }

    #[test]
    fn mixed_rings_rejected() {
        let rows = vec![vec![s(Z5, 1), s(BaseRing::Rational, 1)]];
        assert!(matches!(Matrix::from_rows(Z5, rows), Err(Error::MixedRings(..))));
        let m = Matrix::from_ints(Z5, &[&[5]]);
        assert!(membership(&m, &[s(BaseRing::Rational, 5)]).is_err());
    }

    #[test]
    fn kernel_basis_is_annihilated() {
        let a = Matrix::from_ints(Z5, &[&[1, 2, 3], &[2, 4, 6]]);
        let snf = a.smith();
        let ker = snf.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let dense = v.to_dense(Z5, 3);
            assert!(a.apply(&dense).unwrap().iter().all(Scalar::is_zero));
        }
    }
}
