//! Sparse exact matrices and Gaussian elimination over an exact field.
//!
//! Entries are stored as a triplet map; elimination runs on dense rows with
//! content normalization over Q so coefficients stay small.

use crate::scalar::{normalize_row, Field, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    // triplet form for serialization: JSON maps need string keys
    #[serde(with = "triplets")]
    entries: BTreeMap<(usize, usize), Scalar>,
}

mod triplets {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(usize, usize), Scalar>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, Scalar)> =
            m.iter().map(|(&(i, j), x)| (i, j, x.clone())).collect();
        serde::Serialize::serialize(&v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), Scalar>, D::Error> {
        let v: Vec<(usize, usize, Scalar)> = serde::Deserialize::deserialize(d)?;
        Ok(v.into_iter().map(|(i, j, x)| ((i, j), x)).collect())
    }
}

impl Mat {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, data: Vec<Vec<Scalar>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Mat::zero(field, rows, cols);
        for (i, row) in data.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, s) in row.into_iter().enumerate() {
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn from_i64_rows(field: Field, data: &[&[i64]]) -> Self {
        Mat::from_rows(
            field,
            data.iter()
                .map(|r| r.iter().map(|&n| field.from_i64(n)).collect())
                .collect(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), s)| (i, j, s))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (i, j, s) in other.iter() {
            out.add_to(i, j, s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        let mut out = Mat::zero(self.field, self.rows, self.cols);
        for (i, j, s) in self.iter() {
            out.set(i, j, -s.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = Mat::zero(self.field, self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (i, j, s) in self.iter() {
            out.set(i, j, s.clone() * c.clone());
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zero(self.field, self.rows, other.cols);
        // group other's entries by row for sparse product
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (k, j, s) in other.iter() {
            by_row.entry(k).or_default().push((j, s));
        }
        for (i, k, a) in self.iter() {
            if let Some(row) = by_row.get(&k) {
                for (j, b) in row {
                    out.add_to(i, *j, a.clone() * (*b).clone());
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field, self.cols, self.rows);
        for (i, j, s) in self.iter() {
            out.set(j, i, s.clone());
        }
        out
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.field, self.rows, self.cols + other.cols);
        for (i, j, s) in self.iter() {
            out.set(i, j, s.clone());
        }
        for (i, j, s) in other.iter() {
            out.set(i, j + self.cols, s.clone());
        }
        out
    }

    pub fn column(&self, j: usize) -> Mat {
        let mut out = Mat::zero(self.field, self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j));
        }
        out
    }

    fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (i, j, s) in self.iter() {
            d[i][j] = s.clone();
        }
        d
    }

    /// Reduced row echelon form in the given column order.
    /// Returns (rref rows, pivot columns in processing order).
    fn rref_ordered(&self, col_order: &[usize]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut m = self.to_dense();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in col_order {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            let inv = m[r][c].clone().inv().expect("nonzero pivot");
            for x in m[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..self.cols {
                        let t = m[r][j].clone() * f.clone();
                        m[i][j] = m[i][j].clone() - t;
                    }
                    // only unprocessed rows may be rescaled; pivot rows keep
                    // their unit pivots
                    if i > r {
                        normalize_row(&mut m[i]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        let (d, p) = self.rref_ordered(&order);
        (Mat::from_rows(self.field, d), p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank computed with the given pivot column order; independent
    /// route for cross-checking.
    pub fn rank_with_order(&self, col_order: &[usize]) -> usize {
        self.rref_ordered(col_order).1.len()
    }

    /// Basis of the null space, as columns of the returned matrix.
    pub fn kernel(&self) -> Mat {
        let (rr, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                let v = rr.get(r, fc);
                if !v.is_zero() {
                    out.set(pc, k, -v);
                }
            }
        }
        out
    }

    /// Indices of a maximal set of linearly independent columns.
    pub fn independent_cols(&self) -> Vec<usize> {
        let mut p = self.rref().1;
        p.sort_unstable();
        p
    }

    /// Basis of the column space, as columns of the returned matrix.
    pub fn column_space_basis(&self) -> Mat {
        let cols = self.independent_cols();
        let mut out = Mat::zero(self.field, self.rows, cols.len());
        for (k, &c) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, c));
            }
        }
        out
    }

    /// Rows spanning the left null space: a surjection k^rows -> coker with
    /// kernel exactly the column space.
    pub fn left_kernel_rows(&self) -> Mat {
        self.transpose().kernel().transpose()
    }

    /// Solves self * X = rhs; None when inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "rhs row mismatch");
        let aug = self.hcat(rhs);
        let order: Vec<usize> = (0..self.cols).collect();
        let (rr, pivots) = aug.rref_ordered(&order);
        // inconsistent iff a pivot would land in the rhs block
        for row in rr.iter().skip(pivots.len()) {
            if row.iter().take(self.cols).all(|s| s.is_zero())
                && row.iter().skip(self.cols).any(|s| !s.is_zero())
            {
                return None;
            }
        }
        let mut x = Mat::zero(self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                let v = rr[r][self.cols + j].clone();
                if !v.is_zero() {
                    x.set(pc, j, v);
                }
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.field, self.rows))?;
        if self.matmul(&x) == Mat::identity(self.field, self.rows)
            && x.matmul(self) == Mat::identity(self.field, self.rows)
        {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.field, self.rows)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rank_nullity_trivial() {
        let f = Field::Rationals;
        let m = Mat::from_i64_rows(f, &[&[1, 1]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().cols, 1);
        assert_eq!(m.left_kernel_rows().rows, 0);
    }

    #[test]
    fn zero_map_subquotients() {
        let f = Field::Rationals;
        let m = Mat::zero(f, 3, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().cols, 4);
        assert_eq!(m.left_kernel_rows().rows, 3);
    }

    #[test]
    fn random_rank_nullity_two_orders() {
        // 5x7 over F_101: rank + dim ker = 7, cross-checked against an
        // independent pivot ordering.
        let f = Field::Prime(101);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut m = Mat::zero(f, 5, 7);
            for i in 0..5 {
                for j in 0..7 {
                    m.set(i, j, f.from_i64(rng.gen_range(0..101)));
                }
            }
            let r = m.rank();
            assert_eq!(r + m.kernel().cols, 7);
            let rev: Vec<usize> = (0..7).rev().collect();
            assert_eq!(r, m.rank_with_order(&rev));
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f = Field::Rationals;
        let m = Mat::from_i64_rows(f, &[&[2, 4, 6], &[1, 2, 3], &[0, 1, -1]]);
        let k = m.kernel();
        assert!(m.matmul(&k).is_zero());
        assert_eq!(m.rank() + k.cols, 3);
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::Rationals;
        let m = Mat::from_i64_rows(f, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        let b = Mat::from_i64_rows(f, &[&[3], &[2]]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.matmul(&x), b);
        // inconsistent system
        let sing = Mat::from_i64_rows(f, &[&[1, 1], &[1, 1]]);
        let bad = Mat::from_i64_rows(f, &[&[1], &[2]]);
        assert!(sing.solve(&bad).is_none());
    }

    #[test]
    fn left_kernel_is_cokernel_projection() {
        let f = Field::Prime(7);
        let m = Mat::from_i64_rows(f, &[&[1, 2], &[2, 4], &[0, 0]]);
        let lk = m.left_kernel_rows();
        assert_eq!(lk.rows, 2); // rank 1, 3 - 1 = 2
        assert!(lk.matmul(&m).is_zero());
        assert_eq!(lk.rank(), 2);
    }
}
