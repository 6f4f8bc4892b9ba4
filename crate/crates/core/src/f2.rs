//! Sparse linear algebra over the two-element field.
//!
//! Vectors are sorted index sets; addition is symmetric difference. Matrices
//! are lists of row vectors. Elimination always pivots on the lowest index of
//! the current row, so every basis this module returns is reproducible.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fraction of nonzero entries above which elimination switches to packed bit rows.
const DENSE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("row {row} has index {index} outside {cols} columns")]
    IndexOutOfRange { row: usize, index: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A vector over F2, stored as its strictly increasing support.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct F2Vector {
    support: Vec<usize>,
}

impl F2Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        F2Vector { support: vec![i] }
    }

    /// Sum of the given basis vectors. Repeated indices cancel in pairs.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        let mut support = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j < v.len() && v[j] == v[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                support.push(v[i]);
            }
            i = j;
        }
        F2Vector { support }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    pub fn lowest(&self) -> Option<usize> {
        self.support.first().copied()
    }

    pub fn add(&self, other: &F2Vector) -> F2Vector {
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        F2Vector { support: out }
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        *self = self.add(other);
    }

    /// Parity of the common support.
    pub fn dot(&self, other: &F2Vector) -> bool {
        let (a, b) = (&self.support, &other.support);
        let (mut i, mut j, mut n) = (0, 0, 0usize);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n % 2 == 1
    }

    /// Maps every index through `f`; images are summed, so collisions cancel.
    pub fn remap(&self, mut f: impl FnMut(usize) -> usize) -> F2Vector {
        F2Vector::from_indices(self.support.iter().map(|&i| f(i)))
    }
}

/// A matrix over F2 stored as sparse rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn new(cols: usize, rows: Vec<F2Vector>) -> Result<Self, F2Error> {
        for (r, v) in rows.iter().enumerate() {
            if let Some(&last) = v.support.last() {
                if last >= cols {
                    return Err(F2Error::IndexOutOfRange { row: r, index: last, cols });
                }
            }
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix { cols, rows: vec![F2Vector::zero(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { cols: n, rows: (0..n).map(F2Vector::unit).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(F2Vector::weight).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (r, v) in self.rows.iter().enumerate() {
            for &c in &v.support {
                cols[c].push(r);
            }
        }
        F2Matrix {
            cols: self.rows.len(),
            rows: cols.into_iter().map(|support| F2Vector { support }).collect(),
        }
    }

    /// Row vector times matrix: the sum of the rows selected by `v`.
    pub fn left_apply(&self, v: &F2Vector) -> F2Vector {
        let mut acc = F2Vector::zero();
        for &i in &v.support {
            acc.add_assign(&self.rows[i]);
        }
        acc
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        F2Vector {
            support: (0..self.rows.len()).filter(|&r| self.rows[r].dot(v)).collect(),
        }
    }

    /// Product `self · other`, rows of `self` indexing rows of `other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows.len() {
            return Err(F2Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols
            )));
        }
        Ok(F2Matrix { cols: other.cols, rows: self.rows.iter().map(|r| other.left_apply(r)).collect() })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    fn density(&self) -> f64 {
        let cells = self.rows.len() as f64 * self.cols as f64;
        if cells == 0.0 {
            0.0
        } else {
            self.nnz() as f64 / cells
        }
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    if m.density() > DENSE_THRESHOLD && m.cols <= 1 << 16 {
        dense_rank(m.cols, &m.rows)
    } else {
        sparse_echelon(&m.rows).len()
    }
}

/// Rank of a list of vectors, each viewed as a matrix row.
pub fn rank_of(vectors: &[F2Vector]) -> usize {
    sparse_echelon(vectors).len()
}

pub fn quotient_dim(ambient_dim: usize, relations: &[F2Vector]) -> usize {
    debug_assert!(relations.iter().all(|r| r.support.last().is_none_or(|&i| i < ambient_dim)));
    ambient_dim - rank_of(relations)
}

/// Forward elimination. Returns pivot rows keyed by their lowest index.
fn sparse_echelon(rows: &[F2Vector]) -> HashMap<usize, F2Vector> {
    let mut pivots: HashMap<usize, F2Vector> = HashMap::new();
    for row in rows {
        let mut v = row.clone();
        while let Some(p) = v.lowest() {
            match pivots.get(&p) {
                Some(pr) => v.add_assign(pr),
                None => {
                    pivots.insert(p, v);
                    break;
                }
            }
        }
    }
    pivots
}

fn dense_rank(cols: usize, rows: &[F2Vector]) -> usize {
    let words = cols.div_ceil(64).max(1);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for row in rows {
        let mut v = vec![0u64; words];
        for &c in &row.support {
            v[c / 64] |= 1 << (c % 64);
        }
        while let Some(p) = lowest_bit(&v) {
            match pivots.get(&p) {
                Some(pr) => v.iter_mut().zip(pr).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots.insert(p, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Reduced row echelon form: pivot rows sorted by pivot, each pivot column
/// cleared from every other row.
pub fn rref(m: &F2Matrix) -> Vec<(usize, F2Vector)> {
    let mut rows: Vec<(usize, F2Vector)> = sparse_echelon(&m.rows).into_iter().collect();
    rows.sort_by_key(|(p, _)| *p);
    for i in (0..rows.len()).rev() {
        let (p, pivot_row) = rows[i].clone();
        for row in rows.iter_mut().take(i) {
            if row.1.contains(p) {
                row.1.add_assign(&pivot_row);
            }
        }
    }
    rows
}

/// Basis of `{x : m x = 0}`, one vector per free column in increasing order.
pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vector> {
    let reduced = rref(m);
    let pivot_cols: std::collections::HashSet<usize> = reduced.iter().map(|(p, _)| *p).collect();
    (0..m.cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut idx = vec![free];
            idx.extend(reduced.iter().filter(|(_, r)| r.contains(free)).map(|(p, _)| *p));
            F2Vector::from_indices(idx)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(ix: &[usize]) -> F2Vector {
        F2Vector::from_indices(ix.iter().copied())
    }

    // Oracle: rank is log2 of the number of distinct row combinations.
    fn brute_rank(rows: &[F2Vector]) -> usize {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = F2Vector::zero();
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.add_assign(r);
                }
            }
            seen.insert(acc);
        }
        seen.len().trailing_zeros() as usize
    }

    fn from_bits(rows: usize, cols: usize, bits: u64) -> F2Matrix {
        let rs = (0..rows)
            .map(|r| F2Vector::from_indices((0..cols).filter(|c| bits >> (r * cols + c) & 1 == 1)))
            .collect();
        F2Matrix::new(cols, rs).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&F2Matrix::identity(3)), 3);
        assert_eq!(rank(&F2Matrix::zero(4, 7)), 0);
        let rows = vec![v(&[0, 1]), v(&[1, 2]), v(&[0, 2])];
        assert_eq!(brute_rank(&rows), 2);
        assert_eq!(rank(&F2Matrix::new(3, rows).unwrap()), 2);
        assert_eq!(rank(&F2Matrix::zero(0, 0)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&F2Matrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&F2Matrix::zero(2, 2)), vec![v(&[0]), v(&[1])]);
        let m = F2Matrix::new(2, vec![v(&[0, 1])]).unwrap();
        let k = kernel_basis(&m);
        let brute: Vec<F2Vector> =
            [v(&[0]), v(&[1]), v(&[0, 1])].into_iter().filter(|x| m.apply(x).is_zero()).collect();
        assert_eq!(k, brute);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_dim(2, &[v(&[0, 1])]), 1);
        assert_eq!(quotient_dim(5, &[]), 5);
        let rels = [v(&[0]), v(&[0, 1]), v(&[1])];
        assert_eq!(brute_rank(&rels), 2);
        assert_eq!(quotient_dim(3, &rels), 1);
    }

    #[test]
    fn from_indices_cancels_pairs() {
        assert_eq!(v(&[3, 1, 3, 2, 3]), v(&[1, 2, 3]));
        assert!(v(&[4, 4]).is_zero());
    }

    #[test]
    fn exhaustive_3x3_rank_matches_brute_force_and_transpose() {
        for bits in 0u64..512 {
            let m = from_bits(3, 3, bits);
            let r = rank(&m);
            assert_eq!(r, brute_rank(m.rows()));
            assert_eq!(r, rank(&m.transpose()));
            assert_eq!(r + kernel_basis(&m).len(), 3);
        }
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        for bits in (0u64..1 << 16).step_by(97) {
            let m = from_bits(4, 4, bits);
            assert_eq!(dense_rank(4, m.rows()), sparse_echelon(m.rows()).len());
        }
    }

    proptest! {
        #[test]
        fn rank_transpose_up_to_8x8(rows in 0usize..=8, cols in 0usize..=8, bits in any::<u64>()) {
            let m = from_bits(rows, cols, bits);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_is_annihilated(rows in 0usize..=8, cols in 0usize..=8, bits in any::<u64>()) {
            let m = from_bits(rows, cols, bits);
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len() + rank(&m), cols);
            for x in &k {
                prop_assert!(m.apply(x).is_zero());
            }
            prop_assert_eq!(rank_of(&k), k.len());
        }

        #[test]
        fn quotient_invariant_under_row_ops(bits in any::<u64>(), ops in proptest::collection::vec((0usize..6, 0usize..6), 0..12)) {
            let m = from_bits(6, 8, bits);
            let mut rels = m.rows().to_vec();
            let before = quotient_dim(8, &rels);
            for (a, b) in ops {
                if a != b {
                    let add = rels[b].clone();
                    rels[a].add_assign(&add);
                } else {
                    rels.swap(a, (a + 1) % 6);
                }
            }
            prop_assert_eq!(quotient_dim(8, &rels), before);
        }
    }
}
