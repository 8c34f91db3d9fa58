//! Dense matrices over a [`Field`] and rank by Gaussian elimination.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b))))
            .collect()
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize
    where
        E: PartialEq,
    {
        let mut basis = EchelonBasis::new(self.cols);
        for r in 0..self.rows {
            basis.insert(field, self.row(r).to_vec());
        }
        basis.rank()
    }
}

/// Row echelon basis grown one row at a time.
///
/// Each stored row is normalized to a leading 1 at its pivot column and has
/// no support left of it. A new row is reduced by scanning columns left to
/// right, so pivot rows whose support lies in a block of columns only ever
/// touch that block. Block-structured rigidity matrices stay cheap this way.
#[derive(Clone, Debug)]
pub struct EchelonBasis<E> {
    cols: usize,
    /// `pivot_of[c]` indexes `pivots` when column `c` is a pivot column.
    pivot_of: Vec<Option<usize>>,
    /// Sparse pivot rows as `(column, value)`, leading entry first.
    pivots: Vec<Vec<(usize, E)>>,
}

impl<E: Clone + PartialEq> EchelonBasis<E> {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, pivot_of: vec![None; cols], pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; returns `true` and extends the basis
    /// when it is independent.
    pub fn insert<F: Field<Elem = E>>(&mut self, field: &F, mut row: Vec<E>) -> bool {
        assert_eq!(row.len(), self.cols, "row length must match column count");
        for c in 0..self.cols {
            if field.is_zero(&row[c]) {
                continue;
            }
            match self.pivot_of[c] {
                Some(p) => {
                    let factor = row[c].clone();
                    for (col, v) in &self.pivots[p] {
                        row[*col] = field.sub(&row[*col], &field.mul(&factor, v));
                    }
                }
                None => {
                    let inv = field.inv(&row[c]).expect("nonzero entry is invertible");
                    let pivot: Vec<(usize, E)> = (c..self.cols)
                        .filter(|&k| !field.is_zero(&row[k]))
                        .map(|k| (k, field.mul(&row[k], &inv)))
                        .collect();
                    self.pivot_of[c] = Some(self.pivots.len());
                    self.pivots.push(pivot);
                    return true;
                }
            }
        }
        false
    }
}
