//! Exact row reduction over arbitrary-precision rationals.

use num::{BigRational, Zero};

/// Coefficient field used everywhere: exact rationals.
pub type Q = BigRational;

/// A row space kept in reduced row echelon form. The representation is
/// canonical: two spans are equal exactly when their rows are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefBasis {
    cols: usize,
    /// Rows sorted by pivot column; each has a leading 1 and zeros above
    /// and below every pivot.
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl RrefBasis {
    pub fn new(cols: usize) -> Self {
        RrefBasis { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis, zeroing every pivot column.
    pub fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "column count mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds a vector to the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[pivot].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        // Clear the new pivot column from the old rows to stay fully reduced.
        for row in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &factor * r;
                }
            }
        }
        let at = self.pivots.iter().position(|&p| p > pivot).unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, pivot);
        true
    }
}

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}
