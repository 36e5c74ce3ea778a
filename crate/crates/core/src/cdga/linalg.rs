//! Exact linear algebra over the rationals on sparse row matrices.
//!
//! Everything here is unconditional: ranks, nullspaces and solutions are
//! computed by fraction-free-ish Gaussian elimination with exact `Q`
//! entries. Pivots are chosen by the smallest combined bit length of
//! numerator and denominator, which keeps coefficient growth in check
//! without affecting correctness.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::gca::Q;

/// A sparse matrix with exact rational entries, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Builds a matrix from dense columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = QMatrix::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|row| row.is_empty())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (&c, v) in row {
                out.set(c, r, v.clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![Q::zero(); self.rows];
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = Q::zero();
            for (&c, a) in row {
                if !v[c].is_zero() {
                    acc += a.clone() * &v[c];
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    let cur = out.get(r, c) + a.clone() * b;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn plus(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, row) in other.data.iter().enumerate() {
            for (&c, v) in row {
                let cur = out.get(r, c) + v;
                out.set(r, c, cur);
            }
        }
        out
    }

    pub fn scaled(&self, s: &Q) -> QMatrix {
        let mut out = QMatrix::zero(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (&c, v) in row {
                out.set(r, c, v.clone() * s);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> Rref {
        let mut data = self.data.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = pick_pivot(&data, next_row, col) else {
                continue;
            };
            data.swap(next_row, pivot_row);
            let lead = data[next_row].get(&col).cloned().expect("pivot entry");
            if !lead.is_one() {
                let inv = lead.recip();
                for v in data[next_row].values_mut() {
                    *v *= &inv;
                }
            }
            let pivot = data[next_row].clone();
            for (r, row) in data.iter_mut().enumerate() {
                if r == next_row {
                    continue;
                }
                if let Some(factor) = row.get(&col).cloned() {
                    for (&c, pv) in &pivot {
                        let cur = row.get(&c).cloned().unwrap_or_else(Q::zero)
                            - factor.clone() * pv;
                        if cur.is_zero() {
                            row.remove(&c);
                        } else {
                            row.insert(c, cur);
                        }
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        Rref {
            matrix: QMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// A deterministic basis of the right nullspace, as dense vectors.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let rref = self.rref();
        let pivot_of_col: BTreeMap<usize, usize> = rref
            .pivots
            .iter()
            .enumerate()
            .map(|(r, &c)| (c, r))
            .collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (&pc, &pr) in &pivot_of_col {
                let entry = rref.matrix.get(pr, free);
                if !entry.is_zero() {
                    v[pc] = -entry;
                }
            }
            out.push(v);
        }
        out
    }
}

pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

/// Picks the candidate pivot row at `col` with the smallest combined bit
/// length of numerator and denominator; ties break to the lowest row index.
fn pick_pivot(data: &[BTreeMap<usize, Q>], from_row: usize, col: usize) -> Option<usize> {
    let mut best: Option<(u64, usize)> = None;
    for (r, row) in data.iter().enumerate().skip(from_row) {
        if let Some(v) = row.get(&col) {
            let bits = v.numer().abs().bits() + v.denom().bits();
            match best {
                None => best = Some((bits, r)),
                Some((b, _)) if bits < b => best = Some((bits, r)),
                _ => {}
            }
        }
    }
    best.map(|(_, r)| r)
}

/// Solves `sum_j x_j columns[j] = rhs` exactly. Free coordinates are set to
/// zero, so the solution is deterministic. Returns `None` when `rhs` is not
/// in the span.
pub fn solve_columns(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = rhs.len();
    let mut aug = QMatrix::zero(rows, columns.len() + 1);
    for (c, col) in columns.iter().enumerate() {
        assert_eq!(col.len(), rows, "column length mismatch");
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                aug.set(r, c, v.clone());
            }
        }
    }
    for (r, v) in rhs.iter().enumerate() {
        if !v.is_zero() {
            aug.set(r, columns.len(), v.clone());
        }
    }
    let rref = aug.rref();
    if rref.pivots.contains(&columns.len()) {
        return None;
    }
    let mut x = vec![Q::zero(); columns.len()];
    for (r, &c) in rref.pivots.iter().enumerate() {
        x[c] = rref.matrix.get(r, columns.len());
    }
    Some(x)
}

/// An incrementally maintained row space in reduced echelon form. Used to
/// pick cohomology representatives greedily and deterministically.
#[derive(Debug, Default, Clone)]
pub struct IncrementalSpan {
    // Rows normalized to a leading 1, kept sorted by leading index.
    rows: Vec<(usize, Vec<Q>)>,
}

impl IncrementalSpan {
    pub fn new() -> Self {
        IncrementalSpan::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current span.
    pub fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (lead, row) in &self.rows {
            let factor = v[*lead].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x -= factor.clone() * r;
            }
        }
        v
    }

    /// Inserts `v` if independent of the span. Returns the normalized
    /// remainder (leading coefficient 1) when the rank grew.
    pub fn insert(&mut self, v: Vec<Q>) -> Option<Vec<Q>> {
        let reduced = self.reduce(v);
        let lead = reduced.iter().position(|x| !x.is_zero())?;
        let inv = reduced[lead].clone().recip();
        let normalized: Vec<Q> = reduced.into_iter().map(|x| x * &inv).collect();
        // Back-substitute into existing rows to stay fully reduced.
        for (_, row) in &mut self.rows {
            let factor = row[lead].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, n) in row.iter_mut().zip(&normalized) {
                *x -= factor.clone() * n;
            }
        }
        let pos = self
            .rows
            .binary_search_by(|(l, _)| l.cmp(&lead))
            .unwrap_err();
        self.rows.insert(pos, (lead, normalized.clone()));
        Some(normalized)
    }
}
