use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::{LinAlgError, Q};

/// Below this size row reduction runs on a dense copy.
const DENSE_CUTOFF: usize = 64;

/// Sparse matrix over the rationals, stored as sorted rows.
///
/// No zero entry is ever stored, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
            .collect();
        Matrix::from_dense(&dense)
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
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

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Q) {
        if v.is_zero() {
            return;
        }
        let entry = self.data[r].entry(c).or_insert_with(Q::zero);
        *entry += v;
        if entry.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Q> {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Iterates the stored (nonzero) entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let mut m = self.clone();
        for row in &mut m.data {
            for v in row.values_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut m = self.clone();
        for (r, c, v) in other.entries() {
            m.add_to(r, c, v);
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut m = Matrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_insert_with(Q::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            m.data[r] = acc;
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut s = Q::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        s += a * &v[*c];
                    }
                }
                s
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.rows != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for (r, c, v) in self.entries() {
            m.data[r].insert(c, v.clone());
        }
        for (r, c, v) in other.entries() {
            m.data[r].insert(self.cols + c, v.clone());
        }
        Ok(m)
    }

    /// Reduced row echelon form. Pivot rows are chosen by smallest row index,
    /// columns are scanned left to right.
    pub fn rref(&self) -> Rref {
        if self.rows <= DENSE_CUTOFF && self.cols <= DENSE_CUTOFF {
            self.rref_dense()
        } else {
            self.rref_sparse()
        }
    }

    pub(crate) fn rref_dense(&self) -> Rref {
        let mut a = self.to_dense();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(r) = (prow..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(prow, r);
            let inv = a[prow][c].recip();
            for v in a[prow].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = a[prow].clone();
            for (r2, row) in a.iter_mut().enumerate() {
                if r2 == prow || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref {
            reduced: Matrix::from_dense_shape(&a, self.rows, self.cols),
            pivots,
        }
    }

    pub(crate) fn rref_sparse(&self) -> Rref {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(r) = (prow..self.rows).find(|&r| rows[r].contains_key(&c)) else {
                continue;
            };
            rows.swap(prow, r);
            let inv = rows[prow][&c].recip();
            for v in rows[prow].values_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[prow].clone();
            for (r2, row) in rows.iter_mut().enumerate() {
                if r2 == prow {
                    continue;
                }
                let Some(f) = row.get(&c).cloned() else {
                    continue;
                };
                for (pc, pv) in &pivot_row {
                    let e = row.entry(*pc).or_insert_with(Q::zero);
                    *e -= &f * pv;
                    if e.is_zero() {
                        row.remove(pc);
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref {
            reduced: Matrix {
                rows: self.rows,
                cols: self.cols,
                data: rows,
            },
            pivots,
        }
    }

    fn from_dense_shape(a: &[Vec<Q>], rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for (r, row) in a.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].insert(c, v.clone());
                }
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column in increasing order.
    /// Each vector has a 1 at its free column and zeros at the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<Vec<Q>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Q::zero(); self.cols];
                v[free] = Q::one();
                for (k, &p) in pivots.iter().enumerate() {
                    let e = reduced.get(k, free);
                    if !e.is_zero() {
                        v[p] = -e;
                    }
                }
                v
            })
            .collect();
        debug_assert_eq!(basis.len() + pivots.len(), self.cols, "rank-nullity");
        basis
    }

    /// Indices of a maximal linearly independent prefix-greedy set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n)).ok()?;
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for (c, v) in reduced.row(r) {
                if *c >= n {
                    inv.data[r].insert(c - n, v.clone());
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn kernel_of_zero_matrix_is_identity_basis() {
        let k = Matrix::zeros(3, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(Matrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_one_by_two() {
        let k = Matrix::from_i64(&[&[1, 2]]).kernel_basis();
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn sparse_and_dense_rref_agree_on_large_input() {
        let mut m = Matrix::zeros(70, 70);
        for i in 0..70 {
            m.set(i, i, q(2));
            m.set(i, (i * 7 + 3) % 70, q(1));
            m.set((i * 11) % 70, (i + 1) % 70, q(-1));
        }
        let a = m.rref_sparse();
        let b = m.rref_dense();
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(a.reduced, b.reduced);
    }
}
