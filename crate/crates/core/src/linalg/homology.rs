use num::Zero;

use super::{is_zero_vec, zero_vec, LinAlgError, Matrix, Rref, Q};

/// Precomputed solver for coordinates in the span of fixed independent columns.
///
/// Row reduction of `[V | I]` yields `E` with `E V = [I; 0]`, so coordinates of a
/// target `t` are the first `k` entries of `E t` and the remaining entries must
/// vanish for `t` to lie in the span.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    dim: usize,
    rank: usize,
    transform: Matrix,
}

impl SpanSolver {
    /// `columns` must be linearly independent vectors of length `dim`.
    pub fn new(dim: usize, columns: &[Vec<Q>]) -> Result<Self, LinAlgError> {
        for c in columns {
            if c.len() != dim {
                return Err(LinAlgError::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
        }
        let k = columns.len();
        let v = Matrix::from_columns(dim, columns);
        let aug = v.hstack(&Matrix::identity(dim))?;
        let Rref { reduced, pivots } = aug.rref();
        let independent = pivots.iter().take(k).enumerate().all(|(i, &p)| p == i) && pivots.len() >= k;
        assert!(independent, "SpanSolver columns must be independent");
        let mut transform = Matrix::zeros(dim, dim);
        for r in 0..dim {
            for (c, val) in reduced.row(r) {
                if *c >= k {
                    transform.set(r, c - k, val.clone());
                }
            }
        }
        Ok(SpanSolver {
            dim,
            rank: k,
            transform,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&self, target: &[Q]) -> Result<Option<Vec<Q>>, LinAlgError> {
        if target.len() != self.dim {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.dim,
                found: target.len(),
            });
        }
        let y = self.transform.mul_vec(target)?;
        if y[self.rank..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        Ok(Some(y[..self.rank].to_vec()))
    }
}

/// A chosen basis of `ker(d_out) / im(d_in)` with cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    ambient_dim: usize,
    boundary_basis: Vec<Vec<Q>>,
    cycle_basis: Vec<Vec<Q>>,
    d_out: Matrix,
    solver: SpanSolver,
}

impl HomologyPresentation {
    /// Homology at the middle of `. --d_in--> C --d_out--> .`.
    pub fn new(d_in: &Matrix, d_out: &Matrix) -> Result<Self, LinAlgError> {
        let n = d_in.rows();
        if d_out.cols() != n {
            return Err(LinAlgError::DimensionMismatch {
                expected: n,
                found: d_out.cols(),
            });
        }
        let comp = d_out.mul(d_in)?;
        if let Some((_, c, _)) = comp.entries().min_by_key(|(_, c, _)| *c) {
            return Err(LinAlgError::NotAComplex { column: c });
        }

        let boundary_basis: Vec<Vec<Q>> = d_in
            .independent_columns()
            .into_iter()
            .map(|c| d_in.column(c))
            .collect();
        let kernel = d_out.kernel_basis();
        let nb = boundary_basis.len();

        let mut cols = boundary_basis.clone();
        cols.extend(kernel.iter().cloned());
        let pivots = Matrix::from_columns(n, &cols).independent_columns();
        let cycle_basis: Vec<Vec<Q>> = pivots
            .into_iter()
            .filter(|&p| p >= nb)
            .map(|p| kernel[p - nb].clone())
            .collect();
        debug_assert_eq!(cycle_basis.len() + nb, kernel.len());

        let mut span = boundary_basis.clone();
        span.extend(cycle_basis.iter().cloned());
        let solver = SpanSolver::new(n, &span)?;
        Ok(HomologyPresentation {
            ambient_dim: n,
            boundary_basis,
            cycle_basis,
            d_out: d_out.clone(),
            solver,
        })
    }

    pub fn dim(&self) -> usize {
        self.cycle_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn boundary_basis(&self) -> &[Vec<Q>] {
        &self.boundary_basis
    }

    pub fn cycle_basis(&self) -> &[Vec<Q>] {
        &self.cycle_basis
    }

    pub fn representative(&self, i: usize) -> &[Q] {
        &self.cycle_basis[i]
    }

    pub fn is_cycle(&self, v: &[Q]) -> Result<bool, LinAlgError> {
        Ok(is_zero_vec(&self.d_out.mul_vec(v)?))
    }

    /// Coordinates of the class of a cycle in the chosen homology basis.
    pub fn reduce(&self, v: &[Q]) -> Result<Vec<Q>, LinAlgError> {
        if !self.is_cycle(v)? {
            return Err(LinAlgError::NotACycle);
        }
        let coords = self.solver.solve(v)?.ok_or(LinAlgError::NotACycle)?;
        Ok(coords[self.boundary_basis.len()..].to_vec())
    }

    pub fn is_boundary(&self, v: &[Q]) -> Result<bool, LinAlgError> {
        Ok(self.is_cycle(v)? && is_zero_vec(&self.reduce(v)?))
    }

    /// Cycle representing the class with the given coordinates.
    pub fn lift(&self, coords: &[Q]) -> Vec<Q> {
        let mut out = zero_vec(self.ambient_dim);
        for (c, rep) in coords.iter().zip(&self.cycle_basis) {
            super::add_scaled(&mut out, c, rep);
        }
        out
    }
}
