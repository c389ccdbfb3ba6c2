//! Mixed complexes `(C, b, B)` restricted to one weight, and their
//! Hochschild, negative cyclic, cyclic and periodic homology.
//!
//! A slice stores every degree in a contiguous range together with the
//! matrices of `b` (degree -1) and `B` (degree +1). Series in `u` (degree -2)
//! are cut to a window of `u`-powers; for bounded slices the default windows
//! are wide enough that the result is exact.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{is_zero_vec, HomologyPresentation, LinAlgError, Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixedError {
    #[error("{identity} fails in degree {degree}, column {column}")]
    Axiom {
        identity: &'static str,
        degree: i32,
        column: usize,
    },
    #[error("matrix shape mismatch for {what} in degree {degree}")]
    Shape { what: &'static str, degree: i32 },
    #[error("degree {0} lies outside the computed window")]
    OutOfWindow(i32),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Clone, Debug)]
pub struct MixedComplexSlice {
    label: String,
    weight: i64,
    dims: BTreeMap<i32, usize>,
    b: BTreeMap<i32, Matrix>,
    big_b: BTreeMap<i32, Matrix>,
}

impl MixedComplexSlice {
    /// `b[d]` maps degree `d` to `d - 1`; `big_b[d]` maps `d` to `d + 1`.
    /// Missing matrices are zero. All three axioms are checked.
    pub fn new(
        label: impl Into<String>,
        weight: i64,
        dims: BTreeMap<i32, usize>,
        b: BTreeMap<i32, Matrix>,
        big_b: BTreeMap<i32, Matrix>,
    ) -> Result<Self, MixedError> {
        let s = MixedComplexSlice {
            label: label.into(),
            weight,
            dims: dims.into_iter().filter(|(_, n)| *n > 0).collect(),
            b,
            big_b,
        };
        for (&d, m) in &s.b {
            if m.cols() != s.dim(d) || m.rows() != s.dim(d - 1) {
                return Err(MixedError::Shape { what: "b", degree: d });
            }
        }
        for (&d, m) in &s.big_b {
            if m.cols() != s.dim(d) || m.rows() != s.dim(d + 1) {
                return Err(MixedError::Shape { what: "B", degree: d });
            }
        }
        s.check_axioms()?;
        Ok(s)
    }

    fn check_axioms(&self) -> Result<(), MixedError> {
        let first_col = |m: Matrix| m.entries().map(|(_, c, _)| c).min();
        for &d in self.dims.keys() {
            if let Some(c) = first_col(self.b(d - 1).mul(&self.b(d))?) {
                return Err(MixedError::Axiom { identity: "b^2 = 0", degree: d, column: c });
            }
            if let Some(c) = first_col(self.big_b(d + 1).mul(&self.big_b(d))?) {
                return Err(MixedError::Axiom { identity: "B^2 = 0", degree: d, column: c });
            }
            let anti = self.b(d + 1).mul(&self.big_b(d))?.add(&self.big_b(d - 1).mul(&self.b(d))?)?;
            if let Some(c) = first_col(anti) {
                return Err(MixedError::Axiom { identity: "bB + Bb = 0", degree: d, column: c });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Recomputes `b^2`, `B^2` and `bB + Bb` on every basis vector.
    pub fn axiom_report(&self) -> Result<AxiomReport, MixedError> {
        let mut rep = AxiomReport { label: self.label.clone(), weight: self.weight, ..Default::default() };
        for (&d, &n) in &self.dims {
            let checks = [
                ("b^2 = 0", self.b(d - 1).mul(&self.b(d))?),
                ("B^2 = 0", self.big_b(d + 1).mul(&self.big_b(d))?),
                ("bB + Bb = 0", self.b(d + 1).mul(&self.big_b(d))?.add(&self.big_b(d - 1).mul(&self.b(d))?)?),
            ];
            rep.basis_vectors += n;
            for (name, m) in checks {
                rep.identities_checked += n;
                if !m.is_zero() {
                    rep.failures.push(format!("{name} in degree {d}"));
                }
            }
        }
        Ok(rep)
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self, d: i32) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Smallest and largest degree with a nonzero piece.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn b(&self, d: i32) -> Matrix {
        self.b
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(d - 1), self.dim(d)))
    }

    pub fn big_b(&self, d: i32) -> Matrix {
        self.big_b
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(d + 1), self.dim(d)))
    }

    /// The same slice with every degree increased by `by`.
    pub fn shifted(&self, by: i32, label: impl Into<String>) -> MixedComplexSlice {
        let shift = |m: &BTreeMap<i32, Matrix>| m.iter().map(|(&d, x)| (d + by, x.clone())).collect();
        MixedComplexSlice {
            label: label.into(),
            weight: self.weight,
            dims: self.dims.iter().map(|(&d, &n)| (d + by, n)).collect(),
            b: shift(&self.b),
            big_b: shift(&self.big_b),
        }
    }

    /// The mixed complex obtained by dualizing and negating degrees:
    /// `C'_e = (C_{-e})^*` with `b' = b^T` and `B' = B^T`.
    pub fn dual(&self, label: impl Into<String>) -> MixedComplexSlice {
        let dims: BTreeMap<i32, usize> = self.dims.iter().map(|(&d, &n)| (-d, n)).collect();
        let mut b = BTreeMap::new();
        let mut big_b = BTreeMap::new();
        for &d in self.dims.keys() {
            b.insert(-d, self.b(d + 1).transpose());
            big_b.insert(-d, self.big_b(d - 1).transpose());
        }
        MixedComplexSlice::new(label, self.weight, dims, b, big_b).expect("dual of a mixed complex is mixed")
    }
}

/// A range of `u`-powers `lo..=hi` kept in the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UWindow {
    pub lo: i32,
    pub hi: i32,
}

/// Block layout of `sum_i x_i u^i` in total degree `degree`: `x_i` has degree `degree + 2i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesLayout {
    pub degree: i32,
    pub blocks: Vec<(i32, usize, usize)>,
    pub total: usize,
}

impl SeriesLayout {
    fn new(slice: &MixedComplexSlice, degree: i32, w: UWindow) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in w.lo..=w.hi {
            let n = slice.dim(degree + 2 * i);
            if n > 0 {
                blocks.push((i, off, n));
                off += n;
            }
        }
        SeriesLayout { degree, blocks, total: off }
    }

    pub fn block(&self, i: i32) -> Option<(usize, usize)> {
        self.blocks.iter().find(|b| b.0 == i).map(|b| (b.1, b.2))
    }

    /// The `u^i` component of a vector in this layout (zero if absent).
    pub fn component(&self, v: &[Q], i: i32, dim: usize) -> Vec<Q> {
        match self.block(i) {
            Some((off, n)) => v[off..off + n].to_vec(),
            None => vec![Q::zero(); dim],
        }
    }
}

/// `b + uB` from degree `d` to `d - 1` on windowed series; `u^{hi+1}` terms are dropped.
fn series_differential(slice: &MixedComplexSlice, src: &SeriesLayout, dst: &SeriesLayout) -> Matrix {
    let mut m = Matrix::zeros(dst.total, src.total);
    for &(i, off, _) in &src.blocks {
        let d = src.degree + 2 * i;
        let mut place = |mat: Matrix, power: i32| {
            if let Some((toff, _)) = dst.block(power) {
                for (r, c, v) in mat.entries() {
                    m.set(toff + r, off + c, v.clone());
                }
            }
        };
        place(slice.b(d), i);
        place(slice.big_b(d), i + 1);
    }
    m
}

/// Homology of windowed series in one total degree.
#[derive(Clone, Debug)]
pub struct SeriesHomology {
    pub layout: SeriesLayout,
    pub presentation: HomologyPresentation,
}

pub fn series_homology(slice: &MixedComplexSlice, degree: i32, w: UWindow) -> Result<SeriesHomology, MixedError> {
    let above = SeriesLayout::new(slice, degree + 1, w);
    let here = SeriesLayout::new(slice, degree, w);
    let below = SeriesLayout::new(slice, degree - 1, w);
    let d_in = series_differential(slice, &above, &here);
    let d_out = series_differential(slice, &here, &below);
    Ok(SeriesHomology {
        presentation: HomologyPresentation::new(&d_in, &d_out)?,
        layout: here,
    })
}

/// Default truncation order: wide enough that every degree of the slice is exact.
pub fn default_truncation(slice: &MixedComplexSlice) -> u32 {
    match slice.degree_range() {
        Some((lo, hi)) => ((hi - lo) as u32).div_ceil(2) + 1,
        None => 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub truncation: u32,
    pub dims_n: BTreeMap<i32, usize>,
    pub dims_n_plus_1: BTreeMap<i32, usize>,
    pub reliable_from: i32,
    pub unstable_degrees: Vec<i32>,
}

/// Hochschild and negative cyclic homology of a slice with the maps `pi_*`, `beta` and `B`.
#[derive(Clone, Debug)]
pub struct MixedHomology {
    slice: MixedComplexSlice,
    truncation: u32,
    hh: BTreeMap<i32, HomologyPresentation>,
    nc: BTreeMap<i32, SeriesHomology>,
}

impl MixedHomology {
    /// Computes `HH` and `HC^-` (truncated at `u^N`) in every degree of the slice.
    pub fn new(slice: MixedComplexSlice, truncation: u32) -> Result<Self, MixedError> {
        assert!(truncation >= 1);
        let mut hh = BTreeMap::new();
        let mut nc = BTreeMap::new();
        if let Some((lo, hi)) = slice.degree_range() {
            let w = UWindow { lo: 0, hi: truncation as i32 };
            for d in lo..=hi {
                hh.insert(d, HomologyPresentation::new(&slice.b(d + 1), &slice.b(d))?);
                nc.insert(d, series_homology(&slice, d, w)?);
            }
            // beta lands one degree up; keep that degree available even when C is zero there.
            nc.insert(hi + 1, series_homology(&slice, hi + 1, w)?);
        }
        Ok(MixedHomology {
            slice,
            truncation,
            hh,
            nc,
        })
    }

    pub fn with_default_truncation(slice: MixedComplexSlice) -> Result<Self, MixedError> {
        let n = default_truncation(&slice);
        Self::new(slice, n)
    }

    pub fn slice(&self) -> &MixedComplexSlice {
        &self.slice
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.hh.keys().copied()
    }

    /// Degrees where `HC^-` is computed.
    pub fn nc_degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.nc.keys().copied()
    }

    pub fn hh(&self, d: i32) -> Option<&HomologyPresentation> {
        self.hh.get(&d)
    }

    pub fn nc(&self, d: i32) -> Option<&SeriesHomology> {
        self.nc.get(&d)
    }

    pub fn hh_dim(&self, d: i32) -> usize {
        self.hh.get(&d).map_or(0, |h| h.dim())
    }

    pub fn nc_dim(&self, d: i32) -> usize {
        self.nc.get(&d).map_or(0, |h| h.presentation.dim())
    }

    fn hh_or_err(&self, d: i32) -> Result<&HomologyPresentation, MixedError> {
        self.hh.get(&d).ok_or(MixedError::OutOfWindow(d))
    }

    fn nc_or_err(&self, d: i32) -> Result<&SeriesHomology, MixedError> {
        self.nc.get(&d).ok_or(MixedError::OutOfWindow(d))
    }

    /// `pi_*`: the `b`-class of the constant term.
    pub fn pi_star(&self, d: i32, class: &[Q]) -> Result<Vec<Q>, MixedError> {
        let nc = self.nc_or_err(d)?;
        let chain = nc.presentation.lift(class);
        let x0 = nc.layout.component(&chain, 0, self.slice.dim(d));
        match self.hh.get(&d) {
            Some(h) => Ok(h.reduce(&x0)?),
            None => Ok(Vec::new()),
        }
    }

    /// `pi_*` applied to a chain-level series (must be closed).
    pub fn pi_star_chain(&self, d: i32, chain: &[Q]) -> Result<Vec<Q>, MixedError> {
        let nc = self.nc_or_err(d)?;
        let x0 = nc.layout.component(chain, 0, self.slice.dim(d));
        Ok(self.hh_or_err(d)?.reduce(&x0)?)
    }

    /// `beta`: the class of `B(x)` as a constant series in degree `d + 1`.
    pub fn beta(&self, d: i32, class: &[Q]) -> Result<Vec<Q>, MixedError> {
        let x = self.hh_or_err(d)?.lift(class);
        self.beta_chain(d, &x)
    }

    /// `beta` on a `b`-cycle given at chain level.
    pub fn beta_chain(&self, d: i32, x: &[Q]) -> Result<Vec<Q>, MixedError> {
        let bx = self.slice.big_b(d).mul_vec(x)?;
        let target = self.nc_or_err(d + 1)?;
        let mut series = vec![Q::zero(); target.layout.total];
        if let Some((off, _)) = target.layout.block(0) {
            series[off..off + bx.len()].clone_from_slice(&bx);
        } else if !is_zero_vec(&bx) {
            return Err(MixedError::OutOfWindow(d + 1));
        }
        Ok(target.presentation.reduce(&series)?)
    }

    /// `B` induced on `HH`, from degree `d` to `d + 1`.
    pub fn big_b_on_hh(&self, d: i32, class: &[Q]) -> Result<Vec<Q>, MixedError> {
        let x = self.hh_or_err(d)?.lift(class);
        let bx = self.slice.big_b(d).mul_vec(&x)?;
        match self.hh.get(&(d + 1)) {
            Some(h) => Ok(h.reduce(&bx)?),
            None if is_zero_vec(&bx) => Ok(Vec::new()),
            None => Err(MixedError::OutOfWindow(d + 1)),
        }
    }

    fn matrix_from<F>(rows: usize, cols: usize, mut f: F) -> Result<Matrix, MixedError>
    where
        F: FnMut(&[Q]) -> Result<Vec<Q>, MixedError>,
    {
        let mut columns = Vec::with_capacity(cols);
        for j in 0..cols {
            let v = f(&crate::linalg::unit_vec(cols, j))?;
            debug_assert_eq!(v.len(), rows);
            columns.push(v);
        }
        Ok(Matrix::from_columns(rows, &columns))
    }

    pub fn pi_star_matrix(&self, d: i32) -> Result<Matrix, MixedError> {
        Self::matrix_from(self.hh_dim(d), self.nc_dim(d), |v| self.pi_star(d, v))
    }

    pub fn beta_matrix(&self, d: i32) -> Result<Matrix, MixedError> {
        Self::matrix_from(self.nc_dim(d + 1), self.hh_dim(d), |v| self.beta(d, v))
    }

    pub fn big_b_matrix(&self, d: i32) -> Result<Matrix, MixedError> {
        Self::matrix_from(self.hh_dim(d + 1), self.hh_dim(d), |v| self.big_b_on_hh(d, v))
    }

    /// Checks `beta pi_* = 0`, `pi_* beta = B` and `ker beta = im pi_*` in every degree.
    pub fn long_exact_sequence_report(&self) -> Result<LesReport, MixedError> {
        let mut rep = LesReport {
            label: self.slice.label.clone(),
            weight: self.slice.weight,
            ..Default::default()
        };
        for d in self.degrees().collect::<Vec<_>>() {
            let pi = self.pi_star_matrix(d)?;
            let beta = self.beta_matrix(d)?;
            let pi_up = if self.hh.contains_key(&(d + 1)) {
                self.pi_star_matrix(d + 1)?
            } else {
                Matrix::zeros(0, self.nc_dim(d + 1))
            };
            if !beta.mul(&pi)?.is_zero() {
                rep.beta_pi_failures.push(d);
            }
            if pi_up.mul(&beta)? != self.big_b_matrix(d)? {
                rep.pi_beta_failures.push(d);
            }
            if self.hh_dim(d) - beta.rank() != pi.rank() {
                rep.exactness_failures.push(d);
            }
            rep.degrees_checked += 1;
        }
        Ok(rep)
    }

    /// Compares `HC^-` dimensions for truncations `N` and `N + 1`.
    pub fn stabilization_report(&self) -> Result<StabilizationReport, MixedError> {
        let n = self.truncation;
        let mut dims_n = BTreeMap::new();
        let mut dims_n1 = BTreeMap::new();
        let mut unstable = Vec::new();
        let reliable_from = self.slice.degree_range().map_or(0, |(_, hi)| hi - 2 * n as i32);
        for &d in self.nc.keys() {
            let a = self.nc_dim(d);
            let b = series_homology(&self.slice, d, UWindow { lo: 0, hi: n as i32 + 1 })?
                .presentation
                .dim();
            dims_n.insert(d, a);
            dims_n1.insert(d, b);
            if a != b && d >= reliable_from {
                unstable.push(d);
            }
        }
        Ok(StabilizationReport {
            truncation: n,
            dims_n,
            dims_n_plus_1: dims_n1,
            reliable_from,
            unstable_degrees: unstable,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub label: String,
    pub weight: i64,
    pub basis_vectors: usize,
    pub identities_checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub label: String,
    pub weight: i64,
    pub degrees_checked: usize,
    pub beta_pi_failures: Vec<i32>,
    pub pi_beta_failures: Vec<i32>,
    pub exactness_failures: Vec<i32>,
}

impl LesReport {
    pub fn passed(&self) -> bool {
        self.beta_pi_failures.is_empty() && self.pi_beta_failures.is_empty() && self.exactness_failures.is_empty()
    }
}

/// Map on `HC^-` in degree `d` induced by a map of mixed complexes given in each chain degree.
pub fn induced_negative_cyclic_map<F>(src: &MixedHomology, dst: &MixedHomology, d: i32, mut f: F) -> Result<Matrix, MixedError>
where
    F: FnMut(i32) -> Option<Matrix>,
{
    let (s, t) = (src.nc_or_err(d)?, dst.nc_or_err(d)?);
    let mut columns = Vec::with_capacity(s.presentation.dim());
    for j in 0..s.presentation.dim() {
        let chain = s.presentation.lift(&crate::linalg::unit_vec(s.presentation.dim(), j));
        let mut image = vec![Q::zero(); t.layout.total];
        for &(i, off, n) in &s.layout.blocks {
            let x = &chain[off..off + n];
            if is_zero_vec(x) {
                continue;
            }
            let m = f(d + 2 * i).ok_or(MixedError::OutOfWindow(d + 2 * i))?;
            let y = m.mul_vec(x)?;
            match t.layout.block(i) {
                Some((toff, tn)) if tn == y.len() => image[toff..toff + tn].clone_from_slice(&y),
                Some(_) => return Err(MixedError::Shape { what: "induced map", degree: d + 2 * i }),
                None if is_zero_vec(&y) => {}
                None => return Err(MixedError::OutOfWindow(d + 2 * i)),
            }
        }
        columns.push(t.presentation.reduce(&image)?);
    }
    Ok(Matrix::from_columns(t.presentation.dim(), &columns))
}

/// Cyclic homology `HC_d` via the quotient complex, exact for bounded slices.
pub fn cyclic_homology(slice: &MixedComplexSlice, d: i32) -> Result<HomologyPresentation, MixedError> {
    let depth = match slice.degree_range() {
        Some((lo, hi)) => (hi - lo) / 2 + 1 + (d - lo).max(0) / 2,
        None => 0,
    };
    Ok(series_homology(slice, d, UWindow { lo: -depth, hi: 0 })?.presentation)
}

/// Periodic homology on the Laurent window `u^{-N}..u^N`.
///
/// Degrees closer than the slice height to either end of the window are
/// approximations; `PeriodicResult::reliable` marks them.
#[derive(Clone, Debug)]
pub struct PeriodicResult {
    pub presentation: HomologyPresentation,
    pub reliable: bool,
}

pub fn periodic_homology(slice: &MixedComplexSlice, d: i32, n: u32) -> Result<PeriodicResult, MixedError> {
    let n = n as i32;
    let presentation = series_homology(slice, d, UWindow { lo: -n, hi: n })?.presentation;
    let reliable = match slice.degree_range() {
        Some((lo, hi)) => d + 2 * n > hi && d - 2 * n < lo,
        None => true,
    };
    Ok(PeriodicResult { presentation, reliable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn zero_slice(dims: &[(i32, usize)]) -> MixedComplexSlice {
        MixedComplexSlice::new("zero", 0, dims.iter().copied().collect(), BTreeMap::new(), BTreeMap::new()).unwrap()
    }

    #[test]
    fn zero_differentials_negative_cyclic() {
        let s = zero_slice(&[(0, 2), (1, 1), (2, 3)]);
        let m = MixedHomology::new(s, 3).unwrap();
        assert_eq!(m.nc_dim(0), 2 + 3);
        assert_eq!(m.nc_dim(1), 1);
        assert_eq!(m.nc_dim(2), 3);
        assert!(m.long_exact_sequence_report().unwrap().passed());
    }

    #[test]
    fn one_dimensional_slice() {
        let s = zero_slice(&[(0, 1)]);
        assert_eq!(series_homology(&s, 0, UWindow { lo: 0, hi: 2 }).unwrap().presentation.dim(), 1);
        assert_eq!(series_homology(&s, -2, UWindow { lo: 0, hi: 2 }).unwrap().presentation.dim(), 1);
        assert_eq!(cyclic_homology(&s, 2).unwrap().dim(), 1);
        assert_eq!(cyclic_homology(&s, 1).unwrap().dim(), 0);
    }

    #[test]
    fn zero_complex_is_zero() {
        let s = zero_slice(&[]);
        assert_eq!(cyclic_homology(&s, 0).unwrap().dim(), 0);
        assert!(MixedHomology::new(s, 1).unwrap().degrees().next().is_none());
    }

    #[test]
    fn b_equals_identity_pair() {
        // C_0 = C_1 = k with B = 1: HH = k in both degrees, B acts as identity.
        let mut big_b = BTreeMap::new();
        big_b.insert(0, Matrix::from_i64(&[&[1]]));
        let s = MixedComplexSlice::new("pair", 1, [(0, 1), (1, 1)].into_iter().collect(), BTreeMap::new(), big_b)
            .unwrap();
        let m = MixedHomology::with_default_truncation(s).unwrap();
        assert_eq!(m.hh_dim(0), 1);
        assert_eq!(m.nc_dim(0), 0);
        assert_eq!(m.nc_dim(1), 1);
        assert_eq!(m.beta(0, &[q(1)]).unwrap(), vec![q(1)]);
        let rep = m.long_exact_sequence_report().unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(m.stabilization_report().unwrap().unstable_degrees.is_empty());
    }

    #[test]
    fn axiom_violation_is_reported() {
        let mut b = BTreeMap::new();
        b.insert(1, Matrix::from_i64(&[&[1]]));
        let mut big_b = BTreeMap::new();
        big_b.insert(0, Matrix::from_i64(&[&[1]]));
        let err = MixedComplexSlice::new("bad", 0, [(0, 1), (1, 1)].into_iter().collect(), b, big_b).unwrap_err();
        assert!(matches!(err, MixedError::Axiom { identity: "bB + Bb = 0", .. }));
    }

    #[test]
    fn dual_is_mixed() {
        let mut big_b = BTreeMap::new();
        big_b.insert(0, Matrix::from_i64(&[&[1, 0]]));
        let mut b = BTreeMap::new();
        b.insert(0, Matrix::zeros(0, 2));
        let s = MixedComplexSlice::new("s", 2, [(0, 2), (1, 1)].into_iter().collect(), b, big_b).unwrap();
        let d = s.dual("dual");
        assert_eq!(d.dim(-1), 1);
        assert_eq!(d.dim(0), 2);
    }
}
