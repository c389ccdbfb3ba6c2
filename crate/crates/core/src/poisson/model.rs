//! Poisson cohomology as a calculus with duality.
//!
//! On `k[x1..xn]` the volume form is `η = dx1∧...∧dxn` and `PD(P) = ε(t) ι_P η`
//! lands in the mixed complex `(Ω, ∂, d)`. On `Λ(ξ1..ξn)` the volume is the
//! functional `η^!` reading the coefficient of `ξ1...ξn`, and
//! `PD(P) = η^! ∘ ι_P` lands in the dual of `(Ω(A^!), ∂^!, d)`, graded by the
//! number of `ξ` in the dual form so that both sides place `P` in degree `n - t`.
//! With `ε(t) = (-1)^{t(t+1)/2}` both are strict chain maps for unimodular `π`.

use std::collections::BTreeMap;

use num::Zero;

use super::{BaseKind, Mono, PoissonBase, PoissonError, SuperPoly};
use crate::algebra::sign;
use crate::calculus::{CalculusError, CalculusModel, PieceKey};
use crate::linalg::{HomologyPresentation, IndexedBasis, Matrix, Q};
use crate::mixed::{MixedComplexSlice, MixedError, MixedHomology};

struct Piece {
    basis: IndexedBasis<Mono>,
    cohomology: HomologyPresentation,
    pd: Matrix,
    pd_inv: Matrix,
}

pub struct PoissonCalculus {
    base: PoissonBase,
    pi: SuperPoly,
    max_weight: u32,
    slices: BTreeMap<i64, MixedComplexSlice>,
    mixed: BTreeMap<i64, MixedHomology>,
    pieces: BTreeMap<PieceKey, Piece>,
}

impl std::fmt::Debug for PoissonCalculus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoissonCalculus")
            .field("kind", &self.base.kind())
            .field("n", &self.base.n())
            .field("pi", &self.base.display_vector(&self.pi))
            .field("max_weight", &self.max_weight)
            .finish()
    }
}

fn mixed_err(e: MixedError) -> PoissonError {
    PoissonError::Malformed(e.to_string())
}

/// Polyvectors of a piece `(t, s)`.
pub fn piece_basis(base: &PoissonBase, t: i32, s: i64) -> IndexedBasis<Mono> {
    let n = base.n() as i32;
    if t < 0 || t > n {
        return IndexedBasis::new(Vec::new());
    }
    let (coords, derivs) = match base.kind() {
        BaseKind::Polynomial => (s + t as i64, t as i64),
        BaseKind::Exterior => (t as i64, t as i64 - s),
    };
    if coords < 0 || derivs < 0 {
        return IndexedBasis::new(Vec::new());
    }
    IndexedBasis::new(base.vector_basis(coords as u32, derivs as u32))
}

/// Forms of weight `w` (coordinates plus differentials) with `k` differentials.
pub fn form_piece(base: &PoissonBase, w: i64, k: i64) -> IndexedBasis<Mono> {
    if w < 0 || k < 0 || k > w {
        return IndexedBasis::new(Vec::new());
    }
    IndexedBasis::new(base.form_basis(w as u32, k as u32))
}

/// Matrix of `ω ↦ f(ω)` between form pieces.
fn form_matrix(src: &IndexedBasis<Mono>, dst: &IndexedBasis<Mono>, f: impl Fn(&SuperPoly) -> SuperPoly) -> Matrix {
    src.matrix_of(dst, |m| f(&SuperPoly::basis(m.clone())))
}

impl PoissonCalculus {
    /// Builds the model for a weight-homogeneous quadratic Poisson bivector with forms of weight `<= max_weight`.
    ///
    /// Fails with `NotPoisson` if `[π, π] ≠ 0` and `NotVolume` if the duality is singular.
    pub fn new(base: PoissonBase, pi: SuperPoly, max_weight: u32) -> Result<Self, PoissonError> {
        for m in pi.keys() {
            if base.coordinate_degree(m) != 2 || base.vector_degree(m) != 2 {
                return Err(PoissonError::Malformed("bivector must be quadratic".into()));
            }
        }
        let jac = base.schouten(&pi, &pi);
        if !jac.is_zero() {
            return Err(PoissonError::NotPoisson(base.display_vector(&jac)));
        }
        let mut me = PoissonCalculus {
            base,
            pi,
            max_weight,
            slices: BTreeMap::new(),
            mixed: BTreeMap::new(),
            pieces: BTreeMap::new(),
        };
        for w in 0..=max_weight as i64 {
            let slice = me.form_slice(w)?;
            let target = match me.base.kind() {
                BaseKind::Polynomial => slice,
                BaseKind::Exterior => {
                    let label = format!("dual poisson forms, weight {w}");
                    slice.dual(label.clone()).shifted(w as i32, label)
                }
            };
            me.mixed.insert(w, MixedHomology::with_default_truncation(target.clone()).map_err(mixed_err)?);
            me.slices.insert(w, target);
        }
        let n = me.base.n() as i32;
        let mut keys = Vec::new();
        for w in 0..=max_weight as i64 {
            for t in 0..=n {
                let s = match me.base.kind() {
                    BaseKind::Polynomial => w - n as i64,
                    BaseKind::Exterior => n as i64 - w,
                };
                let (_, d) = me.location(t, s);
                if me.slices[&w].dim(d) > 0 {
                    keys.push((t, s));
                }
            }
        }
        for (t, s) in keys {
            let piece = me.build_piece(t, s)?;
            me.pieces.insert((t, s), piece);
        }
        Ok(me)
    }

    /// Forms slice of weight `w`: `(Ω_w, ∂, d)` graded by number of differentials.
    fn form_slice(&self, w: i64) -> Result<MixedComplexSlice, PoissonError> {
        let top = w.min(match self.base.kind() {
            BaseKind::Polynomial => self.base.n() as i64,
            BaseKind::Exterior => w,
        });
        let pieces: BTreeMap<i64, IndexedBasis<Mono>> = (0..=top).map(|k| (k, form_piece(&self.base, w, k))).collect();
        let mut dims = BTreeMap::new();
        let mut b = BTreeMap::new();
        let mut big_b = BTreeMap::new();
        let empty = IndexedBasis::new(Vec::new());
        for (&k, basis) in &pieces {
            dims.insert(k as i32, basis.len());
            let below = pieces.get(&(k - 1)).unwrap_or(&empty);
            let above = pieces.get(&(k + 1)).unwrap_or(&empty);
            b.insert(k as i32, form_matrix(basis, below, |x| self.base.poisson_boundary(&self.pi, x)));
            big_b.insert(k as i32, form_matrix(basis, above, |x| self.base.de_rham(x)));
        }
        let label = match self.base.kind() {
            BaseKind::Polynomial => format!("poisson forms, weight {w}"),
            BaseKind::Exterior => format!("dual poisson forms, weight {w}"),
        };
        MixedComplexSlice::new(label, w, dims, b, big_b).map_err(mixed_err)
    }

    /// `(weight, degree)` in the mixed complex of the piece `(t, s)`.
    fn location(&self, t: i32, s: i64) -> (i64, i32) {
        let n = self.base.n() as i32;
        match self.base.kind() {
            BaseKind::Polynomial => (s + n as i64, n - t),
            BaseKind::Exterior => (n as i64 - s, n - t),
        }
    }

    /// Number of differentials of the forms paired with the piece `(t, s)`.
    fn form_degree_of(&self, t: i32, s: i64) -> i64 {
        match self.base.kind() {
            BaseKind::Polynomial => (self.base.n() as i32 - t) as i64,
            BaseKind::Exterior => t as i64 - s,
        }
    }

    fn delta_matrix(&self, src: &IndexedBasis<Mono>, dst: &IndexedBasis<Mono>) -> Matrix {
        src.matrix_of(dst, |m| self.base.poisson_coboundary(&self.pi, &SuperPoly::basis(m.clone())))
    }

    /// The volume used by the duality.
    pub fn volume(&self) -> SuperPoly {
        let n = self.base.n();
        let mut m = vec![0; 2 * n];
        match self.base.kind() {
            BaseKind::Polynomial => m[n..].iter_mut().for_each(|e| *e = 1),
            BaseKind::Exterior => m[..n].iter_mut().for_each(|e| *e = 1),
        }
        SuperPoly::basis(m)
    }

    /// Unnormalized duality on a single polyvector, as coordinates over the forms of the target piece.
    pub fn raw_pd(&self, p: &SuperPoly, forms: &IndexedBasis<Mono>) -> Vec<Q> {
        match self.base.kind() {
            BaseKind::Polynomial => {
                let img = self.base.contract(p, &self.volume());
                forms.coords(&img).expect("contraction of the volume stays in its piece")
            }
            BaseKind::Exterior => {
                let top = self.volume();
                let top_key = top.keys().next().expect("volume is a monomial").clone();
                forms
                    .keys()
                    .iter()
                    .map(|w| self.base.contract(p, &SuperPoly::basis(w.clone())).coeff(&top_key))
                    .collect()
            }
        }
    }

    fn build_piece(&self, t: i32, s: i64) -> Result<Piece, PoissonError> {
        let basis = piece_basis(&self.base, t, s);
        let d_in = self.delta_matrix(&piece_basis(&self.base, t - 1, s), &basis);
        let d_out = self.delta_matrix(&basis, &piece_basis(&self.base, t + 1, s));
        let cohomology =
            HomologyPresentation::new(&d_in, &d_out).map_err(|e| PoissonError::Malformed(e.to_string()))?;
        let (w, _) = self.location(t, s);
        let forms = form_piece(&self.base, w, self.form_degree_of(t, s));
        let eps = match self.base.kind() {
            BaseKind::Polynomial => sign((t * (t + 1) / 2).rem_euclid(2) == 1),
            BaseKind::Exterior => sign(false),
        };
        let mut pd = Matrix::zeros(forms.len(), basis.len());
        for (j, m) in basis.keys().iter().enumerate() {
            for (i, v) in self.raw_pd(&SuperPoly::basis(m.clone()), &forms).into_iter().enumerate() {
                if !v.is_zero() {
                    pd.set(i, j, v * &eps);
                }
            }
        }
        let pd_inv = pd
            .inverse()
            .ok_or_else(|| PoissonError::NotVolume(format!("piece ({t}, {s})")))?;
        Ok(Piece { basis, cohomology, pd, pd_inv })
    }

    pub fn base(&self) -> &PoissonBase {
        &self.base
    }

    pub fn pi(&self) -> &SuperPoly {
        &self.pi
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn slice(&self, w: i64) -> Option<&MixedComplexSlice> {
        self.slices.get(&w)
    }

    pub fn piece_basis(&self, k: PieceKey) -> Option<&IndexedBasis<Mono>> {
        self.pieces.get(&k).map(|p| &p.basis)
    }

    pub fn pd_matrix(&self, k: PieceKey) -> Option<&Matrix> {
        self.pieces.get(&k).map(|p| &p.pd)
    }

    pub fn cohomology_dim(&self, k: PieceKey) -> usize {
        self.pieces.get(&k).map_or(0, |p| p.cohomology.dim())
    }

    /// Matrix of `δ` from piece `k` to `(k.0 + 1, k.1)`.
    pub fn coboundary_matrix(&self, k: PieceKey) -> Matrix {
        self.delta_matrix(&piece_basis(&self.base, k.0, k.1), &piece_basis(&self.base, k.0 + 1, k.1))
    }

    fn element(&self, k: PieceKey, x: &[Q]) -> Result<SuperPoly, CalculusError> {
        let p = self.pieces.get(&k).ok_or_else(|| CalculusError::OutOfWindow(format!("{k:?}")))?;
        Ok(p.basis.combination(x))
    }

    fn coords(&self, k: PieceKey, v: &SuperPoly) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError> {
        match self.pieces.get(&k) {
            Some(p) => p
                .basis
                .coords(v)
                .map(|c| Some((k, c)))
                .ok_or_else(|| CalculusError::Model(format!("polyvector outside piece {k:?}"))),
            None => Ok(None),
        }
    }
}

impl CalculusModel for PoissonCalculus {
    fn label(&self) -> String {
        let side = match self.base.kind() {
            BaseKind::Polynomial => "poisson cohomology",
            BaseKind::Exterior => "frobenius poisson cohomology",
        };
        format!("{side}, n = {}, weights <= {}", self.base.n(), self.max_weight)
    }

    fn pieces(&self) -> Vec<PieceKey> {
        self.pieces.keys().copied().collect()
    }

    fn cohomology(&self, k: PieceKey) -> Option<&HomologyPresentation> {
        self.pieces.get(&k).map(|p| &p.cohomology)
    }

    fn cup(&self, a: PieceKey, x: &[Q], b: PieceKey, y: &[Q]) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError> {
        let k = (a.0 + b.0, a.1 + b.1);
        if !self.pieces.contains_key(&k) {
            return Ok(None);
        }
        let v = self.base.wedge(&self.element(a, x)?, &self.element(b, y)?);
        self.coords(k, &v)
    }

    fn bracket(&self, a: PieceKey, x: &[Q], b: PieceKey, y: &[Q]) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError> {
        let k = (a.0 + b.0 - 1, a.1 + b.1);
        if !self.pieces.contains_key(&k) {
            return Ok(None);
        }
        let v = self.base.schouten(&self.element(a, x)?, &self.element(b, y)?);
        self.coords(k, &v)
    }

    fn dual_location(&self, k: PieceKey) -> (i64, i32) {
        self.location(k.0, k.1)
    }

    fn piece_at(&self, w: i64, d: i32) -> PieceKey {
        let n = self.base.n() as i32;
        match self.base.kind() {
            BaseKind::Polynomial => (n - d, w - n as i64),
            BaseKind::Exterior => (n - d, n as i64 - w),
        }
    }

    fn pd(&self, k: PieceKey, x: &[Q]) -> Result<Vec<Q>, CalculusError> {
        let p = self.pieces.get(&k).ok_or_else(|| CalculusError::OutOfWindow(format!("{k:?}")))?;
        Ok(p.pd.mul_vec(x)?)
    }

    fn pd_inverse(&self, w: i64, d: i32, x: &[Q]) -> Result<Vec<Q>, CalculusError> {
        let k = self.piece_at(w, d);
        let p = self.pieces.get(&k).ok_or_else(|| CalculusError::OutOfWindow(format!("{k:?}")))?;
        Ok(p.pd_inv.mul_vec(x)?)
    }

    fn mixed(&self, w: i64) -> Option<&MixedHomology> {
        self.mixed.get(&w)
    }

    fn weights(&self) -> Vec<i64> {
        self.mixed.keys().copied().collect()
    }
}
