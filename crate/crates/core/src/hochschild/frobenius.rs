//! Hochschild cohomology of a Frobenius algebra identified with the dual of its
//! Hochschild chains through `PD(F) = (-1)^{t(t+1)/2} eta o iota_F`, `eta(a) = <1, a>`.
//!
//! The normalizing sign makes `PD` a strict chain map, `PD o d = b^T o PD`.

use std::collections::BTreeMap;

use num::Zero;

use super::{
    cap, chain_slice, coboundary, cochain_basis, cochain_degree, cup, gerstenhaber_bracket, Chain, ChainSlice,
    Cochain, CochainKey, HochError,
};
use crate::algebra::{Element, FrobeniusPairing, GradedAlgebra};
use crate::calculus::{CalculusError, CalculusModel, PieceKey};
use crate::linalg::{HomologyPresentation, IndexedBasis, Matrix, Q};
use crate::mixed::MixedHomology;

struct Piece {
    basis: IndexedBasis<CochainKey>,
    cohomology: HomologyPresentation,
    pd: Matrix,
    pd_inv: Matrix,
}

pub struct FrobeniusHochschild {
    alg: GradedAlgebra,
    pairing: FrobeniusPairing,
    top_weight: i64,
    top_degree: i32,
    max_weight: u32,
    chains: BTreeMap<i64, ChainSlice>,
    mixed: BTreeMap<i64, MixedHomology>,
    pieces: BTreeMap<PieceKey, Piece>,
}

impl std::fmt::Debug for FrobeniusHochschild {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrobeniusHochschild")
            .field("max_weight", &self.max_weight)
            .field("pieces", &self.pieces.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// All cochains of cohomological degree `t` and weight shift `s` with arity at most `qmax`.
pub fn cochain_basis_by_degree(alg: &GradedAlgebra, t: i32, s: i64, qmax: usize) -> Result<IndexedBasis<CochainKey>, HochError> {
    let mut keys = Vec::new();
    for q in 0..=qmax {
        keys.extend(
            cochain_basis(alg, q, s)?
                .keys()
                .iter()
                .filter(|k| cochain_degree(alg, k) == t)
                .cloned(),
        );
    }
    Ok(IndexedBasis::new(keys))
}

fn coboundary_matrix(
    alg: &GradedAlgebra,
    from: &IndexedBasis<CochainKey>,
    to: &IndexedBasis<CochainKey>,
) -> Result<Matrix, HochError> {
    let mut err = None;
    let m = from.matrix_of(to, |k| {
        coboundary(alg, &Cochain::basis(k.clone())).unwrap_or_else(|e| {
            err = Some(e);
            Cochain::zero()
        })
    });
    err.map_or(Ok(m), Err)
}

/// `dim HH^t` at weight shift `s` from the bar cochains of arity at most `qmax`.
///
/// Only meaningful when every cochain of degree `t - 1`, `t`, `t + 1` has arity
/// at most `qmax`, as for algebras whose degree is minus their weight.
pub fn bar_cohomology_dim(alg: &GradedAlgebra, t: i32, s: i64, qmax: usize) -> Result<usize, HochError> {
    let prev = cochain_basis_by_degree(alg, t - 1, s, qmax)?;
    let here = cochain_basis_by_degree(alg, t, s, qmax)?;
    let next = cochain_basis_by_degree(alg, t + 1, s, qmax + 1)?;
    let d_in = coboundary_matrix(alg, &prev, &here)?;
    let d_out = coboundary_matrix(alg, &here, &next)?;
    Ok(HomologyPresentation::new(&d_in, &d_out).map_err(crate::mixed::MixedError::from)?.dim())
}

fn eta(alg: &GradedAlgebra, pairing: &FrobeniusPairing, c: &Chain) -> Q {
    let unit = Element::basis(alg.unit());
    let mut s = Q::zero();
    for (k, v) in c.iter() {
        if k.len() == 1 {
            s += v * pairing.pair(&unit, &Element::basis(k[0]));
        }
    }
    s
}

/// Basis 1-chains `(a_0, a_1)` on which `δη = η ∘ b` does not vanish.
pub fn eta_coboundary_defects(alg: &GradedAlgebra, pairing: &FrobeniusPairing) -> Result<Vec<(usize, usize)>, HochError> {
    let mut out = Vec::new();
    for a in 0..alg.dim() {
        for x in alg.augmentation() {
            if !eta(alg, pairing, &super::boundary_b_basis(alg, &[a, x])?).is_zero() {
                out.push((a, x));
            }
        }
    }
    Ok(out)
}

impl FrobeniusHochschild {
    /// Builds chain slices of weight `0..=max_weight` and the cochain pieces dual to them.
    pub fn new(alg: GradedAlgebra, pairing: FrobeniusPairing, max_weight: u32) -> Result<Self, HochError> {
        let top = (0..alg.dim()).max_by_key(|&i| alg.weight(i)).unwrap();
        let top_weight = alg.weight(top) as i64;
        let top_degree = alg.degree(top);
        let mut chains = BTreeMap::new();
        let mut mixed = BTreeMap::new();
        for w in 0..=max_weight {
            let cs = chain_slice(&alg, w)?;
            let dual = cs.mixed.dual(format!("dual hochschild chains, weight {w}"));
            mixed.insert(w as i64, MixedHomology::with_default_truncation(dual)?);
            chains.insert(w as i64, cs);
        }
        let mut me = FrobeniusHochschild {
            alg,
            pairing,
            top_weight,
            top_degree,
            max_weight,
            chains,
            mixed,
            pieces: BTreeMap::new(),
        };
        let mut bases = BTreeMap::new();
        for (&w, cs) in &me.chains {
            let s = top_weight - w;
            let qmax = w as usize + 1;
            for &d in cs.bases.keys() {
                for t in [d - top_degree - 1, d - top_degree, d - top_degree + 1] {
                    if let std::collections::btree_map::Entry::Vacant(e) = bases.entry((t, s)) {
                        e.insert(cochain_basis_by_degree(&me.alg, t, s, qmax)?);
                    }
                }
            }
        }
        for (&w, cs) in &me.chains {
            let s = top_weight - w;
            for (&d, chain_basis) in &cs.bases {
                let t = d - top_degree;
                let basis = bases[&(t, s)].clone();
                let d_in = coboundary_matrix(&me.alg, &bases[&(t - 1, s)], &basis)?;
                let d_out = coboundary_matrix(&me.alg, &basis, &bases[&(t + 1, s)])?;
                let cohomology = HomologyPresentation::new(&d_in, &d_out).map_err(crate::mixed::MixedError::from)?;
                let eps = crate::algebra::sign((t * (t + 1) / 2).rem_euclid(2) == 1);
                let mut pd = Matrix::zeros(chain_basis.len(), basis.len());
                for (j, fk) in basis.keys().iter().enumerate() {
                    let f = Cochain::basis(fk.clone());
                    for (i, ck) in chain_basis.keys().iter().enumerate() {
                        let v = eta(&me.alg, &me.pairing, &cap(&me.alg, &f, &Chain::basis(ck.clone()))?);
                        if !v.is_zero() {
                            pd.set(i, j, v * &eps);
                        }
                    }
                }
                let pd_inv = pd.inverse().ok_or(HochError::ModeMismatch("duality map is not invertible"))?;
                me.pieces.insert((t, s), Piece { basis, cohomology, pd, pd_inv });
            }
        }
        Ok(me)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn chain_slice(&self, w: i64) -> Option<&ChainSlice> {
        self.chains.get(&w)
    }

    pub fn cochain_basis(&self, k: PieceKey) -> Option<&IndexedBasis<CochainKey>> {
        self.pieces.get(&k).map(|p| &p.basis)
    }

    pub fn pd_matrix(&self, k: PieceKey) -> Option<&Matrix> {
        self.pieces.get(&k).map(|p| &p.pd)
    }

    /// Cohomology dimension of `HH^t` at weight shift `s`.
    pub fn cohomology_dim(&self, k: PieceKey) -> usize {
        self.pieces.get(&k).map_or(0, |p| p.cohomology.dim())
    }

    fn cochain(&self, k: PieceKey, x: &[Q]) -> Result<Cochain, CalculusError> {
        let p = self.pieces.get(&k).ok_or_else(|| CalculusError::OutOfWindow(format!("{k:?}")))?;
        Ok(p.basis.combination(x))
    }

    fn coords(&self, k: PieceKey, c: &Cochain) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError> {
        match self.pieces.get(&k) {
            Some(p) => p
                .basis
                .coords(c)
                .map(|v| Some((k, v)))
                .ok_or_else(|| CalculusError::Model(format!("cochain outside piece {k:?}"))),
            None => Ok(None),
        }
    }
}

fn hoch(e: HochError) -> CalculusError {
    CalculusError::Model(e.to_string())
}

impl CalculusModel for FrobeniusHochschild {
    fn label(&self) -> String {
        format!("hochschild cohomology, weights <= {}", self.max_weight)
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
        let c = cup(&self.alg, &self.cochain(a, x)?, &self.cochain(b, y)?).map_err(hoch)?;
        self.coords(k, &c)
    }

    fn bracket(&self, a: PieceKey, x: &[Q], b: PieceKey, y: &[Q]) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError> {
        let k = (a.0 + b.0 - 1, a.1 + b.1);
        if !self.pieces.contains_key(&k) {
            return Ok(None);
        }
        let (f, g) = (self.cochain(a, x)?, self.cochain(b, y)?);
        let mut acc = Cochain::zero();
        for (fk, fc) in f.iter() {
            for (gk, gc) in g.iter() {
                let br = gerstenhaber_bracket(&self.alg, &Cochain::basis(fk.clone()), &Cochain::basis(gk.clone()));
                acc.add_scaled(&(fc * gc), &br);
            }
        }
        self.coords(k, &acc)
    }

    fn dual_location(&self, k: PieceKey) -> (i64, i32) {
        (self.top_weight - k.1, -(k.0 + self.top_degree))
    }

    fn piece_at(&self, w: i64, e: i32) -> PieceKey {
        (-e - self.top_degree, self.top_weight - w)
    }

    fn pd(&self, k: PieceKey, x: &[Q]) -> Result<Vec<Q>, CalculusError> {
        let p = self.pieces.get(&k).ok_or_else(|| CalculusError::OutOfWindow(format!("{k:?}")))?;
        Ok(p.pd.mul_vec(x)?)
    }

    fn pd_inverse(&self, w: i64, e: i32, x: &[Q]) -> Result<Vec<Q>, CalculusError> {
        let k = self.piece_at(w, e);
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
