//! Identifications between the Poisson calculus of `k[x1..xn]` with a quadratic
//! `π` and the Frobenius Poisson calculus of `Λ(ξ1..ξn)` with `π^!`.
//!
//! On polyvectors `Φ(x_i) = ∂/∂ξ_i`, `Φ(∂/∂x_i) = ξ_i`, scaled by `(-1)^t` in
//! polyvector degree `t`. On forms `Ψ = PD^! ∘ Φ ∘ PD^{-1}`, which sends
//! `x^α dx_B` to `±α!` times the functional dual to `ξ_B dξ^α`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use super::{BaseKind, Mono, PoissonCalculus, PoissonError, SuperPoly};
use crate::algebra::sign;
use crate::calculus::{CalculusModel, PieceKey};
use crate::linalg::{Matrix, Q};

/// `Φ` on a single polyvector of degree `t`.
pub fn phi_polyvector(n: usize, p: &SuperPoly) -> SuperPoly {
    p.map_linear(|m: &Mono| {
        let t: u32 = m[n..].iter().sum();
        let mut r = vec![0; 2 * n];
        r[..n].copy_from_slice(&m[n..]);
        r[n..].copy_from_slice(&m[..n]);
        SuperPoly::single(r, sign(t % 2 == 1))
    })
}

/// The dual form `ξ_B dξ^α` matched with `x^α dx_B`, and the factor `α!`.
pub fn literal_form_image(n: usize, m: &Mono) -> (Mono, Q) {
    let mut r = vec![0; 2 * n];
    r[..n].copy_from_slice(&m[n..]);
    r[n..].copy_from_slice(&m[..n]);
    let mut fact = Q::one();
    for &e in &m[..n] {
        for k in 2..=e {
            fact *= Q::from_integer(k.into());
        }
    }
    (r, fact)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentificationReport {
    pub pieces: usize,
    pub coboundary_checked: usize,
    pub boundary_checked: usize,
    pub de_rham_checked: usize,
    pub literal_checked: usize,
    pub failures: Vec<String>,
}

impl IdentificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct KoszulPoissonIdentification {
    n: usize,
    phi: BTreeMap<PieceKey, Matrix>,
    psi: BTreeMap<(i64, i32), Matrix>,
    report: IdentificationReport,
}

impl KoszulPoissonIdentification {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Φ` from the piece `k` of the polynomial side to `(k.0, -k.1)`.
    pub fn phi(&self, k: PieceKey) -> Option<&Matrix> {
        self.phi.get(&k)
    }

    /// `Ψ` on forms of weight `w` and degree `d`, into the dual slice of the same weight and degree.
    pub fn psi(&self, w: i64, d: i32) -> Option<&Matrix> {
        self.psi.get(&(w, d))
    }

    pub fn psi_blocks(&self) -> &BTreeMap<(i64, i32), Matrix> {
        &self.psi
    }

    pub fn report(&self) -> &IdentificationReport {
        &self.report
    }
}

fn same_up_to(a: &Matrix, b: &Matrix) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && a.sub(b).is_ok_and(|d| d.is_zero())
}

/// Builds `Φ` and `Ψ` over the common window and verifies that they commute with
/// `δ`, `∂` and `d` and match the literal monomial correspondence.
pub fn koszul_poisson_identification(
    primal: &PoissonCalculus,
    dual: &PoissonCalculus,
) -> Result<KoszulPoissonIdentification, PoissonError> {
    let n = primal.base().n();
    if primal.base().kind() != BaseKind::Polynomial || dual.base().kind() != BaseKind::Exterior || dual.base().n() != n {
        return Err(PoissonError::Malformed("expected k[x1..xn] and Λ(ξ1..ξn) with equal n".into()));
    }
    if phi_polyvector(n, primal.pi()) != *dual.pi() {
        return Err(PoissonError::Malformed("bivectors do not correspond".into()));
    }
    let mut rep = IdentificationReport::default();
    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    for k in primal.pieces() {
        let kd = (k.0, -k.1);
        let (Some(src), Some(dst)) = (primal.piece_basis(k), dual.piece_basis(kd)) else { continue };
        let f = src.matrix_of(dst, |m| phi_polyvector(n, &SuperPoly::basis(m.clone())));
        let (pa, pd) = (primal.pd_matrix(k).expect("piece"), dual.pd_matrix(kd).expect("piece"));
        let pa_inv = pa
            .inverse()
            .ok_or_else(|| PoissonError::NotVolume(format!("piece {k:?}")))?;
        let (w, d) = primal.dual_location(k);
        psi.insert((w, d), pd.mul(&f)?.mul(&pa_inv)?);
        phi.insert(k, f);
        rep.pieces += 1;
    }
    for (&k, f) in &phi {
        let next = (k.0 + 1, k.1);
        let Some(fnext) = phi.get(&next) else { continue };
        let lhs = fnext.mul(&primal.coboundary_matrix(k))?;
        let rhs = dual.coboundary_matrix((k.0, -k.1)).mul(f)?;
        rep.coboundary_checked += 1;
        if !same_up_to(&lhs, &rhs) {
            rep.failures.push(format!("Φ δ ≠ δ Φ on {k:?}"));
        }
    }
    for (&(w, d), p) in &psi {
        let (sa, sd) = (primal.slice(w).expect("slice"), dual.slice(w).expect("slice"));
        if let Some(below) = psi.get(&(w, d - 1)) {
            rep.boundary_checked += 1;
            if !same_up_to(&below.mul(&sa.b(d))?, &sd.b(d).mul(p)?) {
                rep.failures.push(format!("Ψ ∂ ≠ ∂ Ψ at weight {w}, degree {d}"));
            }
        }
        if let Some(above) = psi.get(&(w, d + 1)) {
            rep.de_rham_checked += 1;
            if !same_up_to(&above.mul(&sa.big_b(d))?, &sd.big_b(d).mul(p)?) {
                rep.failures.push(format!("Ψ d ≠ d Ψ at weight {w}, degree {d}"));
            }
        }
        let src = super::form_piece(primal.base(), w, d as i64);
        let dst = super::form_piece(dual.base(), w, w - d as i64);
        for (j, m) in src.keys().iter().enumerate() {
            let (img, fact) = literal_form_image(n, m);
            let col = p.column(j);
            rep.literal_checked += 1;
            let ok = match dst.position(&img) {
                Some(i) => {
                    let abs = if col[i] < Q::zero() { -col[i].clone() } else { col[i].clone() };
                    abs == fact && col.iter().enumerate().all(|(r, x)| r == i || x.is_zero())
                }
                None => false,
            };
            if !ok {
                rep.failures.push(format!("Ψ is not the literal map on {}", primal.base().display_form(&SuperPoly::basis(m.clone()))));
            }
        }
    }
    Ok(KoszulPoissonIdentification { n, phi, psi, report: rep })
}
